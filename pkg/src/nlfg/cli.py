"""Command-line front end: ``nlfg {gen,dist,compare,lc,oracle,primitivity}``.

Exit codes: 0 success / all classes match, 1 usage or validation error,
2 verification mismatch, 3 desk-scale bound exceeded.
"""

from __future__ import annotations

import argparse
import copy
import csv
import io
import json
import sys
from pathlib import Path

from . import oracle
from .analysis import berlekamp_massey, compare_schemes, component_sequences, default_register, \
    measure_distribution, reconcile
from .config import RunManifest, generator_from_json, generator_to_json, is_manifest, spec_from_json
from .errors import BoundExceededError, NlfgError, SpecificationError
from .generator import MODES, NlfgGenerator, TapAssembly, generate
from .gf import FieldSpec, GaloisField, Poly, is_primitive, prime_power
from .oracle import CountParams
from .registers import DEFAULT_MAX_STATES, as_sigma

EXIT_OK, EXIT_USAGE, EXIT_MISMATCH, EXIT_BOUND = 0, 1, 2, 3
FORMATS = ("text", "json", "csv")

# command-level knobs recorded in (and replayed from) a manifest
_OPTION_KEYS = {
    "gen": ("count", "format"),
    "dist": ("format", "max_states", "threads", "oracle_m"),
    "compare": ("format", "max_states", "threads", "no_measure", "q", "p", "n", "r",
                "L", "m", "inner_poly", "outer_poly"),
    "lc": ("format", "length", "source", "stdin_q"),
    "oracle": ("format", "formula", "q", "L", "m", "r", "kappa"),
    "primitivity": ("format", "poly", "p", "n", "q", "r", "inner_poly", "outer_poly", "over"),
}
_DEFAULTS = {"count": 10, "format": "text", "max_states": DEFAULT_MAX_STATES, "threads": 1,
             "source": "nlfg", "stdin_q": 2, "over": "base", "r": None, "no_measure": False}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _field_flags(p: argparse.ArgumentParser):
    g = p.add_argument_group("field")
    g.add_argument("--p", type=int, help="characteristic")
    g.add_argument("--n", type=int, help="degree of GF(q) over GF(p)")
    g.add_argument("--q", type=int, help="field order q = p^n (alternative to --p/--n)")
    g.add_argument("--r", type=int, help="word width")
    g.add_argument("--inner-poly", help="primitive polynomial defining GF(q)")
    g.add_argument("--outer-poly", help="primitive polynomial over GF(q) defining GF(q^r)")


def _generator_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", help="generator JSON, JSON report or run manifest")
    _field_flags(p)
    g = p.add_argument_group("register / assembly")
    g.add_argument("--L", type=int, help="number of delay blocks")
    g.add_argument("--char-poly", help="characteristic polynomial of a scalar LFSR")
    g.add_argument("--g", dest="g_poly", help="primitive polynomial over GF(q^r) for a sigma-LFSR")
    g.add_argument("--seed", help="stacked initial state, comma separated GF(q) codes")
    g.add_argument("--m", type=int, help="number of multipliers (default pairs)")
    g.add_argument("--pairs", help='tap pairs, e.g. "0,1;2,3"')
    g.add_argument("--mode", choices=MODES)


def _io_flags(p: argparse.ArgumentParser, plot: bool = False):
    p.add_argument("--format", choices=FORMATS)
    p.add_argument("--manifest", help="write a run manifest to this file")
    if plot:
        p.add_argument("--plot", help="render a figure to this file (png, pdf, svg)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nlfg", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {_version()}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="emit NLFG output symbols")
    _generator_flags(p)
    p.add_argument("--count", type=int)
    _io_flags(p)

    p = sub.add_parser("dist", help="full-period distribution reconciled with the closed forms")
    _generator_flags(p)
    p.add_argument("--max-states", type=int)
    p.add_argument("--threads", type=int)
    p.add_argument("--oracle-m", type=int, help="reconcile against this m instead (negative control)")
    _io_flags(p, plot=True)

    p = sub.add_parser("compare", help="field-product vs element-wise scheme")
    p.add_argument("--config", help="generator JSON whose register is used for both schemes")
    _field_flags(p)
    p.add_argument("--L", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--no-measure", action="store_true", default=None,
                   help="closed forms only, no full-period runs")
    p.add_argument("--max-states", type=int)
    p.add_argument("--threads", type=int)
    _io_flags(p, plot=True)

    p = sub.add_parser("lc", help="linear complexity by Berlekamp-Massey")
    _generator_flags(p)
    p.add_argument("--stdin", action="store_true", help="read symbols from standard input")
    p.add_argument("--stdin-q", type=int, help="field order of symbols read from stdin")
    p.add_argument("--length", type=int, help="prefix length (default 4*r*L)")
    p.add_argument("--source", choices=("nlfg", "register"),
                   help="analyse the NLFG output or the register's component sequences")
    _io_flags(p)

    p = sub.add_parser("oracle", help="evaluate closed-form counts")
    p.add_argument("--config", help="run manifest to replay")
    p.add_argument("--formula", choices=("partition_count", "psi", "psi_elementwise", "n_scalar",
                                         "n_proposed", "n_elementwise", "deviation"))
    p.add_argument("--q", type=int)
    p.add_argument("--L", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--kappa", type=int)
    _io_flags(p)

    p = sub.add_parser("primitivity", help="certify a polynomial as primitive")
    p.add_argument("--config", help="run manifest to replay")
    p.add_argument("--poly")
    _field_flags(p)
    p.add_argument("--over", choices=("base", "ext"),
                   help="coefficients in GF(q) (base) or GF(q^r) (ext)")
    _io_flags(p)
    return parser


def _version() -> str:
    from . import __version__
    return __version__


# ---------------------------------------------------------------------------
# config assembly


def _load_config(path: str | None):
    """Return (generator config or None, manifest options)."""
    if not path:
        return None, {}
    try:
        obj = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecificationError(f"cannot read config {path}: {exc}") from exc
    if is_manifest(obj):
        return obj.get("config"), dict(obj.get("options") or {})
    if isinstance(obj, dict) and "config" in obj and "register" not in obj:
        return obj["config"], {}
    return obj, {}


def _resolve_options(args, command: str, manifest_opts: dict) -> dict:
    opts = {}
    for key in _OPTION_KEYS[command]:
        val = getattr(args, key, None)
        if val is None:
            val = manifest_opts.get(key, _DEFAULTS.get(key))
        opts[key] = val
    return opts


def _apply_field_flags(args, spec: dict) -> dict:
    spec = dict(spec)
    if args.q is not None:
        spec["p"], spec["n"] = prime_power(args.q)
    for key in ("p", "n", "r", "inner_poly", "outer_poly"):
        val = getattr(args, key)
        if val is not None:
            spec[key] = val
    return spec


def _parse_pairs(text: str):
    try:
        return [[int(x) for x in part.split(",")] for part in text.split(";") if part.strip()]
    except ValueError as exc:
        raise SpecificationError(f"bad --pairs {text!r}") from exc


def build_generator(args, base: dict | None) -> NlfgGenerator:
    cfg = copy.deepcopy(base) if base else {}
    reg = dict(cfg.get("register", {}))
    reg["spec"] = _apply_field_flags(args, reg.get("spec", {}))
    if "p" not in reg["spec"]:
        raise SpecificationError("no field given: use --p/--q or --config")
    sources = ("taps", "gains", "char_poly", "g")
    if args.char_poly or args.g_poly:
        for key in sources:
            reg.pop(key, None)
        reg["char_poly" if args.char_poly else "g"] = args.char_poly or args.g_poly
        reg.pop("L", None)
    if args.L is not None and reg.get("L") != args.L:
        if any(k in reg for k in ("taps", "gains")):
            for key in sources:
                reg.pop(key, None)
        reg["L"] = args.L
    if args.seed is not None:
        reg["seed"] = [int(x) for x in args.seed.split(",")]
    if not any(k in reg for k in sources):
        if "L" not in reg:
            raise SpecificationError("no register given: use --L, --char-poly, --g or --config")
        spec = spec_from_json(reg["spec"])
        default = default_register(spec, int(reg["L"]))
        reg["taps" if spec.r == 1 else "gains"] = (
            list(default.taps) if spec.r == 1 else [[list(r) for r in B] for B in default.gains])
    cfg["register"] = reg
    if args.mode is not None:
        cfg["mode"] = args.mode
    if args.pairs is not None:
        cfg["pairs"] = _parse_pairs(args.pairs)
    elif args.m is not None:
        cfg["pairs"] = [list(p) for p in TapAssembly.default(args.m).pairs]
    if "pairs" not in cfg:
        raise SpecificationError("no tap assembly given: use --m, --pairs or --config")
    return generator_from_json(cfg)


# ---------------------------------------------------------------------------
# output helpers


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _kv_text(values: dict) -> str:
    return ", ".join(f"{k}: {v}" for k, v in values.items()) + "\n"


# ---------------------------------------------------------------------------
# commands; each returns (output text, exit code, config for the manifest)


def cmd_gen(args, base, opts):
    gen = build_generator(args, base)
    count = opts["count"]
    if count < 0:
        raise SpecificationError("--count must be >= 0")
    spec = gen.spec
    words = [spec.word_entries(c) for c in generate(gen, count)]
    fmt = opts["format"]
    if fmt == "json":
        text = _dump({"config": generator_to_json(gen), "count": count,
                      "outputs": [list(w) for w in words]})
    elif fmt == "csv":
        text = _csv([[f"e{i}" for i in range(spec.r)]] + [list(w) for w in words])
    else:
        text = "".join(",".join(map(str, w)) + "\n" for w in words)
    return text, EXIT_OK, generator_to_json(gen)


def cmd_dist(args, base, opts):
    gen = build_generator(args, base)
    table = measure_distribution(gen, opts["max_states"], opts["threads"])
    m = opts["oracle_m"] if opts["oracle_m"] is not None else gen.m
    params = CountParams(gen.spec.q, gen.L, m, gen.spec.r)
    report = reconcile(table, params, gen.mode)
    fmt = opts["format"]
    if fmt == "json":
        text = _dump({"config": generator_to_json(gen), "period": table.period,
                      "report": report.to_json()})
    elif fmt == "csv":
        text = report.to_csv()
    else:
        text = report.to_text()
    if getattr(args, "plot", None):
        from .plotting import plot_distribution
        plot_distribution(report, args.plot)
    return text, EXIT_OK if report.passed else EXIT_MISMATCH, generator_to_json(gen)


def cmd_compare(args, base, opts):
    spec = register = None
    if base:
        gen = generator_from_json(base)
        spec, register = gen.spec, gen.register
        q, r, L = spec.q, spec.r, gen.L
        m = opts["m"] if opts["m"] is not None else gen.m
    else:
        if opts["q"] is not None:
            p, n = prime_power(opts["q"])
        elif opts["p"] is not None:
            p, n = opts["p"], opts["n"] or 1
        else:
            raise SpecificationError("compare needs --q (or --p) or --config")
        r = opts["r"] or 1
        spec = FieldSpec.create(p, n, r, opts["inner_poly"], opts["outer_poly"])
        q, L, m = spec.q, opts["L"], opts["m"]
        if L is None or m is None:
            raise SpecificationError("compare needs --L and --m")
    params = CountParams(q, L, m, r)
    report = compare_schemes(params, spec, measure=not opts["no_measure"],
                             max_states=opts["max_states"], workers=opts["threads"],
                             register=register)
    fmt = opts["format"]
    if fmt == "json":
        text = _dump({"spec": spec.to_json(), "report": report.to_json()})
    elif fmt == "csv":
        text = report.to_csv()
    else:
        text = report.to_text()
    if getattr(args, "plot", None):
        from .plotting import plot_comparison
        plot_comparison(report, args.plot)
    return text, EXIT_OK if report.passed else EXIT_MISMATCH, base


def cmd_lc(args, base, opts):
    if args.stdin:
        symbols = [int(t) for t in sys.stdin.read().replace(",", " ").split()]
        reports = [berlekamp_massey(symbols, opts["stdin_q"])]
        config = None
    else:
        gen = build_generator(args, base)
        spec = gen.spec
        length = opts["length"] or 4 * spec.r * gen.L
        if opts["source"] == "register":
            seqs = component_sequences(as_sigma(gen.register), length)
        else:
            words = [spec.word_entries(c) for c in generate(gen, length)]
            seqs = [[w[i] for w in words] for i in range(spec.r)]
        reports = [berlekamp_massey(seq, spec.base) for seq in seqs]
        config = generator_to_json(gen)
    fmt = opts["format"]
    if fmt == "json":
        text = _dump({"components": [rep.to_json() for rep in reports]})
    elif fmt == "csv":
        text = _csv([["component", "linear_complexity", "minimal_poly", "length", "certified"]]
                    + [[i, rep.linear_complexity, str(rep.minimal_poly), rep.length,
                        str(rep.certified).lower()] for i, rep in enumerate(reports)])
    else:
        text = "".join(
            f"component {i}: LC={rep.linear_complexity} "
            f"({'certified' if rep.certified else 'lower bound'}) "
            f"length={rep.length} minimal_poly={rep.minimal_poly}\n"
            for i, rep in enumerate(reports))
    return text, EXIT_OK, config


def _need(opts, *keys):
    missing = [k for k in keys if opts.get(k) is None]
    if missing:
        raise SpecificationError("missing " + ", ".join(f"--{k}" for k in missing))


def cmd_oracle(args, base, opts):
    formula = opts["formula"]
    if formula is None:
        raise SpecificationError("--formula is required")
    r = opts["r"] or 1
    if formula == "partition_count":
        _need(opts, "m", "q")
        values = {"partition_count": oracle.partition_count(opts["m"], opts["q"])}
    elif formula == "psi":
        _need(opts, "m", "q")
        values = {"nonzero": oracle.psi_m(opts["m"], opts["q"], False),
                  "zero": oracle.psi_m(opts["m"], opts["q"], True)}
    elif formula == "psi_elementwise":
        _need(opts, "m", "q")
        kappas = [opts["kappa"]] if opts["kappa"] is not None else range(r + 1)
        values = {f"kappa={k}": oracle.psi_elementwise(opts["m"], opts["q"], r, k) for k in kappas}
    elif formula in ("n_scalar", "n_proposed"):
        _need(opts, "q", "L", "m")
        if formula == "n_scalar" and r != 1:
            raise SpecificationError("n_scalar requires r = 1")
        params = CountParams(opts["q"], opts["L"], opts["m"], r)
        fn = oracle.n_scalar if formula == "n_scalar" else oracle.n_proposed
        values = {"nonzero": fn(params, False), "zero": fn(params, True)}
    elif formula == "n_elementwise":
        _need(opts, "q", "L", "m")
        kappas = [opts["kappa"]] if opts["kappa"] is not None else range(r + 1)
        values = {f"kappa={k}": oracle.n_elementwise(CountParams(opts["q"], opts["L"], opts["m"], r, k))
                  for k in kappas}
    else:
        _need(opts, "q", "L", "m")
        dev = oracle.balance_deviation(CountParams(opts["q"], opts["L"], opts["m"], r))
        values = {"deviation": str(dev), "float": f"{float(dev):.6e}"}
    fmt = opts["format"]
    if fmt == "json":
        text = _dump({"formula": formula, "values": values})
    elif fmt == "csv":
        text = _csv([["key", "value"]] + [[k, v] for k, v in values.items()])
    else:
        text = _kv_text(values)
    return text, EXIT_OK, None


def cmd_primitivity(args, base, opts):
    if opts["poly"] is None:
        raise SpecificationError("--poly is required")
    if opts["q"] is not None:
        p, n = prime_power(opts["q"])
    elif opts["p"] is not None:
        p, n = opts["p"], opts["n"] or 1
    else:
        raise SpecificationError("--p or --q is required")
    spec = FieldSpec.create(p, n, opts["r"] or 1, opts["inner_poly"], opts["outer_poly"])
    F: GaloisField = spec.ext if opts["over"] == "ext" else spec.base
    f = Poly.parse(opts["poly"], F)
    result = {"poly": str(f), "field": str(F), "degree": f.degree, "primitive": is_primitive(f)}
    fmt = opts["format"]
    if fmt == "json":
        text = _dump(result)
    elif fmt == "csv":
        text = _csv([list(result), [str(v).lower() if isinstance(v, bool) else v
                                    for v in result.values()]])
    else:
        text = f"{result['poly']} over {result['field']}: " + \
            ("primitive" if result["primitive"] else "not primitive") + "\n"
    return text, EXIT_OK, None


COMMANDS = {"gen": cmd_gen, "dist": cmd_dist, "compare": cmd_compare, "lc": cmd_lc,
            "oracle": cmd_oracle, "primitivity": cmd_primitivity}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        base, manifest_opts = _load_config(getattr(args, "config", None))
        opts = _resolve_options(args, args.command, manifest_opts)
        text, code, config = COMMANDS[args.command](args, base, opts)
    except BoundExceededError as exc:
        print(f"nlfg: bound exceeded: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except (NlfgError, ValueError, ZeroDivisionError) as exc:
        print(f"nlfg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(text)
    sys.stdout.flush()
    if args.manifest:
        manifest = RunManifest(args.command, config, opts,
                               RunManifest.digest(text.encode()))
        Path(args.manifest).write_text(manifest.dumps())
    return code


if __name__ == "__main__":
    raise SystemExit(main())
