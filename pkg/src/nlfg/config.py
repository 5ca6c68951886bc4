"""JSON schemas for field specs, registers, generators and run manifests.

Field spec::

    {"p": 2, "n": 1, "inner_poly": "x+1", "r": 3, "outer_poly": "x^3+x+1"}

Register::

    {"spec": {...}, "L": 5, "taps": [a_0, ..., a_{L-1}], "seed": [...]}      # r = 1
    {"spec": {...}, "L": 5, "gains": [B_0, ..., B_{L-1}], "seed": [[...], ...]}

``gains`` are row-major r x r matrices of GF(q) codes.  A seed is either
L words (lists of r entries; a bare code is accepted when r = 1) or the
flat stacked vector of rL entries.  As shorthands a register may give
``"char_poly"`` (scalar) or ``"g"`` (primitive polynomial over GF(q^r))
instead of taps/gains; serialisation always writes taps/gains.

Generator::

    {"register": {...}, "pairs": [[0, 1], [2, 3]], "mode": "field"}
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any

from . import __version__
from .errors import SpecificationError
from .generator import FIELD, NlfgGenerator, TapAssembly
from .gf import FieldSpec
from .registers import LfsrConfig, SigmaLfsrConfig, construct_sigma, default_seed


def spec_from_json(obj: dict, strict: bool = True) -> FieldSpec:
    """Build a FieldSpec; ``strict`` demands explicit polynomials for n > 1 / r > 1."""
    if not isinstance(obj, dict) or "p" not in obj:
        raise SpecificationError("field spec must be an object with at least 'p'")
    n, r = int(obj.get("n", 1)), int(obj.get("r", 1))
    if strict and r > 1 and not obj.get("outer_poly"):
        raise SpecificationError("outer_poly is required when r > 1")
    if strict and n > 1 and not obj.get("inner_poly"):
        raise SpecificationError("inner_poly is required when n > 1")
    return FieldSpec.from_json(obj)


def _parse_seed(spec: FieldSpec, L: int, seed) -> tuple[int, ...]:
    if seed is None:
        return default_seed(spec, L)
    seed = list(seed)
    if len(seed) == L and all(isinstance(s, list) for s in seed):
        words = [tuple(s) for s in seed]
    elif spec.r == 1 and len(seed) == L:
        words = [(int(s),) for s in seed]
    elif len(seed) == spec.r * L and not any(isinstance(s, list) for s in seed):
        words = [tuple(seed[i * spec.r:(i + 1) * spec.r]) for i in range(L)]
    else:
        raise SpecificationError(f"seed must hold {L} words of {spec.r} entries")
    for w in words:
        if len(w) != spec.r or any(not 0 <= int(e) < spec.q for e in w):
            raise SpecificationError(f"bad seed word {list(w)}")
    return tuple(spec.word_code([int(e) for e in w]) for w in words)


def register_from_json(obj: dict, strict: bool = True):
    spec = spec_from_json(obj.get("spec", {}), strict)
    seed = obj.get("seed")
    if "char_poly" in obj:
        reg = LfsrConfig.from_char_poly(spec, obj["char_poly"])
        return LfsrConfig(spec, reg.taps, _parse_seed(spec, reg.L, seed))
    if "g" in obj:
        reg = construct_sigma(spec, obj["g"])
        return reg.with_state(_parse_seed(spec, reg.L, seed))
    L = obj.get("L")
    if "taps" in obj:
        taps = tuple(int(a) for a in obj["taps"])
        L = len(taps) if L is None else int(L)
        if len(taps) != L:
            raise SpecificationError(f"taps has {len(taps)} entries but L = {L}")
        if spec.r != 1:
            raise SpecificationError("taps describe a scalar register; use gains when r > 1")
        return LfsrConfig(spec, taps, _parse_seed(spec, L, seed))
    if "gains" in obj:
        gains = obj["gains"]
        L = len(gains) if L is None else int(L)
        if len(gains) != L:
            raise SpecificationError(f"gains has {len(gains)} matrices but L = {L}")
        return SigmaLfsrConfig(spec, tuple(tuple(tuple(row) for row in B) for B in gains),
                               _parse_seed(spec, L, seed))
    raise SpecificationError("register needs one of taps, gains, char_poly or g")


def register_to_json(reg) -> dict:
    spec = reg.spec
    out: dict[str, Any] = {"spec": spec.to_json(), "L": reg.L}
    if isinstance(reg, LfsrConfig):
        out["taps"] = list(reg.taps)
        out["seed"] = list(reg.state)
    else:
        out["gains"] = [[list(row) for row in B] for B in reg.gains]
        out["seed"] = [list(spec.word_entries(s)) for s in reg.state]
    return out


def generator_from_json(obj: dict, strict: bool = True) -> NlfgGenerator:
    if "register" not in obj:
        raise SpecificationError("generator config needs a 'register'")
    reg = register_from_json(obj["register"], strict)
    pairs = obj.get("pairs")
    mode = obj.get("mode", FIELD)
    if pairs is None:
        asm = TapAssembly.default(int(obj.get("m", 1)), mode)
    else:
        asm = TapAssembly(tuple(tuple(p) for p in pairs), mode)
    return NlfgGenerator(reg, asm)


def generator_to_json(gen: NlfgGenerator) -> dict:
    return {"register": register_to_json(gen.register), **gen.assembly.to_json()}


@dataclass
class RunManifest:
    """Everything needed to replay a CLI run and check its output."""

    command: str
    config: dict | None
    options: dict
    output_sha256: str = ""
    version: str = __version__
    tool: str = "nlfg"
    extra: dict = field(default_factory=dict)

    @staticmethod
    def digest(data: bytes) -> str:
        return hashlib.sha256(data).hexdigest()

    def to_json(self) -> dict:
        return {"tool": self.tool, "version": self.version, "command": self.command,
                "config": self.config, "options": self.options,
                "output_sha256": self.output_sha256, **self.extra}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"


def is_manifest(obj: Any) -> bool:
    return isinstance(obj, dict) and obj.get("tool") == "nlfg" and "command" in obj
