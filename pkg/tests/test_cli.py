import csv
import hashlib
import io
import json
import subprocess
import sys

import pytest

from nlfg.cli import main
from nlfg.config import generator_from_json, generator_to_json, register_from_json

WORDS = ["--p", "2", "--r", "3", "--outer-poly", "x^3+x+1", "--L", "5", "--m", "2"]
SCALAR = ["--p", "2", "--char-poly", "x^5+x^2+1", "--m", "2"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestGen:
    def test_word_lines(self, capsys):
        code, out, _ = run(capsys, "gen", *WORDS, "--count", "5")
        lines = out.splitlines()
        assert code == 0 and len(lines) == 5
        assert all(len(line.split(",")) == 3 and set(line.split(",")) <= {"0", "1"}
                   for line in lines)

    def test_count_zero(self, capsys):
        code, out, _ = run(capsys, "gen", *SCALAR, "--count", "0")
        assert code == 0 and out == ""

    def test_missing_outer_poly(self, capsys):
        code, out, err = run(capsys, "gen", "--p", "2", "--r", "3", "--L", "5", "--m", "2")
        assert code == 1 and out == "" and "outer_poly" in err

    def test_formats(self, capsys):
        _, text, _ = run(capsys, "gen", *SCALAR, "--count", "8")
        _, raw, _ = run(capsys, "gen", *SCALAR, "--count", "8", "--format", "csv")
        rows = list(csv.reader(io.StringIO(raw)))
        assert rows[0] == ["e0"] and [r[0] for r in rows[1:]] == text.split()
        _, js, _ = run(capsys, "gen", *SCALAR, "--count", "8", "--format", "json")
        data = json.loads(js)
        assert [str(w[0]) for w in data["outputs"]] == text.split()

    def test_json_round_trips_through_schema(self, capsys, tmp_path):
        _, js, _ = run(capsys, "gen", *WORDS, "--count", "6", "--format", "json")
        data = json.loads(js)
        gen = generator_from_json(data["config"])
        assert generator_to_json(gen) == data["config"]
        path = tmp_path / "out.json"
        path.write_text(js)
        _, again, _ = run(capsys, "gen", "--config", str(path), "--count", "6")
        assert again.splitlines() == [",".join(map(str, w)) for w in data["outputs"]]

    def test_config_file_and_flag_override(self, capsys, tmp_path):
        cfg = {"register": {"spec": {"p": 2}, "char_poly": "x^5+x^2+1", "seed": [1, 0, 0, 0, 0]},
               "pairs": [[0, 1], [2, 3]]}
        path = tmp_path / "gen.json"
        path.write_text(json.dumps(cfg))
        _, a, _ = run(capsys, "gen", "--config", str(path), "--count", "31")
        _, b, _ = run(capsys, "gen", "--config", str(path), "--count", "31", "--pairs", "0,2")
        assert a.split().count("1") == 12 and a != b

    def test_explicit_gains(self, capsys, tmp_path):
        reg = {"spec": {"p": 2, "r": 2, "outer_poly": "x^2+x+1"},
               "gains": [[[1, 0], [0, 1]], [[0, 1], [1, 1]]], "seed": [[1, 0], [0, 0]]}
        register_from_json(reg)
        path = tmp_path / "g.json"
        path.write_text(json.dumps({"register": reg, "pairs": [[0, 1]]}))
        code, out, _ = run(capsys, "gen", "--config", str(path), "--count", "3")
        assert code == 0 and len(out.splitlines()) == 3


class TestDist:
    def test_pass(self, capsys):
        code, out, _ = run(capsys, "dist", *SCALAR)
        assert code == 0 and "verdict: PASS" in out

    def test_mismatch_exit(self, capsys):
        code, out, _ = run(capsys, "dist", *SCALAR, "--oracle-m", "1")
        assert code == 2 and "verdict: FAIL" in out

    def test_csv(self, capsys):
        code, out, _ = run(capsys, "dist", *WORDS, "--mode", "elementwise", "--format", "csv")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0 and list(rows[0]) == ["value", "kappa", "measured", "oracle", "match"]
        assert {r["measured"] for r in rows if r["kappa"] == "1"} == {"4800"}

    def test_non_primitive(self, capsys):
        code, _, err = run(capsys, "dist", "--p", "2", "--char-poly", "x^4+x^3+x^2+x+1",
                           "--m", "2")
        assert code == 1 and "not primitive" in err

    def test_bound(self, capsys):
        code, _, err = run(capsys, "dist", "--p", "2", "--L", "30", "--m", "2")
        assert code == 3 and "max_states" in err

    def test_threads(self, capsys):
        _, one, _ = run(capsys, "dist", *WORDS, "--format", "json")
        _, two, _ = run(capsys, "dist", *WORDS, "--format", "json", "--threads", "2")
        assert one == two

    def test_plot(self, capsys, tmp_path):
        path = tmp_path / "dist.png"
        code, _, _ = run(capsys, "dist", *WORDS, "--mode", "elementwise", "--plot", str(path))
        assert code == 0 and path.stat().st_size > 1000


class TestCompare:
    def test_q2_r3_l5_m2(self, capsys):
        code, out, _ = run(capsys, "compare", "--q", "2", "--r", "3", "--L", "5", "--m", "2")
        assert code == 0
        for number in ("7999", "4800", "1728", "4543", "4032"):
            assert number in out

    def test_json_and_plot(self, capsys, tmp_path):
        path = tmp_path / "cmp.svg"
        code, out, _ = run(capsys, "compare", "--q", "2", "--r", "2", "--L", "4", "--m", "2",
                           "--format", "json", "--plot", str(path))
        data = json.loads(out)
        assert code == 0 and data["report"]["passed"]
        assert path.read_text().lstrip().startswith("<?xml")

    def test_missing_args(self, capsys):
        code, _, _ = run(capsys, "compare", "--q", "2")
        assert code == 1


class TestLc:
    def test_register_components(self, capsys):
        code, out, _ = run(capsys, "lc", *WORDS, "--source", "register", "--length", "40")
        assert code == 0 and out.count("LC=15") == 3

    def test_stdin(self, capsys, monkeypatch):
        monkeypatch.setattr(sys, "stdin", io.StringIO("1 0 0 0 0 1 0 0 1 0 1 1 0 0 1 1 1 1 1"))
        code, out, _ = run(capsys, "lc", "--stdin", "--format", "json")
        assert code == 0 and json.loads(out)["components"][0]["linear_complexity"] == 5

    def test_nlfg_default_length(self, capsys):
        code, out, _ = run(capsys, "lc", *SCALAR, "--format", "csv")
        row = list(csv.DictReader(io.StringIO(out)))[0]
        assert code == 0 and row["length"] == "20" and int(row["linear_complexity"]) > 5


class TestOracle:
    def test_psi(self, capsys):
        code, out, _ = run(capsys, "oracle", "--formula", "psi", "--m", "2", "--q", "2")
        assert code == 0 and out == "nonzero: 6, zero: 10\n"

    def test_elementwise_json(self, capsys):
        _, out, _ = run(capsys, "oracle", "--formula", "n_elementwise", "--q", "2", "--L", "5",
                        "--m", "2", "--r", "3", "--format", "json")
        assert json.loads(out)["values"] == {"kappa=0": 7999, "kappa=1": 4800,
                                             "kappa=2": 2880, "kappa=3": 1728}

    def test_deviation(self, capsys):
        _, out, _ = run(capsys, "oracle", "--formula", "deviation", "--q", "2", "--L", "5",
                        "--m", "2")
        assert out.startswith("deviation: 7/62")

    def test_missing(self, capsys):
        assert run(capsys, "oracle", "--formula", "psi", "--q", "2")[0] == 1


class TestPrimitivity:
    def test_verdicts(self, capsys):
        assert run(capsys, "primitivity", "--p", "2", "--poly", "x^5+x^2+1")[1].endswith(
            ": primitive\n")
        assert "not primitive" in run(capsys, "primitivity", "--p", "2", "--poly", "x^2+1")[1]

    def test_over_extension(self, capsys):
        _, out, _ = run(capsys, "primitivity", "--p", "2", "--r", "3", "--outer-poly",
                        "x^3+x+1", "--over", "ext", "--poly", "x^5+x^2+x+3", "--format", "json")
        assert json.loads(out)["primitive"] is True


class TestManifest:
    @pytest.mark.parametrize("argv", [
        ["gen", *WORDS, "--count", "40"],
        ["dist", *WORDS, "--mode", "elementwise", "--format", "csv"],
        ["compare", "--q", "3", "--L", "4", "--m", "2", "--format", "json"],
        ["lc", *SCALAR, "--length", "30"],
        ["oracle", "--formula", "n_proposed", "--q", "2", "--r", "3", "--L", "5", "--m", "2"],
        ["primitivity", "--q", "4", "--poly", "x^2+x+2"],
    ])
    def test_replay_is_byte_identical(self, capsys, tmp_path, argv):
        man = tmp_path / "m.json"
        code, first, _ = run(capsys, *argv, "--manifest", str(man))
        data = json.loads(man.read_text())
        assert data["command"] == argv[0] and data["tool"] == "nlfg"
        code2, second, _ = run(capsys, argv[0], "--config", str(man))
        assert (code2, second) == (code, first)
        assert hashlib.sha256(second.encode()).hexdigest() == data["output_sha256"]


class TestUsage:
    def test_unknown_command(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["bogus"])
        assert exc.value.code == 1

    def test_bad_flag_value(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["gen", "--p", "two"])
        assert exc.value.code == 1

    def test_bad_field(self, capsys):
        assert run(capsys, "gen", "--p", "6", "--L", "3", "--m", "1")[0] == 1

    def test_module_entry_point(self):
        proc = subprocess.run([sys.executable, "-m", "nlfg", "oracle", "--formula", "psi",
                               "--m", "1", "--q", "3"], capture_output=True, text=True)
        assert proc.returncode == 0 and proc.stdout == "nonzero: 2, zero: 5\n"
