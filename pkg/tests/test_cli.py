"""Command-line surface: subcommands, exit codes, determinism."""

import json
import subprocess
import sys

from cdu.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestAnalyze:
    def test_planar_example(self, capsys):
        code, out, _ = run_cli(capsys, "analyze", "--field", "3^2",
                               "--function", "x^2 + x^3")
        assert code == 0
        report = json.loads(out)["report"]
        by_c = {e["c"]: e for e in report["entries"]}
        assert by_c[1]["label"] == "PcN"  # planar
        for c in range(9):
            if c != 1:
                assert by_c[c]["label"] not in ("PcN", "APcN")
        assert report["field"] == "3^2/1,0,1"  # modulus embedded

    def test_square_over_f5(self, capsys):
        code, out, _ = run_cli(capsys, "analyze", "--field", "5^1",
                               "--function", "x^2")
        report = json.loads(out)["report"]
        assert report["summary"]["pcn_c"] == [1]
        assert report["summary"]["apcn_c"] == [0, 2, 3, 4]

    def test_parse_error_is_config_error(self, capsys):
        code, out, err = run_cli(capsys, "analyze", "--field", "3^2",
                                 "--function", "x^(")
        assert code == 2
        assert "position" in err

    def test_bad_field_spec(self, capsys):
        code, _, err = run_cli(capsys, "analyze", "--field", "nine",
                               "--function", "x")
        assert code == 2

    def test_cap_refusal_and_force(self, capsys):
        code, _, err = run_cli(capsys, "analyze", "--field", "2^13",
                               "--function", "x")
        assert code == 2 and "cap" in err
        # force overrides the cap; shrink the cap so the sweep stays tiny
        code, out, _ = run_cli(capsys, "analyze", "--field", "2^2",
                               "--function", "x", "--cap", "2", "--force",
                               "--parallel", "4")
        assert code == 0

    def test_c_scope(self, capsys):
        code, out, _ = run_cli(capsys, "analyze", "--field", "3^2",
                               "--function", "x^2 + x^3", "--c-scope", "1")
        assert code == 0
        entries = json.loads(out)["report"]["entries"]
        assert [e["c"] for e in entries] == [0, 1, 2]
        code, _, err = run_cli(capsys, "analyze", "--field", "3^2",
                               "--function", "x", "--c-scope", "3")
        assert code == 2

    def test_matrix_dump(self, capsys, tmp_path):
        path = tmp_path / "ddt.csv"
        code, out, _ = run_cli(capsys, "analyze", "--field", "5^1",
                               "--function", "x^2", "--matrix-c", "1",
                               "--matrix-out", str(path))
        assert code == 0
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "a\\b,0,1,2,3,4"
        assert len(lines) == 6

    def test_human_format(self, capsys):
        code, out, _ = run_cli(capsys, "analyze", "--field", "5^1",
                               "--function", "x^2", "--format", "human")
        assert code == 0
        assert "summary" in out and "{" not in out.splitlines()[0]


class TestConstruct:
    def test_pcn1_recipe(self, capsys):
        recipe = json.dumps({"theorem": "pcn1", "q": 3, "n": 2, "phi": "x",
                             "g": "x^2", "h_or_b": 1, "kind": "f1"})
        code, out, _ = run_cli(capsys, "construct", "--recipe", recipe)
        assert code == 0
        rep = json.loads(out)
        assert rep["properties"]["is_permutation"] is True
        assert rep["validation"]["pp_ok"] is True
        assert 0 in rep["classification"]["summary"]["pcn_c"]
        assert 2 in rep["classification"]["summary"]["pcn_c"]

    def test_apcnagw_recipe(self, capsys):
        recipe = json.dumps({"theorem": "apcnagw", "q": 4, "n": 3,
                             "phi": "x^2 + x", "g": "x", "h_or_b": 1, "kind": "f2"})
        code, out, _ = run_cli(capsys, "construct", "--recipe", recipe)
        assert code == 0
        rep = json.loads(out)
        assert rep["properties"]["is_two_to_one"] is True
        apcn = set(rep["classification"]["summary"]["apcn_c"])
        assert {0, 56, 57} <= apcn  # F_4 \ {1} inside F_64

    def test_quad_recipe(self, capsys):
        # 8 lies in J = {x^5 - x} over F_25 with modulus x^2+x+1
        recipe = json.dumps({"theorem": "quad", "q": 5, "n": 2, "phi": "x",
                             "h_or_b": 2, "terms": [{"g": "x + 8", "s": 10}]})
        code, out, _ = run_cli(capsys, "construct", "--recipe", recipe)
        assert code == 0
        rep = json.loads(out)
        assert rep["properties"]["is_permutation"] is True

    def test_recipe_from_file(self, capsys, tmp_path):
        path = tmp_path / "recipe.json"
        path.write_text(json.dumps({"theorem": "pcn1", "q": 3, "n": 2,
                                    "phi": "x", "g": "x^2", "h_or_b": 1}))
        code, out, _ = run_cli(capsys, "construct", "--recipe", f"@{path}")
        assert code == 0

    def test_failed_precondition_surfaces(self, capsys):
        recipe = json.dumps({"theorem": "apcnagw", "q": 4, "n": 2,
                             "phi": "x^2 + x", "g": "x", "h_or_b": 1})
        code, _, err = run_cli(capsys, "construct", "--recipe", recipe)
        assert code == 2 and "EvenN" in err

    def test_bad_recipe_json(self, capsys):
        code, _, err = run_cli(capsys, "construct", "--recipe", "{nope")
        assert code == 2


class TestMonomialCommand:
    def test_sweep(self, capsys):
        code, out, _ = run_cli(capsys, "monomial", "--p", "3", "--h", "3",
                               "--d", "5", "--c", "g", "--rmax", "2")
        assert code == 0
        rep = json.loads(out)["report"]
        assert rep["s"] == 2
        assert rep["root_in_fps"] is False
        assert rep["first_violation_r"] == 1
        witness = rep["per_extension"][0]["violation_witness"]
        assert witness["count"] >= 3

    def test_symbolic_c(self, capsys):
        code, out, _ = run_cli(capsys, "monomial", "--p", "3", "--h", "3",
                               "--d", "5", "--c", "g^2+2*g", "--rmax", "1")
        assert code == 0

    def test_c_one_rejected(self, capsys):
        code, _, err = run_cli(capsys, "monomial", "--p", "3", "--h", "3",
                               "--d", "5", "--c", "1", "--rmax", "1")
        assert code == 2 and "BadC" in err

    def test_cap(self, capsys):
        code, _, err = run_cli(capsys, "monomial", "--p", "3", "--h", "3",
                               "--d", "5", "--c", "3", "--rmax", "9")
        assert code == 2 and "CapExceeded" in err


class TestVerifyCommand:
    def test_single_suite(self, capsys):
        code, out, _ = run_cli(capsys, "verify-theorems", "--suite", "planar-example")
        assert code == 0
        rep = json.loads(out)
        assert rep["passed"] is True
        assert rep["suites"]["planar-example"]["passed"] is True

    def test_multiple_suites(self, capsys):
        code, out, _ = run_cli(capsys, "verify-theorems",
                               "--suite", "planar-example",
                               "--suite", "classical-ddt")
        rep = json.loads(out)
        assert set(rep["suites"]) == {"planar-example", "classical-ddt"}

    def test_strict_flag_passes_when_green(self, capsys):
        code, _, _ = run_cli(capsys, "verify-theorems",
                             "--suite", "planar-example", "--strict")
        assert code == 0


class TestExperiments:
    def test_pseudo_pcn_probe(self, capsys):
        code, out, _ = run_cli(capsys, "experiment", "--probe", "pseudo-pcn",
                               "--field", "2^3")
        assert code == 0
        rep = json.loads(out)["report"]
        assert rep["probe"] == "pseudo-pcn"

    def test_relaxed_odd_p_probe(self, capsys):
        code, out, _ = run_cli(capsys, "experiment", "--probe", "relaxed-pcn-odd-p",
                               "--field", "3^1", "--count", "50")
        assert code == 0
        rep = json.loads(out)["report"]
        assert "non_pp_counterexamples" in rep

    def test_quad_zero_index_probe(self, capsys):
        code, out, _ = run_cli(capsys, "experiment", "--probe", "quad-zero-index",
                               "--field", "5^2")
        assert code == 0
        rep = json.loads(out)["report"]
        assert rep["excluded_exponents"]


class TestDeterminismAndConfig:
    def test_parallelism_does_not_change_bytes(self, capsys):
        args = ["analyze", "--field", "3^2", "--function", "x^2 + x^3"]
        _, out1, _ = run_cli(capsys, *args, "--parallel", "1")
        _, out8, _ = run_cli(capsys, *args, "--parallel", "8")
        assert out1 == out8

    def test_config_file_defaults(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"field": "5^1", "function": "x^2"}))
        code, out, _ = run_cli(capsys, "analyze", "--field", "5^1",
                               "--function", "x^2", "--config", str(cfg))
        assert code == 0

    def test_bad_config_file(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text("[1, 2]")
        code, _, err = run_cli(capsys, "analyze", "--field", "5^1",
                               "--function", "x^2", "--config", str(cfg))
        assert code == 2


class TestEntryPoint:
    def test_module_invocation(self):
        proc = subprocess.run(
            [sys.executable, "-m", "cdu", "analyze", "--field", "5^1",
             "--function", "x^2"],
            capture_output=True, text=True, timeout=120)
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["report"]["summary"]["pcn_c"] == [1]
