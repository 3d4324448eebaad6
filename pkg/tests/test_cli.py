import json
import subprocess
import sys

import pytest

from wordint.cli import EXIT_CAP, EXIT_FAIL, EXIT_OK, EXIT_PARSE, Config, load_config, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


class TestExact:
    def test_text(self, capsys):
        code, out, _ = run(capsys, "exact", "aabb")
        assert code == EXIT_OK
        assert out.splitlines() == ["(1)/(n)", "N = 1", "chi_max = -1"]

    def test_table_row(self, capsys):
        code, out, _ = run(capsys, "exact", "[a,b]^2")
        assert out.splitlines()[0] == "(n^3+n^2-2n-4)/(n(n+2)(n-1))"

    def test_symplectic(self, capsys):
        for method in ("direct", "duality"):
            code, out, _ = run(capsys, "exact", "aabb", "--group", "Sp", "--method", method)
            assert code == EXIT_OK
            assert out.splitlines()[0] == "(1)/(2n)"

    def test_json(self, capsys):
        code, doc = run_json(capsys, "exact", "aab", "aab")
        assert code == EXIT_OK
        assert doc["words"] == ["a^2b", "a^2b"]
        assert doc["exact"] == {"num": ["1"], "den": ["1"]}
        assert doc["checks"] == {"integer_coeffs": True, "limit": True}

    def test_parse_error(self, capsys):
        code, _, err = run(capsys, "exact", "a(b")
        assert code == EXIT_PARSE
        assert "parse error" in err

    def test_identity_rejected(self, capsys):
        assert run(capsys, "exact", "aA")[0] == EXIT_PARSE

    def test_cap(self, capsys):
        assert run(capsys, "exact", "aaaaaaaaaabb")[0] == EXIT_CAP


class TestOtherCommands:
    def test_laurent_shifted(self, capsys):
        code, out, _ = run(capsys, "laurent", "aabb", "--center", "1", "--depth", "4")
        assert code == EXIT_OK
        assert out.splitlines()[0] == "1,-1,1,-1"

    def test_laurent_diagram(self, capsys):
        code, doc = run_json(capsys, "laurent", "abaabaaabb", "--diagram", "--depth", "4")
        assert code == EXIT_OK
        assert doc["coeffs"] == ["3", "-1", "7", "-9"]
        assert doc["top_exponent"] == -2

    def test_laurent_sp(self, capsys):
        code, out, _ = run(capsys, "laurent", "aa", "--center", "sp", "--depth", "2")
        assert out.splitlines()[0] == "-1,0"

    def test_chimax(self, capsys):
        code, doc = run_json(capsys, "chimax", "abAB")
        assert (doc["chi_max"], doc["sql_bound"], doc["cl_bound"]) == (-1, 3, 1)
        code, doc = run_json(capsys, "chimax", "aabbb")
        assert doc["chi_max"] == "-inf"

    def test_limit(self, capsys):
        code, doc = run_json(capsys, "limit", "abab", "abab")
        assert code == EXIT_OK
        assert doc["limit_counting"] == 3 and doc["match"]

    def test_limit_beyond_cap(self, capsys):
        code, out, _ = run(capsys, "limit", "(ab)^10")
        assert code == EXIT_OK
        assert "cap" in out

    def test_duality(self, capsys):
        assert run(capsys, "duality", "aabb", "aabb")[1].strip() == "PASS"

    def test_mc(self, capsys):
        code, doc = run_json(capsys, "mc", "aabb", "-n", "4", "--samples", "4000", "--seed", "3")
        assert code == EXIT_OK
        assert doc["exact"] == "1/4" and doc["samples"] == 4000 and doc["seed"] == 3

    def test_wg(self, capsys):
        code, out, _ = run(capsys, "wg", "2")
        assert out.splitlines()[1:] == ["  [2]: (-1)/(n(n+2)(n-1))", "  [1, 1]: (n+1)/(n(n+2)(n-1))"]
        code, out, _ = run(capsys, "wg", "1", "--group", "Sp")
        assert out.splitlines()[1] == "  [1]: (1)/(2n)"

    def test_table(self, capsys):
        code, doc = run_json(capsys, "table")
        assert code == EXIT_OK
        assert doc["passed"] == doc["total"] == 9


class TestConfigAndCache:
    def test_cache(self, capsys, tmp_path, monkeypatch):
        from wordint import weingarten

        monkeypatch.setenv("WORDINT_CACHE", str(tmp_path))
        monkeypatch.setattr(weingarten, "_TABLES", {})
        run(capsys, "wg", "3")
        code, doc = run_json(capsys, "cache", "info")
        assert "wg_O_k3.json" in doc["files"]
        code, doc = run_json(capsys, "cache", "clear")
        assert doc["removed"] >= 1

    def test_cache_dir_flag(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("WORDINT_CACHE", str(tmp_path / "unused"))
        code, doc = run_json(capsys, "cache", "info", "--cache-dir", str(tmp_path))
        assert doc["cache_dir"] == str(tmp_path)

    def test_config_file(self, tmp_path):
        path = tmp_path / "wordint.cfg"
        path.write_text("samples = 500\nseed = 9\n")
        assert load_config(str(path)) == Config(samples=500, seed=9)
        assert load_config(None) == Config()

    def test_flags_override_file(self, capsys, tmp_path):
        path = tmp_path / "wordint.cfg"
        path.write_text("samples = 500\nseed = 9\n")
        code, doc = run_json(capsys, "mc", "aa", "-n", "3", "--config", str(path), "--seed", "1")
        assert (doc["samples"], doc["seed"]) == (500, 1)

    def test_bad_config(self, capsys, tmp_path):
        path = tmp_path / "wordint.cfg"
        path.write_text("colour = blue\n")
        assert run(capsys, "exact", "aa", "--config", str(path))[0] == EXIT_PARSE
        path.write_text("k_cap = 9\n")
        assert run(capsys, "exact", "aa", "--config", str(path))[0] == EXIT_PARSE

    def test_mc_failure_exit_code(self, capsys, monkeypatch):
        import wordint.integrals as mod
        from wordint.exactalg import RationalFunction

        monkeypatch.setattr(mod, "exact_trace_o_function", lambda words, cap=4: RationalFunction(5))
        assert run(capsys, "mc", "aa", "-n", "3", "--samples", "1000")[0] == EXIT_FAIL


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "wordint", "exact", "aa"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "1"


def test_help_lists_commands(capsys):
    with pytest.raises(SystemExit):
        main(["--help"])
    out = capsys.readouterr().out
    for name in ("exact", "laurent", "chimax", "limit", "duality", "mc", "wg", "table", "cache"):
        assert name in out
