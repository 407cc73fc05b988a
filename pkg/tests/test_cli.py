import json
import subprocess
import sys

import pytest

from spectra import __version__
from spectra.cli import RunConfig, main


def run(capsys, *argv):
    code = main(["--format", "json", *argv])
    out, err = capsys.readouterr()
    return code, out, err


def doc(out):
    return json.loads(out)


class TestProfile:
    def test_member(self, capsys):
        code, out, _ = run(capsys, "profile", "1,2")
        assert code == 0
        assert out == '{"n":2,"triples":[[1,1,2]],"version":"%s"}\n' % __version__

    def test_empty(self, capsys):
        code, out, _ = run(capsys, "profile", "1,3")
        assert code == 0 and doc(out)["triples"] == []

    def test_parse_error(self, capsys):
        code, out, err = run(capsys, "profile", "2,2")
        assert code == 2 and out == "" and "NotStrictlyIncreasing" in err


class TestEquiv:
    def test_equivalent(self, capsys):
        code, out, _ = run(capsys, "equiv", "1,2", "2,4")
        assert code == 0 and doc(out)["verdict"] == "equivalent"

    def test_inequivalent(self, capsys):
        code, out, _ = run(capsys, "equiv", "1,2", "1,3")
        assert code == 1 and doc(out)["verdict"] == "inequivalent"

    def test_text_verdict(self, capsys):
        assert main(["--format", "text", "equiv", "1,2", "2,4"]) == 0
        assert capsys.readouterr().out == "equivalent\n"

    def test_dimension_mismatch(self, capsys):
        code, _, err = run(capsys, "equiv", "1,2", "1,2,3")
        assert code == 2 and "DimensionMismatch" in err


class TestCanon:
    def test_lifted(self, capsys):
        code, out, _ = run(capsys, "canon", "1/2,1")
        d = doc(out)
        assert code == 0 and d["lifted"] == [1, 2] and d["conant_band"] == [4, 8]
        assert all(d["bounds_checked"].values())
        assert d["vertex"]["basis_det"] in (1, -1)

    def test_band(self, capsys):
        code, out, _ = run(capsys, "canon", "--band", "1,2")
        assert code == 0 and doc(out)["conant_band"] == [4, 8]

    def test_band_text(self, capsys):
        assert main(["--format", "text", "canon", "--band", "1,3"]) == 0
        assert capsys.readouterr().out == "3,8\n"

    def test_parse_error(self, capsys):
        code, _, _ = run(capsys, "canon", "0.5,0.5")
        assert code == 2


class TestVerify:
    def test_two(self, capsys):
        code, out, _ = run(capsys, "verify-conant", "--n", "2")
        d = doc(out)
        assert code == 0 and d["classes"] == 2 and d["satisfied"] == 2 and d["no_witness_found"] == 0

    def test_five_with_workers(self, capsys):
        code, out, _ = run(capsys, "verify-conant", "--n", "5", "--jobs", "8")
        assert code == 0 and doc(out)["satisfied"] == doc(out)["classes"] == 339

    def test_unsupported(self, capsys):
        code, _, err = run(capsys, "verify-conant", "--n", "9")
        assert code == 2 and "unsupported" in err

    def test_long_flag_required(self, capsys):
        code, _, err = run(capsys, "verify-conant", "--n", "7")
        assert code == 2 and "--long" in err

    def test_atlas_and_checkpoint(self, capsys, tmp_path):
        atlas, ck = tmp_path / "atlas.jsonl", tmp_path / "ck.jsonl"
        code, _, _ = run(capsys, "verify-conant", "--n", "3", "--out", str(atlas), "--checkpoint", str(ck))
        assert code == 0
        lines = atlas.read_text().splitlines()
        assert len(lines) == 7 and all(json.loads(l)["conant_witness"] for l in lines)
        assert ck.exists()


class TestEnumerate:
    def test_two_lines(self, capsys):
        code, out, _ = run(capsys, "enumerate", "--n", "2")
        assert code == 0 and len(out.splitlines()) == 2

    def test_strategies_identical(self, capsys, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        assert run(capsys, "enumerate", "--n", "3", "--strategy", "box", "--out", str(a))[0] == 0
        assert run(capsys, "enumerate", "--n", "3", "--strategy", "profile", "--out", str(b))[0] == 0
        assert a.read_bytes() == b.read_bytes()

    def test_zero(self, capsys):
        assert run(capsys, "enumerate", "--n", "0")[0] == 2


class TestConfig:
    def test_jobs_env(self, capsys, monkeypatch):
        monkeypatch.setenv("SPECTRA_JOBS", "2")
        assert run(capsys, "verify-conant", "--n", "3")[0] == 0

    def test_bad_jobs(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["verify-conant", "--n", "2", "--jobs", "0"])
        assert exc.value.code == 2

    def test_run_config_invariants(self):
        with pytest.raises(ValueError):
            RunConfig("profile", jobs=0)
        with pytest.raises(ValueError):
            RunConfig("profile", format="xml")

    def test_usage_error_exit(self):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2


def test_module_entry_point_pipes_json():
    proc = subprocess.run([sys.executable, "-m", "spectra", "profile", "1,2"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout) == {"n": 2, "triples": [[1, 1, 2]], "version": __version__}
    assert proc.stderr == ""


def test_json_stable_across_runs(tmp_path):
    outs = {subprocess.run([sys.executable, "-m", "spectra", "enumerate", "--n", "3", "--jobs", str(j)],
                           capture_output=True).stdout for j in (1, 2)}
    assert len(outs) == 1


def test_invariant_violation_exit(capsys, monkeypatch):
    from spectra import cli
    from spectra.errors import BoundViolation

    def broken(x):
        raise BoundViolation("simulated")

    monkeypatch.setattr(cli, "canonicalize", broken)
    code, out, err = run(capsys, "canon", "1,2")
    assert code == 3 and out == "" and "BoundViolation" in err
