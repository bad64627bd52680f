import csv
import io
import json

import pytest

from topvertex import cli, vertex
from topvertex.qnum import QRat, bracket, qpow


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestCompute:
    def test_trivial(self, capsys):
        code, out, _ = run(capsys, "compute", "--mu1", "[]", "--mu2", "[]", "--mu3", "[]")
        assert code == 0
        rec = json.loads(out)
        assert QRat.from_json_obj(rec["w"]).is_one()
        assert rec["pipelines_agree"] and rec["half_lattice"]

    def test_one_box(self, capsys):
        code, out, _ = run(capsys, "compute", "--mu1", "[1]")
        assert code == 0
        assert json.loads(out)["w"] == (1 / bracket(1)).to_json_obj()

    @pytest.mark.parametrize("argv", [
        ["compute", "--mu1", "[2,0]"],
        ["compute", "--mu1", "[1,2]"],
        ["compute", "--mu1", "nope"],
        ["compute", "--framing", "1,2"],
        ["compute", "--pipelines", "skew,foo"],
        ["frobnicate"],
    ])
    def test_usage_errors(self, capsys, argv):
        code, _, err = run(capsys, *argv)
        assert code == 2
        assert "error" in err

    def test_deterministic(self, capsys):
        argv = ["compute", "--mu1", "[2,1]", "--mu2", "[1]", "--mu3", "[1,1]", "--framing", "1,-1,0"]
        _, a, _ = run(capsys, *argv)
        _, b, _ = run(capsys, *argv)
        assert a == b


class TestVerify:
    def test_small_sweep(self, capsys):
        code, out, _ = run(capsys, "verify", "--max-size", "2")
        assert code == 0
        summary = json.loads(out)
        assert summary["keys"] == 64 and summary["mismatches"] == 0

    def test_hard_limit(self, capsys):
        code, _, _ = run(capsys, "verify", "--max-size", "6")
        assert code == 2

    def test_patched_entry_fails(self, capsys, monkeypatch):
        original = vertex.f_entry

        def patched(i, j, m, n, framing):
            v = original(i, j, m, n, framing)
            return v * qpow(1) if (i, j, m, n) == (1, 2, 0, 0) else v

        monkeypatch.setattr(vertex, "f_entry", patched)
        code, out, _ = run(capsys, "verify", "--max-size", "1")
        assert code == 1
        lines = out.strip().splitlines()
        assert json.loads(lines[0])["mismatches"] > 0
        assert "first_mismatch" in json.loads(lines[1])


class TestKPCheck:
    def test_one_component(self, capsys):
        code, out, _ = run(capsys, "kp-check", "--components", "1", "--cutoff", "6", "--degree", "3")
        assert code == 0
        rep = json.loads(out)
        assert rep["checked"] > 0 and rep["nonzero_stable"] == 0

    def test_cutoff_zero(self, capsys):
        code, _, _ = run(capsys, "kp-check", "--cutoff", "0")
        assert code == 0

    def test_exit_code_tracks_report(self, capsys):
        code, out, _ = run(capsys, "kp-check", "--components", "3", "--cutoff", "2", "--degree", "1")
        rep = json.loads(out)
        assert code == (0 if rep["nonzero_stable"] == 0 else 1)

    @pytest.mark.parametrize("argv", [
        ["kp-check", "--u0", "1"],
        ["kp-check", "--u0", "0"],
        ["kp-check", "--u0", "x"],
        ["kp-check", "--components", "2"],
    ])
    def test_usage_errors(self, capsys, argv):
        assert run(capsys, *argv)[0] == 2


class TestTable:
    def test_csv_rows(self, capsys, tmp_path):
        code, out, _ = run(capsys, "table", "--max-size", "2", "--format", "csv")
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == cli.CSV_FIELDS
        assert len(rows) == 65

    def test_json_matches_compute(self, capsys):
        _, table, _ = run(capsys, "table", "--max-size", "1", "--framing", "1,0,-1")
        lines = table.strip().splitlines()
        assert len(lines) == 8
        rec = json.loads(lines[5])
        k = rec["key"]
        _, single, _ = run(capsys, "compute", "--mu1", json.dumps(k["mu1"]), "--mu2", json.dumps(k["mu2"]),
                           "--mu3", json.dumps(k["mu3"]), "--framing", ",".join(map(str, k["framing"])))
        assert single.strip() == lines[5]

    def test_cache_hits(self, capsys, tmp_path):
        cache = str(tmp_path / "cache")
        _, first, err1 = run(capsys, "table", "--max-size", "1", "--cache-dir", cache)
        assert "cache_hits=0" in err1
        _, second, err2 = run(capsys, "table", "--max-size", "1", "--cache-dir", cache)
        assert first == second
        assert "cache_hits=24" in err2

    def test_output_file(self, capsys, tmp_path):
        path = tmp_path / "t.jsonl"
        assert run(capsys, "table", "--max-size", "1", "--output", str(path))[0] == 0
        assert len(path.read_text().splitlines()) == 8


class TestCacheCommand:
    def test_stats_and_clear(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("VERTEX_CACHE_DIR", str(tmp_path))
        run(capsys, "compute", "--mu1", "[1]")
        _, out, _ = run(capsys, "cache", "stats")
        assert json.loads(out)["entries"] == 3
        _, out, _ = run(capsys, "cache", "clear")
        assert json.loads(out)["removed"] == 3

    def test_no_dir(self, capsys, monkeypatch):
        monkeypatch.delenv("VERTEX_CACHE_DIR", raising=False)
        assert run(capsys, "cache", "stats")[0] == 2
