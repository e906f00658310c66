import csv
import io
import json

import pytest

from autcoh import checks, cli


def run(argv):
    out = io.StringIO()
    code = cli.run(argv, out=out)
    return code, out.getvalue()


class TestPredict:
    def test_nonvanishing(self):
        code, out = run(["predict", "--partition", "3,1", "--prime", "5", "--degree", "2", "--action", "trivial"])
        assert code == 0
        assert json.loads(out)["verdict"] == "nonvanishes"

    def test_text(self):
        code, out = run(["predict", "--partition", "2,1", "--prime", "3", "--degree", "2", "--format", "text"])
        assert code == 0 and "verdict: unknown" in out


class TestCompute:
    def test_g1_invariants(self):
        code, out = run(["compute", "--group", "g1", "--prime", "3", "--degree", "2", "--engine", "brute", "--invariants", "dl"])
        assert code == 0
        d = json.loads(out)
        assert d["dim"] == 1 and d["h2_dim"] == 3

    def test_dump(self, tmp_path):
        f = tmp_path / "dump.json"
        code, _ = run(["compute", "--group", "cyclic", "--exponent", "1", "--prime", "3", "--dump", str(f)])
        assert code == 0
        d = json.loads(f.read_text())
        assert sorted(d) == ["basis", "dim", "group", "prime"]
        assert d["dim"] == len(d["basis"]) == 1
        assert all(len(entry) == 3 for entry in d["basis"][0])

    def test_dump_stable(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for f in (a, b):
            run(["compute", "--group", "g2", "--prime", "3", "--dump", str(f)])
        assert a.read_bytes() == b.read_bytes()

    def test_pc_engine(self):
        code, out = run(["compute", "--group", "pl", "--partition", "2,1", "--prime", "3", "--engine", "pc"])
        assert code == 0 and json.loads(out)["dim"] == 4

    def test_natural(self):
        code, out = run(["compute", "--group", "gl", "--partition", "1,1", "--prime", "2", "--action", "natural"])
        assert code == 0 and json.loads(out)["invariants"] == []

    def test_h1(self):
        code, out = run(["compute", "--group", "gl", "--partition", "2", "--prime", "3", "--degree", "1"])
        assert code == 0 and json.loads(out)["dim"] == 1

    def test_cap_exit_code(self, capsys):
        code, _ = run(["compute", "--group", "g3", "--prime", "3", "--brute-cap", "100"])
        assert code == 1
        assert "skipped(cap)" in capsys.readouterr().err

    def test_missing_partition(self):
        assert run(["compute", "--group", "pl", "--prime", "3"])[0] == 2

    def test_natural_needs_matrix_group(self):
        assert run(["compute", "--group", "g1", "--prime", "3", "--action", "natural"])[0] == 2


class TestChiefSeries:
    def test_mto(self):
        code, out = run(["chief-series", "--partition", "2,1,1", "--prime", "3", "--order", "mto"])
        d = json.loads(out)
        assert code == 0 and d["ok"] and d["derived_matches"] is True
        assert d["orders"] == [3**i for i in range(7)]


class TestBadInput:
    @pytest.mark.parametrize(
        "argv",
        [
            ["--frob"],
            [],
            ["predict", "--partition", "1,2", "--prime", "3", "--degree", "2"],
            ["predict", "--partition", "2", "--prime", "4", "--degree", "2"],
            ["predict", "--partition", "2", "--prime", "3", "--degree", "3"],
            ["verify", "--suite", "nope"],
            ["compute", "--group", "g1", "--prime", "3", "--brute-cap", "0"],
        ],
    )
    def test_exit_two(self, argv, capsys):
        assert run(argv)[0] == 2
        assert "error" in capsys.readouterr().err


class TestVerify:
    def test_identity_suite(self):
        code, out = run(["verify", "--suite", "identity", "--format", "json", "--no-timing"])
        assert code == 0
        d = json.loads(out)
        assert d["suite"] == "identity"
        assert all(sorted(c) == ["computed", "expected", "id", "ms", "status"] for c in d["checks"])
        assert all(c["status"] == "pass" and c["ms"] is None for c in d["checks"])
        ids = [c["id"] for c in d["checks"]]
        assert ids == sorted(ids)

    def test_deterministic(self):
        argv = ["verify", "--suite", "hs", "--format", "json", "--no-timing", "--seed", "3"]
        assert run(argv)[1] == run(argv)[1]

    def test_criterion_prime(self):
        code, out = run(["verify", "--suite", "criterion", "--prime", "3", "--format", "json"])
        d = json.loads(out)
        assert code == 0 and all(c["id"].endswith("-p3") for c in d["checks"])

    def test_failing_check_gives_exit_one(self, monkeypatch):
        fake = checks.Check("always-fails", "hs", lambda ctx: ("1 [TRIVIAL]", "0", False))
        monkeypatch.setattr(checks, "registry", lambda prime=None: [fake])
        code, out = run(["verify", "--suite", "hs"])
        assert code == 1 and "FAIL" in out

    def test_expected_carries_provenance(self):
        code, out = run(["verify", "--suite", "hs", "--format", "json"])
        assert all("[" in c["expected"] for c in json.loads(out)["checks"])


class TestReport:
    def test_csv(self, tmp_path):
        f = tmp_path / "r.csv"
        code, out = run(["report", "--out", str(f), "--format", "csv", "--suite", "hs"])
        assert code == 0 and "3/3" in out
        rows = list(csv.DictReader(f.open()))
        assert list(rows[0]) == ["id", "status", "expected", "computed", "ms"]
        assert len(rows) == 3

    def test_json(self, tmp_path):
        f = tmp_path / "r.json"
        code, _ = run(["report", "--out", str(f), "--suite", "identity", "--no-timing"])
        d = json.loads(f.read_text())
        assert code == 0 and d["suite"] == "identity" and d["checks"]


class TestRegistry:
    def test_ids_unique(self):
        ids = [c.id for c in checks.registry()]
        assert len(ids) == len(set(ids))

    def test_every_suite_populated(self):
        suites = {c.suite for c in checks.registry()}
        assert suites == set(checks.SUITES)
