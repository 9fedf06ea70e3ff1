import json
from itertools import product
from pathlib import Path

import pytest

from vpartition.cli import run
from vpartition.oracle import count_points
from _helpers import NU

SYSTEMS = Path(__file__).resolve().parent.parent / "systems"


def call(capsys, *argv):
    code = run([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_formula_json(capsys):
    code, out, _ = call(capsys, "formula", "--system", SYSTEMS / "a2.json", "--chamber", "c1")
    assert code == 0
    data = json.loads(out)
    assert [t["pole"] for t in data["terms"]] == [["0", "0"]]
    assert data["terms"][0]["poly"] == "a2+1"


def test_count(capsys):
    code, out, _ = call(capsys, "count", "--system", SYSTEMS / "a2h2.json", "--lambda", "2,1")
    assert code == 0 and out.strip() == "10"


def test_validate_nonunimodular(capsys):
    code, out, _ = call(capsys, "validate", "--system", SYSTEMS / "nonuni.json", "--box", "-6..6")
    assert code == 0


def test_validate_reports_counterexample(capsys, tmp_path, monkeypatch):
    from vpartition import formulas
    real = formulas.partition_quasipoly

    def broken(s, c, *a, **k):
        qp = real(s, c, *a, **k)
        return qp + qp
    monkeypatch.setattr(formulas, "partition_quasipoly", broken)
    code, out, _ = call(capsys, "validate", "--system", SYSTEMS / "a2.json", "--box", "0..2")
    report = json.loads(out)
    assert code == 1 and report["status"] == "mismatch"
    assert report["expected"] != report["got"] and report["chamber"] == "c1"


def test_formula_round_trip_through_eval(capsys, tmp_path):
    for cid in ("c1", "c2"):
        code, out, _ = call(capsys, "formula", "--system", SYSTEMS / "nonuni.json", "--chamber", cid)
        assert code == 0
        path = tmp_path / f"{cid}.json"
        path.write_text(out)
        from vpartition.render import quasipoly_from_json
        qp = quasipoly_from_json(json.loads(out))
        for lam in product(range(-3, 7), repeat=2):
            if not qp.in_domain(lam):
                continue
            code, val, _ = call(capsys, "eval", "--formula", path, "--lambda", ",".join(map(str, lam)))
            assert code == 0
            assert int(json.loads(val)) == count_points(NU, lam)


def test_eval_outside_region_refused(capsys, tmp_path):
    code, out, _ = call(capsys, "formula", "--system", SYSTEMS / "a2.json", "--chamber", "c1")
    path = tmp_path / "f.json"
    path.write_text(out)
    code, _, _ = call(capsys, "eval", "--formula", path, "--lambda", "-9,-9")
    assert code == 1
    code, val, _ = call(capsys, "eval", "--formula", path, "--lambda", "-9,-9", "--force")
    assert code == 0 and json.loads(val) == "-8"


@pytest.mark.parametrize("argv", [
    ("formula", "--chamber", "c1", "--format", "latex"),
    ("formula", "--chamber", "c2", "--format", "text"),
    ("chambers",),
    ("ehrhart", "--lambda", "1,2"),
    ("volume", "--chamber", "c1"),
])
def test_output_byte_stable(capsys, argv):
    first = call(capsys, argv[0], "--system", SYSTEMS / "nonuni.json", *argv[1:])
    second = call(capsys, argv[0], "--system", SYSTEMS / "nonuni.json", *argv[1:])
    assert first[0] == 0 and first == second


def test_schema_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 2, "vectors": [[1, "x"]]}))
    code, _, err = call(capsys, "chambers", "--system", bad)
    assert code == 2 and err
    code, _, _ = call(capsys, "chambers", "--system", '{"n": 2, "vectors": [[1, 0], [-1, 0], [0, 1]]}')
    assert code == 2
    code, _, _ = call(capsys, "count", "--system", SYSTEMS / "a2.json", "--lambda", "1,x")
    assert code == 2


def test_exp_sum(capsys):
    code, _, err = call(capsys, "exp-sum", "--system", SYSTEMS / "a2.json", "--chamber", "c1", "--y", "0,0,0")
    assert code == 1
    code, out, _ = call(capsys, "exp-sum", "--system", SYSTEMS / "a2.json", "--chamber", "c1",
                        "--r", "1/5,1/7,1/11", "--lambda", "3,2")
    assert code == 0


def test_other_commands(capsys):
    code, out, _ = call(capsys, "sum", "--system", SYSTEMS / "a2.json", "--weight", "x3", "--chamber", "c1",
                        "--lambda", "3,2")
    assert code == 0
    code, out, _ = call(capsys, "ehrhart", "--system", SYSTEMS / "two_three.json", "--lambda", "1")
    assert code == 0 and json.loads(out)["period"] == 6
    code, out, _ = call(capsys, "embed", "--polytope", '{"normals": [[1, 0], [0, 1], [-1, -1]], "offsets": [0, 0, 3]}')
    assert code == 0
