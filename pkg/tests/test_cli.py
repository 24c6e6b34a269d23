import json

import pytest

from metarep.cli import RunConfig, main, render
from metarep.knotio import knot_from_spec


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def test_count_table_fig8(capsys):
    code, d = run_json(capsys, "count", "4_1", "--n-range", "1..6")
    assert code == 0
    rows = {r[0]: r for r in d["table"]["rows"]}
    assert [rows[n][1] for n in range(1, 7)] == [1, 2, 5, 10, 24, 50]
    assert all(rows[n][2] <= rows[n][1] for n in rows)


def test_count_trefoil_infinite(capsys):
    code, d = run_json(capsys, "count", "3_1", "--n-range", "5..7")
    assert code == 0
    rows = {r[0]: r for r in d["table"]["rows"]}
    assert rows[6][1] == "Infinite" and rows[6][4] == 2
    assert rows[5][1] == 0 and rows[7][1] == 0  # H_1 of those covers is trivial


def test_formats(capsys):
    _, text, _ = run(capsys, "count", "4_1", "--n-range", "2..3", "--format", "text")
    assert "classes" in text.splitlines()[0] or "classes" in text
    _, csv, _ = run(capsys, "count", "4_1", "--n-range", "2..3", "--format", "csv")
    assert csv.splitlines() == ["n,classes,lower_bound,torsion,b1", "2,2,2,5,0", "3,5,5,16,0"]


def test_deterministic_output(capsys):
    a = run(capsys, "reps", "5_2", "--n", "3")[1]
    b = run(capsys, "reps", "5_2", "--n", "3")[1]
    assert a == b


def test_reps_roundtrip(capsys, tmp_path):
    code, d = run_json(capsys, "reps", "4_1", "--n", "3")
    assert code == 0 and d["count"] == 5 == len(d["representations"])
    f = tmp_path / "reps.json"
    f.write_text(json.dumps(d))
    code, v = run_json(capsys, "reps", "4_1", "--n", "3", "--from-json", str(f))
    assert code == 0
    assert json.dumps(v, sort_keys=True).count("true") >= 5


def test_reps_float_backend(capsys):
    code, d = run_json(capsys, "reps", "4_1", "--n", "2", "--backend", "float")
    assert code == 0 and d["count"] == 2


@pytest.mark.parametrize(
    "argv,code",
    [
        (("count", "bogus"), 2),
        (("count", "pd:[(1,2,3)]"), 2),
        (("count", "torus:4,6"), 2),
        (("pipeline", "3_1", "--n", "6"), 4),
    ],
)
def test_exit_codes(capsys, argv, code):
    got, out, err = run(capsys, *argv)
    assert got == code
    assert err.startswith("metarep:")
    d = json.loads(out)
    assert "error" in d
    if code == 4:
        assert d["note"] == "Theorem 1 not applicable" and d["stage"] == "enumerate"


def test_bad_rank_rejected(capsys):
    code, out, err = run(capsys, "count", "4_1", "--n", "0")
    assert code == 2 and out == "" and err.startswith("metarep:")


def test_link_rejected(capsys):
    code, d = run_json(capsys, "count", "braid:s1 s1")
    assert code == 2 and d["error"] == "MultiComponentLink"


def test_pipeline_fig8(capsys):
    code, d = run_json(capsys, "pipeline", "4_1", "--n", "2", "--steps", "2")
    assert code == 0
    assert d["criterion_met"] and d["deform_certified"]
    assert d["cover"]["k"] == 5 == d["cover"]["b1_tilde"]
    assert [s["stage"] for s in d["stages"]][0] == "parse"
    assert all(s["status"] == "ok" for s in d["stages"])


def test_cohomology_and_twisted(capsys):
    code, d = run_json(capsys, "cohomology", "4_1", "--n", "3")
    assert code == 0
    assert d["cohomology"]["h1"] == 2 and d["criterion"]["criterion_met"]
    assert d["boundary"]["image_dim"] == 2
    code, d = run_json(capsys, "twisted-alex", "4_1", "--n", "2")
    assert code == 0 and d["text"]["adjoint"]


def test_sw_ratio(capsys):
    code, d = run_json(capsys, "sw", "4_1", "--n-range", "50..50")
    assert code == 0
    ratio = d["table"]["rows"][0][-1]
    assert abs(ratio - 1) < 0.05


def test_manual_presentation(capsys, tmp_path):
    f = tmp_path / "k.json"
    f.write_text(json.dumps(knot_from_spec("4_1").to_json()))
    code, d = run_json(capsys, "count", f"manual:{f}", "--n", "2")
    assert code == 0 and d["table"]["rows"][0][1] == 2


def test_output_file(capsys, tmp_path):
    f = tmp_path / "o.json"
    code, out, _ = run(capsys, "count", "4_1", "--n", "2", "--output", str(f))
    assert code == 0 and out == ""
    assert json.loads(f.read_text())["command"] == "count"


def test_config_validation():
    with pytest.raises(ValueError):
        RunConfig("4_1", fmt="xml")
    assert render({"a": None}, "text").strip().endswith("-")
