import csv
import io
import json
import os
import pathlib
import shutil

import pytest

import pogen

ROOT = pathlib.Path(os.environ.get("POGEN_SOURCE_DIR", pathlib.Path(__file__).resolve().parents[2]))
FIX = ROOT / "fixtures"
SCHEMA = json.loads((ROOT / "docs" / "report-schema.json").read_text())


def cli(*args):
    code, out, err = pogen.run_cli([str(a) for a in args])
    return code, out, err


def test_check_fixtures():
    ts = pogen.load(FIX / "sys_a.aag")
    v = pogen.check(ts, "ms01x")
    assert v["result"] == "unsafe"
    assert v["witness"].startswith("1\nb0\n")
    assert len(v["trace"]) == 2
    assert 0.0 <= v["stats"]["generalization_share"] <= 1.0

    stuck = pogen.TransitionSystem.from_aiger("aag 1 0 1 1 0\n2 2\n2\n")
    v = pogen.check(stuck)
    assert v["result"] == "safe"
    assert v["invariant"]


def test_refusal_names_capability():
    ts = pogen.load(FIX / "sys_c.aag")
    missing, reason = pogen.check_applicable("lifting", ts, lifting="plain")
    assert missing == "left_total"
    assert pogen.check_applicable("lifting", ts) is None
    with pytest.raises(pogen.InapplicableStrategy):
        pogen.check(ts, "lifting", lifting="plain")
    with pytest.raises(pogen.UnknownStrategy):
        pogen.check(ts, "no-such-strategy")


def test_portfolio_matches_single_runs():
    ts = pogen.load(FIX / "counter2.aag")
    p = pogen.portfolio(ts, ["ms01x", "igbg"])
    assert p["result"] == pogen.check(ts, "ms01x")["result"] == pogen.check(ts, "igbg")["result"]


def test_pogp_roundtrip_and_strategies():
    text = (FIX / "sys_b.pogp").read_text()
    p = pogen.PogpInstance.parse(text)
    assert p.problems() == []
    assert pogen.PogpInstance.parse(p.serialize()).serialize() == p.serialize()

    cover = pogen.generalize(p, "greedy-cover")
    qbf = pogen.generalize(p, "greedy-qbf")
    assert (cover["removed"], qbf["removed"]) == (0, 1)
    for r in (cover, qbf):
        sound, witness = pogen.verify_po(p, r["cube"])
        assert sound and witness is None
    assert pogen.oracle(p)[1] == 1


def test_unsound_cube_has_witness():
    # the counter is deterministic: no literal of a counter PO can go
    p = pogen.PogpInstance.parse(pogen.extract(pogen.load(FIX / "counter2.aag"))[0])
    assert pogen.oracle(p)[1] == 0
    sound, witness = pogen.verify_po(p, [])
    assert not sound and len(witness) == len(p.m)


def test_extract_instances_validate():
    ts = pogen.load(FIX / "counter2.aag")
    texts = pogen.extract(ts)
    assert texts
    for t in texts:
        p = pogen.PogpInstance.parse(t)
        p.validate()
        assert p.serialize() == t


def test_metrics():
    assert pogen.reduction_ratio(1, 2) == 0.5
    assert pogen.reduction_ratio(0, 0) == 0.0
    assert pogen.performance(1, 2) == 0.5
    assert pogen.performance(0, 0) == 1.0


def validate(report):
    jsonschema = pytest.importorskip("jsonschema")
    jsonschema.validate(report, SCHEMA)


def test_reports_follow_schema(tmp_path):
    code, out, _ = cli("check", FIX / "sys_a.aag", "--report", "json")
    assert code == 1
    validate(json.loads(out))

    code, out, _ = cli("bench", FIX / "sys_a.aag", FIX / "counter2.aag", "--strategies", "lifting,igbg", "--report", "json")
    assert code == 0
    validate(json.loads(out))

    code, out, _ = cli("extract", FIX / "counter2.aag", "--out", tmp_path / "ex", "--report", "json")
    assert code == 0
    validate(json.loads(out))

    for name in ("sys_a.pogp", "sys_b.pogp"):
        shutil.copy(FIX / name, tmp_path / name)
    code, out, _ = cli("compare", tmp_path, "--report", "json")
    assert code == 0
    validate(json.loads(out))


def test_csv_matches_json(tmp_path):
    for name in ("sys_a.pogp", "sys_b.pogp"):
        shutil.copy(FIX / name, tmp_path / name)
    _, js, _ = cli("compare", tmp_path, "--strategies", "greedy-cover,greedy-qbf", "--report", "json", "--no-times")
    _, cs, _ = cli("compare", tmp_path, "--strategies", "greedy-cover,greedy-qbf", "--report", "csv", "--no-times")
    rows = list(csv.DictReader(io.StringIO(cs)))
    assert list(rows[0].keys()) == SCHEMA["x-csv-columns"]["compare"]

    report = json.loads(js)
    flat = [(i["file"], r["strategy"], r["removed"], r["performance"]) for i in report["instances"] for r in i["results"]]
    from_csv = [(r["file"], r["strategy"], int(r["removed"]), float(r["performance"])) for r in rows]
    assert flat == from_csv

    by_name = {(pathlib.Path(f).name, s): (rem, perf) for f, s, rem, perf in flat}
    assert by_name[("sys_b.pogp", "greedy-cover")] == (0, 0.0)
    assert by_name[("sys_b.pogp", "greedy-qbf")] == (1, 1.0)
    assert by_name[("sys_a.pogp", "greedy-cover")] == (1, 0.5)

    _, out, _ = cli("check", FIX / "sys_a.aag", "--report", "csv")
    header = next(csv.reader(io.StringIO(out)))
    assert header == SCHEMA["x-csv-columns"]["check"]


def test_empty_compare_dir_fails(tmp_path):
    code, _, err = cli("compare", tmp_path)
    assert code > 2
    assert err
