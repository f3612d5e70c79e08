import json

import pytest

from shiftscope.exceptions import ConfigError
from shiftscope.workbench import build_demo_datasets, run_demo
from shiftscope.workbench.demo import HELD_OUT, MAIN_FAMILIES

SMALL = {"k": 4, "d": 8, "n": 400}


def test_demo_universe_layout():
    datasets = build_demo_datasets(0, **SMALL)
    assert datasets[0].name == "base"
    groups = {}
    for item in datasets[1:]:
        groups.setdefault(item.group, []).append(item.name)
    assert len(groups["feature_noise"]) == 8 * 3
    assert len(groups["mean_translation"]) == 5
    assert len(groups[HELD_OUT.value]) == 5
    assert "feature_noise-07-s2" in groups["feature_noise"]


def test_demo_rejects_held_out_calibration():
    with pytest.raises(ConfigError, match="reserved"):
        build_demo_datasets(0, HELD_OUT, **SMALL)


def test_demo_table_and_reports():
    result = run_demo(0, methods="base_acc,ac,doc,doc_feat", **SMALL)
    assert set(result.reports) == {"base_acc", "ac", "doc", "doc_feat"}
    assert set(result.held_out) == set(result.reports)
    header = result.table.splitlines()[1].split()
    expected = [kind.value for kind in MAIN_FAMILIES[1:]]
    assert header == ["method", *expected, "all", HELD_OUT.value]
    for report in result.reports.values():
        assert {row.group for row in report.rows} == set(expected)
    assert all(row.group == HELD_OUT.value for row in result.held_out["doc"].rows)


def test_doc_beats_base_accuracy_on_a_small_demo():
    reports = run_demo(0, methods="base_acc,doc", **SMALL).reports
    assert reports["doc"].mae < reports["base_acc"].mae


def test_demo_outputs_are_byte_identical(tmp_path):
    first = run_demo(1, out_dir=tmp_path / "a", methods="base_acc,ac,doc,frechet", **SMALL)
    run_demo(1, out_dir=tmp_path / "b", methods="base_acc,ac,doc,frechet", **SMALL)
    names = sorted(p.relative_to(tmp_path / "a") for p in (tmp_path / "a").rglob("*") if p.is_file())
    assert names == sorted(p.relative_to(tmp_path / "b") for p in (tmp_path / "b").rglob("*") if p.is_file())
    for name in names:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes(), name
    index = json.loads((tmp_path / "a" / "artifacts.json").read_text(encoding="utf-8"))
    assert {"distances.csv", "summary.txt", "data/manifest.json"} <= {item["name"] for item in index}
    assert len(first.artifacts) == len(index) + 1


def test_demo_unwritable_output(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("", encoding="utf-8")
    with pytest.raises(ConfigError, match="not writable"):
        run_demo(0, out_dir=blocker / "out", methods="doc", **SMALL)


@pytest.mark.slow
def test_doc_beats_the_baselines_across_seeds():
    wins_over_base = 0
    wins_over_ac = 0
    for seed in range(10):
        reports = run_demo(seed, methods="base_acc,ac,doc").reports
        wins_over_base += reports["doc"].mae < reports["base_acc"].mae
        wins_over_ac += reports["doc"].mae <= reports["ac"].mae
    assert wins_over_base == 10
    assert wins_over_ac >= 8
