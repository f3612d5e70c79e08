from dataclasses import replace
import json
from pathlib import Path
import tomllib

import pytest

from shiftscope.data import accuracy
from shiftscope.io import parse_csv, save_dataset, write_manifest
from shiftscope.workbench import ShiftFamily, ShiftKind, apply_shift, gen_task, train_reference_classifier
from shiftscope_cli.main import main


@pytest.fixture(scope="module")
def manifest(tmp_path_factory) -> Path:
    """Small manifest with two labeled groups, one unlabeled and one featureless target."""
    root = tmp_path_factory.mktemp("data")
    task, samples = gen_task(0, k=4, d=8, n=400)
    reference, splits = train_reference_classifier(task, samples)
    entries = [save_dataset(root, replace(splits["test"], name="base"), "base")]
    for kind, group, count in (
        (ShiftKind.FEATURE_NOISE, "noise", 4),
        (ShiftKind.MEAN_TRANSLATION, "translation", 3),
    ):
        family = ShiftFamily.default(kind)
        for index, intensity in enumerate(family.intensity_grid[:count]):
            target = apply_shift(task, reference, family, intensity, 400, 0, name=f"{group}-{index}")
            entries.append(save_dataset(root, target, group))
    family = ShiftFamily.default(ShiftKind.MEAN_TRANSLATION)
    fresh = apply_shift(task, reference, family, 1.0, 400, 1, name="fresh")
    entries.append(save_dataset(root, fresh.without_labels(), "new"))
    bare = replace(fresh, name="bare", features=None, rotated_features=None)
    entries.append(save_dataset(root, bare, "bare"))
    path = root / "manifest.json"
    write_manifest(path, entries)
    return path


def test_pyproject_defines_installable_console_script() -> None:
    pyproject = tomllib.loads(Path("apps/cli/pyproject.toml").read_text(encoding="utf-8"))

    assert pyproject["project"]["scripts"]["shiftscope"] == "shiftscope_cli.main:main"
    assert pyproject["build-system"]["build-backend"] == "hatchling.build"
    assert pyproject["project"]["dependencies"] == ["shiftscope"]


def test_cli_help_lists_commands(capsys) -> None:
    with pytest.raises(SystemExit) as exc:
        main(["--help"])

    assert exc.value.code == 0
    output = capsys.readouterr().out
    for command in ("measure", "calibrate", "predict", "evaluate", "demo", "inspect"):
        assert command in output


def test_cli_rejects_unknown_command() -> None:
    with pytest.raises(SystemExit) as exc:
        main(["train"])

    assert exc.value.code == 2


def test_measure_base_against_itself(manifest, capsys) -> None:
    code = main(["measure", "--manifest", str(manifest), "--base", "base", "--targets", "base", "--methods", "doc"])

    assert code == 0
    rows = parse_csv(capsys.readouterr().out)
    assert rows == [{"base": "base", "target": "base", "method": "doc", "value": "0.0"}]


def test_measure_writes_distances(manifest, tmp_path, capsys) -> None:
    code = main([
        "measure", "--manifest", str(manifest), "--base", "base",
        "--methods", "doc,frechet", "--targets", "noise-3,fresh",
        "--output-dir", str(tmp_path),
    ])

    assert code == 0
    printed = capsys.readouterr().out
    assert (tmp_path / "distances.csv").read_text(encoding="utf-8") == printed
    rows = parse_csv(printed)
    assert [(row["target"], row["method"]) for row in rows] == [
        ("fresh", "doc"), ("fresh", "frechet"), ("noise-3", "doc"), ("noise-3", "frechet"),
    ]


def test_measure_missing_features_is_a_data_error(manifest, capsys) -> None:
    code = main(["measure", "--manifest", str(manifest), "--base", "base", "--targets", "bare", "--methods", "frechet"])

    assert code == 3
    assert "frechet" in capsys.readouterr().err


def test_measure_unknown_target(manifest, capsys) -> None:
    code = main(["measure", "--manifest", str(manifest), "--base", "base", "--targets", "ghost"])

    assert code == 2
    assert "ghost" in capsys.readouterr().err


def test_evaluate_rejects_leakage(manifest, capsys) -> None:
    code = main([
        "evaluate", "--manifest", str(manifest), "--base", "base",
        "--cal-group", "noise", "--val-group", "translation,noise",
    ])

    assert code == 2
    assert "leakage" in capsys.readouterr().err


def test_evaluate_needs_a_source_of_predictors(manifest, capsys) -> None:
    code = main(["evaluate", "--manifest", str(manifest), "--base", "base", "--val-group", "translation"])

    assert code == 2
    assert "--cal-group or --predictors" in capsys.readouterr().err


def test_evaluate_prints_table(manifest, capsys) -> None:
    code = main([
        "evaluate", "--manifest", str(manifest), "--base", "base",
        "--cal-group", "noise", "--val-group", "translation", "--methods", "base_acc,doc",
    ])

    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "MAE (std)"
    assert lines[1].split() == ["method", "translation", "all"]
    assert [line.split()[0] for line in lines[3:]] == ["base_acc", "doc"]


def test_calibrate_then_predict(manifest, tmp_path, capsys) -> None:
    predictors = tmp_path / "predictors"
    code = main([
        "calibrate", "--manifest", str(manifest), "--base", "base",
        "--cal-group", "noise", "--methods", "ac,doc", "--output-dir", str(predictors),
    ])

    assert code == 0
    assert capsys.readouterr().out.startswith("calibrated 2 predictors on 4 shifts:")

    code = main([
        "predict", "--manifest", str(manifest), "--base", "base",
        "--predictors", str(predictors), "--targets", "fresh",
    ])

    assert code == 0
    rows = parse_csv(capsys.readouterr().out)
    assert [(row["target"], row["method"]) for row in rows] == [("fresh", "ac"), ("fresh", "doc")]
    assert all(0.0 <= float(row["pred_acc"]) <= 1.0 for row in rows)

    code = main([
        "evaluate", "--manifest", str(manifest), "--base", "base",
        "--predictors", str(predictors), "--val-group", "new", "--methods", "doc",
    ])

    assert code == 3
    assert "labels required" in capsys.readouterr().err


def test_predict_with_missing_predictors(manifest, tmp_path, capsys) -> None:
    code = main([
        "predict", "--manifest", str(manifest), "--base", "base",
        "--predictors", str(tmp_path), "--targets", "fresh",
    ])

    assert code == 3
    assert "cannot read predictors" in capsys.readouterr().err


def test_inspect_lists_every_dataset(manifest, capsys) -> None:
    code = main(["inspect", "--manifest", str(manifest)])

    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].split() == ["name", "group", "n", "d", "k", "labels", "labeled", "accuracy", "ece"]
    assert len(lines) == 11
    bare = next(line for line in lines if line.startswith("bare "))
    assert bare.split()[:6] == ["bare", "bare", "400", "4", "4", "yes"]

    code = main(["inspect", "--manifest", str(manifest), "--format", "csv"])

    assert code == 0
    rows = {row["name"]: row for row in parse_csv(capsys.readouterr().out)}
    assert len(rows) == 10
    base = rows["base"]
    assert (base["group"], base["n"], base["d"], base["k"], base["labels"], base["labeled"]) == (
        "base", "400", "8", "4", "4", "yes",
    )
    assert 0.0 < float(base["accuracy"]) <= 1.0
    assert 0.0 <= float(base["ece"]) <= 1.0
    assert (rows["fresh"]["labeled"], rows["fresh"]["accuracy"]) == ("no", "")
    assert rows["bare"]["d"] == ""


def test_demo_rejects_unwritable_output(tmp_path, capsys) -> None:
    blocker = tmp_path / "file"
    blocker.write_text("", encoding="utf-8")

    code = main(["demo", "--output-dir", str(blocker / "out")])

    assert code == 2
    assert "not writable" in capsys.readouterr().err


@pytest.fixture(scope="module")
def null_shift_manifest(tmp_path_factory) -> tuple[Path, float]:
    """Base, five feature-noise calibration shifts and an unshifted target."""
    root = tmp_path_factory.mktemp("null")
    task, samples = gen_task(0, k=4, d=8, n=2_000)
    reference, splits = train_reference_classifier(task, samples)
    base = replace(splits["test"], name="base")
    entries = [save_dataset(root, base, "base")]
    family = ShiftFamily.default(ShiftKind.FEATURE_NOISE)
    for index, intensity in enumerate(family.intensity_grid[:5]):
        target = apply_shift(task, reference, family, intensity, 2_000, 0, name=f"noise-{index}")
        entries.append(save_dataset(root, target, "noise"))
    unshifted = apply_shift(task, reference, family, 0.0, 2_000, 1, name="same")
    entries.append(save_dataset(root, unshifted.without_labels(), "new"))
    path = root / "manifest.json"
    write_manifest(path, entries)
    return path, accuracy(base.view())


def calibrate(manifest: Path, output: Path, capsys, *extra: str) -> None:
    code = main([
        "calibrate", "--manifest", str(manifest), "--base", "base",
        "--cal-group", "noise", "--output-dir", str(output), *extra,
    ])
    assert code == 0
    capsys.readouterr()


def test_null_shift_prediction_matches_base_accuracy(null_shift_manifest, tmp_path, capsys) -> None:
    manifest, base_accuracy = null_shift_manifest
    calibrate(manifest, tmp_path, capsys, "--methods", "doc")

    code = main(["predict", "--manifest", str(manifest), "--base", "base", "--predictors", str(tmp_path), "--targets", "same"])

    assert code == 0
    [row] = parse_csv(capsys.readouterr().out)
    assert (row["target"], row["method"]) == ("same", "doc")
    assert abs(float(row["pred_acc"]) - base_accuracy) < 0.03


def test_saved_predictors_refuse_their_calibration_group(manifest, tmp_path, capsys) -> None:
    calibrate(manifest, tmp_path, capsys, "--methods", "doc")

    code = main([
        "evaluate", "--manifest", str(manifest), "--base", "base",
        "--predictors", str(tmp_path), "--val-group", "translation,noise",
    ])

    assert code == 2
    assert "leakage" in capsys.readouterr().err

    code = main([
        "predict", "--manifest", str(manifest), "--base", "base",
        "--predictors", str(tmp_path), "--val-group", "noise",
    ])

    assert code == 2
    assert "leakage" in capsys.readouterr().err

    code = main([
        "evaluate", "--manifest", str(manifest), "--base", "base",
        "--predictors", str(tmp_path), "--val-group", "translation",
    ])

    assert code == 0


def test_calibrate_records_its_group(manifest, tmp_path, capsys) -> None:
    code = main([
        "calibrate", "--manifest", str(manifest), "--base", "base", "--cal-group", "noise",
        "--methods", "ac,doc", "--output-dir", str(tmp_path), "--format", "csv",
    ])

    assert code == 0
    rows = parse_csv(capsys.readouterr().out)
    assert [(row["name"], row["method"], row["features"], row["cal_groups"]) for row in rows] == [
        ("ac", "ac", "", "noise"),
        ("doc", "doc", "doc", "noise"),
    ]
    document = json.loads((tmp_path / "predictors.json").read_text(encoding="utf-8"))
    assert {tuple(record["cal_groups"]) for record in document["predictors"]} == {("noise",)}


def test_malformed_manifest_paths_are_data_errors(manifest, tmp_path, capsys) -> None:
    document = json.loads(manifest.read_text(encoding="utf-8"))
    document["datasets"][0]["features_path"] = 123
    broken = tmp_path / "manifest.json"
    broken.write_text(json.dumps(document), encoding="utf-8")

    code = main(["inspect", "--manifest", str(broken)])

    assert code == 3
    assert "malformed manifest entry" in capsys.readouterr().err


def test_malformed_predictors_are_data_errors(manifest, tmp_path, capsys) -> None:
    calibrate(manifest, tmp_path, capsys, "--methods", "doc")
    path = tmp_path / "predictors.json"
    document = json.loads(path.read_text(encoding="utf-8"))
    for record in document["predictors"]:
        record["temperature"] = "hot"
    path.write_text(json.dumps(document), encoding="utf-8")

    code = main(["predict", "--manifest", str(manifest), "--base", "base", "--predictors", str(tmp_path), "--targets", "fresh"])

    assert code == 3
    assert "malformed predictor record" in capsys.readouterr().err


def test_demo_summary_as_csv(capsys) -> None:
    code = main(["demo", "--seed", "1", "--methods", "base_acc,doc", "--format", "csv"])

    assert code == 0
    rows = parse_csv(capsys.readouterr().out)
    assert {row["method"] for row in rows} == {"base_acc", "doc"}
    assert {row["group"] for row in rows} == {
        "mean_translation", "covariance_scale", "label_subset", "all", "grid_rotation_confound",
    }


@pytest.mark.slow
def test_demo_output_is_byte_identical(tmp_path, capsys) -> None:
    outputs = []
    for name in ("a", "b"):
        code = main(["demo", "--seed", "2", "--methods", "base_acc,ac,doc", "--output-dir", str(tmp_path / name)])
        assert code == 0
        outputs.append(capsys.readouterr().out.splitlines()[:-1])

    assert outputs[0] == outputs[1]
    files = sorted(p.relative_to(tmp_path / "a") for p in (tmp_path / "a").rglob("*") if p.is_file())
    assert files == sorted(p.relative_to(tmp_path / "b") for p in (tmp_path / "b").rglob("*") if p.is_file())
    for name in files:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes(), name
