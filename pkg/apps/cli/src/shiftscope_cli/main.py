"""shiftscope command-line interface.

Exit codes: 0 on success, 2 for usage or configuration errors (including
overlapping calibration and validation groups), 3 for data errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Callable, Iterable, Sequence
from pathlib import Path

from shiftscope import (
    AccuracyPredictor,
    ConfigError,
    Settings,
    ShiftScopeError,
    Temperature,
    accuracy,
    expected_calibration_error,
    load_manifest,
    load_settings,
)
from shiftscope.artifacts import ArtifactKind, ArtifactStore
from shiftscope.io import DISTANCE_HEADER, PREDICTION_HEADER, GroupedDataset, render_csv
from shiftscope.pipeline import (
    MeasureContext,
    Method,
    ShiftMeasurement,
    calibrate_and_validate,
    combined_keys,
    EvaluationReport,
    ensure_no_leakage,
    evaluate,
    fit_predictor,
    load_predictors,
    measure,
    measured_methods,
    parse_methods,
    predict_accuracy,
    render_summary_table,
    save_predictors,
)
from shiftscope.pipeline.methods import COMBINED, FEATURE_KEY
from shiftscope.workbench import ShiftKind, run_demo

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3

SUMMARY_HEADER = ("method", "group", "mae", "std")
CALIBRATION_HEADER = ("name", "method", "features", "cal_groups")
INSPECT_HEADER = ("name", "group", "n", "d", "k", "labels", "labeled", "accuracy", "ece")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shiftscope",
        description="Predict classifier accuracy on shifted datasets.",
    )
    subcommands = parser.add_subparsers(dest="command", required=True)

    measure_parser = _subparser(subcommands, "measure")
    _add_data_flags(measure_parser)
    measure_parser.add_argument("--targets", help="Comma-separated target names; default every non-base dataset.")
    _add_common_flags(measure_parser)

    calibrate_parser = _subparser(subcommands, "calibrate")
    _add_data_flags(calibrate_parser)
    calibrate_parser.add_argument("--cal-group", required=True, help="Group tag of the calibration shifts.")
    _add_common_flags(calibrate_parser)

    predict_parser = _subparser(subcommands, "predict")
    _add_data_flags(predict_parser)
    predict_parser.add_argument("--predictors", required=True, help="Directory written by `calibrate`.")
    predict_parser.add_argument("--targets", help="Comma-separated target names.")
    predict_parser.add_argument("--val-group", help="Predict every dataset in these comma-separated groups.")
    _add_common_flags(predict_parser)

    evaluate_parser = _subparser(subcommands, "evaluate")
    _add_data_flags(evaluate_parser)
    evaluate_parser.add_argument("--cal-group", help="Calibrate on this group before evaluating.")
    evaluate_parser.add_argument("--val-group", required=True, help="Comma-separated validation group tags.")
    evaluate_parser.add_argument("--predictors", help="Evaluate saved predictors instead of calibrating.")
    _add_common_flags(evaluate_parser)

    demo_parser = _subparser(subcommands, "demo")
    demo_parser.add_argument(
        "--calibrate-on",
        choices=[kind.value for kind in ShiftKind if kind is not ShiftKind.GRID_ROTATION_CONFOUND],
        default=ShiftKind.FEATURE_NOISE.value,
        help="Shift family used for calibration.",
    )
    demo_parser.add_argument("--methods", default="all", help="Comma-separated methods or 'all'.")
    _add_common_flags(demo_parser)

    inspect_parser = _subparser(subcommands, "inspect")
    inspect_parser.add_argument("--manifest", required=True, help="Path to the dataset manifest.")
    _add_common_flags(inspect_parser)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)

    handlers: dict[str, Callable[[argparse.Namespace], int]] = {
        "measure": cmd_measure,
        "calibrate": cmd_calibrate,
        "predict": cmd_predict,
        "evaluate": cmd_evaluate,
        "demo": cmd_demo,
        "inspect": cmd_inspect,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ShiftScopeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA


def cmd_measure(args: argparse.Namespace) -> int:
    settings = _settings(args)
    methods = parse_methods(args.methods)
    datasets = load_manifest(args.manifest)
    base = _find(datasets, args.base)
    targets = _select(datasets, args.base, names=_split(args.targets))
    context = MeasureContext(settings)
    measurements = [
        measure(base.dataset, item.dataset, methods, settings, group=item.group, context=context)
        for item in targets
    ]
    rows = [
        (m.base_name, m.target_name, method.value, _method_value(m, method))
        for m in measurements
        for method in methods
    ]
    _emit(args, "distances.csv", DISTANCE_HEADER, rows, ArtifactKind.DISTANCES)
    return EXIT_OK


def cmd_calibrate(args: argparse.Namespace) -> int:
    settings = _settings(args)
    methods = parse_methods(args.methods)
    datasets = load_manifest(args.manifest)
    base = _find(datasets, args.base)
    calibration_targets = _select(datasets, args.base, groups=[args.cal_group])
    context = MeasureContext(settings)
    calibration = [
        measure(base.dataset, item.dataset, measured_methods(methods, settings), settings,
                group=item.group, context=context)
        for item in calibration_targets
    ]
    temperature = context.temperature(base.dataset) if Method.AC_TEMPSCALING in methods else None
    predictors = {
        method.value: fit_predictor(calibration, method, settings=settings, temperature=temperature)
        for method in methods
    }
    if settings.combined_features:
        predictors[COMBINED] = fit_predictor(
            calibration,
            COMBINED,
            settings=settings,
            feature_keys=combined_keys(settings),
        )
    output = Path(args.output_dir or ".")
    path = save_predictors(output, predictors)
    if args.format:
        rows = [
            (name, p.method, "+".join(p.feature_keys), "+".join(p.cal_groups))
            for name, p in sorted(predictors.items())
        ]
        _emit(args, "calibration.csv", CALIBRATION_HEADER, rows, ArtifactKind.PREDICTORS)
    else:
        print(f"calibrated {len(predictors)} predictors on {len(calibration)} shifts: {path}")
    return EXIT_OK


def cmd_predict(args: argparse.Namespace) -> int:
    settings = _settings(args)
    predictors = load_predictors(args.predictors)
    datasets = load_manifest(args.manifest)
    base = _find(datasets, args.base)
    targets = _select(
        datasets, args.base, names=_split(args.targets), groups=_split(args.val_group)
    )
    selected = _choose_predictors(predictors, args.methods)
    _check_leakage(predictors, selected, {item.group for item in targets})
    methods = _predictor_methods(predictors, selected)
    context = MeasureContext(settings, temperature=_temperature_of(predictors))
    rows = []
    for item in targets:
        # labels never reach the prediction path
        measurement = measure(
            base.dataset, item.dataset.without_labels(), methods, settings,
            group=item.group, context=context,
        )
        for name in selected:
            rows.append((item.name, name, predict_accuracy(predictors[name], measurement)))
    _emit(args, "predictions.csv", PREDICTION_HEADER, rows, ArtifactKind.PREDICTIONS)
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace) -> int:
    settings = _settings(args)
    val_groups = _split(args.val_group)
    datasets = load_manifest(args.manifest)
    if args.predictors:
        predictors = load_predictors(args.predictors)
        base = _find(datasets, args.base)
        selected = _choose_predictors(predictors, args.methods)
        _check_leakage(predictors, selected, val_groups)
        context = MeasureContext(settings, temperature=_temperature_of(predictors))
        methods = _predictor_methods(predictors, selected)
        validation = [
            measure(base.dataset, item.dataset, methods, settings, group=item.group, context=context)
            for item in _select(datasets, args.base, groups=val_groups)
        ]
        reports = {name: evaluate(predictors[name], validation, ",".join(val_groups)) for name in selected}
    else:
        if not args.cal_group:
            raise ConfigError("evaluate needs --cal-group or --predictors")
        result = calibrate_and_validate(
            datasets, args.base, args.cal_group, val_groups, args.methods, settings
        )
        reports = result.reports

    if _format(args, "table") == "csv":
        _emit(args, "summary.csv", SUMMARY_HEADER, _summary_rows(reports), ArtifactKind.EVALUATION)
    else:
        table = render_summary_table(reports, title="MAE (std)")
        print(table, end="")
        if args.output_dir:
            store = ArtifactStore.open(args.output_dir)
            store.write_text("summary.txt", table, kind=ArtifactKind.TABLE)
            for name, report in reports.items():
                store.write_text(f"evaluation/{name}.csv", report.csv(), kind=ArtifactKind.EVALUATION)
    return EXIT_OK


def cmd_demo(args: argparse.Namespace) -> int:
    settings = _settings(args)
    result = run_demo(
        args.seed,
        settings,
        args.output_dir,
        calibrate_on=args.calibrate_on,
        methods=args.methods,
    )
    if _format(args, "table") == "csv":
        rows = _summary_rows(result.reports) + _summary_rows(result.held_out, groups=False)
        print(render_csv(SUMMARY_HEADER, rows), end="")
        stream = sys.stderr
    else:
        print(result.table, end="")
        stream = sys.stdout
    if result.artifacts:
        print(f"wrote {len(result.artifacts)} artifacts to {args.output_dir}", file=stream)
    return EXIT_OK


def cmd_inspect(args: argparse.Namespace) -> int:
    settings = _settings(args)
    rows = []
    for item in load_manifest(args.manifest):
        dataset = item.dataset
        assert dataset.label_space is not None
        accuracy_value: float | str = ""
        ece: float | str = ""
        if dataset.is_labeled:
            view = dataset.view()
            accuracy_value = accuracy(view)
            ece = expected_calibration_error(view, settings.ece_bins)
        rows.append((
            dataset.name,
            item.group,
            dataset.n,
            dataset.d if dataset.d is not None else "",
            dataset.k,
            len(dataset.label_space),
            "yes" if dataset.is_labeled else "no",
            accuracy_value,
            ece,
        ))
    _emit(args, "inspect.csv", INSPECT_HEADER, rows, ArtifactKind.TABLE, default="table")
    return EXIT_OK


def _add_data_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--manifest", required=True, help="Path to the dataset manifest.")
    parser.add_argument("--base", required=True, help="Name of the labeled base dataset.")
    parser.add_argument("--methods", default="all", help="Comma-separated methods or 'all'.")


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0, help="Global seed.")
    parser.add_argument("--output-dir", help="Directory for written artifacts.")
    parser.add_argument("--format", choices=("csv", "table"), help="Output format.")
    parser.add_argument(
        "--regressor", choices=("linear", "mlp"), help="Gap regressor for regressor methods."
    )
    parser.add_argument("--settings", help="TOML settings file.")
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="Log progress; repeat for debug output."
    )


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity == 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )


def _settings(args: argparse.Namespace) -> Settings:
    settings = load_settings(args.settings) if args.settings else Settings()
    return settings.merge(seed=args.seed, regressor=args.regressor)


def _split(value: str | None) -> list[str]:
    if not value:
        return []
    return [item.strip() for item in value.split(",") if item.strip()]


def _find(datasets: Sequence[GroupedDataset], name: str) -> GroupedDataset:
    for item in datasets:
        if item.name == name:
            return item
    raise ConfigError(f"unknown base dataset: {name}")


def _select(
    datasets: Sequence[GroupedDataset],
    base_name: str,
    *,
    names: Sequence[str] = (),
    groups: Sequence[str] = (),
) -> list[GroupedDataset]:
    known = {item.name for item in datasets}
    missing = [name for name in names if name not in known]
    if missing:
        raise ConfigError(f"unknown target datasets: {', '.join(missing)}")
    chosen = [
        item
        for item in datasets
        if (item.name in names or item.group in groups or not (names or groups))
        and (item.name != base_name or item.name in names)
    ]
    return sorted(chosen, key=lambda item: item.name)


def _method_value(measurement: ShiftMeasurement, method: Method) -> float:
    key = FEATURE_KEY[method]
    if key is None:
        return measurement.base_acc_on_intersection
    return measurement.feature(key)


def _choose_predictors(predictors: dict[str, AccuracyPredictor], methods: str) -> list[str]:
    if methods == "all":
        return list(predictors)
    wanted = _split(methods)
    missing = [name for name in wanted if name not in predictors]
    if missing:
        raise ConfigError(f"no saved predictor for: {', '.join(missing)}")
    return wanted


def _predictor_methods(
    predictors: dict[str, AccuracyPredictor], selected: Sequence[str]
) -> tuple[Method, ...]:
    feature_methods = {key: method for method, key in FEATURE_KEY.items() if key is not None}
    methods: list[Method] = []
    for name in selected:
        predictor = predictors[name]
        if predictor.method != COMBINED:
            methods.append(Method(predictor.method))
        methods.extend(feature_methods[key] for key in predictor.feature_keys)
    return tuple(dict.fromkeys(methods))


def _check_leakage(
    predictors: dict[str, AccuracyPredictor], selected: Sequence[str], groups: Iterable[str]
) -> None:
    cal_groups = {group for name in selected for group in predictors[name].cal_groups}
    ensure_no_leakage(cal_groups, groups)


def _temperature_of(predictors: dict[str, AccuracyPredictor]) -> Temperature | None:
    for predictor in predictors.values():
        if predictor.fitted_temperature is not None:
            return predictor.fitted_temperature
    return None


def _format(args: argparse.Namespace, default: str) -> str:
    return args.format or default


def _summary_rows(reports: dict[str, EvaluationReport], *, groups: bool = True) -> list[tuple]:
    rows = []
    for name, full in reports.items():
        parts = {**full.by_group(), "all": full} if groups else {full.grouping: full}
        rows.extend((name, group, report.mae, report.std) for group, report in parts.items())
    return rows


def _emit(
    args: argparse.Namespace,
    name: str,
    header: tuple[str, ...],
    rows: Sequence[tuple],
    kind: ArtifactKind,
    *,
    default: str = "csv",
) -> None:
    if _format(args, default) == "table":
        text = _render_table(header, rows)
    else:
        text = render_csv(header, rows)
    print(text, end="")
    if args.output_dir:
        ArtifactStore.open(args.output_dir).write_text(name, render_csv(header, rows), kind=kind)


def _render_table(header: tuple[str, ...], rows: Sequence[tuple]) -> str:
    cells = [list(header)] + [
        [f"{value:.6f}" if isinstance(value, float) else str(value) for value in row] for row in rows
    ]
    widths = [max(len(row[i]) for row in cells) for i in range(len(header))]
    return "".join(
        "  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip() + "\n"
        for row in cells
    )


def _subparser(
    subcommands: argparse._SubParsersAction[argparse.ArgumentParser],
    name: str,
) -> argparse.ArgumentParser:
    descriptions = {
        "measure": "Compute shift features of targets against a base dataset.",
        "calibrate": "Fit accuracy predictors on a calibration group.",
        "predict": "Predict accuracy on (possibly unlabeled) targets.",
        "evaluate": "Score predictors on labeled validation groups.",
        "demo": "Run the synthetic calibrate/validate protocol end to end.",
        "inspect": "Print dataset shapes and label spaces.",
    }
    examples = {
        "measure": (
            "examples:\n"
            "  shiftscope measure --manifest data/manifest.json --base base --methods doc,frechet"
        ),
        "calibrate": (
            "examples:\n"
            "  shiftscope calibrate --manifest data/manifest.json --base base"
            " --cal-group feature_noise --methods doc --output-dir predictors"
        ),
        "predict": (
            "examples:\n"
            "  shiftscope predict --manifest data/manifest.json --base base"
            " --predictors predictors --targets new-batch"
        ),
        "evaluate": (
            "examples:\n"
            "  shiftscope evaluate --manifest data/manifest.json --base base"
            " --cal-group feature_noise --val-group mean_translation,label_subset"
        ),
        "demo": "examples:\n  shiftscope demo --seed 3 --output-dir out",
        "inspect": "examples:\n  shiftscope inspect --manifest data/manifest.json",
    }
    return subcommands.add_parser(
        name,
        description=descriptions[name],
        epilog=examples[name],
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )


__all__ = [
    "build_parser",
    "cmd_calibrate",
    "cmd_demo",
    "cmd_evaluate",
    "cmd_inspect",
    "cmd_measure",
    "cmd_predict",
    "main",
]
