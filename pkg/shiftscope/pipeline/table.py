from __future__ import annotations

from collections.abc import Mapping, Sequence

from shiftscope.pipeline.evaluation import EvaluationReport

ALL_COLUMN = "all"


def format_cell(report: EvaluationReport | None) -> str:
    if report is None:
        return "-"
    return f"{report.mae:.3f} ({report.std:.3f})"


def summary_columns(reports: Mapping[str, EvaluationReport]) -> list[str]:
    groups: dict[str, None] = {}
    for report in reports.values():
        for row in report.rows:
            groups.setdefault(row.group, None)
    return [*groups, ALL_COLUMN]


def summary_cells(
    reports: Mapping[str, EvaluationReport],
    columns: Sequence[str],
    pooled: Sequence[str] | None = None,
) -> list[list[str]]:
    """One ``[method, cell, ...]`` row per method, cells as ``MAE (std)``.

    The ``all`` column pools the groups in ``pooled`` (every group when
    ``None``).
    """
    table: list[list[str]] = []
    for method, report in reports.items():
        per_group = report.by_group()
        if pooled is None:
            per_group[ALL_COLUMN] = report
        else:
            rows = [row for row in report.rows if row.group in pooled]
            if rows:
                per_group[ALL_COLUMN] = EvaluationReport.from_rows(method, ALL_COLUMN, rows)
        table.append([method, *(format_cell(per_group.get(column)) for column in columns)])
    return table


def render_summary_table(
    reports: Mapping[str, EvaluationReport],
    *,
    title: str = "",
    columns: Sequence[str] | None = None,
    pooled: Sequence[str] | None = None,
) -> str:
    """Method x group text table of ``MAE (std)`` cells."""
    columns = list(columns) if columns is not None else summary_columns(reports)
    header = ["method", *columns]
    body = summary_cells(reports, columns, pooled)
    widths = [max(len(row[i]) for row in (header, *body)) for i in range(len(header))]

    def line(cells: Sequence[str]) -> str:
        return "  ".join(cell.ljust(width) for cell, width in zip(cells, widths)).rstrip()

    lines = [title] if title else []
    lines.append(line(header))
    lines.append("  ".join("-" * width for width in widths))
    lines.extend(line(row) for row in body)
    return "\n".join(lines) + "\n"


def render_markdown_table(
    reports: Mapping[str, EvaluationReport],
    *,
    columns: Sequence[str] | None = None,
    pooled: Sequence[str] | None = None,
) -> str:
    columns = list(columns) if columns is not None else summary_columns(reports)
    lines = [
        "| method | " + " | ".join(columns) + " |",
        "|---" * (len(columns) + 1) + "|",
    ]
    for row in summary_cells(reports, columns, pooled):
        lines.append("| " + " | ".join(row) + " |")
    return "\n".join(lines) + "\n"
