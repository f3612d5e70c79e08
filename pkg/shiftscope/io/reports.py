"""CSV report formats.

Distance reports have the header ``base,target,method,value``; evaluation
reports ``target,true_acc,pred_acc,abs_err``; prediction reports
``target,method,pred_acc``. Floats are written with ``repr`` so equal runs
produce byte-identical files.
"""

from __future__ import annotations

import csv
import io
from collections.abc import Iterable

DISTANCE_HEADER = ("base", "target", "method", "value")
EVALUATION_HEADER = ("target", "true_acc", "pred_acc", "abs_err")
PREDICTION_HEADER = ("target", "method", "pred_acc")


def format_value(value: float | int | str) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_csv(header: tuple[str, ...], rows: Iterable[Iterable[float | int | str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(value) for value in row])
    return buffer.getvalue()


def parse_csv(text: str) -> list[dict[str, str]]:
    return list(csv.DictReader(io.StringIO(text)))
