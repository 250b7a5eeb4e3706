"""
CSV export of tabular profiles.

Rationals are written as "p/q" (or integers), booleans as true/false, and
rows with "\\n" line endings so reruns are byte-identical.
"""
import csv
import io
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Sequence, Tuple, Union

from conelab.utils.rational import format_rational

Table = Tuple[Sequence[str], Iterable[Sequence[Any]]]


def format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, (list, tuple)):
        return " ".join(format_cell(v) for v in value)
    return str(value)


def table_to_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_cell(v) for v in row])
    return buffer.getvalue()


def write_csv(path: Union[str, Path], header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(table_to_csv(header, rows), encoding="utf-8")
    return target
