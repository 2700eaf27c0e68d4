"""Plot job description and strict CSV parsing."""

import csv
from dataclasses import dataclass
from pathlib import Path

# required header per plot kind, in file column order
HEADERS: dict[str, tuple[str, ...]] = {
    "derivatives": ("time", "first_derivative", "second_derivative"),
    "recovery_rate": ("K", "successes", "runs", "success_rate"),
    "hardness_tv": ("K", "N", "L", "D", "chi2", "tv_bound", "tv_mc",
                    "lr_sup_p99"),
}


class CsvFormatError(Exception):
    """Input CSV does not match the expected format.

    The message carries the offending path and, for row defects, the
    1-based line number.
    """


@dataclass(frozen=True)
class PlotJob:
    """One chart to render: a source CSV, an output image, and the kind
    that fixes the required columns. ``marks`` are optional times drawn
    as vertical lines on derivative plots."""

    kind: str
    source: Path
    output: Path
    marks: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in HEADERS:
            raise ValueError(f"unknown plot kind {self.kind!r}")


def load_table(path, kind: str) -> dict[str, list[float]]:
    """Parse a CSV into {column: float list}, validating header and rows.

    Raises CsvFormatError on a wrong header, a row with the wrong field
    count, a non-numeric cell, or a file with no data rows.
    """
    want = HEADERS[kind]
    cols: dict[str, list[float]] = {name: [] for name in want}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != want:
            raise CsvFormatError(f"{path}:1: expected header "
                                 f"{','.join(want)}")
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(want):
                raise CsvFormatError(f"{path}:{lineno}: expected "
                                     f"{len(want)} fields, got {len(row)}")
            for name, cell in zip(want, row):
                try:
                    cols[name].append(float(cell))
                except ValueError:
                    raise CsvFormatError(
                        f"{path}:{lineno}: non-numeric value {cell!r} in "
                        f"column {name}") from None
    if not cols[want[0]]:
        raise CsvFormatError(f"{path}: no data rows")
    return cols
