"""Deterministic CSV tables.

Numbers are rendered with exactly 12 significant digits in scientific
notation so identical inputs give byte-identical files on every platform.
Complex values expand into ``<name>_re`` / ``<name>_im`` column pairs.
"""

from __future__ import annotations

import math
import numbers
import os
import tempfile
from dataclasses import dataclass, field


def format_number(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, numbers.Integral):
        return str(int(value))
    if isinstance(value, str):
        return value
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if value == 0.0:
        value = 0.0  # drop the sign of negative zero
    return f"{value:.11e}"


@dataclass
class OutputTable:
    header: list
    rows: list = field(default_factory=list)

    def append(self, row):
        row = list(row)
        if len(row) != len(self.header):
            raise ValueError(f"row has {len(row)} values, header has {len(self.header)}")
        self.rows.append(row)

    @classmethod
    def from_records(cls, header, records):
        """Build a table, splitting complex columns into real and imaginary parts."""
        records = [list(r) for r in records]
        complex_cols = {
            i for i in range(len(header))
            if any(isinstance(r[i], complex) for r in records)
        }
        out_header = []
        for i, name in enumerate(header):
            out_header.extend([f"{name}_re", f"{name}_im"] if i in complex_cols else [name])
        table = cls(out_header)
        for r in records:
            row = []
            for i, v in enumerate(r):
                if i in complex_cols:
                    v = complex(v)
                    row.extend([v.real, v.imag])
                else:
                    row.append(v)
            table.append(row)
        return table

    def to_csv(self) -> str:
        lines = [",".join(self.header)]
        lines.extend(",".join(format_number(v) for v in row) for row in self.rows)
        return "\n".join(lines) + "\n"

    def column(self, name):
        idx = self.header.index(name)
        return [row[idx] for row in self.rows]


def write_atomic(path, text: str) -> None:
    """Write ``text`` to ``path`` via a temporary file and rename."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".zenocat-", dir=directory)
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
