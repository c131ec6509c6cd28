"""CSV tables with ``#`` footer lines."""

import csv
import io
import math
import os
import tempfile
from dataclasses import dataclass, field


def fmt(value):
    """17 significant digits, so floats round-trip exactly."""
    if isinstance(value, (int,)) and not isinstance(value, bool):
        return str(value)
    v = float(value)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return format(v, ".17g")


@dataclass
class CsvTable:
    header: list
    rows: list = field(default_factory=list)
    footer: list = field(default_factory=list)

    def add_row(self, values):
        if len(values) != len(self.header):
            raise ValueError(f"row has {len(values)} fields, header has {len(self.header)}")
        self.rows.append([fmt(v) for v in values])

    def column(self, name):
        i = self.header.index(name)
        return [float(r[i]) for r in self.rows]

    def render(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.header)
        w.writerows(self.rows)
        for line in self.footer:
            buf.write(f"# {line}\n")
        return buf.getvalue()


def write_atomic(path, text):
    """Write ``text`` to ``path`` via a temporary file in the same directory."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_table(path):
    """Parse a table written by :meth:`CsvTable.render`.

    Returns (header, rows as lists of floats, footer lines without ``# ``).
    """
    header, rows, footer = None, [], []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                footer.append(line[1:].strip())
            elif header is None:
                header = line.split(",")
            elif line:
                rows.append([float(v) for v in line.split(",")])
    return header, rows, footer


def footer_value(footer, key):
    """Value of ``key=value`` in the footer lines (first match), as a string."""
    for line in footer:
        for token in line.split():
            if token.startswith(key + "="):
                return token[len(key) + 1:]
    raise KeyError(key)
