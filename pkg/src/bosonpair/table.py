"""Spectrum tables and their CSV form.

CSV layout: header ``k_parallel,k_perp,f,method``, one row per momentum point,
floats written with 17 significant digits so a write/read cycle is lossless.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from .fields import MomentumPoint

HEADER = ("k_parallel", "k_perp", "f", "method")


def _fmt(x: float) -> str:
    return f"{x:.17g}"


@dataclass
class SpectrumTable:
    k_parallel: np.ndarray
    k_perp: np.ndarray
    f: np.ndarray
    method: str = "riccati"
    #: Per-row diagnostics (e.g. clamp flags); not serialized.
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        self.k_parallel = np.asarray(self.k_parallel, dtype=float)
        self.k_perp = np.broadcast_to(np.asarray(self.k_perp, dtype=float), self.k_parallel.shape).copy()
        self.f = np.asarray(self.f, dtype=float)
        if not (self.k_parallel.shape == self.k_perp.shape == self.f.shape):
            raise ValueError("column lengths differ")

    def __len__(self):
        return self.f.size

    def __eq__(self, other):
        if not isinstance(other, SpectrumTable):
            return NotImplemented
        return (self.method == other.method
                and np.array_equal(self.k_parallel, other.k_parallel)
                and np.array_equal(self.k_perp, other.k_perp)
                and np.array_equal(self.f, other.f))

    @property
    def points(self) -> list[MomentumPoint]:
        return [MomentumPoint(float(a), float(b)) for a, b in zip(self.k_parallel, self.k_perp)]

    def window(self, k_min: float, k_max: float) -> "SpectrumTable":
        sel = (self.k_parallel >= k_min) & (self.k_parallel <= k_max)
        return SpectrumTable(self.k_parallel[sel], self.k_perp[sel], self.f[sel], self.method)

    def rows(self):
        for a, b, c in zip(self.k_parallel, self.k_perp, self.f):
            yield _fmt(a), _fmt(b), _fmt(c), self.method

    def to_csv(self, path=None) -> str:
        return write_csv([self], path)

    @classmethod
    def from_csv(cls, source) -> "SpectrumTable":
        tables = read_csv(source)
        if len(tables) != 1:
            raise ValueError(f"expected a single-method table, found methods {[t.method for t in tables]}")
        return tables[0]


def write_csv(tables: Iterable[SpectrumTable], path=None, interleave: bool = False) -> str:
    """Serialize one or more tables.

    With ``interleave=True`` (tables on a shared grid) rows alternate between
    tables point by point, which is how the ``compare`` command writes its
    boson/fermion output.
    """
    tables = list(tables)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    if interleave:
        n = {len(t) for t in tables}
        if len(n) != 1:
            raise ValueError("interleaved tables must share a grid")
        iters = [t.rows() for t in tables]
        for _ in range(n.pop()):
            for it in iters:
                w.writerow(next(it))
    else:
        for t in tables:
            w.writerows(t.rows())
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text


def read_csv(source) -> list[SpectrumTable]:
    """Parse CSV text or a path; one table per method, in first-seen order."""
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source):
        source = Path(source).read_text()
    reader = csv.reader(io.StringIO(source))
    header = tuple(next(reader))
    if header != HEADER:
        raise ValueError(f"unexpected CSV header {header}")
    cols: dict[str, list] = {}
    for row in reader:
        if not row:
            continue
        cols.setdefault(row[3], []).append((float(row[0]), float(row[1]), float(row[2])))
    out = []
    for method, vals in cols.items():
        arr = np.array(vals, dtype=float).reshape(-1, 3)
        out.append(SpectrumTable(arr[:, 0], arr[:, 1], arr[:, 2], method))
    return out
