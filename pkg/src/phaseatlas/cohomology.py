"""Integer cellular cohomology of finite CW complexes.

Complexes are given by their coboundary matrices ``d^k : C^k -> C^(k+1)``
(shape ``cells[k+1] x cells[k]``). All arithmetic uses Python integers, so
nothing overflows however much the Smith reduction grows the entries.

Text format::

    # comments start with '#'
    cw dim=2
    cells k=0 n=1
    cells k=1 n=2
    cells k=2 n=1
    coboundary k=1
    0 0

A ``coboundary k=<k>`` block is followed by ``cells[k+1]`` rows of
``cells[k]`` integers. Omitted blocks are zero maps.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from math import comb
from pathlib import Path

from .errors import (
    CochainViolation,
    DegreeOutOfRange,
    DimensionTooHigh,
    ParseError,
    ValidationError,
)


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        entries = tuple(tuple(int(x) for x in row) for row in self.entries)
        if len(entries) != self.rows or any(len(r) != self.cols for r in entries):
            raise ValidationError(f"entries do not form a {self.rows}x{self.cols} matrix")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_rows(cls, rows, cols=None):
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, rows)

    @classmethod
    def zeros(cls, rows, cols):
        return cls(rows, cols, [[0] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, n):
        return cls(n, n, [[int(i == j) for j in range(n)] for i in range(n)])

    @property
    def shape(self):
        return (self.rows, self.cols)

    def tolist(self):
        return [list(r) for r in self.entries]

    def is_zero(self):
        return all(x == 0 for r in self.entries for x in r)

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValidationError(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other.entries)) if other.rows else [()] * other.cols
        out = [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in self.entries]
        return IntMatrix(self.rows, other.cols, out)

    def diagonal(self):
        return [self.entries[i][i] for i in range(min(self.rows, self.cols))]


def determinant(A):
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if A.rows != A.cols:
        raise ValidationError("determinant of a non-square matrix")
    n = A.rows
    if n == 0:
        return 1
    m = A.tolist()
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def smith_normal_form(A):
    """Return ``(U, D, V)`` with ``U A V = D`` and ``U, V`` unimodular.

    ``D`` is diagonal with positive ``d_1 | d_2 | ... | d_r`` followed by
    zeros. Pivots are the entry of smallest nonzero absolute value in the
    remaining block, ties broken by lowest (row, col).
    """
    m, n = A.rows, A.cols
    a = A.tolist()
    u = IntMatrix.identity(m).tolist()
    v = IntMatrix.identity(n).tolist()

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):  # row_dst += c * row_src
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, c):
        for row in a:
            row[dst] += c * row[src]
        for row in v:
            row[dst] += c * row[src]

    for s in range(min(m, n)):
        best = None
        for i in range(s, m):
            for j in range(s, n):
                x = abs(a[i][j])
                if x and (best is None or x < best[0]):
                    best = (x, i, j)
        if best is None:
            break
        swap_rows(s, best[1])
        swap_cols(s, best[2])
        while True:
            for i in range(s + 1, m):
                if a[i][s]:
                    add_row(i, s, -(a[i][s] // a[s][s]))
            for j in range(s + 1, n):
                if a[s][j]:
                    add_col(j, s, -(a[s][j] // a[s][s]))
            rest = [(abs(a[i][s]), i, s) for i in range(s + 1, m) if a[i][s]]
            rest += [(abs(a[s][j]), s, j) for j in range(s + 1, n) if a[s][j]]
            if rest:
                _, i, j = min(rest)
                if i != s:
                    swap_rows(s, i)
                else:
                    swap_cols(s, j)
                continue
            piv = a[s][s]
            bad = next(
                ((i, j) for i in range(s + 1, m) for j in range(s + 1, n) if a[i][j] % piv),
                None,
            )
            if bad is None:
                break
            add_row(s, bad[0], 1)
        if a[s][s] < 0:
            a[s] = [-x for x in a[s]]
            u[s] = [-x for x in u[s]]

    return IntMatrix(m, m, u), IntMatrix(m, n, a), IntMatrix(n, n, v)


def elementary_divisors(A):
    _, D, _ = smith_normal_form(A)
    return [x for x in D.diagonal() if x != 0]


@dataclass(frozen=True)
class AbelianGroup:
    """``Z^free_rank + Z/t_1 + ... + Z/t_s`` with ``t_1 | t_2 | ...``."""

    free_rank: int
    torsion: tuple = ()

    def __post_init__(self):
        tors = tuple(int(t) for t in self.torsion)
        if self.free_rank < 0 or any(t < 2 for t in tors):
            raise ValidationError("invalid abelian group invariants")
        if any(b % a for a, b in zip(tors, tors[1:])):
            raise ValidationError(f"torsion {tors} violates the divisibility chain")
        object.__setattr__(self, "torsion", tors)

    def __str__(self):
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"

    def to_dict(self):
        return {"free_rank": self.free_rank, "torsion": list(self.torsion), "pretty": str(self)}


@dataclass(frozen=True)
class CWComplex:
    cells: tuple
    coboundary: tuple

    def __post_init__(self):
        cells = tuple(int(c) for c in self.cells)
        if not cells or any(c < 0 for c in cells):
            raise ValidationError("cell counts must be a nonempty list of nonnegative integers")
        cob = tuple(self.coboundary)
        if len(cob) != len(cells) - 1:
            raise ValidationError(f"need {len(cells) - 1} coboundary maps, got {len(cob)}")
        for k, d in enumerate(cob):
            if d.shape != (cells[k + 1], cells[k]):
                raise ValidationError(
                    f"d^{k} has shape {d.shape}, expected {(cells[k + 1], cells[k])}"
                )
        for k in range(len(cob) - 1):
            if not (cob[k + 1] @ cob[k]).is_zero():
                raise CochainViolation(k)
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "coboundary", cob)

    @property
    def dim(self):
        return len(self.cells) - 1

    def euler_characteristic(self):
        return sum((-1) ** k * c for k, c in enumerate(self.cells))

    def delta(self, k):
        """``d^k`` including the zero maps at either end."""
        if k < 0:
            return IntMatrix.zeros(self.cells[0], 0)
        if k >= self.dim:
            return IntMatrix.zeros(0, self.cells[self.dim])
        return self.coboundary[k]


def _rank(A):
    return len(elementary_divisors(A))


def cohomology_group(X, k):
    """``H^k(X; Z) = ker d^k / im d^(k-1)``; zero above the top dimension."""
    if k < 0:
        raise DegreeOutOfRange(f"negative degree {k}")
    if k > X.dim:
        return AbelianGroup(0)
    kernel = X.cells[k] - _rank(X.delta(k))
    divisors = elementary_divisors(X.delta(k - 1))
    return AbelianGroup(kernel - len(divisors), tuple(t for t in divisors if t > 1))


def cohomology(X):
    return [cohomology_group(X, k) for k in range(X.dim + 1)]


def reduced_k0(X):
    """Reduced complex K-group for complexes of dimension at most 3, as ``H^2(X; Z)``."""
    if X.dim > 3:
        raise DimensionTooHigh(X.dim)
    return cohomology_group(X, 2)


def torus_cw(d):
    """Minimal product cell structure of T^d: ``binom(d, k)`` k-cells, zero coboundaries."""
    if not 1 <= d <= 6:
        raise ValidationError(f"torus dimension {d} outside 1..6")
    cells = tuple(comb(d, k) for k in range(d + 1))
    return CWComplex(cells, tuple(IntMatrix.zeros(cells[k + 1], cells[k]) for k in range(d)))


def sphere_cw(n):
    """S^n with one 0-cell and one n-cell."""
    if n < 1:
        raise ValidationError("sphere dimension must be >= 1")
    cells = (1,) + (0,) * (n - 1) + (1,)
    return CWComplex(cells, tuple(IntMatrix.zeros(cells[k + 1], cells[k]) for k in range(n)))


# -- text format -----------------------------------------------------------------

_HEADER = re.compile(r"^cw\s+dim=(\d+)$")
_CELLS = re.compile(r"^cells\s+k=(\d+)\s+n=(\d+)$")
_COB = re.compile(r"^coboundary\s+k=(\d+)$")


def parse_cw(text):
    lines = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((no, line))
    if not lines:
        raise ParseError(0, "empty complex description")
    no, head = lines[0]
    m = _HEADER.match(head)
    if not m:
        raise ParseError(no, "expected header 'cw dim=<d>'")
    dim = int(m.group(1))
    cells = [None] * (dim + 1)
    blocks = {}
    pos = 1
    while pos < len(lines):
        no, line = lines[pos]
        if mc := _CELLS.match(line):
            k, count = int(mc.group(1)), int(mc.group(2))
            if k > dim:
                raise ParseError(no, f"cell degree {k} exceeds dim={dim}")
            if cells[k] is not None:
                raise ParseError(no, f"cells k={k} given twice")
            cells[k] = count
            pos += 1
        elif mb := _COB.match(line):
            k = int(mb.group(1))
            if k >= dim:
                raise ParseError(no, f"coboundary degree {k} must be < dim={dim}")
            if k in blocks:
                raise ParseError(no, f"coboundary k={k} given twice")
            if cells[k] is None or cells[k + 1] is None:
                raise ParseError(no, f"coboundary k={k} before cells k={k} and k={k + 1}")
            nrows, ncols = cells[k + 1], cells[k]
            rows = []
            if ncols:
                for r in range(nrows):
                    pos += 1
                    if pos >= len(lines):
                        raise ParseError(no, f"coboundary k={k} needs {nrows} rows")
                    rno, rline = lines[pos]
                    try:
                        vals = [int(tok) for tok in rline.split()]
                    except ValueError:
                        raise ParseError(rno, f"non-integer entry in {rline!r}") from None
                    if len(vals) != ncols:
                        raise ParseError(rno, f"expected {ncols} entries, got {len(vals)}")
                    rows.append(vals)
            else:
                rows = [[] for _ in range(nrows)]
            blocks[k] = IntMatrix(nrows, ncols, rows)
            pos += 1
        else:
            raise ParseError(no, f"unrecognized line {line!r}")
    missing = [k for k, c in enumerate(cells) if c is None]
    if missing:
        raise ParseError(lines[-1][0], f"missing cell counts for k={missing}")
    cob = [blocks.get(k, IntMatrix.zeros(cells[k + 1], cells[k])) for k in range(dim)]
    try:
        return CWComplex(tuple(cells), tuple(cob))
    except CochainViolation:
        raise
    except ValidationError as exc:
        raise ParseError(lines[-1][0], str(exc)) from exc


def format_cw(X):
    out = [f"cw dim={X.dim}"]
    out += [f"cells k={k} n={c}" for k, c in enumerate(X.cells)]
    for k, d in enumerate(X.coboundary):
        out.append(f"coboundary k={k}")
        if d.cols:
            out += [" ".join(str(x) for x in row) for row in d.entries]
    return "\n".join(out) + "\n"


def load_cw(source):
    """Resolve ``torus:<d>``, ``sphere:<n>`` or a path to a CW text file."""
    if m := re.fullmatch(r"torus:(\d+)", source):
        return torus_cw(int(m.group(1)))
    if m := re.fullmatch(r"sphere:(\d+)", source):
        return sphere_cw(int(m.group(1)))
    try:
        text = Path(source).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(0, f"cannot read {source!r}: {exc.strerror}") from exc
    return parse_cw(text)
