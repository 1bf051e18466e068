"""Exact scalars and linear algebra over the Gaussian rationals Q(i).

Rationals are :class:`fractions.Fraction` (ints are kept as ints when a value
is integral, which is much faster and compares equal).  No floating point is
used anywhere.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from numbers import Rational
from typing import Iterable, Sequence

__all__ = [
    "GaussQ",
    "ExactMatrix",
    "Nullspace",
    "SparseSystem",
    "rank",
    "kernel_basis",
    "solve_homogeneous",
    "det",
    "rank_by_minors",
    "det_by_expansion",
    "as_rational",
    "format_rational",
]


def as_rational(x):
    """Canonicalize an exact rational: integral values become ``int``."""
    if type(x) is int:
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, Rational):
        return as_rational(Fraction(x.numerator, x.denominator))
    if isinstance(x, str):
        return as_rational(Fraction(x.strip()))
    raise TypeError(f"not an exact rational: {x!r}")


def format_rational(x) -> str:
    x = as_rational(x)
    return str(x)


class GaussQ:
    """Immutable Gaussian rational ``re + im*i``."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", as_rational(re))
        object.__setattr__(self, "im", as_rational(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussQ is immutable")

    @classmethod
    def _new(cls, re, im):
        obj = object.__new__(cls)
        if type(re) is not int:
            re = as_rational(re)
        if type(im) is not int:
            im = as_rational(im)
        object.__setattr__(obj, "re", re)
        object.__setattr__(obj, "im", im)
        return obj

    @classmethod
    def coerce(cls, x) -> "GaussQ":
        if isinstance(x, GaussQ):
            return x
        if isinstance(x, str):
            return cls.parse(x)
        if isinstance(x, complex):
            raise TypeError("floating complex values are not exact")
        return cls._new(as_rational(x), 0)

    _TOKEN = re.compile(r"([+-]?)\s*([0-9]+(?:/[0-9]+)?)?\s*(\*?\s*i)?")

    @classmethod
    def parse(cls, text: str) -> "GaussQ":
        """Parse ``"3/2"``, ``"-i"``, ``"1/2-3i"``, ``"2+i/3"`` style strings."""
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty number")
        s = s.replace("I", "i").replace("j", "i")
        # allow "i/3" and "2i/3" by rewriting as "1/3i" forms
        s = re.sub(r"([0-9]*)i/([0-9]+)", lambda m: f"{m.group(1) or '1'}/{m.group(2)}i", s)
        re_part = Fraction(0)
        im_part = Fraction(0)
        pos = 0
        seen = False
        while pos < len(s):
            m = cls._TOKEN.match(s, pos)
            if m is None or m.end() == pos:
                raise ValueError(f"cannot parse number {text!r}")
            sign, mag, imag = m.groups()
            if mag is None and imag is None:
                raise ValueError(f"cannot parse number {text!r}")
            if seen and not sign:
                raise ValueError(f"cannot parse number {text!r}")
            value = Fraction(mag) if mag is not None else Fraction(1)
            if sign == "-":
                value = -value
            if imag:
                im_part += value
            else:
                re_part += value
            seen = True
            pos = m.end()
        return cls(re_part, im_part)

    # --- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, GaussQ):
            try:
                other = GaussQ.coerce(other)
            except TypeError:
                return NotImplemented
        return GaussQ._new(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussQ._new(-self.re, -self.im)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if not isinstance(other, GaussQ):
            try:
                other = GaussQ.coerce(other)
            except TypeError:
                return NotImplemented
        return GaussQ._new(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, GaussQ):
            try:
                other = GaussQ.coerce(other)
            except TypeError:
                return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        if b == 0 and d == 0:
            return GaussQ._new(a * c, 0)
        return GaussQ._new(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, GaussQ):
            try:
                other = GaussQ.coerce(other)
            except TypeError:
                return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        n = c * c + d * d
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussQ._new(Fraction(a * c + b * d) / n, Fraction(b * c - a * d) / n)

    def __rtruediv__(self, other):
        return GaussQ.coerce(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return (ONE / self) ** (-k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self) -> "GaussQ":
        return GaussQ._new(self.re, -self.im)

    conjugate = conj

    def abs2(self):
        """|x|^2 as an exact rational."""
        return as_rational(self.re * self.re + self.im * self.im)

    def is_real(self) -> bool:
        return self.im == 0

    # --- comparison -------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, GaussQ):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __repr__(self):
        return f"GaussQ({self})"

    def __str__(self):
        re_, im_ = self.re, self.im
        if im_ == 0:
            return str(re_)
        if im_ == 1:
            ims = "i"
        elif im_ == -1:
            ims = "-i"
        else:
            ims = f"{im_}i"
        if re_ == 0:
            return ims
        if ims.startswith("-"):
            return f"{re_}{ims}"
        return f"{re_}+{ims}"

    def to_json(self):
        if self.im == 0:
            return str(self.re)
        return {"re": str(self.re), "im": str(self.im)}


ZERO = GaussQ(0)
ONE = GaussQ(1)
I = GaussQ(0, 1)


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def _denominator(x) -> int:
    return 1 if type(x) is int else x.denominator


# ---------------------------------------------------------------------------
# dense matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExactMatrix:
    """Dense row-major matrix over Q(i)."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix shape")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match shape")
        if any(not isinstance(e, GaussQ) for e in self.entries):
            object.__setattr__(self, "entries", tuple(GaussQ.coerce(e) for e in self.entries))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "ExactMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(GaussQ.coerce(e) for r in rows for e in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ExactMatrix":
        return cls(rows, cols, (ZERO,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls(n, n, tuple(ONE if i == j else ZERO for i in range(n) for j in range(n)))

    @classmethod
    def diag(cls, values: Sequence) -> "ExactMatrix":
        n = len(values)
        vals = [GaussQ.coerce(v) for v in values]
        return cls(n, n, tuple(vals[i] if i == j else ZERO for i in range(n) for j in range(n)))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def col(self, j: int) -> tuple:
        return self.entries[j :: self.cols]

    def to_rows(self) -> list[list[GaussQ]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.cols, self.rows, tuple(self.col(j)[i] for j in range(self.cols) for i in range(self.rows)))

    def conj(self) -> "ExactMatrix":
        return ExactMatrix(self.rows, self.cols, tuple(e.conj() for e in self.entries))

    def conj_transpose(self) -> "ExactMatrix":
        return self.transpose().conj()

    H = property(conj_transpose)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_hermitian(self) -> bool:
        return self.is_square() and all(
            self[i, j] == self[j, i].conj() for i in range(self.rows) for j in range(i, self.cols)
        )

    def is_zero(self) -> bool:
        return not any(self.entries)

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return ExactMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return ExactMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self):
        return ExactMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, c) -> "ExactMatrix":
        c = GaussQ.coerce(c)
        return ExactMatrix(self.rows, self.cols, tuple(c * a for a in self.entries))

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        cols = [other.col(j) for j in range(other.cols)]
        out = []
        for i in range(self.rows):
            r = self.row(i)
            for c in cols:
                acc = ZERO
                for a, b in zip(r, c):
                    if a and b:
                        acc = acc + a * b
                out.append(acc)
        return ExactMatrix(self.rows, other.cols, tuple(out))

    def apply(self, v: Sequence) -> tuple:
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        v = [GaussQ.coerce(x) for x in v]
        out = []
        for i in range(self.rows):
            acc = ZERO
            for a, b in zip(self.row(i), v):
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return tuple(out)

    @staticmethod
    def vstack(mats: Sequence["ExactMatrix"]) -> "ExactMatrix":
        cols = mats[0].cols
        if any(m.cols != cols for m in mats):
            raise ValueError("column mismatch in vstack")
        return ExactMatrix(sum(m.rows for m in mats), cols, tuple(e for m in mats for e in m.entries))

    def rank(self) -> int:
        return rank(self)

    def kernel_basis(self) -> list[tuple]:
        return kernel_basis(self)

    def det(self) -> GaussQ:
        return det(self)

    def __str__(self):
        return "[" + "; ".join(" ".join(str(e) for e in self.row(i)) for i in range(self.rows)) + "]"


def _integral_rows(m: ExactMatrix) -> list[list[GaussQ]]:
    """Rows scaled by a common integer so every entry is a Gaussian integer."""
    den = 1
    for e in m.entries:
        den = _lcm(den, _denominator(e.re))
        den = _lcm(den, _denominator(e.im))
    return [[e * den if den != 1 else e for e in m.row(i)] for i in range(m.rows)]


def _bareiss(a: list[list[GaussQ]], rows: int, cols: int) -> tuple[int, int, GaussQ]:
    """Fraction-free (Bareiss) echelon reduction in place over Z[i].

    Returns (rank, number of row swaps, last pivot).  Every division is exact,
    so entries stay Gaussian integers.
    """
    r = 0
    swaps = 0
    prev = ONE
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if a[i][c]), None)
        if piv is None:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
            swaps += 1
        p = a[r][c]
        pr = a[r]
        for i in range(r + 1, rows):
            ri = a[i]
            x = ri[c]
            for j in range(c + 1, cols):
                ri[j] = (p * ri[j] - x * pr[j]) / prev
            ri[c] = ZERO
        prev = p
        r += 1
    return r, swaps, prev


def rank(m: ExactMatrix) -> int:
    """Exact rank via fraction-free elimination."""
    if m.rows == 0 or m.cols == 0:
        return 0
    a = _integral_rows(m)
    r, _, _ = _bareiss(a, m.rows, m.cols)
    return r


def det(m: ExactMatrix) -> GaussQ:
    if not m.is_square():
        raise ValueError("determinant of a non-square matrix")
    n = m.rows
    if n == 0:
        return ONE
    den = 1
    for e in m.entries:
        den = _lcm(den, _denominator(e.re))
        den = _lcm(den, _denominator(e.im))
    a = [[e * den for e in m.row(i)] for i in range(n)]
    r, swaps, last = _bareiss(a, n, n)
    if r < n:
        return ZERO
    value = last / GaussQ(den) ** n
    return -value if swaps % 2 else value


def _rref(m: ExactMatrix) -> tuple[list[list[GaussQ]], list[int]]:
    a = m.to_rows()
    pivots: list[int] = []
    r = 0
    for c in range(m.cols):
        if r == m.rows:
            break
        piv = next((i for i in range(r, m.rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = ONE / a[r][c]
        a[r] = [x * inv if x else x for x in a[r]]
        for i in range(m.rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y if y else x for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def kernel_basis(m: ExactMatrix) -> list[tuple]:
    """Basis of the right null space, one vector per free column (RREF order)."""
    red, pivots = _rref(m)
    pivot_set = set(pivots)
    basis = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        v = [ZERO] * m.cols
        v[f] = ONE
        for row, p in zip(red, pivots):
            if row[f]:
                v[p] = -row[f]
        basis.append(tuple(v))
    return basis


@dataclass(frozen=True)
class Nullspace:
    dimension: int
    basis: tuple


def solve_homogeneous(m: ExactMatrix) -> Nullspace:
    basis = kernel_basis(m)
    return Nullspace(len(basis), tuple(basis))


# ---------------------------------------------------------------------------
# independent oracle: minors by cofactor expansion
# ---------------------------------------------------------------------------


def det_by_expansion(rows: Sequence[Sequence[GaussQ]]) -> GaussQ:
    """Determinant by Laplace expansion along the first row (no division)."""
    n = len(rows)
    if n == 0:
        return ONE
    if n == 1:
        return GaussQ.coerce(rows[0][0])
    total = ZERO
    for j, a in enumerate(rows[0]):
        if not a:
            continue
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        term = GaussQ.coerce(a) * det_by_expansion(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def rank_by_minors(m: ExactMatrix) -> int:
    """Largest k with a nonzero k x k minor.  Exponential; small matrices only."""
    rows = m.to_rows()
    for k in range(min(m.rows, m.cols), 0, -1):
        for ri in itertools.combinations(range(m.rows), k):
            for ci in itertools.combinations(range(m.cols), k):
                if det_by_expansion([[rows[i][j] for j in ci] for i in ri]):
                    return k
    return 0


# ---------------------------------------------------------------------------
# sparse real systems
# ---------------------------------------------------------------------------


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = reduce(math.gcd, row.values(), 0)
    if g > 1:
        return {c: v // g for c, v in row.items()}
    return row


def _integer_row(row: dict) -> dict[int, int]:
    den = 1
    for v in row.values():
        den = _lcm(den, _denominator(v))
    out = {}
    for c, v in row.items():
        if v:
            out[c] = int(v * den) if den != 1 else int(v)
    return _primitive(out)


class SparseSystem:
    """Homogeneous linear system over Q with sparse rows.

    Elimination keeps rows as primitive integer vectors (fraction-free) and
    maintains a reduced row echelon form with the smallest column of each row
    as its pivot, so the echelon form and the kernel basis are canonical:
    independent of the order in which rows were added.
    """

    def __init__(self, ncols: int, rows: Iterable[dict] = ()):
        self.ncols = ncols
        self._pivots: dict[int, dict[int, int]] = {}
        # free column -> pivot columns whose row mentions it
        self._uses: dict[int, set[int]] = {}
        self.nrows = 0
        for r in rows:
            self.add_row(r)

    def add_row(self, row: dict) -> bool:
        """Insert a row; returns True when it increased the rank."""
        self.nrows += 1
        r = _integer_row(row)
        if any(c < 0 or c >= self.ncols for c in r):
            raise IndexError("column index out of range")
        pivots = self._pivots
        hits = [c for c in r if c in pivots]
        for c in hits:
            p = pivots[c]
            a = p[c]
            b = r.get(c)
            if not b:
                continue
            g = math.gcd(a, b)
            a //= g
            b //= g
            if a != 1:
                r = {k: v * a for k, v in r.items()}
            for k, v in p.items():
                nv = r.get(k, 0) - b * v
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
        if not r:
            return False
        r = _primitive(r)
        c = min(r)
        if r[c] < 0:
            r = {k: -v for k, v in r.items()}
        # back-eliminate the new pivot column from existing rows
        for pc in sorted(self._uses.pop(c, ())):
            p = pivots[pc]
            b = p.get(c)
            if not b:
                continue
            a = r[c]
            g = math.gcd(a, b)
            a //= g
            b //= g
            old_keys = set(p)
            if a != 1:
                p = {k: v * a for k, v in p.items()}
            for k, v in r.items():
                nv = p.get(k, 0) - b * v
                if nv:
                    p[k] = nv
                else:
                    p.pop(k, None)
            p = _primitive(p)
            if p[pc] < 0:
                p = {k: -v for k, v in p.items()}
            pivots[pc] = p
            for k in old_keys - set(p):
                s = self._uses.get(k)
                if s is not None:
                    s.discard(pc)
            for k in p:
                if k != pc:
                    self._uses.setdefault(k, set()).add(pc)
        pivots[c] = r
        for k in r:
            if k != c:
                self._uses.setdefault(k, set()).add(c)
        return True

    def rank(self) -> int:
        return len(self._pivots)

    def pivot_columns(self) -> list[int]:
        return sorted(self._pivots)

    def kernel(self) -> list[dict[int, Fraction]]:
        """Canonical kernel basis: one vector per free column, ascending."""
        basis = []
        for f in range(self.ncols):
            if f in self._pivots:
                continue
            v: dict[int, Fraction] = {f: 1}
            for pc in self._uses.get(f, ()):
                p = self._pivots[pc]
                v[pc] = as_rational(Fraction(-p[f], p[pc]))
            basis.append(dict(sorted(v.items())))
        return basis

    def nullity(self) -> int:
        return self.ncols - self.rank()


def complex_rank_via_realification(rows: Sequence[dict[int, GaussQ]], ncols: int) -> int:
    """Rank over C of a sparse Q(i) matrix, as half the rank of [[Re,-Im],[Im,Re]]."""
    sysm = SparseSystem(2 * ncols)
    for row in rows:
        top = {}
        bot = {}
        for c, v in row.items():
            if v.re:
                top[c] = v.re
                bot[c + ncols] = v.re
            if v.im:
                top[c + ncols] = -v.im
                bot[c] = v.im
        sysm.add_row(top)
        sysm.add_row(bot)
    r = sysm.rank()
    assert r % 2 == 0
    return r // 2
