"""Sparse multivariate polynomials over Q(i).

A polynomial lives in a variable environment (:class:`Env`).  The standard
environment for the CR computations is ``Env.cr(n, d)`` with variables
``z_1..z_n, zb_1..zb_n, u_1..u_d``; ``zb`` is treated as an independent
variable and formal conjugation swaps ``z`` and ``zb`` exponents while
conjugating coefficients (``u`` is real).  Holomorphic maps use
``Env.hol(n, d)`` with variables ``z_1..z_n, w_1..w_d``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .exact import ZERO, ONE, I, GaussQ

__all__ = [
    "Env",
    "MultiPoly",
    "EnvironmentMismatch",
    "poly_add",
    "poly_mul",
    "poly_substitute",
]


class EnvironmentMismatch(ValueError):
    """Raised when polynomials from different variable environments are combined."""

    def __init__(self, left: "Env", right: "Env"):
        super().__init__(f"variable environments differ: {left.names} vs {right.names}")
        self.left = left
        self.right = right


@dataclass(frozen=True)
class Env:
    names: tuple[str, ...]
    kind: str = "plain"
    n: int = 0
    d: int = 0
    conj_perm: tuple[int, ...] | None = field(default=None, compare=False, repr=False)

    @classmethod
    def cr(cls, n: int, d: int) -> "Env":
        names = tuple(f"z{i}" for i in range(1, n + 1))
        names += tuple(f"zb{i}" for i in range(1, n + 1))
        names += tuple(f"u{s}" for s in range(1, d + 1))
        perm = tuple(list(range(n, 2 * n)) + list(range(n)) + list(range(2 * n, 2 * n + d)))
        return cls(names, "cr", n, d, perm)

    @classmethod
    def hol(cls, n: int, d: int) -> "Env":
        names = tuple(f"z{i}" for i in range(1, n + 1)) + tuple(f"w{s}" for s in range(1, d + 1))
        return cls(names, "hol", n, d, None)

    @classmethod
    def plain(cls, names: Sequence[str]) -> "Env":
        return cls(tuple(names), "plain", 0, 0, None)

    @property
    def nvars(self) -> int:
        return len(self.names)

    # index helpers (0-based component indices)
    def z(self, i: int) -> int:
        return i

    def zb(self, i: int) -> int:
        if self.kind != "cr":
            raise ValueError("zb variables exist only in a CR environment")
        return self.n + i

    def u(self, s: int) -> int:
        if self.kind != "cr":
            raise ValueError("u variables exist only in a CR environment")
        return 2 * self.n + s

    def w(self, s: int) -> int:
        if self.kind != "hol":
            raise ValueError("w variables exist only in a holomorphic environment")
        return self.n + s

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None


def _grlex_key(e: tuple[int, ...]):
    return (sum(e), e)


class MultiPoly:
    """Immutable sparse polynomial: exponent tuple -> nonzero GaussQ."""

    __slots__ = ("env", "_terms", "_hash")

    def __init__(self, env: Env, terms: Mapping | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[tuple[int, ...], GaussQ] = {}
        nv = env.nvars
        for e, c in items:
            e = tuple(e)
            if len(e) != nv or any(k < 0 for k in e):
                raise ValueError(f"bad exponent vector {e} for {nv} variables")
            c = GaussQ.coerce(c)
            if not c:
                continue
            prev = acc.get(e)
            if prev is None:
                acc[e] = c
            else:
                s = prev + c
                if s:
                    acc[e] = s
                else:
                    del acc[e]
        self.env = env
        self._terms = acc
        self._hash = None

    @classmethod
    def _raw(cls, env: Env, terms: dict) -> "MultiPoly":
        obj = object.__new__(cls)
        obj.env = env
        obj._terms = terms
        obj._hash = None
        return obj

    # --- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, env: Env) -> "MultiPoly":
        return cls._raw(env, {})

    @classmethod
    def const(cls, env: Env, c) -> "MultiPoly":
        c = GaussQ.coerce(c)
        return cls._raw(env, {(0,) * env.nvars: c} if c else {})

    @classmethod
    def var(cls, env: Env, index: int, coeff=ONE) -> "MultiPoly":
        e = [0] * env.nvars
        e[index] = 1
        return cls.monomial(env, e, coeff)

    @classmethod
    def monomial(cls, env: Env, exps: Sequence[int], coeff=ONE) -> "MultiPoly":
        c = GaussQ.coerce(coeff)
        e = tuple(exps)
        if len(e) != env.nvars:
            raise ValueError("exponent length mismatch")
        return cls._raw(env, {e: c} if c else {})

    # --- views -----------------------------------------------------------

    def items(self):
        """Terms in canonical (descending graded lexicographic) order."""
        return sorted(self._terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def terms(self) -> dict:
        return dict(self._terms)

    def __len__(self):
        return len(self._terms)

    def coefficient(self, exps: Sequence[int]) -> GaussQ:
        return self._terms.get(tuple(exps), ZERO)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def total_degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def degree_in(self, indices: Iterable[int]) -> int:
        idx = tuple(indices)
        return max((sum(e[i] for i in idx) for e in self._terms), default=-1)

    def filter(self, pred) -> "MultiPoly":
        return MultiPoly._raw(self.env, {e: c for e, c in self._terms.items() if pred(e)})

    # --- arithmetic ------------------------------------------------------

    def _check(self, other: "MultiPoly"):
        if self.env != other.env:
            raise EnvironmentMismatch(self.env, other.env)

    def _lift(self, other):
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.const(self.env, other)

    def __add__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            prev = out.get(e)
            if prev is None:
                out[e] = c
            else:
                s = prev + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return MultiPoly._raw(self.env, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.env, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "MultiPoly":
        c = GaussQ.coerce(c)
        if not c:
            return MultiPoly.zero(self.env)
        if c == ONE:
            return self
        return MultiPoly._raw(self.env, {e: c * v for e, v in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        self._check(other)
        if not self._terms or not other._terms:
            return MultiPoly.zero(self.env)
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple([a + b for a, b in zip(e1, e2)])
                v = c1 * c2
                prev = out.get(e)
                if prev is None:
                    out[e] = v
                else:
                    out[e] = prev + v
        return MultiPoly._raw(self.env, {e: c for e, c in out.items() if c})

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = MultiPoly.const(self.env, ONE)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # --- formal operations -----------------------------------------------

    def conj(self) -> "MultiPoly":
        """Formal conjugate: permute variables (z <-> zb) and conjugate coefficients."""
        perm = self.env.conj_perm
        if perm is None:
            raise ValueError(f"formal conjugation is undefined in environment {self.env.kind!r}")
        return MultiPoly._raw(
            self.env, {tuple([e[p] for p in perm]): c.conj() for e, c in self._terms.items()}
        )

    def real_part(self) -> "MultiPoly":
        return (self + self.conj()).scale(GaussQ(1, 0) / 2)

    def imag_part(self) -> "MultiPoly":
        return (self - self.conj()).scale(ONE / GaussQ(0, 2))

    def diff(self, index: int) -> "MultiPoly":
        out = {}
        for e, c in self._terms.items():
            k = e[index]
            if k:
                ne = list(e)
                ne[index] = k - 1
                out[tuple(ne)] = c * k
        return MultiPoly._raw(self.env, out)

    def substitute(self, index: int, replacement: "MultiPoly") -> "MultiPoly":
        """Replace one variable by a polynomial of the same environment."""
        self._check(replacement)
        powers = [MultiPoly.const(self.env, ONE)]
        out = MultiPoly.zero(self.env)
        groups: dict[int, dict] = {}
        for e, c in self._terms.items():
            k = e[index]
            rest = list(e)
            rest[index] = 0
            groups.setdefault(k, {})[tuple(rest)] = c
        for k in sorted(groups):
            while len(powers) <= k:
                powers.append(powers[-1] * replacement)
            out = out + MultiPoly._raw(self.env, groups[k]) * powers[k]
        return out

    def compose(self, images: Sequence["MultiPoly"], env: Env) -> "MultiPoly":
        """Substitute every variable by a polynomial in the target environment."""
        if len(images) != self.env.nvars:
            raise ValueError("one image per variable required")
        for p in images:
            if p.env != env:
                raise EnvironmentMismatch(p.env, env)
        cache: dict[tuple[int, int], MultiPoly] = {}

        def power(v: int, k: int) -> MultiPoly:
            key = (v, k)
            if key not in cache:
                cache[key] = images[v] if k == 1 else power(v, k - 1) * images[v]
            return cache[key]

        out = MultiPoly.zero(env)
        for e, c in self._terms.items():
            term = MultiPoly.const(env, c)
            for v, k in enumerate(e):
                if k:
                    term = term * power(v, k)
            out = out + term
        return out

    def evaluate(self, point: Sequence) -> GaussQ:
        pt = [GaussQ.coerce(x) for x in point]
        total = ZERO
        for e, c in self._terms.items():
            t = c
            for x, k in zip(pt, e):
                if k:
                    t = t * x**k
            total = total + t
        return total

    # --- comparison & display --------------------------------------------

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.env == other.env and self._terms == other._terms
        if isinstance(other, (int, GaussQ)):
            return self == MultiPoly.const(self.env, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.env, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"MultiPoly({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in self.items():
            mono = "*".join(
                name if k == 1 else f"{name}^{k}" for name, k in zip(self.env.names, e) if k
            )
            if not mono:
                parts.append(_coef_str(c))
            elif c == ONE:
                parts.append(mono)
            elif c == -ONE:
                parts.append("-" + mono)
            else:
                parts.append(f"{_coef_str(c)}*{mono}")
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out


def _coef_str(c: GaussQ) -> str:
    if c.re != 0 and c.im != 0:
        if c.re < 0:
            return "-(" + str(-c) + ")"
        return f"({c})"
    return str(c)


def poly_add(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    p._check(q)
    return p + q


def poly_mul(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    p._check(q)
    return p * q


def poly_substitute(p: MultiPoly, var: int | str, replacement: MultiPoly) -> MultiPoly:
    index = p.env.index(var) if isinstance(var, str) else var
    return p.substitute(index, replacement)


def imag_unit(env: Env) -> MultiPoly:
    return MultiPoly.const(env, I)
