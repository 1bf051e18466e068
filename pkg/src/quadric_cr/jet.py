"""Polynomial solutions of the basic identity Re(i g + 2<f̄, z>) = 0 on v = <z̄, z>.

Two independent assemblies of the homogeneous linear system are provided:

* the *direct* route encodes the seven-equation reduced system in the
  unknown functions f_0, phi_i, Phi_ij, g_0, psi_i of u (polynomial ansatz
  of bounded u-degree);
* the *general* route takes f and g as arbitrary polynomials in (z, w) up to
  a total degree and machine-expands the identity.

Both produce real linear systems solved exactly; the kernels are reassembled
into holomorphic map pairs (f, g) and can be re-checked against the identity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .exact import ONE, ZERO, I, GaussQ, SparseSystem, as_rational, complex_rank_via_realification
from .model import QuadricModel, hermitian_form_polys
from .poly import Env, MultiPoly

__all__ = [
    "CapTooSmall",
    "NotAutomorphismCandidate",
    "HolMapPair",
    "WeightedComponent",
    "decompose_weighted",
    "delta",
    "expand_basic_identity",
    "is_solution",
    "extract_bidegree",
    "UnknownFunction",
    "UnknownLayout",
    "LinearSystem",
    "assemble_system_direct",
    "assemble_system_general",
    "SolutionSpace",
    "solve_jet_system",
    "degree_bounds",
    "truncation_report",
    "PdSystem",
    "pd_system",
    "char_variety_test",
    "characteristic_probes",
    "jet_determination_check",
    "two_jet_kernel_dimension",
    "DEFAULT_DIRECT_CAP",
    "DEFAULT_GENERAL_CAP",
]

DEFAULT_DIRECT_CAP = 4
DEFAULT_GENERAL_CAP = 6


class CapTooSmall(ValueError):
    pass


class NotAutomorphismCandidate(ValueError):
    """The difference of two candidate maps does not solve the basic identity."""


# ---------------------------------------------------------------------------
# holomorphic map pairs
# ---------------------------------------------------------------------------


def _weight(env: Env, e: tuple[int, ...]) -> int:
    return sum(e[: env.n]) + 2 * sum(e[env.n :])


@dataclass(frozen=True)
class HolMapPair:
    """(f, g): C^n x C^d -> C^n x C^d, polynomial in (z, w)."""

    env: Env
    f: tuple[MultiPoly, ...]
    g: tuple[MultiPoly, ...]

    def __post_init__(self):
        if self.env.kind != "hol":
            raise ValueError("HolMapPair needs a holomorphic (z, w) environment")
        object.__setattr__(self, "f", tuple(self.f))
        object.__setattr__(self, "g", tuple(self.g))
        if len(self.f) != self.env.n or len(self.g) != self.env.d:
            raise ValueError("f needs n components and g needs d components")
        for p in self.f + self.g:
            if p.env != self.env:
                raise ValueError("component in the wrong environment")

    @classmethod
    def zero(cls, n: int, d: int) -> "HolMapPair":
        env = Env.hol(n, d)
        return cls(env, (MultiPoly.zero(env),) * n, (MultiPoly.zero(env),) * d)

    @classmethod
    def from_terms(cls, n: int, d: int, f: Sequence[dict] = (), g: Sequence[dict] = ()) -> "HolMapPair":
        """Build from exponent->coefficient dicts, e.g. ``f=[{(1, 0): 1}]`` for f = z."""
        env = Env.hol(n, d)
        fs = [MultiPoly(env, t) for t in f] + [MultiPoly.zero(env)] * (n - len(f))
        gs = [MultiPoly(env, t) for t in g] + [MultiPoly.zero(env)] * (d - len(g))
        return cls(env, tuple(fs), tuple(gs))

    @property
    def n(self) -> int:
        return self.env.n

    @property
    def d(self) -> int:
        return self.env.d

    def components(self) -> tuple[MultiPoly, ...]:
        return self.f + self.g

    def _zip(self, other: "HolMapPair", op) -> "HolMapPair":
        if self.env != other.env:
            raise ValueError("pairs live in different environments")
        return HolMapPair(self.env, tuple(op(a, b) for a, b in zip(self.f, other.f)), tuple(op(a, b) for a, b in zip(self.g, other.g)))

    def __add__(self, other):
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._zip(other, lambda a, b: a - b)

    def scale(self, c) -> "HolMapPair":
        return HolMapPair(self.env, tuple(p.scale(c) for p in self.f), tuple(p.scale(c) for p in self.g))

    def is_zero(self) -> bool:
        return not any(self.components())

    def total_degree(self) -> int:
        return max(p.total_degree() for p in self.components())

    def weighted_degree(self) -> int:
        return max((_weight(self.env, e) for p in self.components() for e in p.terms()), default=-1)

    def map_terms(self, pred: Callable[[tuple[int, ...]], bool]) -> "HolMapPair":
        return HolMapPair(self.env, tuple(p.filter(pred) for p in self.f), tuple(p.filter(pred) for p in self.g))

    def jet(self, order: int) -> "HolMapPair":
        """Taylor terms of ordinary total degree <= order at the origin."""
        return self.map_terms(lambda e: sum(e) <= order)

    def __str__(self):
        fs = ", ".join(str(p) for p in self.f)
        gs = ", ".join(str(p) for p in self.g)
        return f"f = ({fs}); g = ({gs})"

    def to_json(self) -> dict:
        return {"f": [str(p) for p in self.f], "g": [str(p) for p in self.g]}


@dataclass(frozen=True)
class WeightedComponent:
    weight: int
    pair: HolMapPair

    def scaling_identity_holds(self) -> bool:
        """component(t z, t^2 w) == t^q component(z, w) as polynomials in (z, w, t)."""
        env = self.pair.env
        tenv = Env.plain(env.names + ("t",))
        nv = env.nvars
        t_idx = nv
        images = []
        for v in range(nv):
            e = [0] * (nv + 1)
            e[v] = 1
            e[t_idx] = 1 if v < env.n else 2
            images.append(MultiPoly.monomial(tenv, e))
        for p in self.pair.components():
            lhs = p.compose(images, tenv)
            rhs = MultiPoly(tenv, {e + (self.weight,): c for e, c in p.terms().items()})
            if lhs != rhs:
                return False
        return True


def decompose_weighted(pair: HolMapPair) -> list[WeightedComponent]:
    """Split into weighted-homogeneous parts (weight 1 for z, 2 for w)."""
    env = pair.env
    weights = sorted({_weight(env, e) for p in pair.components() for e in p.terms()})
    return [WeightedComponent(q, pair.map_terms(lambda e, q=q: _weight(env, e) == q)) for q in weights]


# ---------------------------------------------------------------------------
# expansion of the basic identity
# ---------------------------------------------------------------------------


class _Expander:
    """Caches (u + i<z̄,z>)^b products for substituting w in (z, w)-polynomials."""

    def __init__(self, model: QuadricModel):
        self.model = model
        self.env = Env.cr(model.n, model.d)
        self.forms = hermitian_form_polys(model, self.env)
        env = self.env
        self.w_images = [MultiPoly.var(env, env.u(s)) + self.forms[s].scale(I) for s in range(model.d)]
        self._wpow: dict[tuple[int, ...], MultiPoly] = {(0,) * model.d: MultiPoly.const(env, ONE)}
        self.z = [MultiPoly.var(env, env.z(k)) for k in range(model.n)]
        self.zb = [MultiPoly.var(env, env.zb(k)) for k in range(model.n)]

    def wpow(self, b: tuple[int, ...]) -> MultiPoly:
        p = self._wpow.get(b)
        if p is None:
            s = next(i for i, x in enumerate(b) if x)
            prev = list(b)
            prev[s] -= 1
            p = self.wpow(tuple(prev)) * self.w_images[s]
            self._wpow[b] = p
        return p

    def expand(self, p: MultiPoly) -> MultiPoly:
        """p(z, u + i<z̄,z>) in the CR environment."""
        env = self.env
        n = self.model.n
        out = MultiPoly.zero(env)
        pad = (0,) * (n + self.model.d)
        for e, c in p.terms().items():
            zpart = MultiPoly.monomial(env, e[:n] + pad, c)
            out = out + zpart * self.wpow(e[n:])
        return out

    def pairing(self, left: Sequence[MultiPoly], right: Sequence[MultiPoly]) -> list[MultiPoly]:
        """[sum_jk left_j (A_s)_jk right_k for each s]."""
        out = []
        n = self.model.n
        live_l = [j for j in range(n) if left[j]]
        live_r = [k for k in range(n) if right[k]]
        for a in self.model.matrices:
            acc = MultiPoly.zero(self.env)
            for j in live_l:
                for k in live_r:
                    v = a[j, k]
                    if v:
                        acc = acc + (left[j] * right[k]).scale(v)
            out.append(acc)
        return out


def expand_basic_identity(pair: HolMapPair, model: QuadricModel, _expander: _Expander | None = None) -> tuple[MultiPoly, ...]:
    """Re(i g + 2<f̄, z>) with w -> u + i<z̄,z>, one polynomial per codimension index."""
    if pair.n != model.n or pair.d != model.d:
        raise ValueError("pair and model dimensions differ")
    ex = _expander or _Expander(model)
    fx = [ex.expand(p) for p in pair.f]
    gx = [ex.expand(p) for p in pair.g]
    fbar = [p.conj() if p else p for p in fx]
    brackets = ex.pairing(fbar, ex.z)
    return tuple((gx[s].scale(I) + brackets[s].scale(2)).real_part() for s in range(model.d))


def is_solution(pair: HolMapPair, model: QuadricModel, _expander: _Expander | None = None) -> bool:
    return all(p.is_zero() for p in expand_basic_identity(pair, model, _expander))


def delta(phi: MultiPoly, model: QuadricModel) -> MultiPoly:
    """Derivative in u along <z̄,z>: sum_s d(phi)/du_s * <z̄,z>_s."""
    env = phi.env
    forms = hermitian_form_polys(model, env)
    out = MultiPoly.zero(env)
    for s in range(model.d):
        dp = phi.diff(env.u(s))
        if dp:
            out = out + dp * forms[s]
    return out


def extract_bidegree(p: MultiPoly, k: int, l: int) -> MultiPoly:
    """Terms of total z-degree k and total zb-degree l."""
    env = p.env
    n = env.n
    return p.filter(lambda e: sum(e[:n]) == k and sum(e[n : 2 * n]) == l)


# ---------------------------------------------------------------------------
# unknowns of the reduced system
# ---------------------------------------------------------------------------

BLOCKS = ("f0", "phi", "Phi", "g0", "psi")


@dataclass(frozen=True)
class UnknownFunction:
    """One complex unknown function of u.

    f0: (k,) component k of f_0; phi: (i, k) component k of the z_i coefficient
    of f_1; Phi: (i, j, k) with i <= j for f_2; g0: (s,); psi: (i, s) for g_1.
    """

    block: str
    index: tuple[int, ...]

    def label(self) -> str:
        return f"{self.block}[{','.join(str(x + 1) for x in self.index)}]"


def unknown_functions(n: int, d: int) -> list[UnknownFunction]:
    out = [UnknownFunction("f0", (k,)) for k in range(n)]
    out += [UnknownFunction("phi", (i, k)) for i in range(n) for k in range(n)]
    out += [UnknownFunction("Phi", (i, j, k)) for i in range(n) for j in range(i, n) for k in range(n)]
    out += [UnknownFunction("g0", (s,)) for s in range(d)]
    out += [UnknownFunction("psi", (i, s)) for i in range(n) for s in range(d)]
    return out


def u_monomials(d: int, cap: int) -> list[tuple[int, ...]]:
    """Exponents of u-monomials of degree <= cap, by degree then descending lex."""
    out = []
    for deg in range(cap + 1):
        layer = []
        for combo in itertools.combinations_with_replacement(range(d), deg):
            e = [0] * d
            for v in combo:
                e[v] += 1
            layer.append(tuple(e))
        out += sorted(layer, reverse=True)
    return out


@dataclass(frozen=True)
class UnknownLayout:
    """Column layout of the direct-route ansatz: (function, u-monomial, re/im)."""

    n: int
    d: int
    caps: tuple[tuple[str, int], ...]
    functions: tuple[UnknownFunction, ...]
    columns: tuple[tuple[UnknownFunction, tuple[int, ...], int], ...]

    @classmethod
    def build(cls, n: int, d: int, caps: dict[str, int]) -> "UnknownLayout":
        fns = tuple(unknown_functions(n, d))
        cols = []
        for fn in fns:
            cap = caps[fn.block]
            for b in u_monomials(d, cap) if cap >= 0 else []:
                cols.append((fn, b, 0))
                cols.append((fn, b, 1))
        layout = cls(n, d, tuple(sorted(caps.items())), fns, tuple(cols))
        assert layout.q == n * (1 + n + n * (n + 1) // 2) + d * (1 + n)
        return layout

    @property
    def q(self) -> int:
        return len(self.functions)

    def cap_of(self, block: str) -> int:
        return dict(self.caps)[block]

    def to_pair(self, vector: dict[int, object]) -> HolMapPair:
        n, d = self.n, self.d
        env = Env.hol(n, d)
        f: list[dict] = [dict() for _ in range(n)]
        g: list[dict] = [dict() for _ in range(d)]
        for col, val in vector.items():
            fn, b, part = self.columns[col]
            c = GaussQ(val) if part == 0 else GaussQ(0, val)
            zexp = [0] * n
            blk, idx = fn.block, fn.index
            if blk == "f0":
                target = f[idx[0]]
            elif blk == "phi":
                zexp[idx[0]] += 1
                target = f[idx[1]]
            elif blk == "Phi":
                zexp[idx[0]] += 1
                zexp[idx[1]] += 1
                target = f[idx[2]]
            elif blk == "g0":
                target = g[idx[0]]
            else:
                zexp[idx[0]] += 1
                target = g[idx[1]]
            e = tuple(zexp) + b
            target[e] = target.get(e, ZERO) + c
        return HolMapPair(env, tuple(MultiPoly(env, t) for t in f), tuple(MultiPoly(env, t) for t in g))


def uniform_caps(cap: int) -> dict[str, int]:
    return {b: cap for b in BLOCKS}


def reconciled_caps(total_degree_cap: int) -> dict[str, int]:
    """Per-block u-degree caps matching a general-route ansatz of total degree <= C."""
    c = total_degree_cap
    return {"f0": c, "phi": c - 1, "Phi": c - 2, "g0": c, "psi": c - 1}


# ---------------------------------------------------------------------------
# the reduced (seven-equation) system
# ---------------------------------------------------------------------------

# (line, mode) where mode says which part of the expression must vanish
LINES = (
    (1, "im"),  # Im g_0 = 0
    (2, "complex"),  # i g_1 + 2<f̄_0, z> = 0
    (3, "complex"),  # <z̄, f_2> - 2i<(Δf_0)‾, z> = 0
    (4, "complex"),  # <(Δ²f_0)‾, z> = 0
    (5, "re"),  # 2 Re<f̄_1, z> - Re Δg_0 = 0
    (6, "im"),  # Im <(Δf_1)‾, z> = 0
    (7, "re"),  # Re Δ³g_0 = 0
    (8, "complex"),  # <z̄, Δf_2> = 0  (optional, redundant)
)


class _Reduced:
    """Evaluates the reduced system on explicit unknown-function values."""

    def __init__(self, model: QuadricModel, delta_fn: Callable[[MultiPoly], MultiPoly], ex: _Expander):
        self.model = model
        self.delta = delta_fn
        self.ex = ex
        self.env = ex.env

    def lines(self, vals: dict[UnknownFunction, MultiPoly], extra: bool = False) -> list[tuple[int, str, list[MultiPoly]]]:
        n, d = self.model.n, self.model.d
        env = self.env
        zero = MultiPoly.zero(env)
        Z, ZB = self.ex.z, self.ex.zb
        D = self.delta

        def get(block, *idx):
            return vals.get(UnknownFunction(block, idx), zero)

        f0 = [get("f0", k) for k in range(n)]
        f1 = [zero] * n
        f2 = [zero] * n
        for k in range(n):
            for i in range(n):
                p = get("phi", i, k)
                if p:
                    f1[k] = f1[k] + p * Z[i]
                for j in range(i, n):
                    p = get("Phi", i, j, k)
                    if p:
                        f2[k] = f2[k] + p * Z[i] * Z[j]
        g0 = [get("g0", s) for s in range(d)]
        g1 = [zero] * d
        for s in range(d):
            for i in range(n):
                p = get("psi", i, s)
                if p:
                    g1[s] = g1[s] + p * Z[i]

        pair = self.ex.pairing
        out = []
        if any(g0):
            out.append((1, "im", g0))
        if any(g1) or any(f0):
            p = pair([x.conj() for x in f0], Z)
            out.append((2, "complex", [g1[s].scale(I) + p[s].scale(2) for s in range(d)]))
        if any(f2) or any(f0):
            df0 = [D(x) for x in f0]
            a = pair(ZB, f2)
            b = pair([x.conj() for x in df0], Z)
            out.append((3, "complex", [a[s] - b[s].scale(GaussQ(0, 2)) for s in range(d)]))
            if any(f0):
                out.append((4, "complex", pair([D(x).conj() for x in df0], Z)))
        if any(f1) or any(g0):
            p = pair([x.conj() for x in f1], Z)
            out.append((5, "re", [p[s].scale(2) - D(g0[s]) for s in range(d)]))
        if any(f1):
            out.append((6, "im", pair([D(x).conj() for x in f1], Z)))
        if any(g0):
            out.append((7, "re", [D(D(D(x))) for x in g0]))
        if extra and any(f2):
            out.append((8, "complex", pair(ZB, [D(x) for x in f2])))
        return out


def _realify(env: Env, mode: str, p: MultiPoly):
    """Yield (monomial, part, value) real equations for one expression.

    For 're'/'im' modes the vanishing part is self-conjugate, so only one
    monomial of each conjugate pair is kept.
    """
    if mode == "re":
        p = p.real_part()
    elif mode == "im":
        p = p.imag_part()
    perm = env.conj_perm
    for e, c in p.terms().items():
        if mode != "complex":
            ce = tuple(e[k] for k in perm)
            if ce < e:
                continue
            if ce == e:
                if c.re:
                    yield e, 0, c.re
                continue
        if c.re:
            yield e, 0, c.re
        if c.im:
            yield e, 1, c.im


@dataclass
class LinearSystem:
    """Realified homogeneous system with its column metadata."""

    route: str
    model: QuadricModel
    ncols: int
    rows: dict[tuple, dict[int, object]]
    layout: object  # UnknownLayout or GeneralLayout

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def solve(self) -> SparseSystem:
        sysm = SparseSystem(self.ncols)
        for key in sorted(self.rows, key=_row_sort_key):
            sysm.add_row(self.rows[key])
        return sysm

    def residual(self, vector: dict[int, object]) -> bool:
        """True when the vector satisfies every row exactly."""
        for row in self.rows.values():
            acc = 0
            for c, v in row.items():
                x = vector.get(c)
                if x:
                    acc += v * x
            if acc:
                return False
        return True


def _row_sort_key(key):
    return tuple((0, x) if isinstance(x, int) else (1, x) if isinstance(x, tuple) else (2, str(x)) for x in key)


def assemble_system_direct(
    model: QuadricModel, u_degree_cap: int | dict[str, int] = DEFAULT_DIRECT_CAP, extra_equation: bool = False
) -> LinearSystem:
    """Real linear system of the reduced equations on the bounded-degree ansatz."""
    caps = uniform_caps(u_degree_cap) if isinstance(u_degree_cap, int) else dict(u_degree_cap)
    if min(caps.values()) < -1:
        raise ValueError("u-degree caps must be >= -1")
    ex = _Expander(model)
    layout = UnknownLayout.build(model.n, model.d, caps)
    red = _Reduced(model, lambda p: delta(p, model), ex)
    env = ex.env
    rows: dict[tuple, dict[int, object]] = {}
    mono_cache: dict[tuple, MultiPoly] = {}
    pad = (0,) * (2 * model.n)
    for col, (fn, b, part) in enumerate(layout.columns):
        key = (b, part)
        val = mono_cache.get(key)
        if val is None:
            val = mono_cache[key] = MultiPoly.monomial(env, pad + b, ONE if part == 0 else I)
        for line, mode, polys in red.lines({fn: val}, extra_equation):
            for s, p in enumerate(polys):
                for e, rpart, v in _realify(env, mode, p):
                    rows.setdefault((line, s, e, rpart), {})[col] = v
    return LinearSystem("direct", model, len(layout.columns), rows, layout)


@dataclass(frozen=True)
class GeneralLayout:
    """Columns of the general route: (kind 'f'/'g', component, (z,w)-monomial, re/im)."""

    n: int
    d: int
    cap: int
    columns: tuple[tuple[str, int, tuple[int, ...], int], ...]

    @classmethod
    def build(cls, n: int, d: int, cap: int) -> "GeneralLayout":
        monos = []
        for deg in range(cap + 1):
            layer = []
            for combo in itertools.combinations_with_replacement(range(n + d), deg):
                e = [0] * (n + d)
                for v in combo:
                    e[v] += 1
                layer.append(tuple(e))
            monos += sorted(layer, reverse=True)
        cols = []
        for kind, count in (("f", n), ("g", d)):
            for comp in range(count):
                for e in monos:
                    cols.append((kind, comp, e, 0))
                    cols.append((kind, comp, e, 1))
        return cls(n, d, cap, tuple(cols))

    def to_pair(self, vector: dict[int, object]) -> HolMapPair:
        env = Env.hol(self.n, self.d)
        f: list[dict] = [dict() for _ in range(self.n)]
        g: list[dict] = [dict() for _ in range(self.d)]
        for col, val in vector.items():
            kind, comp, e, part = self.columns[col]
            c = GaussQ(val) if part == 0 else GaussQ(0, val)
            target = (f if kind == "f" else g)[comp]
            target[e] = target.get(e, ZERO) + c
        return HolMapPair(env, tuple(MultiPoly(env, t) for t in f), tuple(MultiPoly(env, t) for t in g))


def assemble_system_general(model: QuadricModel, total_degree_cap: int = DEFAULT_GENERAL_CAP) -> LinearSystem:
    """Brute force: expand the identity for every unknown coefficient of f and g."""
    if total_degree_cap < 1:
        raise ValueError("total_degree_cap must be >= 1")
    n, d = model.n, model.d
    layout = GeneralLayout.build(n, d, total_degree_cap)
    ex = _Expander(model)
    env = ex.env
    henv = Env.hol(n, d)
    zero = MultiPoly.zero(henv)
    rows: dict[tuple, dict[int, object]] = {}
    for col, (kind, comp, e, part) in enumerate(layout.columns):
        term = MultiPoly.monomial(henv, e, ONE if part == 0 else I)
        f = [zero] * n
        g = [zero] * d
        (f if kind == "f" else g)[comp] = term
        for s, p in enumerate(expand_basic_identity(HolMapPair(henv, tuple(f), tuple(g)), model, ex)):
            for mono, rpart, v in _realify(env, "complex_selfconj", p):
                rows.setdefault((s, mono, rpart), {})[col] = v
    return LinearSystem("general", model, len(layout.columns), rows, layout)


# ---------------------------------------------------------------------------
# solution spaces and reports
# ---------------------------------------------------------------------------


def block_degrees(pairs: Iterable[HolMapPair]) -> dict[str, int]:
    """Max w-degree of the z-degree-k part of f (``f{k}``) and g (``g{k}``)."""
    out: dict[str, int] = {}
    for pr in pairs:
        n = pr.n
        for kind, comps in (("f", pr.f), ("g", pr.g)):
            for p in comps:
                for e in p.terms():
                    key = f"{kind}{sum(e[:n])}"
                    out[key] = max(out.get(key, -1), sum(e[n:]))
    return dict(sorted(out.items()))


@dataclass(frozen=True)
class SolutionSpace:
    route: str
    cap: object
    dimension: int
    basis: tuple[HolMapPair, ...]
    vectors: tuple[dict, ...] = field(repr=False)
    block_degrees: dict = field(default_factory=dict)
    rank: int = 0
    ncols: int = 0

    def to_json(self) -> dict:
        return {
            "route": self.route,
            "cap": self.cap,
            "dimension": self.dimension,
            "unknowns": self.ncols,
            "rank": self.rank,
            "block_degrees": self.block_degrees,
            "basis": [b.to_json() for b in self.basis],
        }


def solve_system(system: LinearSystem) -> SolutionSpace:
    sysm = system.solve()
    vectors = sysm.kernel()
    basis = tuple(system.layout.to_pair(v) for v in vectors)
    cap = system.layout.cap if system.route == "general" else dict(system.layout.caps)
    return SolutionSpace(system.route, cap, len(vectors), basis, tuple(vectors), block_degrees(basis), sysm.rank(), system.ncols)


def solve_jet_system(model: QuadricModel, cap: int | dict | None = None, route: str = "direct", extra_equation: bool = False) -> SolutionSpace:
    if route == "direct":
        return solve_system(assemble_system_direct(model, DEFAULT_DIRECT_CAP if cap is None else cap, extra_equation))
    if route == "general":
        return solve_system(assemble_system_general(model, DEFAULT_GENERAL_CAP if cap is None else cap))
    raise ValueError(f"unknown route {route!r}")


def degree_bounds(space: SolutionSpace) -> dict[str, bool]:
    """The degree estimates for solutions: deg_u f_0 <= 1, f_1 <= 1, f_2 = 0, g_0 <= 2, weight <= 4."""
    bd = space.block_degrees
    checks = {
        "deg_u f0 <= 1": bd.get("f0", -1) <= 1,
        "deg_u f1 <= 1": bd.get("f1", -1) <= 1,
        "deg_u f2 = 0": bd.get("f2", -1) <= 0,
        "deg_u g0 <= 2": bd.get("g0", -1) <= 2,
        "weight <= 4": all(b.weighted_degree() <= 4 for b in space.basis),
        "total degree <= 2": all(b.total_degree() <= 2 for b in space.basis),
    }
    return checks


@dataclass(frozen=True)
class TruncationReport:
    violations: tuple[tuple[int, str, int], ...]  # (basis index, "f"/"g" component label, z-degree)

    @property
    def ok(self) -> bool:
        return not self.violations


def truncation_report(space: SolutionSpace) -> TruncationReport:
    """Flag basis elements with f-parts of z-degree >= 3 or g-parts of z-degree >= 2."""
    out = []
    for idx, pr in enumerate(space.basis):
        n = pr.n
        for k, p in enumerate(pr.f):
            for zdeg in sorted({sum(e[:n]) for e in p.terms() if sum(e[:n]) >= 3}):
                out.append((idx, f"f{k + 1}", zdeg))
        for s, p in enumerate(pr.g):
            for zdeg in sorted({sum(e[:n]) for e in p.terms() if sum(e[:n]) >= 2}):
                out.append((idx, f"g{s + 1}", zdeg))
    return TruncationReport(tuple(out))


# ---------------------------------------------------------------------------
# symbol of the constant-coefficient system and the characteristic set
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PdSystem:
    """P(xi): rows are realified equations, columns the 2q real unknown functions.

    Entries are polynomials in xi_1..xi_d (one per d/du_s) with rational
    coefficients, stored sparsely.
    """

    n: int
    d: int
    columns: tuple[tuple[UnknownFunction, int], ...]
    row_keys: tuple[tuple, ...]
    entries: dict  # (row, col) -> {xi exponent: rational}

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.row_keys), len(self.columns)

    def evaluate(self, zeta: Sequence) -> list[dict[int, GaussQ]]:
        z = [GaussQ.coerce(x) for x in zeta]
        if len(z) != self.d:
            raise ValueError(f"zeta needs {self.d} components")
        rows: list[dict[int, GaussQ]] = [dict() for _ in self.row_keys]
        for (r, c), poly in self.entries.items():
            acc = ZERO
            for e, v in poly.items():
                t = GaussQ(v)
                for x, k in zip(z, e):
                    if k:
                        t = t * x**k
                acc = acc + t
            if acc:
                rows[r][c] = acc
        return rows

    def constant_term_rows(self) -> list[dict[int, GaussQ]]:
        return self.evaluate([0] * self.d)


def pd_system(model: QuadricModel) -> PdSystem:
    """Symbol matrix of the reduced system.

    A trial solution theta * exp(xi . u) turns Δ into multiplication by
    sum_s xi_s <z̄,z>_s; the xi_s are carried in the u slots of the CR
    environment, which formal conjugation leaves fixed, as for real symbols.
    """
    ex = _Expander(model)
    env = ex.env
    n, d = model.n, model.d
    sym = MultiPoly.zero(env)
    for s in range(d):
        sym = sym + MultiPoly.var(env, env.u(s)) * ex.forms[s]
    red = _Reduced(model, lambda p: p * sym, ex)
    columns = tuple((fn, part) for fn in unknown_functions(n, d) for part in (0, 1))
    raw: dict[tuple, dict[int, dict]] = {}
    for col, (fn, part) in enumerate(columns):
        val = MultiPoly.const(env, ONE if part == 0 else I)
        for line, mode, polys in red.lines({fn: val}):
            for s, p in enumerate(polys):
                for e, rpart, v in _realify(env, mode, p):
                    key = (line, s, e[: 2 * n], rpart)
                    cell = raw.setdefault(key, {}).setdefault(col, {})
                    xi = e[2 * n :]
                    cell[xi] = as_rational(cell.get(xi, 0) + v)
    keys = tuple(sorted(raw, key=_row_sort_key))
    entries = {}
    for r, key in enumerate(keys):
        for c, poly in raw[key].items():
            poly = {e: v for e, v in poly.items() if v}
            if poly:
                entries[(r, c)] = poly
    return PdSystem(n, d, columns, keys, entries)


def char_variety_test(model: QuadricModel, zeta: Sequence, system: PdSystem | None = None) -> bool:
    """True iff P(zeta) has a nontrivial kernel (zeta is characteristic)."""
    p = system or pd_system(model)
    rows = p.evaluate(zeta)
    ncols = len(p.columns)
    return complex_rank_via_realification(rows, ncols) < ncols


def characteristic_probes(d: int, count: int = 20) -> list[tuple[GaussQ, ...]]:
    """Deterministic nonzero probes: unit vectors, +-1 sign patterns, then multiples; last one Gaussian."""
    seen = []

    def push(v):
        v = tuple(GaussQ(x) if not isinstance(x, GaussQ) else x for x in v)
        if any(v) and v not in seen:
            seen.append(v)

    base = []
    for s in range(d):
        base.append(tuple(1 if t == s else 0 for t in range(d)))
    for signs in itertools.product((1, -1), repeat=d):
        base.append(signs)
    for s in range(d):
        base.append(tuple(-1 if t == s else 0 for t in range(d)))
    for v in base:
        push(v)
    k = 2
    while len(seen) < count - 1:
        for v in base:
            if len(seen) >= count - 1:
                break
            push(tuple(k * x for x in v))
        k += 1
    seen = seen[: count - 1]
    gauss = tuple(GaussQ(1 + s, Fraction((-1) ** s, 2)) for s in range(d))
    seen.append(gauss)
    return seen


# ---------------------------------------------------------------------------
# 2-jet determination
# ---------------------------------------------------------------------------


def jet_determination_check(model: QuadricModel, pair1: HolMapPair, pair2: HolMapPair, cap: int = DEFAULT_GENERAL_CAP) -> bool:
    """Equal 2-jets force equal maps, for candidates differing by a solution.

    Raises :class:`CapTooSmall` if a pair exceeds total degree ``cap`` and
    :class:`NotAutomorphismCandidate` if the difference does not solve the
    homogeneous identity.
    """
    if max(pair1.total_degree(), pair2.total_degree()) > cap:
        raise CapTooSmall(f"pairs have degree above the cap {cap}")
    diff = pair2 - pair1
    if not is_solution(diff, model):
        raise NotAutomorphismCandidate("difference of the candidates does not solve the basic identity")
    if not diff.jet(2).is_zero():
        return True
    return diff.is_zero()


def two_jet_kernel_dimension(space: SolutionSpace) -> int:
    """Dimension of {x : 2-jet(sum x_b basis_b) = 0} over the real span of the basis."""
    m = len(space.basis)
    if m == 0:
        return 0
    rows: dict[tuple, dict[int, object]] = {}
    for b, pr in enumerate(space.basis):
        for ci, p in enumerate(pr.components()):
            for e, c in p.terms().items():
                if sum(e) > 2:
                    continue
                if c.re:
                    rows.setdefault((ci, e, 0), {})[b] = c.re
                if c.im:
                    rows.setdefault((ci, e, 1), {})[b] = c.im
    sysm = SparseSystem(m, (rows[k] for k in sorted(rows)))
    return sysm.nullity()
