"""Nondegeneracy conditions for quadric models and the implication harness."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from .exact import ONE, ZERO, I, ExactMatrix, GaussQ, det, kernel_basis, rank
from .model import HermitianMatrix, QuadricModel, levi, sesqui
from .poly import Env, MultiPoly

__all__ = [
    "InternalConsistencyError",
    "TumanovResult",
    "RelationCertificate",
    "SesquiStatus",
    "DegeneracyWitness",
    "ClassificationReport",
    "realified_coefficients",
    "check_condition_a",
    "check_condition_a_complex",
    "check_condition_b",
    "check_condition_b_via_form",
    "check_tumanov",
    "check_cone_generating",
    "check_finite_type_two",
    "sesqui_component_polys",
    "find_relations",
    "analyze_sesqui_surjectivity",
    "degeneracy_witness",
    "classify",
    "random_model",
    "flat_model",
    "corner_model",
    "hermitian_basis",
    "run_harness",
    "HarnessSummary",
]

DEFAULT_RELATION_DEGREE = 3


class InternalConsistencyError(AssertionError):
    """A report contradicts a proved implication; always an implementation bug."""


# ---------------------------------------------------------------------------
# conditions (a) and (b)
# ---------------------------------------------------------------------------


def realified_coefficients(model: QuadricModel) -> ExactMatrix:
    """d x n^2 real matrix: diagonal entries, then re/im of the strict upper triangle."""
    n = model.n
    rows = []
    for a in model.matrices:
        row = [a[i, i].re for i in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                row.append(a[i, j].re)
                row.append(a[i, j].im)
        rows.append(row)
    return ExactMatrix.from_rows(rows, n * n)


def check_condition_a(model: QuadricModel) -> bool:
    """A_1..A_d linearly independent over R."""
    return rank(realified_coefficients(model)) == model.d


def check_condition_a_complex(model: QuadricModel) -> bool:
    """Same condition over C, flattening each matrix into n^2 complex entries."""
    rows = [list(a.inner.entries) for a in model.matrices]
    return rank(ExactMatrix.from_rows(rows, model.n * model.n)) == model.d


def stacked(model: QuadricModel) -> ExactMatrix:
    return ExactMatrix.vstack([a.inner for a in model.matrices])


def check_condition_b(model: QuadricModel) -> bool:
    """Common kernel of the A_j is {0}."""
    return rank(stacked(model)) == model.n


def check_condition_b_via_form(model: QuadricModel) -> bool:
    """<z, z'> = 0 for every z' forces z = 0, probed on z' = e_j.

    The map conj(z) -> (sesqui(z, e_j)_s)_{s,j} is linear in conj(z); its
    matrix has rows (s, j) and columns i with entry sesqui(e_i, e_j)_s.
    """
    n = model.n
    rows = []
    for s in range(model.d):
        for j in range(n):
            e_j = [ONE if k == j else ZERO for k in range(n)]
            rows.append([sesqui(model, [ONE if k == i else ZERO for k in range(n)], e_j).components[s] for i in range(n)])
    return rank(ExactMatrix.from_rows(rows, n)) == n


# ---------------------------------------------------------------------------
# Tumanov
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TumanovResult:
    holds: bool
    witness: tuple[int, ...] | None = None
    determinant: object = None

    def __bool__(self):
        return self.holds


def _tumanov_grid(n: int, d: int):
    """Points of {0..n}^d minus the origin, by total degree then descending lex."""
    pts = [p for p in itertools.product(range(n + 1), repeat=d) if any(p)]
    pts.sort(key=lambda p: (sum(p), tuple(-x for x in p)))
    return pts


def pencil(model: QuadricModel, lam: Sequence) -> ExactMatrix:
    out = ExactMatrix.zeros(model.n, model.n)
    for c, a in zip(lam, model.matrices):
        if c:
            out = out + a.inner.scale(c)
    return out


def check_tumanov(model: QuadricModel) -> TumanovResult:
    """Is some real combination sum(lambda_j A_j) invertible?

    det(sum lambda_j A_j) has degree <= n in each lambda_j, so it is the zero
    polynomial iff it vanishes on the grid {0..n}^d.
    """
    for lam in _tumanov_grid(model.n, model.d):
        dv = det(pencil(model, lam))
        if dv:
            return TumanovResult(True, lam, dv.re)
    return TumanovResult(False)


# ---------------------------------------------------------------------------
# geometric characterizations, computed independently of (a)
# ---------------------------------------------------------------------------


def levi_probes(n: int) -> list[tuple[GaussQ, ...]]:
    """e_i, e_i + e_j, e_i + i e_j (i < j): enough to recover any Hermitian form."""
    def e(k):
        return [ONE if t == k else ZERO for t in range(n)]

    probes = [tuple(e(i)) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            probes.append(tuple(a + b for a, b in zip(e(i), e(j))))
            probes.append(tuple(a + I * b for a, b in zip(e(i), e(j))))
    return probes


def check_cone_generating(model: QuadricModel) -> bool:
    """Real span of the Levi image is all of R^d (the Levi cone has interior)."""
    rows = [list(levi(model, z).components) for z in levi_probes(model.n)]
    return rank(ExactMatrix.from_rows(rows, model.d)) == model.d


def check_finite_type_two(model: QuadricModel) -> bool:
    """Complex span of sesqui(e_i, e_j) over all i, j is C^d."""
    n = model.n
    basis = [[ONE if t == k else ZERO for t in range(n)] for k in range(n)]
    rows = [list(sesqui(model, basis[i], basis[j]).components) for i in range(n) for j in range(n)]
    return rank(ExactMatrix.from_rows(rows, model.d)) == model.d


# ---------------------------------------------------------------------------
# sesquilinear Levi map: relations and dominance
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RelationCertificate:
    degree: int
    polynomial: MultiPoly  # in t_1..t_d
    space_dimension: int  # dimension of all degree-m relations

    def __str__(self):
        return str(self.polynomial)


@dataclass(frozen=True)
class SesquiStatus:
    verdict: str  # "NotDominant" | "Dominant" | "Unknown"
    certificate: RelationCertificate | None = None
    jacobian_probe: tuple | None = None

    def __str__(self):
        if self.certificate is not None:
            return f"{self.verdict}(degree {self.certificate.degree}: {self.certificate} = 0)"
        return self.verdict


def sesqui_component_polys(model: QuadricModel) -> tuple[MultiPoly, ...]:
    """t_k = sum_ij zb_i (A_k)_ij z'_j with z' written as z; zb and z are independent."""
    env = Env.cr(model.n, 0)
    out = []
    for a in model.matrices:
        terms = {}
        for i in range(model.n):
            for j in range(model.n):
                if a[i, j]:
                    e = [0] * env.nvars
                    e[env.zb(i)] += 1
                    e[env.z(j)] += 1
                    terms[tuple(e)] = a[i, j]
        out.append(MultiPoly(env, terms))
    return tuple(out)


def compose_target(components: Sequence[MultiPoly], t: ExactMatrix) -> tuple[MultiPoly, ...]:
    """Post-compose the component map with a linear map of the target: new_k = sum_l T_kl t_l."""
    env = components[0].env
    out = []
    for k in range(t.rows):
        acc = MultiPoly.zero(env)
        for l, comp in enumerate(components):
            if t[k, l]:
                acc = acc + comp.scale(t[k, l])
        out.append(acc)
    return tuple(out)


def t_env(d: int) -> Env:
    return Env.plain([f"t{k}" for k in range(1, d + 1)])


def _monomials(nvars: int, degree: int) -> list[tuple[int, ...]]:
    out = []
    for combo in itertools.combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for v in combo:
            e[v] += 1
        out.append(tuple(e))
    out.sort(reverse=True)
    return out


def _normalize_relation(coeffs: dict[tuple, GaussQ]) -> dict[tuple, GaussQ]:
    lead = max(coeffs, key=lambda e: (sum(e), e))
    c0 = coeffs[lead]
    scaled = {e: c / c0 for e, c in coeffs.items()}
    den = 1
    num = 0
    for c in scaled.values():
        for part in (c.re, c.im):
            f = Fraction(part)
            den = lcm(den, f.denominator)
    for c in scaled.values():
        for part in (c.re, c.im):
            num = gcd(num, int(Fraction(part) * den))
    factor = Fraction(den, num or 1)
    return {e: c * factor for e, c in scaled.items()}


def find_relations(components: Sequence[MultiPoly], degree: int) -> list[MultiPoly]:
    """Basis of homogeneous degree-m polynomials R with R(components) == 0."""
    d = len(components)
    env = components[0].env
    monos = _monomials(d, degree)
    products: dict[tuple, MultiPoly] = {(0,) * d: MultiPoly.const(env, ONE)}

    def product(e):
        if e not in products:
            k = next(i for i, x in enumerate(e) if x)
            prev = list(e)
            prev[k] -= 1
            products[e] = product(tuple(prev)) * components[k]
        return products[e]

    cols = [product(e) for e in monos]
    keys = sorted({m for p in cols for m in p.terms()})
    index = {m: r for r, m in enumerate(keys)}
    grid = [[ZERO] * len(monos) for _ in keys]
    for c, p in enumerate(cols):
        for m, v in p.terms().items():
            grid[index[m]][c] = v
    if not keys:
        kernel = [tuple(ONE if i == j else ZERO for i in range(len(monos))) for j in range(len(monos))]
    else:
        kernel = kernel_basis(ExactMatrix.from_rows(grid, len(monos)))
    tenv = t_env(d)
    out = []
    for vec in kernel:
        coeffs = {e: v for e, v in zip(monos, vec) if v}
        out.append(MultiPoly(tenv, _normalize_relation(coeffs)))
    return out


def jacobian_probes(nvars: int) -> list[tuple[GaussQ, ...]]:
    primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53]
    probes = [
        tuple(GaussQ(k + 1) for k in range(nvars)),
        tuple(GaussQ((k // 2 + 1) * (-1) ** k) for k in range(nvars)),
        tuple(GaussQ(primes[k % len(primes)] + k // len(primes)) for k in range(nvars)),
        tuple(GaussQ(k + 1, (-1) ** k) for k in range(nvars)),
    ]
    return probes


def _jacobian_rank(components: Sequence[MultiPoly], point) -> int:
    nv = components[0].env.nvars
    rows = [[comp.diff(v).evaluate(point) for v in range(nv)] for comp in components]
    return rank(ExactMatrix.from_rows(rows, nv))


def analyze_components(components: Sequence[MultiPoly], max_relation_degree: int) -> SesquiStatus:
    if max_relation_degree < 1:
        raise ValueError("max_relation_degree must be >= 1")
    d = len(components)
    for m in range(1, max_relation_degree + 1):
        rels = find_relations(components, m)
        if rels:
            return SesquiStatus("NotDominant", RelationCertificate(m, rels[0], len(rels)))
    nv = components[0].env.nvars
    for point in jacobian_probes(nv):
        if _jacobian_rank(components, point) == d:
            return SesquiStatus("Dominant", jacobian_probe=tuple(point))
    return SesquiStatus("Unknown")


def analyze_sesqui_surjectivity(
    model: QuadricModel, max_relation_degree: int = DEFAULT_RELATION_DEGREE, target_change: ExactMatrix | None = None
) -> SesquiStatus:
    """Tri-state dominance analysis of (z, z') -> sesqui(model, z, z').

    ``target_change`` post-composes the map with an invertible linear map of
    C^d, which only changes the coordinates the certificate is written in.
    """
    comps = sesqui_component_polys(model)
    if target_change is not None:
        if rank(target_change) != model.d or target_change.shape != (model.d, model.d):
            raise ValueError("target change must be an invertible d x d matrix")
        comps = compose_target(comps, target_change)
    return analyze_components(comps, max_relation_degree)


def relation_vanishes(cert: RelationCertificate, components: Sequence[MultiPoly]) -> bool:
    env = components[0].env
    return cert.polynomial.compose(list(components), env).is_zero()


# ---------------------------------------------------------------------------
# witnesses and the report
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DegeneracyWitness:
    """lambda with sum lambda_j A_j = 0 (failure of (a)) and/or z != 0 in all Ker A_j (failure of (b))."""

    lambda_: tuple | None = None
    kernel_vector: tuple[GaussQ, ...] | None = None

    def verify(self, model: QuadricModel) -> bool:
        ok = True
        if self.lambda_ is not None:
            ok &= any(self.lambda_) and pencil(model, self.lambda_).is_zero()
        if self.kernel_vector is not None:
            ok &= any(self.kernel_vector) and all(not any(a.inner.apply(self.kernel_vector)) for a in model.matrices)
        return bool(ok)


def _primitive_real(vec: Sequence[GaussQ]) -> tuple:
    vals = [Fraction(v.re) for v in vec]
    den = lcm(*[v.denominator for v in vals])
    ints = [int(v * den) for v in vals]
    g = gcd(*ints)
    ints = [x // g for x in ints]
    first = next(x for x in ints if x)
    if first < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def _primitive_complex(vec: Sequence[GaussQ]) -> tuple[GaussQ, ...]:
    first = next(v for v in vec if v)
    scaled = [v / first for v in vec]
    den = 1
    for v in scaled:
        den = lcm(den, Fraction(v.re).denominator, Fraction(v.im).denominator)
    return tuple(v * den for v in scaled)


def degeneracy_witness(model: QuadricModel) -> DegeneracyWitness | None:
    lam = None
    kv = None
    if not check_condition_a(model):
        ker = kernel_basis(realified_coefficients(model).transpose())
        lam = _primitive_real(ker[0])
    if not check_condition_b(model):
        kv = _primitive_complex(kernel_basis(stacked(model))[0])
    if lam is None and kv is None:
        return None
    w = DegeneracyWitness(lam, kv)
    if not w.verify(model):
        raise InternalConsistencyError("degeneracy witness failed re-verification")
    return w


@dataclass(frozen=True)
class ClassificationReport:
    condition_a: bool
    condition_b: bool
    tumanov: TumanovResult
    cone_generating: bool
    finite_type_two: bool
    sesqui_status: SesquiStatus
    beloshapka_nondegenerate: bool
    witnesses: DegeneracyWitness | None
    condition_a_complex: bool
    holomorphic_nondegeneracy_implied: bool

    def consistency_violations(self, model: QuadricModel) -> list[str]:
        v = []
        if self.beloshapka_nondegenerate != (self.condition_a and self.condition_b):
            v.append("beloshapka != a and b")
        if self.cone_generating != self.condition_a:
            v.append("cone-generating != (a)")
        if self.finite_type_two != self.condition_a:
            v.append("finite-type-2 != (a)")
        if self.condition_a_complex != self.condition_a:
            v.append("(a) over C != (a) over R")
        if self.tumanov.holds and not self.condition_b:
            v.append("tumanov without (b)")
        if self.sesqui_status.verdict == "Dominant" and not self.finite_type_two:
            v.append("dominant sesquilinear map without finite type 2")
        if self.condition_a and model.d > (model.n - 1) ** 2 and not self.condition_b:
            v.append("(a) and d > (n-1)^2 without (b)")
        if model.d == 1 and self.condition_b and not self.condition_a:
            v.append("hypersurface (b) without (a)")
        if model.d > model.n**2 and self.condition_a:
            v.append("(a) with d > n^2")
        return v


def classify(
    model: QuadricModel, relation_degree: int = DEFAULT_RELATION_DEGREE, target_change: ExactMatrix | None = None
) -> ClassificationReport:
    a = check_condition_a(model)
    b = check_condition_b(model)
    report = ClassificationReport(
        condition_a=a,
        condition_b=b,
        tumanov=check_tumanov(model),
        cone_generating=check_cone_generating(model),
        finite_type_two=check_finite_type_two(model),
        sesqui_status=analyze_sesqui_surjectivity(model, relation_degree, target_change),
        beloshapka_nondegenerate=a and b,
        witnesses=degeneracy_witness(model),
        condition_a_complex=check_condition_a_complex(model),
        holomorphic_nondegeneracy_implied=b,
    )
    bad = report.consistency_violations(model)
    if bad:
        raise InternalConsistencyError("classification contradicts known implications: " + "; ".join(bad))
    return report


# ---------------------------------------------------------------------------
# model generators
# ---------------------------------------------------------------------------


def random_model(n: int, d: int, entry_bound: int, seed: int) -> QuadricModel:
    if n < 1 or d < 1 or entry_bound < 1:
        raise ValueError("need n, d, entry_bound >= 1")
    rng = random.Random(seed)
    b = entry_bound
    mats = []
    for _ in range(d):
        rows = [[ZERO] * n for _ in range(n)]
        for i in range(n):
            rows[i][i] = GaussQ(rng.randint(-b, b))
            for j in range(i + 1, n):
                v = GaussQ(rng.randint(-b, b), rng.randint(-b, b))
                rows[i][j] = v
                rows[j][i] = v.conj()
        mats.append(HermitianMatrix.from_rows(rows))
    return QuadricModel(n, d, tuple(mats))


def hermitian_basis(n: int) -> list[ExactMatrix]:
    """Standard real basis of n x n Hermitian matrices (n^2 elements)."""
    out = []
    for i in range(n):
        out.append(ExactMatrix(n, n, tuple(ONE if (r, c) == (i, i) else ZERO for r in range(n) for c in range(n))))
    for i in range(n):
        for j in range(i + 1, n):
            out.append(ExactMatrix(n, n, tuple(ONE if (r, c) in ((i, j), (j, i)) else ZERO for r in range(n) for c in range(n))))
            out.append(
                ExactMatrix(
                    n, n, tuple(I if (r, c) == (i, j) else -I if (r, c) == (j, i) else ZERO for r in range(n) for c in range(n))
                )
            )
    return out


def flat_model(n: int, d: int) -> QuadricModel:
    """A_1 = identity, A_2 = ... = A_d = 0: satisfies (b), fails (a) when d >= 2."""
    mats = [HermitianMatrix(n, ExactMatrix.identity(n))] + [HermitianMatrix.zeros(n) for _ in range(d - 1)]
    return QuadricModel(n, d, tuple(mats))


def corner_model(n: int, d: int) -> QuadricModel:
    """Independent (n-1)x(n-1) blocks B_k padded with a zero last row and column.

    Satisfies (a) and fails (b) (e_n is in every kernel); needs d <= (n-1)^2.
    """
    if n < 2 or d > (n - 1) ** 2:
        raise ValueError("corner construction needs n >= 2 and d <= (n-1)^2")
    blocks = hermitian_basis(n - 1)[:d]
    mats = []
    for b in blocks:
        rows = [[b[i, j] if i < n - 1 and j < n - 1 else ZERO for j in range(n)] for i in range(n)]
        mats.append(HermitianMatrix.from_rows(rows))
    return QuadricModel(n, d, tuple(mats))


# ---------------------------------------------------------------------------
# implication harness
# ---------------------------------------------------------------------------

IMPLICATIONS = (
    ("tumanov => (b)", lambda m, r: r.tumanov.holds, lambda m, r: r.condition_b),
    ("(a) and d > (n-1)^2 => (b)", lambda m, r: r.condition_a and m.d > (m.n - 1) ** 2, lambda m, r: r.condition_b),
    ("cone-generating <=> (a)", lambda m, r: True, lambda m, r: r.cone_generating == r.condition_a),
    ("finite-type-2 <=> (a)", lambda m, r: True, lambda m, r: r.finite_type_two == r.condition_a),
    ("d = 1: (b) => (a)", lambda m, r: m.d == 1 and r.condition_b, lambda m, r: r.condition_a),
    ("n = d = 1: (a) <=> (b)", lambda m, r: m.n == 1 and m.d == 1, lambda m, r: r.condition_a == r.condition_b),
    ("d > n^2 => not (a)", lambda m, r: m.d > m.n**2, lambda m, r: not r.condition_a),
    ("dominant => finite-type-2", lambda m, r: r.sesqui_status.verdict == "Dominant", lambda m, r: r.finite_type_two),
)


@dataclass
class HarnessSummary:
    count: int
    seed: int
    held: dict[str, int] = field(default_factory=dict)
    violations: dict[str, int] = field(default_factory=dict)
    condition_a_true: int = 0
    condition_b_true: int = 0
    tumanov_true: int = 0
    failures: list[tuple[int, str]] = field(default_factory=list)

    @property
    def total_violations(self) -> int:
        return sum(self.violations.values())

    def as_dict(self) -> dict:
        return {
            "count": self.count,
            "seed": self.seed,
            "condition_a_true": self.condition_a_true,
            "condition_b_true": self.condition_b_true,
            "tumanov_true": self.tumanov_true,
            "implications": {
                name: {"hypothesis_held": self.held[name], "violations": self.violations[name]} for name, _, _ in IMPLICATIONS
            },
            "total_violations": self.total_violations,
            "failures": [{"index": i, "implication": name} for i, name in self.failures],
        }


def harness_models(count: int, n_max: int, d_max: int, bound: int, seed: int, n_min: int = 1, d_min: int = 1):
    rng = random.Random(seed)
    for k in range(count):
        n = rng.randint(n_min, n_max)
        d = rng.randint(d_min, d_max)
        yield k, random_model(n, d, bound, rng.getrandbits(32))


def _unchecked_report(model: QuadricModel, relation_degree: int) -> ClassificationReport:
    a = check_condition_a(model)
    b = check_condition_b(model)
    return ClassificationReport(
        condition_a=a,
        condition_b=b,
        tumanov=check_tumanov(model),
        cone_generating=check_cone_generating(model),
        finite_type_two=check_finite_type_two(model),
        sesqui_status=analyze_sesqui_surjectivity(model, relation_degree),
        beloshapka_nondegenerate=a and b,
        witnesses=None,
        condition_a_complex=check_condition_a_complex(model),
        holomorphic_nondegeneracy_implied=b,
    )


def run_harness(
    count: int,
    n_max: int = 3,
    d_max: int = 4,
    bound: int = 2,
    seed: int = 1,
    n_min: int = 1,
    d_min: int = 1,
    relation_degree: int = 2,
) -> HarnessSummary:
    """Check every implication on ``count`` random models.

    Reports are built without the fatal consistency assertion of
    :func:`classify`, so violations are counted rather than raised.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    summary = HarnessSummary(count, seed)
    for name, _, _ in IMPLICATIONS:
        summary.held[name] = 0
        summary.violations[name] = 0
    for k, model in harness_models(count, n_max, d_max, bound, seed, n_min, d_min):
        rep = _unchecked_report(model, relation_degree)
        summary.condition_a_true += rep.condition_a
        summary.condition_b_true += rep.condition_b
        summary.tumanov_true += rep.tumanov.holds
        for name, hyp, concl in IMPLICATIONS:
            if hyp(model, rep):
                summary.held[name] += 1
                if not concl(model, rep):
                    summary.violations[name] += 1
                    summary.failures.append((k, name))
    return summary
