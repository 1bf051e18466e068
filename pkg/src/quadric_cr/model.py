"""Quadric models ``Im w_j = conj(z)^T A_j z`` and their Levi maps at the origin."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Sequence

from .exact import ZERO, I, ExactMatrix, GaussQ, rank
from .poly import Env, MultiPoly

__all__ = [
    "ModelError",
    "ModelParseError",
    "SingularTransformError",
    "HermitianMatrix",
    "QuadricModel",
    "LeviValue",
    "SesquiValue",
    "levi",
    "sesqui",
    "polarization_check",
    "change_coordinates",
    "hermitian_form_polys",
    "load_model",
    "loads_model",
    "dump_model",
    "dumps_model",
]


class ModelError(ValueError):
    """Invalid quadric data."""


class ModelParseError(ModelError):
    """Model file could not be parsed; ``location`` is (matrix, row, col) when known."""

    def __init__(self, message: str, location: tuple[int, int, int] | None = None):
        super().__init__(message)
        self.location = location


class SingularTransformError(ModelError):
    pass


@dataclass(frozen=True)
class HermitianMatrix:
    n: int
    inner: ExactMatrix

    def __post_init__(self):
        if self.inner.shape != (self.n, self.n):
            raise ModelError(f"expected a {self.n}x{self.n} matrix, got {self.inner.rows}x{self.inner.cols}")
        for i in range(self.n):
            for j in range(i, self.n):
                if self.inner[i, j] != self.inner[j, i].conj():
                    raise ModelError(f"matrix is not Hermitian at entry ({i + 1},{j + 1})")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "HermitianMatrix":
        m = ExactMatrix.from_rows(rows)
        return cls(m.rows, m)

    @classmethod
    def zeros(cls, n: int) -> "HermitianMatrix":
        return cls(n, ExactMatrix.zeros(n, n))

    def __getitem__(self, ij) -> GaussQ:
        return self.inner[ij]

    def form(self, z: Sequence[GaussQ], zp: Sequence[GaussQ]) -> GaussQ:
        """conj(z)^T A z'."""
        total = ZERO
        for i in range(self.n):
            zi = z[i]
            if not zi:
                continue
            czi = zi.conj()
            for j in range(self.n):
                a = self.inner[i, j]
                if a and zp[j]:
                    total = total + czi * a * zp[j]
        return total


@dataclass(frozen=True)
class QuadricModel:
    """CR dimension ``n``, real codimension ``d`` and the Hermitian tuple (A_1..A_d)."""

    n: int
    d: int
    matrices: tuple[HermitianMatrix, ...]

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise ModelError("need n >= 1 and d >= 1")
        mats = tuple(self.matrices)
        if len(mats) != self.d:
            raise ModelError(f"expected {self.d} matrices, got {len(mats)}")
        for k, a in enumerate(mats):
            if not isinstance(a, HermitianMatrix):
                raise ModelError(f"matrix {k + 1} is not a HermitianMatrix")
            if a.n != self.n:
                raise ModelError(f"matrix {k + 1} has size {a.n}, expected {self.n}")
        object.__setattr__(self, "matrices", mats)

    @classmethod
    def from_rows(cls, mats: Sequence[Sequence[Sequence]]) -> "QuadricModel":
        hs = tuple(HermitianMatrix.from_rows(m) for m in mats)
        if not hs:
            raise ModelError("need at least one matrix")
        return cls(hs[0].n, len(hs), hs)

    def __getitem__(self, s: int) -> HermitianMatrix:
        return self.matrices[s]


@dataclass(frozen=True)
class LeviValue:
    components: tuple

    def __iter__(self):
        return iter(self.components)

    def __len__(self):
        return len(self.components)


@dataclass(frozen=True)
class SesquiValue:
    components: tuple[GaussQ, ...]

    def __iter__(self):
        return iter(self.components)

    def __len__(self):
        return len(self.components)


def _vector(model: QuadricModel, z: Sequence, label: str = "z") -> tuple[GaussQ, ...]:
    if len(z) != model.n:
        raise ModelError(f"{label} has {len(z)} components, expected n={model.n}")
    return tuple(GaussQ.coerce(x) for x in z)


def sesqui(model: QuadricModel, z: Sequence, zp: Sequence) -> SesquiValue:
    z = _vector(model, z)
    zp = _vector(model, zp, "z'")
    return SesquiValue(tuple(a.form(z, zp) for a in model.matrices))


def levi(model: QuadricModel, z: Sequence) -> LeviValue:
    vals = sesqui(model, z, z).components
    for v in vals:
        # Hermitian forms are real on the diagonal; anything else is a bug
        assert v.im == 0, "Hermitian form took a non-real value"
    return LeviValue(tuple(v.re for v in vals))


def polarization_check(model: QuadricModel, z: Sequence, zp: Sequence) -> bool:
    """Check 2 S(z,z') = (L(z+z') - L(z) - L(z')) + i (L(z) + L(z') - L(z+i z'))."""
    z = _vector(model, z)
    zp = _vector(model, zp, "z'")
    lz = levi(model, z).components
    lzp = levi(model, zp).components
    lsum = levi(model, [a + b for a, b in zip(z, zp)]).components
    lisum = levi(model, [a + I * b for a, b in zip(z, zp)]).components
    s = sesqui(model, z, zp).components
    for k in range(model.d):
        rhs = GaussQ(lsum[k] - lz[k] - lzp[k], lz[k] + lzp[k] - lisum[k])
        if s[k] * 2 != rhs:
            return False
    return True


def change_coordinates(model: QuadricModel, c: ExactMatrix) -> QuadricModel:
    """Pull back along z -> C z: each A_j becomes C^* A_j C."""
    if c.shape != (model.n, model.n):
        raise ModelError(f"transformation must be {model.n}x{model.n}")
    if rank(c) < model.n:
        raise SingularTransformError("coordinate change matrix is singular")
    ch = c.conj_transpose()
    return QuadricModel(
        model.n, model.d, tuple(HermitianMatrix(model.n, ch @ a.inner @ c) for a in model.matrices)
    )


def hermitian_form_polys(model: QuadricModel, env: Env) -> tuple[MultiPoly, ...]:
    """The components of <zb, z> as polynomials sum_ij zb_i (A_s)_ij z_j."""
    if env.kind != "cr" or env.n != model.n:
        raise ModelError("need a CR environment matching the model")
    out = []
    for a in model.matrices:
        terms = {}
        for i in range(model.n):
            for j in range(model.n):
                v = a[i, j]
                if v:
                    e = [0] * env.nvars
                    e[env.zb(i)] += 1
                    e[env.z(j)] += 1
                    terms[tuple(e)] = v
        out.append(MultiPoly(env, terms))
    return tuple(out)


# ---------------------------------------------------------------------------
# model file format (JSON)
# ---------------------------------------------------------------------------


def _entry_to_json(x: GaussQ):
    return x.to_json()


def _entry_from_json(raw: Any, where: tuple[int, int, int]) -> GaussQ:
    k, i, j = where
    loc = f"matrix {k + 1}, row {i + 1}, col {j + 1}"
    try:
        if isinstance(raw, dict):
            extra = set(raw) - {"re", "im"}
            if extra:
                raise ValueError(f"unexpected keys {sorted(extra)}")
            return GaussQ(_rational(raw.get("re", "0")), _rational(raw.get("im", "0")))
        return GaussQ(_rational(raw), 0)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ModelParseError(f"bad entry at {loc}: {exc}", where) from None


def _rational(raw):
    if isinstance(raw, bool) or isinstance(raw, float):
        raise TypeError("entries must be integers or 'p/q' strings, not floats")
    if isinstance(raw, int):
        return raw
    if isinstance(raw, str):
        from fractions import Fraction

        return Fraction(raw.strip())
    raise TypeError(f"unsupported entry {raw!r}")


def model_from_dict(doc: dict) -> QuadricModel:
    if not isinstance(doc, dict):
        raise ModelParseError("model document must be an object with fields n, d, matrices")
    for key in ("n", "d", "matrices"):
        if key not in doc:
            raise ModelParseError(f"missing field {key!r}")
    n, d, mats = doc["n"], doc["d"], doc["matrices"]
    if not isinstance(n, int) or not isinstance(d, int) or n < 1 or d < 1:
        raise ModelParseError("n and d must be positive integers")
    if not isinstance(mats, list) or len(mats) != d:
        raise ModelParseError(f"expected a list of {d} matrices")
    hs = []
    for k, grid in enumerate(mats):
        if not isinstance(grid, list) or len(grid) != n or any(not isinstance(r, list) or len(r) != n for r in grid):
            raise ModelParseError(f"matrix {k + 1} must be a {n}x{n} grid", (k, -1, -1))
        vals = [[_entry_from_json(grid[i][j], (k, i, j)) for j in range(n)] for i in range(n)]
        for i in range(n):
            for j in range(i, n):
                if vals[i][j] != vals[j][i].conj():
                    loc = (k, j, i) if i != j else (k, i, j)
                    raise ModelParseError(
                        f"matrix {k + 1} is not Hermitian: entry (row {loc[1] + 1}, col {loc[2] + 1}) = "
                        f"{vals[loc[1]][loc[2]]} is not the conjugate of entry "
                        f"(row {loc[2] + 1}, col {loc[1] + 1}) = {vals[loc[2]][loc[1]]}",
                        loc,
                    )
        hs.append(HermitianMatrix(n, ExactMatrix.from_rows(vals)))
    return QuadricModel(n, d, tuple(hs))


def model_to_dict(model: QuadricModel) -> dict:
    return {
        "n": model.n,
        "d": model.d,
        "matrices": [
            [[_entry_to_json(a[i, j]) for j in range(model.n)] for i in range(model.n)] for a in model.matrices
        ],
    }


def loads_model(text: str) -> QuadricModel:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelParseError(f"invalid JSON: {exc}") from None
    return model_from_dict(doc)


def dumps_model(model: QuadricModel) -> str:
    return json.dumps(model_to_dict(model), indent=2)


def load_model(path) -> QuadricModel:
    with open(path, encoding="utf-8") as fh:
        return loads_model(fh.read())


def dump_model(model: QuadricModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_model(model) + "\n")
