"""Built-in worked examples with the classification results they are known to have."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exact import I, ExactMatrix
from .model import QuadricModel
from .nondegeneracy import ClassificationReport, corner_model, flat_model

__all__ = ["CatalogEntry", "CATALOG", "get_entry", "catalog_names", "expected_mismatches", "report_fields"]


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    model: QuadricModel
    provenance: str
    expected: dict = field(default_factory=dict)
    # linear change of target coordinates used when quoting relation certificates
    target_change: ExactMatrix | None = None


def report_fields(report: ClassificationReport) -> dict:
    """Flat decision fields of a report, the vocabulary used by ``expected``."""
    return {
        "condition_a": report.condition_a,
        "condition_b": report.condition_b,
        "tumanov": report.tumanov.holds,
        "cone_generating": report.cone_generating,
        "finite_type_two": report.finite_type_two,
        "sesqui_verdict": report.sesqui_status.verdict,
        "beloshapka_nondegenerate": report.beloshapka_nondegenerate,
        "condition_a_complex": report.condition_a_complex,
        "holomorphic_nondegeneracy_implied": report.holomorphic_nondegeneracy_implied,
    }


def expected_mismatches(entry: CatalogEntry, report: ClassificationReport) -> list[str]:
    got = report_fields(report)
    return [f"{k}: expected {v}, got {got[k]}" for k, v in entry.expected.items() if got[k] != v]


_half = Fraction(1, 2)

_ENTRIES = (
    CatalogEntry(
        "hyperquadric-c2",
        QuadricModel.from_rows([[[1]]]),
        "Heisenberg hyperquadric Im w = |z|^2 in C^2; automorphism algebra su(2,1) of dimension 8",
        {"condition_a": True, "condition_b": True, "tumanov": True, "beloshapka_nondegenerate": True},
    ),
    CatalogEntry(
        "beloshapka-c6-codim3",
        QuadricModel.from_rows(
            [
                [[1, 0, 0], [0, 0, 0], [0, 0, 0]],
                [[0, 1, 0], [1, 0, 0], [0, 0, 0]],
                [[0, 0, 1], [0, 0, 0], [1, 0, 0]],
            ]
        ),
        "Im w1 = |z1|^2, Im w2 = 2 Re(z1 conj(z2)), Im w3 = 2 Re(z1 conj(z3)) in C^6: nondegenerate, "
        "yet every linear combination of the matrices is singular",
        {"condition_a": True, "condition_b": True, "tumanov": False, "beloshapka_nondegenerate": True},
    ),
    CatalogEntry(
        "ber-c6-codim4",
        QuadricModel.from_rows([[[1, 0], [0, 0]], [[0, 0], [0, 1]], [[0, 1], [1, 0]], [[0, I], [-I, 0]]]),
        "Im w1 = |z1|^2, Im w2 = |z2|^2, Im w3 = 2 Re(z1 conj(z2)), Im w4 = 2 Im(z1 conj(z2)) in C^6: "
        "Tumanov holds but the sesquilinear map lands in a quadric cone; in the complex target "
        "coordinates (t1, t2, conj(z1) z2, z1 conj(z2)) the relation reads t1 t2 = t3 t4",
        {
            "condition_a": True,
            "condition_b": True,
            "tumanov": True,
            "beloshapka_nondegenerate": True,
            "sesqui_verdict": "NotDominant",
        },
        ExactMatrix.from_rows(
            [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, _half, -_half * I], [0, 0, _half, _half * I]]
        ),
    ),
    CatalogEntry(
        "diag-pair-c4",
        QuadricModel.from_rows([[[1, 0], [0, 0]], [[0, 0], [0, 1]]]),
        "Im w1 = |z1|^2, Im w2 = |z2|^2: sesquilinear map onto C^2 while the Levi map only reaches the closed positive quadrant",
        {"condition_a": True, "condition_b": True, "sesqui_verdict": "Dominant", "beloshapka_nondegenerate": True},
    ),
    CatalogEntry(
        "corner-a-not-b",
        corner_model(3, 2),
        "independent 2x2 Hermitian blocks padded by a zero last row and column (d <= (n-1)^2): "
        "linearly independent matrices with a common kernel vector e3",
        {"condition_a": True, "condition_b": False, "beloshapka_nondegenerate": False},
    ),
    CatalogEntry(
        "flat-b-not-a",
        flat_model(2, 2),
        "A1 = identity, A2 = 0: trivial common kernel but linearly dependent matrices",
        {"condition_a": False, "condition_b": True, "beloshapka_nondegenerate": False},
    ),
    CatalogEntry(
        "degenerate-flat",
        QuadricModel.from_rows([[[0]]]),
        "Im w = 0 in C^2: Levi-flat, every holomorphic function of w gives an infinitesimal automorphism",
        {"condition_a": False, "condition_b": False, "tumanov": False, "beloshapka_nondegenerate": False},
    ),
)

CATALOG: dict[str, CatalogEntry] = {e.name: e for e in _ENTRIES}


def catalog_names() -> list[str]:
    return list(CATALOG)


def get_entry(name: str) -> CatalogEntry:
    try:
        return CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown catalog entry {name!r}; known: {', '.join(CATALOG)}") from None
