"""Exact nondegeneracy tests and jet analysis for quadric CR submanifolds Im w = <z̄, z>."""

from .exact import GaussQ, ExactMatrix, SparseSystem, rank, det, kernel_basis
from .poly import Env, MultiPoly
from .model import HermitianMatrix, QuadricModel, levi, sesqui, change_coordinates, load_model, loads_model
from .nondegeneracy import classify, analyze_sesqui_surjectivity, check_tumanov, run_harness
from .jet import HolMapPair, expand_basic_identity, solve_jet_system, char_variety_test
from .catalog import CATALOG, get_entry

__version__ = "0.1.0"

__all__ = [
    "GaussQ", "ExactMatrix", "SparseSystem", "rank", "det", "kernel_basis",
    "Env", "MultiPoly",
    "HermitianMatrix", "QuadricModel", "levi", "sesqui", "change_coordinates", "load_model", "loads_model",
    "classify", "analyze_sesqui_surjectivity", "check_tumanov", "run_harness",
    "HolMapPair", "expand_basic_identity", "solve_jet_system", "char_variety_test",
    "CATALOG", "get_entry",
]
