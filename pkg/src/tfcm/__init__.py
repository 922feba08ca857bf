"""Transverse-field cluster model toolkit.

Symbolic Pauli algebra and duality checks, matrix-free exact
diagonalization, the free-fermion solution of the dual Ising chain, and
exact measurement-pattern simulation for gate fidelities.
"""

from . import exact, fermion, gf2, lattice, mbqc, model, pauli, plotting
from .exact import StateVector, apply, cluster_state, expectation, gap, ground_state
from .fermion import FermionSolution, pfeuty_asymptote, solve_tfim, zz_correlator
from .lattice import Lattice, diagonal_string, line, square
from .mbqc import (
    GateFidelityReport,
    MeasurementPattern,
    fidelity_from_correlators,
    pattern_csign,
    pattern_identity,
    pattern_zrot,
    simulate,
)
from .model import (
    CSignLayout,
    csign_characterizing_stabilizers,
    dual_tfim_expected,
    duality_1d,
    duality_2d,
    order_string_1d,
    order_string_2d,
    self_duality_map,
    stabilizer,
    sublattice_ham,
    tfcm,
    tfim_chain,
)
from .pauli import CliffordMap, PauliString, PauliSum, check_canonical, commutes, conjugate, mul

__all__ = [
    "exact", "fermion", "gf2", "lattice", "mbqc", "model", "pauli", "plotting",
    "StateVector", "apply", "cluster_state", "expectation", "gap", "ground_state",
    "FermionSolution", "pfeuty_asymptote", "solve_tfim", "zz_correlator",
    "Lattice", "diagonal_string", "line", "square",
    "GateFidelityReport", "MeasurementPattern", "fidelity_from_correlators",
    "pattern_csign", "pattern_identity", "pattern_zrot", "simulate",
    "CSignLayout", "csign_characterizing_stabilizers", "dual_tfim_expected",
    "duality_1d", "duality_2d", "order_string_1d", "order_string_2d",
    "self_duality_map", "stabilizer", "sublattice_ham", "tfcm", "tfim_chain",
    "CliffordMap", "PauliString", "PauliSum", "check_canonical", "commutes",
    "conjugate", "mul",
]
__version__ = "0.1.0"
