"""Matrix-free exact diagonalization for Pauli-sum Hamiltonians.

States are complex amplitude vectors over the computational Z basis; basis
index bit ``i`` is the Z eigenvalue of site ``i`` through ``(-1)**bit``.
Hamiltonians act term by term: each string permutes basis indices by XOR
with its X mask and multiplies by the Z-mask parity sign, so ``apply`` runs
in O(terms * 2^n) with no matrix ever formed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .lattice import Lattice
from .pauli import PauliString, PauliSum

_DENSE_CUTOFF = 256       # below this dimension just solve densely
_DEGENERACY_TOL = 1e-9    # eigenvalues closer than this count as degenerate


class LanczosConvergenceError(RuntimeError):
    """Lanczos failed to reach the requested residual."""

    def __init__(self, msg, best_residual):
        super().__init__(f"{msg} (best residual {best_residual:.3e})")
        self.best_residual = best_residual


@dataclass
class StateVector:
    """Normalized state of n qubits."""

    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (1 << self.n,):
            raise ValueError(
                f"amplitude vector has shape {self.amplitudes.shape}, expected (2^{self.n},)"
            )

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "StateVector":
        return StateVector(self.n, self.amplitudes / self.norm())


@dataclass
class SpectrumResult:
    """Lowest eigenpairs: ascending energies, vectors, and residual norms."""

    energies: list[float]
    vectors: list[StateVector]
    residuals: list[float]


def apply(h: PauliSum | PauliString, v: StateVector) -> StateVector:
    """H v, unnormalized.  Accepts a single string as a one-term sum."""
    terms = [(1.0, h)] if isinstance(h, PauliString) else list(h)
    n = h.n
    if n != v.n:
        raise ValueError(f"dimension mismatch: operator on {n}, state on {v.n}")
    idx = np.arange(1 << n, dtype=np.uint64)
    w = np.zeros_like(v.amplitudes)
    for coeff, s in terms:
        par = (np.bitwise_count(idx & np.uint64(s.z_mask)) & np.uint64(1)).astype(np.float64)
        vals = (coeff * s.phase()) * (1.0 - 2.0 * par) * v.amplitudes
        w[np.bitwise_xor(idx, np.uint64(s.x_mask)).astype(np.int64)] += vals
    return StateVector(n, w)


def expectation(v: StateVector, p: PauliSum | PauliString) -> float:
    """<v|P|v> for a Hermitian operator; the tiny imaginary part is dropped."""
    if isinstance(p, PauliString) and not p.is_hermitian():
        raise ValueError(f"operator is not Hermitian: {p}")
    val = complex(np.vdot(v.amplitudes, apply(p, v).amplitudes))
    if abs(val.imag) > 1e-10 * max(1.0, abs(val.real)):
        raise ValueError(f"expectation came out complex: {val}")
    return float(val.real)


def _matvec(h: PauliSum):
    n = h.n
    idx = np.arange(1 << n, dtype=np.uint64)
    moves = []
    for coeff, s in h:
        tgt = np.bitwise_xor(idx, np.uint64(s.x_mask)).astype(np.int64)
        sign = 1.0 - 2.0 * (np.bitwise_count(idx & np.uint64(s.z_mask)) & np.uint64(1)).astype(np.float64)
        moves.append((coeff * s.phase(), tgt, sign))

    def mv(v):
        w = np.zeros_like(v)
        for amp, tgt, sign in moves:
            w[tgt] += amp * sign * v
        return w

    return mv


def _dense_solve(h: PauliSum, k: int):
    dim = 1 << h.n
    mv = _matvec(h)
    m = np.zeros((dim, dim), dtype=complex)
    eye = np.eye(dim, dtype=complex)
    for j in range(dim):
        m[:, j] = mv(eye[:, j])
    vals, vecs = np.linalg.eigh(m)
    return [float(x) for x in vals[:k]], [vecs[:, i] for i in range(k)]


def ground_state(
    h: PauliSum,
    k: int = 1,
    tol: float = 1e-10,
    max_iter: int = 300,
    seed: int = 7,
) -> SpectrumResult:
    """Lowest k eigenpairs by Lanczos with full reorthogonalization.

    Deterministic for a fixed seed.  Small problems are solved densely.

    Raises
    ------
    LanczosConvergenceError
        if the k-th residual is still above ``tol`` after ``max_iter`` steps.
    """
    if k not in (1, 2, 3):
        raise ValueError(f"k must be 1, 2 or 3, got {k}")
    dim = 1 << h.n
    if dim <= max(_DENSE_CUTOFF, 4 * k):
        energies, vecs = _dense_solve(h, k)
        states = [StateVector(h.n, w) for w in vecs]
    else:
        energies, states = _lanczos(h, k, tol, max_iter, seed)
    mv = _matvec(h)
    residuals = [
        float(np.linalg.norm(mv(sv.amplitudes) - e * sv.amplitudes))
        for e, sv in zip(energies, states)
    ]
    return SpectrumResult(
        energies=energies,
        vectors=[s.normalized() for s in states],
        residuals=residuals,
    )


def _lanczos(h: PauliSum, k: int, tol: float, max_iter: int, seed: int):
    dim = 1 << h.n
    mv = _matvec(h)
    rng = np.random.default_rng(seed)
    q = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    q /= np.linalg.norm(q)
    basis = [q]
    alphas: list[float] = []
    betas: list[float] = []
    best = np.inf
    m = min(max_iter, dim)
    for _ in range(m):
        w = mv(basis[-1])
        a = float(np.vdot(basis[-1], w).real)
        alphas.append(a)
        w = w - a * basis[-1]
        if len(basis) > 1:
            w = w - betas[-1] * basis[-2]
        # full reorthogonalization, two sweeps for float safety
        for _ in range(2):
            for u in basis:
                w = w - np.vdot(u, w) * u
        b = float(np.linalg.norm(w))
        scale = max(1.0, max(abs(a) for a in alphas))
        niter = len(alphas)
        if niter >= k:
            vals, vecs = eigh_tridiagonal(np.array(alphas), np.array(betas))
            res = float(abs(b * vecs[-1, :k]).max())
            best = min(best, res)
            if res <= tol * scale or b <= 1e-14 * scale or niter == dim:
                arr = np.array(basis).T
                states = [StateVector(h.n, arr @ vecs[:, i]) for i in range(k)]
                return [float(v) for v in vals[:k]], states
        if b <= 1e-14 * scale:
            # Krylov space closed before k pairs converged: continue in the
            # orthogonal complement with an exactly decoupled block
            w = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
            for u in basis:
                w = w - np.vdot(u, w) * u
            nrm = float(np.linalg.norm(w))
            if nrm < 1e-12:
                break
            betas.append(0.0)
            basis.append(w / nrm)
            continue
        betas.append(b)
        basis.append(w / b)
    raise LanczosConvergenceError(f"no convergence after {m} iterations for k={k}", best)


def gap(h: PauliSum, tol: float = 1e-10, max_iter: int = 300, seed: int = 7) -> float:
    """E_1 - E_0, with near-degeneracies below 1e-9 reported as zero."""
    res = ground_state(h, k=2, tol=tol, max_iter=max_iter, seed=seed)
    g = res.energies[1] - res.energies[0]
    if g < _DEGENERACY_TOL:
        return 0.0
    return float(g)


def cluster_state(lat: Lattice) -> StateVector:
    """The joint +1 stabilizer eigenstate: CZ on every edge applied to |+...+>."""
    n = lat.n
    dim = 1 << n
    amps = np.full(dim, 1.0 / np.sqrt(dim), dtype=complex)
    idx = np.arange(dim, dtype=np.uint64)
    for s in lat.sites:
        for t in lat.adjacency[s]:
            i, j = lat.bit(s), lat.bit(t)
            if i < j:
                both = ((idx >> np.uint64(i)) & (idx >> np.uint64(j)) & np.uint64(1)).astype(bool)
                amps[both] *= -1.0
    return StateVector(n, amps)
