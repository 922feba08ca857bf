"""Measurement patterns, exact branch enumeration and gate fidelities.

A pattern lists single-site measurements (X, Z, or an XY-plane angle) plus
designated output sites.  ``simulate`` enumerates every outcome branch of the
pattern on a given state, applies the generated byproduct correction, traces
down to the outputs and averages the overlap with the ideal resource state.

Corrections are generated, not hand-enumerated.  The group of stabilizer
products compatible with every measurement (X-only content on X-measured
sites, Z-only on Z-measured ones) fixes the output state branch by branch at
zero field; matching the branch sign pattern of an independent set of those
survivors against the all-plus branch yields the output Pauli correction.
Patterns with a rotated measurement use per-site branch-flip elements
instead, which also provide the adaptive sign of the measurement angle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gf2
from .exact import StateVector, cluster_state, expectation
from .lattice import Lattice
from .model import stabilizer
from .pauli import PauliString, commutes, mul, mul_all


@dataclass(frozen=True)
class Measurement:
    site: object
    basis: str            # "x" | "z" | "xy"
    angle: float = 0.0    # used by "xy"


@dataclass
class BranchRecord:
    outcomes: str         # "+-..+" in measurement order
    probability: float
    fidelity: float | None   # None for a skipped zero-probability branch


@dataclass
class GateFidelityReport:
    gate: str
    field_strength: float | None
    lattice: str
    direct_fidelity: float
    correlator_fidelity: float | None
    branches: list[BranchRecord]
    skipped_branches: int

    def to_json_dict(self) -> dict:
        return {
            "gate": self.gate,
            "B": self.field_strength,
            "lattice": self.lattice,
            "direct_fidelity": self.direct_fidelity,
            "correlator_fidelity": self.correlator_fidelity,
            "skipped_branches": self.skipped_branches,
            "branches": [
                {"outcomes": b.outcomes, "probability": b.probability, "fidelity": b.fidelity}
                for b in self.branches
            ],
        }


class MeasurementPattern:
    """A measurement layout with generated correction rules."""

    def __init__(self, lat: Lattice, measurements, outputs, gate: str,
                 order_strings=None, theta: float = 0.0):
        self.lattice = lat
        self.measurements = tuple(measurements)
        self.outputs = tuple(outputs)
        self.gate = gate
        self.theta = theta
        self.order_strings = order_strings
        mset = {m.site for m in self.measurements}
        if len(mset) != len(self.measurements):
            raise ValueError("repeated measurement site")
        if mset & set(self.outputs):
            raise ValueError("measured sites and output sites must be disjoint")
        self._adj = lat.adjacency_rows()
        self._theta_index = next(
            (k for k, m in enumerate(self.measurements) if m.basis == "xy"), None
        )
        if self._theta_index is None:
            self._build_survivor_corrections()
            self._flip_alphas = None
            self._angle_deps = 0
        else:
            self._build_flip_corrections()

    # -- survivor scheme: works for any X/Z pattern, including correlated outcomes
    def _build_survivor_corrections(self):
        lat, A = self.lattice, self._adj
        n = lat.n
        rows = []
        for m in self.measurements:
            b = lat.bit(m.site)
            rows.append(A[b] if m.basis in ("x", "xy") else 1 << b)
        survivors = gf2.nullspace(rows, n)
        out_bits = [lat.bit(s) for s in self.outputs]
        no = len(out_bits)
        basis = []   # (packed x|z output image, measured-outcome mask)
        pivots = []
        for alpha in survivors:
            za = 0
            for i in range(n):
                if (alpha >> i) & 1:
                    za ^= A[i]
            xo = zo = 0
            for k, b in enumerate(out_bits):
                if (alpha >> b) & 1:
                    xo |= 1 << k
                if (za >> b) & 1:
                    zo |= 1 << k
            mm = 0
            for k, m in enumerate(self.measurements):
                b = lat.bit(m.site)
                hit = (alpha >> b) & 1 if m.basis in ("x", "xy") else (za >> b) & 1
                if hit:
                    mm |= 1 << k
            vec, red_mm = xo | (zo << no), mm
            for pv, pm in pivots:
                if (vec >> (pv.bit_length() - 1)) & 1:
                    vec ^= pv
                    red_mm ^= pm
            if vec:
                pivots.append((vec, red_mm))
                basis.append((xo | (zo << no), vec, red_mm))
        if len(pivots) < no:
            raise ValueError(
                f"pattern determines only {len(pivots)} of {no} output stabilizers"
            )
        self._out_basis = [(vec, mm) for _, vec, mm in basis]

    def _correction_survivor(self, bits: int):
        no = len(self.outputs)
        rows, rhs = [], []
        for vec, mm in self._out_basis:
            xo = vec & ((1 << no) - 1)
            zo = vec >> no
            rows.append(zo | (xo << no))
            rhs.append((bits & mm).bit_count() & 1)
        sol = gf2.solve(rows, rhs)
        if sol is None:
            raise RuntimeError("inconsistent correction system")
        return sol & ((1 << no) - 1), sol >> no

    # -- flip scheme: per-site branch-flip elements, needed for adaptive angles
    def _build_flip_corrections(self):
        lat, A = self.lattice, self._adj
        tsite = lat.bit(self.measurements[self._theta_index].site)
        alphas = {}
        for j, mj in enumerate(self.measurements):
            bj = lat.bit(mj.site)
            rows, rhs = [], []
            for mi in self.measurements:
                bi = lat.bit(mi.site)
                if mi.basis in ("x", "xy"):
                    rows.append(A[bi])
                    rhs.append(1 if bi == bj else 0)
                    if bi == bj:
                        rows.append(1 << bi)  # factor exactly Z there
                        rhs.append(0)
                else:
                    rows.append(1 << bi)
                    rhs.append(1 if bi == bj else 0)
            sol = gf2.solve(rows, rhs)
            if sol is None:
                raise ValueError(
                    f"no branch-flip element for measured site {mj.site}; "
                    "rotated measurements need a plain wire pattern"
                )
            alphas[j] = sol
        self._flip_alphas = alphas
        deps = 0
        for j, alpha in alphas.items():
            if j != self._theta_index and (alpha >> tsite) & 1:
                deps |= 1 << j
        self._angle_deps = deps

    def _correction_flip(self, bits: int):
        lat, A = self.lattice, self._adj
        alpha = 0
        for j in range(len(self.measurements)):
            if (bits >> j) & 1:
                alpha ^= self._flip_alphas[j]
        za = 0
        for i in range(lat.n):
            if (alpha >> i) & 1:
                za ^= A[i]
        xo = zo = 0
        for k, s in enumerate(self.outputs):
            b = lat.bit(s)
            if (alpha >> b) & 1:
                xo |= 1 << k
            if (za >> b) & 1:
                zo |= 1 << k
        return xo, zo

    def correction(self, bits: int):
        """Output-Pauli byproduct masks (x, z) for an outcome bit vector."""
        if self._flip_alphas is not None:
            return self._correction_flip(bits)
        return self._correction_survivor(bits)

    def angle_sign(self, bits: int) -> int:
        """Adaptive sign of the XY measurement angle for this branch."""
        return -1 if (bits & self._angle_deps).bit_count() & 1 else 1


# ---------------------------------------------------------------------------
# pattern builders
# ---------------------------------------------------------------------------

def _wire_path(lat: Lattice, a_in, a_out):
    if lat.kind == "line":
        if (a_in, a_out) != (1, lat.dims[0]):
            raise ValueError("line wires run the whole chain: a_in=1, a_out=N")
        return list(lat.sites)
    (r0, c0), (r1, c1) = a_in, a_out
    dr, dc = r1 - r0, c1 - c0
    if abs(dr) != abs(dc) or dr == 0:
        raise ValueError("grid wire ends must differ by a diagonal displacement")
    sr, sc = (1 if dr > 0 else -1), (1 if dc > 0 else -1)
    path = [(r0, c0)]
    r, c = r0, c0
    for _ in range(abs(dr)):
        c += sc
        path.append((r, c))
        r += sr
        path.append((r, c))
    for s in path:
        if s not in lat.index:
            raise ValueError(f"wire leaves the lattice at {s}")
    return path


def _ring_of(lat: Lattice, wire):
    wset = set(wire)
    ring = []
    for s in wire:
        for t in lat.neighbors(s):
            if t not in wset and t not in ring:
                ring.append(t)
    return ring


def _wire_order_strings(lat: Lattice, wire):
    s_inner = mul_all([stabilizer(lat, s) for s in wire[1::2]])
    s_outer = mul_all([stabilizer(lat, s) for s in wire[0::2]])
    return s_inner, s_outer


def pattern_identity(lat: Lattice, a_in, a_out) -> MeasurementPattern:
    """X along the wire interior, Z on every off-wire neighbor of the wire."""
    wire = _wire_path(lat, a_in, a_out)
    meas = [Measurement(s, "x") for s in wire[1:-1]]
    meas += [Measurement(s, "z") for s in _ring_of(lat, wire)]
    return MeasurementPattern(
        lat, meas, (a_in, a_out), gate="identity",
        order_strings=_wire_order_strings(lat, wire),
    )


def pattern_zrot(lat: Lattice, theta: float, a_in=None, a_out=None,
                 rotated_site=None) -> MeasurementPattern:
    """Identity pattern with one interior X measurement tilted into the XY plane."""
    if lat.kind != "line":
        raise ValueError("rotated-measurement wires are supported on lines")
    N = lat.dims[0]
    a_in = 1 if a_in is None else a_in
    a_out = N if a_out is None else a_out
    wire = _wire_path(lat, a_in, a_out)
    interior = wire[1:-1]
    if rotated_site is None:
        rotated_site = interior[len(interior) // 2]
    if rotated_site not in interior:
        raise ValueError(f"rotated site {rotated_site!r} is not interior to the wire")
    meas = [
        Measurement(s, "xy", theta) if s == rotated_site else Measurement(s, "x")
        for s in interior
    ]
    return MeasurementPattern(
        lat, meas, (a_in, a_out), gate="zrot",
        order_strings=_wire_order_strings(lat, wire), theta=theta,
    )


def pattern_csign(lat: Lattice, layout) -> MeasurementPattern:
    """X on the crossing block, Z on off-wire neighbors, four output ports."""
    layout.validate(lat)
    a_wire, b_wire = layout.wires()
    outputs = (a_wire[0], a_wire[-1], b_wire[0], b_wire[-1])
    interior = []
    for w in (a_wire, b_wire):
        for s in w[1:-1]:
            if s not in interior:
                interior.append(s)
    wire_all = list(dict.fromkeys(a_wire + b_wire))
    ring = [s for s in _ring_of(lat, wire_all) if s not in outputs]
    meas = [Measurement(s, "x") for s in interior]
    meas += [Measurement(s, "z") for s in ring]
    return MeasurementPattern(lat, meas, outputs, gate="csign")


# ---------------------------------------------------------------------------
# simulation
# ---------------------------------------------------------------------------

def _apply_masks(amps, n, xm, zm):
    idx = np.arange(amps.size, dtype=np.uint64)
    par = (np.bitwise_count(idx & np.uint64(zm)) & np.uint64(1)).astype(np.float64)
    out = np.empty_like(amps)
    out[np.bitwise_xor(idx, np.uint64(xm)).astype(np.int64)] = (1.0 - 2.0 * par) * amps
    return out


def _project(amps, n, bit, basis, outcome, angle=0.0):
    if basis == "x":
        o = _apply_masks(amps, n, 1 << bit, 0)
    elif basis == "z":
        o = _apply_masks(amps, n, 0, 1 << bit)
    else:
        o = np.cos(angle) * _apply_masks(amps, n, 1 << bit, 0) \
            + np.sin(angle) * 1j * _apply_masks(amps, n, 1 << bit, 1 << bit)
    return 0.5 * (amps + outcome * o)


def _output_matrix(amps, n, out_bits):
    rest = [b for b in range(n) if b not in out_bits]
    perm = rest + list(out_bits)
    t = amps.reshape([2] * n, order="F").transpose(perm)
    return t.reshape(1 << len(rest), 1 << len(out_bits), order="F")


def reference_state(pattern: MeasurementPattern) -> StateVector:
    """Ideal resource: the corrected all-plus branch on the zero-field cluster."""
    lat = pattern.lattice
    amps = cluster_state(lat).amplitudes
    n = lat.n
    for m in pattern.measurements:
        ang = pattern.theta if m.basis == "xy" else 0.0
        amps = _project(amps, n, lat.bit(m.site), m.basis, +1, ang)
    amps = amps / np.linalg.norm(amps)
    t = _output_matrix(amps, n, [lat.bit(s) for s in pattern.outputs])
    u, s, vt = np.linalg.svd(t, full_matrices=False)
    if s[0] < 1.0 - 1e-9:
        raise ValueError(f"reference branch is not pure (weights {s[:3]})")
    return StateVector(len(pattern.outputs), vt[0])


def simulate(
    pattern: MeasurementPattern,
    v: StateVector,
    reference: StateVector | None = None,
    apply_corrections: bool = True,
    field_strength: float | None = None,
    zero_probability_tol: float = 1e-13,
) -> GateFidelityReport:
    """Enumerate all outcome branches exactly and average the output fidelity."""
    lat = pattern.lattice
    n = lat.n
    if v.n != n:
        raise ValueError(f"state on {v.n} qubits, lattice has {n}")
    if reference is None:
        reference = reference_state(pattern)
    out_bits = [lat.bit(s) for s in pattern.outputs]
    if reference.n != len(out_bits):
        raise ValueError("reference state size does not match the output count")
    ref = reference.amplitudes
    nm = len(pattern.measurements)
    branches: list[BranchRecord] = []
    skipped = 0
    total = 0.0
    psum = 0.0
    for bits in range(1 << nm):
        sigma = pattern.angle_sign(bits)
        amps = v.amplitudes
        for k, m in enumerate(pattern.measurements):
            outcome = 1 - 2 * ((bits >> k) & 1)
            ang = sigma * pattern.theta if m.basis == "xy" else 0.0
            amps = _project(amps, n, lat.bit(m.site), m.basis, outcome, ang)
        p = float(np.vdot(amps, amps).real)
        label = "".join("-" if (bits >> k) & 1 else "+" for k in range(nm))
        if p < zero_probability_tol:
            skipped += 1
            branches.append(BranchRecord(label, 0.0, None))
            continue
        amps = amps / np.sqrt(p)
        if apply_corrections:
            xo, zo = pattern.correction(bits)
            xm = zm = 0
            for k, b in enumerate(out_bits):
                if (xo >> k) & 1:
                    xm |= 1 << b
                if (zo >> k) & 1:
                    zm |= 1 << b
            amps = _apply_masks(amps, n, xm, zm)
        t = _output_matrix(amps, n, out_bits)
        f = float(np.linalg.norm(t @ ref.conj()) ** 2)
        branches.append(BranchRecord(label, p, f))
        total += p * f
        psum += p
    if skipped == 0 and abs(psum - 1.0) > 1e-10:
        raise RuntimeError(f"branch probabilities sum to {psum}, not 1")
    corr = None
    if pattern.order_strings is not None:
        s1, s2 = pattern.order_strings
        corr = fidelity_from_correlators(v, s1, s2)
    return GateFidelityReport(
        gate=pattern.gate,
        field_strength=field_strength,
        lattice=lat.describe(),
        direct_fidelity=total,
        correlator_fidelity=corr,
        branches=branches,
        skipped_branches=skipped,
    )


def fidelity_from_correlators(v: StateVector, s1: PauliString, s2: PauliString) -> float:
    """(1 + <s1> + <s2> + <s1 s2>) / 4: overlap with the stabilizer-ideal pair.

    The ideal post-measurement output is the two-qubit state stabilized by the
    measured-out images of the two order strings; its projector averages the
    four group elements, and summing branches turns each image back into the
    full string.  The value is exactly the direct branch average for any state.
    """
    if not commutes(s1, s2):
        raise ValueError("order strings must commute")
    e1 = expectation(v, s1)
    e2 = expectation(v, s2)
    e12 = expectation(v, mul(s1, s2))
    return (1.0 + e1 + e2 + e12) / 4.0
