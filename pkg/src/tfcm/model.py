"""Hamiltonians, duality maps and order-parameter operators for the TFCM.

The transverse-field cluster model on a lattice is

    H(B) = -sum_mu (K_mu + B X_mu),   K_mu = X_mu prod_{nu ~ mu} Z_nu,

with open boundaries (boundary stabilizers simply lose the missing Z).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import gf2
from .lattice import BLUE, RED, Lattice, SiteString
from .pauli import (
    CliffordMap,
    PauliString,
    PauliSum,
    conjugate,
    conjugate_sum,
    from_sites,
    mul_all,
    single,
)


def _opposite(color: str) -> str:
    return BLUE if color == RED else RED


def stabilizer(lat: Lattice, mu) -> PauliString:
    """K_mu = X_mu prod_{nu ~ mu} Z_nu with sign +1."""
    b = lat.bit(mu)
    return from_sites(lat.n, x_sites=[b], z_sites=[lat.bit(nu) for nu in lat.neighbors(mu)])


def tfcm(lat: Lattice, B: float) -> PauliSum:
    """H(B) = -sum_mu K_mu - B sum_mu X_mu."""
    terms = [(-1.0, stabilizer(lat, mu)) for mu in lat.sites]
    if B != 0.0:
        terms += [(-float(B), single(lat.n, "X", lat.bit(mu))) for mu in lat.sites]
    return PauliSum(lat.n, terms)


def sublattice_ham(lat: Lattice, B: float, color: str) -> PauliSum:
    """The commuting half of H(B) that is dual to a model on the given color.

    The red half is -sum_{mu blue} K_mu - B sum_{mu red} X_mu; blue likewise
    with the colors swapped.  The two halves commute and add up to H(B).
    """
    opp = _opposite(color)
    terms = [(-1.0, stabilizer(lat, mu)) for mu in lat.sites_of_color(opp)]
    if B != 0.0:
        terms += [
            (-float(B), single(lat.n, "X", lat.bit(mu))) for mu in lat.sites_of_color(color)
        ]
    return PauliSum(lat.n, terms)


# ---------------------------------------------------------------------------
# duality maps
# ---------------------------------------------------------------------------

def duality_1d(lat_or_n) -> CliffordMap:
    """The line duality: X_j fixed, Z on even sites picks up the X string of
    all odd sites to its left, Z on odd sites the X string of all even sites
    to its right.  Defined for even N only.
    """
    if isinstance(lat_or_n, Lattice):
        if lat_or_n.kind != "line":
            raise ValueError("duality_1d needs a line lattice")
        N = lat_or_n.dims[0]
    else:
        N = int(lat_or_n)
    if N % 2 != 0:
        raise ValueError(f"the line duality needs even N, got {N}")
    n = N
    x_images = [single(n, "X", j) for j in range(n)]
    z_images = []
    for site in range(1, N + 1):
        b = site - 1
        if site % 2 == 0:
            xs = [k - 1 for k in range(1, site, 2)]        # odd sites below
        else:
            xs = [k - 1 for k in range(site + 1, N + 1, 2)]  # even sites above
        z_images.append(from_sites(n, x_sites=xs, z_sites=[b]))
    return CliffordMap(n, x_images, z_images)


def dual_tfim_expected(N: int, B: float, color: str) -> PauliSum:
    """The dual open transverse-field Ising chain on one sublattice.

    Red: -Z_2 - sum_i Z_{2(i-1)} Z_{2i} - B sum_i X_{2i}; blue mirrors it
    with the single longitudinal boundary term at site N-1.  The field sum
    runs over every sublattice site.
    """
    if N % 2 != 0:
        raise ValueError(f"even N required, got {N}")
    n = N
    terms: list[tuple[float, PauliString]] = []
    if color == RED:
        sub = list(range(2, N + 1, 2))
        boundary = 2
    elif color == BLUE:
        sub = list(range(1, N, 2))
        boundary = N - 1
    else:
        raise ValueError(f"unknown color {color!r}")
    terms.append((-1.0, single(n, "Z", boundary - 1)))
    for a, b in zip(sub, sub[1:]):
        terms.append((-1.0, from_sites(n, z_sites=[a - 1, b - 1])))
    if B != 0.0:
        for a in sub:
            terms.append((-float(B), single(n, "X", a - 1)))
    return PauliSum(n, terms)


def tfim_chain(M: int, B: float, boundary: str = "none") -> PauliSum:
    """Compact open TFIM on M qubits: -sum Z_p Z_{p+1} - B sum X_p.

    ``boundary`` adds the single longitudinal term: "first" -> -Z_1,
    "last" -> -Z_M, "none" -> symmetric chain.
    """
    if M < 2:
        raise ValueError(f"chain needs M >= 2, got {M}")
    terms: list[tuple[float, PauliString]] = []
    for p in range(M - 1):
        terms.append((-1.0, from_sites(M, z_sites=[p, p + 1])))
    if B != 0.0:
        for p in range(M):
            terms.append((-float(B), single(M, "X", p)))
    if boundary == "first":
        terms.append((-1.0, single(M, "Z", 0)))
    elif boundary == "last":
        terms.append((-1.0, single(M, "Z", M - 1)))
    elif boundary != "none":
        raise ValueError(f"unknown boundary {boundary!r}")
    return PauliSum(M, terms)


def compact_to_sublattice(h: PauliSum, lat: Lattice, color: str) -> PauliSum:
    """Reindex a sum supported on one color onto that sublattice's qubits."""
    sub = lat.sites_of_color(color)
    pos = {lat.bit(s): k for k, s in enumerate(sub)}
    M = len(sub)
    terms = []
    for c, s in h:
        xs, zs = [], []
        for b in range(lat.n):
            if (s.x_mask >> b) & 1 or (s.z_mask >> b) & 1:
                if b not in pos:
                    raise ValueError("term leaves the chosen sublattice")
            if (s.x_mask >> b) & 1:
                xs.append(pos[b])
            if (s.z_mask >> b) & 1:
                zs.append(pos[b])
        sign = s.sign()
        terms.append((sign * c, from_sites(M, x_sites=xs, z_sites=zs)))
    return PauliSum(M, terms)


def _duality_2d_solution(lat: Lattice):
    """(S, Q, fixes): the GF(2) string matrix, the diagonal touch-up and the
    touched sites, solving (A + Q) S = I with Q minimal and boundary-first.
    """
    A = lat.adjacency_rows()
    n = lat.n
    Q = [0] * n
    fixes = []
    while True:
        rows = [A[i] ^ Q[i] for i in range(n)]
        S = gf2.inverse(rows, n)
        if S is not None:
            return S, Q, tuple(fixes)
        kern = gf2.nullspace(rows, n)[0]
        cand = [i for i in range(n) if (kern >> i) & 1]
        boundary = [i for i in cand if lat.on_boundary(lat.sites[i])]
        c = (boundary or cand)[0]
        Q[c] ^= 1 << c
        fixes.append(lat.sites[c])


def duality_2d(lat: Lattice) -> CliffordMap:
    """Cone duality on an open grid, with a minimal boundary completion.

    The X-string attached to Z_mu is row mu of the GF(2) inverse of the
    adjacency matrix; on grids where that matrix is singular the inverse of
    A + Q is used instead, with Q a minimal diagonal touch-up on boundary
    sites.  X_mu maps to X[(A S)_mu] Z[Q_mu], which is plain X_mu wherever
    the touch-up is absent.  Every stabilizer image is then Z-only with
    4-site plaquette support in the interior.
    """
    if lat.kind != "square":
        raise ValueError("duality_2d needs a square lattice")
    A = lat.adjacency_rows()
    n = lat.n
    S, Q, _ = _duality_2d_solution(lat)
    x_images = []
    z_images = []
    for b in range(n):
        srow = S[b]
        z_images.append(
            from_sites(
                n,
                x_sites=[k for k in range(n) if (srow >> k) & 1],
                z_sites=[b],
            )
        )
        # x-part of the X image: XOR of S rows over the neighbors of b
        ax = 0
        for k in range(n):
            if (A[b] >> k) & 1:
                ax ^= S[k]
        x_images.append(
            from_sites(
                n,
                x_sites=[k for k in range(n) if (ax >> k) & 1],
                z_sites=[k for k in range(n) if (Q[b] >> k) & 1],
            )
        )
    # normalize: each stabilizer image contains exactly its own X image, so a
    # sign flip there makes every dual plaquette term come out with +1 sign
    cmap = CliffordMap(n, x_images, z_images)
    for mu in lat.sites:
        img = conjugate(cmap, stabilizer(lat, mu))
        if img.sign() == -1:
            b = lat.bit(mu)
            old = x_images[b]
            x_images[b] = PauliString(n, old.x_mask, old.z_mask, (old.phase_exponent + 2) % 4)
    return CliffordMap(n, x_images, z_images)


def duality_2d_boundary_fixes(lat: Lattice) -> tuple:
    """Sites carrying the diagonal boundary touch-up (empty when A inverts)."""
    if lat.kind != "square":
        raise ValueError("duality_2d needs a square lattice")
    _, _, fixes = _duality_2d_solution(lat)
    return fixes


def plaquette_terms(lat: Lattice, B: float, color: str) -> tuple[PauliSum, PauliSum]:
    """Split the conjugated sublattice Hamiltonian into bulk and boundary.

    Bulk terms are the geometric plaquette pieces (-1 on the Z-only 4-site
    neighborhood of a full-degree site) and the clean field pieces (-B on a
    single X); everything else, which is exactly the open-boundary content,
    is returned separately.
    """
    plaquettes = set()
    for mu in lat.sites:
        nbrs = lat.neighbors(mu)
        if len(nbrs) == 4:
            plaquettes.add(sum(1 << lat.bit(nu) for nu in nbrs))
    dual = conjugate_sum(duality_2d(lat), sublattice_ham(lat, B, color))
    bulk, boundary = [], []
    for c, s in dual:
        if s.x_mask == 0 and s.z_mask in plaquettes and c == -1.0:
            bulk.append((c, s))
        elif s.z_mask == 0 and s.weight == 1 and B != 0.0 and c == -float(B):
            bulk.append((c, s))
        else:
            boundary.append((c, s))
    return PauliSum(lat.n, bulk), PauliSum(lat.n, boundary)


def self_duality_map(lat: Lattice) -> CliffordMap:
    """Conjugation by CSIGN on every edge: X_mu <-> K_mu, Z_mu fixed."""
    x_images = [stabilizer(lat, mu) for mu in lat.sites]
    z_images = [single(lat.n, "Z", lat.bit(mu)) for mu in lat.sites]
    return CliffordMap(lat.n, x_images, z_images)


# ---------------------------------------------------------------------------
# order-parameter operators
# ---------------------------------------------------------------------------

def order_string_1d(lat: Lattice, i: int, j: int, parity: str) -> PauliString:
    """Product of same-parity stabilizers K_{2k} (even) or K_{2k+1} (odd),
    k = i .. j-1.  Multiplied out this is the Z (prod X) Z string between the
    opposite-parity endpoints; ranges may run into the chain ends, where the
    boundary stabilizer drops the outer Z.
    """
    if lat.kind != "line":
        raise ValueError("order_string_1d needs a line lattice")
    N = lat.dims[0]
    if j <= i:
        raise ValueError(f"empty stabilizer range: i={i}, j={j}")
    if parity == "even":
        sites = [2 * k for k in range(i, j)]
        if i < 1:
            raise ValueError("even strings need i >= 1")
    elif parity == "odd":
        sites = [2 * k + 1 for k in range(i, j)]
        if i < 0:
            raise ValueError("odd strings need i >= 0")
    else:
        raise ValueError(f"unknown parity {parity!r}")
    if sites[-1] > N:
        raise ValueError(f"stabilizer site {sites[-1]} outside line({N})")
    return mul_all([stabilizer(lat, s) for s in sites])


def order_string_2d(lat: Lattice, s: SiteString) -> PauliString:
    """Product of stabilizers along a monochromatic diagonal string."""
    colors = {lat.coloring[site] for site in s.sites}
    if len(colors) != 1:
        raise ValueError("order string sites must be one color")
    return mul_all([stabilizer(lat, site) for site in s.sites])


# ---------------------------------------------------------------------------
# CSIGN geometry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CSignLayout:
    """Embedding of the crossed-wire CSIGN block.

    ``anchor`` is the (row, col) of a_in.  The central block occupies rows
    anchor..anchor+2 and columns anchor..anchor+3; ``extend`` appends that
    many diagonal steps of wire at each of the four ports.
    """

    anchor: tuple = (1, 1)
    extend: int = 0

    def _core(self):
        r, c = self.anchor
        a_wire = [(r, c), (r, c + 1), (r + 1, c + 1), (r + 1, c + 2), (r + 2, c + 2)]
        b_wire = [(r + 2, c + 1), (r + 1, c + 1), (r + 1, c + 2), (r, c + 2), (r, c + 3)]
        return a_wire, b_wire

    def wires(self):
        """The two staircase wire paths (a and b), extended at both ends."""
        a_wire, b_wire = self._core()
        for _ in range(self.extend):
            (ra, ca) = a_wire[0]
            a_wire = [(ra - 1, ca - 1), (ra - 1, ca)] + a_wire
            (ra, ca) = a_wire[-1]
            a_wire = a_wire + [(ra, ca + 1), (ra + 1, ca + 1)]
            (rb, cb) = b_wire[0]
            b_wire = [(rb + 1, cb - 1), (rb, cb - 1)] + b_wire
            (rb, cb) = b_wire[-1]
            b_wire = b_wire + [(rb - 1, cb), (rb - 1, cb + 1)]
        return a_wire, b_wire

    def special_sites(self) -> dict:
        r, c = self.anchor
        return {
            "a_in": (r, c),
            "a_out": (r + 2, c + 2),
            "b_in": (r + 2, c + 1),
            "b_out": (r, c + 3),
            "1": (r, c + 1),
            "2": (r, c + 2),
            "3": (r + 1, c + 1),
            "4": (r + 1, c + 2),
        }

    def validate(self, lat: Lattice):
        a_wire, b_wire = self.wires()
        for s in a_wire + b_wire:
            if s not in lat.index:
                raise ValueError(f"CSIGN layout does not fit: site {s} missing")
        for wire in (a_wire, b_wire):
            for u, v in zip(wire, wire[1:]):
                if v not in lat.adjacency[u]:
                    raise ValueError(f"CSIGN layout breaks adjacency at {u}-{v}")


def csign_characterizing_stabilizers(lat: Lattice, layout: CSignLayout) -> list[PauliString]:
    """The four stabilizer products that witness the CSIGN resource.

    In the minimal layout these are K_a_in K_3 K_a_out, K_b_in K_4 K_b_out,
    K_1 K_4 and K_2 K_3; with ``extend`` they grow by the appended diagonal
    stabilizer strings.
    """
    layout.validate(lat)
    a_wire, b_wire = layout.wires()
    ops = []
    for wire in (a_wire, b_wire):
        ops.append(mul_all([stabilizer(lat, s) for s in wire[0::2]]))
    for wire in (a_wire, b_wire):
        ops.append(mul_all([stabilizer(lat, s) for s in wire[1::2]]))
    return ops
