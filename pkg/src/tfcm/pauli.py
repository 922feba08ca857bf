"""Exact symbolic algebra of n-qubit Pauli strings and canonical maps.

Conventions
-----------
A string is stored as ``i^r * X^x_mask * Z^z_mask`` with all X factors to the
left of all Z factors and ``r`` a quarter-turn exponent mod 4.  A site with
both bits set is a Y up to the ``i`` absorbed into ``r``, so products reduce
to XORs plus a popcount phase.  Bit ``i`` of a mask addresses site ``i``
(0-based); the identity is both masks zero with ``r = 0``.

The operator is Hermitian iff ``r + |x & z|`` is even, in which case its sign
in the conventional letter form (I, X, Y, Z per site) is ``i**(r - |x & z|)``
which is +1 or -1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

_I4 = (1, 1j, -1, -1j)


class NonCanonicalMapError(ValueError):
    """A CliffordMap failed its canonicality contract."""


@dataclass(frozen=True)
class PauliString:
    """An n-qubit Pauli operator ``i^r X^x Z^z`` as paired bitmasks."""

    n: int
    x_mask: int = 0
    z_mask: int = 0
    phase_exponent: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"need at least one qubit, got n={self.n}")
        mask = (1 << self.n) - 1
        if (self.x_mask | self.z_mask) & ~mask:
            raise ValueError("mask has bits beyond the qubit count")
        object.__setattr__(self, "phase_exponent", self.phase_exponent % 4)

    @property
    def weight(self) -> int:
        return (self.x_mask | self.z_mask).bit_count()

    def support(self) -> list[int]:
        m = self.x_mask | self.z_mask
        return [i for i in range(self.n) if (m >> i) & 1]

    def is_identity(self) -> bool:
        return self.x_mask == 0 and self.z_mask == 0 and self.phase_exponent == 0

    def is_hermitian(self) -> bool:
        return (self.phase_exponent + (self.x_mask & self.z_mask).bit_count()) % 2 == 0

    def sign(self) -> int:
        """Sign of a Hermitian string in the per-site letter convention."""
        if not self.is_hermitian():
            raise ValueError(f"not Hermitian: {self}")
        s = (self.phase_exponent - (self.x_mask & self.z_mask).bit_count()) % 4
        return 1 if s == 0 else -1

    def positive_form(self) -> tuple[int, "PauliString"]:
        """(sign, string with sign +1) for a Hermitian string."""
        s = self.sign()
        r = (self.x_mask & self.z_mask).bit_count() % 4
        return s, PauliString(self.n, self.x_mask, self.z_mask, r)

    def phase(self) -> complex:
        return _I4[self.phase_exponent]

    def letter(self, i: int) -> str:
        x = (self.x_mask >> i) & 1
        z = (self.z_mask >> i) & 1
        return ("I", "X", "Z", "Y")[x + 2 * z]

    def to_text(self) -> str:
        """Render as e.g. ``+ X0 Z1 Z3`` (sign then site factors)."""
        s = (self.phase_exponent - (self.x_mask & self.z_mask).bit_count()) % 4
        sign = ("+", "+i", "-", "-i")[s]
        factors = [f"{self.letter(i)}{i}" for i in self.support()]
        return f"{sign} " + (" ".join(factors) if factors else "I")

    def to_matrix(self) -> np.ndarray:
        """Dense matrix with qubit 0 the fastest (least significant) index."""
        X = np.array([[0, 1], [1, 0]], dtype=complex)
        Z = np.array([[1, 0], [0, -1]], dtype=complex)
        m = np.eye(1, dtype=complex)
        for i in range(self.n):
            f = np.eye(2, dtype=complex)
            if (self.x_mask >> i) & 1:
                f = f @ X
            if (self.z_mask >> i) & 1:
                f = f @ Z
            m = np.kron(f, m)
        return self.phase() * m

    def __str__(self) -> str:
        return self.to_text()


_TOKEN = re.compile(r"([IXYZ])(\d+)$")


def from_text(text: str, n: int) -> PauliString:
    """Parse the ``to_text`` format back into a PauliString."""
    parts = text.split()
    if not parts:
        raise ValueError("empty Pauli text")
    signs = {"+": 0, "+i": 1, "-": 2, "-i": 3}
    if parts[0] in signs:
        s = signs[parts[0]]
        parts = parts[1:]
    else:
        s = 0
    x = z = 0
    for tok in parts:
        if tok == "I":
            continue
        m = _TOKEN.match(tok)
        if not m:
            raise ValueError(f"bad Pauli factor {tok!r}")
        letter, i = m.group(1), int(m.group(2))
        if i >= n:
            raise ValueError(f"site {i} outside n={n}")
        if letter in ("X", "Y"):
            x |= 1 << i
        if letter in ("Z", "Y"):
            z |= 1 << i
    r = (s + (x & z).bit_count()) % 4
    return PauliString(n, x, z, r)


def identity(n: int) -> PauliString:
    return PauliString(n)


def single(n: int, letter: str, site: int) -> PauliString:
    """Single-site X, Y or Z operator with sign +1."""
    if not 0 <= site < n:
        raise ValueError(f"site {site} outside n={n}")
    if letter == "X":
        return PauliString(n, 1 << site, 0, 0)
    if letter == "Z":
        return PauliString(n, 0, 1 << site, 0)
    if letter == "Y":
        return PauliString(n, 1 << site, 1 << site, 1)
    raise ValueError(f"unknown letter {letter!r}")


def from_sites(n: int, x_sites: Iterable[int] = (), z_sites: Iterable[int] = ()) -> PauliString:
    """Sign +1 Hermitian string with X on x_sites and Z on z_sites."""
    x = z = 0
    for i in x_sites:
        x |= 1 << i
    for i in z_sites:
        z |= 1 << i
    return PauliString(n, x, z, (x & z).bit_count() % 4)


def mul(a: PauliString, b: PauliString) -> PauliString:
    """Operator product a * b with exact phase bookkeeping."""
    if a.n != b.n:
        raise ValueError(f"size mismatch: {a.n} != {b.n}")
    r = (a.phase_exponent + b.phase_exponent + 2 * (a.z_mask & b.x_mask).bit_count()) % 4
    return PauliString(a.n, a.x_mask ^ b.x_mask, a.z_mask ^ b.z_mask, r)


def mul_all(strings: Iterable[PauliString], n: int | None = None) -> PauliString:
    out = None
    for s in strings:
        out = s if out is None else mul(out, s)
    if out is None:
        if n is None:
            raise ValueError("empty product needs an explicit qubit count")
        return identity(n)
    return out


def commutes(a: PauliString, b: PauliString) -> bool:
    """True iff ab = ba (parity of the symplectic overlap)."""
    if a.n != b.n:
        raise ValueError(f"size mismatch: {a.n} != {b.n}")
    return ((a.x_mask & b.z_mask).bit_count() + (a.z_mask & b.x_mask).bit_count()) % 2 == 0


class PauliSum:
    """Real-weighted sum of Hermitian Pauli strings (merged, sign-normalized)."""

    __slots__ = ("n", "_terms")

    def __init__(self, n: int, terms: Iterable[tuple[float, PauliString]] = ()):
        self.n = n
        acc: dict[tuple[int, int], float] = {}
        for coeff, s in terms:
            if s.n != n:
                raise ValueError(f"term on {s.n} qubits in a {n}-qubit sum")
            sign, pos = s.positive_form()
            key = (pos.x_mask, pos.z_mask)
            acc[key] = acc.get(key, 0.0) + sign * coeff
        self._terms = tuple(
            (c, PauliString(n, x, z, (x & z).bit_count() % 4))
            for (x, z), c in sorted(acc.items())
            if c != 0.0
        )

    @property
    def terms(self) -> tuple[tuple[float, PauliString], ...]:
        return self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[tuple[float, PauliString]]:
        return iter(self._terms)

    def __add__(self, other: "PauliSum") -> "PauliSum":
        if self.n != other.n:
            raise ValueError("size mismatch")
        return PauliSum(self.n, list(self._terms) + list(other._terms))

    def __rmul__(self, c: float) -> "PauliSum":
        return PauliSum(self.n, [(c * w, s) for w, s in self._terms])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PauliSum):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self):
        return hash((self.n, self._terms))

    def approx_equal(self, other: "PauliSum", tol: float = 1e-12) -> bool:
        if self.n != other.n:
            return False
        a = {(s.x_mask, s.z_mask): c for c, s in self._terms}
        b = {(s.x_mask, s.z_mask): c for c, s in other._terms}
        keys = set(a) | set(b)
        return all(abs(a.get(k, 0.0) - b.get(k, 0.0)) <= tol for k in keys)

    def to_matrix(self) -> np.ndarray:
        m = np.zeros((1 << self.n, 1 << self.n), dtype=complex)
        for c, s in self._terms:
            m += c * s.to_matrix()
        return m

    def to_text(self) -> str:
        """One term per line: ``<coeff> <string>`` in the pauli text format.

        Coefficients use repr so the rendering parses back bit-identically.
        """
        return "\n".join(f"{c!r} {s.to_text()}" for c, s in self._terms)

    def __str__(self) -> str:
        return self.to_text()


def sum_from_text(text: str, n: int) -> PauliSum:
    terms = []
    for line in text.strip().splitlines():
        line = line.strip()
        if not line:
            continue
        coeff, rest = line.split(None, 1)
        terms.append((float(coeff), from_text(rest, n)))
    return PauliSum(n, terms)


@dataclass(frozen=True)
class CanonicalityReport:
    passed: bool
    violations: tuple[tuple[str, str, str], ...]


class CliffordMap:
    """Canonical transformation given by the images of all X_j and Z_j."""

    __slots__ = ("n", "x_images", "z_images", "_canonical")

    def __init__(self, n: int, x_images, z_images):
        if len(x_images) != n or len(z_images) != n:
            raise ValueError("need one image per generator")
        for img in list(x_images) + list(z_images):
            if img.n != n:
                raise ValueError("image qubit count mismatch")
        self.n = n
        self.x_images = tuple(x_images)
        self.z_images = tuple(z_images)
        self._canonical: bool | None = None

    @staticmethod
    def identity_map(n: int) -> "CliffordMap":
        return CliffordMap(
            n,
            [single(n, "X", j) for j in range(n)],
            [single(n, "Z", j) for j in range(n)],
        )

    def to_text(self) -> str:
        lines = []
        for j in range(self.n):
            lines.append(f"X{j} -> {self.x_images[j].to_text()}")
            lines.append(f"Z{j} -> {self.z_images[j].to_text()}")
        return "\n".join(lines)

    def __str__(self) -> str:
        return self.to_text()


def check_canonical(cmap: CliffordMap) -> CanonicalityReport:
    """Verify generator-image (anti)commutation relations and involutions."""
    gens = [(f"X{j}", cmap.x_images[j]) for j in range(cmap.n)]
    gens += [(f"Z{j}", cmap.z_images[j]) for j in range(cmap.n)]
    bad: list[tuple[str, str, str]] = []
    for name, img in gens:
        # P^2 = +1 iff the string is Hermitian
        if not img.is_hermitian():
            bad.append((name, name, "image does not square to +identity"))
    for j in range(cmap.n):
        if commutes(cmap.x_images[j], cmap.z_images[j]):
            bad.append((f"X{j}", f"Z{j}", "should anticommute"))
    for j in range(cmap.n):
        for k in range(j + 1, cmap.n):
            if not commutes(cmap.x_images[j], cmap.x_images[k]):
                bad.append((f"X{j}", f"X{k}", "should commute"))
            if not commutes(cmap.z_images[j], cmap.z_images[k]):
                bad.append((f"Z{j}", f"Z{k}", "should commute"))
        for k in range(cmap.n):
            if k != j and not commutes(cmap.x_images[j], cmap.z_images[k]):
                bad.append((f"X{j}", f"Z{k}", "should commute"))
    return CanonicalityReport(passed=not bad, violations=tuple(bad))


def _require_canonical(cmap: CliffordMap):
    if cmap._canonical is None:
        cmap._canonical = check_canonical(cmap).passed
    if not cmap._canonical:
        raise NonCanonicalMapError("map violates canonical (anti)commutation relations")


def conjugate(cmap: CliffordMap, p: PauliString) -> PauliString:
    """Image of ``p`` under the map, by substituting generator images.

    The stored convention ``i^r X^x Z^z`` fixes the substitution order:
    X images (ascending site) then Z images, with the scalar ``i^r`` kept.
    """
    if cmap.n != p.n:
        raise ValueError(f"size mismatch: {cmap.n} != {p.n}")
    _require_canonical(cmap)
    out = identity(p.n)
    for i in range(p.n):
        if (p.x_mask >> i) & 1:
            out = mul(out, cmap.x_images[i])
    for i in range(p.n):
        if (p.z_mask >> i) & 1:
            out = mul(out, cmap.z_images[i])
    return PauliString(p.n, out.x_mask, out.z_mask, (out.phase_exponent + p.phase_exponent) % 4)


def conjugate_sum(cmap: CliffordMap, h: PauliSum) -> PauliSum:
    """Termwise image of a Hermitian Pauli sum."""
    return PauliSum(h.n, [(c, conjugate(cmap, s)) for c, s in h])


def compose(outer: CliffordMap, inner: CliffordMap) -> CliffordMap:
    """Map applying ``inner`` first, then ``outer`` (verified canonical)."""
    if outer.n != inner.n:
        raise ValueError("size mismatch")
    _require_canonical(outer)
    _require_canonical(inner)
    out = CliffordMap(
        outer.n,
        [conjugate(outer, img) for img in inner.x_images],
        [conjugate(outer, img) for img in inner.z_images],
    )
    rep = check_canonical(out)
    if not rep.passed:
        raise NonCanonicalMapError(f"composition not canonical: {rep.violations[:3]}")
    return out


def inverse(cmap: CliffordMap) -> CliffordMap:
    """Inverse map via the symplectic identity M^-1 = L M^T L over GF(2).

    Signs of the generator preimages are fixed by conjugating the candidate
    forward and matching the generator exactly.
    """
    _require_canonical(cmap)
    n = cmap.n
    # rows of M: image of generator g as a 2n-bit (x | z) vector
    rows = []
    for img in list(cmap.x_images) + list(cmap.z_images):
        rows.append(img.x_mask | (img.z_mask << n))

    # Generator coefficients of the preimage of a target vector: a = L M L v,
    # where L swaps the x and z halves (valid because M is symplectic).
    def preimage(vec: int) -> PauliString:
        # vec is the 2n-bit (x | z) description of the desired image
        xpart = vec & ((1 << n) - 1)
        zpart = vec >> n
        # swap halves of the target: L e_t
        alpha = 0
        for g in range(2 * n):
            # row g of M^T L = column swap(g) of M
            swapped = ((rows[g] >> n) | ((rows[g] & ((1 << n) - 1)) << n))
            if (swapped & vec).bit_count() & 1:
                alpha |= 1 << g
        # alpha selects generators; swap halves once more (leading L)
        alpha = ((alpha >> n) | ((alpha & ((1 << n) - 1)) << n))
        x = alpha & ((1 << n) - 1)
        z = alpha >> n
        cand = PauliString(n, x, z, (x & z).bit_count() % 4)
        img = conjugate(cmap, cand)
        want = PauliString(n, xpart, zpart, (xpart & zpart).bit_count() % 4)
        if (img.x_mask, img.z_mask) != (want.x_mask, want.z_mask):
            raise NonCanonicalMapError("inverse candidate has wrong masks")
        if img.phase_exponent != want.phase_exponent:
            cand = PauliString(n, x, z, (cand.phase_exponent + 2) % 4)
        return cand

    x_images = [preimage(1 << j) for j in range(n)]
    z_images = [preimage(1 << (n + j)) for j in range(n)]
    out = CliffordMap(n, x_images, z_images)
    rep = check_canonical(out)
    if not rep.passed:
        raise NonCanonicalMapError("inverse not canonical")
    return out
