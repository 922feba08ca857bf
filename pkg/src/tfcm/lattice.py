"""Lattice geometry: open lines and open square grids with two-coloring.

Sites are labelled 1..N on a line and (row, col) from (1, 1) on a grid.
Qubit/bit index is the position in ``sites`` (row-major for grids); all
operator masks in the rest of the package use that bit order.
"""

from __future__ import annotations

from dataclasses import dataclass, field


RED = "red"
BLUE = "blue"


@dataclass(frozen=True)
class Lattice:
    kind: str                      # "line" | "square"
    sites: tuple                   # site labels in bit order
    coords: dict                   # site -> integer coordinate tuple
    adjacency: dict                # site -> tuple of neighbor sites
    coloring: dict                 # site -> "red" | "blue"
    dims: tuple                    # (N,) or (R, C)
    index: dict = field(default_factory=dict)  # site -> bit

    @property
    def n(self) -> int:
        return len(self.sites)

    def bit(self, site) -> int:
        try:
            return self.index[site]
        except KeyError:
            raise ValueError(f"unknown site {site!r}") from None

    def neighbors(self, site):
        if site not in self.index:
            raise ValueError(f"unknown site {site!r}")
        return self.adjacency[site]

    def color(self, site) -> str:
        return self.coloring[site]

    def sites_of_color(self, color: str):
        return tuple(s for s in self.sites if self.coloring[s] == color)

    def adjacency_rows(self) -> list[int]:
        """Adjacency matrix rows as bitmasks in bit order."""
        rows = []
        for s in self.sites:
            m = 0
            for t in self.adjacency[s]:
                m |= 1 << self.index[t]
            rows.append(m)
        return rows

    def on_boundary(self, site) -> bool:
        if self.kind == "line":
            return site in (1, self.dims[0])
        r, c = site
        R, C = self.dims
        return r in (1, R) or c in (1, C)

    def to_json_dict(self) -> dict:
        return {"kind": self.kind, "dims": list(self.dims)}

    def describe(self) -> str:
        if self.kind == "line":
            return f"line({self.dims[0]})"
        return f"square({self.dims[0]},{self.dims[1]})"


def _finish(kind, sites, coords, adjacency, coloring, dims) -> Lattice:
    lat = Lattice(
        kind=kind,
        sites=tuple(sites),
        coords=coords,
        adjacency={s: tuple(v) for s, v in adjacency.items()},
        coloring=coloring,
        dims=dims,
        index={s: i for i, s in enumerate(sites)},
    )
    _check_bipartite(lat)
    return lat


def _check_bipartite(lat: Lattice):
    for s in lat.sites:
        for t in lat.adjacency[s]:
            if s == t:
                raise ValueError("self-loop in adjacency")
            if s not in lat.adjacency[t]:
                raise ValueError("adjacency not symmetric")
            if lat.coloring[s] == lat.coloring[t]:
                raise ValueError(f"edge {s}-{t} joins equal colors")


def line(N: int) -> Lattice:
    """Open chain of N sites, 1..N, even sites red."""
    if N < 2:
        raise ValueError(f"line needs N >= 2, got {N}")
    sites = list(range(1, N + 1))
    adjacency = {i: [j for j in (i - 1, i + 1) if 1 <= j <= N] for i in sites}
    coloring = {i: RED if i % 2 == 0 else BLUE for i in sites}
    coords = {i: (i,) for i in sites}
    return _finish("line", sites, coords, adjacency, coloring, (N,))


def square(R: int, C: int) -> Lattice:
    """Open R x C grid, sites (row, col) from (1, 1), checkerboard coloring."""
    if R < 2 or C < 2:
        raise ValueError(f"square needs R, C >= 2, got ({R}, {C})")
    sites = [(r, c) for r in range(1, R + 1) for c in range(1, C + 1)]
    sset = set(sites)
    adjacency = {
        (r, c): [t for t in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)) if t in sset]
        for (r, c) in sites
    }
    coloring = {(r, c): RED if (r + c) % 2 == 0 else BLUE for (r, c) in sites}
    coords = {s: s for s in sites}
    return _finish("square", sites, coords, adjacency, coloring, (R, C))


def from_spec(kind: str, dims) -> Lattice:
    if kind == "line":
        return line(int(dims[0]))
    if kind == "square":
        return square(int(dims[0]), int(dims[1]))
    raise ValueError(f"unknown lattice kind {kind!r}")


@dataclass(frozen=True)
class SiteString:
    """Monochromatic string of sites along a diagonal (or stride-2 on a line)."""

    sites: tuple
    color: str


def diagonal_string(lat: Lattice, start, steps: int, direction=(1, 1)) -> SiteString:
    """Same-color site string from ``start``: stride 2 on a line, diagonal on a grid."""
    if start not in lat.index:
        raise ValueError(f"unknown site {start!r}")
    chain = [start]
    if lat.kind == "line":
        step = direction if isinstance(direction, int) else direction[0]
        if step not in (1, -1):
            raise ValueError("line direction must be +1 or -1")
        for _ in range(steps):
            nxt = chain[-1] + 2 * step
            if not 1 <= nxt <= lat.dims[0]:
                raise ValueError(f"string leaves the lattice at site {nxt}")
            chain.append(nxt)
    else:
        dr, dc = direction
        if abs(dr) != 1 or abs(dc) != 1:
            raise ValueError("grid direction must be (+-1, +-1)")
        for _ in range(steps):
            r, c = chain[-1]
            nxt = (r + dr, c + dc)
            if nxt not in lat.index:
                raise ValueError(f"string leaves the lattice at site {nxt}")
            chain.append(nxt)
    colors = {lat.coloring[s] for s in chain}
    assert len(colors) == 1, "diagonal steps must preserve the checkerboard color"
    return SiteString(sites=tuple(chain), color=colors.pop())
