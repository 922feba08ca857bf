"""Linear algebra over GF(2) on integer bitmasks.

A matrix is a list of ints; row ``i`` has bit ``j`` set iff entry (i, j) is 1.
"""

from __future__ import annotations


def _rref(rows, rhs=None):
    """Reduce to reduced row echelon form.

    Returns (pivot_rows, pivot_cols, pivot_rhs, consistent).
    """
    prows: list[int] = []
    pcols: list[int] = []
    prhs: list[int] = []
    use_rhs = rhs is not None
    consistent = True
    for k, r in enumerate(rows):
        b = rhs[k] if use_rhs else 0
        for i, c in enumerate(pcols):
            if (r >> c) & 1:
                r ^= prows[i]
                if use_rhs:
                    b ^= prhs[i]
        if r == 0:
            if use_rhs and b:
                consistent = False
            continue
        c = r.bit_length() - 1
        for i in range(len(prows)):
            if (prows[i] >> c) & 1:
                prows[i] ^= r
                if use_rhs:
                    prhs[i] ^= b
        prows.append(r)
        pcols.append(c)
        prhs.append(b)
    return prows, pcols, prhs, consistent


def solve(rows, rhs):
    """One solution x of rows . x = rhs, with free variables set to 0.

    Returns the solution bitmask, or None if the system is inconsistent.
    """
    prows, pcols, prhs, ok = _rref(rows, rhs)
    if not ok:
        return None
    sol = 0
    for c, b in zip(pcols, prhs):
        if b:
            sol |= 1 << c
    return sol


def nullspace(rows, nvars):
    """Basis of {x : rows . x = 0} over nvars variables."""
    prows, pcols, _, _ = _rref(rows)
    pset = set(pcols)
    basis = []
    for f in range(nvars):
        if f in pset:
            continue
        v = 1 << f
        for r, c in zip(prows, pcols):
            if (r >> f) & 1:
                v |= 1 << c
        basis.append(v)
    return basis


def inverse(rows, n):
    """Inverse of an n x n matrix, or None if singular."""
    # matrix in the high bits so pivoting happens on matrix columns first
    aug = [(rows[i] << n) | (1 << i) for i in range(n)]
    prows, pcols, _, _ = _rref(aug)
    if sum(1 for c in pcols if c >= n) < n:
        return None
    out = [0] * n
    lo = (1 << n) - 1
    for r, c in zip(prows, pcols):
        if c >= n:
            out[c - n] = r & lo
    return out


def matvec(rows, x):
    """rows . x as a column bitmask."""
    y = 0
    for i, r in enumerate(rows):
        if (r & x).bit_count() & 1:
            y |= 1 << i
    return y
