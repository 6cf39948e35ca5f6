"""Dense linear algebra over GF(p) on numpy integer arrays."""

from __future__ import annotations

import numpy as np


def _as_matrix(M) -> np.ndarray:
    M = np.asarray(M, dtype=np.int64)
    if M.ndim == 1:
        M = M.reshape(1, -1)
    return M


def rref(M, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod p; returns (R, pivot column list)."""
    R = _as_matrix(M) % p
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        sel = None
        for rr in range(r, rows):
            if R[rr, c] % p:
                sel = rr
                break
        if sel is None:
            continue
        if sel != r:
            R[[r, sel]] = R[[sel, r]]
        inv = pow(int(R[r, c]), p - 2, p)
        R[r] = (R[r] * inv) % p
        for rr in range(rows):
            if rr != r and R[rr, c]:
                R[rr] = (R[rr] - R[rr, c] * R[r]) % p
        pivots.append(c)
        r += 1
    return R[: len(pivots)], pivots


def rank(M, p: int) -> int:
    return len(rref(M, p)[1])


def solve(M, b, p: int) -> np.ndarray | None:
    """One solution of M x = b mod p, or None if inconsistent."""
    M = _as_matrix(M)
    b = np.asarray(b, dtype=np.int64) % p
    aug = np.concatenate([M % p, b.reshape(-1, 1)], axis=1)
    R, pivots = rref(aug, p)
    if (len(pivots) and pivots[-1] == M.shape[1]):
        return None
    x = np.zeros(M.shape[1], dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = R[i, -1]
    return x


def kernel(M, p: int) -> np.ndarray:
    """Basis of the right null space {x : M x = 0}, one vector per row."""
    M = _as_matrix(M)
    cols = M.shape[1]
    R, pivots = rref(M, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, c in enumerate(pivots):
            basis[i, c] = (-R[r, f]) % p
    return basis


def in_rowspan(v, M, p: int) -> bool:
    """True iff v is a GF(p) combination of the rows of M."""
    M = _as_matrix(M)
    return solve(M.T, np.asarray(v, dtype=np.int64), p) is not None


def minimal_span_basis(vectors, p: int) -> np.ndarray:
    """Row-equivalent basis in minimal span form.

    Greedy reduction until all start positions are distinct and all end
    positions are distinct; minimizes trellis state complexity for the
    span measure over the given column order.
    """
    B = [row.copy() % p for row in _as_matrix(vectors)]
    B = [row for row in B if row.any()]

    def ends(row):
        nz = np.nonzero(row)[0]
        return int(nz[0]), int(nz[-1])

    changed = True
    while changed:
        changed = False
        for i in range(len(B)):
            for j in range(len(B)):
                if i == j:
                    continue
                si, ei = ends(B[i])
                sj, ej = ends(B[j])
                # eliminate shared starts from the shorter-span row onward
                if si == sj:
                    tgt, src = (i, j) if (ei - si) >= (ej - sj) else (j, i)
                    c = (B[tgt][si] * pow(int(B[src][si]), p - 2, p)) % p
                    B[tgt] = (B[tgt] - c * B[src]) % p
                    if not B[tgt].any():
                        raise ValueError("dependent rows in minimal span reduction")
                    changed = True
                    break
                if ei == ej:
                    tgt, src = (i, j) if (ei - si) >= (ej - sj) else (j, i)
                    c = (B[tgt][ei] * pow(int(B[src][ei]), p - 2, p)) % p
                    B[tgt] = (B[tgt] - c * B[src]) % p
                    if not B[tgt].any():
                        raise ValueError("dependent rows in minimal span reduction")
                    changed = True
                    break
            if changed:
                break
    order = np.argsort([ends(row)[0] for row in B], kind="stable")
    return np.array([B[i] for i in order], dtype=np.int64)
