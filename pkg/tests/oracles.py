"""Independent oracles shared by the test modules.

These deliberately avoid the package's own encoding paths: states come
from direct summation over dummy assignments, distances from exhaustive
enumeration.
"""

import itertools

import numpy as np


def closed_form_state(info, N, T):
    """Direct summation of the rate-1/4 closed form (zero history and tail)."""

    def k(i):
        return info[i - 1] if 1 <= i <= T else 0

    amp = np.zeros((N,) * (4 * T), dtype=np.complex128)
    w = np.exp(2j * np.pi / N)
    for dummies in itertools.product(range(N), repeat=2 * T):
        pv = {i + 1: dummies[2 * i] for i in range(T)}
        qv = {i + 1: dummies[2 * i + 1] for i in range(T)}

        def p(i):
            return pv.get(i, 0)

        def q(i):
            return qv.get(i, 0)

        phase = 0
        regs = []
        for i in range(1, T + 1):
            phase += (k(i) + k(i - 2)) * p(i) + (k(i) + k(i - 1) + k(i - 2)) * q(i)
            regs += [
                (p(i) + p(i - 1)) % N,
                (p(i) + p(i - 1) + q(i - 1)) % N,
                (q(i) + q(i - 1)) % N,
                (q(i) + q(i - 1) + p(i)) % N,
            ]
        amp[tuple(regs)] += w**phase
    amp /= np.linalg.norm(amp.ravel())
    return amp


def min_weight_for_syndrome(stab, target, interior=None):
    """Exhaustive minimum Pauli weight consistent with a syndrome, by
    enumerating the full solution coset (particular solution + kernel)."""
    from qcclab import linalg

    L, p = stab.L, stab.p
    gen = np.array([g.symplectic() for g in stab.generators], dtype=np.int64)
    gx, gz = gen[:, :L], gen[:, L:]
    syn_map = np.concatenate([gz, (-gx) % p], axis=1)  # rows act on (x | z)
    particular = linalg.solve(syn_map, np.asarray(target, dtype=np.int64), p)
    if particular is None:
        return None
    ker = linalg.kernel(syn_map, p)
    dim = len(ker)
    best = None
    batch = 1 << 14
    for start in range(0, p**dim, batch):
        idx = np.arange(start, min(start + batch, p**dim))
        digits = np.empty((len(idx), dim), dtype=np.int64)
        rem = idx.copy()
        for j in range(dim):
            digits[:, j] = rem % p
            rem //= p
        ops = (digits @ ker + particular) % p if dim else particular[None, :] % p
        wts = ((ops[:, :L] != 0) | (ops[:, L:] != 0)).sum(axis=1)
        mn = int(wts.min())
        best = mn if best is None else min(best, mn)
    return best
