"""Monte Carlo estimation of decoded-error rates over memoryless Pauli
channels, with union-bound comparison and window distance measurement.

Trials draw i.i.d. register errors from counter-based RNG streams keyed by
(seed, trial index), so results are bit-identical regardless of chunking
or process fan-out. Logical errors are counted against payload qubits,
the logical pairs whose operators sit clear of both window edges; the
margins are reported alongside the estimates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import linalg
from .pauli import PauliWindow
from .qcc import QccCode
from .qviterbi import ErrorTrellis, batch_decode, build_error_trellis


class ChannelModel(Enum):
    DEPOLARIZING = "depolarizing"
    INDEPENDENT_XZ = "independent-xz"


@dataclass(frozen=True)
class ChannelSpec:
    p_err: float
    model: ChannelModel = ChannelModel.DEPOLARIZING
    N: int = 2

    def __post_init__(self) -> None:
        if not 0.0 <= self.p_err <= 1.0:
            raise ValueError("error probability must be in [0, 1]")


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent stream per (seed, trial); order of use is irrelevant."""
    return np.random.Generator(np.random.Philox(key=[seed, trial]))


def _sample_xz(spec: ChannelSpec, L: int, rng: np.random.Generator):
    N = spec.N
    if spec.model is ChannelModel.DEPOLARIZING:
        hit = rng.random(L) < spec.p_err
        kind = rng.integers(1, N * N, size=L)
        x = np.where(hit, kind // N, 0)
        z = np.where(hit, kind % N, 0)
    else:
        hx = rng.random(L) < spec.p_err
        vx = rng.integers(1, N, size=L)
        hz = rng.random(L) < spec.p_err
        vz = rng.integers(1, N, size=L)
        x = np.where(hx, vx, 0)
        z = np.where(hz, vz, 0)
    return x.astype(np.int64), z.astype(np.int64)


def sample_error(spec: ChannelSpec, L: int, rng_seed) -> PauliWindow:
    """One error draw; rng_seed is an int seed, a (seed, trial) pair, or a
    ready Generator."""
    if isinstance(rng_seed, np.random.Generator):
        rng = rng_seed
    elif isinstance(rng_seed, tuple):
        rng = trial_rng(*rng_seed)
    else:
        rng = trial_rng(int(rng_seed), 0)
    x, z = _sample_xz(spec, L, rng)
    return PauliWindow(x, z, spec.N)


def wilson_interval(count: int, total: int, z: float = 1.959963984540054):
    """Wilson score interval; well behaved at zero counts."""
    if total == 0:
        return 0.0, 1.0
    phat = count / total
    denom = 1 + z * z / total
    center = (phat + z * z / (2 * total)) / denom
    half = z * np.sqrt(phat * (1 - phat) / total + z * z / (4 * total * total)) / denom
    return max(0.0, center - half), min(1.0, center + half)


@dataclass(frozen=True)
class TrialReport:
    trials: int
    timesteps: int
    payload_qubits: int
    payload_indices: tuple[int, ...]
    logical_block_errors: int
    info_symbol_errors: int
    decoded_info_symbols: int
    seed: int
    p_err: float
    model: str

    @property
    def p_e_hat(self) -> float:
        return self.logical_block_errors / (self.trials * self.timesteps)

    @property
    def p_b_hat(self) -> float:
        return self.info_symbol_errors / self.decoded_info_symbols

    @property
    def p_e_interval(self):
        return wilson_interval(self.logical_block_errors, self.trials * self.timesteps)

    @property
    def p_b_interval(self):
        return wilson_interval(self.info_symbol_errors, self.decoded_info_symbols)


def payload_indices(code: QccCode, left_blocks: int | None = None,
                    right_blocks: int | None = None) -> tuple[int, ...]:
    """Logical pairs whose operators avoid both window edges.

    Defaults: one block on the left (the zero-history start), and the
    template span rounded up to blocks on the right (where truncated
    generators leave errors under-constrained)."""
    step = code.regs_per_block
    if left_blocks is None:
        left_blocks = 1
    if right_blocks is None:
        right_blocks = -(-code.support_bound // step)
    lo = left_blocks * step
    hi = code.L - right_blocks * step
    stab = code.stabilizer
    keep = []
    for i, (lx, lz) in enumerate(zip(stab.logical_x, stab.logical_z)):
        sup = np.nonzero((lx.x != 0) | (lx.z != 0) | (lz.x != 0) | (lz.z != 0))[0]
        if len(sup) and lo <= sup[0] and sup[-1] < hi:
            keep.append(i)
    return tuple(keep)


def run_trials(
    code: QccCode,
    spec: ChannelSpec,
    trials: int,
    seed: int,
    window: int | None = None,
    payload: tuple[int, ...] | None = None,
    chunk: int = 2048,
    trial_offset: int = 0,
) -> TrialReport:
    """Sample, measure, decode, classify; exactly reproducible from seed.

    trial_offset shifts the RNG stream indices so disjoint ranges can run
    in separate processes and still sum to the single-process result."""
    if spec.N != code.N:
        raise ValueError("channel and code register dimensions differ")
    if window is not None and window != code.window_blocks:
        code = QccCode(code.parent, window)
    stab = code.stabilizer
    trellis = build_error_trellis(code)
    if payload is None:
        payload = payload_indices(code)
    L, p = code.L, code.N

    gen = stab._gen_matrix
    gx, gz = gen[:, :L], gen[:, L:]
    log_rows = []
    for i in payload:
        log_rows.append(stab.logical_z[i].symplectic())
        log_rows.append(stab.logical_x[i].symplectic())
    log_mat = np.array(log_rows, dtype=np.int64).reshape(len(payload) * 2, 2 * L)
    lx, lz = log_mat[:, :L], log_mat[:, L:]

    block_errors = 0
    symbol_errors = 0
    for start in range(0, trials, chunk):
        count = min(chunk, trials - start)
        ex = np.empty((count, L), dtype=np.int64)
        ez = np.empty((count, L), dtype=np.int64)
        for i in range(count):
            ex[i], ez[i] = _sample_xz(spec, L, trial_rng(seed, trial_offset + start + i))
        syn = (ex @ gz.T - ez @ gx.T) % p
        # most trials share a handful of syndromes; decode each once
        uniq, inverse = np.unique(syn, axis=0, return_inverse=True)
        ux, uz, _ = batch_decode(trellis, uniq, chunk=chunk)
        cx, cz = ux[inverse], uz[inverse]
        rx, rz = (ex - cx) % p, (ez - cz) % p
        # action of the residual on payload logicals, pairwise (Z then X row)
        acts = (rx @ lz.T - rz @ lx.T) % p
        acts = acts.reshape(count, len(payload), 2).any(axis=2)
        block_errors += int(acts.any(axis=1).sum())
        symbol_errors += int(acts.sum())

    return TrialReport(
        trials=trials,
        timesteps=code.window_blocks,
        payload_qubits=len(payload),
        payload_indices=tuple(payload),
        logical_block_errors=block_errors,
        info_symbol_errors=symbol_errors,
        decoded_info_symbols=trials * len(payload),
        seed=seed,
        p_err=spec.p_err,
        model=spec.model.value,
    )


def union_bound(A_d: float, B_d: float, d: int, k: int, p_err: float):
    """First-order bounds: (A_d 2^d p^(d/2), (B_d / k) 2^d p^(d/2))."""
    if d < 1 or k < 1:
        raise ValueError("d and k must be >= 1")
    base = 2.0**d * p_err ** (d / 2)
    return A_d * base, (B_d / k) * base


@dataclass(frozen=True)
class DistanceReport:
    d: int
    count_at_d: int
    interior: tuple[int, int]


def measure_distance(
    code: QccCode,
    interior: tuple[int, int] | None = None,
    max_kernel_dim: int = 22,
) -> DistanceReport:
    """Exhaustive minimum weight of a syndrome-free, logically acting Pauli
    supported on the interior register range [lo, hi); window-truncated."""
    stab = code.stabilizer
    L, p = code.L, code.N
    step = code.regs_per_block
    if interior is None:
        right = -(-code.support_bound // step) * step
        interior = (step, L - right)
    lo, hi = interior
    w = hi - lo
    if w <= 0:
        raise ValueError("empty interior range")

    gen = stab._gen_matrix
    gx, gz = gen[:, :L], gen[:, L:]
    # syndrome map restricted to interior support, acting on (x | z) coords
    syn_map = np.concatenate([gz[:, lo:hi], (-gx[:, lo:hi]) % p], axis=1)
    ker = linalg.kernel(syn_map, p)
    if len(ker) > max_kernel_dim:
        raise ValueError(f"kernel dimension {len(ker)} exceeds cap {max_kernel_dim}")

    log_rows = [op.symplectic() for op in stab.logical_z + stab.logical_x]
    log_mat = np.array(log_rows, dtype=np.int64)
    llx = log_mat[:, :L][:, lo:hi]
    llz = log_mat[:, L:][:, lo:hi]

    best = None
    count = 0
    dim = len(ker)
    batch = 1 << 14
    for start_idx in range(0, p**dim, batch):
        idx = np.arange(start_idx, min(start_idx + batch, p**dim))
        digits = np.empty((len(idx), dim), dtype=np.int64)
        rem = idx.copy()
        for j in range(dim):
            digits[:, j] = rem % p
            rem //= p
        ops = (digits @ ker) % p
        vx, vz = ops[:, :w], ops[:, w:]
        acting = ((vx @ llz.T - vz @ llx.T) % p).any(axis=1)
        if not acting.any():
            continue
        wts = ((vx[acting] != 0) | (vz[acting] != 0)).sum(axis=1)
        mn = int(wts.min())
        if best is None or mn < best:
            best, count = mn, int((wts == mn).sum())
        elif mn == best:
            count += int((wts == mn).sum())
    if best is None:
        raise ValueError("no logically acting operator in the interior range")
    return DistanceReport(best, count, (lo, hi))
