"""Minimum-weight Pauli recovery from syndromes by trellis search.

The window's registers are processed in blocks. A trellis state at a block
boundary records, for every generator whose support straddles the boundary,
the partial syndrome accumulated so far; this is exactly the information
future generators can still see, so the dynamic program is an exact
minimum-weight search. Branch metric is the Pauli weight of the block's
error pattern; ties resolve toward the lexicographically smallest
register-interleaved (x, z) assignment.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import linalg
from .pauli import PauliWindow, StabilizerWindow
from .qcc import QccCode

DEFAULT_STATE_CAP = 1 << 24


class StateCapError(ValueError):
    pass


def _state_cap(explicit: int | None) -> int:
    if explicit is not None:
        return explicit
    env = os.environ.get("QCC_STATE_CAP")
    return int(env) if env else DEFAULT_STATE_CAP


@dataclass(frozen=True)
class SyndromeSequence:
    """Syndrome values aligned with a StabilizerWindow's generator order."""

    values: tuple[int, ...]
    L: int

    @classmethod
    def from_error(cls, stab: StabilizerWindow, error: PauliWindow) -> "SyndromeSequence":
        return cls(tuple(int(v) for v in stab.syndrome(error)), stab.L)


@dataclass(frozen=True)
class RecoveryPath:
    correction: PauliWindow
    cost: int
    branches: tuple[int, ...]


class ErrorTrellis:
    """Block trellis over a stabilizer window.

    Generators are re-based to minimal span form so boundary states stay
    small; the syndrome transform back to the window's generator order is
    kept so observed syndromes can be fed in directly.
    """

    def __init__(self, stab: StabilizerWindow, block_regs: int, state_cap: int | None = None):
        if block_regs < 1:
            raise ValueError("block size must be positive")
        self.stab = stab
        self.p = stab.p
        self.L = stab.L
        self.block_regs = block_regs
        self.n_blocks = -(-self.L // block_regs)
        p = self.p

        gen_matrix = np.array(
            [g.symplectic() for g in stab.generators], dtype=np.int64
        )
        if len(gen_matrix) == 0:
            raise ValueError("trellis needs at least one generator")
        # interleave (x_j, z_j) per register so span reflects register order
        inter = np.empty_like(gen_matrix)
        inter[:, 0::2] = gen_matrix[:, : self.L]
        inter[:, 1::2] = gen_matrix[:, self.L :]
        mss = linalg.minimal_span_basis(inter, p)
        self.G = len(mss)
        self.gen_x = np.empty((self.G, self.L), dtype=np.int64)
        self.gen_z = np.empty((self.G, self.L), dtype=np.int64)
        self.gen_x[:] = mss[:, 0::2]
        self.gen_z[:] = mss[:, 1::2]
        # syndrome transform: mss generator = combo of window generators
        self.transform = np.zeros((self.G, len(stab.generators)), dtype=np.int64)
        for i in range(self.G):
            row = np.concatenate([self.gen_x[i], self.gen_z[i]])
            coeffs = linalg.solve(gen_matrix.T, row, p)
            if coeffs is None:
                raise AssertionError("minimal span row left the generator space")
            self.transform[i] = coeffs

        sup = (self.gen_x != 0) | (self.gen_z != 0)
        firsts = [int(np.nonzero(s)[0][0]) // block_regs for s in sup]
        lasts = [int(np.nonzero(s)[0][-1]) // block_regs for s in sup]
        self.first_block = np.array(firsts)
        self.last_block = np.array(lasts)

        self.open_at: list[list[int]] = []  # open before each block boundary
        for t in range(self.n_blocks + 1):
            self.open_at.append(
                [g for g in range(self.G) if self.first_block[g] < t <= self.last_block[g]]
            )
        max_open = max(len(o) for o in self.open_at)
        cap = _state_cap(state_cap)
        if p ** max_open > cap:
            raise StateCapError(
                f"{p}^{max_open} trellis states exceed cap {cap}"
            )
        self.max_open = max_open
        self._blocks = [self._block_tables(t) for t in range(self.n_blocks)]

    def n_states(self, boundary: int) -> int:
        return self.p ** len(self.open_at[boundary])

    def _block_tables(self, t: int):
        p = self.p
        lo = t * self.block_regs
        hi = min(self.L, lo + self.block_regs)
        r = hi - lo
        pats = np.array(
            list(itertools.product(range(p), repeat=2 * r)), dtype=np.int64
        )
        bx = pats[:, 0::2]
        bz = pats[:, 1::2]
        wt = ((bx != 0) | (bz != 0)).sum(axis=1).astype(np.int64)

        active = [
            g
            for g in range(self.G)
            if self.first_block[g] <= t <= self.last_block[g]
        ]
        closing = [g for g in active if self.last_block[g] == t]
        # syndrome convention: sym(error, gen) = x_e . z_g - z_e . x_g
        contrib = {
            g: (bx @ self.gen_z[g, lo:hi] - bz @ self.gen_x[g, lo:hi]) % p
            for g in active
        }

        open_prev = self.open_at[t]
        open_next = self.open_at[t + 1]
        S_prev = p ** len(open_prev)
        n_branch = len(pats)

        # accumulated value of each active generator for every (state, branch)
        states = np.array(
            list(itertools.product(range(p), repeat=len(open_prev))), dtype=np.int64
        ).reshape(S_prev, len(open_prev))
        acc = {}
        for g in active:
            base = (
                states[:, open_prev.index(g)][:, None]
                if g in open_prev
                else np.zeros((S_prev, 1), dtype=np.int64)
            )
            acc[g] = (base + contrib[g][None, :]) % p

        close_vals = (
            np.stack([acc[g] for g in closing], axis=-1)
            if closing
            else np.zeros((S_prev, n_branch, 0), dtype=np.int64)
        )
        close_key = np.zeros((S_prev, n_branch), dtype=np.int64)
        for g in closing:
            close_key = close_key * p + acc[g]
        next_idx = np.zeros((S_prev, n_branch), dtype=np.int64)
        for pos, g in enumerate(open_next):
            next_idx = next_idx * p + acc[g]
        return {
            "lo": lo,
            "hi": hi,
            "bx": bx,
            "bz": bz,
            "wt": wt,
            "closing": closing,
            "close_vals": close_vals,
            "close_key": close_key,
            "next_idx": next_idx,
            "open_prev": open_prev,
            "open_next": open_next,
        }

    def map_syndrome(self, syn: SyndromeSequence | Sequence[int]) -> np.ndarray:
        values = syn.values if isinstance(syn, SyndromeSequence) else syn
        values = np.asarray(values, dtype=np.int64)
        if values.shape != (len(self.stab.generators),):
            raise ValueError(
                f"expected {len(self.stab.generators)} syndrome values, got {values.shape}"
            )
        return (self.transform @ values) % self.p


def build_error_trellis(
    code: QccCode | StabilizerWindow,
    block_regs: int | None = None,
    state_cap: int | None = None,
) -> ErrorTrellis:
    if isinstance(code, QccCode):
        return ErrorTrellis(code.stabilizer, code.regs_per_block, state_cap)
    if block_regs is None:
        raise ValueError("block_regs is required for a bare stabilizer window")
    return ErrorTrellis(code, block_regs, state_cap)


def _as_trellis(code) -> ErrorTrellis:
    return code if isinstance(code, ErrorTrellis) else build_error_trellis(code)


def qva_decode(
    code: QccCode | ErrorTrellis,
    syn: SyndromeSequence | Sequence[int],
    state_cap: int | None = None,
) -> RecoveryPath:
    """Minimum-weight Pauli correction consistent with the syndrome."""
    trellis = code if isinstance(code, ErrorTrellis) else build_error_trellis(code, state_cap=state_cap)
    target = trellis.map_syndrome(syn)
    p = trellis.p

    # state -> (metric, branch path); path comparison is the tie-break
    best: dict[int, tuple[int, tuple[int, ...]]] = {0: (0, ())}
    for t in range(trellis.n_blocks):
        tab = trellis._blocks[t]
        closing = tab["closing"]
        want = np.array([target[g] for g in closing], dtype=np.int64)
        nxt: dict[int, tuple[int, tuple[int, ...]]] = {}
        for s, (metric, path) in best.items():
            ok = (
                np.nonzero((tab["close_vals"][s] == want[None, :]).all(axis=1))[0]
                if len(closing)
                else np.arange(tab["wt"].shape[0])
            )
            for b in ok:
                b = int(b)
                cand = (metric + int(tab["wt"][b]), path + (b,))
                ns = int(tab["next_idx"][s, b])
                if ns not in nxt or cand < nxt[ns]:
                    nxt[ns] = cand
        if not nxt:
            raise ValueError("syndrome is inconsistent with the generator set")
        best = nxt
    (metric, path) = best[0]
    correction = _branches_to_pauli(trellis, path)
    assert np.array_equal(trellis.stab.syndrome(correction) % p, np.asarray(
        syn.values if isinstance(syn, SyndromeSequence) else syn, dtype=np.int64
    ) % p)
    return RecoveryPath(correction, metric, path)


def _branches_to_pauli(trellis: ErrorTrellis, path: Sequence[int]) -> PauliWindow:
    x = np.zeros(trellis.L, dtype=np.int64)
    z = np.zeros(trellis.L, dtype=np.int64)
    for t, b in enumerate(path):
        tab = trellis._blocks[t]
        x[tab["lo"] : tab["hi"]] = tab["bx"][b]
        z[tab["lo"] : tab["hi"]] = tab["bz"][b]
    return PauliWindow(x, z, trellis.p)


def batch_decode(
    trellis: ErrorTrellis, syndromes: np.ndarray, chunk: int = 2048
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized decoding of many syndromes at once.

    Returns (x, z, cost) arrays of shapes (M, L), (M, L), (M,). Matches
    qva_decode costs exactly; among equal-cost corrections the choice is
    deterministic but may differ from the scalar tie-break.
    """
    syndromes = np.asarray(syndromes, dtype=np.int64)
    M = syndromes.shape[0]
    xs = np.zeros((M, trellis.L), dtype=np.int64)
    zs = np.zeros((M, trellis.L), dtype=np.int64)
    costs = np.zeros(M, dtype=np.int64)
    for start in range(0, M, chunk):
        sl = slice(start, min(M, start + chunk))
        _batch_chunk(trellis, syndromes[sl], xs[sl], zs[sl], costs[sl])
    return xs, zs, costs


def _batch_chunk(trellis, syn, out_x, out_z, out_cost):
    p = trellis.p
    M = syn.shape[0]
    targets = (syn @ trellis.transform.T) % p  # (M, G)
    INF = np.float32(np.inf)
    metric = np.zeros((M, 1), dtype=np.float32)
    args = []
    for t in range(trellis.n_blocks):
        tab = trellis._blocks[t]
        S, B = tab["next_idx"].shape
        cand = metric[:, :, None] + tab["wt"][None, None, :].astype(np.float32)
        if tab["closing"]:
            want_key = np.zeros(M, dtype=np.int64)
            for g in tab["closing"]:
                want_key = want_key * p + targets[:, g]
            valid = tab["close_key"][None, :, :] == want_key[:, None, None]
            cand = np.where(valid, cand, INF)
        S_next = trellis.n_states(t + 1)
        flat = cand.reshape(M, S * B)
        new_metric = np.full((M, S_next), INF, dtype=np.float32)
        arg = np.zeros((M, S_next), dtype=np.int64)
        flat_next = tab["next_idx"].reshape(S * B)
        for ns in range(S_next):
            idxs = np.nonzero(flat_next == ns)[0]
            if len(idxs) == 0:
                continue
            sub = flat[:, idxs]
            pos = np.argmin(sub, axis=1)
            new_metric[:, ns] = sub[np.arange(M), pos]
            arg[:, ns] = idxs[pos]
        metric = new_metric
        args.append(arg)
    if not np.isfinite(metric[:, 0]).all():
        raise ValueError("some syndromes are inconsistent with the generator set")
    out_cost[:] = metric[:, 0].astype(np.int64)
    # traceback
    state = np.zeros(M, dtype=np.int64)
    rows = np.arange(M)
    for t in range(trellis.n_blocks - 1, -1, -1):
        tab = trellis._blocks[t]
        B = tab["wt"].shape[0]
        flat_idx = args[t][rows, state]
        s_prev, b = flat_idx // B, flat_idx % B
        out_x[:, tab["lo"] : tab["hi"]] = tab["bx"][b]
        out_z[:, tab["lo"] : tab["hi"]] = tab["bz"][b]
        state = s_prev


def streaming_decode(
    code: QccCode | ErrorTrellis,
    syn: SyndromeSequence | Sequence[int],
    traceback: int,
) -> list[RecoveryPath]:
    """Blockwise decoding with commits at a fixed latency.

    Runs the same dynamic program but commits the oldest undecided block
    from the current best survivor once `traceback` blocks are pending;
    on widely separated errors the committed corrections agree with the
    full-window decoder. Returns one segment per block.
    """
    trellis = _as_trellis(code)
    min_tb = max(
        int(l - f) + 1 for f, l in zip(trellis.first_block, trellis.last_block)
    )
    if traceback < min_tb:
        raise ValueError(f"traceback {traceback} below minimum {min_tb}")
    target = trellis.map_syndrome(syn)

    best: dict[int, tuple[int, tuple[int, ...]]] = {0: (0, ())}
    committed: list[int] = []
    for t in range(trellis.n_blocks):
        tab = trellis._blocks[t]
        closing = tab["closing"]
        want = np.array([target[g] for g in closing], dtype=np.int64)
        nxt: dict[int, tuple[int, tuple[int, ...]]] = {}
        for s, (metric, path) in best.items():
            ok = (
                np.nonzero((tab["close_vals"][s] == want[None, :]).all(axis=1))[0]
                if len(closing)
                else np.arange(tab["wt"].shape[0])
            )
            for b in ok:
                b = int(b)
                cand = (metric + int(tab["wt"][b]), path + (b,))
                ns = int(tab["next_idx"][s, b])
                if ns not in nxt or cand < nxt[ns]:
                    nxt[ns] = cand
        if not nxt:
            raise ValueError("syndrome is inconsistent with the generator set")
        best = nxt
        if t + 1 >= traceback:
            _, (_, path) = min(best.items(), key=lambda kv: kv[1])
            committed.append(path[len(committed)])
    _, (_, path) = min(best.items(), key=lambda kv: kv[1])
    committed.extend(path[len(committed) :])

    segments = []
    for t, b in enumerate(committed):
        tab = trellis._blocks[t]
        x = np.zeros(trellis.L, dtype=np.int64)
        z = np.zeros(trellis.L, dtype=np.int64)
        x[tab["lo"] : tab["hi"]] = tab["bx"][b]
        z[tab["lo"] : tab["hi"]] = tab["bz"][b]
        corr = PauliWindow(x, z, trellis.p)
        segments.append(RecoveryPath(corr, corr.weight(), (b,)))
    return segments
