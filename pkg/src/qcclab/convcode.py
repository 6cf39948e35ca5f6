"""Classical convolutional codes over GF(p): encoder, trellis, Viterbi.

Information streams are flat symbol sequences, k symbols per block; code
streams are flat, n symbols per block. Zero history is assumed before the
first block, and terminated operation appends m all-zero input blocks.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .gfpoly import PolyMatrix, is_prime

DEFAULT_STATE_CAP = 1 << 20


class StateCapError(ValueError):
    """Trellis state space exceeds the configured cap."""


def _state_cap(explicit: int | None) -> int:
    if explicit is not None:
        return explicit
    env = os.environ.get("QCC_STATE_CAP")
    return int(env) if env else DEFAULT_STATE_CAP


@dataclass(frozen=True)
class ConvCode:
    """k-input n-output m-memory convolutional code with generator G."""

    G: PolyMatrix

    def __post_init__(self) -> None:
        if self.G.rows > self.G.cols:
            raise ValueError("generator must satisfy k <= n")

    @property
    def p(self) -> int:
        return self.G.p

    @property
    def k(self) -> int:
        return self.G.rows

    @property
    def n(self) -> int:
        return self.G.cols

    @property
    def m(self) -> int:
        return max(self.G.max_degree(), 0)

    def taps(self) -> np.ndarray:
        """Coefficient tensor t[d, a, j]: output j gets t * input a delayed d."""
        t = np.zeros((self.m + 1, self.k, self.n), dtype=np.int64)
        for a in range(self.k):
            for j in range(self.n):
                for d, c in enumerate(self.G.entry(a, j).coeffs):
                    t[d, a, j] = c
        return t

    def to_json(self) -> dict:
        doc = self.G.to_json()
        doc.pop("rows")
        doc.pop("cols")
        return {"p": doc["p"], "k": self.k, "n": self.n, "G": doc["entries"]}

    @classmethod
    def from_json(cls, doc: dict) -> "ConvCode":
        for key in ("p", "k", "n", "G"):
            if key not in doc:
                raise ValueError(f"code descriptor missing field {key!r}")
        G = PolyMatrix.from_coeffs(doc["G"], doc["p"])
        if G.rows != doc["k"] or G.cols != doc["n"]:
            raise ValueError("declared k, n do not match generator grid")
        if "N" in doc and doc["N"] != doc["p"]:
            raise ValueError("register dimension N must equal the field modulus p")
        if "N" in doc and not is_prime(doc["N"]):
            raise ValueError("register dimension N must be prime")
        return cls(G)


def encode_stream(code: ConvCode, info: Sequence[int], terminate: bool = True) -> list[int]:
    """Encode a flat info sequence (length multiple of k)."""
    p, k, n, m = code.p, code.k, code.n, code.m
    if len(info) == 0 or len(info) % k:
        raise ValueError(f"info length must be a positive multiple of k={k}")
    for s in info:
        if not 0 <= s < p:
            raise ValueError(f"symbol {s} out of range for GF({p})")
    blocks = [info[i : i + k] for i in range(0, len(info), k)]
    if terminate:
        blocks += [[0] * k] * m
    t = code.taps()
    out: list[int] = []
    for i in range(len(blocks)):
        acc = np.zeros(n, dtype=np.int64)
        for d in range(min(m, i) + 1):
            acc += np.asarray(blocks[i - d], dtype=np.int64) @ t[d]
        out.extend(int(v) for v in acc % p)
    return out


@dataclass(frozen=True)
class Trellis:
    """Time-invariant encoder trellis: state = previous m input blocks."""

    code: ConvCode
    n_states: int
    n_branches: int  # per state, = p^k
    next_state: np.ndarray = field(repr=False)  # (S, B) int64
    output: np.ndarray = field(repr=False)  # (S, B, n) int64


def build_trellis(code: ConvCode, state_cap: int | None = None) -> Trellis:
    p, k, n, m = code.p, code.k, code.n, code.m
    n_states = p ** (k * m)
    cap = _state_cap(state_cap)
    if n_states > cap:
        raise StateCapError(f"{n_states} states exceed cap {cap}")
    n_branches = p**k
    t = code.taps()

    def unpack(idx: int, length: int) -> list[int]:
        out = []
        for _ in range(length):
            out.append(idx % p)
            idx //= p
        return out

    next_state = np.zeros((n_states, n_branches), dtype=np.int64)
    output = np.zeros((n_states, n_branches, n), dtype=np.int64)
    for s in range(n_states):
        # state digits: most recent block first
        hist = unpack(s, k * m)
        past = [hist[b * k : (b + 1) * k] for b in range(m)]
        for b in range(n_branches):
            u = unpack(b, k)
            acc = np.asarray(u, dtype=np.int64) @ t[0]
            for d in range(1, m + 1):
                acc = acc + np.asarray(past[d - 1], dtype=np.int64) @ t[d]
            output[s, b] = acc % p
            new_hist = (u + hist[: k * (m - 1)]) if m else []
            ns = 0
            for digit in reversed(new_hist):
                ns = ns * p + digit
            next_state[s, b] = ns
    return Trellis(code, n_states, n_branches, next_state, output)


@dataclass(frozen=True)
class DecodePath:
    """Viterbi result: decoded info symbols and the path's Hamming metric."""

    info: tuple[int, ...]
    metric: int
    final_state: int


def _branch_inputs(trellis: Trellis) -> list[tuple[int, ...]]:
    p, k = trellis.code.p, trellis.code.k
    out = []
    for b in range(trellis.n_branches):
        u, idx = [], b
        for _ in range(k):
            u.append(idx % p)
            idx //= p
        out.append(tuple(u))
    return out


def viterbi_decode(
    trellis: Trellis,
    received: Sequence[int],
    traceback: int | None = None,
    terminated: bool = True,
) -> DecodePath:
    """Minimum Hamming distance decoding; ties resolved toward the
    lexicographically smallest information sequence.

    With terminated=True the received word must include the m zero-tail
    blocks and the path is forced back to the zero state; the returned
    info excludes the tail. traceback=None decodes the whole window
    exactly; an integer enables streaming commits at that depth.
    """
    code = trellis.code
    p, k, n, m = code.p, code.k, code.n, code.m
    if len(received) == 0 or len(received) % n:
        raise ValueError(f"received length must be a positive multiple of n={n}")
    rec = np.asarray(received, dtype=np.int64).reshape(-1, n)
    T = rec.shape[0]
    if terminated and T <= m:
        raise ValueError("terminated stream shorter than the zero tail")
    inputs = _branch_inputs(trellis)

    if traceback is not None:
        return _viterbi_stream(trellis, rec, traceback, inputs)

    # metric-then-path ordering gives min distance with lexicographic ties
    best: dict[int, tuple[int, tuple[int, ...]]] = {0: (0, ())}
    for t in range(T):
        nxt: dict[int, tuple[int, tuple[int, ...]]] = {}
        tail = terminated and t >= T - m
        for s, (metric, path) in best.items():
            for b in range(trellis.n_branches):
                if tail and b != 0:
                    continue
                d = int(np.count_nonzero(trellis.output[s, b] != rec[t]))
                cand = (metric + d, path + inputs[b])
                ns = int(trellis.next_state[s, b])
                if ns not in nxt or cand < nxt[ns]:
                    nxt[ns] = cand
        best = nxt
    if terminated:
        metric, path = best[0]
        final = 0
        path = path[: k * (T - m)]
    else:
        final, (metric, path) = min(best.items(), key=lambda kv: kv[1])
    return DecodePath(tuple(path), metric, final)


def _viterbi_stream(trellis, rec, traceback: int, inputs) -> DecodePath:
    """Sliding decoder committing the oldest block at the given depth."""
    if traceback < 1:
        raise ValueError("traceback depth must be >= 1")
    T = rec.shape[0]
    k = trellis.code.k
    best: dict[int, tuple[int, tuple[int, ...]]] = {0: (0, ())}
    committed: list[int] = []
    for t in range(T):
        nxt: dict[int, tuple[int, tuple[int, ...]]] = {}
        for s, (metric, path) in best.items():
            for b in range(trellis.n_branches):
                d = int(np.count_nonzero(trellis.output[s, b] != rec[t]))
                cand = (metric + d, path + inputs[b])
                ns = int(trellis.next_state[s, b])
                if ns not in nxt or cand < nxt[ns]:
                    nxt[ns] = cand
        best = nxt
        if t + 1 >= traceback:
            # commit the oldest undecided block from the current best survivor
            _, (_, path) = min(best.items(), key=lambda kv: kv[1])
            committed.extend(path[len(committed) : len(committed) + k])
    final, (metric, path) = min(best.items(), key=lambda kv: kv[1])
    committed.extend(path[len(committed) :])
    return DecodePath(tuple(committed), metric, final)
