"""Dense qudit state-vector engine for desk-scale circuit verification.

Amplitudes are stored as a complex tensor of shape (N,) * L with register
j on axis j. All gates are elementary register operations: constant and
controlled additions, multiplications, discrete Fourier transforms, and
local or two-register phase multiplications.
"""

from __future__ import annotations

import os
from typing import Sequence

import numpy as np

from .gfpoly import is_prime
from .pauli import PauliWindow

DEFAULT_AMPLITUDE_CAP = 1 << 24
NORM_TOL = 1e-10


def _amplitude_cap(explicit: int | None = None) -> int:
    if explicit is not None:
        return explicit
    env = os.environ.get("QCC_STATE_CAP")
    return int(env) if env else DEFAULT_AMPLITUDE_CAP


class StateVector:
    """Normalized pure state of L dimension-N registers."""

    __slots__ = ("N", "L", "amp")

    def __init__(self, N: int, L: int, amp: np.ndarray, cap: int | None = None):
        if not is_prime(N):
            raise ValueError(f"register dimension must be prime, got {N}")
        if N**L > _amplitude_cap(cap):
            raise ValueError(f"state of {N}^{L} amplitudes exceeds the cap")
        amp = np.asarray(amp, dtype=np.complex128).reshape((N,) * L)
        norm = np.linalg.norm(amp.ravel())
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {norm!r} is not 1")
        amp.setflags(write=False)
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "L", L)
        object.__setattr__(self, "amp", amp)

    def __setattr__(self, name, value):
        raise AttributeError("StateVector is immutable; gates return new states")

    @classmethod
    def basis(cls, N: int, L: int, labels: Sequence[int]) -> "StateVector":
        if N**L > _amplitude_cap(None):
            raise ValueError(f"state of {N}^{L} amplitudes exceeds the cap")
        amp = np.zeros((N,) * L, dtype=np.complex128)
        amp[tuple(int(v) % N for v in labels)] = 1.0
        return cls(N, L, amp)

    def _new(self, amp: np.ndarray) -> "StateVector":
        return StateVector(self.N, self.L, amp)

    def _omega(self) -> complex:
        return np.exp(2j * np.pi / self.N)

    def _check_reg(self, *regs: int) -> None:
        for r in regs:
            if not 0 <= r < self.L:
                raise IndexError(f"register {r} out of range for L={self.L}")

    # elementary operations -------------------------------------------------

    def add_const(self, reg: int, a: int) -> "StateVector":
        """|x> -> |x + a> on one register."""
        self._check_reg(reg)
        return self._new(np.roll(self.amp, a % self.N, axis=reg))

    def add(self, src: int, dst: int, scale: int = 1) -> "StateVector":
        """|x, y> -> |x, y + scale * x> for registers (src, dst)."""
        self._check_reg(src, dst)
        if src == dst:
            raise ValueError("source and destination must differ")
        N = self.N
        out = np.empty_like(self.amp)
        idx: list = [slice(None)] * self.L
        for v in range(N):
            idx[src] = slice(v, v + 1)
            out[tuple(idx)] = np.roll(self.amp[tuple(idx)], (scale * v) % N, axis=dst)
        return self._new(out)

    def mul(self, reg: int, a: int) -> "StateVector":
        """|x> -> |a x>, a invertible mod N."""
        self._check_reg(reg)
        N = self.N
        if a % N == 0:
            raise ValueError("multiplier must be nonzero mod N")
        a_inv = pow(a % N, N - 2, N)
        perm = [(a_inv * y) % N for y in range(N)]
        return self._new(np.take(self.amp, perm, axis=reg))

    def fourier(self, reg: int, inverse: bool = False) -> "StateVector":
        """|x> -> sum_y w^(xy) |y> / sqrt(N)."""
        self._check_reg(reg)
        N = self.N
        w = self._omega() ** (-1 if inverse else 1)
        F = w ** (np.outer(np.arange(N), np.arange(N))) / np.sqrt(N)
        out = np.tensordot(F, self.amp, axes=([1], [reg]))
        return self._new(np.moveaxis(out, 0, reg))

    def local_phase(self, reg: int, a: int) -> "StateVector":
        """|x> -> w^(a x) |x>."""
        self._check_reg(reg)
        N = self.N
        vec = self._omega() ** ((a * np.arange(N)) % N)
        shape = [1] * self.L
        shape[reg] = N
        return self._new(self.amp * vec.reshape(shape))

    def pair_phase(self, reg1: int, reg2: int, c: int = 1) -> "StateVector":
        """|x, y> -> w^(c x y) |x, y>."""
        self._check_reg(reg1, reg2)
        if reg1 == reg2:
            raise ValueError("registers must differ")
        N = self.N
        s1 = [1] * self.L
        s1[reg1] = N
        s2 = [1] * self.L
        s2[reg2] = N
        expo = (c * np.arange(N).reshape(s1) * np.arange(N).reshape(s2)) % N
        return self._new(self.amp * self._omega() ** expo)

    def apply_pauli(self, op: PauliWindow) -> "StateVector":
        """Apply tau^phase X^x Z^z (Z first, then X)."""
        if op.L != self.L or op.p != self.N:
            raise ValueError("operator does not match the state")
        out = self
        for j in range(self.L):
            if op.z[j]:
                out = out.local_phase(j, int(op.z[j]))
        amp = out.amp
        for j in range(self.L):
            if op.x[j]:
                amp = np.roll(amp, int(op.x[j]), axis=j)
        tau = np.exp(1j * np.pi / self.N)
        return self._new(amp * tau**op.phase_exp)

    # readout ----------------------------------------------------------------

    def register_distribution(self, reg: int) -> np.ndarray:
        self._check_reg(reg)
        probs = np.abs(self.amp) ** 2
        axes = tuple(a for a in range(self.L) if a != reg)
        return probs.sum(axis=axes)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amp.ravel()))


def fidelity(a: StateVector, b: StateVector) -> float:
    """|<a|b>|^2, the phase-insensitive comparison used everywhere."""
    if (a.N, a.L) != (b.N, b.L):
        raise ValueError("states live on different registers")
    return float(abs(np.vdot(a.amp.ravel(), b.amp.ravel())) ** 2)


_ELEMENTARY = {
    "add-const": lambda s, p: s.add_const(p["reg"], p["a"]),
    "add": lambda s, p: s.add(p["src"], p["dst"], p.get("scale", 1)),
    "mul": lambda s, p: s.mul(p["reg"], p["a"]),
    "fourier": lambda s, p: s.fourier(p["reg"], p.get("inverse", False)),
    "local-phase": lambda s, p: s.local_phase(p["reg"], p["a"]),
    "pair-phase": lambda s, p: s.pair_phase(p["reg1"], p["reg2"], p.get("c", 1)),
}


def apply_elementary(state: StateVector, op_kind: str, **params) -> StateVector:
    """Dispatch by elementary-operation name; see the gate methods."""
    try:
        fn = _ELEMENTARY[op_kind]
    except KeyError:
        raise ValueError(f"unknown elementary operation {op_kind!r}") from None
    return fn(state, params)


# the flagship rate-1/4 encoding ---------------------------------------------


def encode_eq1(info: Sequence[int], N: int, T: int | None = None) -> StateVector:
    """Encode T info qudits into 4T registers with the explicit two-pass
    circuit: convolve the info stream ((1+D^2, 1+D+D^2) taps), Fourier the
    two streams, then convolve the flattened dummy stream the same way.

    Block i occupies registers 4i..4i+3 (0-based).
    """
    if T is None:
        T = len(info)
    if len(info) != T:
        raise ValueError("info length must equal T")
    labels = []
    for v in info:
        if not 0 <= v < N:
            raise ValueError(f"symbol {v} out of range")
        labels.extend([v, 0, 0, 0])
    state = StateVector.basis(N, 4 * T, labels)

    def r(i: int, j: int) -> int:  # block i (1-based), slot j in 1..4
        return 4 * (i - 1) + (j - 1)

    # first pass: slot3 <- k_i + k_{i-1} + k_{i-2}, then slot1 <- k_i + k_{i-2}
    for i in range(1, T + 1):
        for d in (0, 1, 2):
            if i - d >= 1:
                state = state.add(r(i - d, 1), r(i, 3))
    for i in range(T, 0, -1):
        if i - 2 >= 1:
            state = state.add(r(i - 2, 1), r(i, 1))
    # local Fourier introduces the dummy pair (slot1, slot3) per block
    for i in range(1, T + 1):
        state = state.fourier(r(i, 1)).fourier(r(i, 3))
    # second pass on the flattened dummy stream (slot1, slot3 alternating)
    for i in range(1, T + 1):
        state = state.add(r(i, 1), r(i, 2))
        if i >= 2:
            state = state.add(r(i - 1, 1), r(i, 2))
            state = state.add(r(i - 1, 3), r(i, 2))
        state = state.add(r(i, 3), r(i, 4))
        state = state.add(r(i, 1), r(i, 4))
        if i >= 2:
            state = state.add(r(i - 1, 3), r(i, 4))
    for i in range(T, 0, -1):
        if i >= 2:
            state = state.add(r(i - 1, 1), r(i, 1))
            state = state.add(r(i - 1, 3), r(i, 3))
    return state


def decode_step_eq1(state: StateVector, N: int, T: int) -> tuple[StateVector, StateVector]:
    """Extract the first info qudit from an encoded state.

    Register subtractions disentangle block 1, an inverse Fourier turns the
    first register into |k_1>, a phase correction strips the residual
    coupling, and a final Fourier clears the third register. Returns the
    extracted four-register block and the remainder, which equals the
    encoding of the remaining T - 1 symbols.
    """
    if state.L != 4 * T or state.N != N:
        raise ValueError("state shape does not match N, T")
    minus = N - 1
    s = state
    s = s.add(0, 1, minus)           # f2 -= f1
    s = s.add(0, 3, minus).add(2, 3, minus)  # f4 -= f1 + f3
    if T >= 2:
        s = s.add(0, 4, minus)       # f5 -= f1
        s = s.add(0, 5, minus).add(2, 5, minus)  # f6 -= f1 + f3
        s = s.add(2, 6, minus)       # f7 -= f3
        s = s.add(2, 7, minus)       # f8 -= f3
    s = s.fourier(0, inverse=True)
    # residual phase w^(k1 * (q1 + q2 + p3 + q3)): register 3 carries q1 and,
    # when present, register 12 carries q3 + q2 + p3 (register 7 carries q2
    # alone when the stream ends at T = 2)
    s = s.pair_phase(0, 2, minus)
    if T >= 3:
        s = s.pair_phase(0, 11, minus)
    elif T == 2:
        s = s.pair_phase(0, 6, minus)
    s = s.fourier(2)

    marg = s.register_distribution(0)
    k1 = int(np.argmax(marg))
    if abs(marg[k1] - 1.0) > 1e-9:
        raise ValueError("malformed input: first register is not deterministic")
    block = StateVector.basis(N, 4, (k1, 0, 0, 0))
    rest = s.amp[(k1, 0, 0, 0)]
    nrm = np.linalg.norm(np.asarray(rest).ravel())
    if abs(nrm - 1.0) > 1e-9:
        raise ValueError("malformed input: block 1 failed to disentangle")
    remainder = StateVector(N, 4 * (T - 1), np.asarray(rest) / nrm)
    return block, remainder


def verify_logical(
    op: PauliWindow,
    info: Sequence[int],
    expected_info_delta: Sequence[int],
    N: int,
    T: int | None = None,
    tol: float = 1e-9,
) -> bool:
    """True iff op maps the codeword of `info` to the codeword of
    info + expected_info_delta, up to global phase."""
    if T is None:
        T = len(info)
    before = encode_eq1(info, N, T)
    target_info = [(a + b) % N for a, b in zip(info, expected_info_delta)]
    target = encode_eq1(target_info, N, T)
    return fidelity(before.apply_pauli(op), target) >= 1 - tol
