"""Quantum convolutional codes from classical parents.

The construction encodes with the parent code, Fourier transforms every
register, and encodes the flattened register stream with the parent again.
On a finite window with zero left history this yields an exact stabilizer
code: writing A for the first (windowed) encoding matrix and B for the
second, codewords are sums over dummy vectors P of w^((Ax).P) |B P>, so

  * Z-type generators are the dual of im(B),
  * X-type generators are B applied to the dual of im(A),
  * the spin flip on qubit i is Z^u with B^T u = A e_i,
  * the phase shift on qubit i is X^(B mu) with A^T mu = -e_i.

All solves are exact GF(p) linear algebra on the window.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from . import linalg
from .convcode import ConvCode, encode_stream
from .gfpoly import catastrophic_check
from .pauli import PauliWindow, StabilizerWindow


class CatastrophicParentError(ValueError):
    """The parent classical code fails the Massey-Sain criterion."""


def _require_non_catastrophic(parent: ConvCode) -> None:
    if catastrophic_check(parent.G).is_catastrophic:
        raise CatastrophicParentError(
            "parent encoder is catastrophic; stabilizer supports would be unbounded"
        )


def encoding_matrix(code: ConvCode, n_blocks: int) -> np.ndarray:
    """Windowed encoding matrix: column j is the truncated codeword of the
    j-th unit info symbol, zero history before block 1."""
    k, n, p = code.k, code.n, code.p
    K = k * n_blocks
    L = n * n_blocks
    M = np.zeros((L, K), dtype=np.int64)
    for j in range(K):
        info = [0] * K
        info[j] = 1
        M[:, j] = encode_stream(code, info, terminate=False)
    return M % p


def zero_pauli(L: int, p: int) -> tuple[np.ndarray, np.ndarray]:
    return np.zeros(L, dtype=np.int64), np.zeros(L, dtype=np.int64)


def classical_stabilizer(code: ConvCode, window_blocks: int) -> StabilizerWindow:
    """Stabilizer form of a classical code on a window: Z-type generators
    span the dual of the codeword space, spin flips re-encode unit info
    vectors as X patterns, and phase shifts are dual info-readout vectors."""
    if window_blocks < code.m + 1:
        raise ValueError("window must cover at least m + 1 blocks")
    _require_non_catastrophic(code)
    p = code.p
    A = encoding_matrix(code, window_blocks)
    L, K = A.shape
    dual = linalg.rref(linalg.kernel(A.T, p), p)[0]
    gens = [PauliWindow(np.zeros(L), v, p) for v in dual]
    log_x, log_z = [], []
    for i in range(K):
        d = linalg.solve(A.T, _unit(K, i), p)
        assert d is not None  # A is injective on zero-history windows
        log_x.append(PauliWindow(A[:, i], np.zeros(L), p))
        log_z.append(PauliWindow(np.zeros(L), d, p))
    return StabilizerWindow(gens, log_x, log_z, L=L, p=p)


def fourier_dual(stab: StabilizerWindow) -> StabilizerWindow:
    """Conjugate every operator by the local Fourier transform: X^a Z^b
    becomes X^(-b) Z^a. Phases are dropped."""

    def swap(op: PauliWindow) -> PauliWindow:
        return PauliWindow((-op.z) % op.p, op.x, op.p)

    return StabilizerWindow(
        [swap(g) for g in stab.generators],
        [swap(l) for l in stab.logical_x],
        [swap(l) for l in stab.logical_z],
        L=stab.L,
        p=stab.p,
    )


def _unit(n: int, i: int) -> np.ndarray:
    e = np.zeros(n, dtype=np.int64)
    e[i] = 1
    return e


def _solve_localized(M, b, p: int, center: int, halfwidth: int) -> np.ndarray:
    """Solution of M v = b supported on a narrow contiguous column window.

    Widens a window around `center` until the restricted system becomes
    consistent, then greedily trims both edges; the result is a compact,
    deterministic representative of the solution coset."""
    M = np.asarray(M, dtype=np.int64)
    cols = M.shape[1]
    hw = halfwidth
    lo = hi = None
    while True:
        lo, hi = max(0, center - hw), min(cols, center + hw)
        if linalg.solve(M[:, lo:hi], b, p) is not None:
            break
        if lo == 0 and hi == cols:
            raise AssertionError("linear system unexpectedly inconsistent")
        hw *= 2
    while hi - lo > 1 and linalg.solve(M[:, lo + 1 : hi], b, p) is not None:
        lo += 1
    while hi - lo > 1 and linalg.solve(M[:, lo : hi - 1], b, p) is not None:
        hi -= 1
    v = linalg.solve(M[:, lo:hi], b, p)
    out = np.zeros(cols, dtype=np.int64)
    out[lo:hi] = v
    return out


@dataclass(frozen=True)
class QccCode:
    """Windowed quantum convolutional code built from a classical parent.

    A k-input n-output parent yields k^2 info symbols per n^2 registers;
    window_blocks counts parent info blocks, so the window holds
    k * window_blocks logical qudits on n^2 * window_blocks / k registers.
    """

    parent: ConvCode
    window_blocks: int

    def __post_init__(self) -> None:
        _require_non_catastrophic(self.parent)
        k, n = self.parent.k, self.parent.n
        if (n * self.window_blocks) % k:
            raise ValueError(
                f"window of {self.window_blocks} blocks is incompatible with the "
                f"second encoding; choose a multiple of k={k}"
            )
        if self.window_blocks < self.parent.m + 1:
            raise ValueError("window must cover at least m + 1 parent blocks")

    @property
    def N(self) -> int:
        return self.parent.p

    @property
    def k_info(self) -> int:
        """Logical qudits in the window."""
        return self.parent.k * self.window_blocks

    @property
    def regs_per_block(self) -> int:
        """Registers per parent info block (the template shift step)."""
        return self.parent.n**2 // self.parent.k

    @property
    def L(self) -> int:
        return self.regs_per_block * self.window_blocks

    @cached_property
    def first_matrix(self) -> np.ndarray:
        """Intermediate registers as a linear map of info symbols."""
        return encoding_matrix(self.parent, self.window_blocks)

    @cached_property
    def second_matrix(self) -> np.ndarray:
        """Final registers as a linear map of the dummy vector (one dummy
        per intermediate register, fed flat into the parent encoder)."""
        n_mid = self.parent.n * self.window_blocks
        return encoding_matrix(self.parent, n_mid // self.parent.k)

    @cached_property
    def stabilizer(self) -> StabilizerWindow:
        p = self.N
        A, B = self.first_matrix, self.second_matrix
        L, K = self.L, self.k_info
        x_gens = linalg.rref((linalg.kernel(A.T, p) @ B.T) % p, p)[0]
        z_gens = linalg.rref(linalg.kernel(B.T, p), p)[0]
        gens = [PauliWindow(v, np.zeros(L), p) for v in x_gens]
        gens += [PauliWindow(np.zeros(L), v, p) for v in z_gens]
        log_x, log_z = [], []
        n, k = self.parent.n, self.parent.k
        for i in range(K):
            blk = i // k
            u = _solve_localized(
                B.T, A[:, i], p,
                center=blk * self.regs_per_block, halfwidth=self.regs_per_block,
            )
            mu = _solve_localized(
                A.T, (-_unit(K, i)) % p, p,
                center=blk * n, halfwidth=n,
            )
            log_x.append(PauliWindow(np.zeros(L), u, p))
            log_z.append(PauliWindow((B @ mu) % p, np.zeros(L), p))
        return StabilizerWindow(gens, log_x, log_z, L=L, p=p)

    @cached_property
    def support_bound(self) -> int:
        """Max registers touched by any interior template."""
        spans = [_span_len(t.pattern) for t in self.templates]
        return max(spans, default=0)

    @cached_property
    def templates(self) -> tuple["Template", ...]:
        """Interior periodic patterns with their shift step, for display and
        for streaming decoders. Boundary generators near the window edges
        are window-specific and live only in `stabilizer`."""
        return _extract_templates(self)

    def to_json(self) -> dict:
        stab = self.stabilizer
        return {
            "parent": self.parent.to_json(),
            "N": self.N,
            "window_blocks": self.window_blocks,
            "registers": self.L,
            "step": self.regs_per_block,
            "support_bound": self.support_bound,
            "templates": [t.to_json() for t in self.templates],
            "generators": [op_to_text(g) for g in stab.generators],
            "logical_x": [op_to_text(l) for l in stab.logical_x],
            "logical_z": [op_to_text(l) for l in stab.logical_z],
        }


def op_to_text(op: PauliWindow) -> str | dict:
    return op.to_string() if op.p == 2 else op.to_json()


def _span_len(op: PauliWindow) -> int:
    sup = np.nonzero((op.x != 0) | (op.z != 0))[0]
    if len(sup) == 0:
        return 0
    return int(sup[-1] - sup[0] + 1)


@dataclass(frozen=True)
class Template:
    """A periodic operator pattern: instance t acts at offset + t * step."""

    kind: str  # "stabilizer-x", "stabilizer-z", "logical-x", "logical-z"
    pattern: PauliWindow
    offset: int
    step: int

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "pattern": op_to_text(self.pattern),
            "offset": self.offset,
            "step": self.step,
        }


def _extract_templates(code: QccCode) -> tuple[Template, ...]:
    """Pull shift-invariant interior patterns from a reference window.

    Minimal span bases of the generator spaces recover the shifted family
    structure that echelon form obscures; only patterns recurring at the
    same offset class count as templates."""
    parent = code.parent
    step = code.regs_per_block
    ref_blocks = max(code.window_blocks, 4 * parent.m + 6)
    if ref_blocks % parent.k:
        ref_blocks += parent.k - ref_blocks % parent.k
    ref = code if ref_blocks == code.window_blocks else QccCode(parent, ref_blocks)
    p, L = ref.N, ref.L
    A, B = ref.first_matrix, ref.second_matrix
    zeros = np.zeros(L, dtype=np.int64)

    out: list[Template] = []
    x_rows = linalg.minimal_span_basis((linalg.kernel(A.T, p) @ B.T) % p, p)
    z_rows = linalg.minimal_span_basis(linalg.kernel(B.T, p), p)
    out.extend(
        _periodic_patterns("stabilizer-x", [PauliWindow(v, zeros, p) for v in x_rows], step, L)
    )
    out.extend(
        _periodic_patterns("stabilizer-z", [PauliWindow(zeros, v, p) for v in z_rows], step, L)
    )
    # logical templates from a safely interior qubit
    stab = ref.stabilizer
    mid = ref.k_info // 2
    for kind, op in (
        ("logical-x", stab.logical_x[mid]),
        ("logical-z", stab.logical_z[mid]),
    ):
        pat, off = _normalize(op)
        out.append(Template(kind, pat, off % step, step))
    return tuple(out)


def _normalize(op: PauliWindow) -> tuple[PauliWindow, int]:
    sup = np.nonzero((op.x != 0) | (op.z != 0))[0]
    start = int(sup[0])
    end = int(sup[-1]) + 1
    return PauliWindow(op.x[start:end], op.z[start:end], op.p), start


def _periodic_patterns(kind, ops, step, L) -> list[Template]:
    """Keep patterns that reappear shifted by the step, one representative
    per offset class, skipping boundary-truncated instances."""
    seen: dict[tuple, Template] = {}
    counts: dict[tuple, int] = {}
    for op in ops:
        pat, start = _normalize(op)
        if start == 0 or start + _span_len(pat) >= L:
            continue  # possibly truncated at an edge
        key = (pat.x.tobytes(), pat.z.tobytes(), start % step)
        counts[key] = counts.get(key, 0) + 1
        seen.setdefault(key, Template(kind, pat, start % step, step))
    return [t for key, t in seen.items() if counts[key] >= 2]


def build_qcc(parent: ConvCode, window_blocks: int) -> QccCode:
    """Validate and assemble the windowed code (see QccCode)."""
    return QccCode(parent, window_blocks)


@dataclass(frozen=True)
class CodewordForm:
    """Closed-form description of the code's states: phase schedule from
    the first encoding, register schedule from the second."""

    parent: ConvCode

    def __post_init__(self) -> None:
        _require_non_catastrophic(self.parent)

    def a_coeffs(self, n_blocks: int) -> np.ndarray:
        """Phase coupling: a[r, j] couples dummy r to info symbol j."""
        return encoding_matrix(self.parent, n_blocks)

    def b_coeffs(self, n_blocks: int) -> np.ndarray:
        """Register content: b[s, r] adds dummy r into final register s."""
        n_mid = self.parent.n * n_blocks
        return encoding_matrix(self.parent, n_mid // self.parent.k)

    def amplitudes(self, info: Sequence[int], n_blocks: int | None = None) -> np.ndarray:
        """Direct summation over all dummy assignments; the desk-scale
        oracle for circuit-built encodings. Returns shape (N,) * L."""
        parent = self.parent
        N = parent.p
        k = parent.k
        if n_blocks is None:
            if len(info) % k:
                raise ValueError("info length must be a multiple of k")
            n_blocks = len(info) // k
        code = QccCode(parent, n_blocks)
        A, B = code.first_matrix, code.second_matrix
        L = code.L
        info = np.asarray(info, dtype=np.int64)
        if info.shape != (code.k_info,):
            raise ValueError("info length does not match the window")
        amp = np.zeros((N,) * L, dtype=np.complex128)
        phase_vec = (A @ info) % N
        n_mid = A.shape[0]
        omega = np.exp(2j * np.pi / N)
        for idx in np.ndindex(*(N,) * n_mid):
            P = np.asarray(idx, dtype=np.int64)
            regs = tuple((B @ P) % N)
            amp[regs] += omega ** int(phase_vec @ P % N)
        amp /= np.linalg.norm(amp.ravel())
        return amp


def codeword_form(parent: ConvCode) -> CodewordForm:
    return CodewordForm(parent)
