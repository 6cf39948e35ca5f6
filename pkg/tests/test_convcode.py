import itertools

import numpy as np
import pytest

from qcclab import ConvCode, PolyMatrix, build_trellis, encode_stream, viterbi_decode
from qcclab.convcode import StateCapError


def brute_force_decode(code, received):
    """Exhaustive minimum-distance search; the oracle for Viterbi tests."""
    n, k, m, p = code.n, code.k, code.m, code.p
    T = len(received) // n - m
    best = None
    for info in itertools.product(range(p), repeat=k * T):
        word = encode_stream(code, list(info), terminate=True)
        dist = sum(a != b for a, b in zip(word, received))
        cand = (dist, info)
        if best is None or cand < best:
            best = cand
    return best


class TestEncode:
    def test_flagship_impulse(self, rate_half_parent):
        out = encode_stream(rate_half_parent, [1, 0, 0, 0], terminate=False)
        assert out == [1, 1, 0, 1, 1, 1, 0, 0]

    def test_all_zero(self, rate_half_parent):
        assert encode_stream(rate_half_parent, [0] * 5, terminate=False) == [0] * 10

    def test_short_memory_code(self, catastrophic_parent):
        out = encode_stream(catastrophic_parent, [1, 1, 1], terminate=False)
        assert out == [1, 1, 0, 1, 0, 0]

    def test_termination_appends_tail(self, rate_half_parent):
        out = encode_stream(rate_half_parent, [1], terminate=True)
        assert len(out) == 2 * (1 + rate_half_parent.m)
        # tail flushes the memory: re-encoding the zero-padded info agrees
        assert out == encode_stream(rate_half_parent, [1, 0, 0], terminate=False)

    def test_linearity(self, rate_half_parent):
        rng = np.random.default_rng(1)
        for _ in range(25):
            a = rng.integers(0, 2, 6)
            b = rng.integers(0, 2, 6)
            ea = encode_stream(rate_half_parent, a.tolist(), terminate=False)
            eb = encode_stream(rate_half_parent, b.tolist(), terminate=False)
            eab = encode_stream(rate_half_parent, ((a + b) % 2).tolist(), terminate=False)
            assert [(x + y) % 2 for x, y in zip(ea, eb)] == eab

    def test_symbol_out_of_range(self, rate_half_parent):
        with pytest.raises(ValueError):
            encode_stream(rate_half_parent, [2], terminate=False)

    def test_ternary_encoding(self):
        code = ConvCode(PolyMatrix.from_coeffs([[[1], [2, 1]]], 3))
        out = encode_stream(code, [1, 2], terminate=False)
        assert out == [1, 2, 2, (2 * 2 + 1) % 3]  # second block: (k2, 2*k2 + k1)


class TestTrellis:
    def test_flagship_shape(self, rate_half_parent):
        tr = build_trellis(rate_half_parent)
        assert tr.n_states == 4
        assert tr.n_branches == 2

    def test_memoryless_single_state(self, repetition_parent):
        assert build_trellis(repetition_parent).n_states == 1

    def test_state_cap(self, rate_half_parent):
        with pytest.raises(StateCapError):
            build_trellis(rate_half_parent, state_cap=2)

    def test_paths_reproduce_encoder(self, rate_half_parent):
        tr = build_trellis(rate_half_parent)
        rng = np.random.default_rng(2)
        for _ in range(20):
            info = rng.integers(0, 2, 7).tolist()
            word = encode_stream(rate_half_parent, info, terminate=False)
            s = 0
            out = []
            for u in info:
                out.extend(int(v) for v in tr.output[s, u])
                s = int(tr.next_state[s, u])
            assert out == word


class TestViterbi:
    def test_clean_word_decodes_to_itself(self, rate_half_parent):
        tr = build_trellis(rate_half_parent)
        info = [1, 0, 1, 1, 0]
        word = encode_stream(rate_half_parent, info, terminate=True)
        path = viterbi_decode(tr, word)
        assert list(path.info) == info
        assert path.metric == 0
        assert path.final_state == 0

    def test_single_flip_corrected(self, rate_half_parent):
        tr = build_trellis(rate_half_parent)
        info = [1, 0, 0, 0]
        word = encode_stream(rate_half_parent, info, terminate=True)
        for i in range(len(word)):
            rx = list(word)
            rx[i] ^= 1
            path = viterbi_decode(tr, rx)
            assert list(path.info) == info, f"flip at {i}"
            assert path.metric == 1

    def test_double_errors_within_free_distance(self, rate_half_parent):
        # free distance 5 as a terminated block code: any 2 flips correct
        tr = build_trellis(rate_half_parent)
        info = [1, 0, 1, 1, 0, 1]
        word = encode_stream(rate_half_parent, info, terminate=True)
        for i, j in itertools.combinations(range(len(word)), 2):
            rx = list(word)
            rx[i] ^= 1
            rx[j] ^= 1
            path = viterbi_decode(tr, rx)
            assert list(path.info) == info, f"flips at {i},{j}"

    def test_matches_exhaustive_search(self, rate_half_parent):
        tr = build_trellis(rate_half_parent)
        rng = np.random.default_rng(3)
        for _ in range(120):
            T = int(rng.integers(2, 7))
            rx = rng.integers(0, 2, 2 * (T + 2)).tolist()
            path = viterbi_decode(tr, rx)
            dist, info = brute_force_decode(rate_half_parent, rx)
            assert path.metric == dist
            assert tuple(path.info) == info  # tie-break matches lexicographic

    def test_ternary_roundtrip(self):
        code = ConvCode(PolyMatrix.from_coeffs([[[1], [1, 1]]], 3))
        tr = build_trellis(code)
        info = [2, 0, 1, 2]
        word = encode_stream(code, info, terminate=True)
        path = viterbi_decode(tr, word)
        assert list(path.info) == info

    def test_length_must_be_block_multiple(self, rate_half_parent):
        tr = build_trellis(rate_half_parent)
        with pytest.raises(ValueError):
            viterbi_decode(tr, [0, 1, 0])

    def test_streaming_matches_block_decode_on_isolated_errors(self, rate_half_parent):
        tr = build_trellis(rate_half_parent)
        info = [1, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0]
        word = encode_stream(rate_half_parent, info, terminate=False)
        word[2] ^= 1
        word[23] ^= 1
        exact = viterbi_decode(tr, word, terminated=False)
        stream = viterbi_decode(tr, word, traceback=15, terminated=False)
        assert stream.info == exact.info
