import numpy as np
import pytest

from qcclab import linalg


def test_rref_pivots():
    M = [[1, 1, 0], [1, 0, 1]]
    R, pivots = linalg.rref(M, 2)
    assert pivots == [0, 1]
    assert np.array_equal(R, [[1, 0, 1], [0, 1, 1]])


def test_solve_consistent_and_inconsistent():
    M = np.array([[1, 1], [0, 1], [1, 0]])
    x = linalg.solve(M, [0, 1, 1], 2)
    assert x is not None and np.array_equal((M @ x) % 2, [0, 1, 1])
    assert linalg.solve(M, [1, 1, 1], 2) is None


def test_kernel_annihilates():
    rng = np.random.default_rng(0)
    for p in (2, 3, 5):
        M = rng.integers(0, p, (4, 7))
        K = linalg.kernel(M, p)
        assert len(K) == 7 - linalg.rank(M, p)
        assert not ((M @ K.T) % p).any()


def test_in_rowspan():
    M = [[1, 0, 1, 0], [0, 1, 1, 0]]
    assert linalg.in_rowspan([1, 1, 0, 0], M, 2)
    assert not linalg.in_rowspan([0, 0, 0, 1], M, 2)


def test_minimal_span_shrinks_and_preserves_space():
    rng = np.random.default_rng(3)
    base = np.zeros((4, 12), dtype=np.int64)
    # staircase rows plus deliberate mixing
    for i in range(4):
        base[i, 2 * i : 2 * i + 5] = rng.integers(0, 2, 5)
        base[i, 2 * i] = 1
    mixed = base.copy()
    mixed[0] = (mixed[0] + mixed[1] + mixed[3]) % 2
    mixed[2] = (mixed[2] + mixed[3]) % 2
    out = linalg.minimal_span_basis(mixed, 2)
    assert len(out) == 4
    # same row space
    both = np.concatenate([base, out])
    assert linalg.rank(both, 2) == linalg.rank(base, 2) == 4
    # spans are pairwise distinct at both ends
    starts = [np.nonzero(r)[0][0] for r in out]
    ends = [np.nonzero(r)[0][-1] for r in out]
    assert len(set(starts)) == 4 and len(set(ends)) == 4


@pytest.mark.parametrize("p", [2, 3])
def test_solve_matches_numpy_over_small_fields(p):
    rng = np.random.default_rng(7)
    for _ in range(30):
        M = rng.integers(0, p, (5, 5))
        x_true = rng.integers(0, p, 5)
        b = (M @ x_true) % p
        x = linalg.solve(M, b, p)
        assert x is not None
        assert np.array_equal((M @ x) % p, b)
