import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcclab.pauli import (
    PauliWindow,
    ResidualKind,
    StabilizerWindow,
    classify_residual,
    commutes,
    compose,
    syndrome,
    weight,
)


def pw(s):
    return PauliWindow.from_string(s)


@pytest.fixture(scope="module")
def repetition_stab():
    gens = [pw("ZZI"), pw("ZIZ")]
    return StabilizerWindow(gens, [pw("XXX")], [pw("ZZZ")])


class TestAlgebra:
    def test_involution(self):
        x1 = pw("XII")
        assert compose(x1, x1).is_identity()

    def test_xz_gives_y_with_tracked_order_phase(self):
        xz = compose(pw("XII"), pw("ZII"))
        zx = compose(pw("ZII"), pw("XII"))
        assert xz.to_string() == zx.to_string() == "YII"
        # reordering Z past X costs omega = tau^2; the canonical X-then-Z
        # product needs no correction
        assert xz.phase_exp == 0
        assert zx.phase_exp == 2

    def test_componentwise_sum_mod_three(self):
        rng = np.random.default_rng(0)
        for _ in range(30):
            a = PauliWindow(rng.integers(0, 3, 5), rng.integers(0, 3, 5), 3)
            b = PauliWindow(rng.integers(0, 3, 5), rng.integers(0, 3, 5), 3)
            c = compose(a, b)
            assert np.array_equal(c.x, (a.x + b.x) % 3)
            assert np.array_equal(c.z, (a.z + b.z) % 3)

    def test_inverse(self):
        rng = np.random.default_rng(1)
        for p in (2, 3):
            a = PauliWindow(rng.integers(0, p, 4), rng.integers(0, p, 4), p, phase_exp=3)
            prod = compose(a, a.inverse())
            assert prod.is_identity() and prod.phase_exp == 0

    @given(st.integers(0, 3**8 - 1), st.integers(0, 3**8 - 1), st.integers(0, 3**8 - 1))
    @settings(max_examples=80, deadline=None)
    def test_associativity_and_identity(self, ai, bi, ci):
        def unpack(v):
            digs = []
            for _ in range(8):
                digs.append(v % 3)
                v //= 3
            return PauliWindow(digs[:4], digs[4:], 3)

        a, b, c = unpack(ai), unpack(bi), unpack(ci)
        left = compose(compose(a, b), c)
        right = compose(a, compose(b, c))
        assert left == right
        e = PauliWindow.identity(4, 3)
        assert compose(a, e) == a and compose(e, a) == a

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            compose(pw("XI"), pw("XII"))


class TestCommutation:
    def test_disjoint_support(self):
        assert commutes(pw("XI"), pw("IZ"))

    def test_canonical_pair(self):
        assert not commutes(pw("X"), pw("Z"))

    def test_even_overlap(self):
        assert commutes(pw("ZZI"), pw("XXX"))

    def test_qutrit_symplectic(self):
        a = PauliWindow([1, 0], [0, 0], 3)
        b = PauliWindow([0, 0], [2, 0], 3)
        assert a.sym_product(b) == 2
        assert not commutes(a, b)


class TestWeight:
    @pytest.mark.parametrize(
        "s,w", [("III", 0), ("YII", 1), ("XIZ", 2), ("XYZ", 3)]
    )
    def test_counts_busy_registers(self, s, w):
        assert weight(pw(s)) == w


class TestStabilizerWindow:
    def test_rejects_anticommuting_generators(self):
        with pytest.raises(ValueError):
            StabilizerWindow([pw("XI"), pw("ZI")])

    def test_rejects_broken_logical_pairing(self):
        # XX and ZZ commute: not a conjugate pair
        with pytest.raises(ValueError):
            StabilizerWindow([], [pw("XX")], [pw("ZZ")], L=2, p=2)
        # cross-pair anticommutation is just as fatal
        with pytest.raises(ValueError):
            StabilizerWindow(
                [], [pw("XI"), pw("IX")], [pw("ZI"), pw("ZZ")], L=2, p=2
            )

    def test_syndrome_examples(self, repetition_stab):
        assert np.array_equal(syndrome(pw("III"), repetition_stab), [0, 0])
        assert np.array_equal(syndrome(pw("XII"), repetition_stab), [1, 1])
        assert np.array_equal(syndrome(pw("IXI"), repetition_stab), [1, 0])
        # stabilizer elements have zero syndrome
        assert np.array_equal(syndrome(pw("IZZ"), repetition_stab), [0, 0])

    def test_syndrome_linearity(self, repetition_stab):
        rng = np.random.default_rng(2)
        for _ in range(40):
            a = PauliWindow(rng.integers(0, 2, 3), rng.integers(0, 2, 3), 2)
            b = PauliWindow(rng.integers(0, 2, 3), rng.integers(0, 2, 3), 2)
            sa = syndrome(a, repetition_stab)
            sb = syndrome(b, repetition_stab)
            sab = syndrome(compose(a, b), repetition_stab)
            assert np.array_equal(sab, (sa + sb) % 2)


class TestClassify:
    def test_identity(self, repetition_stab):
        rep = classify_residual(pw("III"), repetition_stab)
        assert rep.kind is ResidualKind.IDENTITY

    def test_generator_is_stabilizer(self, repetition_stab):
        rep = classify_residual(pw("ZZI"), repetition_stab)
        assert rep.kind is ResidualKind.STABILIZER

    def test_generator_products(self, repetition_stab):
        rng = np.random.default_rng(3)
        gens = repetition_stab.generators
        for _ in range(20):
            acc = PauliWindow.identity(3, 2)
            for _ in range(int(rng.integers(1, 4))):
                acc = compose(acc, gens[int(rng.integers(0, len(gens)))])
            kind = classify_residual(acc, repetition_stab).kind
            assert kind in (ResidualKind.STABILIZER, ResidualKind.IDENTITY)

    def test_logical_flagged_with_index(self, repetition_stab):
        rep = classify_residual(pw("XXX"), repetition_stab)
        assert rep.kind is ResidualKind.LOGICAL_ERROR
        assert rep.affected == (0,)

    def test_nonzero_syndrome_rejected(self, repetition_stab):
        with pytest.raises(ValueError):
            classify_residual(pw("XII"), repetition_stab)


class TestSerialization:
    def test_string_roundtrip(self):
        s = "IXZYXIZZ"
        assert pw(s).to_string() == s

    def test_bad_character(self):
        with pytest.raises(ValueError):
            pw("XQ")

    def test_json_pairs(self):
        a = PauliWindow([1, 0, 2], [0, 2, 1], 3, phase_exp=4)
        doc = a.to_json()
        assert doc == {"x": [1, 0, 2], "z": [0, 2, 1], "phase": 4}

    def test_string_form_requires_qubits(self):
        with pytest.raises(ValueError):
            PauliWindow([1], [1], 3).to_string()
