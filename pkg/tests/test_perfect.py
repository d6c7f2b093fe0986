import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from btncodec.bounds import lower_bound_applicable, perfect_width, size_meets_lower_bound
from btncodec.codes import (
    DuplicateVectorError,
    VectorSet,
    assign_codes,
    build_encoder,
    code_matrix,
)
from btncodec.core import FOUR_VECTORS, BitVec, LayeredNet, eval_batch, eval_net, metrics
from btncodec.perfect import (
    build_gamma_layer,
    build_perfect_decoder,
    decoder_layer_roles,
    optimal_B,
)

from conftest import random_set

X4 = VectorSet.from_strings(FOUR_VECTORS)


def gamma_active(n, B, beta):
    net = LayeredNet(len(beta), build_gamma_layer(n, B))
    out = eval_net(net, BitVec.from_str(beta))
    return [i for i, v in enumerate(out.bits) if v]


class TestAssignCodes:
    def test_positional(self):
        codes = assign_codes(X4)
        assert str(codes[2]) == "10"

    def test_single_vector(self):
        X = VectorSet.from_strings(["0110"])
        assert X.d == 1
        assert [str(c) for c in assign_codes(X)] == ["0"]

    def test_five_vectors(self):
        X = VectorSet.from_strings(["000", "001", "010", "011", "100"])
        assert [str(c) for c in assign_codes(X)] == ["000", "001", "010", "011", "100"]

    def test_duplicates_rejected(self):
        with pytest.raises(DuplicateVectorError):
            VectorSet.from_strings(["01", "01"])
        dup = VectorSet.from_strings(["01", "01"], distinct=False)
        with pytest.raises(DuplicateVectorError):
            assign_codes(dup)


class TestEncoder:
    def test_last_example_vector(self):
        enc = build_encoder(X4)
        assert str(eval_net(enc, BitVec.from_str("111"))) == "11"

    def test_first_vector_maps_to_zero(self):
        assert str(eval_net(build_encoder(X4), X4[0])) == "00"

    def test_outside_set_does_not_raise(self):
        eval_net(build_encoder(X4), BitVec.from_str("010"))

    def test_encodes_every_vector_to_its_index(self, rng):
        X = random_set(rng, 37, 12)
        assert np.array_equal(eval_batch(build_encoder(X), X.data), code_matrix(37))


class TestGammaLayer:
    def test_power_of_two_split(self):
        assert gamma_active(8, 2, "101") == [2, 4 + 1]

    def test_single_block(self):
        assert gamma_active(4, 4, "00") == [0, 1]

    def test_interval_realization(self):
        assert gamma_active(9, 3, "0110") == [2, 3 + 0]

    @pytest.mark.parametrize("B", [1, 0, 10])
    def test_B_out_of_range(self, B):
        with pytest.raises(ValueError):
            build_gamma_layer(9, B)

    @settings(max_examples=80, deadline=None)
    @given(st.integers(2, 300).flatmap(lambda n: st.tuples(st.just(n), st.integers(2, n))))
    def test_exactly_two_fire(self, nB):
        n, B = nB
        net = LayeredNet(code_length(n), build_gamma_layer(n, B))
        out = eval_batch(net, code_matrix(n))
        nb = -(-n // B)
        k = np.arange(n)
        expected = np.zeros((n, nb + B), dtype=np.uint8)
        expected[k, k // B] = 1
        expected[k, nb + k % B] = 1
        assert np.array_equal(out, expected)

    def test_power_of_two_is_one_layer(self):
        assert len(build_gamma_layer(100, 8)) == 1
        assert len(build_gamma_layer(100, 6)) == 3


def code_length(n):
    return max(1, (n - 1).bit_length())


class TestPerfectDecoder:
    def test_example_set_B2(self):
        bundle = build_perfect_decoder(X4, 2)
        assert bundle.decoder.widths == (4, 6, 3)
        out = eval_batch(bundle.decoder, code_matrix(4))
        assert np.array_equal(out, X4.data)

    def test_width_formula(self, rng):
        X = random_set(rng, 64, 16)
        bundle = build_perfect_decoder(X, 4)
        assert metrics(bundle.decoder).width == 64 == max(16 + 4, 64)

    def test_y_layer_selects_remainder(self, rng):
        X = random_set(rng, 24, 10)
        B = 4
        bundle = build_perfect_decoder(X, B)
        _, acts = eval_batch(bundle.decoder, code_matrix(24), trace=True)
        y = acts[decoder_layer_roles("perfect", B).index("y")].reshape(24, 10, B)
        for k in range(24):
            r = k % B
            for j in range(10):
                for b in range(B):
                    assert y[k, j, b] == int(b == r and X.data[k, j] == 1)

    def test_non_divisible_n_pads_with_phantoms(self, rng):
        X = random_set(rng, 13, 9)
        for B in (2, 3, 4, 5, 8):
            out = eval_batch(build_perfect_decoder(X, B).decoder, code_matrix(13))
            assert np.array_equal(out, X.data)

    def test_size_formula_power_of_two(self, rng):
        X = random_set(rng, 50, 7)
        for B in (2, 4, 8, 16, 32):
            m = metrics(build_perfect_decoder(X, B).decoder)
            assert m.size == (-(-50 // B) + B) + B * 7 + 7

    def test_single_vector_degenerates_to_constants(self):
        X = VectorSet.from_strings(["1011"])
        bundle = build_perfect_decoder(X, 2)
        assert bundle.d == 1 and bundle.B == 1
        assert str(eval_net(bundle.decoder, BitVec.from_str("0"))) == "1011"

    def test_B_errors(self, rng):
        X = random_set(rng, 40, 8)
        for B in (1, 41):
            with pytest.raises(ValueError):
                build_perfect_decoder(X, B)
        with pytest.raises(ValueError, match="capacity"):
            build_perfect_decoder(X, 33)

    @settings(max_examples=40, deadline=None)
    @given(
        st.integers(2, 200).flatmap(
            lambda n: st.tuples(st.just(n), st.integers(2, min(n, 12)), st.integers(0, 2**32))
        )
    )
    def test_perfect_recovery(self, case):
        n, B, seed = case
        X = random_set(np.random.default_rng(seed), n, 12)
        bundle = build_perfect_decoder(X, B)
        codes = eval_batch(bundle.encoder, X.data)
        assert np.array_equal(eval_batch(bundle.decoder, codes), X.data)
        if B & (B - 1) == 0:
            assert metrics(bundle.decoder).width == perfect_width(n, 12, B)

    def test_size_above_lower_bound(self, rng):
        for n, D in [(16, 13), (64, 40), (200, 64), (1000, 64)]:
            X = random_set(rng, n, D)
            d = X.d
            assert lower_bound_applicable(D, d)
            for B in (2, 4, 8):
                size = metrics(build_perfect_decoder(X, B).decoder).size
                assert size_meets_lower_bound(size, n, D, d)


class TestOptimalB:
    def test_arithmetic(self):
        assert optimal_B(100, 5) == 5

    @pytest.mark.parametrize("D", [1, 3, 10, 50])
    def test_n_four_D(self, D):
        assert optimal_B(4 * D, D) == 2

    @pytest.mark.parametrize("D", [1, 2, 7, 64])
    def test_clamped(self, D):
        assert optimal_B(D + 1, D) == 2

    def test_requires_n_above_D(self):
        with pytest.raises(ValueError):
            optimal_B(10, 10)

    @given(st.integers(2, 10**6), st.integers(1, 1000))
    def test_is_ceiling_of_sqrt(self, n, D):
        if n <= D:
            return
        B = optimal_B(n, D)
        assert B * B * D >= n
        assert B == 2 or (B - 1) ** 2 * D < n
