import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sparse_apsa.channel_model import (
    SparseChannel,
    filter_output,
    generate_channel,
    generate_input,
    observations,
    observe,
    regressor,
)


@st.composite
def sizes_and_seed(draw):
    n = draw(st.integers(1, 256))
    k = draw(st.integers(1, n))
    return n, k, draw(st.integers(0, 2**32 - 1))


class TestGenerateChannel:
    def test_table_size(self):
        ch = generate_channel(128, 4, np.random.default_rng(0))
        assert ch.n_taps == 128
        assert np.count_nonzero(ch.taps) == 4
        assert abs(np.linalg.norm(ch.taps) - 1.0) <= 1e-12

    def test_single_tap(self):
        for seed in range(5):
            ch = generate_channel(1, 1, np.random.default_rng(seed))
            assert ch.taps.tolist() in ([1.0], [-1.0])

    def test_dense(self):
        ch = generate_channel(8, 8, np.random.default_rng(1))
        assert np.all(ch.taps != 0)
        assert abs(np.linalg.norm(ch.taps) - 1.0) <= 1e-12

    @pytest.mark.parametrize("n,k", [(8, 0), (8, 9), (0, 0)])
    def test_bad_sizes(self, n, k):
        with pytest.raises(ValueError):
            generate_channel(n, k, np.random.default_rng(0))

    def test_immutable(self):
        ch = generate_channel(16, 2, np.random.default_rng(0))
        with pytest.raises(ValueError):
            ch.taps[0] = 1.0

    @given(sizes_and_seed())
    def test_invariants(self, nks):
        n, k, seed = nks
        ch = generate_channel(n, k, np.random.default_rng(seed))
        nz = np.flatnonzero(ch.taps)
        assert len(nz) == k
        assert tuple(nz) == ch.support
        assert abs(np.sqrt(np.sum(ch.taps**2)) - 1.0) <= 1e-12

    def test_support_roughly_uniform(self):
        rng = np.random.default_rng(2)
        hits = np.zeros(16)
        for _ in range(4000):
            hits[list(generate_channel(16, 2, rng).support)] += 1
        # each index expected 500 times
        assert hits.min() > 400 and hits.max() < 600


class TestGenerateInput:
    @pytest.mark.parametrize("power", [1.0, 4.0])
    def test_variance(self, power):
        x = generate_input(10**5, power, np.random.default_rng(3))
        assert 0.98 * power <= x.var() <= 1.02 * power

    def test_empty(self):
        assert generate_input(0, 1.0, np.random.default_rng(0)).shape == (0,)

    @pytest.mark.parametrize("power", [0.0, -1.0])
    def test_bad_power(self, power):
        with pytest.raises(ValueError):
            generate_input(10, power, np.random.default_rng(0))


class TestRegressor:
    @pytest.mark.parametrize(
        "n,n_taps,expected",
        [(0, 3, [5, 0, 0]), (2, 3, [9, 7, 5]), (1, 2, [7, 5])],
    )
    def test_examples(self, n, n_taps, expected):
        assert regressor([5, 7, 9], n, n_taps).tolist() == expected

    @pytest.mark.parametrize("n", [-1, 3])
    def test_out_of_range(self, n):
        with pytest.raises(IndexError):
            regressor([5, 7, 9], n, 2)

    @given(
        st.lists(st.floats(-1e3, 1e3), min_size=2, max_size=40),
        st.integers(1, 12),
        st.data(),
    )
    def test_shift(self, signal, n_taps, data):
        n = data.draw(st.integers(1, len(signal) - 1))
        cur = regressor(signal, n, n_taps)
        prev = regressor(signal, n - 1, n_taps)
        np.testing.assert_array_equal(cur[1:], prev[:-1])
        assert cur[0] == signal[n]


class TestObserve:
    def test_unit_energy(self):
        ch = generate_channel(32, 4, np.random.default_rng(0))
        assert observe(ch.taps, ch, 0.0) == pytest.approx(1.0, abs=1e-12)

    def test_zero_regressor(self):
        ch = generate_channel(4, 1, np.random.default_rng(0))
        assert observe(np.zeros(4), ch, 3.5) == 3.5

    def test_arithmetic(self):
        ch = SparseChannel(np.array([0.6, 0.8]), (0, 1))
        assert observe([1.0, 2.0], ch, -1.0) == pytest.approx(1.2, abs=1e-15)

    def test_dimension_mismatch(self):
        ch = SparseChannel(np.array([0.6, 0.8]), (0, 1))
        with pytest.raises(ValueError):
            observe([1.0, 2.0, 3.0], ch, 0.0)

    @given(st.integers(0, 2**32 - 1), st.floats(-1, 1), st.floats(-1, 1))
    def test_linearity(self, seed, a, b):
        rng = np.random.default_rng(seed)
        x1, x2, t1, t2 = rng.standard_normal((4, 8))

        def obs(x, taps):
            return observe(x, SparseChannel(taps, range(8)), 0.0)

        assert obs(a * x1 + b * x2, t1) == pytest.approx(a * obs(x1, t1) + b * obs(x2, t1), abs=1e-12)
        assert obs(x1, a * t1 + b * t2) == pytest.approx(a * obs(x1, t1) + b * obs(x1, t2), abs=1e-12)


def test_filter_output_matches_observe():
    rng = np.random.default_rng(4)
    ch = generate_channel(16, 3, rng)
    s = rng.standard_normal(50)
    z = rng.standard_normal(50)
    fast = filter_output(s, ch.taps) + z
    slow = [o.d for o in observations(s, ch, z)]
    np.testing.assert_allclose(fast, slow, rtol=0, atol=1e-12)
