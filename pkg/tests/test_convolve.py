import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from latwalk import exact
from latwalk.convolve import (
    CLAMP_TOL,
    FFT_THRESHOLD,
    _clamp,
    convolve,
    convolve_arrays,
    self_convolve_power,
)
from latwalk.errors import DomainError, NumericalError
from latwalk.pmf import Pmf

weights = arrays(np.float64, st.integers(1, 40), elements=st.floats(0, 1, allow_subnormal=False))
offsets = st.integers(-20, 20)


def pmfs():
    return st.builds(lambda off, w: Pmf(off, w / max(w.sum(), 1.0)), offsets, weights)


def direct_oracle(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    out = np.zeros(len(p) + len(q) - 1)
    for i, pi in enumerate(p):
        out[i : i + len(q)] += pi * q
    return out


def test_identity_element():
    p = Pmf(-3, np.array([0.2, 0.5, 0.3]))
    out = convolve(Pmf.delta(0), p)
    assert out.offset == -3
    np.testing.assert_array_equal(out.values, p.values)


def test_w3_square(w3):
    step = Pmf(-1, np.full(3, 1 / 3))
    out = convolve(step, step)
    assert out.offset == -2
    np.testing.assert_allclose(out.values, np.array([1, 2, 3, 2, 1]) / 9, atol=1e-16)


def test_fft_matches_direct_2048():
    rng = np.random.default_rng(7)
    p, q = rng.random(2048), rng.random(2048)
    p /= p.sum()
    q /= q.sum()
    np.testing.assert_allclose(convolve_arrays(p, q, "fft"), direct_oracle(p, q), atol=1e-10, rtol=0)


@pytest.mark.parametrize("size", [1 << 10, 1 << 12, 1 << 14])
def test_fft_direct_agreement_long(size):
    rng = np.random.default_rng(size)
    p, q = rng.random(size), rng.random(size // 3 + 1)
    p /= p.sum()
    q /= q.sum()
    np.testing.assert_allclose(convolve_arrays(p, q, "fft"), np.convolve(p, q), atol=1e-10, rtol=0)


def test_threshold_selects_method():
    p = np.full(100, 0.01)
    small = convolve_arrays(p, p)  # length 199: direct, bit-exact with numpy
    np.testing.assert_array_equal(small, np.convolve(p, p))
    big = np.full(200, 0.005)
    assert len(big) * 2 - 1 > FFT_THRESHOLD
    np.testing.assert_allclose(convolve_arrays(big, big), np.convolve(big, big), atol=1e-15)


def test_clamp_rule():
    v = np.array([0.5, -CLAMP_TOL / 10, 0.0])
    assert np.all(_clamp(v) >= 0)
    with pytest.raises(NumericalError):
        _clamp(np.array([0.5, -2 * CLAMP_TOL]))


@settings(max_examples=60, deadline=None)
@given(pmfs(), pmfs(), pmfs())
def test_associative_and_commutative(p, q, r):
    left = convolve(p, convolve(q, r))
    right = convolve(convolve(p, q), r)
    assert left.offset == right.offset
    np.testing.assert_allclose(left.values, right.values, atol=1e-12, rtol=0)
    pq, qp = convolve(p, q), convolve(q, p)
    np.testing.assert_allclose(pq.values, qp.values, atol=1e-12, rtol=0)
    assert pq.total() == pytest.approx(p.total() * q.total(), abs=1e-12)


def first_return(spec, n):
    return exact.first_passage_pmf(spec, 0, n)


def test_power_one_is_identity(w3):
    p = first_return(w3, 30)
    law = self_convolve_power(p, 1, 30)
    assert law.pmf.offset == 1
    np.testing.assert_array_equal(law.pmf.values, p.values)


def test_power_two_by_hand(w3):
    law = self_convolve_power(first_return(w3, 4), 2, 4)
    assert law[2] == pytest.approx(1 / 9, abs=1e-15)
    assert law[3] == pytest.approx(4 / 27, abs=1e-15)
    assert law[1] == 0


def test_power_zero_is_delta(w3):
    law = self_convolve_power(first_return(w3, 10), 0, 10)
    assert law[0] == 1 and law.pmf.total() == 1


def test_power_rejects_mass_below_one():
    with pytest.raises(DomainError):
        self_convolve_power(Pmf(0, np.array([0.5, 0.5])), 2, 10)


@pytest.mark.parametrize("horizon", [40, 700])
def test_power_consistency(lazy, horizon):
    p = first_return(lazy, horizon)
    for u, v in [(1, 2), (3, 4), (5, 11), (16, 17)]:
        whole = self_convolve_power(p, u + v, horizon).dense()
        parts = convolve_arrays(self_convolve_power(p, u, horizon).dense(), self_convolve_power(p, v, horizon).dense())
        np.testing.assert_allclose(whole, parts[: horizon + 1], atol=1e-11, rtol=0)


def test_power_against_repeated_direct(w3):
    horizon = 60
    p = first_return(w3, horizon)
    base = p.window(0, horizon)
    acc = np.zeros(horizon + 1)
    acc[0] = 1.0
    for u in range(1, 13):
        acc = np.convolve(acc, base)[: horizon + 1]
        law = self_convolve_power(p, u, horizon)
        np.testing.assert_allclose(law.dense(), acc, atol=1e-13, rtol=0)
        assert np.all(law.dense()[:u] == 0)


def test_power_mass_bounds(w3):
    horizon = 500
    p = first_return(w3, horizon)
    masses = [self_convolve_power(p, u, horizon).pmf.total() for u in range(1, 30)]
    assert all(b <= a + 1e-12 for a, b in zip(masses, masses[1:]))
    for u, m in enumerate(masses, 1):
        assert m <= p.total() ** u + 1e-11
