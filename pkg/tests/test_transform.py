import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from klooster.transform import bluestein_dft, fft_size


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 300), st.sampled_from([-1, 1]), st.integers(0, 2**32 - 1))
def test_matches_numpy_fft(n, sign, seed):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=n) + 1j * rng.normal(size=n)
    ref = np.fft.fft(x) if sign == -1 else np.fft.ifft(x) * n
    assert np.max(np.abs(bluestein_dft(x, sign) - ref)) < 1e-10 * (1 + np.max(np.abs(ref)))


def test_prime_length_against_matrix():
    n = 97
    x = np.random.default_rng(0).normal(size=n)
    k = np.arange(n)
    mat = np.exp(-2j * np.pi * np.outer(k, k) / n)
    assert np.max(np.abs(bluestein_dft(x) - mat @ x)) < 1e-11


def test_fft_size():
    assert fft_size(5) == 16 and fft_size(8) == 16 and fft_size(9) == 32
