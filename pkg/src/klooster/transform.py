"""Prime-length DFT by Bluestein's chirp-z factorisation.

Writes a*x = (a^2 + x^2 - (a - x)^2) / 2, turning the length-p DFT into a
linear convolution that is evaluated with power-of-two FFTs.
"""

from __future__ import annotations

import numpy as np


def _chirp(n: int, sign: int) -> np.ndarray:
    # exp(sign * i pi m^2 / n); reduce m^2 mod 2n to keep the phase small
    m = np.arange(n, dtype=np.int64)
    r = (m * m) % (2 * n)
    return np.exp(sign * 1j * np.pi * r / n)


def bluestein_dft(x: np.ndarray, sign: int = -1) -> np.ndarray:
    """X[a] = sum_x x[x] exp(sign * 2 pi i a x / n) for any length n."""
    x = np.asarray(x, dtype=np.complex128)
    n = x.shape[0]
    if sign not in (-1, 1):
        raise ValueError("sign must be +1 or -1")
    w = _chirp(n, sign)
    size = 1 << (2 * n - 1).bit_length()
    f = np.zeros(size, dtype=np.complex128)
    f[:n] = x * w
    g = np.zeros(size, dtype=np.complex128)
    wc = np.conj(w)
    g[:n] = wc
    g[size - n + 1 :] = wc[1:][::-1]
    conv = np.fft.ifft(np.fft.fft(f) * np.fft.fft(g))
    return w * conv[:n]


def fft_size(n: int) -> int:
    return 1 << (2 * n - 1).bit_length()
