"""Pure-numpy single-level DWT kernels (fallback when the Cython build is absent).

Both backends implement the same contract:

- ``analysis(x, dec_lo, dec_hi)`` with ``x`` of shape (streams, n) returns
  ``(cA, cD)`` of shape (streams, k), k = (n + L - 1) // 2, computed by
  convolving the symmetric (half-sample) extension of each stream with the
  analysis filters and keeping every second sample:
  ``y[i] = sum_j f[j] * x_ext[2*i + 1 - j]``.
- ``synthesis(cA, cD, rec_lo, rec_hi)`` returns the central "valid" part of
  the reconstruction, length 2*k - L + 2:
  ``r[m] = sum_i cA[i]*rec_lo[m' - 2i] + cD[i]*rec_hi[m' - 2i]`` with
  ``m' = m + L - 2``.

The pair is a perfect-reconstruction filter bank: synthesis(analysis(x))
cropped to the input length reproduces x.
"""

import numpy as np


def _symmetric_indices(n: int, pad: int) -> np.ndarray:
    idx = np.arange(-pad, n + pad)
    # Reflect until in range; repeats are only needed when pad > n.
    while True:
        under = idx < 0
        if under.any():
            idx[under] = -idx[under] - 1
        over = idx >= n
        if over.any():
            idx[over] = 2 * n - 1 - idx[over]
        if not (under.any() or over.any()):
            break
    return idx


def analysis(x: np.ndarray, dec_lo: np.ndarray, dec_hi: np.ndarray):
    x = np.ascontiguousarray(x, dtype=np.float64)
    taps = len(dec_lo)
    n = x.shape[1]
    k = (n + taps - 1) // 2
    ext = x[:, _symmetric_indices(n, taps - 1)]
    ca = np.zeros((x.shape[0], k))
    cd = np.zeros((x.shape[0], k))
    for j in range(taps):
        # Column 2*i + taps - j of ext holds x_ext[2*i + 1 - j].
        cols = ext[:, taps - j : taps - j + 2 * k : 2]
        ca += dec_lo[j] * cols
        cd += dec_hi[j] * cols
    return ca, cd


def synthesis(ca: np.ndarray, cd: np.ndarray, rec_lo: np.ndarray, rec_hi: np.ndarray):
    ca = np.ascontiguousarray(ca, dtype=np.float64)
    cd = np.ascontiguousarray(cd, dtype=np.float64)
    taps = len(rec_lo)
    k = ca.shape[1]
    full = np.zeros((ca.shape[0], 2 * k + taps - 1))
    for j in range(taps):
        full[:, j : j + 2 * k : 2] += rec_lo[j] * ca + rec_hi[j] * cd
    return full[:, taps - 2 : 2 * k]
