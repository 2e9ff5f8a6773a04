"""Independent reference computations used to freeze expected test values.

Everything here deliberately avoids the package's FFT synthesis and torus
quadrature paths: direct mode summation, direct cosine quadrature of
spectral profiles, and sampled difference quotients.
"""

import numpy as np


def direct_mode_sum(coeffs, length, points):
    """Brute-force synthesis sum_m c_m exp(i xi_m x) at given x points (d=1)."""
    mmax = (len(coeffs) - 1) // 2
    m = np.arange(-mmax, mmax + 1)
    xi = 2.0 * np.pi * m / length
    return np.array([np.sum(coeffs * np.exp(1j * xi * x)) for x in points])


def kernel_space_samples(kernel, x, resolution=512.0):
    """K(x) by direct cosine quadrature of the spectral profile (even, real)."""
    dxi = kernel.min_transition / resolution
    xi = np.arange(0.0, kernel.outer_support + dxi, dxi)
    w = np.ones_like(xi)
    w[0] = 0.5
    prof = kernel.profile(xi) * w
    out = np.empty(len(x))
    block = 2048
    x = np.asarray(x, dtype=float)
    for i in range(0, x.size, block):
        out[i : i + block] = np.cos(np.outer(x[i : i + block], xi)) @ prof
    return out * dxi / np.pi


def antiderivative_lp(kernel, p, half=12.0, n=48_001):
    """||Psi||_p with Psi(u) = integral of K up to u, by direct quadrature."""
    x = np.linspace(-half, half, n)
    dx = x[1] - x[0]
    k = kernel_space_samples(kernel, x)
    psi_int = np.cumsum(k) * dx
    if np.isinf(p):
        return float(np.max(np.abs(psi_int)))
    return float((np.sum(np.abs(psi_int) ** p) * dx) ** (1.0 / p))


def second_difference_exponent(values, length, min_lag=1, max_octaves=10):
    """Holder exponent from the dyadic second-difference modulus.

    omega2(h) = max_x |f(x+h) - 2 f(x) + f(x-h)| measured at dyadic lags on
    the sample grid; returns the log-log slope.  Standard Zygmund-class
    estimator, independent of any spectral machinery.  min_lag should sit
    above the scale where a band-limited signal turns smooth (a few samples
    per top-frequency oscillation), else the h^2 regime inflates the slope.
    """
    v = np.asarray(values, dtype=float)
    n = v.size
    lags, mods = [], []
    k = min_lag
    for _ in range(max_octaves):
        if 2 * k >= n // 4:
            break
        diff = np.roll(v, -k) - 2.0 * v + np.roll(v, k)
        lags.append(k * length / n)
        mods.append(np.max(np.abs(diff)))
        k *= 2
    lo = np.log(np.asarray(lags))
    mo = np.log(np.asarray(mods))
    slope = np.polyfit(lo, mo, 1)[0]
    return float(slope)


def power_law_q_integral(a, s, q, y_min):
    """Closed form of the integral of (y^s * y^a)^q dy/y over [y_min, 1]."""
    c = (a + s) * q
    if c <= 0:
        return np.inf
    return (1.0 - y_min**c) / c
