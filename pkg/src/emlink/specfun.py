"""Legendre polynomials, Gauss-Legendre quadrature, and spherical Bessel functions.

Everything here is self-contained double-precision numerics; no external
special-function library is used.  The spherical Hankel function follows the
engineering e^{-jkR} phase convention, h_l(x) = j_l(x) - i*y_l(x), which is
the convention the plane-wave translator requires.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "QuadratureRule",
    "legendre_sequence",
    "gauss_legendre_rule",
    "spherical_bessel_j",
    "spherical_neumann_y",
    "spherical_hankel_paper",
]

# Magnitudes beyond this are treated as an overflow of the Neumann sequence;
# double precision tops out near 1.8e308 and downstream products need headroom.
_OVERFLOW_LIMIT = 1e280

# Rescaling threshold for the downward (Miller) recurrence.
_RESCALE_LIMIT = 1e250


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].

    Exact for polynomials of degree <= 2*order - 1.
    """

    nodes: np.ndarray
    weights: np.ndarray
    order: int

    def map_to(self, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
        """Affinely map the rule to the interval [a, b]."""
        half = 0.5 * (b - a)
        return half * self.nodes + 0.5 * (a + b), half * self.weights


def legendre_sequence(l_max: int, x) -> np.ndarray:
    """Evaluate P_0(x) .. P_{l_max}(x) by the three-term recurrence.

    Parameters
    ----------
    l_max : int
        Highest order, >= 0.
    x : float or ndarray
        Argument(s) in [-1, 1].

    Returns
    -------
    ndarray of shape (l_max + 1,) + shape(x)
        P_n = ((2n-1)/n) x P_{n-1} - ((n-1)/n) P_{n-2}, seeded with
        P_0 = 1, P_1 = x.
    """
    if l_max < 0:
        raise ValueError("l_max must be non-negative")
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0 + 1e-14):
        raise ValueError("Legendre argument outside [-1, 1]")
    out = np.empty((l_max + 1,) + x.shape)
    out[0] = 1.0
    if l_max >= 1:
        out[1] = x
    for n in range(2, l_max + 1):
        out[n] = ((2 * n - 1) * x * out[n - 1] - (n - 1) * out[n - 2]) / n
    return out


def _legendre_and_derivative(n: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """P_n(x) and P'_n(x) for the Newton root solve (x strictly inside (-1, 1))."""
    p_prev = np.ones_like(x)
    p = x.copy()
    for m in range(2, n + 1):
        p_prev, p = p, ((2 * m - 1) * x * p - (m - 1) * p_prev) / m
    dp = n * (x * p - p_prev) / (x * x - 1.0)
    return p, dp


def gauss_legendre_rule(n: int) -> QuadratureRule:
    """Construct the n-point Gauss-Legendre rule on [-1, 1].

    Nodes are the roots of P_n, found by Newton iteration from the asymptotic
    cosine guess; weights are 2 / ((1 - x^2) P'_n(x)^2).  Convergence to
    1e-15 with at most 100 iterations.
    """
    if n < 1:
        raise ValueError("rule order must be >= 1")
    if n == 1:
        return QuadratureRule(np.zeros(1), np.full(1, 2.0), 1)
    i = np.arange(1, n + 1)
    x = np.cos(np.pi * (i - 0.25) / (n + 0.5))
    for _ in range(100):
        p, dp = _legendre_and_derivative(n, x)
        dx = p / dp
        x -= dx
        if np.max(np.abs(dx)) < 1e-15:
            break
    _, dp = _legendre_and_derivative(n, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    # enforce exact +/- symmetry so downstream grids are bit-reproducible
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    order = np.argsort(x)
    return QuadratureRule(x[order], w[order], n)


def spherical_bessel_j(l_max: int, x: float) -> np.ndarray:
    """First-kind spherical Bessel functions j_0(x) .. j_{l_max}(x), x > 0.

    Upward recurrence is used while it is stable (l <= x); otherwise the
    sequence comes from Miller's downward recurrence with the start order
    pushed well above l_max, normalized against the closed-form seed j_0
    (or j_1 when sin x is nearly zero).
    """
    if l_max < 0:
        raise ValueError("l_max must be non-negative")
    if x <= 0:
        raise ValueError("argument must be positive")
    s, c = np.sin(x), np.cos(x)
    j0 = s / x
    if l_max == 0:
        return np.array([j0])
    j1 = s / (x * x) - c / x
    if l_max <= x:
        out = np.empty(l_max + 1)
        out[0], out[1] = j0, j1
        for l in range(1, l_max):
            out[l + 1] = (2 * l + 1) / x * out[l] - out[l - 1]
        return out
    # downward recurrence; extra orders buy the accuracy Miller's method needs
    start = l_max + max(16, int(np.ceil(np.sqrt(40.0 * l_max))))
    f = np.zeros(start + 2)
    f[start + 1] = 0.0
    f[start] = 1e-300
    for l in range(start, 0, -1):
        f[l - 1] = (2 * l + 1) / x * f[l] - f[l + 1]
        if abs(f[l - 1]) > _RESCALE_LIMIT:
            f[: start + 2] /= _RESCALE_LIMIT
    # j0 degenerates at the zeros of sin; j1 cannot vanish there too
    if abs(j0) >= abs(j1):
        scale = j0 / f[0]
    else:
        scale = j1 / f[1]
    return f[: l_max + 1] * scale


def spherical_neumann_y(l_max: int, x: float) -> np.ndarray:
    """Second-kind (Neumann) spherical Bessel functions y_0 .. y_{l_max}, x > 0.

    Upward recurrence, which is stable for this kind.  Raises OverflowError
    once magnitudes leave the representable range (l far above x).
    """
    if l_max < 0:
        raise ValueError("l_max must be non-negative")
    if x <= 0:
        raise ValueError("argument must be positive")
    s, c = np.sin(x), np.cos(x)
    out = np.empty(l_max + 1)
    out[0] = -c / x
    if l_max >= 1:
        out[1] = -c / (x * x) - s / x
    for l in range(1, l_max):
        out[l + 1] = (2 * l + 1) / x * out[l] - out[l - 1]
        if abs(out[l + 1]) > _OVERFLOW_LIMIT:
            raise OverflowError(
                f"y_{l + 1}({x:g}) exceeds the supported range; "
                "reduce the truncation order or increase the separation"
            )
    return out


def spherical_hankel_paper(l_max: int, x: float) -> np.ndarray:
    """Spherical Hankel sequence h_l(x) = j_l(x) - i*y_l(x).

    This pairs with the e^{-jkR} propagation phase used throughout; note it
    coincides with the usual *second*-kind spherical Hankel function.
    """
    return spherical_bessel_j(l_max, x) - 1j * spherical_neumann_y(l_max, x)
