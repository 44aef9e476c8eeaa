"""Free-space Green's functions and the windowed plane-wave translator.

The scalar Green's function g(r, s) = e^{-jkR}/(4 pi R) is expanded over a
sphere (or cap) of plane-wave directions as

    g(r, s) = (-jk / 16 pi^2) * sum_khat w * e^{-jk khat.r_qs} * alpha(khat.rhat_pq)
              * e^{-jk khat.r_rp},

with r_qs = q - s, r_rp = r - p for group centers q (source side) and p
(field side).  The translator alpha is a truncated spherical-Hankel/Legendre
series, optionally tapered with a Tukey window to suppress its wide-angle
sidelobes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import DirectionGrid, LinkGeometry, cap_direction_grid, default_cap_densities, truncation_order
from .specfun import legendre_sequence, spherical_hankel_paper

__all__ = [
    "TranslatorTable",
    "sgf_exact",
    "dgf_full",
    "dgf_transverse",
    "tukey_window",
    "translator_table",
    "sgf_planewave",
    "expansion_error_sweep",
]


def sgf_exact(r, s, k: float) -> complex:
    """Scalar Green's function e^{-jkR}/(4 pi R), R = |r - s|."""
    R = float(np.linalg.norm(np.asarray(r, float) - np.asarray(s, float)))
    if R == 0.0:
        raise ValueError("source and field points coincide")
    return np.exp(-1j * k * R) / (4.0 * np.pi * R)


def dgf_full(r, s, k: float) -> np.ndarray:
    """Full dyadic Green's function including the reactive 1/kR and 1/(kR)^2 terms.

    Kept as a validation oracle; the channel kernel itself is scalar.
    """
    r = np.asarray(r, float)
    s = np.asarray(s, float)
    Rv = r - s
    R = float(np.linalg.norm(Rv))
    if R == 0.0:
        raise ValueError("source and field points coincide")
    rr = np.outer(Rv, Rv) / (R * R)
    eye = np.eye(3)
    kR = k * R
    bracket = (
        (eye - rr)
        - (1j / kR) * (eye - 3.0 * rr)
        - (1.0 / (kR * kR)) * (eye - 3.0 * rr)
    )
    return bracket * sgf_exact(r, s, k)


def dgf_transverse(r, s, k: float) -> np.ndarray:
    """Far-field (transverse) dyadic: (I - khat khat) g(r, s) with khat = Rhat."""
    r = np.asarray(r, float)
    s = np.asarray(s, float)
    Rv = r - s
    R = float(np.linalg.norm(Rv))
    if R == 0.0:
        raise ValueError("source and field points coincide")
    rr = np.outer(Rv, Rv) / (R * R)
    return (np.eye(3) - rr) * sgf_exact(r, s, k)


def tukey_window(L: int) -> np.ndarray:
    """Tukey taper w_0 .. w_L: flat up to L/2, raised cosine on (L/2, L]."""
    if L < 2:
        raise ValueError("window needs L >= 2")
    l = np.arange(L + 1)
    w = np.ones(L + 1)
    half = L / 2.0
    taper = l > half
    w[taper] = 0.5 * (1.0 + np.cos(np.pi * (l[taper] - half) / half))
    return w


@dataclass(frozen=True)
class TranslatorTable:
    """Translator values alpha(khat . rhat_pq), one per direction sample."""

    values: np.ndarray   # (n,) complex
    L: int
    windowed: bool
    k_rpq: float         # series argument k * |r_pq|
    axis: np.ndarray     # rhat_pq


def translator_table(
    grid: DirectionGrid, k: float, r_pq, L: int, windowed: bool
) -> TranslatorTable:
    """Tabulate alpha = sum_l (-j)^l (2l+1) h_l(k r_pq) P_l(khat . rhat_pq) [w_l].

    h_l is the j - i*y Hankel convention; OverflowError propagates from the
    Neumann recurrence when L is pushed far beyond k*r_pq.
    """
    r_pq = np.asarray(r_pq, dtype=float)
    rpq = float(np.linalg.norm(r_pq))
    if rpq <= 0:
        raise ValueError("translation vector must be non-zero")
    if L < 0:
        raise ValueError("L must be non-negative")
    axis = r_pq / rpq
    ls = np.arange(L + 1)
    coef = (-1j) ** ls * (2 * ls + 1) * spherical_hankel_paper(L, k * rpq)
    if windowed and L >= 2:
        coef = coef * tukey_window(L)
    cosg = np.clip(grid.directions @ axis, -1.0, 1.0)
    values = coef @ legendre_sequence(L, cosg)
    return TranslatorTable(values, int(L), bool(windowed), k * rpq, axis)


def _planewave_sum(r, s, geometry: LinkGeometry, grid: DirectionGrid, table: TranslatorTable) -> complex:
    if len(table.values) != len(grid.weights):
        raise ValueError("translator table does not match the direction grid")
    r_qs = geometry.transmitter.center - np.asarray(s, float)
    r_rp = np.asarray(r, float) - geometry.receiver.center
    phase = np.exp(-1j * geometry.k * (grid.directions @ (r_qs + r_rp)))
    return complex(np.sum(grid.weights * phase * table.values))


def sgf_planewave(r, s, geometry: LinkGeometry, grid: DirectionGrid, table: TranslatorTable) -> complex:
    """Scalar Green's function reconstructed from the plane-wave expansion."""
    return (-1j * geometry.k / (16.0 * np.pi**2)) * _planewave_sum(r, s, geometry, grid, table)


def expansion_error_sweep(
    geometry: LinkGeometry,
    s,
    r,
    theta_list,
    windowed: bool,
    L: int | None = None,
    n_theta: int | None = None,
    n_phi: int | None = None,
) -> list[tuple[float, float]]:
    """Relative reconstruction error |G_a - G| / |G| versus cap half-angle.

    G_a integrates the expansion over a cap of half-angle theta_e around the
    link axis; G is the exact scalar Green's function.  L defaults to the
    truncation rule applied to the largest aperture side.
    """
    if L is None:
        D = max(
            geometry.transmitter.side_x,
            geometry.transmitter.side_y,
            geometry.receiver.side_x,
            geometry.receiver.side_y,
        )
        L = truncation_order(geometry.k, D)
    nt_def, np_def = default_cap_densities(L, np.pi)
    nt = n_theta if n_theta is not None else nt_def
    nph = n_phi if n_phi is not None else np_def
    exact = sgf_exact(r, s, geometry.k)
    out = []
    for theta_e in theta_list:
        grid = cap_direction_grid(geometry.axis, float(theta_e), nt, nph)
        table = translator_table(grid, geometry.k, geometry.r_pq, L, windowed)
        approx = sgf_planewave(r, s, geometry, grid, table)
        out.append((float(theta_e), abs(approx - exact) / abs(exact)))
    return out
