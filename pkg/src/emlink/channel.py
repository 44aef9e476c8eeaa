"""Scalar channel kernel between apertures and the three-stage propagator.

The single-polarization kernel is

    H(r, s) = (-k omega mu / 16 pi^2) * sum_khat w * e^{-jk khat.r_qs}
              * alpha(khat) * e^{-jk khat.r_rp}
            = -j omega mu * G_planewave(r, s),

with omega*mu = k * eta for unit wavelength.  Dense kernel matrices are built
through the aggregation/translation/disaggregation factorization, which is
algebraically identical to entrywise evaluation but runs as three matrix
products.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BudgetError
from .geometry import DirectionGrid, LinkGeometry, SurfaceGrid
from .greens import TranslatorTable

__all__ = [
    "FREE_SPACE_IMPEDANCE",
    "KernelMatrix",
    "kernel_h_point",
    "kernel_matrix",
    "propagate_current",
    "reference_field",
]

FREE_SPACE_IMPEDANCE = 376.730  # ohms

DEFAULT_ENTRY_BUDGET = 10**7


def _omega_mu(k: float) -> float:
    # with lambda = 1 units, omega*mu0 = k * eta
    return k * FREE_SPACE_IMPEDANCE


def kernel_h_point(r, s, geometry: LinkGeometry, grid: DirectionGrid, table: TranslatorTable) -> complex:
    """Channel kernel H(r, s) at a single point pair."""
    if len(table.values) != len(grid.weights):
        raise ValueError("translator table does not match the direction grid")
    k = geometry.k
    r_qs = geometry.transmitter.center - np.asarray(s, float)
    r_rp = np.asarray(r, float) - geometry.receiver.center
    phase = np.exp(-1j * k * (grid.directions @ (r_qs + r_rp)))
    acc = np.sum(grid.weights * phase * table.values)
    return complex(-k * _omega_mu(k) / (16.0 * np.pi**2) * acc)


@dataclass(frozen=True)
class KernelMatrix:
    """Dense H sampled on (receiver points) x (source points)."""

    entries: np.ndarray       # (n_rcv, n_src) complex
    src_grid: SurfaceGrid
    rcv_grid: SurfaceGrid
    direction_grid: DirectionGrid
    table: TranslatorTable

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape


def _aggregation(points: np.ndarray, center: np.ndarray, grid: DirectionGrid, k: float) -> np.ndarray:
    """Plane-wave factors e^{-jk khat.(center - point)}, shape (n_dir, n_pts)."""
    return np.exp(-1j * k * (grid.directions @ (center[:, None] - points.T)))


def _disaggregation(points: np.ndarray, center: np.ndarray, grid: DirectionGrid, k: float) -> np.ndarray:
    """Plane-wave factors e^{-jk khat.(point - center)}, shape (n_pts, n_dir)."""
    return np.exp(-1j * k * ((points - center) @ grid.directions.T))


def _check_budget(*sizes: int, budget: int) -> None:
    worst = max(sizes)
    if worst > budget:
        raise BudgetError(
            f"assembly needs {worst} complex entries, above the budget {budget}; "
            "reduce grid sizes or raise entry_budget"
        )


def kernel_matrix(
    src: SurfaceGrid,
    rcv: SurfaceGrid,
    geometry: LinkGeometry,
    grid: DirectionGrid,
    table: TranslatorTable,
    entry_budget: int = DEFAULT_ENTRY_BUDGET,
) -> KernelMatrix:
    """Assemble H over the two surface grids via the diagonal factorization."""
    if len(table.values) != len(grid.weights):
        raise ValueError("translator table does not match the direction grid")
    n_dir = len(grid.weights)
    _check_budget(
        len(rcv.points) * len(src.points),
        n_dir * len(src.points),
        n_dir * len(rcv.points),
        budget=entry_budget,
    )
    k = geometry.k
    A = _aggregation(src.points, geometry.transmitter.center, grid, k)
    B = _disaggregation(rcv.points, geometry.receiver.center, grid, k)
    scale = -k * _omega_mu(k) / (16.0 * np.pi**2)
    entries = scale * ((B * (grid.weights * table.values)) @ A)
    return KernelMatrix(entries, src, rcv, grid, table)


def propagate_current(
    current: np.ndarray,
    src: SurfaceGrid,
    rcv: SurfaceGrid,
    geometry: LinkGeometry,
    grid: DirectionGrid,
    table: TranslatorTable,
) -> np.ndarray:
    """Radiate a sampled current through aggregate / translate / disaggregate.

    Returns the field at the receiver grid points; equals
    kernel_matrix @ (weights * current) up to roundoff.
    """
    current = np.asarray(current)
    if current.shape != (len(src.points),):
        raise ValueError("current must be sampled on the source grid")
    if len(table.values) != len(grid.weights):
        raise ValueError("translator table does not match the direction grid")
    k = geometry.k
    far = _aggregation(src.points, geometry.transmitter.center, grid, k) @ (src.weights * current)
    far *= table.values
    B = _disaggregation(rcv.points, geometry.receiver.center, grid, k)
    scale = -k * _omega_mu(k) / (16.0 * np.pi**2)
    return scale * (B @ (grid.weights * far))


def reference_field(current: np.ndarray, src: SurfaceGrid, rcv: SurfaceGrid, k: float) -> np.ndarray:
    """Direct-quadrature radiation E(r) = -j omega mu * sum_s w g(r, s) J(s).

    Independent of the plane-wave machinery; the validation oracle for
    propagate_current.
    """
    current = np.asarray(current)
    if current.shape != (len(src.points),):
        raise ValueError("current must be sampled on the source grid")
    diff = rcv.points[:, None, :] - src.points[None, :, :]
    R = np.linalg.norm(diff, axis=2)
    g = np.exp(-1j * k * R) / (4.0 * np.pi * R)
    return -1j * _omega_mu(k) * (g @ (src.weights * current))
