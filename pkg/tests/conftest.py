import time

import numpy as np
import pytest

from emlink import PRESETS, solve_modes


def _run_preset(name):
    cfg = PRESETS[name]
    geometry = cfg.link_geometry()
    start = time.monotonic()
    result = solve_modes(
        geometry,
        theta_e=np.radians(cfg.theta_e_deg),
        L=cfg.truncation(),
        t=cfg.basis_order,
        n_surface=cfg.surface_points,
        windowed=cfg.windowed,
        power_w=cfg.power_w,
        keep=cfg.modes_keep or None,
        entry_budget=cfg.entry_budget,
    )
    return result, time.monotonic() - start, cfg


@pytest.fixture(scope="session")
def paper_run():
    """Full paper-preset pipeline: (ModesResult, wall seconds, config)."""
    return _run_preset("paper")


@pytest.fixture(scope="session")
def ci_run():
    """Reduced-geometry pipeline: (ModesResult, wall seconds, config)."""
    return _run_preset("ci")
