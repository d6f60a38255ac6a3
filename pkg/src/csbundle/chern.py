"""First Chern number of a line bundle over the unit cell, three ways.

All routines work on the fundamental domain ``[0, 1]^2`` in ``(a, b)``
coordinates and take callbacks:

* a curvature sampler ``(a, b) -> Omega(d/da, d/db)`` (imaginary), and
* a transport oracle ``path -> unit complex``, where a path is an ``(k, 2)``
  array of points joined by straight segments.

Sign convention: ``c_1 = integral Omega / (-2 pi i)``.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

CurvatureSampler = Callable[[float, float], complex]
TransportOracle = Callable[[np.ndarray], complex]

ADMISSIBILITY_MARGIN = 1e-6
INTEGER_TOL = 1e-9


class AdmissibilityError(ArithmeticError):
    """A plaquette phase is too close to the branch cut at +-pi."""


class BranchTrackingError(ArithmeticError):
    pass


class NonIntegralDegree(ArithmeticError):
    pass


@dataclass
class ChernResult:
    method: str
    grid: int
    value: float
    admissible: bool = True
    runtime_ms: float = 0.0

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "grid": self.grid,
            "value": self.value,
            "admissible": self.admissible,
            "runtime_ms": self.runtime_ms,
        }


def _check_orientation(orientation: int) -> None:
    if orientation not in (1, -1):
        raise ValueError("orientation must be +1 or -1")


def curvature_integral(sampler: CurvatureSampler, n: int, orientation: int = 1) -> complex:
    """Midpoint-rule integral of the curvature over the unit cell."""
    _check_orientation(orientation)
    if n < 1:
        raise ValueError("need at least one quadrature cell")
    centres = (np.arange(n) + 0.5) / n
    total = 0j
    for a in centres:
        for b in centres:
            total += sampler(a, b)
    return orientation * total / n**2


def chern_weil(sampler: CurvatureSampler, n: int, orientation: int = 1) -> float:
    if n < 2:
        raise ValueError("chern_weil needs grid >= 2")
    val = curvature_integral(sampler, n, orientation) / (-2j * np.pi)
    return float(val.real)


def plaquette_phases(transport: TransportOracle, n: int, orientation: int = 1) -> np.ndarray:
    """Field-strength phases of the n x n plaquettes.

    Link variables are the inverse transports ``U = exp(+integral omega)``,
    so a plaquette's phase approximates ``Omega * area / i``.
    Entry ``[i, j]`` belongs to the plaquette with lower-left corner
    ``(i/n, j/n)``.
    """
    _check_orientation(orientation)
    h = 1.0 / n
    ux = np.empty((n, n + 1), dtype=complex)  # link (i, j) -> (i+1, j)
    uy = np.empty((n + 1, n), dtype=complex)  # link (i, j) -> (i, j+1)
    for i in range(n):
        for j in range(n + 1):
            ux[i, j] = 1.0 / transport(np.array([[i * h, j * h], [(i + 1) * h, j * h]]))
    for i in range(n + 1):
        for j in range(n):
            uy[i, j] = 1.0 / transport(np.array([[i * h, j * h], [i * h, (j + 1) * h]]))
    loop = ux[:, :-1] * uy[1:, :] / (ux[:, 1:] * uy[:-1, :])
    if orientation == -1:
        loop = 1.0 / loop
    return np.angle(loop)


def lattice_chern(transport: TransportOracle, n: int, orientation: int = 1) -> int:
    """Integer Chern number from plaquette phases."""
    if n < 2:
        raise ValueError("lattice_chern needs grid >= 2")
    phases = plaquette_phases(transport, n, orientation)
    near_cut = np.abs(np.abs(phases) - np.pi) < ADMISSIBILITY_MARGIN
    if np.any(near_cut):
        raise AdmissibilityError(
            f"{int(near_cut.sum())} plaquette phase(s) within {ADMISSIBILITY_MARGIN:g} "
            f"of +-pi at grid {n}; refine the grid"
        )
    # c_1 = integral Omega / (-2 pi i) and Omega ~ i * phase / area
    raw = -phases.sum() / (2 * np.pi)
    k = round(raw)
    if abs(raw - k) > INTEGER_TOL:
        raise AssertionError(f"plaquette sum {raw!r} is not an integer")
    return int(k) + 0


def _segment_phase(transport, p0, p1, depth=0, max_depth=40) -> float:
    """Continuous log-phase of transport along a segment.

    Accepts the principal value only when it is small and consistent with the
    two halves; otherwise bisects.
    """
    if depth > max_depth:
        raise BranchTrackingError(f"could not resolve phase on segment {p0} -> {p1}")
    mid = 0.5 * (p0 + p1)
    whole = np.angle(transport(np.array([p0, p1])))
    left = np.angle(transport(np.array([p0, mid])))
    right = np.angle(transport(np.array([mid, p1])))
    if abs(whole) < np.pi / 2 and abs(left + right - whole) < 1e-9:
        return float(whole)
    return (_segment_phase(transport, p0, mid, depth + 1, max_depth)
            + _segment_phase(transport, mid, p1, depth + 1, max_depth))


def loop_log_holonomy(transport: TransportOracle, corners) -> float:
    """Branch-tracked phase of transport around a closed polygon."""
    pts = np.asarray(corners, dtype=float)
    return sum(_segment_phase(transport, pts[k], pts[k + 1]) for k in range(len(pts) - 1))


def holonomy_degree(transport: TransportOracle, levels: int = 2, orientation: int = 1) -> float:
    """Chern number from tracked log-holonomies of nested sub-loops.

    The cell is split into ``2**levels`` squares per side; each square's
    boundary phase is tracked continuously and the phases are summed. The
    sum of the loop phases equals ``-integral Omega / i``.
    """
    _check_orientation(orientation)
    n = 2**levels
    h = 1.0 / n
    total = 0.0
    for i in range(n):
        for j in range(n):
            a0, b0 = i * h, j * h
            sq = [[a0, b0], [a0 + h, b0], [a0 + h, b0 + h], [a0, b0 + h], [a0, b0]]
            if orientation == -1:
                sq = sq[::-1]
            total += loop_log_holonomy(transport, sq)
    return float(total / (2 * np.pi))


def degree_from_covering(upstairs: int, covering_degree: int) -> int:
    if covering_degree < 1:
        raise ValueError("covering degree must be positive")
    q, r = divmod(int(upstairs), int(covering_degree))
    if r:
        raise NonIntegralDegree(f"{upstairs} is not divisible by {covering_degree}")
    return q


def timed(method: str, grid: int, fn, *args, **kwargs) -> ChernResult:
    t0 = time.perf_counter()
    try:
        value = fn(*args, **kwargs)
        admissible = True
    except AdmissibilityError:
        value, admissible = float("nan"), False
    return ChernResult(method, grid, float(value), admissible,
                       (time.perf_counter() - t0) * 1e3)
