"""The genus-1 prequantum line bundle over the abelian connections.

Coordinates: a point ``(a, b)`` is the flat connection ``A = X (a dx + b dy)``
on the torus with periodic coordinates ``x, y in [0, 2 pi)``. Its holonomies
are ``exp(2 pi a X)`` and ``exp(2 pi b X)``, so the lattice gauge
transformation ``exp((m x + n y) X)`` shifts ``(a, b)`` by the integer vector
``(m, n)``. (The angle parameter on ``[0, 2 pi]`` is ``2 pi`` times these.)

Closed forms used throughout, all checked against quadrature in the tests:

* Chern-Simons over the slab for the linear interpolation:
  ``CS = -2 pi (m b - n a)``
* cocycle: ``Theta((a, b), (m, n)) = exp(-2 pi i (m b - n a))``
* connection: ``omega = -2 pi i (a db - b da)``, curvature ``-4 pi i da ^ db``.
"""
from __future__ import annotations

import cmath
import csv
import math
from dataclasses import dataclass

import numpy as np

from .lie import X

TWO_PI = 2 * np.pi
CURVATURE = -4j * np.pi  # density of the curvature in (a, b) coordinates


@dataclass(frozen=True)
class TorusModuliPoint:
    a: float
    b: float

    def as_array(self) -> np.ndarray:
        return np.array([self.a, self.b], dtype=float)

    def __add__(self, other) -> "TorusModuliPoint":
        return TorusModuliPoint(self.a + other[0], self.b + other[1])

    def __iter__(self):
        return iter((self.a, self.b))

    def __getitem__(self, i):
        return (self.a, self.b)[i]


@dataclass(frozen=True)
class GaugeCharacter:
    """Element of (Z x Z) x| Z_2 acting by ``p -> weyl * p + (m, n)``."""

    m: int
    n: int
    weyl: int = 1

    def __post_init__(self):
        if self.weyl not in (1, -1):
            raise ValueError("weyl flag must be +1 or -1")
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "n", int(self.n))

    def then(self, other: "GaugeCharacter") -> "GaugeCharacter":
        """The element acting as ``self`` followed by ``other``."""
        return GaugeCharacter(
            other.weyl * self.m + other.m,
            other.weyl * self.n + other.n,
            self.weyl * other.weyl,
        )


def gauge_action(p: TorusModuliPoint, c: GaugeCharacter) -> TorusModuliPoint:
    return TorusModuliPoint(c.weyl * p.a + c.m, c.weyl * p.b + c.n)


@dataclass(frozen=True, eq=False)
class CSField:
    """su(2)-valued 1-form on the slab ``[0, 1] x T^2``.

    ``components`` has shape ``(3, Nt, Nx, Ny, 3)``: the first axis selects
    the dt, dx, dy component, the last holds su(2) coefficients. Samples sit
    at ``t = (k + 1/2) / Nt`` and ``x = 2 pi i / Nx``, ``y = 2 pi j / Ny``.
    """

    components: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.components, dtype=float)
        if arr.ndim != 5 or arr.shape[0] != 3 or arr.shape[-1] != 3:
            raise ValueError("components must have shape (3, Nt, Nx, Ny, 3)")
        object.__setattr__(self, "components", arr)

    @property
    def grid(self) -> tuple[int, int, int]:
        return self.components.shape[1:4]

    @staticmethod
    def coordinates(grid):
        nt, nx, ny = grid
        t = (np.arange(nt) + 0.5) / nt
        x = TWO_PI * np.arange(nx) / nx
        y = TWO_PI * np.arange(ny) / ny
        return np.meshgrid(t, x, y, indexing="ij")

    @classmethod
    def from_function(cls, fn, grid) -> "CSField":
        """``fn(t, x, y) -> (At, Ax, Ay)`` each of shape ``grid + (3,)``."""
        t, x, y = cls.coordinates(grid)
        return cls(np.stack([np.broadcast_to(c, tuple(grid) + (3,)) for c in fn(t, x, y)]))


def interpolating_field(p: TorusModuliPoint, c: GaugeCharacter, grid) -> CSField:
    """``A + t g^-1 dg`` for ``g = exp((m x + n y) X)``."""
    if c.weyl != 1:
        raise ValueError("only the lattice part (weyl = +1) has a slab interpolation here")
    xdir = X.v

    def fn(t, x, y):
        zero = np.zeros(t.shape + (3,))
        ax = (p.a + t * c.m)[..., None] * xdir
        ay = (p.b + t * c.n)[..., None] * xdir
        return zero, ax, ay

    return CSField.from_function(fn, grid)


MIN_GRID = 8


def cs_density(field: CSField) -> np.ndarray:
    """Coefficient of dt^dx^dy in ``Tr(A dA + 2/3 A^3)`` at every sample."""
    comps = field.components
    nt, nx, ny = field.grid
    dt, dx, dy = 1.0 / nt, TWO_PI / nx, TWO_PI / ny

    def deriv(f, axis):
        if axis == 0:
            return np.gradient(f, dt, axis=0, edge_order=1)
        h = dx if axis == 1 else dy
        return (np.roll(f, -1, axis=axis) - np.roll(f, 1, axis=axis)) / (2 * h)

    # Tr(xi eta) = -2 v.w ; Tr(A^3) = 3 Tr(A_t [A_x, A_y]) = 12 A_t.(A_x x A_y)
    density = np.zeros((nt, nx, ny))
    for mu, nu, rho, sgn in ((0, 1, 2, 1), (1, 2, 0, 1), (2, 0, 1, 1),
                             (0, 2, 1, -1), (2, 1, 0, -1), (1, 0, 2, -1)):
        density += sgn * -2.0 * np.einsum("...i,...i->...", comps[mu], deriv(comps[rho], nu))
    density += (2.0 / 3.0) * 12.0 * np.einsum(
        "...i,...i->...", comps[0], np.cross(comps[1], comps[2])
    )
    return density


def cs_functional(field: CSField) -> float:
    """``(1/4 pi) * integral over the slab of Tr(A dA + 2/3 A^3)``.

    Midpoint rule in t, periodic rectangle rule in x and y, centred
    differences for dA (one-sided at the t-boundaries).
    """
    nt, nx, ny = field.grid
    if min(nt, nx, ny) < MIN_GRID:
        raise ValueError(f"grid {field.grid} too small; need every size >= {MIN_GRID}")
    vol = (1.0 / nt) * (TWO_PI / nx) * (TWO_PI / ny)
    return float(cs_density(field).sum() * vol / (4 * np.pi))


def cocycle_numeric(p: TorusModuliPoint, c: GaugeCharacter, grid=(32, 8, 8)) -> complex:
    """``exp(i (CS(A^g) - CS(A)))`` with the difference taken over the slab."""
    if c.weyl != 1:
        raise ValueError("cocycle is only defined here on the lattice part")
    return complex(np.exp(1j * cs_functional(interpolating_field(p, c, grid))))


def cocycle_exact(p: TorusModuliPoint, c: GaugeCharacter) -> complex:
    if c.weyl != 1:
        raise ValueError("cocycle is only defined here on the lattice part")
    # reduce the exponent mod 1 before scaling to keep the phase exact
    phase = np.fmod(c.m * p.b - c.n * p.a, 1.0)
    return complex(np.exp(-2j * np.pi * phase))


def connection_form(p: TorusModuliPoint) -> tuple[complex, complex]:
    """Components ``(omega_a, omega_b)`` of ``-2 pi i (a db - b da)``."""
    return 2j * np.pi * p.b, -2j * np.pi * p.a


def curvature_density(p=None) -> complex:
    return CURVATURE


@dataclass(frozen=True, eq=False)
class LinePath:
    points: np.ndarray
    orientation: int = 1

    def __post_init__(self):
        pts = np.array(self.points, dtype=float, ndmin=2)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] == 0:
            raise ValueError("path needs at least one (a, b) point")
        rows = pts.tolist()
        if any(p == q for p, q in zip(rows, rows[1:])):
            raise ValueError("consecutive path points must be distinct")
        if self.orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")
        object.__setattr__(self, "points", pts)

    def oriented_points(self) -> np.ndarray:
        return self.points if self.orientation == 1 else self.points[::-1]

    @classmethod
    def rectangle(cls, a0, b0, a1, b1, orientation=1) -> "LinePath":
        """Counterclockwise boundary of ``[a0, a1] x [b0, b1]``."""
        return cls([[a0, b0], [a1, b0], [a1, b1], [a0, b1], [a0, b0]], orientation)


def line_integral(points) -> complex:
    """Exact integral of omega along a polyline.

    On a straight segment ``a db - b da`` integrates to ``a0 b1 - b0 a1``.
    """
    # paths are short; plain floats beat numpy call overhead here
    pts = np.asarray(points, dtype=float).tolist()
    cross = math.fsum(a0 * b1 - b0 * a1 for (a0, b0), (a1, b1) in zip(pts, pts[1:]))
    return complex(-2j * np.pi * cross)


def parallel_transport(path) -> complex:
    """``exp(-integral omega)`` along the path."""
    if not isinstance(path, LinePath):
        path = LinePath(path)
    return cmath.exp(-line_integral(path.oriented_points()))


def _translate(points: np.ndarray, c: GaugeCharacter) -> np.ndarray:
    return c.weyl * points + np.array([c.m, c.n], dtype=float)


def equivariance_check(p: TorusModuliPoint, c: GaugeCharacter, path) -> float:
    """Defect of the compatibility between transport and the cocycle.

    For lattice elements the identity ``omega(q + c) = omega(q) + dlog Theta``
    gives ``T(c.path) Theta(end) = Theta(start) T(path)``. For the Weyl part
    (no cocycle formula is used) the check is ``T(w.path) = T(path)``.
    The path is taken relative to ``p``: its points are offsets from p.
    """
    if not isinstance(path, LinePath):
        path = LinePath(path)
    pts = path.oriented_points() + p.as_array()
    # moved copies are integrated directly: roundoff may merge their points
    t_path = cmath.exp(-line_integral(pts))
    # omega is invariant under the reflection, so reflect first, then shift
    reflected = c.weyl * pts
    t_moved = cmath.exp(-line_integral(_translate(pts, c)))
    shift = GaugeCharacter(c.m, c.n)
    start = TorusModuliPoint(*reflected[0])
    end = TorusModuliPoint(*reflected[-1])
    return abs(t_moved * cocycle_exact(end, shift) - cocycle_exact(start, shift) * t_path)


def save_csfield(path, field: CSField) -> None:
    """CSV dump, t-major then x then y; one row per sample."""
    nt, nx, ny = field.grid
    comps = field.components
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["it", "ix", "iy"] + [f"A{c}_{k}" for c in "txy" for k in range(3)])
        for it in range(nt):
            for ix in range(nx):
                for iy in range(ny):
                    vals = comps[:, it, ix, iy, :].reshape(-1)
                    w.writerow([it, ix, iy] + [repr(float(v)) for v in vals])


def load_csfield(path) -> CSField:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    body = np.array(rows[1:], dtype=float)
    if body.size == 0:
        raise ValueError(f"{path}: empty field dump")
    idx = body[:, :3].astype(int)
    nt, nx, ny = idx.max(axis=0) + 1
    if body.shape[0] != nt * nx * ny:
        raise ValueError(f"{path}: expected {nt * nx * ny} rows, found {body.shape[0]}")
    comps = np.zeros((3, nt, nx, ny, 3))
    comps[:, idx[:, 0], idx[:, 1], idx[:, 2], :] = body[:, 3:].reshape(-1, 3, 3).transpose(1, 0, 2)
    return CSField(comps)
