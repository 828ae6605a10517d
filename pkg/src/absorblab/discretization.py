"""Spatial meshes, the discrete Laplacian, quadrature, and test bumps.

Two mesh geometries: a symmetric interval [-L, L] and the radial reduction
of a ball of radius R in dimension N (nodes on [0, R], integrals weighted
by the sphere area omega * r^(N-1)).  All grids are uniform; the Laplacian
is the second-order central stencil, with ghost nodes supplied by the
boundary condition (mirror reflection for zero-flux, zero ghost value for
a homogeneous Dirichlet wall).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "DomainKind",
    "BoundaryCondition",
    "SpatialDomain",
    "Grid",
    "Field",
    "build_grid",
    "laplacian_apply",
    "integrate_field",
    "bump_function",
    "unit_sphere_area",
    "field_to_csv",
]


class DomainKind(Enum):
    INTERVAL = "interval"
    RADIAL_BALL = "radial_ball"


class BoundaryCondition(Enum):
    DIRICHLET_ZERO = "dirichlet_zero"
    NEUMANN_ZERO = "neumann_zero"


@dataclass(frozen=True)
class SpatialDomain:
    """Interval of half-length `extent`, or radial ball of radius `extent`."""

    kind: DomainKind
    extent: float
    dim_n: int = 1

    def __post_init__(self):
        if self.extent <= 0:
            raise ValueError(f"extent must be positive, got {self.extent}")
        if self.dim_n < 1:
            raise ValueError(f"dimension must be >= 1, got {self.dim_n}")
        if self.kind is DomainKind.INTERVAL and self.dim_n != 1:
            raise ValueError("interval domains are one-dimensional")


@dataclass(frozen=True, eq=False)
class Grid:
    domain: SpatialDomain
    nodes: int
    h: float
    coords: np.ndarray

    def compatible(self, other: "Grid") -> bool:
        return (
            self.domain == other.domain
            and self.nodes == other.nodes
        )


@dataclass(frozen=True, eq=False)
class Field:
    """Scalar sample per grid node.  Treated as immutable once built."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.grid.nodes,):
            raise ValueError(
                f"field length {values.shape} does not match grid with {self.grid.nodes} nodes"
            )
        object.__setattr__(self, "values", values)


def build_grid(domain: SpatialDomain, nodes: int) -> Grid:
    """Uniform mesh over the domain; radial meshes start at r = 0."""
    if nodes < 3:
        raise ValueError(f"need at least 3 nodes, got {nodes}")
    if domain.kind is DomainKind.INTERVAL:
        coords = np.linspace(-domain.extent, domain.extent, nodes)
        h = 2.0 * domain.extent / (nodes - 1)
    else:
        coords = np.linspace(0.0, domain.extent, nodes)
        h = domain.extent / (nodes - 1)
    coords.setflags(write=False)
    return Grid(domain=domain, nodes=nodes, h=h, coords=coords)


def unit_sphere_area(dim_n: int) -> float:
    """Surface area of the unit sphere in R^N (2 for N=1, 2*pi, 4*pi, ...)."""
    return 2.0 * math.pi ** (dim_n / 2.0) / math.gamma(dim_n / 2.0)


def _quadrature_weights(grid: Grid) -> np.ndarray:
    w = np.full(grid.nodes, grid.h)
    w[0] *= 0.5
    w[-1] *= 0.5
    if grid.domain.kind is DomainKind.RADIAL_BALL:
        n = grid.domain.dim_n
        w = w * unit_sphere_area(n) * grid.coords ** (n - 1)
    return w


def laplacian_apply(field: Field, bc: BoundaryCondition) -> Field:
    """Discrete Laplacian of a field under the given boundary condition.

    Interval: (w[i-1] - 2 w[i] + w[i+1]) / h^2, exact on quadratics.
    Radial: w'' + (N-1)/r * w' with the regularized origin stencil
    2N (w[1] - w[0]) / h^2.  Ghost values: mirror image for zero-flux,
    0 for the Dirichlet wall.
    """
    grid = field.grid
    w = field.values
    h = grid.h
    out = np.empty_like(w)
    out[1:-1] = (w[:-2] - 2.0 * w[1:-1] + w[2:]) / h**2

    if grid.domain.kind is DomainKind.INTERVAL:
        if bc is BoundaryCondition.NEUMANN_ZERO:
            out[0] = 2.0 * (w[1] - w[0]) / h**2
            out[-1] = 2.0 * (w[-2] - w[-1]) / h**2
        else:
            out[0] = (w[1] - 2.0 * w[0]) / h**2
            out[-1] = (w[-2] - 2.0 * w[-1]) / h**2
        return Field(grid, out)

    n = grid.domain.dim_n
    r = grid.coords
    out[1:-1] += (n - 1) / r[1:-1] * (w[2:] - w[:-2]) / (2.0 * h)
    out[0] = 2.0 * n * (w[1] - w[0]) / h**2
    if bc is BoundaryCondition.NEUMANN_ZERO:
        out[-1] = 2.0 * (w[-2] - w[-1]) / h**2
    else:
        out[-1] = (w[-2] - 2.0 * w[-1]) / h**2 + (n - 1) / r[-1] * (0.0 - w[-2]) / (2.0 * h)
    return Field(grid, out)


def integrate_field(field: Field, weight: Field | None = None) -> float:
    """Trapezoidal integral of field (optionally times weight) over the domain.

    Radial domains carry the surface-measure factor omega_{N-1} r^(N-1), so
    the result is the integral over the full N-dimensional ball.
    """
    values = field.values
    if weight is not None:
        if not field.grid.compatible(weight.grid):
            raise ValueError("field and weight live on different grids")
        values = values * weight.values
    return float(_quadrature_weights(field.grid) @ values)


def bump_function(grid: Grid, center: float, width: float) -> Field:
    """Smooth compactly supported bump, normalized to unit integral.

    Profile exp(1 - 1/(1 - s^2)) with s = (x - center)/width, identically
    zero for |s| >= 1.  The support [center - width, center + width] must
    lie inside the domain; on radial grids a bump centered at r = 0 is
    allowed (its support is the ball of radius `width`).
    """
    if width <= 0:
        raise ValueError(f"width must be positive, got {width}")
    domain = grid.domain
    if domain.kind is DomainKind.INTERVAL:
        inside = -domain.extent <= center - width and center + width <= domain.extent
    else:
        inside = (center == 0.0 or center - width >= 0.0) and center + width <= domain.extent
    if not inside:
        raise ValueError(
            f"bump support [{center - width}, {center + width}] exceeds the domain"
        )
    s = (grid.coords - center) / width
    values = np.zeros(grid.nodes)
    core = np.abs(s) < 1.0
    values[core] = np.exp(1.0 - 1.0 / (1.0 - s[core] ** 2))
    raw = Field(grid, values)
    mass = integrate_field(raw)
    if mass <= 0:
        raise ValueError("bump support does not contain any grid node")
    return Field(grid, values / mass)


def field_to_csv(field: Field, path) -> None:
    """Write (coordinate, value) rows with full round-trip precision."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("coordinate,value\n")
        for x, v in zip(field.grid.coords, field.values):
            fh.write(f"{float(x)!r},{float(v)!r}\n")
