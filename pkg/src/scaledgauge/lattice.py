"""Finite spacetime lattice: sites, steps, paths, plaquettes.

Geometry is read-only after construction; every function here is pure.
Sites are integer coordinate tuples; physical positions are coordinates
times the lattice spacing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import OutOfLatticeError

MAX_SITES = 1_000_000

PERIODIC = "periodic"
CLAMPED = "clamped"

Site = tuple[int, ...]


@dataclass(frozen=True)
class LatticeSpec:
    """Uniform lattice with 1 to 4 dimensions.

    ``extent`` gives the number of sites per dimension, ``spacing`` the
    physical distance between neighbors.  The periodic boundary wraps
    coordinates; the clamped boundary raises when a step leaves range.
    """

    extent: tuple[int, ...]
    spacing: float
    boundary: str = PERIODIC
    max_sites: int = MAX_SITES

    def __post_init__(self):
        object.__setattr__(self, "extent", tuple(int(n) for n in self.extent))
        if not 1 <= len(self.extent) <= 4:
            raise ValueError(f"dims must be 1..4, got {len(self.extent)}")
        if any(n < 2 for n in self.extent):
            raise ValueError(f"extent per dim must be >= 2, got {self.extent}")
        if not (self.spacing > 0 and np.isfinite(self.spacing)):
            raise ValueError(f"spacing must be finite positive, got {self.spacing}")
        if self.boundary not in (PERIODIC, CLAMPED):
            raise ValueError(f"unknown boundary {self.boundary!r}")
        if self.n_sites > self.max_sites:
            raise ValueError(f"{self.n_sites} sites exceeds cap {self.max_sites}")

    @property
    def dims(self) -> int:
        return len(self.extent)

    @property
    def n_sites(self) -> int:
        n = 1
        for e in self.extent:
            n *= e
        return n

    def sites(self) -> Iterator[Site]:
        return itertools.product(*(range(n) for n in self.extent))

    def position(self, site: Site) -> np.ndarray:
        """Physical coordinates of a site."""
        return np.asarray(site, dtype=float) * self.spacing

    def contains(self, site: Site) -> bool:
        return all(0 <= c < n for c, n in zip(site, self.extent))


@dataclass(frozen=True)
class Step:
    """One lattice hop: axis index and orientation +1 or -1."""

    axis: int
    orientation: int

    def __post_init__(self):
        if self.orientation not in (+1, -1):
            raise ValueError(f"orientation must be +1 or -1, got {self.orientation}")
        if self.axis < 0:
            raise ValueError(f"axis must be >= 0, got {self.axis}")

    def reversed(self) -> "Step":
        return Step(self.axis, -self.orientation)


@dataclass(frozen=True)
class LatticePath:
    """A walk on the lattice: start site plus a sequence of steps."""

    start: Site
    steps: tuple[Step, ...]

    def __post_init__(self):
        object.__setattr__(self, "start", tuple(int(c) for c in self.start))
        object.__setattr__(self, "steps", tuple(self.steps))

    def reversed_from(self, endpoint: Site) -> "LatticePath":
        return LatticePath(endpoint, tuple(s.reversed() for s in reversed(self.steps)))


@dataclass(frozen=True)
class Plaquette:
    """Elementary square: corner site plus an ordered axis pair mu < nu."""

    corner: Site
    axes: tuple[int, int]

    def __post_init__(self):
        mu, nu = self.axes
        if not mu < nu:
            raise ValueError(f"axes must satisfy mu < nu, got {self.axes}")


def neighbor(site: Site, step: Step, spec: LatticeSpec) -> Site:
    """Site one hop away, with the boundary rule applied."""
    if step.axis >= spec.dims:
        raise ValueError(f"axis {step.axis} invalid for a {spec.dims}-d lattice")
    coords = list(site)
    coords[step.axis] += step.orientation
    n = spec.extent[step.axis]
    if spec.boundary == PERIODIC:
        coords[step.axis] %= n
    elif not 0 <= coords[step.axis] < n:
        raise OutOfLatticeError(f"step {step} from {site} leaves the lattice")
    return tuple(coords)


def path_endpoint(path: LatticePath, spec: LatticeSpec) -> Site:
    """Fold :func:`neighbor` over the path's steps."""
    site = path.start
    for step in path.steps:
        site = neighbor(site, step, spec)
    return site


def enumerate_plaquettes(spec: LatticeSpec) -> list[Plaquette]:
    """Every elementary square, each exactly once.

    Under the periodic boundary each site anchors one square per axis
    pair; under the clamped boundary only squares with all four corners
    in range are produced.  Lattices with fewer than two dimensions have
    no plaquettes.
    """
    if spec.dims < 2:
        return []
    out = []
    for site in spec.sites():
        for mu, nu in itertools.combinations(range(spec.dims), 2):
            if spec.boundary == CLAMPED and (
                site[mu] + 1 >= spec.extent[mu] or site[nu] + 1 >= spec.extent[nu]
            ):
                continue
            out.append(Plaquette(site, (mu, nu)))
    return out


def minimal_displacement(a: Site, b: Site, spec: LatticeSpec) -> tuple[int, ...]:
    """Per-axis signed displacement from a to b.

    Periodic boundaries use the minimal image, ties broken toward the
    positive orientation; clamped boundaries use the plain difference.
    """
    out = []
    for ca, cb, n in zip(a, b, spec.extent):
        d = cb - ca
        if spec.boundary == PERIODIC:
            d %= n
            if d > n - d:  # strictly shorter the other way
                d -= n
        out.append(d)
    return tuple(out)


def axis_ordered_path(a: Site, b: Site, spec: LatticeSpec) -> LatticePath:
    """Deterministic staircase from a to b: axis 0 fully, then axis 1, ...

    This is the canonical path choice used to anchor transported
    integrals; :func:`path_endpoint` of the result is always b.
    """
    return _staircase(a, b, spec, range(spec.dims))


def reversed_axis_path(a: Site, b: Site, spec: LatticeSpec) -> LatticePath:
    """Staircase from a to b stepping the highest axis first.

    A second deterministic path rule; together with
    :func:`axis_ordered_path` it exhibits path dependence for
    nonintegrable gauge fields.
    """
    return _staircase(a, b, spec, range(spec.dims - 1, -1, -1))


def _staircase(a: Site, b: Site, spec: LatticeSpec, axis_order) -> LatticePath:
    disp = minimal_displacement(a, b, spec)
    steps = []
    for axis in axis_order:
        d = disp[axis]
        orient = +1 if d >= 0 else -1
        steps.extend(Step(axis, orient) for _ in range(abs(d)))
    return LatticePath(tuple(a), tuple(steps))
