"""Experiment configuration: JSON schema, validation, defaults.

A configuration file is a single JSON object.  Every key is optional
except that the file must parse to an object; unknown keys are
rejected so typos fail loudly, and all values are validated before any
experiment runs.  See the README for the documented schema.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .gauge import FIELD_KINDS
from .lattice import CLAMPED, PERIODIC, LatticeSpec

DEFAULT_SCALE_GRID = (1e-3, 1e-1, 1.0, 10.0, 1e3)
DEFAULT_DELTA_SERIES = (0.1, 0.05, 0.025, 0.0125)
DEFAULT_BOX_LENGTH = 1.6

DEFAULT_TOLERANCES = {
    "axioms": 1e-9,
    "dual_form": 1e-12,
    "loop_identity": 1e-12,
    "path_spread": 1e-12,
    "nonintegrable_min": 1e-3,
    "integrability": 1e-10,
    "link_order_slope": 1.9,
    "quadrature_slope": 3.5,
    "derivative_slope": 0.9,
    "covariance_slope": 0.9,
    "exp_covariance": 1e-12,
    "field_strength": 1e-12,
    "hilbert": 1e-12,
    "su2_unitarity": 1e-12,
    "su2_series": 1e-10,
    "su2_identity_slope": 0.85,
    "global_rotation_norm": 1e-12,
    "anchor_covariance": 1e-10,
}

_TOP_KEYS = {
    "seed", "lattice", "field", "matter", "scale_grid", "samples", "hilbert",
    "couplings", "delta_series", "box_length", "expect_nonintegrable",
    "anchors", "workers", "output_dir", "tolerances",
}

MATTER_KINDS = ("plane-wave", "constant", "gaussian-bump", "coordinate")


@dataclass(frozen=True)
class Couplings:
    g_r: float = 0.8
    g_i: float = 1.1
    g: float = 0.9
    mass: float = 0.5
    a_mass: float = 0.3


@dataclass(frozen=True)
class ExperimentConfig:
    seed: int = 20240901
    lattice: LatticeSpec = field(
        default_factory=lambda: LatticeSpec((6, 6), 0.25))
    field_kind: str = "gradient-of-f"
    field_params: dict = field(default_factory=lambda: {"amplitude": 0.5})
    matter_kind: str = "plane-wave"
    matter_params: dict = field(default_factory=dict)
    scale_grid: tuple[float, ...] = DEFAULT_SCALE_GRID
    samples: int = 1000
    hilbert_dimension: int = 2
    hilbert_samples: int = 1000
    couplings: Couplings = field(default_factory=Couplings)
    delta_series: tuple[float, ...] = DEFAULT_DELTA_SERIES
    box_length: float = DEFAULT_BOX_LENGTH
    expect_nonintegrable: bool = False
    anchors: int = 5
    workers: int = 1
    output_dir: str = "reports"
    tolerances: dict = field(default_factory=dict)

    def tol(self, name: str) -> float:
        if name not in DEFAULT_TOLERANCES:
            raise KeyError(f"unknown tolerance {name!r}")
        return float(self.tolerances.get(name, DEFAULT_TOLERANCES[name]))

    def convergence_extents(self) -> list[tuple[float, tuple[int, int]]]:
        """Pairs (spacing, 2-d extent) covering the same physical box."""
        out = []
        for d in self.delta_series:
            n = self.box_length / d
            n_int = int(round(n))
            if abs(n - n_int) > 1e-9 or n_int < 2:
                raise ConfigError(
                    f"box_length {self.box_length} is not an integer multiple "
                    f"(>= 2) of spacing {d}")
            out.append((d, (n_int, n_int)))
        return out


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ConfigError(message)


def config_from_dict(raw: dict) -> ExperimentConfig:
    _require(isinstance(raw, dict), "configuration must be a JSON object")
    _require(bool(raw), "configuration is empty")
    unknown = set(raw) - _TOP_KEYS
    _require(not unknown, f"unknown configuration keys: {sorted(unknown)}")

    seed = raw.get("seed", ExperimentConfig.seed)
    _require(isinstance(seed, int) and seed >= 0, "seed must be a non-negative integer")

    lat_raw = raw.get("lattice", {})
    _require(isinstance(lat_raw, dict), "lattice must be an object")
    lat_unknown = set(lat_raw) - {"extent", "spacing", "boundary"}
    _require(not lat_unknown, f"unknown lattice keys: {sorted(lat_unknown)}")
    extent = tuple(lat_raw.get("extent", (6, 6)))
    spacing = lat_raw.get("spacing", 0.25)
    boundary = lat_raw.get("boundary", PERIODIC)
    _require(boundary in (PERIODIC, CLAMPED),
             f"lattice boundary must be periodic or clamped, got {boundary!r}")
    try:
        lattice = LatticeSpec(extent, float(spacing), boundary)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"invalid lattice: {exc}") from exc

    field_raw = dict(raw.get("field", {"kind": "gradient-of-f", "amplitude": 0.5}))
    kind = field_raw.pop("kind", "gradient-of-f")
    _require(kind in FIELD_KINDS,
             f"field kind {kind!r} not one of {FIELD_KINDS}")
    if kind == "gradient-of-f":
        _require("f" not in field_raw,
                 "gradient potentials are built from the seed, not the file")

    matter_raw = dict(raw.get("matter", {"kind": "plane-wave"}))
    matter_kind = matter_raw.pop("kind", "plane-wave")
    _require(matter_kind in MATTER_KINDS,
             f"matter fixture {matter_kind!r} not one of {MATTER_KINDS}")
    allowed_matter = {
        "plane-wave": {"amplitude"},
        "constant": {"re", "im"},
        "gaussian-bump": {"amplitude", "width_fraction"},
        "coordinate": {"axis"},
    }[matter_kind]
    matter_unknown = set(matter_raw) - allowed_matter
    _require(not matter_unknown,
             f"unknown {matter_kind} parameters: {sorted(matter_unknown)}")
    if matter_kind == "coordinate":
        axis = matter_raw.get("axis", 0)
        _require(isinstance(axis, int) and 0 <= axis <= 1,
                 "coordinate axis must be 0 or 1 (convergence studies are 2-d)")
    if matter_kind == "gaussian-bump":
        width = matter_raw.get("width_fraction", 0.125)
        _require(np.isfinite(width) and 0 < width <= 0.2,
                 "width_fraction must be in (0, 0.2] so the bump decays "
                 "inside the box")

    scale_grid = tuple(float(r) for r in raw.get("scale_grid", DEFAULT_SCALE_GRID))
    _require(len(scale_grid) >= 1, "scale_grid must be non-empty")
    _require(all(np.isfinite(r) and r > 0 for r in scale_grid),
             "scale factors must be finite and positive")

    samples = raw.get("samples", ExperimentConfig.samples)
    _require(isinstance(samples, int) and samples >= 1, "samples must be >= 1")

    hil = raw.get("hilbert", {})
    _require(isinstance(hil, dict), "hilbert must be an object")
    hil_unknown = set(hil) - {"dimension", "samples"}
    _require(not hil_unknown, f"unknown hilbert keys: {sorted(hil_unknown)}")
    hdim = hil.get("dimension", 2)
    hsamples = hil.get("samples", 1000)
    _require(isinstance(hdim, int) and hdim >= 1, "hilbert dimension must be >= 1")
    _require(isinstance(hsamples, int) and hsamples >= 1, "hilbert samples must be >= 1")

    coup_raw = raw.get("couplings", {})
    _require(isinstance(coup_raw, dict), "couplings must be an object")
    coup_unknown = set(coup_raw) - {"g_r", "g_i", "g", "mass", "a_mass"}
    _require(not coup_unknown, f"unknown coupling keys: {sorted(coup_unknown)}")
    couplings = Couplings(**{k: float(v) for k, v in coup_raw.items()})
    _require(all(np.isfinite(v) for v in
                 (couplings.g_r, couplings.g_i, couplings.g,
                  couplings.mass, couplings.a_mass)),
             "couplings must be finite")
    _require(couplings.g_i != 0.0, "g_i must be nonzero (it is divided by)")
    _require(couplings.g != 0.0, "g must be nonzero (it is divided by)")

    deltas = tuple(float(d) for d in raw.get("delta_series", DEFAULT_DELTA_SERIES))
    _require(len(deltas) >= 2, "delta_series needs at least two spacings")
    _require(all(np.isfinite(d) and d > 0 for d in deltas),
             "delta_series entries must be finite and positive")

    box = float(raw.get("box_length", DEFAULT_BOX_LENGTH))
    _require(np.isfinite(box) and box > 0, "box_length must be finite and positive")

    expect = raw.get("expect_nonintegrable", False)
    _require(isinstance(expect, bool), "expect_nonintegrable must be a boolean")

    anchors = raw.get("anchors", 5)
    _require(isinstance(anchors, int) and anchors >= 1, "anchors must be >= 1")

    workers = raw.get("workers", 1)
    _require(isinstance(workers, int) and workers >= 1, "workers must be >= 1")

    output_dir = raw.get("output_dir", "reports")
    _require(isinstance(output_dir, str) and output_dir, "output_dir must be a string")

    tol_raw = raw.get("tolerances", {})
    _require(isinstance(tol_raw, dict), "tolerances must be an object")
    tol_unknown = set(tol_raw) - set(DEFAULT_TOLERANCES)
    _require(not tol_unknown, f"unknown tolerance keys: {sorted(tol_unknown)}")
    tolerances = {k: float(v) for k, v in tol_raw.items()}

    cfg = ExperimentConfig(
        seed=seed, lattice=lattice, field_kind=kind, field_params=field_raw,
        matter_kind=matter_kind, matter_params=matter_raw,
        scale_grid=scale_grid, samples=samples, hilbert_dimension=hdim,
        hilbert_samples=hsamples, couplings=couplings, delta_series=deltas,
        box_length=box, expect_nonintegrable=expect, anchors=anchors,
        workers=workers, output_dir=output_dir, tolerances=tolerances,
    )
    cfg.convergence_extents()  # validate the box/spacing combinations now
    return cfg


def config_from_file(path: str | Path) -> ExperimentConfig:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read configuration {p}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"configuration {p} is not valid JSON: {exc}") from exc
    return config_from_dict(raw)
