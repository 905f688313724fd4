"""Granular media stress-response profiles.

A :class:`MediaProfile` is the material law of one granular medium: a
gridded table of elemental stresses per unit depth, indexed by the attack
angle ``beta`` of a surface element and the intrusion angle ``gamma`` of
its motion, plus a handful of scalar parameters.

Units are SI throughout: angles in radians inside the library (degrees
only in files and at the CLI boundary), stresses per unit depth in N/m^3.
The elemental stress law is lithostatic-linear: the vertical stress on an
element at depth ``z`` is ``zeta * alpha_z(beta, gamma) * z``.

The built-in "generic dry sand" table evaluates the generic discrete
Fourier fit of granular response functions published by Li, Zhang &
Goldman, Science 339, 1408 (2013), normalized so that a horizontal plate
penetrating vertically sees alpha_z = 1 at unit magnitude. The magnitude
and the tip-to-side stress balance of any real bed should be calibrated
from measured force-depth data (see :mod:`anchorsim.calibrate`).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from importlib import resources

import numpy as np

from .errors import ModelError, SchemaError

# Orientation of the tip of a vertically growing anchor: horizontal plate
# (beta = 0) moving straight down (gamma = pi/2).
TIP_ORIENTATION = (0.0, math.pi / 2)
# Orientation of the lateral wall of a vertical anchor: vertical plate
# moving along its own plane. One orientation serves both motion senses;
# the motion sign of an element only sets the direction of the reaction.
SIDE_ORIENTATION = (math.pi / 2, math.pi / 2)

# Coarsest angular grid spacing a profile may use, in degrees.
MAX_GRID_SPACING_DEG = 5.0

_BUILTIN_NAMES = ("generic_sand", "loose_sand_calibrated")


@dataclass(frozen=True)
class MediaProfile:
    """Calibrated stress response of one granular medium.

    Attributes:
        name: Identifier for reports and file round-trips.
        betas: Sorted grid of attack angles [rad], covering [-pi/2, pi/2].
        gammas: Sorted grid of intrusion angles [rad], covering [-pi/2, pi/2].
        alpha_z: Vertical stress per unit depth [N/m^3] on the
            (beta, gamma) grid; non-negative (stresses resist motion).
        alpha_x: Horizontal stress per unit depth [N/m^3]; stored for
            completeness, unused by the force model.
        zeta: Dimensionless scale factor applied uniformly to the table;
            None marks an uncalibrated profile that cannot produce forces.
        rho: Side-history ratio, static-contact (tip-extension history)
            over dynamic-contact (rigid-intrusion history) side stress.
            Values below 1 are physically unusual and are flagged by the
            calibration fits, but are accepted so that measured insertion
            data can be represented faithfully.
        phi: Packing volume fraction, metadata only.
        notes: Free text.
    """

    name: str
    betas: np.ndarray
    gammas: np.ndarray
    alpha_z: np.ndarray
    alpha_x: np.ndarray
    zeta: float | None = 1.0
    rho: float = 2.5
    phi: float = 0.58
    notes: str = ""

    def __post_init__(self):
        betas = np.asarray(self.betas, dtype=float)
        gammas = np.asarray(self.gammas, dtype=float)
        az = np.asarray(self.alpha_z, dtype=float)
        ax = np.asarray(self.alpha_x, dtype=float)
        object.__setattr__(self, "betas", betas)
        object.__setattr__(self, "gammas", gammas)
        object.__setattr__(self, "alpha_z", az)
        object.__setattr__(self, "alpha_x", ax)
        _validate_axis(betas, "beta")
        _validate_axis(gammas, "gamma")
        if az.shape != (betas.size, gammas.size) or ax.shape != az.shape:
            raise ModelError(
                f"stress table shape {az.shape} does not match grid "
                f"({betas.size} betas x {gammas.size} gammas)"
            )
        if not np.all(np.isfinite(az)) or not np.all(np.isfinite(ax)):
            raise ModelError("stress table contains non-finite values")
        if np.any(az < 0):
            raise ModelError("alpha_z must be non-negative at every grid node")
        if self.zeta is not None and not self.zeta > 0:
            raise ModelError(f"zeta must be positive, got {self.zeta}")
        if not self.rho > 0:
            raise ModelError(f"rho must be positive, got {self.rho}")
        if not 0 < self.phi < 1:
            raise ModelError(f"phi must lie in (0, 1), got {self.phi}")

    # ------------------------------------------------------------------
    # Stress evaluation
    # ------------------------------------------------------------------

    def require_calibrated(self) -> float:
        if self.zeta is None:
            raise ModelError(
                f"media profile '{self.name}' is uncalibrated (zeta unset); "
                "run a calibration or set zeta before computing forces"
            )
        return self.zeta

    def stress(self, beta: float, gamma: float) -> tuple[float, float]:
        """Bilinear interpolation of (alpha_z, alpha_x) at (beta, gamma), times zeta."""
        zeta = self.require_calibrated()
        az = _bilinear(self.betas, self.gammas, self.alpha_z, beta, gamma)
        ax = _bilinear(self.betas, self.gammas, self.alpha_x, beta, gamma)
        return zeta * az, zeta * ax

    @property
    def tip_coefficient(self) -> float:
        """Per-depth tip stress k_t [N/m^3]: zeta * alpha_z at the tip orientation."""
        return self.stress(*TIP_ORIENTATION)[0]

    @property
    def side_coefficient(self) -> float:
        """Per-depth side stress k_s [N/m^3]: zeta * alpha_z at the side orientation."""
        return self.stress(*SIDE_ORIENTATION)[0]

    # ------------------------------------------------------------------
    # Derived profiles (profiles are immutable; calibration returns new ones)
    # ------------------------------------------------------------------

    def with_zeta(self, zeta: float) -> "MediaProfile":
        return replace(self, zeta=zeta)

    def with_rho(self, rho: float) -> "MediaProfile":
        return replace(self, rho=rho)

    def with_tip_side_ratio(self, ratio: float) -> "MediaProfile":
        """Return a copy whose tip-to-side stress ratio equals ``ratio``.

        The table is rescaled by the smooth blend ``1 + (s - 1) sin^2(beta)``
        which leaves the tip orientation (beta = 0) untouched and scales the
        side orientation (beta = +-pi/2) by exactly ``s``. Values of beta in
        between are adjusted smoothly so the table stays gap-free and
        non-negative.
        """
        if not ratio > 0:
            raise ModelError(f"tip/side ratio must be positive, got {ratio}")
        tip = _bilinear(self.betas, self.gammas, self.alpha_z, *TIP_ORIENTATION)
        side = _bilinear(self.betas, self.gammas, self.alpha_z, *SIDE_ORIENTATION)
        if tip <= 0 or side <= 0:
            raise ModelError("cannot retune a table with zero tip or side stress")
        s = (tip / side) / ratio
        blend = 1.0 + (s - 1.0) * np.sin(self.betas) ** 2
        az = self.alpha_z * blend[:, None]
        ax = self.alpha_x * blend[:, None]
        return replace(self, alpha_z=az, alpha_x=ax)

    # ------------------------------------------------------------------
    # Construction and persistence
    # ------------------------------------------------------------------

    @classmethod
    def uniform(cls, alpha_z: float, alpha_x: float = 0.0, **kwargs) -> "MediaProfile":
        """Constant-stress table, handy for analytic cross-checks."""
        betas = np.radians(np.arange(-90.0, 91.0, MAX_GRID_SPACING_DEG))
        gammas = np.radians(np.arange(-90.0, 91.0, MAX_GRID_SPACING_DEG))
        shape = (betas.size, gammas.size)
        kwargs.setdefault("name", "uniform")
        return cls(
            betas=betas,
            gammas=gammas,
            alpha_z=np.full(shape, float(alpha_z)),
            alpha_x=np.full(shape, float(alpha_x)),
            **kwargs,
        )

    def to_dict(self) -> dict:
        grid = []
        for i, b in enumerate(self.betas):
            for j, g in enumerate(self.gammas):
                grid.append(
                    {
                        "beta_deg": round(math.degrees(b), 10),
                        "gamma_deg": round(math.degrees(g), 10),
                        "alpha_z": float(self.alpha_z[i, j]),
                        "alpha_x": float(self.alpha_x[i, j]),
                    }
                )
        return {
            "schema": 1,
            "name": self.name,
            "zeta": self.zeta,
            "rho": self.rho,
            "phi": self.phi,
            "notes": self.notes,
            "grid": grid,
        }

    @classmethod
    def from_dict(cls, doc: dict, source=None) -> "MediaProfile":
        if doc.get("schema") != 1:
            raise SchemaError(
                f"unsupported or missing schema version {doc.get('schema')!r} (expected 1)",
                source=source,
                field="schema",
            )
        for key in ("name", "zeta", "rho", "phi", "grid"):
            if key not in doc:
                raise SchemaError("missing required field", source=source, field=key)
        grid = doc["grid"]
        if not isinstance(grid, list) or not grid:
            raise SchemaError("grid must be a non-empty list", source=source, field="grid")
        rows = []
        for idx, row in enumerate(grid):
            try:
                rows.append(
                    (
                        float(row["beta_deg"]),
                        float(row["gamma_deg"]),
                        float(row["alpha_z"]),
                        float(row["alpha_x"]),
                    )
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise SchemaError(
                    f"bad grid row: {exc}", source=source, field=f"grid[{idx}]"
                ) from exc
        betas_deg = sorted({r[0] for r in rows})
        gammas_deg = sorted({r[1] for r in rows})
        az = np.full((len(betas_deg), len(gammas_deg)), np.nan)
        ax = np.full_like(az, np.nan)
        bi = {b: i for i, b in enumerate(betas_deg)}
        gi = {g: j for j, g in enumerate(gammas_deg)}
        for b, g, vz, vx in rows:
            az[bi[b], gi[g]] = vz
            ax[bi[b], gi[g]] = vx
        if np.any(np.isnan(az)):
            raise SchemaError(
                "grid has gaps: every (beta, gamma) lattice point needs a row",
                source=source,
                field="grid",
            )
        zeta = doc["zeta"]
        try:
            return cls(
                name=str(doc["name"]),
                betas=np.radians(betas_deg),
                gammas=np.radians(gammas_deg),
                alpha_z=az,
                alpha_x=ax,
                zeta=None if zeta is None else float(zeta),
                rho=float(doc["rho"]),
                phi=float(doc["phi"]),
                notes=str(doc.get("notes", "")),
            )
        except ModelError as exc:
            raise SchemaError(str(exc), source=source) from exc


def _validate_axis(values: np.ndarray, label: str) -> None:
    if values.ndim != 1 or values.size < 2:
        raise ModelError(f"{label} grid needs at least two values")
    if np.any(np.diff(values) <= 0):
        raise ModelError(f"{label} grid must be strictly increasing")
    half = math.pi / 2
    tol = 1e-9
    if values[0] > -half + tol or values[-1] < half - tol:
        raise ModelError(
            f"{label} grid must cover [-pi/2, pi/2]; got "
            f"[{values[0]:.6f}, {values[-1]:.6f}]"
        )
    max_step = math.radians(MAX_GRID_SPACING_DEG) + tol
    if np.max(np.diff(values)) > max_step:
        raise ModelError(
            f"{label} grid spacing exceeds {MAX_GRID_SPACING_DEG} degrees"
        )


def _bilinear(xs: np.ndarray, ys: np.ndarray, table: np.ndarray, x: float, y: float) -> float:
    tol = 1e-9
    if x < xs[0] - tol or x > xs[-1] + tol:
        raise ModelError(
            f"attack angle beta={x:.6f} rad outside covered range "
            f"[{xs[0]:.6f}, {xs[-1]:.6f}]"
        )
    if y < ys[0] - tol or y > ys[-1] + tol:
        raise ModelError(
            f"intrusion angle gamma={y:.6f} rad outside covered range "
            f"[{ys[0]:.6f}, {ys[-1]:.6f}]"
        )
    x = min(max(x, xs[0]), xs[-1])
    y = min(max(y, ys[0]), ys[-1])
    i = min(int(np.searchsorted(xs, x, side="right")) - 1, xs.size - 2)
    j = min(int(np.searchsorted(ys, y, side="right")) - 1, ys.size - 2)
    i = max(i, 0)
    j = max(j, 0)
    tx = (x - xs[i]) / (xs[i + 1] - xs[i])
    ty = (y - ys[j]) / (ys[j + 1] - ys[j])
    return float(
        table[i, j] * (1 - tx) * (1 - ty)
        + table[i + 1, j] * tx * (1 - ty)
        + table[i, j + 1] * (1 - tx) * ty
        + table[i + 1, j + 1] * tx * ty
    )


def elemental_stress(beta: float, gamma: float, media: MediaProfile) -> tuple[float, float]:
    """Elemental RFT stresses per unit depth at (beta, gamma), scaled by zeta.

    Args:
        beta: Attack angle of the surface element [rad], inside the table range.
        gamma: Intrusion angle of its motion [rad], inside the table range.
        media: Calibrated media profile.

    Returns:
        (alpha_z, alpha_x) in N/m^3. alpha_z is non-negative.

    Raises:
        ModelError: If either angle falls outside the covered range or the
            profile is uncalibrated.
    """
    return media.stress(beta, gamma)


# ----------------------------------------------------------------------
# Built-in tables
# ----------------------------------------------------------------------

# Generic granular response Fourier coefficients (Li, Zhang & Goldman 2013),
# normalized to alpha_z(0, pi/2) = 1.
_A00, _A10, _B11, _B01, _BM11 = 0.206, 0.169, 0.212, 0.358, 0.055
_C11, _C01, _CM11, _D10 = -0.124, 0.253, 0.007, 0.088


def _generic_alpha(beta: float, gamma: float) -> tuple[float, float]:
    az = (
        _A00
        + _A10 * math.cos(2 * beta)
        + _B11 * math.sin(2 * beta + gamma)
        + _B01 * math.sin(gamma)
        + _BM11 * math.sin(-2 * beta + gamma)
    )
    ax = (
        _C11 * math.cos(2 * beta + gamma)
        + _C01 * math.cos(gamma)
        + _CM11 * math.cos(-2 * beta + gamma)
        + _D10 * math.sin(2 * beta)
    )
    return az, ax


def generic_sand_profile(
    resolution_deg: float = MAX_GRID_SPACING_DEG,
    magnitude: float = 1.0e6,
    zeta: float = 1.0,
    rho: float = 2.5,
    phi: float = 0.58,
) -> MediaProfile:
    """Build the generic dry-sand profile from the published Fourier form.

    The table stores resisting-stress magnitudes: for downward-going motion
    (gamma > 0) the raw Fourier value is used directly; for upward-going
    motion (gamma < 0) the sign is flipped so the stored value is the
    magnitude of the stress opposing the motion. ``magnitude`` sets the
    tip-orientation stress in N/m^3 (default 1 N/cm^3); real beds need a
    calibrated zeta on top of it.
    """
    degs = np.arange(-90.0, 90.0 + 1e-9, resolution_deg)
    betas = np.radians(degs)
    gammas = np.radians(degs)
    az = np.zeros((betas.size, gammas.size))
    ax = np.zeros_like(az)
    for i, b in enumerate(betas):
        for j, g in enumerate(gammas):
            raw_z, raw_x = _generic_alpha(b, g)
            resist = raw_z if g > 0 else -raw_z
            if g == 0:
                resist = abs(raw_z)
            az[i, j] = max(resist, 0.0) * magnitude
            ax[i, j] = raw_x * magnitude
    return MediaProfile(
        name="generic dry sand",
        betas=betas,
        gammas=gammas,
        alpha_z=az,
        alpha_x=ax,
        zeta=zeta,
        rho=rho,
        phi=phi,
        notes=(
            "Generic Fourier-form response table normalized to 1 N/cm^3 at the "
            "tip orientation; stand-in values, calibrate zeta and the tip/side "
            "balance against penetration data for quantitative use."
        ),
    )


def load_media(path_or_name: str) -> MediaProfile:
    """Load a media profile from a JSON file path or a built-in name."""
    if path_or_name in _BUILTIN_NAMES:
        ref = resources.files(__package__).joinpath(f"data/{path_or_name}.json")
        with ref.open("r", encoding="utf-8") as handle:
            doc = _parse_json(handle, path_or_name)
        return MediaProfile.from_dict(doc, source=path_or_name)
    with open(path_or_name, "r", encoding="utf-8") as handle:
        doc = _parse_json(handle, path_or_name)
    return MediaProfile.from_dict(doc, source=path_or_name)


def _parse_json(handle, source):
    try:
        return json.load(handle)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg}", source=source, line=exc.lineno) from exc


def save_media(media: MediaProfile, path: str) -> None:
    from .report import atomic_write_text

    atomic_write_text(path, json.dumps(media.to_dict(), indent=1) + "\n")
