"""Least-squares calibration of media parameters from measured forces.

All fits are ordinary least squares on force (measurement noise in bench
data is additive), are invariant under sample reordering (inputs are
sorted internally), and recover their synthesizing parameters exactly on
noiseless data because every model here is linear in its unknowns.

Fits never mutate a profile; apply helpers return retuned copies.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ModelError, SchemaError
from .forces import (
    RIGID_INTRUDER,
    AnchorGeometry,
    rigid_insertion_force,
    tip_insertion_force,
)
from .media import MediaProfile

RIGID_INSERTION = "rigid_insertion"
CONSTRAINED_TIP_INSERTION = "constrained_tip_insertion"
EXTRACTION_PEAK = "extraction_peak"
SELF_ANCHOR_WEIGHT = "self_anchor_weight"
REGIMES = (
    RIGID_INSERTION,
    CONSTRAINED_TIP_INSERTION,
    EXTRACTION_PEAK,
    SELF_ANCHOR_WEIGHT,
)

SAMPLE_FIELDS = ("depth_m", "force_N", "regime")


@dataclass(frozen=True)
class CalibrationSample:
    """One measured point: depth [m], force [N], and the protocol regime."""

    depth: float
    force: float
    regime: str

    def __post_init__(self):
        if self.depth < 0:
            raise ModelError(f"sample depth must be non-negative, got {self.depth}")
        if not math.isfinite(self.force):
            raise ModelError(f"sample force must be finite, got {self.force}")
        if self.regime not in REGIMES:
            raise ModelError(
                f"unknown regime {self.regime!r}; expected one of {', '.join(REGIMES)}"
            )


@dataclass(frozen=True)
class ScaleFit:
    zeta: float
    rms: float
    regime: str
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class HistoryHairFit:
    rho: float
    kappa: float
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class TipSideFit:
    k_t: float
    k_s: float
    ratio: float
    critical_depth: float
    rms: float
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class InsertionProfileFit:
    zeta: float
    rho: float | None
    rms: float
    warnings: tuple[str, ...] = ()


def _sorted(samples) -> list[CalibrationSample]:
    out = list(samples)
    if not out:
        raise ModelError("no calibration samples given")
    out.sort(key=lambda s: (s.depth, s.force))
    return out


def _single_regime(samples, allowed) -> str:
    regimes = {s.regime for s in samples}
    if len(regimes) > 1:
        raise ModelError(
            f"mixed-regime sample list ({', '.join(sorted(regimes))}); "
            "fit one regime at a time"
        )
    regime = regimes.pop()
    if regime not in allowed:
        raise ModelError(
            f"regime {regime!r} not usable here; expected one of {', '.join(allowed)}"
        )
    return regime


def fit_scale_factor(samples, geom: AnchorGeometry, media: MediaProfile) -> ScaleFit:
    """Fit the uniform table scale zeta to insertion force-depth samples.

    The force model is linear in zeta, so the least-squares solution is
    closed-form. Accepts rigid_insertion samples (tip plus dynamic side
    model, using the profile's rho) or constrained_tip_insertion samples
    (tip-only model).

    Raises:
        ModelError: On mixed regimes, fewer than 3 distinct depths, or a
            degenerate system (all model forces zero).
    """
    samples = _sorted(samples)
    regime = _single_regime(samples, (RIGID_INSERTION, CONSTRAINED_TIP_INSERTION))
    if len({s.depth for s in samples}) < 3:
        raise ModelError("scale-factor fit needs samples at 3 or more distinct depths")
    unit = media.with_zeta(1.0)
    if regime == RIGID_INSERTION:
        g = rigid_insertion_force
        geom_fit = geom if geom.mode == RIGID_INTRUDER else replace(geom, mode=RIGID_INTRUDER)
    else:
        g = tip_insertion_force
        geom_fit = geom
    basis = np.array([g(s.depth, geom_fit, unit) for s in samples])
    forces = np.array([s.force for s in samples])
    denom = float(basis @ basis)
    if denom == 0.0:
        raise ModelError("degenerate fit: model force is zero at every sample depth")
    zeta = float(basis @ forces) / denom
    if not zeta > 0:
        raise ModelError(f"fitted zeta is not positive ({zeta:.3g}); check the data")
    rms = float(np.sqrt(np.mean((forces - zeta * basis) ** 2)))
    return ScaleFit(zeta=zeta, rms=rms, regime=regime)


def fit_history_and_hair(intruder_peak: float, hairless_peak: float,
                         hairy_peak: float) -> HistoryHairFit:
    """Peak-ratio fit of the side-history ratio rho and hair factor kappa.

    rho = hairless / intruder and kappa = hairy / hairless, exactly as the
    peaks are reported. Ratios outside the expected ordering are returned
    with a warning flag rather than rejected.
    """
    for label, value in (
        ("intruder", intruder_peak),
        ("hairless", hairless_peak),
        ("hairy", hairy_peak),
    ):
        if not value > 0:
            raise ModelError(f"{label} extraction peak must be positive, got {value}")
    rho = hairless_peak / intruder_peak
    kappa = hairy_peak / hairless_peak
    warnings = []
    if kappa < 1:
        warnings.append(
            f"hairy peak below hairless peak (kappa = {kappa:.3f} < 1); "
            "hairs are expected to increase extraction"
        )
    if rho < 1:
        warnings.append(
            f"tip-extension peak below intruder peak (rho = {rho:.3f} < 1); "
            "static contact history is expected to anchor harder"
        )
    return HistoryHairFit(rho=rho, kappa=kappa, warnings=tuple(warnings))


def fit_tip_side_ratio(samples, geom: AnchorGeometry, media: MediaProfile) -> TipSideFit:
    """Fit tip and side stress coefficients to self-anchoring weight data.

    The net hold-down model F_net(h) = pi r^2 k_t h - kappa pi r k_s h^2 is
    linear in (k_t, k_s); both are solved by least squares and reported
    with their ratio and the implied crossover depth. ``media`` supplies no
    numbers here, only the geometry's hair factor shapes the side column.

    Flags (rather than errors): exactly two samples is noise-underdetermined;
    sign-definite samples mean no crossover was observed in the data.
    """
    samples = _sorted(samples)
    _single_regime(samples, (SELF_ANCHOR_WEIGHT,))
    if len(samples) < 2:
        raise ModelError("tip/side fit needs at least 2 samples (two unknowns)")
    c = math.cos(geom.tilt)
    h = np.array([s.depth for s in samples])
    f = np.array([s.force for s in samples])
    a_tip = math.pi * geom.radius**2 * h * c
    a_side = -geom.kappa * math.pi * geom.radius * h**2 * c
    design = np.column_stack([a_tip, a_side])
    if np.linalg.matrix_rank(design) < 2:
        raise ModelError(
            "degenerate fit: samples do not separate the linear and quadratic terms "
            "(need 2 or more distinct nonzero depths)"
        )
    coef, *_ = np.linalg.lstsq(design, f, rcond=None)
    k_t, k_s = float(coef[0]), float(coef[1])
    warnings = []
    if len(samples) == 2:
        warnings.append("underdetermined for noise: two samples fit two unknowns exactly")
    if np.all(f > 0) or np.all(f < 0):
        warnings.append("no crossover observed: samples are sign-definite")
    if k_t <= 0 or k_s <= 0:
        warnings.append(
            f"fitted coefficients not both positive (k_t = {k_t:.4g}, k_s = {k_s:.4g})"
        )
        ratio = math.nan
        h_star = math.nan
    else:
        ratio = k_t / k_s
        h_star = ratio * geom.radius / geom.kappa
    resid = f - design @ coef
    rms = float(np.sqrt(np.mean(resid**2)))
    return TipSideFit(
        k_t=k_t, k_s=k_s, ratio=ratio, critical_depth=h_star, rms=rms,
        warnings=tuple(warnings),
    )


def fit_insertion_profile(samples, geom: AnchorGeometry,
                          media: MediaProfile) -> InsertionProfileFit:
    """Joint (zeta, rho) fit to a rigid-intruder insertion force-depth curve.

    The rigid model zeta*T(z) + (zeta/rho)*S(z) separates into independent
    linear-in-depth (tip) and quadratic-in-depth (side) parts, so one curve
    identifies both parameters. This is the standard route when only the
    intruder penetration record is available.
    """
    samples = _sorted(samples)
    _single_regime(samples, (RIGID_INSERTION,))
    if len({s.depth for s in samples}) < 3:
        raise ModelError("insertion-profile fit needs samples at 3 or more distinct depths")
    unit = media.with_zeta(1.0)
    geom_fit = geom if geom.mode == RIGID_INTRUDER else replace(geom, mode=RIGID_INTRUDER)
    tip = np.array([tip_insertion_force(s.depth, geom_fit, unit) for s in samples])
    side = np.array(
        [
            rigid_insertion_force(s.depth, geom_fit, unit.with_rho(1.0))
            - tip_insertion_force(s.depth, geom_fit, unit)
            for s in samples
        ]
    )
    forces = np.array([s.force for s in samples])
    design = np.column_stack([tip, side])
    if np.linalg.matrix_rank(design) < 2:
        raise ModelError("degenerate fit: depths do not separate tip and side terms")
    coef, *_ = np.linalg.lstsq(design, forces, rcond=None)
    zeta, b = float(coef[0]), float(coef[1])
    if not zeta > 0:
        raise ModelError(f"fitted zeta is not positive ({zeta:.3g}); check the data")
    warnings = []
    if b > 1e-12 * zeta:
        rho = zeta / b
        if rho < 1:
            warnings.append(
                f"fitted side-history ratio rho = {rho:.3f} < 1: the insertion data "
                "carry more side drag than the anchoring side coefficient implies"
            )
    else:
        rho = None
        warnings.append("side term not identifiable from these samples; rho unchanged")
    resid = forces - design @ coef
    rms = float(np.sqrt(np.mean(resid**2)))
    return InsertionProfileFit(zeta=zeta, rho=rho, rms=rms, warnings=tuple(warnings))


def apply_tip_side_fit(media: MediaProfile, fit: TipSideFit) -> MediaProfile:
    """Retune a profile so its tip and side coefficients match a fit."""
    if not math.isfinite(fit.ratio):
        raise ModelError("cannot apply a fit without positive coefficients")
    retuned = media.with_tip_side_ratio(fit.ratio)
    tip_at_unit = retuned.with_zeta(1.0).tip_coefficient
    return retuned.with_zeta(fit.k_t / tip_at_unit)


# ----------------------------------------------------------------------
# Sample file I/O
# ----------------------------------------------------------------------

def read_samples_csv(path: str) -> list[CalibrationSample]:
    """Read calibration samples from a CSV with headers depth_m,force_N,regime."""
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None:
            raise SchemaError("empty file", source=path)
        if tuple(reader.fieldnames) != SAMPLE_FIELDS:
            raise SchemaError(
                f"expected headers {','.join(SAMPLE_FIELDS)}, "
                f"got {','.join(reader.fieldnames)}",
                source=path,
                line=1,
            )
        samples = []
        for i, row in enumerate(reader, start=2):
            try:
                samples.append(
                    CalibrationSample(
                        depth=float(row["depth_m"]),
                        force=float(row["force_N"]),
                        regime=(row["regime"] or "").strip(),
                    )
                )
            except (TypeError, ValueError, ModelError) as exc:
                raise SchemaError(str(exc), source=path, line=i) from exc
    if not samples:
        raise SchemaError("no sample rows", source=path)
    return samples
