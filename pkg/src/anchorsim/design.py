"""Multi-root anchor configurations: evaluation and grid search.

A configuration is an ordered sequence of deployment stages, each holding
one or more tip-extending roots that grow simultaneously. The device
weight must cover the worst instantaneous hold-down demand of stage one;
later stages may also lean on the anchoring of everything already
deployed. Roots are treated as mechanically independent (forces add);
root-to-root coupling through the bed is not modeled.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .errors import ModelError
from .forces import (
    TIP_EXTENDER,
    AnchorGeometry,
    net_self_anchor_force,
    peak_extraction_force,
    tip_insertion_force,
)
from .media import MediaProfile

MAX_CONFIG_TILT_DEG = 60.0


@dataclass(frozen=True)
class AnchorConfig:
    """A staged multi-root design: stages are tuples of roots, in deploy order."""

    stages: tuple[tuple[AnchorGeometry, ...], ...]
    device_weight: float

    def __post_init__(self):
        if not self.stages:
            raise ModelError("configuration needs at least one stage")
        stages = tuple(tuple(stage) for stage in self.stages)
        object.__setattr__(self, "stages", stages)
        for i, stage in enumerate(stages):
            if not stage:
                raise ModelError(f"stage {i + 1} is empty")
            for root in stage:
                if root.mode != TIP_EXTENDER:
                    raise ModelError(
                        "staged deployment is defined for tip_extender roots only"
                    )
                if root.tilt > math.radians(MAX_CONFIG_TILT_DEG) + 1e-12:
                    raise ModelError(
                        f"root tilt {math.degrees(root.tilt):.1f} deg exceeds "
                        f"{MAX_CONFIG_TILT_DEG:.0f} deg"
                    )
        if self.device_weight < 0:
            raise ModelError(f"device weight must be non-negative, got {self.device_weight}")

    @property
    def roots(self) -> tuple[AnchorGeometry, ...]:
        return tuple(root for stage in self.stages for root in stage)

    @property
    def total_cross_section(self) -> float:
        return sum(math.pi * r.radius**2 for r in self.roots)


@dataclass(frozen=True)
class ConfigMetrics:
    """Stage-by-stage force budget and the headline design ratios."""

    stage_required: tuple[float, ...]
    stage_available: tuple[float, ...]
    total_extraction: float
    worst_margin: float
    anchoring_to_weight: float | None
    feasible: bool


def required_reaction(geom: AnchorGeometry, media: MediaProfile) -> float:
    """Worst hold-down demand of one root over its growth trajectory [N].

    The net force rises linearly before the side anchoring catches up, so
    the maximum sits at half the critical depth (or at full deployment for
    roots shorter than that). Clamped at zero: a root never pushes its
    platform up. Independent of length once the root grows past its
    critical depth.
    """
    k_t = media.tip_coefficient
    k_s = media.side_coefficient
    h_peak = geom.radius * k_t / (2.0 * geom.kappa * k_s) if k_s > 0 else math.inf
    h = min(h_peak, geom.full_depth)
    return max(net_self_anchor_force(h, geom, media), 0.0)


def evaluate_config(cfg: AnchorConfig, media: MediaProfile) -> ConfigMetrics:
    """Check a staged design against its own weight and anchoring budget.

    Stage s must satisfy: sum of the stage roots' worst-case hold-down
    demands <= device weight + peak extraction of all earlier stages.

    Raises:
        ModelError: If the media profile is uncalibrated (zeta unset).
    """
    media.require_calibrated()
    required = []
    available = []
    hold_down = cfg.device_weight
    total_extraction = 0.0
    for stage in cfg.stages:
        required.append(sum(required_reaction(root, media) for root in stage))
        available.append(hold_down)
        stage_extraction = sum(peak_extraction_force(root, media) for root in stage)
        hold_down += stage_extraction
        total_extraction += stage_extraction
    margins = [a - r for a, r in zip(available, required)]
    worst = min(margins)
    ratio = total_extraction / cfg.device_weight if cfg.device_weight > 0 else None
    return ConfigMetrics(
        stage_required=tuple(required),
        stage_available=tuple(available),
        total_extraction=total_extraction,
        worst_margin=worst,
        anchoring_to_weight=ratio,
        feasible=worst >= 0,
    )


@dataclass(frozen=True)
class SplitRow:
    n_roots: int
    radius: float
    ratio: float
    gain_over_single: float


def split_comparison(total_area: float, n_max: int, depth: float,
                     media: MediaProfile) -> list[SplitRow]:
    """Extraction-to-insertion ratio of N equal roots sharing a cross-section.

    Holding the total tip area fixed pins the constrained insertion force,
    while the summed wall perimeter grows like sqrt(N), so the ratio gains
    sqrt(N) over the single root.
    """
    if n_max < 1:
        raise ModelError(f"root count must be at least 1, got {n_max}")
    if not total_area > 0:
        raise ModelError(f"total cross-section must be positive, got {total_area}")
    if not depth > 0:
        raise ModelError(f"depth must be positive, got {depth}")
    rows = []
    baseline = None
    for n in range(1, n_max + 1):
        radius = math.sqrt(total_area / (n * math.pi))
        geom = AnchorGeometry(radius=radius, length=depth, mode=TIP_EXTENDER)
        total_ins = n * tip_insertion_force(depth, geom, media)
        total_ext = n * peak_extraction_force(geom, media)
        ratio = total_ext / total_ins
        if baseline is None:
            baseline = ratio
        rows.append(
            SplitRow(n_roots=n, radius=radius, ratio=ratio, gain_over_single=ratio / baseline)
        )
    return rows


@dataclass(frozen=True)
class SearchConstraints:
    """Finite grid for the exhaustive design search.

    Defaults follow the validated design envelope: small diameter set,
    bench-scale lengths, near-vertical angles (within 15 degrees), at most
    6 roots in at most 3 stages, hairy skins.
    """

    device_weight: float
    diameters: tuple[float, ...] = (0.007, 0.010, 0.013, 0.016, 0.020)
    lengths: tuple[float, ...] = (0.15, 0.30, 0.45)
    angles_deg: tuple[float, ...] = (0.0, 15.0)
    max_roots: int = 6
    max_stages: int = 3
    skin: str = "hairy"
    hair_factor: float | None = None

    def __post_init__(self):
        if not self.device_weight >= 0:
            raise ModelError("device weight must be non-negative")
        if not self.diameters or any(d <= 0 for d in self.diameters):
            raise ModelError("diameter grid must be non-empty and positive")
        if not self.lengths or any(l <= 0 for l in self.lengths):
            raise ModelError("length grid must be non-empty and positive")
        if self.max_roots < 1 or self.max_stages < 1:
            raise ModelError("need at least one root and one stage")


@dataclass(frozen=True)
class OptimizeResult:
    config: AnchorConfig
    metrics: ConfigMetrics
    feasible_found: bool


def optimize_config(constraints: SearchConstraints, media: MediaProfile) -> OptimizeResult:
    """Exhaustive staged-design search maximizing anchoring-to-weight.

    The search family assigns one root type (diameter, length, angle) and a
    count to each stage; heterogeneous designs within a stage are outside
    the grid but can always be scored with :func:`evaluate_config`. Ties
    are broken by fewer roots, then smaller total cross-section, then the
    lexicographic stage encoding (diameter first, so equal designs settle
    on the smaller-diameter-first deployment order). With no feasible
    candidate, the best-margin infeasible design is returned, flagged.
    """
    media.require_calibrated()
    if not constraints.device_weight > 0:
        raise ModelError("the search objective needs a positive device weight")
    root_types = []
    for d, length, angle in itertools.product(
        constraints.diameters, constraints.lengths, constraints.angles_deg
    ):
        geom = AnchorGeometry(
            radius=d / 2,
            length=length,
            tilt=math.radians(angle),
            skin=constraints.skin,
            hair_factor=constraints.hair_factor,
            mode=TIP_EXTENDER,
        )
        root_types.append(
            (
                (d, length, angle),
                geom,
                required_reaction(geom, media),
                peak_extraction_force(geom, media),
            )
        )

    weight = constraints.device_weight
    best_key = None
    best_plan = None
    best_infeasible_key = None
    best_infeasible_plan = None

    for n_stages in range(1, constraints.max_stages + 1):
        for counts in _compositions(constraints.max_roots, n_stages):
            for types in itertools.product(root_types, repeat=n_stages):
                total_ext = 0.0
                hold = weight
                worst_margin = math.inf
                encoding = []
                n_roots = 0
                cross = 0.0
                for count, (key, geom, req, ext) in zip(counts, types):
                    margin = hold - count * req
                    if margin < worst_margin:
                        worst_margin = margin
                    hold += count * ext
                    total_ext += count * ext
                    n_roots += count
                    cross += count * math.pi * geom.radius**2
                    encoding.append((key[0], key[1], key[2], count))
                feasible = worst_margin >= 0
                ratio = total_ext / weight if weight > 0 else math.inf
                key_tuple = (-ratio, n_roots, cross, tuple(encoding))
                if feasible:
                    if best_key is None or key_tuple < best_key:
                        best_key = key_tuple
                        best_plan = (counts, types)
                else:
                    infeasible_key = (-worst_margin, key_tuple)
                    if best_infeasible_key is None or infeasible_key < best_infeasible_key:
                        best_infeasible_key = infeasible_key
                        best_infeasible_plan = (counts, types)

    feasible_found = best_plan is not None
    plan = best_plan if feasible_found else best_infeasible_plan
    counts, types = plan
    stages = tuple(
        tuple(geom for _ in range(count)) for count, (_, geom, _, _) in zip(counts, types)
    )
    config = AnchorConfig(stages=stages, device_weight=weight)
    return OptimizeResult(
        config=config,
        metrics=evaluate_config(config, media),
        feasible_found=feasible_found,
    )


def _compositions(max_total: int, parts: int):
    """All ordered tuples of `parts` positive ints with sum <= max_total."""
    for total in range(parts, max_total + 1):
        for cuts in itertools.combinations(range(1, total), parts - 1):
            bounds = (0, *cuts, total)
            yield tuple(b - a for a, b in zip(bounds[:-1], bounds[1:]))
