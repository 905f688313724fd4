"""Closed-form force laws for tip-extending and rigid cylindrical anchors.

Model summary (SI units, depth h measured vertically to the tip):

  * Tip resistance is a thin disc pushed through the medium:
        F_t(h) = k_t * h * pi r^2 * cos(tilt)
    with k_t the per-depth stress at the tip orientation. Linear in depth,
    quadratic in diameter.
  * Side anchoring integrates the per-depth side stress over the wall:
        F_s(h) = kappa * pi r * k_s * h^2 * cos(tilt)
    Quadratic in depth, linear in diameter. ``kappa`` is the hairy-skin
    multiplier (1 for hairless); it applies to static-contact (tip
    extension) history only.
  * A rigid intruder drags its walls through the medium while inserting,
    adding the dynamic-contact side term F_s / rho; its extraction keeps
    the dynamic history: F_s(h) / rho, without the hair bonus.
  * The net self-anchoring force of a growing tip extender is
        F_net(h) = F_t(h) - F_s(h),
    the external hold-down still required at depth h. It crosses zero at
    the critical depth h* = (k_t / k_s) * r / kappa, independent of tilt.

Tilted anchors use the vertical-configuration stress coefficients with
geometric projections: tip depth L cos(theta) for full deployment and a
cos(theta) factor taking body-frame force to its vertical component. The
element-integration route in :mod:`anchorsim.mesh` is the oracle for the
vertical forms; tilted closed forms are validated against measured trends,
not against the mesh.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ModelError
from .media import MediaProfile
from .mesh import (
    DEFAULT_ELEMENT_SIZE,
    DOWNWARD,
    UPWARD,
    discretize_anchor,
    integrate_vertical_force,
    side_elements,
    tip_elements,
)

TIP_EXTENDER = "tip_extender"
RIGID_INTRUDER = "rigid_intruder"
HAIRLESS = "hairless"
HAIRY = "hairy"

# Hairy-skin extraction multiplier when none is given; the measured
# hairy-to-hairless peak extraction ratio.
DEFAULT_HAIR_FACTOR = 1.4

MAX_TILT_DEG = 60.0


@dataclass(frozen=True)
class AnchorGeometry:
    """One anchor root: a thin-walled cylinder grown or pushed into the bed.

    Attributes:
        radius: Body radius [m].
        length: Axial length [m].
        tilt: Tilt from vertical [rad]; 0 is vertical.
        skin: "hairless" or "hairy".
        hair_factor: Extraction multiplier kappa; 1 for hairless skins,
            defaults to 1.4 for hairy ones.
        mode: "tip_extender" or "rigid_intruder".
    """

    radius: float
    length: float
    tilt: float = 0.0
    skin: str = HAIRLESS
    hair_factor: float | None = None
    mode: str = TIP_EXTENDER

    def __post_init__(self):
        if not self.radius > 0:
            raise ModelError(f"radius must be positive, got {self.radius}")
        if not self.length > 0:
            raise ModelError(f"length must be positive, got {self.length}")
        if not 0 <= self.tilt < math.pi / 2:
            raise ModelError(f"tilt must lie in [0, pi/2), got {self.tilt}")
        if self.skin not in (HAIRLESS, HAIRY):
            raise ModelError(f"skin must be 'hairless' or 'hairy', got {self.skin!r}")
        if self.mode not in (TIP_EXTENDER, RIGID_INTRUDER):
            raise ModelError(f"unknown mode {self.mode!r}")
        kappa = self.hair_factor
        if kappa is None:
            kappa = DEFAULT_HAIR_FACTOR if self.skin == HAIRY else 1.0
            object.__setattr__(self, "hair_factor", kappa)
        if self.skin == HAIRLESS and not math.isclose(kappa, 1.0):
            raise ModelError("hairless skins must have hair_factor 1")
        if kappa < 1:
            raise ModelError(f"hair_factor must be >= 1, got {kappa}")

    @property
    def kappa(self) -> float:
        return self.hair_factor

    @property
    def full_depth(self) -> float:
        """Vertical tip depth when fully deployed: L cos(tilt)."""
        return self.length * math.cos(self.tilt)


def tip_insertion_force(depth: float, geom: AnchorGeometry, media: MediaProfile) -> float:
    """Vertical tip resistance at the given tip depth [N].

    This is the whole insertion force of a constrained tip extender: only
    the tip moves relative to the medium.
    """
    _check_depth(depth)
    k_t = media.tip_coefficient
    return k_t * depth * math.pi * geom.radius**2 * math.cos(geom.tilt)


def side_anchor_force(depth: float, geom: AnchorGeometry, media: MediaProfile) -> float:
    """Vertical side anchoring force for static (tip-extension) contact [N].

    Integrates the per-depth side stress over the wall submerged to
    ``depth``; includes the hairy-skin multiplier.
    """
    _check_depth(depth)
    k_s = media.side_coefficient
    return geom.kappa * math.pi * geom.radius * k_s * depth**2 * math.cos(geom.tilt)


def rigid_insertion_force(depth: float, geom: AnchorGeometry, media: MediaProfile) -> float:
    """Insertion force on a rigid intruder: tip plus dynamic-contact side term [N]."""
    if geom.mode != RIGID_INTRUDER:
        raise ModelError(
            f"rigid_insertion_force requires a rigid_intruder geometry, got {geom.mode!r}"
        )
    _check_depth(depth)
    k_s = media.side_coefficient
    side_dynamic = math.pi * geom.radius * k_s * depth**2 * math.cos(geom.tilt) / media.rho
    return tip_insertion_force(depth, geom, media) + side_dynamic


def insertion_force(depth: float, geom: AnchorGeometry, media: MediaProfile) -> float:
    """Mode-dispatching insertion force: tip-only for tip extenders."""
    if geom.mode == RIGID_INTRUDER:
        return rigid_insertion_force(depth, geom, media)
    return tip_insertion_force(depth, geom, media)


def extraction_force_at(depth: float, geom: AnchorGeometry, media: MediaProfile) -> float:
    """Peak extraction force had deployment stopped at ``depth`` [N]."""
    _check_depth(depth)
    base = math.pi * geom.radius * media.side_coefficient * depth**2 * math.cos(geom.tilt)
    if geom.mode == RIGID_INTRUDER:
        return base / media.rho
    return geom.kappa * base


def peak_extraction_force(geom: AnchorGeometry, media: MediaProfile) -> float:
    """Peak (onset-of-motion) extraction force of the fully deployed body [N].

    Tip extenders anchor with static-contact history (times kappa when
    hairy); a rigid intruder's dynamic insertion history divides the same
    term by rho. Only the peak is modeled, not the post-peak decay.
    """
    return extraction_force_at(geom.full_depth, geom, media)


def net_self_anchor_force(depth: float, geom: AnchorGeometry, media: MediaProfile) -> float:
    """Hold-down force still required by a growing tip extender at ``depth`` [N].

    Positive means external reaction (weight) is needed; zero or negative
    means the side anchoring already balances the tip resistance.
    """
    if geom.mode != TIP_EXTENDER:
        raise ModelError(
            f"net_self_anchor_force requires a tip_extender geometry, got {geom.mode!r}"
        )
    return tip_insertion_force(depth, geom, media) - side_anchor_force(depth, geom, media)


def critical_depth(geom: AnchorGeometry, media: MediaProfile,
                   tolerance: float = 1e-5) -> float | None:
    """Smallest depth where the net self-anchoring force reaches zero [m].

    Brackets the sign change of F_net on (0, 10 L] and bisects to the
    absolute tolerance. Returns None when no sign change exists in that
    span; absence is a valid result, not an error.
    """
    if geom.mode != TIP_EXTENDER:
        raise ModelError(
            f"critical_depth requires a tip_extender geometry, got {geom.mode!r}"
        )

    def f(h):
        return net_self_anchor_force(h, geom, media)

    h_max = 10.0 * geom.length
    # Geometric bracket expansion from a small positive depth.
    lo = min(1e-6, h_max / 1024)
    if f(lo) <= 0:
        return lo
    hi = lo
    while hi < h_max:
        hi = min(hi * 2, h_max)
        if f(hi) <= 0:
            break
    else:
        return None
    while hi - lo > tolerance:
        mid = 0.5 * (lo + hi)
        if f(mid) <= 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def angled_pair_forces(theta: float, geom: AnchorGeometry,
                       media: MediaProfile) -> tuple[float, float]:
    """Vertical insertion and extraction force of two identical tilted roots.

    The pair grows in an X at ``theta`` from vertical and is pulled out
    vertically. Per root, the fully deployed tip depth is L cos(theta) and
    the vertical components carry one more cos(theta) projection; the pair
    total is twice one root. Valid on the tested range 0..60 degrees.

    Returns:
        (vertical insertion N, vertical extraction N) for the pair.
    """
    if not 0 <= theta <= math.radians(MAX_TILT_DEG) + 1e-12:
        raise ModelError(
            f"tilt angle {math.degrees(theta):.1f} deg outside the validated "
            f"range 0..{MAX_TILT_DEG:.0f} deg"
        )
    root = replace(geom, tilt=theta)
    h = root.full_depth
    insertion = tip_insertion_force(h, root, media)
    extraction = side_anchor_force(h, root, media)
    return 2.0 * insertion, 2.0 * extraction


@dataclass(frozen=True)
class DiameterSweep:
    """Per-diameter forces at fixed depth plus fitted log-log exponents."""

    diameters: tuple[float, ...]
    insertion: tuple[float, ...]
    extraction: tuple[float, ...]
    ratio: tuple[float, ...]
    insertion_exponent: float
    extraction_exponent: float


def diameter_sweep(diameters, depth: float, media: MediaProfile) -> DiameterSweep:
    """Constrained insertion and peak extraction across diameters at one depth.

    Uses hairless vertical tip extenders fully deployed to ``depth``.
    Exponents are least-squares slopes in log-log space; the model gives
    exactly 2 (insertion, tip area) and 1 (extraction, wall perimeter).
    """
    diameters = tuple(float(d) for d in diameters)
    if len(set(diameters)) < 3:
        raise ModelError("diameter sweep needs at least 3 distinct diameters")
    if any(d <= 0 for d in diameters):
        raise ModelError("diameters must be positive")
    _check_depth(depth)
    ins, ext, ratio = [], [], []
    for d in diameters:
        geom = AnchorGeometry(radius=d / 2, length=depth, mode=TIP_EXTENDER)
        f_in = tip_insertion_force(depth, geom, media)
        f_ex = peak_extraction_force(geom, media)
        ins.append(f_in)
        ext.append(f_ex)
        ratio.append(f_ex / f_in if f_in > 0 else math.nan)
    log_d = np.log(diameters)
    exp_in = float(np.polyfit(log_d, np.log(ins), 1)[0])
    exp_ex = float(np.polyfit(log_d, np.log(ext), 1)[0])
    return DiameterSweep(
        diameters=diameters,
        insertion=tuple(ins),
        extraction=tuple(ext),
        ratio=tuple(ratio),
        insertion_exponent=exp_in,
        extraction_exponent=exp_ex,
    )


@dataclass(frozen=True)
class ForceReport:
    """Depth-indexed force curves plus summary scalars for one anchor.

    ``insertion`` follows the geometry mode (tip-only for tip extenders,
    tip plus dynamic side for rigid intruders). ``extraction`` is the peak
    extraction force had growth stopped at each depth. ``net`` is the
    self-anchoring balance, present for tip extenders only, like
    ``critical_depth``.
    """

    depths: tuple[float, ...]
    insertion: tuple[float, ...]
    extraction: tuple[float, ...]
    net: tuple[float, ...] | None
    peak_insertion: float
    peak_extraction: float
    critical_depth: float | None
    extraction_to_insertion_ratio: float | None

    def __post_init__(self):
        n = len(self.depths)
        if len(self.insertion) != n or len(self.extraction) != n:
            raise ModelError("report arrays must share one length")
        if self.net is not None and len(self.net) != n:
            raise ModelError("report arrays must share one length")
        if any(b <= a for a, b in zip(self.depths, self.depths[1:])):
            raise ModelError("report depths must be strictly increasing")


def simulate(geom: AnchorGeometry, media: MediaProfile, depth_max: float | None = None,
             points: int = 121) -> ForceReport:
    """Sweep depth from 0 to full deployment and assemble a ForceReport."""
    if points < 2:
        raise ModelError("need at least 2 depth points")
    h_max = geom.full_depth if depth_max is None else float(depth_max)
    if not h_max > 0:
        raise ModelError(f"maximum depth must be positive, got {h_max}")
    depths = np.linspace(0.0, h_max, points)
    ins = [insertion_force(h, geom, media) for h in depths]
    ext = [extraction_force_at(h, geom, media) for h in depths]
    if geom.mode == TIP_EXTENDER:
        net = tuple(i - e for i, e in zip(ins, ext))
        h_star = critical_depth(geom, media)
    else:
        net = None
        h_star = None
    peak_in = max(ins)
    peak_ex = max(ext)
    ratio = peak_ex / peak_in if peak_in > 0 else None
    return ForceReport(
        depths=tuple(float(h) for h in depths),
        insertion=tuple(ins),
        extraction=tuple(ext),
        net=net,
        peak_insertion=peak_in,
        peak_extraction=peak_ex,
        critical_depth=h_star,
        extraction_to_insertion_ratio=ratio,
    )


# ----------------------------------------------------------------------
# Element-integration twins (the numerical oracle for the closed forms)
# ----------------------------------------------------------------------

def tip_force_by_integration(depth: float, geom: AnchorGeometry, media: MediaProfile,
                             element_size: float = DEFAULT_ELEMENT_SIZE) -> float:
    elements = discretize_anchor(geom, depth, element_size, motion=DOWNWARD)
    return integrate_vertical_force(tip_elements(elements), media) * math.cos(geom.tilt)


def side_force_by_integration(depth: float, geom: AnchorGeometry, media: MediaProfile,
                              element_size: float = DEFAULT_ELEMENT_SIZE) -> float:
    if depth == 0:
        return 0.0
    elements = discretize_anchor(geom, depth, element_size, motion=UPWARD)
    sides = side_elements(elements)
    return geom.kappa * integrate_vertical_force(sides, media) * math.cos(geom.tilt)


def rigid_force_by_integration(depth: float, geom: AnchorGeometry, media: MediaProfile,
                               element_size: float = DEFAULT_ELEMENT_SIZE) -> float:
    elements = discretize_anchor(geom, depth, element_size, motion=DOWNWARD)
    tip = integrate_vertical_force(tip_elements(elements), media)
    sides = side_elements(elements)
    side = integrate_vertical_force(sides, media) / media.rho if sides else 0.0
    return (tip + side) * math.cos(geom.tilt)


def _check_depth(depth: float) -> None:
    if depth < 0:
        raise ModelError(f"depth must be non-negative, got {depth}")
