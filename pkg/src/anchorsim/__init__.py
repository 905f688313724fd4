"""Force models, calibration, and design search for self-anchoring ground anchors.

The package predicts insertion, extraction, and net self-anchoring forces
of cylindrical bodies in dry granular beds with resistive force theory:
depth-proportional elemental stresses integrated over the body surfaces,
reduced to closed forms for tips and side walls. On top of the force laws
sit calibration fits for measured data and an exhaustive search over
staged multi-root anchor designs.

Typical use:

    from anchorsim import AnchorGeometry, load_media, critical_depth

    sand = load_media("loose_sand_calibrated")
    root = AnchorGeometry(radius=0.0075, length=0.45)
    h_star = critical_depth(root, sand)
"""

__version__ = "0.1.0"

from .calibrate import (
    CalibrationSample,
    fit_history_and_hair,
    fit_insertion_profile,
    fit_scale_factor,
    fit_tip_side_ratio,
    apply_tip_side_fit,
    read_samples_csv,
)
from .design import (
    AnchorConfig,
    ConfigMetrics,
    SearchConstraints,
    evaluate_config,
    optimize_config,
    split_comparison,
)
from .errors import AnchorsimError, ModelError, SchemaError
from .forces import (
    AnchorGeometry,
    DiameterSweep,
    ForceReport,
    angled_pair_forces,
    critical_depth,
    diameter_sweep,
    insertion_force,
    net_self_anchor_force,
    peak_extraction_force,
    rigid_insertion_force,
    side_anchor_force,
    simulate,
    tip_insertion_force,
)
from .media import (
    MediaProfile,
    elemental_stress,
    generic_sand_profile,
    load_media,
    save_media,
)
from .mesh import SurfaceElement, discretize_anchor, integrate_vertical_force

__all__ = [
    "__version__",
    # media
    "MediaProfile",
    "elemental_stress",
    "generic_sand_profile",
    "load_media",
    "save_media",
    # mesh
    "SurfaceElement",
    "discretize_anchor",
    "integrate_vertical_force",
    # forces
    "AnchorGeometry",
    "ForceReport",
    "DiameterSweep",
    "tip_insertion_force",
    "side_anchor_force",
    "rigid_insertion_force",
    "insertion_force",
    "peak_extraction_force",
    "net_self_anchor_force",
    "critical_depth",
    "angled_pair_forces",
    "diameter_sweep",
    "simulate",
    # calibration
    "CalibrationSample",
    "fit_scale_factor",
    "fit_history_and_hair",
    "fit_tip_side_ratio",
    "fit_insertion_profile",
    "apply_tip_side_fit",
    "read_samples_csv",
    # design
    "AnchorConfig",
    "ConfigMetrics",
    "SearchConstraints",
    "evaluate_config",
    "split_comparison",
    "optimize_config",
    # errors
    "AnchorsimError",
    "ModelError",
    "SchemaError",
]
