"""Scenario documents: parse command descriptions and execute them.

A scenario is one command (simulate, calibrate, critical-depth,
sweep-diameter, sweep-angle, evaluate, optimize) plus the files and
parameters it needs. Scenarios arrive either as JSON documents with a
``schema: 1`` marker or assembled by the CLI from flags; both routes meet
in :class:`Scenario` and :func:`execute`.

File conventions: lengths and forces are SI (meters, newtons); angles in
files and flags are degrees and are converted to radians on parse.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from . import calibrate as cal
from . import design, forces, media as media_mod
from .errors import ModelError, SchemaError
from .report import TableResult

COMMANDS = (
    "simulate",
    "calibrate",
    "critical-depth",
    "sweep-diameter",
    "sweep-angle",
    "evaluate",
    "optimize",
)

SCHEMA_VERSION = 1


@dataclass
class Scenario:
    """One executable command with its inputs resolved."""

    command: str
    media_ref: str | None = None
    geometry: forces.AnchorGeometry | None = None
    config: design.AnchorConfig | None = None
    samples_path: str | None = None
    params: dict = field(default_factory=dict)
    out_path: str | None = None
    out_format: str = "summary"
    plot_path: str | None = None
    element_size: float = 1.0e-3

    def load_media(self) -> media_mod.MediaProfile:
        if not self.media_ref:
            raise SchemaError("scenario needs a media profile", field="media")
        try:
            return media_mod.load_media(self.media_ref)
        except FileNotFoundError as exc:
            raise SchemaError(f"media file not found: {exc}", source=self.media_ref) from exc


# ----------------------------------------------------------------------
# Document parsing
# ----------------------------------------------------------------------

def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except FileNotFoundError as exc:
        raise SchemaError(f"file not found: {exc}", source=path) from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg}", source=path, line=exc.lineno) from exc


def _check_schema(doc: dict, source) -> None:
    if not isinstance(doc, dict):
        raise SchemaError("document must be a JSON object", source=source)
    version = doc.get("schema")
    if version != SCHEMA_VERSION:
        raise SchemaError(
            f"unsupported or missing schema version {version!r} (expected {SCHEMA_VERSION})",
            source=source,
            field="schema",
        )


def parse_geometry(doc: dict, source=None) -> forces.AnchorGeometry:
    """Build an AnchorGeometry from a document block (SI lengths, degree angles)."""
    if not isinstance(doc, dict):
        raise SchemaError("geometry must be an object", source=source, field="geometry")
    for key in ("diameter_m", "length_m"):
        if key not in doc:
            raise SchemaError("missing required field", source=source, field=key)
    try:
        geom = forces.AnchorGeometry(
            radius=float(doc["diameter_m"]) / 2.0,
            length=float(doc["length_m"]),
            tilt=math.radians(float(doc.get("tilt_deg", 0.0))),
            skin=str(doc.get("skin", forces.HAIRLESS)),
            hair_factor=(
                float(doc["hair_factor"]) if doc.get("hair_factor") is not None else None
            ),
            mode=str(doc.get("mode", forces.TIP_EXTENDER)),
        )
    except (TypeError, ValueError, ModelError) as exc:
        raise SchemaError(str(exc), source=source, field="geometry") from exc
    return geom


def geometry_to_dict(geom: forces.AnchorGeometry) -> dict:
    return {
        "diameter_m": 2.0 * geom.radius,
        "length_m": geom.length,
        "tilt_deg": math.degrees(geom.tilt),
        "skin": geom.skin,
        "hair_factor": geom.hair_factor,
        "mode": geom.mode,
    }


def load_geometry(path: str) -> forces.AnchorGeometry:
    doc = _load_json(path)
    _check_schema(doc, path)
    return parse_geometry(doc, source=path)


def parse_config(doc: dict, source=None) -> tuple[design.AnchorConfig, str | None]:
    """Build an AnchorConfig; returns (config, optional media reference)."""
    if "device_weight_N" not in doc:
        raise SchemaError("missing required field", source=source, field="device_weight_N")
    stages_doc = doc.get("stages")
    if not isinstance(stages_doc, list) or not stages_doc:
        raise SchemaError(
            "stages must be a non-empty list", source=source, field="stages"
        )
    stages = []
    for i, stage in enumerate(stages_doc):
        roots_doc = stage.get("roots") if isinstance(stage, dict) else None
        if not isinstance(roots_doc, list) or not roots_doc:
            raise SchemaError(
                "stage needs a non-empty roots list",
                source=source,
                field=f"stages[{i}]",
            )
        stages.append(tuple(parse_geometry(r, source=source) for r in roots_doc))
    try:
        config = design.AnchorConfig(
            stages=tuple(stages), device_weight=float(doc["device_weight_N"])
        )
    except (TypeError, ValueError, ModelError) as exc:
        raise SchemaError(str(exc), source=source, field="stages") from exc
    media_ref = doc.get("media")
    return config, None if media_ref is None else str(media_ref)


def load_config(path: str) -> tuple[design.AnchorConfig, str | None]:
    doc = _load_json(path)
    _check_schema(doc, path)
    return parse_config(doc, source=path)


def load_scenario(path: str) -> Scenario:
    doc = _load_json(path)
    _check_schema(doc, path)
    command = doc.get("command")
    if command not in COMMANDS:
        raise SchemaError(
            f"unknown command {command!r}; expected one of {', '.join(COMMANDS)}",
            source=path,
            field="command",
        )
    geometry = None
    if "geometry" in doc:
        block = doc["geometry"]
        geometry = (
            load_geometry(block) if isinstance(block, str) else parse_geometry(block, path)
        )
    config = None
    config_media = None
    if "config" in doc:
        block = doc["config"]
        if isinstance(block, str):
            config, config_media = load_config(block)
        else:
            config, config_media = parse_config(block, path)
    params = doc.get("params", {})
    if not isinstance(params, dict):
        raise SchemaError("params must be an object", source=path, field="params")
    output = doc.get("output", {})
    if not isinstance(output, dict):
        raise SchemaError("output must be an object", source=path, field="output")
    out_format = output.get("format", "summary")
    # long-form names accepted in documents; the CLI flag uses the short ones
    out_format = {"svg-plot": "svg", "human-summary": "summary"}.get(out_format, out_format)
    if out_format not in ("csv", "svg", "summary"):
        raise SchemaError(
            f"unknown output format {out_format!r}", source=path, field="output.format"
        )
    element_size = params.get("element_size_m", 1.0e-3)
    try:
        element_size = float(element_size)
    except (TypeError, ValueError) as exc:
        raise SchemaError(str(exc), source=path, field="params.element_size_m") from exc
    return Scenario(
        command=command,
        media_ref=doc.get("media") or config_media,
        geometry=geometry,
        config=config,
        samples_path=doc.get("samples"),
        params=params,
        out_path=output.get("path"),
        out_format=out_format,
        plot_path=output.get("plot"),
        element_size=element_size,
    )


# ----------------------------------------------------------------------
# Execution
# ----------------------------------------------------------------------

def execute(scenario: Scenario) -> TableResult:
    """Run one scenario and return its report table.

    This is a thin adapter: every number in the result comes from the
    model modules, never from logic local to this function.
    """
    handler = _HANDLERS.get(scenario.command)
    if handler is None:
        raise SchemaError(f"unknown command {scenario.command!r}", field="command")
    return handler(scenario)


def _require_geometry(scn: Scenario) -> forces.AnchorGeometry:
    if scn.geometry is None:
        raise SchemaError(
            f"command '{scn.command}' needs a geometry block", field="geometry"
        )
    return scn.geometry


def _float_param(scn: Scenario, key: str, default=None) -> float | None:
    if key not in scn.params:
        if default is None:
            return None
        return default
    try:
        return float(scn.params[key])
    except (TypeError, ValueError) as exc:
        raise SchemaError(str(exc), field=f"params.{key}") from exc


def _run_simulate(scn: Scenario) -> TableResult:
    geom = _require_geometry(scn)
    profile = scn.load_media()
    points = int(_float_param(scn, "points", 121))
    depth_max = _float_param(scn, "depth_max_m")
    report = forces.simulate(geom, profile, depth_max=depth_max, points=points)
    if scn.params.get("integration", "closed") == "mesh":
        ins = [
            forces.rigid_force_by_integration(h, geom, profile, scn.element_size)
            if geom.mode == forces.RIGID_INTRUDER
            else forces.tip_force_by_integration(h, geom, profile, scn.element_size)
            for h in report.depths
        ]
        report = forces.ForceReport(
            depths=report.depths,
            insertion=tuple(ins),
            extraction=report.extraction,
            net=report.net,
            peak_insertion=max(ins),
            peak_extraction=report.peak_extraction,
            critical_depth=report.critical_depth,
            extraction_to_insertion_ratio=(
                report.peak_extraction / max(ins) if max(ins) > 0 else None
            ),
        )
    rows = []
    for i, h in enumerate(report.depths):
        rows.append(
            (
                h,
                report.insertion[i],
                report.extraction[i],
                report.net[i] if report.net is not None else None,
            )
        )
    result = TableResult(
        columns=("depth_m", "insertion_N", "extraction_N", "net_N"),
        rows=rows,
        summary={
            "command": "simulate",
            "media": profile.name,
            "mode": geom.mode,
            "diameter_m": 2 * geom.radius,
            "length_m": geom.length,
            "tilt_deg": math.degrees(geom.tilt),
            "peak_insertion_N": report.peak_insertion,
            "peak_extraction_N": report.peak_extraction,
            "extraction_to_insertion_ratio": report.extraction_to_insertion_ratio,
            "critical_depth_m": report.critical_depth,
        },
        title=f"Force-depth response ({geom.mode}, d = {2 * geom.radius:.3g} m)",
        x_label="depth [m]",
        y_label="force [N]",
        curves=[
            ("insertion", report.depths, report.insertion),
            ("extraction", report.depths, report.extraction),
        ],
    )
    if report.net is not None:
        result.curves.append(("net hold-down", report.depths, report.net))
        if report.critical_depth is not None:
            result.markers.append(
                (f"h* = {report.critical_depth:.3f} m", report.critical_depth, 0.0)
            )
    return result


def _run_critical_depth(scn: Scenario) -> TableResult:
    geom = _require_geometry(scn)
    profile = scn.load_media()
    h_star = forces.critical_depth(geom, profile)
    span = geom.full_depth if h_star is None else max(1.5 * h_star, geom.full_depth)
    depths = [span * i / 120 for i in range(121)]
    net = [forces.net_self_anchor_force(h, geom, profile) for h in depths]
    result = TableResult(
        columns=("parameter", "value"),
        rows=[
            ("critical_depth_m", h_star),
            ("diameter_m", 2 * geom.radius),
            ("hair_factor", geom.kappa),
        ],
        summary={
            "command": "critical-depth",
            "media": profile.name,
            "diameter_m": 2 * geom.radius,
            "critical_depth_m": h_star,
            "self_anchoring": h_star is not None and h_star <= geom.full_depth,
        },
        title="Net hold-down force vs depth",
        x_label="depth [m]",
        y_label="net force [N]",
        curves=[("net hold-down", depths, net)],
    )
    if h_star is not None:
        result.markers.append((f"h* = {h_star:.3f} m", h_star, 0.0))
    return result


def _run_sweep_diameter(scn: Scenario) -> TableResult:
    profile = scn.load_media()
    depth = _float_param(scn, "depth_m")
    if depth is None:
        raise SchemaError("sweep-diameter needs params.depth_m", field="params.depth_m")
    diameters = scn.params.get("diameters_m")
    if not isinstance(diameters, (list, tuple)) or not diameters:
        raise SchemaError(
            "sweep-diameter needs params.diameters_m (list of meters)",
            field="params.diameters_m",
        )
    sweep = forces.diameter_sweep([float(d) for d in diameters], depth, profile)
    rows = list(zip(sweep.diameters, sweep.insertion, sweep.extraction, sweep.ratio))
    return TableResult(
        columns=("diameter_m", "insertion_N", "extraction_N", "ratio"),
        rows=rows,
        footer=[("loglog_exponent", sweep.insertion_exponent, sweep.extraction_exponent)],
        summary={
            "command": "sweep-diameter",
            "media": profile.name,
            "depth_m": depth,
            "insertion_exponent": sweep.insertion_exponent,
            "extraction_exponent": sweep.extraction_exponent,
        },
        title=f"Diameter scaling at {depth:.3g} m depth",
        x_label="diameter [m]",
        y_label="force [N]",
        curves=[
            ("insertion", sweep.diameters, sweep.insertion),
            ("extraction", sweep.diameters, sweep.extraction),
        ],
    )


def _run_sweep_angle(scn: Scenario) -> TableResult:
    geom = _require_geometry(scn)
    profile = scn.load_media()
    angles = scn.params.get("angles_deg")
    if not isinstance(angles, (list, tuple)) or not angles:
        raise SchemaError(
            "sweep-angle needs params.angles_deg (list of degrees)",
            field="params.angles_deg",
        )
    rows = []
    for angle in angles:
        theta = math.radians(float(angle))
        ins, ext = forces.angled_pair_forces(theta, geom, profile)
        rows.append((float(angle), ins, ext, ext / ins if ins > 0 else None))
    return TableResult(
        columns=("angle_deg", "insertion_N", "extraction_N", "ratio"),
        rows=rows,
        summary={
            "command": "sweep-angle",
            "media": profile.name,
            "pair_diameter_m": 2 * geom.radius,
            "pair_length_m": geom.length,
        },
        title="Angled-pair forces vs tilt",
        x_label="angle from vertical [deg]",
        y_label="force [N]",
        curves=[
            ("insertion", [r[0] for r in rows], [r[1] for r in rows]),
            ("extraction", [r[0] for r in rows], [r[2] for r in rows]),
        ],
    )


def _run_calibrate(scn: Scenario) -> TableResult:
    profile = scn.load_media()
    rows: list[tuple] = []
    summary: dict = {"command": "calibrate", "media": profile.name}
    warnings: tuple[str, ...] = ()
    peaks = scn.params.get("peaks")
    updated = profile
    if peaks is not None:
        try:
            fit = cal.fit_history_and_hair(
                float(peaks["intruder_N"]),
                float(peaks["hairless_N"]),
                float(peaks["hairy_N"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(
                f"peaks needs intruder_N, hairless_N, hairy_N: {exc}",
                field="params.peaks",
            ) from exc
        updated = profile.with_rho(fit.rho)
        warnings = fit.warnings
        rows += [("rho", fit.rho), ("hair_factor", fit.kappa)]
        summary.update(rho=fit.rho, hair_factor=fit.kappa)
    else:
        if scn.samples_path is None:
            raise SchemaError(
                "calibrate needs a samples CSV or extraction peaks", field="samples"
            )
        samples = cal.read_samples_csv(scn.samples_path)
        geom = _require_geometry(scn)
        regime = samples[0].regime
        mode = scn.params.get("fit", "auto")
        if regime == cal.SELF_ANCHOR_WEIGHT:
            fit = cal.fit_tip_side_ratio(samples, geom, profile)
            updated = cal.apply_tip_side_fit(profile, fit)
            warnings = fit.warnings
            rows += [
                ("tip_coefficient_N_per_m3", fit.k_t),
                ("side_coefficient_N_per_m3", fit.k_s),
                ("tip_side_ratio", fit.ratio),
                ("critical_depth_m", fit.critical_depth),
                ("rms_N", fit.rms),
                ("zeta", updated.zeta),
            ]
            summary.update(
                tip_side_ratio=fit.ratio,
                critical_depth_m=fit.critical_depth,
                rms_N=fit.rms,
                zeta=updated.zeta,
            )
        elif regime == cal.RIGID_INSERTION and mode == "joint":
            fit = cal.fit_insertion_profile(samples, geom, profile)
            updated = profile.with_zeta(fit.zeta)
            if fit.rho is not None:
                updated = updated.with_rho(fit.rho)
            warnings = fit.warnings
            rows += [("zeta", fit.zeta), ("rho", fit.rho), ("rms_N", fit.rms)]
            summary.update(zeta=fit.zeta, rho=fit.rho, rms_N=fit.rms)
        else:
            fit = cal.fit_scale_factor(samples, geom, profile)
            updated = profile.with_zeta(fit.zeta)
            warnings = fit.warnings
            rows += [("zeta", fit.zeta), ("rms_N", fit.rms), ("regime", fit.regime)]
            summary.update(zeta=fit.zeta, rms_N=fit.rms, regime=fit.regime)
    out_media = scn.params.get("out_media")
    if out_media:
        media_mod.save_media(updated, str(out_media))
        rows.append(("calibrated_media", out_media))
        summary["calibrated_media"] = out_media
    for i, message in enumerate(warnings, start=1):
        rows.append((f"warning_{i}", message))
        summary[f"warning_{i}"] = message
    return TableResult(columns=("parameter", "value"), rows=rows, summary=summary)


def _run_evaluate(scn: Scenario) -> TableResult:
    if scn.config is None:
        raise SchemaError("evaluate needs a config block", field="config")
    profile = scn.load_media()
    metrics = design.evaluate_config(scn.config, profile)
    rows = []
    for i, stage in enumerate(scn.config.stages):
        rows.append(
            (
                i + 1,
                len(stage),
                metrics.stage_required[i],
                metrics.stage_available[i],
                metrics.stage_available[i] - metrics.stage_required[i],
            )
        )
    return TableResult(
        columns=("stage", "n_roots", "required_N", "available_N", "margin_N"),
        rows=rows,
        footer=[
            ("total_extraction_N", metrics.total_extraction),
            ("anchoring_to_weight", metrics.anchoring_to_weight),
            ("feasible", metrics.feasible),
        ],
        summary={
            "command": "evaluate",
            "media": profile.name,
            "stages": len(scn.config.stages),
            "roots": len(scn.config.roots),
            "device_weight_N": scn.config.device_weight,
            "total_extraction_N": metrics.total_extraction,
            "anchoring_to_weight": metrics.anchoring_to_weight,
            "worst_margin_N": metrics.worst_margin,
            "feasible": metrics.feasible,
        },
        title="Stage force budget",
        x_label="stage",
        y_label="force [N]",
        curves=[
            ("required", list(range(1, len(rows) + 1)), [r[2] for r in rows]),
            ("available", list(range(1, len(rows) + 1)), [r[3] for r in rows]),
        ],
    )


def _run_optimize(scn: Scenario) -> TableResult:
    profile = scn.load_media()
    weight = _float_param(scn, "device_weight_N")
    if weight is None:
        raise SchemaError("optimize needs params.device_weight_N", field="params.device_weight_N")
    kwargs = {}
    if "diameters_m" in scn.params:
        kwargs["diameters"] = tuple(float(d) for d in scn.params["diameters_m"])
    if "lengths_m" in scn.params:
        kwargs["lengths"] = tuple(float(l) for l in scn.params["lengths_m"])
    if "angles_deg" in scn.params:
        kwargs["angles_deg"] = tuple(float(a) for a in scn.params["angles_deg"])
    if "max_roots" in scn.params:
        kwargs["max_roots"] = int(scn.params["max_roots"])
    if "max_stages" in scn.params:
        kwargs["max_stages"] = int(scn.params["max_stages"])
    if "skin" in scn.params:
        kwargs["skin"] = str(scn.params["skin"])
    try:
        constraints = design.SearchConstraints(device_weight=weight, **kwargs)
    except ModelError as exc:
        raise SchemaError(str(exc), field="params") from exc
    result = design.optimize_config(constraints, profile)
    rows = []
    for i, stage in enumerate(result.config.stages):
        root = stage[0]
        rows.append(
            (i + 1, len(stage), 2 * root.radius, root.length, math.degrees(root.tilt))
        )
    metrics = result.metrics
    return TableResult(
        columns=("stage", "count", "diameter_m", "length_m", "tilt_deg"),
        rows=rows,
        footer=[
            ("feasible_design_found", result.feasible_found),
            ("total_extraction_N", metrics.total_extraction),
            ("anchoring_to_weight", metrics.anchoring_to_weight),
            ("worst_margin_N", metrics.worst_margin),
        ],
        summary={
            "command": "optimize",
            "media": profile.name,
            "device_weight_N": weight,
            "feasible_design_found": result.feasible_found,
            "stages": len(result.config.stages),
            "roots": len(result.config.roots),
            "total_extraction_N": metrics.total_extraction,
            "anchoring_to_weight": metrics.anchoring_to_weight,
            "worst_margin_N": metrics.worst_margin,
        },
    )


_HANDLERS = {
    "simulate": _run_simulate,
    "critical-depth": _run_critical_depth,
    "sweep-diameter": _run_sweep_diameter,
    "sweep-angle": _run_sweep_angle,
    "calibrate": _run_calibrate,
    "evaluate": _run_evaluate,
    "optimize": _run_optimize,
}
