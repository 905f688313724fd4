"""Command-line front end.

Every subcommand assembles a :class:`~anchorsim.scenario.Scenario`, runs it
through the same engine as scenario documents (``anchorsim run file.json``),
and emits the result in the requested format. Numerical work happens in the
model modules only.

Exit codes: 0 success, 1 model or contract error, 2 parse or schema error.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .errors import ModelError, SchemaError
from .report import FORMATS, emit_plot, emit_report
from .scenario import (
    Scenario,
    execute,
    load_config,
    load_geometry,
    load_scenario,
    parse_geometry,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="anchorsim",
        description=(
            "Granular-anchor force models: simulate insertion and extraction, "
            "find critical self-anchoring depths, calibrate media profiles, "
            "and search staged multi-root designs."
        ),
    )
    parser.add_argument("--version", action="version", version=f"anchorsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--media", help="media profile JSON path or built-in name")
    common.add_argument("--out", help="output file path (default: print to stdout)")
    common.add_argument(
        "--format",
        choices=FORMATS,
        default="summary",
        help="output format (default: summary)",
    )
    common.add_argument(
        "--plot", help="also render the report figure (SVG) to this path"
    )
    common.add_argument(
        "--element-size",
        type=float,
        default=1.0e-3,
        metavar="M",
        help="element size for mesh-based integration [m] (default 0.001)",
    )
    common.add_argument(
        "--seed", type=int, default=None,
        help="reserved; the model is deterministic and ignores it",
    )

    geom = argparse.ArgumentParser(add_help=False)
    geom.add_argument("--geometry", help="geometry JSON file")
    geom.add_argument("--diameter-m", type=float, help="body diameter [m]")
    geom.add_argument("--diameter-cm", type=float, help="body diameter [cm]")
    geom.add_argument("--length-m", type=float, help="axial length [m]")
    geom.add_argument("--length-cm", type=float, help="axial length [cm]")
    geom.add_argument("--tilt-deg", type=float, default=0.0, help="tilt from vertical [deg]")
    geom.add_argument("--skin", choices=("hairless", "hairy"), default="hairless")
    geom.add_argument("--hair-factor", type=float, help="extraction multiplier for hairy skin")
    geom.add_argument(
        "--mode", choices=("tip_extender", "rigid_intruder"), default="tip_extender"
    )

    p = sub.add_parser("run", help="execute a scenario document",
                       parents=[common])
    p.add_argument("scenario", help="scenario JSON file")

    p = sub.add_parser("simulate", help="force-depth curves for one anchor",
                       parents=[common, geom])
    p.add_argument("--depth-max-m", type=float, help="sweep depth limit [m]")
    p.add_argument("--points", type=int, default=121, help="depth samples (default 121)")
    p.add_argument(
        "--integration", choices=("closed", "mesh"), default="closed",
        help="closed-form laws or elemental surface integration",
    )

    sub.add_parser("critical-depth", help="self-anchoring crossover depth",
                   parents=[common, geom])

    p = sub.add_parser("sweep-diameter", help="diameter scaling at fixed depth",
                       parents=[common])
    p.add_argument("--depth-m", type=float, required=True, help="deployment depth [m]")
    p.add_argument("--diameters", help="comma-separated diameters [m]")
    p.add_argument(
        "--diameter-span", nargs=3, type=float, metavar=("MIN", "MAX", "COUNT"),
        help="evenly spaced diameters [m]",
    )

    p = sub.add_parser("sweep-angle", help="X-pair forces across tilt angles",
                       parents=[common, geom])
    p.add_argument(
        "--angles", default="0,15,30,45,60",
        help="comma-separated tilt angles [deg] (default 0,15,30,45,60)",
    )

    p = sub.add_parser("calibrate", help="fit media parameters from measurements",
                       parents=[common, geom])
    p.add_argument("--samples", help="CSV with headers depth_m,force_N,regime")
    p.add_argument(
        "--fit", choices=("auto", "zeta", "joint"), default="auto",
        help="fit selection for insertion data (default auto)",
    )
    p.add_argument("--out-media", help="write the calibrated profile here")
    p.add_argument("--peak-intruder", type=float, help="rigid intruder extraction peak [N]")
    p.add_argument("--peak-hairless", type=float, help="hairless extraction peak [N]")
    p.add_argument("--peak-hairy", type=float, help="hairy extraction peak [N]")

    p = sub.add_parser("evaluate", help="score a staged multi-root design",
                       parents=[common])
    p.add_argument("--config", required=True, help="anchor configuration JSON file")

    p = sub.add_parser("optimize", help="search the staged design grid",
                       parents=[common])
    p.add_argument("--device-weight-n", type=float, required=True,
                   help="device weight [N]")
    p.add_argument("--diameters", help="comma-separated diameter grid [m]")
    p.add_argument("--lengths", help="comma-separated length grid [m]")
    p.add_argument("--angles", help="comma-separated angle grid [deg]")
    p.add_argument("--max-roots", type=int, default=6)
    p.add_argument("--max-stages", type=int, default=3)
    p.add_argument("--skin", choices=("hairless", "hairy"), default="hairy")

    return parser


def _floats(text: str, flag: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise SchemaError(f"expected comma-separated numbers: {exc}", field=flag) from exc


def _geometry_from_args(args):
    if getattr(args, "geometry", None):
        return load_geometry(args.geometry)
    diameter = args.diameter_m
    if diameter is None and args.diameter_cm is not None:
        diameter = args.diameter_cm / 100.0
    length = args.length_m
    if length is None and args.length_cm is not None:
        length = args.length_cm / 100.0
    if diameter is None and length is None:
        return None
    if diameter is None or length is None:
        raise SchemaError(
            "geometry needs both a diameter and a length", field="geometry"
        )
    doc = {
        "diameter_m": diameter,
        "length_m": length,
        "tilt_deg": args.tilt_deg,
        "skin": args.skin,
        "mode": args.mode,
    }
    if args.hair_factor is not None:
        doc["hair_factor"] = args.hair_factor
    return parse_geometry(doc, source="command line")


def _scenario_from_args(args) -> Scenario:
    if args.command == "run":
        scenario = load_scenario(args.scenario)
        # Command-line output settings override the document's.
        if args.out:
            scenario.out_path = args.out
        if args.format != "summary":
            scenario.out_format = args.format
        if args.plot:
            scenario.plot_path = args.plot
        if args.media:
            scenario.media_ref = args.media
        return scenario

    params: dict = {}
    config = None
    media_ref = args.media
    if args.command == "simulate":
        params["points"] = args.points
        params["integration"] = args.integration
        if args.depth_max_m is not None:
            params["depth_max_m"] = args.depth_max_m
    elif args.command == "sweep-diameter":
        if args.diameters:
            params["diameters_m"] = _floats(args.diameters, "--diameters")
        elif args.diameter_span:
            lo, hi, count = args.diameter_span
            n = int(count)
            if n < 2:
                raise SchemaError("diameter span needs at least 2 points", field="--diameter-span")
            step = (hi - lo) / (n - 1)
            params["diameters_m"] = [lo + i * step for i in range(n)]
        else:
            raise SchemaError(
                "sweep-diameter needs --diameters or --diameter-span", field="--diameters"
            )
        params["depth_m"] = args.depth_m
    elif args.command == "sweep-angle":
        params["angles_deg"] = _floats(args.angles, "--angles")
    elif args.command == "calibrate":
        if args.fit != "auto":
            params["fit"] = args.fit
        if args.out_media:
            params["out_media"] = args.out_media
        peaks = (args.peak_intruder, args.peak_hairless, args.peak_hairy)
        if any(v is not None for v in peaks):
            if any(v is None for v in peaks):
                raise SchemaError(
                    "peak calibration needs --peak-intruder, --peak-hairless "
                    "and --peak-hairy together",
                    field="--peak-intruder",
                )
            params["peaks"] = {
                "intruder_N": args.peak_intruder,
                "hairless_N": args.peak_hairless,
                "hairy_N": args.peak_hairy,
            }
    elif args.command == "evaluate":
        config, config_media = load_config(args.config)
        media_ref = media_ref or config_media
    elif args.command == "optimize":
        params["device_weight_N"] = args.device_weight_n
        if args.diameters:
            params["diameters_m"] = _floats(args.diameters, "--diameters")
        if args.lengths:
            params["lengths_m"] = _floats(args.lengths, "--lengths")
        if args.angles:
            params["angles_deg"] = _floats(args.angles, "--angles")
        params["max_roots"] = args.max_roots
        params["max_stages"] = args.max_stages
        params["skin"] = args.skin

    geometry = None
    if args.command in ("simulate", "critical-depth", "sweep-angle", "calibrate"):
        geometry = _geometry_from_args(args)

    return Scenario(
        command=args.command,
        media_ref=media_ref,
        geometry=geometry,
        config=config,
        samples_path=getattr(args, "samples", None),
        params=params,
        out_path=args.out,
        out_format=args.format,
        plot_path=args.plot,
        element_size=args.element_size,
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        scenario = _scenario_from_args(args)
        result = execute(scenario)
        text = emit_report(result, scenario.out_format, scenario.out_path)
        if scenario.plot_path:
            emit_plot(result, scenario.plot_path)
    except SchemaError as exc:
        print(f"anchorsim: {exc}", file=sys.stderr)
        return 2
    except ModelError as exc:
        print(f"anchorsim: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"anchorsim: {exc}", file=sys.stderr)
        return 1
    if text is not None:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
