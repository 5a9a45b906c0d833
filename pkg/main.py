"""Command line front end: single-point queries, sweeps and figure reproduction.

Examples:
    python main.py probs --kappa 0.26 --gamma 0 --length 2.1 --idealized
    python main.py spectrum --kappa 0.26 --gamma-max 0.63 --points 100
    python main.py figure fig4c --output out.csv
"""
import argparse
import json
import logging
import sys
from typing import Any, Dict, List, Optional

from config import SUPPORTED_FIGURES, VERSION, load_config
from dependencies import cleanup_services, get_experiment_service, get_table_writer
from exceptions import ConfigurationError, PtCouplerException
from services.table_writer import SUPPORTED_FORMATS

log = logging.getLogger(__name__)

SINGLE_POINT_COMMANDS = ("spectrum", "probs", "hom", "visibility")

# argparse dest -> config key
FLAG_TO_CONFIG = {
    "kappa": "kappa",
    "length": "length",
    "gamma_max": "gamma_max",
    "points": "gamma_points",
    "tau_c": "tau_c",
    "vmax": "v_max",
    "accidentals": "accidentals",
    "normalization": "normalization",
    "length_tolerance": "length_tolerance",
    "workers": "max_workers",
}


def _shared_flags() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--kappa", type=float, help="coupling rate kappa in cm^-1")
    shared.add_argument("--gamma", type=float, default=0.0, help="loss rate gamma in cm^-1 (single point, default 0)")
    shared.add_argument("--gamma-max", type=float, help="sweep gamma from 0 to this value in cm^-1")
    shared.add_argument("--points", type=int, help="number of gamma points in the sweep")
    shared.add_argument("--length", type=float, help="coupler length z in cm")
    shared.add_argument("--length-tolerance", type=float, help="fabrication length tolerance dz in cm (fig4c band)")
    shared.add_argument("--sandwiched", action="store_true", default=None, help="use the R-sandwiched coupler instead of the bare one")
    shared.add_argument("--tau-c", type=float, help="photon coherence time in ps")
    shared.add_argument("--vmax", type=float, help="maximum source visibility in [0, 1]")
    shared.add_argument("--accidentals", type=float, help="accidental floor as a fraction of the distinguishable rate")
    shared.add_argument("--normalization", choices=["none", "survivors", "dist-rate"], help="probability normalization (dist-rate: ratio to distinguishable photons)")
    shared.add_argument("--idealized", action="store_true", default=None, help="use the balanced length z = pi/(4 kappa) in cm")
    shared.add_argument("--format", choices=SUPPORTED_FORMATS, default="csv", help="sweep table format")
    shared.add_argument("--output", help="sweep table path (default stdout)")
    shared.add_argument("--config", help="YAML config file with 'key: value' lines")
    shared.add_argument("--workers", type=int, help="threads used to evaluate sweep rows")
    shared.add_argument("--verbose", "-v", action="store_true", help="log progress to stderr")
    return shared


def build_parser() -> argparse.ArgumentParser:
    shared = _shared_flags()
    parser = argparse.ArgumentParser(
        prog="ptcoupler-hom",
        description="Two-photon interference in passive PT-symmetric lossy directional couplers",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    commands = parser.add_subparsers(dest="command", required=True)

    commands.add_parser("spectrum", parents=[shared], help="eigenvalue branches versus gamma (table)")
    commands.add_parser("probs", parents=[shared], help="two-photon probabilities at one gamma (JSON)")
    commands.add_parser("hom", parents=[shared], help="HOM trace over the delay grid at one gamma (table)")
    commands.add_parser("visibility", parents=[shared], help="HOM visibility at one gamma (JSON)")
    figure = commands.add_parser("figure", parents=[shared], help="reproduce a figure data set (table)")
    figure.add_argument(
        "figure_id",
        nargs="?",
        choices=list(SUPPORTED_FIGURES),
        help="figure pipeline (default: figure_id from the config)",
    )
    return parser


def _overrides(args: argparse.Namespace) -> Dict[str, Any]:
    overrides = {key: getattr(args, dest) for dest, key in FLAG_TO_CONFIG.items()}
    if args.sandwiched:
        overrides["kind"] = "sandwiched"
    if args.idealized:
        overrides["idealized"] = True
    if args.verbose:
        overrides["log_level"] = "INFO"
    return {k: v for k, v in overrides.items() if v is not None}


def _run(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    cfg = load_config(args.config, _overrides(args))
    cleanup_services()
    logging.getLogger().setLevel(cfg.log_level)

    if args.command in SINGLE_POINT_COMMANDS and "kappa" not in cfg.explicit_keys:
        parser.error(f"{args.command} needs --kappa (or 'kappa' in the config file)")

    service = get_experiment_service()
    writer = get_table_writer()
    destination = args.output or sys.stdout

    if args.command == "probs":
        result = service.point_probs(service.build_spec(), args.gamma)
    elif args.command == "visibility":
        result = service.point_visibility(service.build_spec(), args.gamma)
    else:
        if args.command == "spectrum":
            spec = service.build_spec("fig2b")
            table = service.run_fig2b(spec.kappa, spec.gamma_grid)
        elif args.command == "hom":
            table = service.run_hom(service.build_spec(), args.gamma)
        else:
            figure_id = args.figure_id or cfg.figure_id
            if figure_id is None:
                parser.error("figure needs a figure id (argument or 'figure_id' in the config file)")
            table = service.run_figure(figure_id)
        writer.write_table(table, args.format, destination)
        return 0

    json.dump(result, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    """Run the CLI; returns 0 on success, 2 on usage errors, 1 on runtime errors"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(asctime)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )

    try:
        return _run(args, parser)
    except SystemExit as e:
        return int(e.code or 0)
    except ConfigurationError as e:
        log.error(f"Configuration error: {e}")
        print(parser.format_usage(), end="", file=sys.stderr)
        return 2
    except (PtCouplerException, OSError) as e:
        log.error(f"{type(e).__name__}: {e}", exc_info=True)
        return 1


if __name__ == "__main__":
    sys.exit(main())
