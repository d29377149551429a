"""Command-line entry point of the heat-kernel lab."""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from .core.config import apply_overrides, load_config, load_scenario_config
from .core.exceptions import ConfigException, LevyLabException
from .core.pipeline import VerificationPipeline
from .core.scenarios import CheckSpec, Scenario, builtin_scenarios, find_scenario

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_ERROR = 2

MODEL_KEYS = ("family", "d", "alpha", "m", "beta", "delta", "rate", "A")


def setup_logging(log_level: str, log_file: str = "logs/levylab.log"):
    """Set up logging configuration."""
    log_path = Path(log_file)
    log_path.parent.mkdir(exist_ok=True)

    logging.basicConfig(
        level=getattr(logging, log_level.upper()),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[
            logging.FileHandler(log_file),
            logging.StreamHandler(sys.stdout),
        ],
    )


def model_section(args: argparse.Namespace) -> Optional[Dict[str, Any]]:
    """Model section from --model-file or the inline model flags."""
    if getattr(args, "model_file", None):
        path = Path(args.model_file)
        section = load_scenario_config(path)["model"] if path.suffix in (".yml", ".yaml") else None
        if section is None:
            raise ConfigException(f"Model file {path} must be a YAML scenario file")
        return section
    if getattr(args, "from_scenario", None):
        return find_scenario(args.from_scenario).model
    section = {key: getattr(args, key) for key in MODEL_KEYS if getattr(args, key, None) is not None}
    if not section:
        return None
    if "family" not in section or "d" not in section:
        raise ConfigException("Inline models need at least --family and --d")
    if args.g_type:
        section["g"] = {"type": args.g_type, "values": args.g_values or [1.0]}
    if args.allow_failing_profile:
        section["allow_failing_profile"] = True
    return section


def _vector(values: Optional[List[float]]) -> Optional[List[float]]:
    return None if values is None else list(values)


def adhoc_scenario(args: argparse.Namespace) -> Scenario:
    """Single-check scenario for the table and series subcommands."""
    command = args.command
    params: Dict[str, Any] = {}
    check_type = {
        "psi": "psi",
        "kfunc": "kfunction",
        "classify": "classify",
        "kernel": "field_export",
        "ratio": "kernel_ratio",
        "convratio": "convolution_ratio",
        "poissonratio": "compound_ratio",
        "sandwich": "sandwich",
    }[command]

    if command == "classify":
        for key in ("m", "beta", "delta", "d"):
            if getattr(args, key) is None:
                raise ConfigException(f"classify needs --{key}")
            params[key] = getattr(args, key)
        model = None
    else:
        model = model_section(args)
        if model is None:
            raise ConfigException(f"{command} needs a model (--model-file, --from-scenario or --family/--d)")

    if command == "kfunc" and args.r_grid:
        params["r_grid"] = args.r_grid
    if command in ("kernel", "ratio", "poissonratio"):
        params["t"] = args.t
    if command in ("ratio", "convratio", "poissonratio"):
        if args.theta:
            params["theta"] = _vector(args.theta)
        if args.y:
            params["y"] = _vector(args.y)
        if args.s_list:
            params["s_list"] = args.s_list
    if command == "ratio":
        params["method"] = args.method
    if command == "convratio":
        params.update({"r": args.r, "n": args.n})
    if command == "sandwich":
        params.update({"times": args.times, "epsilon": args.epsilon, "method": args.method})
        if args.s_list:
            params["s_list"] = args.s_list

    spec = CheckSpec(name=command, type=check_type, provenance="command line", params=params)
    return Scenario(name=command, description=f"Ad-hoc {command} run", model=model, checks=(spec,))


def _add_model_arguments(parser: argparse.ArgumentParser):
    group = parser.add_argument_group("model")
    group.add_argument("--model-file", type=str, help="Scenario YAML whose model section is used")
    group.add_argument("--from-scenario", type=str, help="Use the model of a built-in scenario")
    group.add_argument("--family", type=str, help="stable, relativistic, stretched, exponential, ...")
    group.add_argument("--d", type=int, help="Dimension")
    group.add_argument("--alpha", type=float, help="Stability index")
    group.add_argument("--m", type=float, help="Exponential rate (or relativistic mass)")
    group.add_argument("--beta", type=float, help="Stretching exponent")
    group.add_argument("--delta", type=float, help="Polynomial exponent")
    group.add_argument("--rate", type=float, help="Compound Poisson intensity scale")
    group.add_argument("--A", type=float, help="Gaussian coefficient (A = a I)")
    group.add_argument("--g-type", type=str, choices=["constant", "two_point", "quadrant"])
    group.add_argument("--g-values", type=float, nargs="+")
    group.add_argument("--allow-failing-profile", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, help="General configuration file (default: config/default.yml)")
    common.add_argument("--out", type=str, help="Output directory (default: $LEVYLAB_OUTPUT_DIR or out)")
    common.add_argument("--jobs", type=int, help="Worker processes for scenarios")
    common.add_argument("--tolerance-scale", type=float, help="Multiply every tolerance")
    common.add_argument("--grid-n", type=int, help="Override grid points per axis")
    common.add_argument("--grid-l", type=float, help="Override grid half-width L")
    common.add_argument(
        "--log-level",
        type=str,
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging level",
    )

    parser = argparse.ArgumentParser(
        prog="levylab",
        description="Heat kernels of Levy-type operators: tables, series and verification scenarios",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
EXIT CODES:
  0  every check passed (expected failures count as passes)
  1  at least one check failed
  2  configuration error or a numerical error inside a check

EXAMPLES:
  # Run the whole built-in suite on 8 workers
  python -m src verify all --jobs 8

  # One scenario with relaxed tolerances
  python -m src verify stable1d --tolerance-scale 2

  # Profile verdict
  python -m src classify --m 1 --beta 1 --delta 1 --d 2

  # Kernel ratio series for the Cauchy process
  python -m src ratio --family stable --d 1 --alpha 1 --t 1
        """,
    )
    commands = parser.add_subparsers(dest="command", required=True)

    verify = commands.add_parser("verify", parents=[common], help="Run a built-in scenario, a scenario file or all")
    verify.add_argument("scenario", type=str, help="Scenario name, path to a scenario YAML, or 'all'")

    commands.add_parser("list", parents=[common], help="List the built-in scenarios")

    classify = commands.add_parser("classify", parents=[common], help="Classify a radial profile")
    for key, kind in (("m", float), ("beta", float), ("delta", float), ("d", int)):
        classify.add_argument(f"--{key}", type=kind)

    psi = commands.add_parser("psi", parents=[common], help="Psi and Psi^- tables")
    _add_model_arguments(psi)

    kfunc = commands.add_parser("kfunc", parents=[common], help="K(r) table and slope fit")
    _add_model_arguments(kfunc)
    kfunc.add_argument("--r-grid", type=float, nargs="+")

    kernel = commands.add_parser("kernel", parents=[common], help="Export the heat kernel field")
    _add_model_arguments(kernel)
    kernel.add_argument("--t", type=float, default=1.0)

    for name, help_text in (
        ("ratio", "Kernel ratio series p_t / (t nu)"),
        ("convratio", "Convolution ratio series nu_r^{n*} / nu_r"),
        ("poissonratio", "Compound Poisson ratio series"),
    ):
        series = commands.add_parser(name, parents=[common], help=help_text)
        _add_model_arguments(series)
        series.add_argument("--t", type=float, default=1.0)
        series.add_argument("--theta", type=float, nargs="+")
        series.add_argument("--y", type=float, nargs="+")
        series.add_argument("--s-list", type=float, nargs="+")
        if name == "ratio":
            series.add_argument("--method", choices=["auto", "oracle", "spectral", "decomposition"], default="auto")
        if name == "convratio":
            series.add_argument("--r", type=float, default=1.0)
            series.add_argument("--n", type=int, default=2)

    sandwich = commands.add_parser("sandwich", parents=[common], help="Sandwich radius search")
    _add_model_arguments(sandwich)
    sandwich.add_argument("--times", type=float, nargs="+", default=[1.0])
    sandwich.add_argument("--epsilon", type=float, default=0.05)
    sandwich.add_argument("--s-list", type=float, nargs="+")
    sandwich.add_argument("--method", choices=["auto", "oracle", "spectral", "decomposition"], default="auto")
    return parser


def print_reports(reports) -> None:
    for report in reports:
        print(f"{report.scenario}: {report.status.upper()} ({report.runtime:.1f}s)")
        for check in report.checks:
            print(f"  {check.name:<32} {check.status}")
        if report.path:
            print(f"  report: {report.path}")


def run(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run the requested scenarios and return the exit status."""
    args = build_parser().parse_args(argv)

    try:
        config = load_config(Path(args.config) if args.config else None)
        config = apply_overrides(
            config,
            output_dir=args.out,
            log_level=args.log_level,
            jobs=args.jobs,
            tolerance_scale=args.tolerance_scale,
            grid_n=args.grid_n,
            grid_l=args.grid_l,
        )
    except ConfigException as e:
        print(f"Configuration error: {e}", file=sys.stderr)
        return EXIT_ERROR

    setup_logging(config["general"].get("log_level", "INFO"))
    logger = logging.getLogger(__name__)

    try:
        if args.command == "list":
            for scenario in builtin_scenarios():
                print(f"{scenario.name:<36} {scenario.description}")
            return EXIT_PASS
        if args.command == "verify":
            scenarios = builtin_scenarios() if args.scenario == "all" else [find_scenario(args.scenario)]
        else:
            scenarios = [adhoc_scenario(args)]
    except ConfigException as e:
        logger.error(f"Configuration error: {str(e)}")
        return EXIT_ERROR
    except LevyLabException as e:
        logger.error(f"Error: {str(e)}")
        return EXIT_ERROR

    result = VerificationPipeline(config).run(scenarios)
    print_reports(result["reports"])
    if result["status"] == "error":
        logger.error(f"Run aborted: {result['error']}")
        return EXIT_ERROR
    if result["failures"]:
        logger.warning(f"Failing scenarios: {', '.join(result['failures'])}")
        return EXIT_FAIL
    return EXIT_PASS


def main():
    """Console entry point."""
    try:
        sys.exit(run())
    except KeyboardInterrupt:
        sys.exit(130)
    except Exception as e:
        logging.getLogger(__name__).exception(f"Unexpected error: {str(e)}")
        sys.exit(EXIT_ERROR)


if __name__ == "__main__":
    main()
