import argparse
import os
import sys
import time

from dotenv import load_dotenv

# Load environment variables from .env file before the output directory is resolved.
load_dotenv()

if __package__:
    from .config_loader import (ALL_EXPERIMENTS, CONFIG_KEYS, OUTPUT_DIR_ENV, apply_overrides, default_config,
                                load_config_file, serialize_config, validate_config)
    from .experiments import ExperimentRunner
    from .exporter import ReportExporter
else:
    from config_loader import (ALL_EXPERIMENTS, CONFIG_KEYS, OUTPUT_DIR_ENV, apply_overrides, default_config,
                               load_config_file, serialize_config, validate_config)
    from experiments import ExperimentRunner
    from exporter import ReportExporter

EXIT_OK = 0
EXIT_CRITERIA_FAILED = 1
EXIT_CONFIG_ERROR = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Run summability experiments for eigenfunction expansions on the sphere."
    )
    parser.add_argument(
        "experiment",
        choices=ALL_EXPERIMENTS,
        help=f"Experiment to run. Choose from: {', '.join(ALL_EXPERIMENTS)}"
    )
    parser.add_argument(
        "--config",
        type=str,
        default=None,
        help="Flat key=value config file; flags given on the command line override its values."
    )
    parser.add_argument(
        "--out",
        type=str,
        default=None,
        help="Output directory (alias of --output_dir)."
    )
    for key in CONFIG_KEYS:
        if key == "experiment":
            continue
        parser.add_argument(f"--{key}", type=str, default=None, help=f"Override config key '{key}'.")
    return parser


def resolve_config(args: argparse.Namespace):
    """Experiment defaults < config file < command-line flags < SPHERE_SUMMABILITY_OUTPUT_DIR."""
    cfg = default_config(args.experiment)
    if args.config:
        cfg = load_config_file(args.config, cfg)
    overrides = {key: getattr(args, key) for key in CONFIG_KEYS if key != "experiment"}
    overrides["experiment"] = args.experiment
    if args.out is not None:
        overrides["output_dir"] = args.out
    cfg = apply_overrides(cfg, overrides)
    env_output = os.getenv(OUTPUT_DIR_ENV)
    if env_output:
        cfg = apply_overrides(cfg, {"output_dir": env_output})
    return validate_config(cfg)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    print("--- Sphere Summability Experiments Initializing ---")
    try:
        cfg = resolve_config(args)
    except (FileNotFoundError, KeyError, ValueError) as e:
        print(f"Error in configuration: {e}")
        return EXIT_CONFIG_ERROR
    print(f"Configuration:\n{serialize_config(cfg)}")

    print("--- Initializing Modules ---")
    try:
        runner = ExperimentRunner(cfg)
        exporter = ReportExporter(output_dir=cfg.output_dir)
    except (OSError, ValueError) as e:
        print(f"Error initializing modules: {e}. Exiting.")
        return EXIT_CONFIG_ERROR

    start_time = time.time()
    try:
        report = runner.run()
    except ValueError as e:
        print(f"Error running {cfg.experiment}: {e}")
        return EXIT_CONFIG_ERROR
    print(f"Experiment time: {time.time() - start_time:.2f} seconds.")

    print("\n--- Writing Results ---")
    exporter.save_text(serialize_config(cfg), "config.txt")
    exporter.save_report(report)

    print("\n--- Summary ---")
    for criterion in report.summary:
        verdict = "PASS" if criterion.passed else "FAIL"
        print(f"[{verdict}] {criterion.criterion_id}: measured {criterion.measured:.6g}, "
              f"threshold {criterion.threshold:.6g}")
    print(f"Output directory: {os.path.abspath(cfg.output_dir)}")
    return EXIT_OK if report.passed else EXIT_CRITERIA_FAILED


if __name__ == '__main__':
    sys.exit(main())
