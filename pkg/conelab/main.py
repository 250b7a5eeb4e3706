"""
Command-line front door.

    python -m conelab.main run <scenario.json | bundled-name> [--out DIR] [--seed N] [--budget-vertices N]
    python -m conelab.main list-scenarios
    python -m conelab.main describe <op>

Exit codes: 0 ok, 2 schema violation, 3 budget exceeded, 4 internal
invariant breach (including any unexpected exception).
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from conelab import __version__
from conelab.core.config import settings
from conelab.core.logging import configure_logging
from conelab.scenarios.catalog import BUNDLED_SCENARIOS, SCENARIO_ALIASES
from conelab.scenarios.contracts import OPERATION_CONTRACTS, describe_operation
from conelab.services.pipeline import StepRegistry, load_scenario, run_scenario
from conelab.utils.errors import ConelabError, ExitCode, UnknownOperationError

logger = logging.getLogger("conelab")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="conelab", description=settings.APP_NAME)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=None, help="Overrides LOG_LEVEL")
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="Run a scenario file or a bundled scenario")
    run.add_argument("scenario", help="Path to a scenario JSON file or a bundled scenario name")
    run.add_argument("--out", type=Path, default=None, help="Artifact directory (default OUTPUT_DIR/<name>)")
    run.add_argument("--seed", type=int, default=None, help="Overrides the scenario seed")
    run.add_argument("--budget-vertices", type=int, default=None, help="Overrides the scenario vertex budget")

    commands.add_parser("list-scenarios", help="List bundled scenarios")

    describe = commands.add_parser("describe", help="Show the contract of a pipeline operation")
    describe.add_argument("op")
    return parser


def _run(args: argparse.Namespace) -> int:
    scenario, base_dir = load_scenario(args.scenario)
    out_dir = args.out or Path(scenario.outputs or Path(settings.OUTPUT_DIR) / scenario.name)
    manifest = run_scenario(
        scenario,
        out_dir,
        base_dir=base_dir,
        seed=args.seed,
        budget_vertices=args.budget_vertices,
    )
    print(f"{scenario.name}: {len(manifest.artifacts)} artifacts in {out_dir}")
    return ExitCode.OK


def _list_scenarios() -> int:
    for name in sorted(BUNDLED_SCENARIOS):
        print(f"{name}\t{BUNDLED_SCENARIOS[name].get('description', '')}")
    for alias in sorted(SCENARIO_ALIASES):
        print(f"{alias}\tsame as {SCENARIO_ALIASES[alias]}")
    return ExitCode.OK


def _describe(op: str) -> int:
    if op not in OPERATION_CONTRACTS:
        # Raises with the list of registered operations
        StepRegistry.get(op)
        raise UnknownOperationError(f"No contract for operation: {op}")
    print(describe_operation(op), end="")
    return ExitCode.OK


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    try:
        if args.command == "run":
            return int(_run(args))
        if args.command == "list-scenarios":
            return int(_list_scenarios())
        return int(_describe(args.op))
    except ConelabError as e:
        logger.error("%s: %s", type(e).__name__, e)
        print(f"error: {e}", file=sys.stderr)
        return int(e.exit_code)
    except ValidationError as e:
        print(f"error: schema violation: {e}", file=sys.stderr)
        return int(ExitCode.SCHEMA_VIOLATION)
    except Exception as e:
        logger.exception("Unexpected failure")
        print(f"error: {e}", file=sys.stderr)
        return int(ExitCode.INVARIANT_BREACH)


if __name__ == "__main__":
    sys.exit(main())
