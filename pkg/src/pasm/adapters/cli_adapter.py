"""
CLI Adapter - command line interface for the simulator

Subcommands: `run` (alpha sweep with ratio and bound columns), `oracle`
(optimal adaptive value and first action), `check` (structure checkers)
and `gen` (seeded instance generation). Exit codes: 0 success, 1 bound
violation, 2 input error, 3 cap exceeded.
"""
import argparse
import json
import sys
from typing import List, Optional, Sequence

from tabulate import tabulate

from pasm.adapters.csv_result_adapter import CSVResultAdapter
from pasm.adapters.json_instance_adapter import JSONInstanceAdapter, emit_instance, parse_instance
from pasm.domain.ports import InstanceSourcePort, ResultSinkPort
from pasm.domain.services import ExperimentConfig, ExperimentService, GeneratorSpec
from pasm.impl.generators import FAMILIES, generate_instance
from pasm.impl.inputs import parse_alpha_grid
from pasm.oracle.checkers import (
    check_adaptive_monotonicity,
    check_adaptive_submodularity,
    check_policywise,
    check_weak_policywise,
)
from pasm.oracle.dynamic_programming import optimal_first_action
from pasm.policies import POLICY_NAMES
from pasm.types.errors import EXIT_BOUND_VIOLATION, EXIT_OK, OracleCapExceeded, PasmError
from pasm.types.policy_config import Cardinality, Constraint, Knapsack
from pasm.types.reports import ResultRow
from pasm.util.logging import is_quiet, setup_logging

_LOGGER = setup_logging(__name__)


def _add_constraint(parser: argparse.ArgumentParser, required: bool = True) -> None:
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument("--k", type=int, help="Cardinality constraint")
    group.add_argument("--budget", type=float, help="Knapsack budget")


def _constraint(args: argparse.Namespace) -> Optional[Constraint]:
    if args.k is not None:
        return Cardinality(args.k)
    if args.budget is not None:
        return Knapsack(args.budget)
    return None


def _format(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def render_rows(rows: Sequence[ResultRow]) -> str:
    headers = ["alpha", "method", "E[f]", "stderr", "mean batches", "max batches", "oracle", "ratio", "bound", "ok"]
    table = [
        [
            _format(row.alpha),
            row.method,
            _format(row.expected_utility),
            _format(row.stderr),
            _format(row.mean_batches),
            row.max_batches,
            _format(row.oracle_value),
            _format(row.ratio),
            _format(row.theorem_bound),
            "yes" if row.bound_satisfied else "NO",
        ]
        for row in rows
    ]
    return tabulate(table, headers=headers, tablefmt="grid")


class CLIAdapter:
    """Command Line Interface adapter for the simulator"""

    def __init__(self, instance_source: InstanceSourcePort | None = None, result_sink: ResultSinkPort | None = None):
        """Initialize the CLI adapter with required services"""
        self.experiment_service = ExperimentService(
            instance_source=instance_source or JSONInstanceAdapter(),
            result_sink=result_sink or CSVResultAdapter(),
        )

    def build_parser(self) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(prog="pasm", description="Partial-adaptive submodular maximization simulator")
        subparsers = parser.add_subparsers(dest="command", help="Command to run")

        run_parser = subparsers.add_parser("run", help="Evaluate a policy over an alpha grid")
        source = run_parser.add_mutually_exclusive_group(required=True)
        source.add_argument("--instance", help="Instance JSON file")
        source.add_argument("--family", choices=sorted(FAMILIES), help="Generate the instance instead")
        run_parser.add_argument("--n", type=int, default=5, help="Items of a generated instance")
        run_parser.add_argument("--states", type=int, default=2, help="States per item of a generated instance")
        run_parser.add_argument("--instance-seed", type=int, default=0, help="Seed of a generated instance")
        run_parser.add_argument("--policy", choices=POLICY_NAMES, default="pa-greedy", help="Policy to evaluate")
        run_parser.add_argument("--alpha-grid", default="0,0.25,0.5,0.75,1", help="Comma separated alpha values")
        _add_constraint(run_parser)
        run_parser.add_argument("--trials", type=int, default=10_000, help="Monte-Carlo trials when exact is infeasible")
        run_parser.add_argument("--seed", type=int, default=0, help="Seed for policy randomness and sampling")
        run_parser.add_argument("--method", choices=["auto", "exact", "mc"], default="auto", help="Evaluation method")
        run_parser.add_argument("--out", help="CSV output path")
        run_parser.add_argument("--no-oracle", action="store_true", help="Skip the oracle and the ratio columns")
        truncation = run_parser.add_mutually_exclusive_group()
        truncation.add_argument("--max-batches", type=int, help="Truncate the policy after T batches")
        truncation.add_argument("--auto-T", action="store_true", help="Truncate density greedy at its batch budget")
        run_parser.add_argument("--deferred-coins", action="store_true", help="Flip density-greedy coins lazily")
        run_parser.add_argument(
            "--allow-trend-violations", action="store_true", help="Only warn when utility or batches drop as alpha grows"
        )

        oracle_parser = subparsers.add_parser("oracle", help="Optimal adaptive value and first action")
        oracle_parser.add_argument("--instance", required=True, help="Instance JSON file")
        _add_constraint(oracle_parser)

        check_parser = subparsers.add_parser("check", help="Check adaptive submodularity and monotonicity")
        check_parser.add_argument("--instance", required=True, help="Instance JSON file")
        _add_constraint(check_parser, required=False)
        check_parser.add_argument("--strong", action="store_true", help="Also run the strong policywise check (n <= 5)")

        gen_parser = subparsers.add_parser("gen", help="Generate a seeded instance")
        gen_parser.add_argument("--family", required=True, choices=sorted(FAMILIES), help="Instance family")
        gen_parser.add_argument("--n", type=int, required=True, help="Number of items")
        gen_parser.add_argument("--states", type=int, default=2, help="States per item")
        gen_parser.add_argument("--seed", type=int, default=0, help="Generator seed")
        gen_parser.add_argument("--out", required=True, help="Output JSON path")
        gen_parser.add_argument("--knapsack", action="store_true", help="Integer costs 1..3 instead of unit costs")
        gen_parser.add_argument("--elements", type=int, help="Coverage universe size")
        gen_parser.add_argument("--hypotheses", type=int, help="Version-space hypothesis count")
        return parser

    def run(self, argv: Optional[List[str]] = None) -> int:
        """
        Run the CLI adapter with the given arguments

        Args:
            argv: Command line arguments

        Returns:
            Exit code
        """
        parser = self.build_parser()
        args = parser.parse_args(argv)
        commands = {"run": self._run, "oracle": self._oracle, "check": self._check, "gen": self._gen}
        if args.command not in commands:
            parser.print_help()
            return 2
        try:
            return commands[args.command](args)
        except OracleCapExceeded as e:
            print(e.warning(), file=sys.stderr)
            return e.exit_code
        except PasmError as e:
            print(f"Error: {e.message}", file=sys.stderr)
            return e.exit_code

    def _run(self, args: argparse.Namespace) -> int:
        generator = None
        if args.family:
            generator = GeneratorSpec(args.family, args.n, args.states, args.instance_seed, {"knapsack": args.budget is not None})
        config = ExperimentConfig(
            policy=args.policy,
            alpha_grid=tuple(parse_alpha_grid(args.alpha_grid)),
            constraint=_constraint(args),
            instance_path=args.instance,
            generator=generator,
            trials=args.trials,
            seed=args.seed,
            method=args.method,
            output_path=args.out,
            oracle=not args.no_oracle,
            max_batches=args.max_batches,
            auto_T=args.auto_T,
            deferred_coins=args.deferred_coins,
            allow_trend_violations=args.allow_trend_violations,
        )
        result = self.experiment_service.run_experiment(config)
        if not is_quiet():
            print(f"\n=== {config.policy} on {result.rows[0].instance_id} ({config.constraint}) ===")
            print(render_rows(result.rows))
        for violation in result.trend_violations:
            print(f"Trend warning: {violation}")
        if result.output_path:
            print(f"Results written: {result.output_path}")
        return EXIT_OK if result.bounds_satisfied else EXIT_BOUND_VIOLATION

    def _oracle(self, args: argparse.Namespace) -> int:
        instance = parse_instance(args.instance, require_positive_costs=args.budget is not None)
        action = optimal_first_action(instance, _constraint(args))
        print(json.dumps(action.to_dict(), indent=2))
        return EXIT_OK

    def _check(self, args: argparse.Namespace) -> int:
        instance = parse_instance(args.instance)
        constraint = _constraint(args)
        reports = [check_adaptive_submodularity(instance), check_adaptive_monotonicity(instance)]
        if constraint is not None:
            reports.append(check_weak_policywise(instance, constraint))
            if args.strong:
                reports.append(check_policywise(instance, constraint))
        elif args.strong:
            _LOGGER.warning("--strong needs --k or --budget; skipping the policywise checks")
        print(json.dumps([report.to_dict() for report in reports], indent=2))
        return EXIT_OK

    def _gen(self, args: argparse.Namespace) -> int:
        params = {"knapsack": args.knapsack}
        if args.elements is not None:
            params["elements"] = args.elements
        if args.hypotheses is not None:
            params["hypotheses"] = args.hypotheses
        instance = generate_instance(args.family, args.n, args.states, args.seed, params)
        print(f"Instance written: {emit_instance(instance, args.out)}")
        return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the CLI"""
    cli = CLIAdapter()
    return cli.run(argv)


if __name__ == "__main__":
    sys.exit(main())
