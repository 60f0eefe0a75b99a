# Copyright 2023 The JaxGaussianProcesses Contributors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ==============================================================================
"""Command-line front end.

Every subcommand shares the global flags of `_common_parser`, which override
the values read from `--config`. Results go to stdout or `--out`; the exit code
is 0 on success, 2 for invalid arguments and 3 when a request falls outside
the region where the underlying result holds.
"""

import argparse
from contextlib import nullcontext
import logging
from pathlib import Path
import sys

from beartype.typing import (
    Any,
    Callable,
    Dict,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
)
import jax.random as jr
import numpy as np

from rijax.beliefs import (
    CostModel,
    DiscreteBeliefDistribution,
    load_distribution,
    mean,
)
from rijax.cli.config import (
    ConfigError,
    RunConfig,
    load_config,
)
from rijax.cli.output import (
    write_csv,
    write_json,
)
from rijax.concavify import (
    SampledFunction,
    concave_envelope,
)
from rijax.equilibrium import (
    EquilibriumReport,
    OutOfRegionError,
    SingleSenderParams,
    check_binary_symmetric,
    check_full_info,
    check_profile,
    check_uninformative,
    kzero_atom_check,
    kzero_fullinfo_refute,
    kzero_uniform_check,
    kzero_uninformative_check,
    single_sender_solve,
)
from rijax.extensions import (
    HeteroParams,
    check_costvariant_fullinfo,
    check_hetero_fullinfo,
)
from rijax.receiver import (
    ModelParams,
    best_response,
    stage1_value,
    stage2_payoff,
)
from rijax.receiver.oracle import (
    stage1_breakpoints,
    stage2_breakpoints,
)
from rijax.sweep import run_sweep

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_OUT_OF_REGION = 3

REGION_HEADER = ("mu", "k", "verdict", "margin")
HETERO_HEADER = ("mu1", "mu2", "verdict", "value", "out_of_region")
VARIANT_HEADER = ("mu", "k", "verdict", "margin", "learning_nothing_optimal")
ENVELOPE_HEADER = ("y", "f", "envelope")


class CommandResult(NamedTuple):
    """What a subcommand produced.

    `payload` is a mapping for JSON-first commands and a list of rows for
    sweeps; `header` names the CSV columns of the rows.
    """

    payload: Any
    default_format: str
    header: Optional[Tuple[str, ...]] = None
    out_of_region: bool = False


def _pair(text: str) -> Tuple[float, float]:
    try:
        a, b = (float(v) for v in text.split(","))
    except ValueError as err:
        raise argparse.ArgumentTypeError(f"expected 'a,b', got {text!r}.") from err
    if not a < b:
        raise argparse.ArgumentTypeError(f"expected a < b, got {text!r}.")
    return a, b


def _profile(text: str) -> Tuple[str, Any]:
    if text in ("full", "none", "binary"):
        return text, None
    if text.startswith("binary:"):
        return "binary", _pair(text[len("binary:") :])
    if text.startswith("file:"):
        return "file", Path(text[len("file:") :])
    raise argparse.ArgumentTypeError(
        f"profile must be full, none, binary, binary:l,h or file:<path>, got {text!r}."
    )


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    group = common.add_argument_group("global options")
    group.add_argument("--config", type=Path, help="flat 'key = value' config file")
    group.add_argument("--out", type=Path, help="write results here instead of stdout")
    group.add_argument("--format", dest="output_format", choices=("csv", "json"))
    group.add_argument("--grid-points", type=int)
    group.add_argument("--deviation-step", type=float)
    group.add_argument("--profit-threshold", type=float)
    group.add_argument("--tie-rule", choices=("fair", "first", "second"))
    group.add_argument("--parallel", action="store_true", default=None)
    group.add_argument("--seed", type=int)
    group.add_argument("-v", "--verbose", action="count", default=0)
    group.add_argument("--quiet", action="store_true")
    return common


def _add_model_args(parser: argparse.ArgumentParser, k: float = 1.0) -> None:
    parser.add_argument("--k", type=float, default=k, help="attention cost coefficient")
    parser.add_argument("--mu", type=float, help="prior of sender 1 (default 0.5)")
    parser.add_argument("--mu2", type=float, help="prior of sender 2 (default --mu)")
    parser.add_argument("--l", type=float, default=0.0, help="lower support bound")
    parser.add_argument("--h", type=float, default=1.0, help="upper support bound")


def _add_profile_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--profile", type=_profile, default=("full", None))
    parser.add_argument(
        "--profile2", type=_profile, help="sender 2's experiment (default --profile)"
    )


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="rijax",
        description="Rationally inattentive receiver and competitive persuasion.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    def command(name: str, handler: Callable, help: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, parents=[common], help=help)
        sub.set_defaults(handler=handler)
        return sub

    sub = command("best-response", _best_response, "receiver's optimal strategy")
    _add_model_args(sub)
    _add_profile_args(sub)

    sub = command("check", _check, "equilibrium check of a symmetric profile")
    _add_model_args(sub)
    _add_profile_args(sub)
    sub.add_argument("--three-point", action="store_true")

    sub = command("region", _region, "full-disclosure verdicts over a (mu, k) grid")
    sub.add_argument("--k", type=float, default=1.0)
    sub.add_argument("--k-range", type=_pair)
    sub.add_argument("--k-steps", type=int, default=5)
    sub.add_argument("--mu-range", type=_pair, default=(0.0, 1.0))
    sub.add_argument("--steps", type=int, default=99, help="interior mu points")
    sub.add_argument("--profile", type=_profile, default=("full", None))
    sub.add_argument("--l", type=float, default=0.0)
    sub.add_argument("--h", type=float, default=1.0)

    sub = command("hetero", _hetero, "full disclosure with heterogeneous priors")
    sub.add_argument("--mu1", type=float, default=0.5)
    sub.add_argument("--mu2", type=float, default=0.5)
    sub.add_argument("--k", type=float, default=1.0)
    sub.add_argument("--numeric", action="store_true")
    sub.add_argument("--mu1-range", type=_pair)
    sub.add_argument("--mu2-range", type=_pair)
    sub.add_argument("--steps", type=int, default=9)

    sub = command("variant", _variant, "full disclosure with experiment-dependent costs")
    sub.add_argument("--k", type=float, default=1.0, help="coefficient floor")
    sub.add_argument("--mu", type=float, default=0.5)
    sub.add_argument("--mu2", type=float)
    sub.add_argument("--cost-schedule", type=Path, help="'rank,coefficient' lines")
    sub.add_argument("--mu-range", type=_pair)
    sub.add_argument("--steps", type=int, default=9)

    sub = command("single-sender", _single_sender, "single-sender benchmark")
    sub.add_argument("--lambda", dest="lambda_threshold", type=float, default=0.6)
    sub.add_argument("--k", type=float, default=1.0)
    sub.add_argument("--mu", type=float, default=0.5)
    sub.add_argument("--step", type=float, default=0.01)

    sub = command("k0", _kzero, "free-attention benchmarks")
    sub.add_argument(
        "--family", choices=("uniform", "atom", "fullinfo", "none"), required=True
    )
    sub.add_argument("--mu", type=float, default=0.5)
    sub.add_argument("--lambda-visit", type=float, default=0.5)
    sub.add_argument("--n", type=int)
    sub.add_argument("--step", type=float, default=0.01)

    sub = command("envelope-dump", _envelope_dump, "sampled payoff and its envelope")
    sub.add_argument("--k", type=float, default=1.0)
    sub.add_argument("--mu", type=float, default=0.5)
    sub.add_argument("--l", type=float, default=0.0)
    sub.add_argument("--h", type=float, default=1.0)
    sub.add_argument("--x", type=float, help="first posterior; omit for the stage-1 payoff")
    return parser


def _mu_on_grid(mu: float, l: float, h: float, n: int) -> float:
    """Nearest node of the uniform grid on `[l, h]`."""
    spacing = (h - l) / (n - 1)
    return float(l + round((mu - l) / spacing) * spacing)


def _distribution(
    profile: Tuple[str, Any], mu: float, l: float, h: float
) -> DiscreteBeliefDistribution:
    kind, payload = profile
    if kind == "full":
        return DiscreteBeliefDistribution.full_information(mu)
    if kind == "none":
        return DiscreteBeliefDistribution.degenerate(mu)
    if kind == "binary":
        lo, hi = payload if payload is not None else (l, h)
        return DiscreteBeliefDistribution.binary(lo, hi, mu)
    return load_distribution(payload)


def _model(
    args: argparse.Namespace, config: RunConfig
) -> Tuple[DiscreteBeliefDistribution, DiscreteBeliefDistribution, ModelParams]:
    """Experiments and parameters described by the model and profile flags."""
    first = args.profile
    second = first if args.profile2 is None else args.profile2
    mu = args.mu
    if first[0] == "file":
        loaded = load_distribution(first[1])
        mu = mean(loaded) if mu is None else mu
    mu = 0.5 if mu is None else float(mu)
    mu2 = mu if args.mu2 is None else float(args.mu2)

    l, h = args.l, args.h
    if first[0] == "binary" and first[1] is not None:
        l, h = first[1]
    elif first[0] == "full":
        l, h = 0.0, 1.0
    p1 = _distribution(first, mu, l, h)
    p2 = _distribution(second, mu2, l, h)
    params = ModelParams(
        k=args.k,
        mu=mu,
        l=l,
        h=h,
        mu2=None if args.mu2 is None else mu2,
        grid_points=config.grid_points,
    )
    return p1, p2, params


def _report_payload(report: EquilibriumReport, params: ModelParams) -> Dict[str, Any]:
    return {
        "k": params.k,
        "mu": params.mu,
        "mu_on_grid": _mu_on_grid(params.mu, params.l, params.h, params.grid_points),
        **report.to_dict(),
    }


def _best_response(args: argparse.Namespace, config: RunConfig) -> CommandResult:
    p1, p2, params = _model(args, config)
    strategy = best_response(
        p1, p2, params, tie_rule=config.tie_rule, step=config.deviation_step
    )
    primary = strategy.primary
    payload = {
        "k": params.k,
        "mu": params.mu,
        "mu_on_grid": _mu_on_grid(params.mu, params.l, params.h, params.grid_points),
        "stage1_support": [float(x) for x in primary.stage1.distribution.points],
        "stage1_weights": [float(w) for w in primary.stage1.distribution.weights],
        **strategy.to_dict(),
    }
    return CommandResult(payload, "json")


def _check(args: argparse.Namespace, config: RunConfig) -> CommandResult:
    p1, p2, params = _model(args, config)
    search = config.search_config(
        three_point=args.three_point, progress=not args.quiet
    )
    kind = args.profile[0]
    same = args.profile2 is None or args.profile2 == args.profile
    if same and kind == "full":
        report = check_full_info(params, search)
    elif same and kind == "binary" and params.mu2 is None:
        report = check_binary_symmetric(p1, params, search)
    elif same and kind == "none":
        report = check_uninformative(params, search)
    else:
        report = check_profile(p1, p2, params, search)
    return CommandResult(
        _report_payload(report, params), "json", out_of_region=report.out_of_region
    )


def _interior(lo: float, hi: float, steps: int) -> np.ndarray:
    """`steps` evenly spaced points strictly inside `(lo, hi)`."""
    return np.linspace(lo, hi, steps + 2)[1:-1]


def _region(args: argparse.Namespace, config: RunConfig) -> CommandResult:
    kind, payload = args.profile
    if kind not in ("full", "binary"):
        raise ValueError(f"region sweeps need a full or binary profile, got {kind!r}.")
    l, h = (0.0, 1.0) if kind == "full" else (payload or (args.l, args.h))
    ks = [args.k] if args.k_range is None else np.linspace(*args.k_range, args.k_steps)
    cells = [
        (float(m), float(k))
        for k in ks
        for m in _interior(*args.mu_range, args.steps)
        if l < m < h
    ]
    search = config.search_config()

    def cell(mu_k: Tuple[float, float]) -> Dict[str, Any]:
        mu, k = mu_k
        params = ModelParams(k=k, mu=mu, l=l, h=h, grid_points=config.grid_points)
        if kind == "full":
            report = check_full_info(params, search)
        else:
            report = check_binary_symmetric(
                DiscreteBeliefDistribution.binary(l, h, mu), params, search
            )
        return {"mu": mu, "k": k, "verdict": report.verdict, "margin": report.margin}

    rows = run_sweep(
        cell, cells, parallel=config.parallel, progress=not args.quiet, desc="region"
    )
    return CommandResult(rows, "csv", REGION_HEADER)


def _hetero(args: argparse.Namespace, config: RunConfig) -> CommandResult:
    search = config.search_config()
    if args.mu1_range is None and args.mu2_range is None:
        hp = HeteroParams(mu1=args.mu1, mu2=args.mu2, k=args.k)
        report = check_hetero_fullinfo(hp, search, numeric=args.numeric)
        payload = {"mu1": hp.mu1, "mu2": hp.mu2, "k": hp.k, **report.to_dict()}
        return CommandResult(payload, "json", out_of_region=report.out_of_region)

    mu1s = [args.mu1] if args.mu1_range is None else _interior(*args.mu1_range, args.steps)
    mu2s = [args.mu2] if args.mu2_range is None else _interior(*args.mu2_range, args.steps)
    cells = [(float(a), float(b)) for a in mu1s for b in mu2s]

    def cell(priors: Tuple[float, float]) -> Dict[str, Any]:
        hp = HeteroParams(mu1=priors[0], mu2=priors[1], k=args.k)
        report = check_hetero_fullinfo(hp, search, numeric=args.numeric)
        return {
            "mu1": hp.mu1,
            "mu2": hp.mu2,
            "verdict": report.verdict,
            "value": report.details.get("value", float("nan")),
            "out_of_region": report.out_of_region,
        }

    rows = run_sweep(
        cell, cells, parallel=config.parallel, progress=not args.quiet, desc="hetero"
    )
    return CommandResult(rows, "csv", HETERO_HEADER)


def read_schedule(path: Path) -> Tuple[Tuple[float, float], ...]:
    """Read `rank,coefficient` steps, one per line; `#` starts a comment."""
    steps = []
    for number, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            rank, coefficient = (float(v) for v in line.split(","))
        except ValueError as err:
            raise ValueError(
                f"{path}, line {number}: expected 'rank,coefficient', got {raw!r}."
            ) from err
        steps.append((rank, coefficient))
    return tuple(steps)


def _variant(args: argparse.Namespace, config: RunConfig) -> CommandResult:
    schedule = () if args.cost_schedule is None else read_schedule(args.cost_schedule)
    cost = CostModel(mode="experiment", k=args.k, schedule=schedule)
    search = config.search_config()

    def params_at(mu: float) -> ModelParams:
        return ModelParams(
            k=args.k, mu=mu, mu2=args.mu2, cost=cost, grid_points=config.grid_points
        )

    if args.mu_range is None:
        params = params_at(args.mu)
        report = check_costvariant_fullinfo(params, search)
        return CommandResult(
            _report_payload(report, params), "json", out_of_region=report.out_of_region
        )

    def cell(mu: float) -> Dict[str, Any]:
        report = check_costvariant_fullinfo(params_at(mu), search)
        return {
            "mu": mu,
            "k": args.k,
            "verdict": report.verdict,
            "margin": report.margin,
            "learning_nothing_optimal": report.details.get("learning_nothing_optimal"),
        }

    cells = [float(m) for m in _interior(*args.mu_range, args.steps)]
    rows = run_sweep(
        cell, cells, parallel=config.parallel, progress=not args.quiet, desc="variant"
    )
    return CommandResult(rows, "csv", VARIANT_HEADER)


def _single_sender(args: argparse.Namespace, config: RunConfig) -> CommandResult:
    ssp = SingleSenderParams(
        lambda_threshold=args.lambda_threshold, k=args.k, mu=args.mu
    )
    solution = single_sender_solve(ssp, step=args.step, key=jr.PRNGKey(config.seed))
    payload = {
        "lambda": ssp.lambda_threshold,
        "k": ssp.k,
        "mu": ssp.mu,
        **solution.to_dict(),
    }
    return CommandResult(payload, "json")


def _kzero(args: argparse.Namespace, config: RunConfig) -> CommandResult:
    if args.family == "uniform":
        report = kzero_uniform_check(args.mu, step=args.step)
    elif args.family == "atom":
        report = kzero_atom_check(args.mu, args.lambda_visit, step=args.step)
    elif args.family == "fullinfo":
        report = kzero_fullinfo_refute(args.mu, args.n, args.lambda_visit)
    else:
        report = kzero_uninformative_check(args.mu)
    payload = {"family": args.family, "mu": args.mu, **report.to_dict()}
    return CommandResult(payload, "json", out_of_region=report.out_of_region)


def _envelope_dump(args: argparse.Namespace, config: RunConfig) -> CommandResult:
    params = ModelParams(
        k=args.k, mu=args.mu, l=args.l, h=args.h, grid_points=config.grid_points
    )
    if args.x is None:
        fn = lambda y: stage1_value(y, params)
        kinks = stage1_breakpoints(params.mu, params.k, params.l, params.h)
    else:
        x = float(args.x)
        fn = lambda y: stage2_payoff(y, x, params)
        kinks = stage2_breakpoints(x, params.mu, params.k, params.l, params.h)
    sampled = SampledFunction.from_callable(
        fn, params.l, params.h, n=config.grid_points, breakpoints=kinks
    )
    envelope = concave_envelope(sampled).envelope
    rows = [
        {"y": float(y), "f": float(f), "envelope": float(e)}
        for y, f, e in zip(
            np.asarray(sampled.grid), np.asarray(sampled.values), np.asarray(envelope)
        )
    ]
    return CommandResult(rows, "csv", ENVELOPE_HEADER)


def _configure_logging(verbose: int, quiet: bool) -> None:
    if quiet:
        level = logging.ERROR
    elif verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _emit(result: CommandResult, fmt: str, out: Optional[Path]) -> None:
    payload = result.payload
    target = open(out, "w", newline="") if out is not None else nullcontext(sys.stdout)
    with target as stream:
        if fmt == "json":
            write_json(payload, stream)
            return
        if isinstance(payload, list):
            write_csv(payload, result.header, stream)
            return
        scalars = {
            key: value
            for key, value in payload.items()
            if not isinstance(value, (dict, list, tuple))
        }
        write_csv([scalars], tuple(scalars), stream)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse `argv`, run the subcommand and write its results.

    Returns:
        int: the process exit code.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_OK if err.code == 0 else EXIT_INVALID

    _configure_logging(args.verbose, args.quiet)
    try:
        config = load_config(args.config).merge(
            grid_points=args.grid_points,
            deviation_step=args.deviation_step,
            profit_threshold=args.profit_threshold,
            tie_rule=args.tie_rule,
            output_format=args.output_format,
            parallel=args.parallel,
            seed=args.seed,
        )
        logger.debug("running %s with %s", args.command, config)
        result = args.handler(args, config)
    except OutOfRegionError as err:
        logger.error("%s", err)
        return EXIT_OUT_OF_REGION
    except (ConfigError, ValueError, OSError) as err:
        logger.error("%s", err)
        print(f"rijax {args.command}: error: {err}", file=sys.stderr)
        return EXIT_INVALID

    _emit(result, config.output_format or result.default_format, args.out)
    return EXIT_OUT_OF_REGION if result.out_of_region else EXIT_OK


def main() -> None:
    sys.exit(run())


__all__ = [
    "CommandResult",
    "build_parser",
    "read_schedule",
    "run",
    "main",
]
