"""Command-line interface: generate, simulate, learn, oracle, bound and experiment."""

import asyncio
import json
import sys
from pathlib import Path
from typing import List, Optional, Tuple

import click
from rich.console import Console
from rich.table import Table

from packages.core import get_logger, set_log_level
from packages.core.config import settings
from packages.core.errors import InfluenceGraphError, InputValidationError, NotReached
from packages.core.models import ObsParams
from apps.bounds.report import sample_complexity
from apps.dynamics.simulator import simulate as simulate_trajectory
from apps.dynamics.trajectory import load_trajectory, save_trajectory
from apps.learner.artifacts import estimate_document, save_estimate, save_summary
from apps.learner.models import LearnerConfig
from apps.learner.rec_greedy import rec_greedy
from apps.learner.scoring import perfect_recovery
from apps.model.generators import TOPOLOGIES, generate as generate_graph
from apps.model.io import graph_to_document, load_graph, save_graph
from apps.oracle.analysis import second_eigenvalue, spectral_bound_report
from apps.oracle.artifacts import dump_chain
from apps.oracle.chain import build_exact_chain
from apps.oracle.entropy import (
    OracleEntropySource,
    brute_force_neighborhoods,
    entropy_gap,
    independence_violations,
)

from .config import load_experiment_config
from .pipeline import ExperimentPipeline
from .thresholds import threshold_from_curve, tune_epsilon

logger = get_logger(__name__)

EXISTING_FILE = click.Path(exists=True, dir_okay=False, path_type=Path)


def _emit_json(document, out: Optional[Path]) -> None:
    text = json.dumps(document, indent=2)
    if out is None:
        click.echo(text)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text + "\n")
    click.echo(f"Wrote {out}", err=True)


@click.group(name="igl")
@click.option("--debug", is_flag=True, help="Enable debug logging")
def cli(debug: bool):
    """Influence graph learning: simulate, learn, analyze exactly and bound."""
    if debug:
        set_log_level("DEBUG")
        logger.info("Debug mode enabled")


@cli.command()
@click.option("--topology", type=click.Choice(TOPOLOGIES), required=True)
@click.option("--nodes", "node_count", type=int, required=True, help="Number of nodes")
@click.option("--d", type=int, default=1, show_default=True, help="Memory depth")
@click.option("--alpha", type=float, default=0.4, show_default=True)
@click.option("--beta", type=float, default=0.75, show_default=True)
@click.option("--bias", type=float, default=0.167, show_default=True)
@click.option("--degree-cap", type=int, default=1, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--m-bar", type=int, default=0, show_default=True)
@click.option("--mu-c0", type=float, default=0.1, show_default=True)
@click.option("--mu-c1", type=float, default=0.5, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), help="Graph JSON path (stdout if omitted)")
def generate(topology, node_count, d, alpha, beta, bias, degree_cap, seed, m_bar, mu_c0, mu_c1, out):
    """Generate a graph file for one of the standard topologies."""
    graph = generate_graph(topology, node_count, d=d, alpha=alpha, beta=beta, bias=bias, degree_cap=degree_cap, seed=seed)
    obs = ObsParams(m_bar=m_bar, mu_c0=mu_c0, mu_c1=mu_c1)
    if out is None:
        click.echo(json.dumps(graph_to_document(graph, obs), indent=2))
    else:
        save_graph(out, graph, obs)
        click.echo(f"Wrote {out}", err=True)


@cli.command()
@click.option("--graph", "graph_file", type=EXISTING_FILE, required=True)
@click.option("--T", "T", type=int, required=True, help="Recorded steps")
@click.option("--burn-in", type=int, default=None, help="Discarded steps (settings default)")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), help="Trajectory CSV (stdout if omitted)")
def simulate(graph_file: Path, T: int, burn_in: Optional[int], seed: int, out: Optional[Path]):
    """Simulate a trajectory and write `t,node,N,M` rows."""
    graph, obs = load_graph(graph_file)
    trajectory = simulate_trajectory(graph, obs, T, burn_in=burn_in, seed=seed)
    if out is None:
        click.echo(trajectory.to_frame().to_csv(index=False), nl=False)
    else:
        paths = save_trajectory(trajectory, out)
        click.echo(f"Wrote {paths['csv']}", err=True)


@cli.command()
@click.option("--trajectory", "trajectory_file", type=EXISTING_FILE, required=True)
@click.option("--epsilon", type=float, default=None, help="Entropy-drop parameter (threshold epsilon/2)")
@click.option("--pmax-cap", type=int, default=None, help="Cap on the conditioning-set size")
@click.option("--d", type=int, default=None, help="Memory depth when the trajectory has no sidecar")
@click.option("--m-bar", type=int, default=None, help="Observation cap when the trajectory has no sidecar")
@click.option("--workers", type=int, default=1, show_default=True)
@click.option("--trace", is_flag=True, help="Include the full search trace")
@click.option("--graph", "graph_file", type=EXISTING_FILE, default=None, help="True graph to score against")
@click.option("--summary", type=click.Path(dir_okay=False, path_type=Path), help="CSV summary path")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), help="Estimate JSON (stdout if omitted)")
def learn(trajectory_file, epsilon, pmax_cap, d, m_bar, workers, trace, graph_file, summary, out):
    """Learn parent sets from a trajectory with RecGreedy(epsilon)."""
    trajectory = load_trajectory(trajectory_file, d=d, m_bar=m_bar)
    options = {"pmax_cap": pmax_cap, "workers": workers}
    if epsilon is not None:
        options["epsilon"] = epsilon
    try:
        config = LearnerConfig(**options)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from exc
    estimate = rec_greedy(trajectory, config)

    if graph_file is not None:
        graph, _ = load_graph(graph_file)
        click.echo(f"Perfect recovery: {perfect_recovery(estimate, graph)}", err=True)
    if summary is not None:
        save_summary(estimate, summary)
    if out is None:
        click.echo(json.dumps(estimate_document(estimate, include_trace=trace), indent=2))
    else:
        save_estimate(estimate, out, include_trace=trace)


@cli.command()
@click.option("--graph", "graph_file", type=EXISTING_FILE, required=True)
@click.option("--tolerance", type=float, default=None, help="Brute-force tolerance")
@click.option("--dump", type=click.Path(file_okay=False, path_type=Path), help="Directory for P and pi CSVs")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), help="Report JSON (stdout if omitted)")
def oracle(graph_file: Path, tolerance: Optional[float], dump: Optional[Path], out: Optional[Path]):
    """Exact entropies, |lambda*|, brute-force truth and the spectral-bound report."""
    graph, obs = load_graph(graph_file)
    chain = build_exact_chain(graph, obs)
    source = OracleEntropySource(chain)
    truth = brute_force_neighborhoods(chain, tolerance)
    gap = entropy_gap(chain, graph)

    report = {
        "states": chain.size,
        "lambda_star": second_eigenvalue(chain),
        "entropies": {
            str(v): {
                "H(v+|v)": source.conditional_entropy(v, []),
                "H(v+|v,N_v)": source.conditional_entropy(v, graph.neighborhood(v)),
            }
            for v in graph.node_ids
        },
        "brute_force_parents": {str(v): parents for v, parents in truth.items()},
        "matches_graph": perfect_recovery(truth, graph),
        "entropy_gap": gap.model_dump(mode="json"),
        "independence_violations": [item.model_dump() for item in independence_violations(chain, graph)],
        "spectral_bound": spectral_bound_report(chain, graph, obs).model_dump(),
    }
    if dump is not None:
        dump_chain(chain, dump)
    _emit_json(report, out)


@cli.command()
@click.option("--graph", "graph_file", type=EXISTING_FILE, required=True)
@click.option("--epsilon", type=float, default=None, help="Entropy-gap parameter")
@click.option("--gamma", type=float, default=0.1, show_default=True, help="Failure probability")
@click.option("--with-oracle", is_flag=True, help="Add the variant using the exact chain's |lambda*|")
@click.option("--empirical-T", "empirical_T", type=int, default=None, help="Observed threshold to compare against")
@click.option("--json", "as_json", is_flag=True, help="Print JSON instead of a table")
def bound(graph_file: Path, epsilon: Optional[float], gamma: float, with_oracle: bool, empirical_T: Optional[int], as_json: bool):
    """Evaluate the mixing condition and the sample-complexity bound."""
    graph, obs = load_graph(graph_file)
    epsilon = settings.learner.epsilon if epsilon is None else epsilon
    lambda_star = second_eigenvalue(build_exact_chain(graph, obs)) if with_oracle else None
    report = sample_complexity(graph, obs, epsilon, gamma, lambda_star=lambda_star, empirical_T=empirical_T)

    if as_json:
        click.echo(report.model_dump_json(indent=2))
        return
    table = Table(title=f"Sample-complexity bound ({graph_file.name}, epsilon={epsilon}, gamma={gamma})")
    table.add_column("Quantity", style="cyan")
    table.add_column("Value", justify="right")
    for name, value in report.rows():
        table.add_row(name, value)
    Console(file=sys.stdout).print(table)


def _experiment_overrides(seed, out, trials, epsilon: Tuple[float, ...]) -> dict:
    overrides = {"master_seed": seed, "output": str(out) if out else None, "trials": trials}
    if epsilon:
        overrides["epsilon"] = epsilon[0] if len(epsilon) == 1 else list(epsilon)
    return overrides


@cli.command()
@click.argument("config_file", type=EXISTING_FILE)
@click.option("--seed", type=int, default=None, help="Override master_seed")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), help="Override output CSV")
@click.option("--trials", type=int, default=None, help="Override trials per T")
@click.option("--epsilon", type=float, multiple=True, help="Override epsilon (repeat for a sweep)")
@click.option("--tune", is_flag=True, help="Pick epsilon by grid search at pilot_T first")
@click.option("--threshold", is_flag=True, help="Report the smallest T reaching the target probability")
@click.option("--target", type=float, default=None, help="Override target_probability")
@click.option("--threads", type=click.IntRange(min=1), default=None, help="Worker processes, at most IGL_THREADS")
def experiment(config_file, seed, out, trials, epsilon, tune, threshold, target, threads):
    """Run a recovery-probability sweep and write its CSV."""
    config = load_experiment_config(config_file, _experiment_overrides(seed, out, trials, epsilon))

    async def _run():
        run_config = config
        if tune:
            tuned = await tune_epsilon(config, threads=threads)
            click.echo(f"Tuned epsilon={tuned.epsilon} (pilot T={tuned.pilot_T})", err=True)
            run_config = config.model_copy(update={"epsilon": tuned.epsilon})
        return await ExperimentPipeline(run_config, threads=threads).run()

    result = asyncio.run(_run())
    curve = result["curve"]
    click.echo(result["paths"]["csv"])
    for row in curve.rows:
        click.echo(f"epsilon={row.epsilon:g} T={row.T}: {row.successes}/{row.trials}", err=True)

    if threshold:
        goal = config.target_probability if target is None else target
        try:
            found = threshold_from_curve(curve, goal)
        except NotReached as exc:
            # a sweep that never reaches the target still succeeded as an experiment
            click.echo(f"Warning: {exc}", err=True)
            return
        click.echo(f"Threshold: T={found.T} (epsilon={found.epsilon:g}, p={found.recovery_prob:.3f})")


def run_cli(argv: Optional[List[str]] = None) -> int:
    """
    Invoke the CLI and map failures to exit statuses.

    Returns:
        0 on success, 1 for usage and validation errors, 2 for runtime errors
    """
    try:
        cli.main(args=argv, prog_name="igl", standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.Abort:
        click.echo("Aborted", err=True)
        return 1
    except InputValidationError as exc:
        click.echo(f"Error: {exc}", err=True)
        return 1
    except InfluenceGraphError as exc:
        click.echo(f"Error: {exc}", err=True)
        return 2
    except (OSError, RuntimeError, ArithmeticError) as exc:
        click.echo(f"Error: {exc}", err=True)
        return 2
    return 0


def main() -> None:
    sys.exit(run_cli())
