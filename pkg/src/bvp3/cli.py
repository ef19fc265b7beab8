"""Command line front end.

Exit codes: 0 on success, 1 for domain failures (unknown problem, divergence,
singular boundary systems, missing exact solution), 2 for usage errors.
All file output is deterministic: floats print with 17 significant digits,
lines end with LF, and no timestamps or environment state leak in.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace

import click
import numpy as np

from .conditions import verdict
from .corpus import UnknownProblem, get_problem, list_problems
from .greens import (BoundaryConditions, CaseId, RankDeficientBC,
                     SingularBoundarySystem, build_general_kernel,
                     case_boundary_conditions, kernel_catalog)
from .picard import (Diverged, MaxIterExceeded, NonFiniteValue, kernel_for,
                     solve)
from .quadrature import Grid

__all__ = ["main", "RunConfig", "NoExactSolution", "convergence_study"]

FLOAT_FMT = "%.17g"


class NoExactSolution(ValueError):
    """Convergence study asked for a problem without a closed-form solution."""


@dataclass(frozen=True)
class RunConfig:
    """Resolved run parameters shared by the solve-like commands."""

    problem: str
    h: float = 0.01
    tol: float = 1e-6
    max_iter: int = 100
    m_override: float = None


def _fmt(v) -> str:
    return FLOAT_FMT % v


def _grid_from_h(h):
    try:
        return Grid.from_h(h)
    except ValueError as exc:
        raise click.ClickException(str(exc))


def _resolved_problem(config: RunConfig):
    try:
        entry = get_problem(config.problem)
    except UnknownProblem as exc:
        # KeyError str() would requote the message
        raise click.ClickException(exc.args[0])
    problem = entry.problem
    if config.m_override is not None and config.m_override != problem.M:
        # analytic Lipschitz constants are certified at the stored M only
        problem = replace(problem, M=config.m_override, lipschitz=None)
    return entry, problem


def _write_text(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _json_value(v):
    if v is None or isinstance(v, (bool, int, str)):
        return v
    if isinstance(v, dict):
        return {k: _json_value(x) for k, x in v.items()}
    return float(v)


@click.group()
def main():
    """Solve third-order two-point boundary value problems by fixed-point
    iteration on the Green-kernel form, and check solvability conditions."""


@main.command("solve")
@click.option("--problem", "name", required=True, help="Corpus problem name.")
@click.option("--h", type=float, default=0.01, show_default=True)
@click.option("--tol", type=float, default=1e-6, show_default=True)
@click.option("--max-iter", type=int, default=100, show_default=True)
@click.option("--M", "m_override", type=float, default=None,
              help="Override the stored domain radius.")
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), default=None)
@click.option("--json", "json_path", type=click.Path(dir_okay=False), default=None)
def cmd_solve(name, h, tol, max_iter, m_override, csv_path, json_path):
    """Solve one corpus problem and write the solution CSV and run report."""
    config = RunConfig(problem=name, h=h, tol=tol, max_iter=max_iter,
                       m_override=m_override)
    entry, problem = _resolved_problem(config)
    grid = _grid_from_h(config.h)
    try:
        state, report = solve(problem, grid, tol=config.tol,
                              max_iter=config.max_iter)
    except (Diverged, MaxIterExceeded, NonFiniteValue) as exc:
        raise click.ClickException("%s: %s" % (name, exc))
    csv_path = csv_path or "%s_solution.csv" % name
    json_path = json_path or "%s_report.json" % name
    lines = ["t,u,du,d2u,phi"]
    for i in range(grid.n + 1):
        lines.append(",".join(_fmt(v) for v in (
            grid.nodes[i], state.u[i], state.y[i], state.z[i], state.phi[i])))
    _write_text(csv_path, "\n".join(lines) + "\n")
    doc = {
        "problem": name,
        "h": config.h,
        "tol": config.tol,
        "iterations": report.iterations,
        "final_diff": report.final_diff,
        "q": report.q,
        "p_k": report.p_k,
        "M0": report.m0,
        "M1": report.m1,
        "M2": report.m2,
        "bound_checks": report.bound_checks,
        "residual": report.residual,
        "max_dev_exact": report.max_dev_exact,
        "converged": report.converged,
    }
    _write_text(json_path, json.dumps(_json_value(doc), indent=2) + "\n")
    click.echo("%s: converged in %d sweeps, final update %s; wrote %s and %s"
               % (name, report.iterations, _fmt(report.final_diff),
                  csv_path, json_path))


@main.command("check")
@click.option("--problem", "name", required=True)
@click.option("--M", "m_value", type=float, default=None,
              help="Domain radius; defaults to the stored reference value.")
@click.option("--samples", type=int, default=4096, show_default=True)
@click.option("--json", "json_path", type=click.Path(dir_okay=False), default=None,
              help="Also write the verdict to a file.")
def cmd_check(name, m_value, samples, json_path):
    """Evaluate the solvability checks and print the verdict as JSON."""
    config = RunConfig(problem=name, m_override=m_value)
    entry, problem = _resolved_problem(config)
    m_used = m_value if m_value is not None else entry.reference.M
    kernel = kernel_for(problem)
    try:
        v = verdict(problem, kernel, m_used, samples=samples)
    except (ValueError, NonFiniteValue) as exc:
        raise click.ClickException("%s: %s" % (name, exc))
    doc = {
        "problem": name,
        "M": v.M,
        "M0": v.m0,
        "M1": v.m1,
        "M2": v.m2,
        "sup_f": v.sup_f,
        "sup_f_positive": v.sup_f_positive,
        "sign_ok": v.sign_ok,
        "L0": v.L0,
        "L1": v.L1,
        "L2": v.L2,
        "lipschitz_source": v.lipschitz_source,
        "q": v.q,
        "theorem1_holds": v.theorem1_holds,
        "theorem2_holds": v.theorem2_holds,
        "theorem3_holds": v.theorem3_holds,
        "theorem4_holds": v.theorem4_holds,
        "predicted_monotonicity": v.predicted_monotonicity,
    }
    text = json.dumps(_json_value(doc), indent=2)
    click.echo(text)
    if json_path:
        _write_text(json_path, text + "\n")


def _bc_from_file(path):
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    keys = ("a1", "b1", "g1", "a2", "b2", "g2", "a3", "b3", "g3")
    missing = [k for k in keys if k not in raw]
    if missing:
        raise click.ClickException("bc file lacks %s" % ", ".join(missing))
    endpoints = tuple(raw.get("endpoints", (0, 0, 1)))
    return BoundaryConditions(*(float(raw[k]) for k in keys),
                              endpoints=endpoints)


@main.command("kernel")
@click.option("--case", "case_num", type=click.IntRange(1, 4), default=None,
              help="Catalog case number.")
@click.option("--bc-file", type=click.Path(exists=True, dir_okay=False),
              default=None, help="JSON file with boundary coefficients.")
@click.option("--h", type=float, default=0.01, show_default=True)
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), default=None)
@click.option("--compare-general", is_flag=True,
              help="Rebuild the catalog kernel from its coefficients and "
                   "report the max pointwise gap.")
def cmd_kernel(case_num, bc_file, h, csv_path, compare_general):
    """Tabulate a Green kernel on the grid as t,s,G,G1,G2 rows."""
    if (case_num is None) == (bc_file is None):
        raise click.UsageError("give exactly one of --case or --bc-file")
    if compare_general and case_num is None:
        raise click.UsageError("--compare-general needs --case")
    grid = _grid_from_h(h)
    if case_num is not None:
        case = CaseId(case_num)
        kernel = kernel_catalog(case)
        csv_path = csv_path or "kernel_case%d.csv" % case_num
    else:
        try:
            kernel = build_general_kernel(_bc_from_file(bc_file))
        except (RankDeficientBC, SingularBoundarySystem, ValueError) as exc:
            raise click.ClickException(str(exc))
        csv_path = csv_path or "kernel_custom.csv"
    tt = grid.nodes
    t_grid, s_grid = np.meshgrid(tt, tt, indexing="ij")
    g_vals = kernel.g(t_grid, s_grid)
    g1_vals = kernel.g1(t_grid, s_grid)
    g2_vals = kernel.g2(t_grid, s_grid)
    lines = ["t,s,G,G1,G2"]
    for i in range(grid.n + 1):
        for j in range(grid.n + 1):
            lines.append(",".join(_fmt(v) for v in (
                tt[i], tt[j], g_vals[i, j], g1_vals[i, j], g2_vals[i, j])))
    _write_text(csv_path, "\n".join(lines) + "\n")
    click.echo("wrote %s" % csv_path)
    if compare_general:
        built = build_general_kernel(case_boundary_conditions(case))
        gap = 0.0
        for row in ("g", "g1", "g2"):
            cat = getattr(kernel, row)(t_grid, s_grid)
            gen = getattr(built, row)(t_grid, s_grid)
            gap = max(gap, float(np.max(np.abs(cat - gen))))
        click.echo("compare_general_gap = %s" % _fmt(gap))


def convergence_study(entry, h0, levels, tol=1e-6, max_iter=100):
    """Solve at h0, h0/2, ... and log2 the deviation drops.

    Returns rows (h, max_dev_exact, order) where the first order is None.
    """
    if entry.problem.exact is None:
        raise NoExactSolution("problem %r has no exact solution" % entry.name)
    if levels < 1:
        raise ValueError("levels must be at least 1")
    base = Grid.from_h(h0)
    if base.n < 4:
        raise ValueError("h0 gives fewer than 4 subintervals")
    rows = []
    prev = None
    for lev in range(levels + 1):
        grid = Grid(base.n * 2 ** lev)
        _, report = solve(entry.problem, grid, tol=tol, max_iter=max_iter)
        dev = report.max_dev_exact
        order = None if prev is None else math.log2(prev / dev)
        rows.append((grid.h, dev, order))
        prev = dev
    return rows


@main.command("convergence")
@click.option("--problem", "name", required=True)
@click.option("--h0", type=float, default=0.04, show_default=True)
@click.option("--levels", type=int, default=3, show_default=True)
@click.option("--tol", type=float, default=1e-6, show_default=True)
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), default=None)
def cmd_convergence(name, h0, levels, tol, csv_path):
    """Halve the grid repeatedly and report observed deviation orders."""
    config = RunConfig(problem=name, h=h0, tol=tol)
    entry, _ = _resolved_problem(config)
    try:
        rows = convergence_study(entry, h0, levels, tol=tol)
    except (NoExactSolution, ValueError, Diverged, MaxIterExceeded) as exc:
        raise click.ClickException("%s: %s" % (name, exc))
    lines = ["h,max_dev_exact,observed_order"]
    for h_val, dev, order in rows:
        lines.append("%s,%s,%s" % (
            _fmt(h_val), _fmt(dev), "" if order is None else _fmt(order)))
    text = "\n".join(lines) + "\n"
    click.echo(text, nl=False)
    if csv_path:
        _write_text(csv_path, text)


@main.command("list")
def cmd_list():
    """List corpus problems as name,case,has_exact."""
    click.echo("name,case,has_exact")
    for name, case, has_exact in list_problems():
        click.echo("%s,%d,%s" % (name, case.value, "true" if has_exact else "false"))


if __name__ == "__main__":
    main()
