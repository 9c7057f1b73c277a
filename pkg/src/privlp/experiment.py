"""Privacy-performance sweep harness.

Runs repeated privatize-and-solve rounds over a grid of epsilon values and
aggregates the cost of privacy, the realized objective gap, and the
predicted performance-loss bound into one record per epsilon. Per-trial
seeds are hashed from (base seed, epsilon index, trial index), so enlarging
the grid or the trial count never changes existing trials' draws, and a
repeated run with the same config is byte-identical.
"""
from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass

import numpy as np

from . import cmdp as cmdp_mod
from .accuracy import cost_bound
from .mechanism import privatize_matrix
from .problem import LinearProgram, PrivacyParams, validate
from .seeds import derive_seed
from . import simplex

CSV_HEADER = "epsilon,mean_cop_percent,std_cop,mean_abs_gap,bound,trials,infeasible"


class SweepAbort(RuntimeError):
    """A trial produced an infeasible privatized problem.

    Tightened constraints of a validated problem are guaranteed feasible,
    so reaching this state indicates a mechanism or solver bug, and the
    sweep refuses to aggregate past it.
    """


@dataclass(frozen=True)
class ExperimentConfig:
    """Sweep parameters. ``source`` and ``out`` are informational paths."""

    eps_grid: tuple[float, ...]
    trials: int = 100
    base_seed: int = 0
    delta: float = 0.05
    k: float = 1.0
    source: str | None = None
    out: str | None = None

    def __post_init__(self):
        grid = tuple(float(e) for e in self.eps_grid)
        if not grid or any(e <= 0 for e in grid):
            raise ValueError("eps_grid must be a non-empty list of positive reals")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        object.__setattr__(self, "eps_grid", grid)


@dataclass(frozen=True)
class ExperimentRecord:
    """Aggregates of one epsilon's trials; ``n_infeasible`` is always 0."""

    epsilon: float
    mean_cost_of_privacy_percent: float
    std_dev: float
    mean_abs_objective_gap: float
    predicted_bound: float
    n_trials: int
    n_infeasible: int = 0

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def _aggregate(epsilon, cops, gaps, bound) -> ExperimentRecord:
    cops = np.asarray(cops)
    std = float(cops.std(ddof=1)) if cops.size > 1 else 0.0
    return ExperimentRecord(
        epsilon=float(epsilon),
        mean_cost_of_privacy_percent=float(cops.mean()),
        std_dev=std,
        mean_abs_objective_gap=float(np.mean(gaps)),
        predicted_bound=bound,
        n_trials=int(cops.size),
    )


def sweep_linear_program(lp: LinearProgram, config: ExperimentConfig) -> list[ExperimentRecord]:
    """Epsilon sweep over a plain LP: privatize A, re-solve, compare objectives."""
    vp = validate(lp)
    sys_ = vp.system
    base = simplex.solve_lp(lp.c, sys_)
    if not base.is_optimal:
        raise ValueError(f"baseline problem is {base.status}; the sweep needs a finite optimum")
    records = []
    for ei, eps in enumerate(config.eps_grid):
        params = PrivacyParams(epsilon=eps, delta=config.delta, k=config.k)
        bound = cost_bound(lp, params).bound
        cops, gaps = [], []
        for trial in range(config.trials):
            seed = derive_seed(config.base_seed, ei, trial)
            priv = privatize_matrix(sys_, params, seed)
            tightened = dataclasses.replace(sys_, A=priv.A_tilde)
            sol = simplex.solve_lp(lp.c, tightened)
            if not sol.is_optimal:
                raise SweepAbort(
                    f"trial {trial} at epsilon={eps} (seed {seed}) came back {sol.status}; "
                    "a tightened validated problem must stay solvable")
            worst = float(np.max(sys_.A @ sol.x - sys_.b))
            if worst > 1e-9:
                raise SweepAbort(
                    f"trial {trial} at epsilon={eps} violates the original constraints "
                    f"by {worst:.3e}")
            cops.append(cmdp_mod.cost_of_privacy(base.objective, sol.objective))
            gaps.append(abs(base.objective - sol.objective))
        records.append(_aggregate(eps, cops, gaps, bound))
    return records


def sweep_gridworld(grid: cmdp_mod.GridConfig, config: ExperimentConfig) -> list[ExperimentRecord]:
    """Epsilon sweep over the CMDP application.

    Privatizes only the hazard budget row; the cost of privacy compares the
    initial-state value of the privately synthesized policy with the
    non-private optimum. Every trial's occupancy is re-checked against the
    original hazard row.
    """
    mdp = cmdp_mod.build_gridworld(grid)
    hazard = cmdp_mod.hazard_constraint(mdp)
    hazard_sys = hazard.to_constraint_system()
    objective = mdp.rewards.reshape(-1)
    validate(LinearProgram(c=objective, system=hazard_sys))
    _, policy_star, obj_star = cmdp_mod.synthesize_policy(mdp, hazard)
    v_star = float(mdp.mu @ cmdp_mod.value_function(mdp, policy_star))
    records = []
    for ei, eps in enumerate(config.eps_grid):
        params = PrivacyParams(epsilon=eps, delta=config.delta, k=config.k)
        bound = cost_bound(LinearProgram(c=objective, system=hazard_sys), params).bound
        cops, gaps = [], []
        for trial in range(config.trials):
            seed = derive_seed(config.base_seed, ei, trial)
            priv = privatize_matrix(hazard_sys, params, seed)
            try:
                occupancy, policy, obj = cmdp_mod.synthesize_policy(
                    mdp, hazard.with_row(priv.A_tilde[0]))
            except cmdp_mod.InfeasibleBudgetError as exc:
                raise SweepAbort(
                    f"trial {trial} at epsilon={eps} (seed {seed}) infeasible: {exc}") from exc
            usage = float(hazard.row @ occupancy.reshape(-1))
            if usage > hazard.f0 + 1e-9:
                raise SweepAbort(
                    f"trial {trial} at epsilon={eps} breaks the original hazard budget: "
                    f"{usage} > {hazard.f0}")
            v_trial = float(mdp.mu @ cmdp_mod.value_function(mdp, policy))
            cops.append(cmdp_mod.cost_of_privacy(v_star, v_trial))
            gaps.append(abs(obj_star - obj))
        records.append(_aggregate(eps, cops, gaps, bound))
    return records


def run_sweep(problem, config: ExperimentConfig) -> list[ExperimentRecord]:
    """Dispatch a sweep for either a LinearProgram or a GridConfig."""
    if isinstance(problem, LinearProgram):
        return sweep_linear_program(problem, config)
    if isinstance(problem, cmdp_mod.GridConfig):
        return sweep_gridworld(problem, config)
    raise TypeError(f"cannot sweep over {type(problem).__name__}")


def _fmt(value: float) -> str:
    return f"{value:.9g}"


def records_to_csv(records: list[ExperimentRecord]) -> str:
    """Fixed-column CSV with floats at 9 significant digits."""
    lines = [CSV_HEADER]
    for r in records:
        lines.append(",".join([
            _fmt(r.epsilon), _fmt(r.mean_cost_of_privacy_percent), _fmt(r.std_dev),
            _fmt(r.mean_abs_objective_gap), _fmt(r.predicted_bound),
            str(r.n_trials), str(r.n_infeasible),
        ]))
    return "\n".join(lines) + "\n"


def records_to_json(records: list[ExperimentRecord]) -> str:
    return json.dumps([r.to_dict() for r in records], indent=2) + "\n"
