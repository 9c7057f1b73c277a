"""Constrained-MDP policy synthesis with a private hazard constraint.

A finite MDP is solved through its occupancy-measure LP: maximize expected
discounted reward over visitation frequencies x(s, a) subject to flow
conservation, x >= 0, and one hazard-budget row that caps discounted
exposure to hazardous states. Only the hazard row carries sensitive data
(the per-state hazard weights); the flow-conservation rows encode public
dynamics and are never privatized.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, replace

import numpy as np

from .problem import ConstraintSystem, DimensionError
from . import simplex

UP, DOWN, LEFT, RIGHT = 0, 1, 2, 3
_MOVES = {UP: (-1, 0), DOWN: (1, 0), LEFT: (0, -1), RIGHT: (0, 1)}


@dataclass(frozen=True)
class Cmdp:
    """Finite MDP with per-state hazard weights and a discounted hazard budget."""

    rewards: np.ndarray        # (p, q)
    transitions: np.ndarray    # (p, q, p); transitions[s, a, y] = P(y | s, a)
    gamma: float
    mu: np.ndarray             # initial state distribution, length p
    hazard_states: frozenset[int]
    beta: np.ndarray           # per-state hazard weights, length p
    f0: float
    hazard_sup: float = 3.0

    def __post_init__(self):
        r = np.asarray(self.rewards, dtype=float)
        T = np.asarray(self.transitions, dtype=float)
        mu = np.asarray(self.mu, dtype=float)
        beta = np.asarray(self.beta, dtype=float)
        p, q = r.shape
        if T.shape != (p, q, p):
            raise DimensionError(f"transitions must have shape ({p}, {q}, {p}), got {T.shape}")
        if mu.shape != (p,) or beta.shape != (p,):
            raise DimensionError("mu and beta must have length equal to the state count")
        if not (0 < self.gamma < 1):
            raise ValueError(f"gamma must lie in (0, 1), got {self.gamma}")
        if np.any(T < 0) or np.any(np.abs(T.sum(axis=2) - 1.0) > 1e-12):
            raise ValueError("every transitions[s, a, :] must be a probability distribution")
        if np.any(mu < 0) or abs(mu.sum() - 1.0) > 1e-12:
            raise ValueError("mu must be a probability distribution")
        if np.any(beta < 0):
            raise ValueError("hazard weights must be nonnegative")
        if not all(0 <= s < p for s in self.hazard_states):
            raise ValueError("hazard_states must be valid state indices")
        object.__setattr__(self, "rewards", r)
        object.__setattr__(self, "transitions", T)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "hazard_states", frozenset(int(s) for s in self.hazard_states))

    @property
    def n_states(self) -> int:
        return self.rewards.shape[0]

    @property
    def n_actions(self) -> int:
        return self.rewards.shape[1]


@dataclass(frozen=True)
class Policy:
    """Stochastic policy; pi[s, a] = probability of action a in state s."""

    pi: np.ndarray

    def __post_init__(self):
        pi = np.asarray(self.pi, dtype=float)
        if np.any(pi < 0) or np.any(np.abs(pi.sum(axis=1) - 1.0) > 1e-9):
            raise ValueError("every policy row must be a probability distribution")
        object.__setattr__(self, "pi", pi)


@dataclass(frozen=True)
class HazardRow:
    """One linear budget row over flattened occupancy variables x(s, a).

    ``row[s*q + a] = beta_s * gamma`` for hazardous s, else 0 (masked as
    structurally zero). ``sup`` holds the public per-coefficient bound on
    hazardous coordinates.
    """

    row: np.ndarray
    f0: float
    sup: np.ndarray
    mask: np.ndarray

    def to_constraint_system(self) -> ConstraintSystem:
        """The 1-row system fed to validation and privatization."""
        return ConstraintSystem(A=self.row[None, :], b=np.array([self.f0]),
                                zero_mask=self.mask[None, :], sup_A=self.sup[None, :])

    def with_row(self, new_row: np.ndarray) -> "HazardRow":
        return replace(self, row=np.asarray(new_row, dtype=float))


@dataclass(frozen=True)
class GridConfig:
    """Gridworld layout and experiment knobs; everything lives in config."""

    width: int
    height: int
    start: tuple[int, int]
    goal: tuple[int, int]
    hazards: tuple[tuple[tuple[int, int], float], ...]  # ((row, col), beta)
    slip: float = 0.1
    gamma: float = 0.9
    f0: float = 0.3
    goal_reward: float = 1.0
    sup_a: float = 3.0

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("grid dimensions must be positive")
        cells = [self.start, self.goal] + [cell for cell, _ in self.hazards]
        for r, c in cells:
            if not (0 <= r < self.height and 0 <= c < self.width):
                raise ValueError(f"cell ({r}, {c}) lies outside the {self.height}x{self.width} grid")
        if self.goal in {cell for cell, _ in self.hazards}:
            raise ValueError("the goal cell cannot be hazardous")
        if not (0 <= self.slip < 1):
            raise ValueError(f"slip must lie in [0, 1), got {self.slip}")
        if not (0 < self.gamma < 1):
            raise ValueError(f"gamma must lie in (0, 1), got {self.gamma}")

    def cell_index(self, cell: tuple[int, int]) -> int:
        return cell[0] * self.width + cell[1]


def load_grid_config(text: str) -> GridConfig:
    """Parse the GridConfig JSON schema."""
    doc = json.loads(text)
    hazards = tuple((tuple(h["cell"]), float(h["beta"])) for h in doc.get("hazards", []))
    return GridConfig(width=int(doc["width"]), height=int(doc["height"]),
                      start=tuple(doc["start"]), goal=tuple(doc["goal"]),
                      hazards=hazards, slip=float(doc.get("slip", 0.1)),
                      gamma=float(doc.get("gamma", 0.9)), f0=float(doc.get("f0", 0.3)),
                      goal_reward=float(doc.get("goal_reward", 1.0)),
                      sup_a=float(doc.get("sup_a", 3.0)))


def default_grid() -> GridConfig:
    """5x5 grid: mid-left start, mid-right goal, hazard wall with end gaps.

    The wall occupies column 2, rows 1-3, so the shortest route crosses a
    hazard and the detour through a gap costs extra steps. The budget is
    tuned so the hazard constraint binds for the optimal non-private policy
    (a slack budget would make privatization free and the experiment
    vacuous) while leaving the worst-case tightened problem comfortably
    feasible.
    """
    hazards = tuple(((r, 2), 1.0) for r in (1, 2, 3))
    return GridConfig(width=5, height=5, start=(2, 0), goal=(2, 4),
                      hazards=hazards, slip=0.1, gamma=0.9, f0=0.35,
                      goal_reward=1.0, sup_a=3.0)


def build_gridworld(cfg: GridConfig) -> Cmdp:
    """Slippery gridworld: intended move with probability 1 - slip, the rest
    split evenly over the other three directions; moving off-grid stays in
    place; the goal state is absorbing and pays its reward on occupancy."""
    p = cfg.width * cfg.height
    q = 4
    goal = cfg.cell_index(cfg.goal)
    T = np.zeros((p, q, p))
    for r in range(cfg.height):
        for c in range(cfg.width):
            s = cfg.cell_index((r, c))
            if s == goal:
                T[s, :, s] = 1.0
                continue
            for action in range(q):
                for direction, (dr, dc) in _MOVES.items():
                    prob = 1.0 - cfg.slip if direction == action else cfg.slip / 3.0
                    rr, cc = r + dr, c + dc
                    dest = s if not (0 <= rr < cfg.height and 0 <= cc < cfg.width) \
                        else cfg.cell_index((rr, cc))
                    T[s, action, dest] += prob
    rewards = np.zeros((p, q))
    rewards[goal, :] = cfg.goal_reward
    mu = np.zeros(p)
    mu[cfg.cell_index(cfg.start)] = 1.0
    beta = np.zeros(p)
    hazard_states = set()
    for cell, weight in cfg.hazards:
        idx = cfg.cell_index(cell)
        beta[idx] = weight
        hazard_states.add(idx)
    return Cmdp(rewards=rewards, transitions=T, gamma=cfg.gamma, mu=mu,
                hazard_states=frozenset(hazard_states), beta=beta, f0=cfg.f0,
                hazard_sup=cfg.sup_a)


def hazard_constraint(m: Cmdp) -> HazardRow:
    """Assemble the hazard budget row over flattened occupancy variables.

    Hazardous (s, a) coordinates carry ``beta_s * gamma``; everything else
    is structurally zero (public). The public bound on each hazardous
    coefficient is the configured supremum.
    """
    p, q = m.n_states, m.n_actions
    row = np.zeros(p * q)
    sup = np.zeros(p * q)
    mask = np.ones(p * q, dtype=bool)
    for s in m.hazard_states:
        row[s * q:(s + 1) * q] = m.beta[s] * m.gamma
        sup[s * q:(s + 1) * q] = m.hazard_sup
        mask[s * q:(s + 1) * q] = False
    return HazardRow(row=row, f0=m.f0, sup=sup, mask=mask)


class InfeasibleBudgetError(RuntimeError):
    """The hazard budget cuts the occupancy polytope to nothing."""


def _occupancy_lp(m: Cmdp, hazard: HazardRow) -> ConstraintSystem:
    """Flow conservation (as inequality pairs) plus the hazard row."""
    p, q = m.n_states, m.n_actions
    nv = p * q
    flow = np.zeros((p, nv))
    for s_next in range(p):
        flow[s_next, s_next * q:(s_next + 1) * q] = 1.0
        flow[s_next] -= m.gamma * m.transitions[:, :, s_next].reshape(nv)
    A = np.vstack([flow, -flow, hazard.row[None, :]])
    b = np.concatenate([m.mu, -m.mu, [hazard.f0]])
    mask = np.zeros_like(A, dtype=bool)
    sup = np.maximum(np.abs(A), 1.0)  # filler bounds; this system is solved, never privatized
    return ConstraintSystem(A=A, b=b, zero_mask=mask, sup_A=sup)


def synthesize_policy(m: Cmdp, hazard: HazardRow):
    """Solve the occupancy LP and extract the policy.

    Returns ``(occupancy, Policy, objective)`` where ``occupancy`` has
    shape (states, actions). States with zero occupancy (unreachable under
    the optimum) get the uniform action distribution. Raises
    :class:`InfeasibleBudgetError` when the budget admits no policy.
    """
    p, q = m.n_states, m.n_actions
    sys_ = _occupancy_lp(m, hazard)
    sol = simplex.solve_lp(m.rewards.reshape(p * q), sys_)
    if sol.status == simplex.INFEASIBLE:
        raise InfeasibleBudgetError(f"hazard budget f0={hazard.f0} admits no policy")
    if sol.status == simplex.UNBOUNDED:
        raise RuntimeError("occupancy LP cannot be unbounded for gamma < 1; model is malformed")
    occupancy = np.maximum(sol.x.reshape(p, q), 0.0)
    totals = occupancy.sum(axis=1, keepdims=True)
    pi = np.where(totals > 1e-12, occupancy / np.where(totals > 0, totals, 1.0), 1.0 / q)
    pi /= pi.sum(axis=1, keepdims=True)
    return occupancy, Policy(pi=pi), float(sol.objective)


def value_function(m: Cmdp, policy: Policy) -> np.ndarray:
    """State values of a fixed policy: solve (I - gamma P_pi) v = r_pi."""
    P_pi = np.einsum("sa,say->sy", policy.pi, m.transitions)
    r_pi = (policy.pi * m.rewards).sum(axis=1)
    return np.linalg.solve(np.eye(m.n_states) - m.gamma * P_pi, r_pi)


def cost_of_privacy(v_star: float, v_tilde: float) -> float:
    """Percent decrease of the initial-state value due to privacy."""
    if v_star <= 0:
        raise ValueError(f"cost of privacy is undefined for non-positive baseline {v_star}")
    return (v_star - v_tilde) / v_star * 100.0
