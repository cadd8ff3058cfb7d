"""Capacity maximization over input rank distributions.

The mutual information is concave on the probability simplex of input rank
distributions, so a Frank-Wolfe method with exact line search converges to
the maximum and its duality gap certifies optimality.  Plain Frank-Wolfe
stalls at O(1/k) when the optimum sits on a face, so the solver takes away
steps as well (the Guelat-Marcotte variant), which restores fast convergence
to boundary optima at tight tolerances.

The objective and gradient accept plain float vectors in addition to
RankDistribution values: line search and finite-difference checks evaluate
them slightly off the simplex, where the formulas remain well defined.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, List, Optional, Sequence, Tuple, Union

from .channel import (
    ChannelParams,
    RankDistribution,
    h_r,
    log2_exact,
    rank_class_size,
    rho_avg,
)

_LOG2E = math.log2(math.e)

InputVector = Union[RankDistribution, Sequence[float]]
Observer = Callable[[int, float, float], None]


@dataclass(frozen=True)
class SolverConfig:
    """Stopping rule and starting point for :func:`maximize`."""

    tolerance_bits: float = 1e-9
    max_iterations: int = 100000
    start_distribution: Optional[RankDistribution] = None

    def __post_init__(self) -> None:
        if not self.tolerance_bits > 0:
            raise ValueError("tolerance_bits must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")


@dataclass(frozen=True)
class CapacityResult:
    """Outcome of a capacity run; converged=False flags a gap above tolerance."""

    optimal_input: RankDistribution
    capacity_bits: float
    optimality_gap_bits: float
    iterations: int
    output_ranks: RankDistribution
    converged: bool


class _Workspace:
    """Per-channel precomputation: h_r vector and the rank transition kernel."""

    def __init__(self, params: ChannelParams):
        k = params.rank_count
        self.size = k
        self.h_vec: Tuple[float, ...] = tuple(h_r(r, params) for r in range(k))
        self.kernel: Tuple[Tuple[float, ...], ...] = tuple(
            tuple(float(rho_avg(ry, rx, params)) for rx in range(k))
            for ry in range(k)
        )
        self.log_class: Tuple[float, ...] = tuple(
            log2_exact(rank_class_size(params, r)) for r in range(k)
        )

    def output_probs(self, x: Sequence[float]) -> List[float]:
        return [
            sum(row[a] * x[a] for a in range(self.size) if x[a] != 0)
            for row in self.kernel
        ]

    def objective(self, x: Sequence[float]) -> float:
        h_y = 0.0
        for ry, p in enumerate(self.output_probs(x)):
            if p > 0:
                h_y -= p * (math.log2(p) - self.log_class[ry])
        h_y_given_x = sum(x[a] * self.h_vec[a] for a in range(self.size))
        return h_y - h_y_given_x

    def gradient(self, x: Sequence[float]) -> List[float]:
        out = self.output_probs(x)
        log_terms = [
            (math.log2(p) - self.log_class[ry] + _LOG2E) if p > 0 else None
            for ry, p in enumerate(out)
        ]
        grad = []
        for a in range(self.size):
            acc = 0.0
            for ry in range(self.size):
                t = self.kernel[ry][a]
                if t == 0:
                    continue
                if log_terms[ry] is None:
                    acc = -math.inf
                    break
                acc += t * log_terms[ry]
            grad.append(-self.h_vec[a] - acc)
        return grad


@lru_cache(maxsize=None)
def _workspace(params: ChannelParams) -> _Workspace:
    return _Workspace(params)


def _as_vector(input_ranks: InputVector, size: int) -> List[float]:
    if isinstance(input_ranks, RankDistribution):
        values = input_ranks.as_floats()
    else:
        values = tuple(float(v) for v in input_ranks)
    if len(values) != size:
        raise ValueError(f"expected {size} entries, got {len(values)}")
    if any(v < 0 for v in values):
        raise ValueError("input rank probabilities must be non-negative")
    return list(values)


def objective(input_ranks: InputVector, params: ChannelParams) -> float:
    """Mutual information in bits, assembled from the solver workspace.

    Numerically the same quantity as channel.mutual_information (the two
    assemblies are tested against each other); kept separate so the solver's
    own arithmetic is cross-checked rather than self-referential.
    """
    ws = _workspace(params)
    return ws.objective(_as_vector(input_ranks, ws.size))


def gradient(input_ranks: InputVector, params: ChannelParams) -> List[float]:
    """Partial derivatives of the objective, in bits per unit probability.

    Component a is -h_a - sum_rY T(rY|a)(log2(R_Y(rY)/N_rY) + log2 e).
    Output rank classes with zero probability but positive transition weight
    make the component +inf: feeding them any mass strictly improves the
    objective, and the maximizer prioritizes such directions.
    """
    ws = _workspace(params)
    return ws.gradient(_as_vector(input_ranks, ws.size))


def _exact_line_search(
    ws: _Workspace, x: Sequence[float], direction: Sequence[float], alpha_max: float
) -> float:
    """Maximize the objective along x + alpha*direction for alpha in [0, hi].

    Bisects on the sign of the directional derivative rather than comparing
    objective values: near the optimum the value is flat to float precision
    while the slope still carries ~15 significant digits, which is what lets
    the Frank-Wolfe gap reach 1e-9 and below.
    """

    def slope(alpha: float) -> float:
        point = [max(p + alpha * d, 0.0) for p, d in zip(x, direction)]
        grad = ws.gradient(point)
        total = 0.0
        ascending_inf = False
        descending_inf = False
        for g, d in zip(grad, direction):
            if d == 0:
                continue
            if math.isinf(g):
                if d > 0:
                    ascending_inf = True
                else:
                    descending_inf = True
            else:
                total += g * d
        if ascending_inf:
            return math.inf
        if descending_inf:
            return -math.inf
        return total

    if slope(alpha_max) >= 0:
        return alpha_max
    lo, hi = 0.0, alpha_max
    while hi - lo > 1e-17 + 1e-15 * lo:
        mid = 0.5 * (lo + hi)
        if slope(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def maximize(
    params: ChannelParams,
    config: Optional[SolverConfig] = None,
    *,
    observer: Optional[Observer] = None,
) -> CapacityResult:
    """Maximize mutual information over input rank distributions.

    Away-step Frank-Wolfe with derivative-bisection line search.  Stops when
    the Frank-Wolfe gap max_a grad_a - grad . x (an upper bound on the
    remaining suboptimality, in bits) drops to config.tolerance_bits; hitting
    max_iterations first returns the best iterate with converged=False.

    ``observer``, when given, is called after every iteration with
    (iteration, objective_bits, gap_bits).
    """
    if config is None:
        config = SolverConfig()
    ws = _workspace(params)
    k = ws.size
    if config.start_distribution is not None:
        x = _as_vector(config.start_distribution, k)
        total = sum(x)
        if abs(total - 1) > 1e-9:
            raise ValueError("start distribution must sum to 1")
        x = [v / total for v in x]
    else:
        x = [1.0 / k] * k

    best_value = ws.objective(x)
    gap = math.inf
    iterations = 0
    converged = False
    for iterations in range(1, config.max_iterations + 1):
        grad = ws.gradient(x)
        grad_dot_x = sum(g * p for g, p in zip(grad, x) if p > 0)
        fw_idx = max(range(k), key=lambda a: (grad[a], -a))
        gap = grad[fw_idx] - grad_dot_x
        if gap <= config.tolerance_bits:
            converged = True
            if observer is not None:
                observer(iterations, best_value, gap)
            break

        support = [a for a in range(k) if x[a] > 0]
        away_idx = min(support, key=lambda a: (grad[a], a))
        away_gap = grad_dot_x - grad[away_idx]

        if gap >= away_gap or x[away_idx] >= 1.0:
            direction = [-v for v in x]
            direction[fw_idx] += 1.0
            alpha_max = 1.0
        else:
            direction = list(x)
            direction[away_idx] -= 1.0
            alpha_max = x[away_idx] / (1.0 - x[away_idx])

        alpha = _exact_line_search(ws, x, direction, alpha_max)
        x = [max(p + alpha * d, 0.0) for p, d in zip(x, direction)]
        total = sum(x)
        x = [p / total for p in x]
        value = ws.objective(x)
        if value > best_value:
            best_value = value
        if observer is not None:
            observer(iterations, value, gap)

    out = ws.output_probs(x)
    return CapacityResult(
        optimal_input=RankDistribution(x),
        capacity_bits=best_value,
        optimality_gap_bits=gap,
        iterations=iterations,
        output_ranks=RankDistribution(out),
        converged=converged,
    )
