"""Stationary-distribution ranking over a proximity graph.

Power iteration of x <- beta * xP + (1-beta) * t, where P is the
row-stochastic transition matrix of the graph (isolated nodes get uniform
rows) and t is the teleport vector: uniform for global ranking, uniform over
a seed set for personalized ranking.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np
import scipy.sparse as sp

from .proximity import ProximityGraph


@dataclass(frozen=True)
class RankingConfig:
    damping: float = 0.85
    tolerance: float = 1e-10
    max_iterations: int = 10_000

    def __post_init__(self) -> None:
        if not 0.0 < self.damping < 1.0:
            raise ValueError(f"damping must be in (0,1): {self.damping}")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be > 0")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


@dataclass(frozen=True, eq=False)
class RankingDistribution:
    """Probability per node id, plus convergence diagnostics."""

    probs: Mapping[str, float]
    iterations_used: int
    residual: float
    converged: bool = True

    def top(self, n: int | None = None) -> list[tuple[str, float]]:
        """Node ids by descending probability, ties broken by ascending id."""
        ranked = sorted(self.probs.items(), key=lambda kv: (-kv[1], kv[0]))
        return ranked if n is None else ranked[:n]

    def to_dict(self) -> dict[str, float]:
        return dict(self.probs)


def transition_matrix(graph: ProximityGraph) -> sp.csr_matrix:
    """Row-stochastic matrix P_ij = m_ij / sum_j m_ij.

    Rows with no out-weight (isolated nodes) become uniform so the chain
    stays stochastic.
    """
    n = graph.n
    m = graph.matrix
    row_sums = np.asarray(m.sum(axis=1)).ravel()
    dangling = row_sums <= 0
    scale = np.zeros(n)
    scale[~dangling] = 1.0 / row_sums[~dangling]
    p = sp.diags(scale) @ m
    if dangling.any():
        p = p.tolil()
        uniform = [1.0 / n] * n
        for i in np.flatnonzero(dangling):
            p.rows[i] = list(range(n))
            p.data[i] = list(uniform)
    return sp.csr_matrix(p)


def power_iteration(
    p: sp.csr_matrix,
    teleport: np.ndarray,
    config: RankingConfig,
) -> tuple[np.ndarray, int, list[float]]:
    """Iterate to the fixed point; returns (x, iterations, residual history).

    The residual is the L1 change per iteration; iteration stops when it
    drops below the configured tolerance or max_iterations is reached.
    """
    beta = config.damping
    pt = p.T.tocsr()  # column-action form: (xP)^T = P^T x^T
    x = teleport.copy()
    residuals: list[float] = []
    for _ in range(config.max_iterations):
        x_next = beta * (pt @ x) + (1.0 - beta) * teleport
        residual = float(np.abs(x_next - x).sum())
        residuals.append(residual)
        x = x_next
        if residual < config.tolerance:
            break
    return x, len(residuals), residuals


def pagerank(graph: ProximityGraph, config: RankingConfig | None = None) -> RankingDistribution:
    """Global ranking with uniform teleport."""
    config = config or RankingConfig()
    n = graph.n
    if n == 0:
        raise ValueError("cannot rank an empty graph")
    teleport = np.full(n, 1.0 / n)
    return _run(graph, teleport, config)


def personalized_pagerank(
    graph: ProximityGraph,
    seeds: Iterable[str],
    config: RankingConfig | None = None,
) -> RankingDistribution:
    """Ranking with teleport restricted to the seed set; scores measure
    diffusion proximity to the seeds."""
    config = config or RankingConfig()
    seed_list = list(seeds)
    if not seed_list:
        raise ValueError("seed set must be non-empty")
    n = graph.n
    if n == 0:
        raise ValueError("cannot rank an empty graph")
    teleport = np.zeros(n)
    for seed in seed_list:
        if seed not in graph.index:
            raise KeyError(f"unknown seed id {seed!r}")
        teleport[graph.index[seed]] = 1.0
    teleport /= teleport.sum()
    return _run(graph, teleport, config)


def _run(graph: ProximityGraph, teleport: np.ndarray, config: RankingConfig) -> RankingDistribution:
    p = transition_matrix(graph)
    x, iterations, residuals = power_iteration(p, teleport, config)
    x = x / x.sum()
    return RankingDistribution(
        probs={node_id: float(v) for node_id, v in zip(graph.node_ids, x)},
        iterations_used=iterations,
        residual=residuals[-1],
        converged=residuals[-1] < config.tolerance,
    )
