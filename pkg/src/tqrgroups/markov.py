"""The tensor-product Markov chain on Irrep(G): from an irreducible, tensor
with a fixed reduced representation and sample an irreducible constituent
weighted by multiplicity times dimension. The kernel is computed exactly from
characters; trajectories may additionally be sampled for demonstrations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import config
from .chartable import CharTable, ClassFunction
from .classfuncs import (RepMultiset, character_of, decompose, plancherel_frac,
                         power_support_mask, reduce_rep, support_measure_frac)


@dataclass(eq=False)
class ChainModel:
    """Exact transition kernel of the chain `tensor with reduced V`."""

    table: CharTable
    rep: RepMultiset
    reduced: RepMultiset
    kernel: np.ndarray
    reduced_dim: int

    def __post_init__(self):
        self.kernel = np.ascontiguousarray(self.kernel, dtype=np.float64)
        self.kernel.setflags(write=False)

    @property
    def num_states(self) -> int:
        return self.table.num_irreps

    def stationary(self) -> np.ndarray:
        return self.table.dims.astype(np.float64) ** 2 / self.table.group.order


@dataclass
class MixingReport:
    start: int | None
    metric: str
    epsilon: float
    mixing_time: int | None
    t_max: int
    curve: list[dict]
    mixing_times: dict

    def to_json_dict(self) -> dict:
        return {"start": self.start, "metric": self.metric,
                "epsilon": self.epsilon, "mixing_time": self.mixing_time,
                "t_max": self.t_max, "mixing_times": self.mixing_times,
                "curve": self.curve}


def build_chain(T: CharTable, V: RepMultiset) -> ChainModel:
    """p(lam, mu) = mult(mu in lam (x) reduced(V)) * dim(mu) / (dim(lam) * dim(reduced V))."""
    if V.is_zero:
        raise ValueError("the driving representation must be nonzero")
    red = reduce_rep(V)
    red_char = character_of(T, red)
    dim_red = int(np.sum(T.dims[list(V.support())] ** 2))
    r = T.num_irreps
    kernel = np.zeros((r, r))
    dims = T.dims.astype(np.float64)
    for lam in range(r):
        prod = ClassFunction(T.group, T.classes, T.values[lam] * red_char.values)
        mult = decompose(T, prod).mult
        kernel[lam] = mult * dims / (dims[lam] * dim_red)
    row_err = np.max(np.abs(kernel.sum(axis=1) - 1.0))
    if row_err > config.TOL:
        raise RuntimeError(f"kernel rows do not sum to 1 (residual {row_err:.2e})")
    return ChainModel(table=T, rep=V, reduced=red, kernel=kernel,
                      reduced_dim=dim_red)


def t_step_distribution(M: ChainModel, lam: int, t: int) -> np.ndarray:
    """Distribution after t steps started from the point mass at lam."""
    if t < 0:
        raise ValueError("t must be non-negative")
    dist = np.zeros(M.num_states)
    dist[lam] = 1.0
    for _ in range(t):
        dist = dist @ M.kernel
    return dist


def direct_t_step_distribution(M: ChainModel, lam: int, t: int) -> np.ndarray:
    """Same distribution computed by decomposing lam (x) reduced(V)^(x t) in
    one shot instead of iterating the kernel; used as a cross-check."""
    T = M.table
    red_char = character_of(T, M.reduced)
    vals = T.values[lam] * red_char.values ** t
    mult = decompose(T, ClassFunction(T.group, T.classes, vals)).mult
    weights = mult * T.dims
    return weights / weights.sum()


def distances_to_stationary(M: ChainModel, dist: np.ndarray) -> dict:
    """All implemented distances between one distribution and Plancherel."""
    pi = M.stationary()
    return {
        "uniform": float(np.max(np.abs(dist / pi - 1.0))),
        "tv_max": float(np.max(np.abs(dist - pi))),
        "tv_half_l1": float(0.5 * np.sum(np.abs(dist - pi))),
    }


_METRICS = ("uniform", "tv_max", "tv_half_l1")


def mixing_time(M: ChainModel, metric: str, epsilon: float, t_max: int = 64,
                start: int | None = None) -> MixingReport:
    """First t at which the requested distance drops to epsilon.

    `tv_max` is the max over pairs of |p_t - pi(mu)|; `tv_half_l1` is the
    conventional total variation distance; `uniform` is the relative
    (l-infinity) distance. With start=None the distances maximize over all
    starting irreducibles, matching the usual mixing-time definitions.
    """
    if metric == "tv":
        metric = "tv_max"
    if metric not in _METRICS:
        raise ValueError(f"metric must be one of {_METRICS} (or 'tv')")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    starts = range(M.num_states) if start is None else [start]
    dists = {lam: np.eye(M.num_states)[lam] for lam in starts}
    curve = []
    mixing_times: dict[str, int | None] = {m: None for m in _METRICS}
    for t in range(t_max + 1):
        worst = {m: 0.0 for m in _METRICS}
        for lam in starts:
            d = distances_to_stationary(M, dists[lam])
            for m in _METRICS:
                worst[m] = max(worst[m], d[m])
        curve.append({"t": t, **worst})
        for m in _METRICS:
            if mixing_times[m] is None and worst[m] <= epsilon:
                mixing_times[m] = t
        if t < t_max:
            for lam in starts:
                dists[lam] = dists[lam] @ M.kernel
    return MixingReport(start=start, metric=metric, epsilon=epsilon,
                        mixing_time=mixing_times[metric], t_max=t_max,
                        curve=curve, mixing_times=mixing_times)


def stationarity_residual(M: ChainModel) -> float:
    pi = M.stationary()
    return float(np.max(np.abs(pi @ M.kernel - pi)))


def sample_trajectory(M: ChainModel, start: int, steps: int, seed: int = 0) -> list[int]:
    """Demonstration sampler; all analysis above is exact and does not use it."""
    rng = np.random.default_rng(seed)
    out = [start]
    cur = start
    for _ in range(steps):
        cur = int(rng.choice(M.num_states, p=M.kernel[cur]))
        out.append(cur)
    return out


def mixing_experiment(T: CharTable, V: RepMultiset, epsilon: float,
                      m: int) -> dict:
    """Both directions of the constant-time mixing phenomenon on one chain.

    Positive side: the uniform distance at t=3 against the Hoelder bound
    c(G)^(-1/2) / M(V)^3. Negative side: total variation from Plancherel
    after m steps started at the trivial irreducible, with the exactly
    inaccessible Plancherel mass.
    """
    chain = build_chain(T, V)
    c = T.classes.min_nontrivial_size
    mv = plancherel_frac(T, V)

    worst3 = 0.0
    for lam in range(chain.num_states):
        d = distances_to_stationary(chain, t_step_distribution(chain, lam, 3))
        worst3 = max(worst3, d["uniform"])
    bound = float(c ** -0.5 / float(mv) ** 3) if (c is not None and mv > 0) else None

    dist_m = t_step_distribution(chain, 0, m)
    neg = distances_to_stationary(chain, dist_m)
    reach_mask = power_support_mask(T, V.support_mask(), m)
    inaccessible = 1 - support_measure_frac(T, reach_mask)

    return {
        "measure": float(mv),
        "c": c,
        "epsilon": epsilon,
        "m": m,
        "uniform_distance_t3": worst3,
        "hoelder_bound_t3": bound,
        "within_epsilon_t3": worst3 <= epsilon,
        "within_bound_t3": None if bound is None else worst3 <= bound + config.TOL,
        "tv_half_l1_after_m_from_trivial": neg["tv_half_l1"],
        "tv_max_after_m_from_trivial": neg["tv_max"],
        "inaccessible_mass_after_m": float(inaccessible),
        "stationarity_residual": stationarity_residual(chain),
    }
