"""Random variate generation and the reproducible Monte Carlo sum driver.

The generator is a counter-mode SplitMix64: output j of a stream with seed s
is ``mix(s + j * 0x9E3779B97F4A7C15)`` where ``mix`` is the SplitMix64
finalizer (xor-shift / multiply staircase).  Uniforms are built from the top
53 bits as ``(bits + 0.5) * 2**-53`` and therefore lie strictly inside (0, 1).

Counter mode makes block generation vectorisable and gives O(1) jump-ahead,
so a replicate's stream can be regenerated from (seed, position) alone.
Substream k of a master seed is ``mix(master ^ (k * 0x9E3779B97F4A7C15))``;
replicates of a campaign use substreams, never slices of one stream.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .model import InstanceParams, ModelParams, derive_instance
from .regimes import NormalizationPlan

__all__ = [
    "RngStream",
    "SumSample",
    "substream_seed",
    "quantile_light",
    "quantile_truncated_pareto",
    "sample_mixture",
    "sample_sum",
    "monte_carlo",
]

_GOLDEN = 0x9E3779B97F4A7C15
_MASK64 = (1 << 64) - 1

# Draws per block when accumulating long sums; 2**19 keeps the working set of
# one replicate near 8 MB so several threads fit comfortably in cache/RAM.
_CHUNK = 1 << 19


def _mix64(z: int) -> int:
    """SplitMix64 finalizer on a Python int, reduced mod 2**64."""
    z &= _MASK64
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & _MASK64
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & _MASK64
    z ^= z >> 31
    return z


def _mix64_array(z: np.ndarray) -> np.ndarray:
    """SplitMix64 finalizer applied elementwise to a uint64 array (wraps mod 2**64)."""
    z = z.copy()
    z ^= z >> np.uint64(30)
    z *= np.uint64(0xBF58476D1CE4E5B9)
    z ^= z >> np.uint64(27)
    z *= np.uint64(0x94D049BB133111EB)
    z ^= z >> np.uint64(31)
    return z


def substream_seed(master_seed: int, k: int) -> int:
    """Seed of replicate substream k: mix(master ^ (k * 0x9E3779B97F4A7C15))."""
    if k < 0:
        raise ValueError(f"substream index must be non-negative, got {k}")
    return _mix64((master_seed & _MASK64) ^ ((k * _GOLDEN) & _MASK64))


class RngStream:
    """Deterministic uniform stream; single-owner, never shared across threads."""

    __slots__ = ("seed", "position")

    def __init__(self, seed: int):
        self.seed = seed & _MASK64
        self.position = 0  # number of uniforms consumed so far

    def uniforms(self, count: int) -> np.ndarray:
        """Next ``count`` uniforms on (0, 1) as a float64 array."""
        if count < 0:
            raise ValueError(f"count must be non-negative, got {count}")
        start = self.position + 1
        idx = np.arange(start, start + count, dtype=np.uint64)
        state = idx * np.uint64(_GOLDEN) + np.uint64(self.seed)
        self.position += count
        bits = _mix64_array(state) >> np.uint64(11)
        return (bits.astype(np.float64) + 0.5) * 2.0**-53

    def uniform(self) -> float:
        """Next single uniform on (0, 1)."""
        return float(self.uniforms(1)[0])


def quantile_light(u, lam: float):
    """Exponential(lam) quantile: -log(1 - u) / lam, for u in [0, 1)."""
    if not lam > 0.0:
        raise ValueError(f"lam must be positive, got {lam}")
    u_arr = np.asarray(u, dtype=np.float64)
    if np.any(u_arr < 0.0) or np.any(u_arr >= 1.0):
        raise ValueError("quantile_light requires u in [0, 1)")
    x = -np.log1p(-u_arr) / lam
    return float(x) if np.isscalar(u) or u_arr.ndim == 0 else x


def quantile_truncated_pareto(u, alpha: float, m: float):
    """Quantile of Pareto(alpha) on [1, inf) truncated at m: u in [0, 1] -> [1, m].

    Inverts F(x) = (1 - x**-alpha) / (1 - m**-alpha):
    x = (1 - u * (1 - m**-alpha)) ** (-1/alpha).
    """
    if not 0.0 < alpha < 2.0:
        raise ValueError(f"alpha must be in (0, 2), got {alpha}")
    if not m > 1.0:
        raise ValueError(f"truncation level m must exceed 1, got {m}")
    u_arr = np.asarray(u, dtype=np.float64)
    if np.any(u_arr < 0.0) or np.any(u_arr > 1.0):
        raise ValueError("quantile_truncated_pareto requires u in [0, 1]")
    mass = -math.expm1(-alpha * math.log(m))  # 1 - m**-alpha
    x = np.power(1.0 - u_arr * mass, -1.0 / alpha)
    # cancellation in 1 - u*mass can overshoot the endpoints by ~1e-11
    # relative for u near 1 and large m; the support is exactly [1, m]
    x = np.clip(x, 1.0, m)
    return float(x) if np.isscalar(u) or u_arr.ndim == 0 else x


def sample_mixture(rng, params: ModelParams, inst: InstanceParams) -> float:
    """One mixture draw, consuming exactly two uniforms regardless of branch.

    The first uniform decides the component (heavy iff u <= eps_n, inclusive
    by convention); the second is inverted through the selected quantile.
    Fixed two-uniform consumption keeps replicate streams aligned whichever
    branches are taken.
    """
    u = rng.uniforms(2)
    if u[0] <= inst.eps_n:
        return quantile_truncated_pareto(float(u[1]), params.alpha, inst.m_n)
    return quantile_light(float(u[1]), params.lam)


def _sum_core(rng, params: ModelParams, inst: InstanceParams) -> tuple[float, int]:
    """Sum of ``inst.n`` mixture draws plus the count of heavy-branch draws.

    Accumulation is pairwise within each block (np.sum) and exact across block
    partials (math.fsum); heavy-tail summands span many orders of magnitude
    and naive accumulation would lose the light-tail mass.
    """
    lam = params.lam
    alpha = params.alpha
    eps = inst.eps_n
    mass = -math.expm1(-alpha * math.log(inst.m_n))
    partials = []
    heavy = 0
    remaining = inst.n
    while remaining > 0:
        k = min(remaining, _CHUNK)
        u = rng.uniforms(2 * k)
        u_branch = u[0::2]
        u_value = u[1::2]
        x = -np.log1p(-u_value)
        if lam != 1.0:
            x /= lam
        if eps > 0.0:
            heavy_mask = u_branch <= eps
            n_heavy = int(np.count_nonzero(heavy_mask))
            if n_heavy:
                heavy += n_heavy
                x[heavy_mask] = np.clip(
                    np.power(1.0 - u_value[heavy_mask] * mass, -1.0 / alpha),
                    1.0, inst.m_n,
                )
        partials.append(float(np.sum(x)))
        remaining -= k
    return math.fsum(partials), heavy


def sample_sum(rng, params: ModelParams, inst: InstanceParams) -> float:
    """S_n: sum of ``inst.n`` independent mixture draws from ``rng``."""
    total, _ = _sum_core(rng, params, inst)
    return total


@dataclass
class SumSample:
    """Normalized sum statistics from a Monte Carlo campaign.

    values            one normalized statistic per replicate, ordered by
                      replicate index
    n                 row size used for every replicate
    plan              the normalization applied: (S_n - center) / scale
    heavy_count_mean  average number of heavy-branch draws per replicate
    """

    values: np.ndarray
    n: int
    plan: NormalizationPlan
    heavy_count_mean: float = field(default=0.0)


def monte_carlo(
    params: ModelParams,
    n: int,
    replicates: int,
    master_seed: int,
    plan: NormalizationPlan,
    thread_count: int = 1,
) -> SumSample:
    """Simulate ``replicates`` normalized sums (S_n - center) / scale.

    Replicate k uses the substream ``substream_seed(master_seed, k)``, so the
    output is a pure function of (params, n, replicates, master_seed, plan)
    and bit-identical for any ``thread_count``: parallelism distributes whole
    replicates, never splits one replicate's stream.
    """
    if replicates < 1:
        raise ValueError(f"replicates must be >= 1, got {replicates}")
    if thread_count < 1:
        raise ValueError(f"thread_count must be >= 1, got {thread_count}")
    inst = derive_instance(params, n)

    center = plan.center
    scale = plan.scale

    def run_one(k: int) -> tuple[float, int]:
        rng = RngStream(substream_seed(master_seed, k))
        total, heavy = _sum_core(rng, params, inst)
        return (total - center) / scale, heavy

    values = np.empty(replicates, dtype=np.float64)
    heavy_counts = np.empty(replicates, dtype=np.float64)
    if thread_count == 1 or replicates == 1:
        for k in range(replicates):
            values[k], heavy_counts[k] = run_one(k)
    else:
        with ThreadPoolExecutor(max_workers=thread_count) as pool:
            for k, (value, heavy) in enumerate(pool.map(run_one, range(replicates))):
                values[k] = value
                heavy_counts[k] = heavy
    if not np.all(np.isfinite(values)):
        raise ArithmeticError("non-finite normalized sum encountered")
    return SumSample(
        values=values,
        n=n,
        plan=plan,
        heavy_count_mean=float(np.mean(heavy_counts)),
    )
