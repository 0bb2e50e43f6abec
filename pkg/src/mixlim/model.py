"""Mixture model parameters and exact/asymptotic moment formulas.

The model is a two-component mixture: with probability ``1 - eps_n`` a draw
comes from Exponential(lambda), with probability ``eps_n`` from a Pareto(alpha)
law on [1, inf) truncated at level ``m_n``.  Both the mixing probability and
the truncation level are tied to the row size ``n`` of a triangular array via

    eps_n = n ** -gamma2,        m_n = n ** gamma1.

All moment formulas here are exact closed forms; the ``*_asymptotic`` variants
are the leading-order forms used as diagnostics at large ``n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import gamma as _gamma_fn

__all__ = [
    "ModelParams",
    "InstanceParams",
    "derive_instance",
    "mu1",
    "mu2",
    "mean_z",
    "var_z",
    "mean_z_asymptotic",
    "var_z_asymptotic",
]


@dataclass(frozen=True)
class ModelParams:
    """The quadruple (alpha, lam, gamma1, gamma2) defining the asymptotic family.

    alpha   heavy-tail index, in (0, 2)
    lam     rate of the exponential (light) component, > 0
    gamma1  truncation exponent, > 0
    gamma2  mixing exponent, > 0
    """

    alpha: float
    lam: float
    gamma1: float
    gamma2: float

    def __post_init__(self):
        if not 0.0 < self.alpha < 2.0:
            raise ValueError(f"alpha must be in (0, 2), got {self.alpha}")
        if not self.lam > 0.0:
            raise ValueError(f"lam must be positive, got {self.lam}")
        if not self.gamma1 > 0.0:
            raise ValueError(f"gamma1 must be positive, got {self.gamma1}")
        if not self.gamma2 > 0.0:
            raise ValueError(f"gamma2 must be positive, got {self.gamma2}")


@dataclass(frozen=True)
class InstanceParams:
    """Concrete row parameters (n, eps_n, m_n) for one row of the array.

    ``eps_n = 0`` is accepted so tests can force a pure light-tail row; the
    derivation from ModelParams always yields eps_n in (0, 1).
    """

    n: int
    eps_n: float
    m_n: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n}")
        if not 0.0 <= self.eps_n < 1.0:
            raise ValueError(f"eps_n must lie in [0, 1), got {self.eps_n}")
        if not self.m_n > 1.0:
            raise ValueError(f"m_n must exceed 1, got {self.m_n}")


def derive_instance(params: ModelParams, n: int) -> InstanceParams:
    """Row parameters (n, n**-gamma2, n**gamma1) for row size ``n`` >= 2.

    n = 1 is rejected: it would give eps = 1 (no light component) and
    m = 1 (degenerate heavy support).
    """
    if n < 2:
        raise ValueError(f"row size n must be >= 2, got {n}")
    return InstanceParams(n=n, eps_n=float(n) ** -params.gamma2, m_n=float(n) ** params.gamma1)


def mu1(s: float, lam: float) -> float:
    """s-th raw moment of Exponential(lam): Gamma(s + 1) / lam**s, for s > 0."""
    if not s > 0.0:
        raise ValueError(f"moment order s must be positive, got {s}")
    if not lam > 0.0:
        raise ValueError(f"lam must be positive, got {lam}")
    return float(_gamma_fn(s + 1.0)) / lam**s


def mu2(s: float, alpha: float, m: float) -> float:
    """s-th raw moment of Pareto(alpha) on [1, inf) truncated at m > 1.

    Exact value, including the (1 - m**-alpha)**-1 truncation normalisation:

        s != alpha:  (alpha / (s - alpha)) * (m**(s-alpha) - 1) / (1 - m**-alpha)
        s == alpha:  alpha * ln(m) / (1 - m**-alpha)

    Uses expm1 throughout so the two branches join continuously as s -> alpha
    and the m -> 1+ limit stays accurate.
    """
    if not s > 0.0:
        raise ValueError(f"moment order s must be positive, got {s}")
    if not 0.0 < alpha < 2.0:
        raise ValueError(f"alpha must be in (0, 2), got {alpha}")
    if not m > 1.0:
        raise ValueError(f"truncation level m must exceed 1, got {m}")
    log_m = math.log(m)
    denom = -math.expm1(-alpha * log_m)  # 1 - m**-alpha
    if s == alpha:
        num = alpha * log_m
    else:
        num = alpha * math.expm1((s - alpha) * log_m) / (s - alpha)
    return num / denom


def mean_z(params: ModelParams, inst: InstanceParams) -> float:
    """Exact mixture mean (1 - eps) * mu1(1) + eps * mu2(1)."""
    light = mu1(1.0, params.lam)
    if inst.eps_n == 0.0:
        return light
    return (1.0 - inst.eps_n) * light + inst.eps_n * mu2(1.0, params.alpha, inst.m_n)


def var_z(params: ModelParams, inst: InstanceParams) -> float:
    """Exact mixture variance (1 - eps) mu1(2) + eps mu2(2) - mean**2; always > 0."""
    m2_light = mu1(2.0, params.lam)
    if inst.eps_n == 0.0:
        second = m2_light
    else:
        second = (1.0 - inst.eps_n) * m2_light + inst.eps_n * mu2(2.0, params.alpha, inst.m_n)
    value = second - mean_z(params, inst) ** 2
    if not value > 0.0:
        raise ArithmeticError(f"mixture variance came out non-positive: {value}")
    return value


def _power_of_n(n: int, exponent: float) -> float:
    """n**exponent via logs; overflows are reported as +inf rather than raising."""
    log_value = exponent * math.log(n)
    if log_value > 709.0:  # exp overflow threshold for float64
        return math.inf
    return math.exp(log_value)


def mean_z_asymptotic(params: ModelParams, n: int) -> float:
    """Leading-order per-summand mean.

    alpha != 1:  mu1(1) + (alpha / (1 - alpha)) * n**((1-alpha)*gamma1 - gamma2)
    alpha == 1:  mu1(1) + gamma1 * ln(n) * n**-gamma2
    """
    if n < 2:
        raise ValueError(f"row size n must be >= 2, got {n}")
    light = mu1(1.0, params.lam)
    a = params.alpha
    if a == 1.0:
        return light + params.gamma1 * math.log(n) * _power_of_n(n, -params.gamma2)
    exponent = (1.0 - a) * params.gamma1 - params.gamma2
    return light + (a / (1.0 - a)) * _power_of_n(n, exponent)


def var_z_asymptotic(params: ModelParams, n: int) -> float:
    """Leading-order per-summand variance.

    Var(X) + (alpha / (2 - alpha)) * n**((2-alpha)*gamma1 - gamma2).

    The heavy-term coefficient is alpha/(2-alpha): it is the large-m limit of
    eps * mu2(2), which is what the exact variance converges to, so the ratio
    var_z / var_z_asymptotic tends to 1.
    """
    if n < 2:
        raise ValueError(f"row size n must be >= 2, got {n}")
    a = params.alpha
    var_light = 1.0 / params.lam**2
    exponent = (2.0 - a) * params.gamma1 - params.gamma2
    return var_light + (a / (2.0 - a)) * _power_of_n(n, exponent)
