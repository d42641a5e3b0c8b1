"""Sublevel sets of x^4 + y^2 in the plane: areas, heat integrals, exponent fits.

This is the only floating-point module.  Areas and heat integrals use
adaptive quadrature with relative tolerance well under 1e-8; the heat
integral is also computed as a product of two one-dimensional integrals
as a cross-check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np
from scipy import integrate

_RTOL = 1e-11


@dataclass(frozen=True)
class ToyConfig:
    lambda_min: float = 1e-4
    lambda_max: float = 1.0
    points: int = 25
    epsilon: float = 0.1
    t_min: float = 1.0
    t_max: float = 1e4
    quad_points: int = 400

    def __post_init__(self):
        if not (0 < self.lambda_min < self.lambda_max):
            raise ValueError("need 0 < lambda_min < lambda_max")
        if not (0 < self.t_min < self.t_max):
            raise ValueError("need 0 < t_min < t_max")
        if self.points < 4:
            raise ValueError("need at least 4 grid points")
        if self.quad_points < 64:
            raise ValueError("quad_points must be >= 64")
        if self.epsilon < 0:
            raise ValueError("epsilon must be >= 0")

    def lambdas(self) -> np.ndarray:
        return np.geomspace(self.lambda_min, self.lambda_max, self.points)

    def times(self) -> np.ndarray:
        return np.geomspace(self.t_min, self.t_max, self.points)


def _quad(f, a, b, points=None) -> float:
    val, _ = integrate.quad(f, a, b, epsabs=0.0, epsrel=_RTOL, limit=400, points=points)
    return val


def fs_area(lam: float) -> float:
    """Area of {x^4 + y^2 <= lam^2}."""
    if lam < 0:
        raise ValueError("lambda must be positive")
    if lam == 0:
        return 0.0
    r = math.sqrt(lam)
    # x = r u turns the integrand into lam * sqrt(1 - u^4)
    return 4.0 * r * _quad(lambda u: lam * math.sqrt(max(1.0 - u ** 4, 0.0)), 0.0, 1.0)


def fs_area_direct(lam: float) -> float:
    """Same area integrated in the original variable; used as an independent check."""
    if lam <= 0:
        return 0.0
    r = math.sqrt(lam)
    return 2.0 * _quad(lambda x: math.sqrt(max(lam * lam - x ** 4, 0.0)), -r, r, points=[0.0])


@dataclass(frozen=True)
class Fit:
    slope: float
    intercept: float
    residual: float


def fit_exponent(samples: Sequence[Tuple[float, float]]) -> Fit:
    """Least-squares slope of ln(value) against ln(lambda)."""
    if len(samples) < 4:
        raise ValueError("need at least 4 samples")
    xs = np.array([s[0] for s in samples], dtype=float)
    ys = np.array([s[1] for s in samples], dtype=float)
    if np.any(xs <= 0) or np.any(ys <= 0):
        raise ValueError("samples must be positive")
    lx, ly = np.log(xs), np.log(ys)
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    return Fit(float(slope), float(intercept), float(np.sqrt(np.mean(resid ** 2))))


def _heat_x(t: float) -> float:
    return 2.0 * _quad(lambda x: math.exp(-t * x ** 4), 0.0, (60.0 / t) ** 0.25)


def _heat_y(t: float) -> float:
    return 2.0 * _quad(lambda y: math.exp(-t * y * y), 0.0, math.sqrt(60.0 / t))


def heat_integral(t: float) -> float:
    """∬ exp(-t (x^4 + y^2)) dx dy by two-dimensional adaptive quadrature."""
    if t <= 0:
        raise ValueError("t must be positive")
    bx, by = (60.0 / t) ** 0.25, math.sqrt(60.0 / t)
    val, _ = integrate.dblquad(lambda y, x: math.exp(-t * (x ** 4 + y * y)), 0.0, bx, 0.0, by,
                               epsabs=0.0, epsrel=1e-10)
    return 4.0 * val


def heat_product(t: float) -> float:
    """The same integral as a product of one-dimensional integrals."""
    return _heat_x(t) * _heat_y(t)


def heat_from_areas(t: float, quad_points: int = 400) -> float:
    """∫ exp(-t mu) dA(sqrt(mu)), integrated by parts against sampled areas on a log grid."""
    mus = np.geomspace(1e-10 / t, 60.0 / t, quad_points)
    areas = np.array([fs_area(math.sqrt(m)) for m in mus])
    integrand = t * np.exp(-t * mus) * areas * mus
    return float(integrate.simpson(integrand, x=np.log(mus)))


def anisotropy_ratio(lam: float, eps: float) -> Tuple[float, float]:
    """Fractions of FS(lam) inside and outside the cone |y| <= eps |x|."""
    total = fs_area(lam)
    if eps <= 0:
        return 0.0, 1.0
    r = math.sqrt(lam)
    cross = math.sqrt((-eps ** 2 + math.sqrt(eps ** 4 + 4.0 * lam * lam)) / 2.0)
    cross = min(cross, r)
    inside = 4.0 * (eps * cross * cross / 2.0
                    + _quad(lambda x: math.sqrt(max(lam * lam - x ** 4, 0.0)), cross, r))
    frac = min(inside / total, 1.0)
    return frac, 1.0 - frac


@dataclass
class ToyReport:
    config: ToyConfig
    area_rows: List[Tuple[float, float, float, float]]
    heat_rows: List[Tuple[float, float]]
    area_fit: Fit
    heat_fit: Fit
    log_form_drift: Dict[str, float] = field(default_factory=dict)

    def area_csv(self) -> str:
        lines = ["lambda,area,inside_fraction,complement_fraction"]
        lines += [f"{l:.10e},{a:.12e},{i:.12e},{c:.12e}" for l, a, i, c in self.area_rows]
        return "\n".join(lines) + "\n"

    def heat_csv(self) -> str:
        lines = ["t,heat"]
        lines += [f"{t:.10e},{h:.12e}" for t, h in self.heat_rows]
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        c = self.config
        return {
            "config": {"lambda_min": c.lambda_min, "lambda_max": c.lambda_max, "points": c.points,
                       "epsilon": c.epsilon, "t_min": c.t_min, "t_max": c.t_max},
            "area_slope": round(self.area_fit.slope, 8),
            "area_residual": float(f"{self.area_fit.residual:.3e}"),
            "heat_slope": round(self.heat_fit.slope, 8),
            "heat_residual": float(f"{self.heat_fit.residual:.3e}"),
            "scaling_prediction": {"area": 1.5, "heat": -0.75},
            "log_forms": {"area": "-lambda^2 ln(lambda)", "heat": "ln(t) / t^(1/2)",
                          "ratio_spread": {k: round(v, 6) for k, v in self.log_form_drift.items()}},
        }


def run_toy(config: ToyConfig = ToyConfig()) -> ToyReport:
    lams = config.lambdas()
    rows = []
    for lam in lams:
        a = fs_area(float(lam))
        inside, outside = anisotropy_ratio(float(lam), config.epsilon)
        rows.append((float(lam), a, inside, outside))
    heat = [(float(t), heat_product(float(t))) for t in config.times()]
    # how far measured values are from the logarithmic forms (ratio max/min over the grid)
    small = [(l, a) for l, a, _, _ in rows if l < 1.0]
    drift = {}
    if small:
        r = [a / (-l * l * math.log(l)) for l, a in small]
        drift["area"] = max(r) / min(r)
    big = [(t, h) for t, h in heat if t > 1.0]
    if big:
        r = [h / (math.log(t) / math.sqrt(t)) for t, h in big]
        drift["heat"] = max(r) / min(r)
    return ToyReport(config, rows, heat,
                     fit_exponent([(l, a) for l, a, _, _ in rows]), fit_exponent(heat), drift)
