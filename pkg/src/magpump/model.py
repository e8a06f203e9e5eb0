"""Static force balance of a magnetically latched elastic membrane.

A membrane of elastic stiffness k_e is suspended between two permanent-magnet
pairs: an outer pair that pulls the membrane toward an open stop and an inner
pair that pulls it toward a closed stop.  With the membrane position z
(distance of the membrane from the channel centre, m) the pneumatic pressure
needed to hold it in equilibrium is

    p(z) = k_e (z0 - z) + k_mo / (z1 - z)^3 - k_mi / (8 z^3)

where z0 is the stress-free position, z1 the outer magnet plane, and the
inner magnet pair acts across the full channel gap 2z (hence the factor 8).
Scaling pressures by k_e*z0 and lengths by z0 gives the one-parameter-family
dimensionless form

    p*(z*) = 1 - z* + a_mo / (z1* - z*)^3 - a_mi / (8 z*^3)

with magnet coefficients a = k_m / (k_e z0^4).  Everything in this module is
a function of that curve: its slope, its stationary points, the coefficient
at which they appear, and the equilibrium roots at a given applied pressure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericError

__all__ = [
    "DimensionalParams",
    "MagnetoElasticParams",
    "StationaryPoint",
    "EquilibriumRoot",
    "pressure_dimensional",
    "nondimensionalize",
    "pressure_star",
    "pressure_star_slope",
    "stationary_points",
    "critical_coefficient",
    "equilibria_at_pressure",
]

# Sign-scan resolution used by the root finders.  2048 intervals resolves
# every sign structure this force balance can produce (at most 3 interior
# roots) with a wide margin.
DEFAULT_GRID = 2048
DEFAULT_XTOL = 1e-10


@dataclass(frozen=True)
class DimensionalParams:
    """Physical membrane parameters (SI units).

    k_e   elastic stiffness per unit area, Pa/m
    z0    stress-free membrane position, m
    z1    outer magnet plane, m (z1 > z0)
    k_mi  inner magnet force coefficient, Pa m^3
    k_mo  outer magnet force coefficient, Pa m^3
    z_in  inner contact stop, m
    z_out outer contact stop, m
    """

    k_e: float
    z0: float
    z1: float
    k_mi: float
    k_mo: float
    z_in: float
    z_out: float

    def __post_init__(self):
        if self.k_e <= 0.0:
            raise ValueError(f"k_e must be positive, got {self.k_e}")
        if self.k_mi < 0.0 or self.k_mo < 0.0:
            raise ValueError("magnet coefficients k_mi, k_mo must be >= 0")
        if self.z0 <= 0.0:
            raise ValueError(f"z0 must be positive, got {self.z0}")
        if not (0.0 < self.z_in < self.z_out < self.z1):
            raise ValueError(
                "contact stops must satisfy 0 < z_in < z_out < z1, got "
                f"z_in={self.z_in}, z_out={self.z_out}, z1={self.z1}"
            )

    @property
    def pressure_scale(self) -> float:
        """Pressure unit of the dimensionless form, Pa."""
        return self.k_e * self.z0


@dataclass(frozen=True)
class MagnetoElasticParams:
    """Dimensionless membrane parameters.

    a_mo, a_mi are the outer/inner magnet coefficients k_m/(k_e z0^4); the
    elastic term has coefficient 1 by construction.  Walls z_in_star and
    z_out_star bound the physically reachable band, z1_star is the outer
    magnet singularity.
    """

    a_mo: float
    a_mi: float
    z1_star: float = 1.5
    z_in_star: float = 0.25
    z_out_star: float = 1.25

    def __post_init__(self):
        if self.a_mo < 0.0 or self.a_mi < 0.0:
            raise ValueError("magnet coefficients a_mo, a_mi must be >= 0")
        if not (0.0 < self.z_in_star < self.z_out_star < self.z1_star):
            raise ValueError(
                "walls must satisfy 0 < z_in_star < z_out_star < z1_star, got "
                f"z_in_star={self.z_in_star}, z_out_star={self.z_out_star}, "
                f"z1_star={self.z1_star}"
            )

    @classmethod
    def symmetric(cls, a: float, z1_star: float = 1.5,
                  z_in_star: float = 0.25, z_out_star: float = 1.25
                  ) -> "MagnetoElasticParams":
        """Equal inner and outer magnet coefficients a_mo = a_mi = a."""
        return cls(a_mo=a, a_mi=a, z1_star=z1_star,
                   z_in_star=z_in_star, z_out_star=z_out_star)


@dataclass(frozen=True)
class StationaryPoint:
    """Local extremum of the equilibrium curve p*(z*)."""

    z_star: float
    p_star: float
    kind: str  # "max" or "min"


@dataclass(frozen=True)
class EquilibriumRoot:
    """Root of p*(z*) = p at fixed applied pressure."""

    z_star: float
    stable: bool  # stable iff dp*/dz* < 0 at the root


def _check_domain(z, hi, what):
    if isinstance(z, np.ndarray):
        if np.any(z <= 0.0) or np.any(z >= hi):
            raise ValueError(f"{what} must lie strictly inside (0, {hi})")
        return z
    z = float(z)
    if not (0.0 < z < hi):
        raise ValueError(f"{what} must lie strictly inside (0, {hi}), got {z}")
    return z


def pressure_dimensional(z, params: DimensionalParams):
    """Equilibrium holding pressure at membrane position z, Pa.

    Accepts a float or an ndarray of positions; z must lie strictly inside
    (0, z1), the two magnet singularities.
    """
    z = _check_domain(z, params.z1, "z")
    return (params.k_e * (params.z0 - z)
            + params.k_mo / (params.z1 - z) ** 3
            - params.k_mi / (8.0 * z ** 3))


def nondimensionalize(params: DimensionalParams) -> MagnetoElasticParams:
    """Scale lengths by z0 and pressures by k_e*z0.

    Satisfies pressure_dimensional(z) == k_e*z0 * pressure_star(z/z0) for all
    z in the common domain.
    """
    scale = params.k_e * params.z0 ** 4
    return MagnetoElasticParams(
        a_mo=params.k_mo / scale,
        a_mi=params.k_mi / scale,
        z1_star=params.z1 / params.z0,
        z_in_star=params.z_in / params.z0,
        z_out_star=params.z_out / params.z0,
    )


def pressure_star(z_star, params: MagnetoElasticParams):
    """Dimensionless equilibrium pressure p*(z*).

    Accepts a float or an ndarray; domain is the open interval (0, z1_star).
    """
    z = _check_domain(z_star, params.z1_star, "z_star")
    return (1.0 - z
            + params.a_mo / (params.z1_star - z) ** 3
            - params.a_mi / (8.0 * z ** 3))


def pressure_star_slope(z_star, params: MagnetoElasticParams):
    """Analytic derivative dp*/dz*.

    Negative slope means the equilibrium is stable under pressure control: a
    perturbation toward the walls raises the restoring pressure imbalance.
    """
    z = _check_domain(z_star, params.z1_star, "z_star")
    return (-1.0
            + 3.0 * params.a_mo / (params.z1_star - z) ** 4
            + 3.0 * params.a_mi / (8.0 * z ** 4))


def _bisect(f, lo: float, hi: float, xtol: float = DEFAULT_XTOL) -> float:
    """Bisection on a bracketing interval [lo, hi] with f(lo)*f(hi) <= 0.

    Runs to xtol or to the machine limit of the interval, whichever comes
    first.  xtol=0 therefore means full precision.
    """
    flo = f(lo)
    if flo == 0.0:
        return lo
    if f(hi) == 0.0:
        return hi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi or (hi - lo) <= xtol:
            break
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0.0) == (flo > 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _scan_roots(f, lo, hi, n_grid, xtol):
    """All sign-change roots of f on [lo, hi] found by grid scan + bisection."""
    zs = np.linspace(lo, hi, n_grid + 1)
    fs = np.array([f(z) for z in zs])
    roots = []
    for i in range(n_grid):
        f0, f1 = fs[i], fs[i + 1]
        if f0 == 0.0:
            roots.append(float(zs[i]))
        elif f0 * f1 < 0.0:
            roots.append(float(_bisect(f, zs[i], zs[i + 1], xtol)))
    if fs[-1] == 0.0:
        roots.append(float(zs[-1]))
    # collapse duplicates from roots landing exactly on grid nodes
    out = []
    for r in roots:
        if not out or abs(r - out[-1]) > 1e-9:
            out.append(r)
    return out


def stationary_points(params: MagnetoElasticParams,
                      n_grid: int = DEFAULT_GRID,
                      xtol: float = DEFAULT_XTOL) -> list[StationaryPoint]:
    """Local extrema of p*(z*) inside the analysis window (z_in_star, z1_star).

    Returns the points sorted by z_star, classified by the slope sign change
    (+ to - is a local max, - to + a local min).  A tangency without a strict
    sign change is not counted.  Empty list in the monotonic regime.
    """
    if params.a_mo == 0.0 and params.a_mi == 0.0:
        return []  # slope is -1 everywhere

    def f(z):
        return pressure_star_slope(z, params)

    # keep away from the z1 singularity; any stationary point sits at least
    # (3a)^(1/4) away from it
    lo = params.z_in_star
    hi = params.z1_star - 1e-9 * (params.z1_star - params.z_in_star)
    pts = []
    zs = np.linspace(lo, hi, n_grid + 1)
    fs = np.array([f(z) for z in zs])
    for i in range(n_grid):
        f0, f1 = fs[i], fs[i + 1]
        if f0 * f1 < 0.0:  # strict sign change only
            root = float(_bisect(f, zs[i], zs[i + 1], xtol))
            if root <= lo or root >= params.z1_star:
                continue
            kind = "max" if f0 > 0.0 else "min"
            pts.append(StationaryPoint(z_star=root,
                                       p_star=float(pressure_star(root, params)),
                                       kind=kind))
    return pts


def _golden_min(f, lo: float, hi: float, xtol: float = 1e-12) -> float:
    """Golden-section minimum of a unimodal f on [lo, hi]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > xtol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def critical_coefficient(z1_star: float) -> float:
    """Largest magnet coefficient for which p*(z*) still has extrema.

    For equal coefficients a_mo = a_mi = a the slope is -1 + 3a f(z) with
    f(z) = 1/(z1*-z)^4 + 1/(8 z^4), so extrema exist exactly while
    a < 1/(3 min f).  The minimiser of f satisfies z1* - z = 8^(1/5) z.
    Above the returned value the curve is monotonic and hysteresis vanishes.
    """
    if z1_star <= 0.0:
        raise ValueError(f"z1_star must be positive, got {z1_star}")

    def f(z):
        return 1.0 / (z1_star - z) ** 4 + 1.0 / (8.0 * z ** 4)

    z_closed = z1_star / (1.0 + 8.0 ** 0.2)
    # independent 1D refinement as a guard against a transcription slip in
    # the closed form
    z_golden = _golden_min(f, 0.5 * z_closed, min(1.5 * z_closed, z1_star * (1 - 1e-9)),
                           xtol=1e-12 * z1_star)
    if abs(z_golden - z_closed) > 1e-8 * z1_star:
        raise NumericError(
            f"critical-coefficient minimiser mismatch: closed form {z_closed} "
            f"vs golden section {z_golden}"
        )
    return 1.0 / (3.0 * f(z_closed))


def equilibria_at_pressure(p_star: float, params: MagnetoElasticParams,
                           n_grid: int = DEFAULT_GRID,
                           xtol: float = DEFAULT_XTOL) -> list[EquilibriumRoot]:
    """All equilibrium positions with p*(z*) = p_star between the walls.

    Scans [z_in_star, z_out_star] for sign changes and refines each bracket
    by bisection.  Stability is the sign of the analytic slope at the root
    (negative = stable).  Roots are returned sorted by z_star.
    """

    def f(z):
        return pressure_star(z, params) - p_star

    roots = _scan_roots(f, params.z_in_star, params.z_out_star, n_grid, xtol)
    return [EquilibriumRoot(z_star=r,
                            stable=pressure_star_slope(r, params) < 0.0)
            for r in roots]
