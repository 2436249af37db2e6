"""Weak-field metric of a rotating axially symmetric mass.

The line element, in Boyer-Lindquist coordinates (t, r, theta, phi) with
x^0 = c t, is

    -(c dtau)^2 = g_tt (c dt)^2 + g_rr dr^2 + g_thth dtheta^2
                  + g_phph dphi^2 + 2 h_tphi (c dt) dphi

with a Schwarzschild diagonal to first order in 2GM/(c^2 r) and a
frame-dragging (Lense-Thirring) off-diagonal term

    h_tphi = -(4 G J / (c^3 r)) sin^2(theta)      [meters].

All operations are pure functions; overridable constants come in through
:class:`~gravclock.constants.PhysicalConstants`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import CODATA, PhysicalConstants
from .errors import DomainError, NotTimelike, WeakFieldViolation

DEFAULT_WEAK_FIELD_THRESHOLD = 0.5


@dataclass(frozen=True)
class RotatingMassModel:
    """Source mass M (kg) and signed angular momentum J (kg m^2/s).

    The sign of J encodes the rotation sense about the polar axis.
    """

    M: float
    J: float

    def __post_init__(self) -> None:
        if self.M < 0:
            raise DomainError("source mass must be non-negative")


@dataclass(frozen=True)
class SpacetimePoint:
    t: float
    r: float
    theta: float
    phi: float

    def __post_init__(self) -> None:
        if self.r <= 0:
            raise DomainError("radius must be positive")
        if not 0.0 <= self.theta <= math.pi:
            raise DomainError("polar angle must lie in [0, pi]")


@dataclass(frozen=True)
class CoordinateVelocity:
    """Coordinate-time derivatives (dr/dt, dtheta/dt, dphi/dt)."""

    dr_dt: float
    dtheta_dt: float
    dphi_dt: float


@dataclass(frozen=True)
class MetricComponents:
    """Metric entries at one point; h_tphi is the frame-dragging off-diagonal."""

    g_tt: float
    g_rr: float
    g_thth: float
    g_phph: float
    h_tphi: float


def compactness(model: RotatingMassModel, r: float, constants: PhysicalConstants = CODATA) -> float:
    """2GM/(c^2 r), the expansion parameter guarded by the weak-field check."""
    return 2.0 * constants.G * model.M / (constants.c**2 * r)


def metric_at(
    model: RotatingMassModel,
    pt: SpacetimePoint,
    constants: PhysicalConstants = CODATA,
    weak_field_threshold: float = DEFAULT_WEAK_FIELD_THRESHOLD,
) -> MetricComponents:
    """Evaluate the weak-field metric at a point.

    Raises :class:`WeakFieldViolation` when 2GM/(c^2 r) exceeds the threshold
    and :class:`DomainError` for a non-positive radius.
    """
    if pt.r <= 0:
        raise DomainError("radius must be positive")
    eps = compactness(model, pt.r, constants)
    if eps >= weak_field_threshold:
        raise WeakFieldViolation(
            f"2GM/(c^2 r) = {eps:.3e} >= threshold {weak_field_threshold:.3e}"
        )
    sin_th = math.sin(pt.theta)
    h_tphi = -4.0 * constants.G * model.J * sin_th**2 / (constants.c**3 * pt.r)
    return MetricComponents(
        g_tt=-1.0 + eps,
        g_rr=1.0 + eps,
        g_thth=pt.r**2,
        g_phph=pt.r**2 * sin_th**2,
        h_tphi=h_tphi,
    )


def squared_speed(metric: MetricComponents, vel: CoordinateVelocity) -> float:
    """v^2 = sum_i g_ii (dx^i/dt)^2 with the full spatial metric."""
    return (
        metric.g_rr * vel.dr_dt**2
        + metric.g_thth * vel.dtheta_dt**2
        + metric.g_phph * vel.dphi_dt**2
    )


def proper_time_rate(
    model: RotatingMassModel,
    pt: SpacetimePoint,
    vel: CoordinateVelocity,
    constants: PhysicalConstants = CODATA,
    include_perturbation: bool = True,
    weak_field_threshold: float = DEFAULT_WEAK_FIELD_THRESHOLD,
) -> float:
    """dtau/dt = sqrt(1 + 2 Phi/c^2 - v^2/c^2 - (2 h_tphi/c) dphi/dt).

    Phi = -GM/r is read off g_tt = -(1 + 2 Phi/c^2).  Raises
    :class:`NotTimelike` when the radicand is not positive.
    """
    g = metric_at(model, pt, constants, weak_field_threshold)
    c = constants.c
    radicand = -g.g_tt - squared_speed(g, vel) / c**2
    if include_perturbation:
        radicand -= 2.0 * g.h_tphi * vel.dphi_dt / c
    if radicand <= 0.0:
        raise NotTimelike(f"proper-time radicand {radicand:.3e} <= 0")
    return math.sqrt(radicand)


def energy_ratio(
    model: RotatingMassModel,
    pt: SpacetimePoint,
    speed: float,
    constants: PhysicalConstants = CODATA,
    weak_field_threshold: float = DEFAULT_WEAK_FIELD_THRESHOLD,
) -> float:
    """E/(m c^2) = 1 + v^2/(2 c^2) - GM/(c^2 r) for a particle moving at `speed`.

    Conserved along background geodesics at this order; independent of the
    rest mass.  Far from the mass this is the K factor 1 + v0^2/(2 c^2).
    """
    eps = compactness(model, pt.r, constants)
    if eps >= weak_field_threshold:
        raise WeakFieldViolation(
            f"2GM/(c^2 r) = {eps:.3e} >= threshold {weak_field_threshold:.3e}"
        )
    c = constants.c
    return 1.0 + 0.5 * speed**2 / c**2 - constants.G * model.M / (c**2 * pt.r)


def perturbation_validity(
    model: RotatingMassModel,
    pt: SpacetimePoint,
    vel: CoordinateVelocity,
    constants: PhysicalConstants = CODATA,
) -> float:
    """|h_munu dx^mu dx^nu| / |gbar_munu dx^mu dx^nu| along the given direction.

    Small values certify that the frame-dragging term is a perturbation of the
    Schwarzschild background for this trajectory direction.
    """
    g = metric_at(model, pt, constants)
    c = constants.c
    numerator = 2.0 * g.h_tphi * c * vel.dphi_dt
    denominator = g.g_tt * c**2 + squared_speed(g, vel)
    if denominator == 0.0:
        raise DomainError("direction is null in the background metric")
    return abs(numerator / denominator)
