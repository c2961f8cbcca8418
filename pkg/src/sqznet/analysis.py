"""Closed-form results and derived diagnostics for the cancellation scheme.

The reflectivity condition that removes the bright source from the chosen
output port, the squeezed-vacuum output variance it produces, a numeric
cancellation solver valid at any sideband frequency, suppression and
squeezing-band metrics, and loss-budget arithmetic.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, replace

import numpy as np
from scipy import optimize

from .core import Quadrature, variance
from .elements import BeamsplitterParams, OpaParams
from .network import (
    SRC,
    HomodyneParams,
    MachZehnderParams,
    SpectrumPoint,
    bare_opa_params,
    build_mach_zehnder,
    evaluate,
)


@dataclass(frozen=True)
class CancellationSolution:
    """Beamsplitter reflectivity and phase that null the source coefficient."""

    epsilon1: float
    phi: float
    residual: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.epsilon1 <= 1.0:
            raise ValueError(f"epsilon1 must be in [0, 1], got {self.epsilon1}")
        if self.residual < 0.0:
            raise ValueError(f"residual must be >= 0, got {self.residual}")


@dataclass(frozen=True)
class NoiseBudget:
    """Per-source decomposition of the detected variance at one frequency."""

    frequency_hz: float
    total: float
    entries: tuple[tuple[str, float, float], ...]  # (source, contribution, share %)


def epsilon1_plus(epsilon2: float, opa: OpaParams) -> float:
    """First-splitter reflectivity cancelling the source at zero frequency.

    eps1 = 1 - [1 + eps2/(1-eps2) * (4*k_ic*k_oc/kappa^2) / (1-g/kappa)^2]^-1
    """
    if not 0.0 < epsilon2 < 1.0:
        raise ValueError(f"epsilon2 must lie strictly inside (0, 1), got {epsilon2}")
    kappa = opa.kappa
    bracket = 1.0 + (epsilon2 / (1.0 - epsilon2)) * (
        4.0 * opa.kappa_ic * opa.kappa_oc / kappa**2
    ) / (1.0 - opa.g / kappa) ** 2
    return 1.0 - 1.0 / bracket


def squeezed_vacuum_variance(epsilon2: float, opa: OpaParams) -> float:
    """Output variance under exact cancellation: 1 + eps2*4*k_oc*g/(kappa-g)^2."""
    if not 0.0 <= epsilon2 <= 1.0:
        raise ValueError(f"epsilon2 must be in [0, 1], got {epsilon2}")
    return 1.0 + epsilon2 * 4.0 * opa.kappa_oc * opa.g / (opa.kappa - opa.g) ** 2


def _src_coefficient(p: MachZehnderParams, eps1: float, phi: float, omega: float) -> complex:
    bare = replace(
        p,
        epsilon1=BeamsplitterParams(eps1),
        phi=phi,
        propagation_eta=1.0,
        detection=HomodyneParams(),
    )
    fld = evaluate(build_mach_zehnder(bare), omega)
    return fld.coefficient(SRC, Quadrature.PLUS)


def solve_cancellation_numeric(
    p: MachZehnderParams, omega: float, tol: float = 1e-12
) -> CancellationSolution:
    """Null the source coefficient at frequency ``omega`` over (eps1, phi).

    Seeded with the zero-frequency closed form and phi = 0, then refined by
    damped least squares on the complex coefficient.  Raises if the best
    residual stays above ``tol``.
    """
    seed = epsilon1_plus(p.epsilon2.epsilon, p.opa)

    def fun(x: np.ndarray) -> np.ndarray:
        c = _src_coefficient(p, float(x[0]), float(x[1]), omega)
        return np.array([c.real, c.imag])

    res = optimize.least_squares(
        fun,
        x0=np.array([seed, 0.0]),
        bounds=([1e-12, -math.pi], [1.0 - 1e-12, math.pi]),
        xtol=3e-16,
        ftol=3e-16,
        gtol=None,
        max_nfev=200,
    )
    eps1, phi = float(res.x[0]), float(res.x[1])
    residual = abs(_src_coefficient(p, eps1, phi, omega))
    if residual > tol:
        raise ArithmeticError(
            f"cancellation solve did not converge: best residual {residual:.3e} "
            f"at eps1={eps1:.12g}, phi={phi:.12g}"
        )
    return CancellationSolution(epsilon1=eps1, phi=phi, residual=residual)


def suppression_db(p: MachZehnderParams, omega: float, mismatch: float) -> float:
    """Source-noise suppression of the cancellation scheme, in dB.

    Ratio of source-coefficient power with the reference arm blocked to the
    power with cancellation operated at eps1 = eps1_solved * (1 + mismatch),
    where (eps1_solved, phi_solved) null the source coefficient at
    ``omega``.  Exact cancellation (mismatch = 0) returns math.inf.
    """
    if mismatch < 0.0:
        raise ValueError(f"mismatch must be >= 0, got {mismatch}")
    sol = solve_cancellation_numeric(p, omega)
    if mismatch == 0.0:
        return math.inf
    eps1 = min(sol.epsilon1 * (1.0 + mismatch), 1.0)
    operated = replace(
        p,
        epsilon1=BeamsplitterParams(eps1),
        phi=sol.phi,
        propagation_eta=1.0,
        detection=HomodyneParams(),
    )
    c_cancel = evaluate(build_mach_zehnder(operated), omega).coefficient(SRC, Quadrature.PLUS)
    c_blocked = evaluate(build_mach_zehnder(operated, block_reference=True), omega).coefficient(
        SRC, Quadrature.PLUS
    )
    p_cancel = abs(c_cancel) ** 2
    p_blocked = abs(c_blocked) ** 2
    if p_cancel == 0.0:
        return math.inf
    return 10.0 * math.log10(p_blocked / p_cancel)


def loss_chain(etas: Sequence[float]) -> float:
    """Composite efficiency of a chain of power losses (plain product).

    Homodyne fringe visibility acts as an efficiency through its square, so
    pass visibility**2 for that link.
    """
    composite = 1.0
    for eta in etas:
        if not 0.0 < eta <= 1.0:
            raise ValueError(f"each efficiency must be in (0, 1], got {eta}")
        composite *= eta
    return composite


def dark_port_power(p1: float, p2: float, epsilon2: float, visibility: float) -> float:
    """Residual carrier power at the destructive output of the second splitter.

    eps2*p1 + (1-eps2)*p2 - 2*visibility*sqrt(eps2*(1-eps2)*p1*p2); imperfect
    visibility reduces only the interference cross-term.
    """
    if p1 < 0.0 or p2 < 0.0:
        raise ValueError("powers must be >= 0")
    if not 0.0 <= epsilon2 <= 1.0:
        raise ValueError(f"epsilon2 must be in [0, 1], got {epsilon2}")
    if not 0.0 <= visibility <= 1.0:
        raise ValueError(f"visibility must be in [0, 1], got {visibility}")
    return (
        epsilon2 * p1
        + (1.0 - epsilon2) * p2
        - 2.0 * visibility * math.sqrt(epsilon2 * (1.0 - epsilon2) * p1 * p2)
    )


def squeezing_bands(
    spectrum: Sequence[SpectrumPoint], shot_ref: float = 1.0
) -> list[tuple[float, float]]:
    """Maximal frequency intervals where the total variance is sub-shot.

    Band edges interior to the grid are linearly interpolated at the
    ``shot_ref`` crossing; edges at the grid boundary are clamped to it.
    """
    if any(b.frequency_hz <= a.frequency_hz for a, b in zip(spectrum, spectrum[1:])):
        raise ValueError("spectrum must be sorted by increasing frequency")
    bands: list[tuple[float, float]] = []
    start: float | None = None
    prev: SpectrumPoint | None = None

    def crossing(a: SpectrumPoint, b: SpectrumPoint) -> float:
        return a.frequency_hz + (shot_ref - a.v_plus) * (b.frequency_hz - a.frequency_hz) / (
            b.v_plus - a.v_plus
        )

    for point in spectrum:
        below = point.v_plus < shot_ref
        if below and start is None:
            start = point.frequency_hz if prev is None else crossing(prev, point)
        elif not below and start is not None:
            assert prev is not None
            bands.append((start, crossing(prev, point)))
            start = None
        prev = point
    if start is not None and prev is not None:
        bands.append((start, prev.frequency_hz))
    return bands


def noise_budget(point: SpectrumPoint) -> NoiseBudget:
    """Shares of the detected amplitude-quadrature variance by source."""
    total = point.v_plus
    entries = tuple(
        (sid, contribution, 100.0 * contribution / total)
        for sid, contribution in sorted(point.contributions.items())
    )
    return NoiseBudget(frequency_hz=point.frequency_hz, total=total, entries=entries)


def bare_source_variance(p: MachZehnderParams, omega: float) -> float:
    """Detected variance with both splitters bypassed (bare-OPA topology)."""
    bare = bare_opa_params(p)
    net = build_mach_zehnder(bare)
    fld = evaluate(net, omega)
    models = net.source_models({SRC: p.src_model})
    eta = p.detection.eta_eff
    return eta * variance(fld, Quadrature.PLUS, models) + (1.0 - eta) + p.detection.dark_rel
