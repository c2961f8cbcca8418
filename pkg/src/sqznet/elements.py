"""Optical elements as linear maps on sideband fields.

Source, beamsplitter, phase shifter, OPA cavity, loss, phase modulator and
homodyne readout.  Sign conventions for the beamsplitter and the phase
shifter follow the interferometer combination

    out = sqrt(eps) * a + exp(-i*phi) * sqrt(1 - eps) * b

with the reflected port picking up the minus sign on the second input.
The OPA below threshold acts on the amplitude quadrature with gain g and
on the phase quadrature with gain -g.
"""

from __future__ import annotations

import cmath
import math
from collections.abc import Mapping
from dataclasses import dataclass

from .core import LinearField, NoiseVarianceModel, Quadrature, combine, variance


@dataclass(frozen=True)
class OpaParams:
    """Cavity coupling rates (s^-1) and nonlinear gain of the OPA.

    g is real; negative g deamplifies the amplitude quadrature.  The cavity
    must be below threshold: |g| < kappa_ic + kappa_oc + kappa_loss.
    """

    kappa_ic: float
    kappa_oc: float
    kappa_loss: float
    g: float

    def __post_init__(self) -> None:
        for name in ("kappa_ic", "kappa_oc", "kappa_loss"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")
        if self.kappa <= 0.0:
            raise ValueError("total decay rate kappa must be > 0")
        if abs(self.g) >= self.kappa:
            raise ValueError(
                f"|g| = {abs(self.g):.4g} must be below threshold kappa = {self.kappa:.4g}"
            )

    @property
    def kappa(self) -> float:
        return self.kappa_ic + self.kappa_oc + self.kappa_loss

    @property
    def escape_efficiency(self) -> float:
        return self.kappa_oc / self.kappa


def opa_from_mirrors(
    linewidth_hz: float,
    t_ic: float,
    t_oc: float,
    t_loss: float,
    g_over_kappa: float,
    linewidth_convention: str = "fwhm",
) -> OpaParams:
    """Coupling rates from mirror power transmissions and a cavity linewidth.

    Each rate is proportional to its transmission, with the common scale set
    so the total decay rate matches the linewidth.  With the field decay
    convention used here the half width at half maximum in angular frequency
    equals kappa, so an FWHM linewidth in Hz gives kappa = pi * linewidth.
    """
    if linewidth_hz <= 0.0:
        raise ValueError(f"linewidth must be > 0, got {linewidth_hz}")
    if min(t_ic, t_oc, t_loss) < 0.0 or t_ic + t_oc + t_loss <= 0.0:
        raise ValueError("mirror transmissions must be >= 0 with a positive sum")
    if linewidth_convention == "fwhm":
        kappa = math.pi * linewidth_hz
    elif linewidth_convention == "hwhm":
        kappa = 2.0 * math.pi * linewidth_hz
    else:
        raise ValueError(f"unknown linewidth convention '{linewidth_convention}'")
    t_total = t_ic + t_oc + t_loss
    return OpaParams(
        kappa_ic=kappa * t_ic / t_total,
        kappa_oc=kappa * t_oc / t_total,
        kappa_loss=kappa * t_loss / t_total,
        g=g_over_kappa * kappa,
    )


@dataclass(frozen=True)
class BeamsplitterParams:
    """Power reflectivity in [0, 1]."""

    epsilon: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"beamsplitter reflectivity must be in [0, 1], got {self.epsilon}")


@dataclass(frozen=True)
class LossParams:
    """Power transmission eta in (0, 1] plus the label of the admixed vacuum."""

    eta: float
    fresh_vacuum_id: str

    def __post_init__(self) -> None:
        if not 0.0 < self.eta <= 1.0:
            raise ValueError(f"loss transmission must be in (0, 1], got {self.eta}")


@dataclass(frozen=True)
class HomodyneParams:
    """Detection chain: photodiode efficiency, fringe visibility, dark noise.

    ``dark_rel`` is the electronic dark noise as a linear variance relative
    to shot noise.
    """

    pd_efficiency: float = 1.0
    visibility: float = 1.0
    dark_rel: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 < self.pd_efficiency <= 1.0:
            raise ValueError(f"pd_efficiency must be in (0, 1], got {self.pd_efficiency}")
        if not 0.0 < self.visibility <= 1.0:
            raise ValueError(f"visibility must be in (0, 1], got {self.visibility}")
        if self.dark_rel < 0.0:
            raise ValueError(f"dark_rel must be >= 0, got {self.dark_rel}")

    @property
    def eta_eff(self) -> float:
        """Effective detection efficiency: pd efficiency times visibility squared."""
        return self.pd_efficiency * self.visibility**2


def source(source_id: str, carrier_power: float, omega: float = 0.0) -> LinearField:
    """Coherent (or vacuum, for zero power) input field.

    Unit transfer coefficient in both quadratures and carrier amplitude
    sqrt(carrier_power) in sqrt(W).
    """
    if carrier_power < 0.0:
        raise ValueError(f"carrier power must be >= 0, got {carrier_power}")
    mean: tuple[tuple[float, complex], ...] = ()
    if carrier_power > 0.0:
        mean = ((0.0, complex(math.sqrt(carrier_power))),)
    return LinearField(omega=omega, coeffs={source_id: (1 + 0j, 1 + 0j)}, mean=mean)


def beamsplitter(
    a: LinearField, b: LinearField, p: BeamsplitterParams
) -> tuple[LinearField, LinearField]:
    """Combine two fields on a beamsplitter of power reflectivity epsilon.

    out1 = sqrt(eps)*a + sqrt(1-eps)*b and out2 = sqrt(1-eps)*a - sqrt(eps)*b,
    so with ``a`` the vacuum-side input and ``b`` the source-side input this
    reproduces the ic/ref pair of the interferometer's first splitter.
    """
    r = math.sqrt(p.epsilon)
    t = math.sqrt(1.0 - p.epsilon)
    out1 = combine(r, a, t, b)
    out2 = combine(t, a, -r, b)
    return out1, out2


def phase_shift(f: LinearField, phi: float) -> LinearField:
    """Multiply every coefficient and mean amplitude by exp(-i*phi)."""
    return f.scaled(cmath.exp(-1j * phi))


def opa_transfer(
    seed: LinearField,
    p: OpaParams,
    oc_vacuum_id: str,
    loss_vacuum_id: str,
) -> LinearField:
    """Below-threshold OPA cavity transfer at the seed's sideband frequency.

    Per quadrature (amplitude with +g, phase with -g) the denominator is
    D = i*Omega + kappa - g; the seed passes with sqrt(4*k_ic*k_oc)/D while
    fresh vacuum enters through the intracavity loss with
    sqrt(4*k_loss*k_oc)/D and through the output coupler with
    (2*k_oc - i*Omega - kappa + g)/D.  The classical mean field is scaled by
    the zero-frequency amplitude-quadrature transfer.
    """
    if oc_vacuum_id == loss_vacuum_id:
        raise ValueError("oc and loss vacuum ids must differ")
    for fresh in (oc_vacuum_id, loss_vacuum_id):
        if fresh in seed.coeffs:
            raise ValueError(f"noise source '{fresh}' is already present in the seed field")
    kappa = p.kappa
    omega = seed.omega
    s_seed = math.sqrt(4.0 * p.kappa_ic * p.kappa_oc)
    s_loss = math.sqrt(4.0 * p.kappa_loss * p.kappa_oc)
    den = [1j * omega + kappa - p.g, 1j * omega + kappa + p.g]  # X+, X- (g -> -g)
    t_seed = [s_seed / d for d in den]
    coeffs: dict[str, tuple[complex, complex]] = {
        k: (t_seed[0] * cp, t_seed[1] * cm) for k, (cp, cm) in seed.coeffs.items()
    }
    coeffs[loss_vacuum_id] = (s_loss / den[0], s_loss / den[1])
    coeffs[oc_vacuum_id] = (
        (2.0 * p.kappa_oc - 1j * omega - kappa + p.g) / den[0],
        (2.0 * p.kappa_oc - 1j * omega - kappa - p.g) / den[1],
    )
    mean_scale = s_seed / (kappa - p.g)
    return LinearField(
        omega=omega,
        coeffs=coeffs,
        mean=tuple((off, mean_scale * amp) for off, amp in seed.mean),
    )


def loss(f: LinearField, p: LossParams) -> LinearField:
    """Passive power loss: transmit sqrt(eta), admix sqrt(1-eta) fresh vacuum."""
    if p.fresh_vacuum_id in f.coeffs:
        raise ValueError(f"noise source '{p.fresh_vacuum_id}' is already present in the field")
    t = math.sqrt(p.eta)
    r = math.sqrt(1.0 - p.eta)
    coeffs = {k: (t * cp, t * cm) for k, (cp, cm) in f.coeffs.items()}
    if r > 0.0:
        coeffs[p.fresh_vacuum_id] = (complex(r), complex(r))
    return LinearField(
        omega=f.omega,
        coeffs=coeffs,
        mean=tuple((off, t * amp) for off, amp in f.mean),
    )


def modulator(f: LinearField, mod_freq: float, mod_depth: float) -> LinearField:
    """Weak phase modulation: add bright sidebands at +-mod_freq.

    First-order model: each sideband carries (depth/2) of the carrier
    amplitude in the phase quadrature.  Fluctuation coefficients are
    untouched.
    """
    if mod_depth < 0.0:
        raise ValueError(f"modulation depth must be >= 0, got {mod_depth}")
    carrier = f.carrier_amplitude()
    if mod_depth == 0.0 or carrier == 0j:
        return f
    sb = 1j * 0.5 * mod_depth * abs(carrier)
    means: dict[float, complex] = dict(f.mean)
    for off in (mod_freq, -mod_freq):
        means[off] = means.get(off, 0j) + sb
    return LinearField(omega=f.omega, coeffs=dict(f.coeffs), mean=tuple(sorted(means.items())))


def homodyne_readout(
    f: LinearField,
    q: Quadrature,
    p: HomodyneParams,
    sources: Mapping[str, NoiseVarianceModel],
) -> float:
    """Detected variance: eta_eff*V + (1 - eta_eff) + dark noise.

    eta_eff = pd_efficiency * visibility**2; imperfect detection mixes in
    shot noise and the dark noise adds on top.
    """
    eta = p.eta_eff
    return eta * variance(f, q, sources) + (1.0 - eta) + p.dark_rel
