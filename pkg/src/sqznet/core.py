"""Sideband-space linear noise algebra.

An optical field at one point of a network is represented as a linear
combination of independent noise inputs: for every noise source the field
stores one complex transfer coefficient per quadrature, evaluated at a
single sideband angular frequency.  Because the inputs are mutually
uncorrelated, the homodyne variance is the incoherent sum of
|coefficient|^2 times the input variance of each source.

Classical mean-field amplitudes (the carrier and any bright modulation
sidebands) ride along as a separate list and never mix with the
fluctuation coefficients.
"""

from __future__ import annotations

import enum
import math
from collections.abc import Mapping
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi


class Quadrature(enum.Enum):
    """Amplitude (PLUS) or phase (MINUS) quadrature."""

    PLUS = "+"
    MINUS = "-"

    @property
    def index(self) -> int:
        return 0 if self is Quadrature.PLUS else 1


@dataclass(frozen=True)
class NoiseVarianceModel:
    """Variance spectrum of one noise input, normalized to shot noise = 1.

    ``base`` is the white floor (1.0 for vacuum or a coherent state).
    ``peaks`` are Lorentzian excess-noise features given as
    (center_hz, half_width_hz, peak_excess); ``low_freq_excess`` adds an
    ``amplitude / f**exponent`` rise (f in Hz).
    """

    base: float = 1.0
    peaks: tuple[tuple[float, float, float], ...] = ()
    low_freq_excess: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        if self.base < 0.0:
            raise ValueError(f"variance base must be >= 0, got {self.base}")
        object.__setattr__(self, "peaks", tuple(tuple(p) for p in self.peaks))
        for center, half_width, excess in self.peaks:
            if half_width <= 0.0:
                raise ValueError(f"peak half-width must be > 0, got {half_width}")
            if excess < 0.0:
                raise ValueError(f"peak excess must be >= 0, got {excess}")
        if self.low_freq_excess is not None:
            amplitude, exponent = self.low_freq_excess
            if amplitude < 0.0:
                raise ValueError(f"low-frequency amplitude must be >= 0, got {amplitude}")
            object.__setattr__(self, "low_freq_excess", (float(amplitude), float(exponent)))

    def evaluate(self, omega: float) -> float:
        """Variance at sideband angular frequency ``omega`` (rad/s)."""
        f = abs(omega) / TWO_PI
        v = self.base
        for center, half_width, excess in self.peaks:
            v += excess * half_width**2 / ((f - center) ** 2 + half_width**2)
        if self.low_freq_excess is not None:
            amplitude, exponent = self.low_freq_excess
            if amplitude > 0.0:
                if f == 0.0:
                    raise ValueError("low-frequency excess is undefined at zero frequency")
                v += amplitude / f**exponent
        return v


#: Shot-noise-limited input: V = 1 at every frequency.
VACUUM = NoiseVarianceModel()


@dataclass(frozen=True)
class LinearField:
    """Fluctuation field as a keyed linear combination of noise inputs.

    ``coeffs`` maps a noise-source label to a pair of complex transfer
    coefficients ``(c_plus, c_minus)`` at sideband angular frequency
    ``omega``.  ``mean`` lists classical amplitudes in sqrt(W) as
    (frequency_offset_hz, complex_amplitude) pairs; offset 0 is the carrier.

    Instances are treated as immutable; element operations always return
    new fields.
    """

    omega: float
    coeffs: Mapping[str, tuple[complex, complex]]
    mean: tuple[tuple[float, complex], ...] = ()

    def coefficient(self, source_id: str, q: Quadrature) -> complex:
        pair = self.coeffs.get(source_id)
        return pair[q.index] if pair is not None else 0j

    def carrier_amplitude(self) -> complex:
        for offset, amplitude in self.mean:
            if offset == 0.0:
                return amplitude
        return 0j

    def scaled(self, factor: complex) -> "LinearField":
        """Multiply every coefficient and mean amplitude by ``factor``."""
        return LinearField(
            omega=self.omega,
            coeffs={k: (factor * cp, factor * cm) for k, (cp, cm) in self.coeffs.items()},
            mean=tuple((off, factor * amp) for off, amp in self.mean),
        )


def combine(ca: complex, a: LinearField, cb: complex, b: LinearField) -> LinearField:
    """Linear combination ``ca*a + cb*b`` of two fields at the same frequency."""
    if a.omega != b.omega:
        raise ValueError(f"cannot combine fields at different frequencies ({a.omega} vs {b.omega})")
    coeffs: dict[str, tuple[complex, complex]] = {}
    for k, (cp, cm) in a.coeffs.items():
        coeffs[k] = (ca * cp, ca * cm)
    for k, (cp, cm) in b.coeffs.items():
        prev = coeffs.get(k, (0j, 0j))
        coeffs[k] = (prev[0] + cb * cp, prev[1] + cb * cm)
    means: dict[float, complex] = {}
    for off, amp in a.mean:
        means[off] = means.get(off, 0j) + ca * amp
    for off, amp in b.mean:
        means[off] = means.get(off, 0j) + cb * amp
    return LinearField(omega=a.omega, coeffs=coeffs, mean=tuple(sorted(means.items())))


def variance(
    field: LinearField,
    q: Quadrature,
    sources: Mapping[str, NoiseVarianceModel],
) -> float:
    """Homodyne variance ``sum_j |c_j|^2 V_j(omega)`` in quadrature ``q``.

    Strictly the incoherent sum: all noise inputs are uncorrelated.
    """
    i = q.index
    total = 0.0
    for source_id, pair in field.coeffs.items():
        model = sources.get(source_id)
        if model is None:
            raise KeyError(f"no variance model for noise source '{source_id}'")
        total += abs(pair[i]) ** 2 * model.evaluate(field.omega)
    return total


def sum_coefficient_power(field: LinearField, q: Quadrature) -> float:
    """Unitarity diagnostic: ``sum_j |c_j|^2`` in quadrature ``q``."""
    i = q.index
    return sum(abs(pair[i]) ** 2 for pair in field.coeffs.values())


def db_rel_shot(v: float) -> float:
    """Variance in dB relative to shot noise (v = 1 maps to 0 dB)."""
    if v <= 0.0:
        raise ValueError(f"variance must be > 0 to express in dB, got {v}")
    return 10.0 * math.log10(v)
