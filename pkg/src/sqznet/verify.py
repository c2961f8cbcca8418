"""Self-verification suites: consistency draws, unitarity, uncertainty product.

Each suite returns its maximum observed error against a pinned tolerance.
The CLI `verify` command runs all of them; the test suite reuses the same
functions so the shipped binary and CI check the same physics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .analysis import epsilon1_plus, squeezed_vacuum_variance
from .config import load_preset
from .core import VACUUM, Quadrature, sum_coefficient_power, variance
from .elements import (
    BeamsplitterParams,
    HomodyneParams,
    LossParams,
    OpaParams,
    opa_transfer,
    source,
)
from .network import (
    SRC,
    Beamsplitter,
    LossElement,
    MachZehnderParams,
    NetworkDescription,
    Opa,
    PhaseShifter,
    SourceSpec,
    build_mach_zehnder,
    evaluate,
    sweep,
)


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    max_error: float
    tolerance: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name}: max error {self.max_error:.3e} (tolerance {self.tolerance:.1e})"


def draw_opa(rng: np.random.Generator, passive: bool = False, g_span: float = 0.95) -> OpaParams:
    """Random below-threshold cavity; all three ports strictly open."""
    rates = rng.uniform(1e5, 1e8, size=3)
    kappa = rates.sum()
    g = 0.0 if passive else rng.uniform(-g_span * kappa, 0.0)
    return OpaParams(kappa_ic=rates[0], kappa_oc=rates[1], kappa_loss=rates[2], g=g)


def check_consistency(draws: int = 10_000, seed: int = 0) -> SuiteResult:
    """Zero-frequency triangle: composed network nulls the source coefficient
    at the closed-form reflectivity and lands on the closed-form variance."""
    rng = np.random.default_rng(seed)
    tol_coeff, tol_var = 1e-12, 1e-10
    worst = 0.0
    for _ in range(draws):
        opa = draw_opa(rng)
        eps2 = rng.uniform(0.01, 0.99)
        eps1 = epsilon1_plus(eps2, opa)
        params = MachZehnderParams(
            epsilon1=BeamsplitterParams(eps1),
            epsilon2=BeamsplitterParams(eps2),
            opa=opa,
            phi=0.0,
        )
        net = build_mach_zehnder(params)
        fld = evaluate(net, 0.0)
        c_src = abs(fld.coefficient(SRC, Quadrature.PLUS))
        v = variance(fld, Quadrature.PLUS, net.source_models())
        v_ref = squeezed_vacuum_variance(eps2, opa)
        err = max(c_src / tol_coeff, abs(v - v_ref) / abs(v_ref) / tol_var)
        worst = max(worst, err)
    # worst is normalized to its own tolerance; report against 1.
    return SuiteResult("eq-consistency (2)<->(3)<->(4)", worst <= 1.0, worst, 1.0)


def random_passive_network(
    rng: np.random.Generator, max_elements: int = 8
) -> NetworkDescription:
    """Random chain of passive elements with every loss port tracked."""
    elements: dict = {}
    edges: list = []
    inputs: dict = {("e0", 0): SourceSpec("in-0")}
    n = int(rng.integers(1, max_elements + 1))
    current: tuple[str, int] | None = None
    for i in range(n):
        name = f"e{i}"
        kind = rng.integers(0, 4)
        if kind == 0:
            elem = Beamsplitter(BeamsplitterParams(float(rng.uniform(0.0, 1.0))))
        elif kind == 1:
            elem = PhaseShifter(float(rng.uniform(-math.pi, math.pi)))
        elif kind == 2:
            elem = LossElement(LossParams(float(rng.uniform(0.1, 1.0)), f"loss-{i}"))
        else:
            elem = Opa(draw_opa(rng, passive=True), f"oc-{i}", f"intracav-{i}")
        elements[name] = elem
        if current is not None:
            edges.append((current, (name, 0)))
        elif i > 0:
            raise AssertionError("chain lost its head")
        if isinstance(elem, Beamsplitter):
            inputs[(name, 1)] = SourceSpec(f"bs-vac-{i}")
            current = (name, int(rng.integers(0, 2)))
        else:
            current = (name, 0)
    assert current is not None
    return NetworkDescription(
        elements=elements,
        edges=tuple(edges),
        inputs=inputs,
        detector=current,
        detection=HomodyneParams(),
    )


def check_passive_unitarity(
    networks: int = 1000, freqs_per_net: int = 10, seed: int = 1
) -> SuiteResult:
    """Shot-noise preservation: any passive lossy-but-tracked chain returns V = 1."""
    rng = np.random.default_rng(seed)
    tol = 1e-12
    worst = 0.0
    for _ in range(networks):
        net = random_passive_network(rng)
        models = net.source_models()
        for _ in range(freqs_per_net):
            omega = 2.0 * math.pi * rng.uniform(1e3, 3e7)
            fld = evaluate(net, omega)
            for q in Quadrature:
                worst = max(worst, abs(variance(fld, q, models) - 1.0))
                worst = max(worst, abs(sum_coefficient_power(fld, q) - 1.0))
    return SuiteResult("passive unitarity", worst <= tol, worst, tol)


def opa_output_variances(opa: OpaParams, omega: float) -> tuple[float, float]:
    """(V+, V-) of the vacuum-seeded cavity output."""
    seed_field = source("seed", 0.0, omega)
    out = opa_transfer(seed_field, opa, "oc", "intracav")
    models = {k: VACUUM for k in ("seed", "oc", "intracav")}
    return (
        variance(out, Quadrature.PLUS, models),
        variance(out, Quadrature.MINUS, models),
    )


def check_uncertainty_product(draws: int = 1000, seed: int = 2) -> SuiteResult:
    """V+ * V- >= 1 always; equality and the closed form for a lossless cavity."""
    rng = np.random.default_rng(seed)
    tol = 1e-12
    worst = 0.0
    for _ in range(draws):
        opa = draw_opa(rng)
        omega = 2.0 * math.pi * rng.uniform(1e3, 5e7)
        vp, vm = opa_output_variances(opa, omega)
        worst = max(worst, max(0.0, 1.0 - vp * vm))
        # Lossless single-port cavity: closed form and exact minimum uncertainty.
        kappa = rng.uniform(1e6, 3e8)
        g = rng.uniform(-0.95 * kappa, -1e-3 * kappa)
        lossless = OpaParams(kappa_ic=0.0, kappa_oc=kappa, kappa_loss=0.0, g=g)
        vp, vm = opa_output_variances(lossless, omega)
        ref_p = (omega**2 + (kappa + g) ** 2) / (omega**2 + (kappa - g) ** 2)
        ref_m = (omega**2 + (kappa - g) ** 2) / (omega**2 + (kappa + g) ** 2)
        worst = max(worst, abs(vp - ref_p), abs(vm - ref_m), abs(vp * vm - 1.0))
    return SuiteResult("uncertainty product", worst <= tol, worst, tol)


def check_budget_closure(preset: str = "paper-fig2") -> SuiteResult:
    """Per-source contributions sum to the total at every swept frequency."""
    cfg = load_preset(preset)
    net = build_mach_zehnder(cfg.mach_zehnder)
    models = net.source_models({SRC: cfg.mach_zehnder.src_model})
    points = sweep(net, cfg.grid.frequencies(), models)
    tol = 1e-12
    worst = max(abs(sum(pt.contributions.values()) - pt.v_plus) for pt in points)
    return SuiteResult("budget closure", worst <= tol, worst, tol)


def check_residual_scaling(seed: int = 3) -> SuiteResult:
    """Holding the zero-frequency null, the leaked source power grows as
    Omega^2 well inside the cavity linewidth."""
    cfg = load_preset("paper-fig2")
    p = cfg.mach_zehnder
    opa = p.opa
    eps1 = epsilon1_plus(p.epsilon2.epsilon, opa)
    held = replace(p, epsilon1=BeamsplitterParams(eps1), phi=0.0, propagation_eta=1.0)
    net = build_mach_zehnder(held)
    omegas = np.logspace(math.log10(1e-4 * opa.kappa), math.log10(1e-2 * opa.kappa), 25)
    powers = []
    for omega in omegas:
        c = evaluate(net, float(omega)).coefficient(SRC, Quadrature.PLUS)
        powers.append(abs(c) ** 2)
    slope = np.polyfit(np.log(omegas), np.log(powers), 1)[0]
    tol = 0.01
    err = abs(slope - 2.0)
    return SuiteResult("finite-frequency residual ~ Omega^2", err <= tol, err, tol)


def run_all(seed: int = 0, draws: int = 10_000) -> list[SuiteResult]:
    return [
        check_consistency(draws=draws, seed=seed),
        check_passive_unitarity(seed=seed + 1),
        check_uncertainty_product(seed=seed + 2),
        check_budget_closure(),
        check_residual_scaling(seed=seed + 3),
    ]
