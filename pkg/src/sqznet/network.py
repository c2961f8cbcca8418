"""Composition of elements into a directed acyclic optical network.

A :class:`NetworkDescription` lists named elements with integer ports,
edges from output ports to input ports, fresh-source assignments for every
open input port, and a designated detector port with homodyne parameters.
:func:`evaluate` walks the graph in topological order and returns the
sideband field at the detector; :func:`sweep` turns a frequency grid into
noise spectra with per-source budgets.

:func:`build_mach_zehnder` wires the canonical topology: a first
beamsplitter splitting the bright source, an OPA in one arm, a phase
shifter in the other, a recombining beamsplitter, and propagation loss in
front of the homodyne detector.
"""

from __future__ import annotations

import math
from collections import deque
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field, replace

from .core import (
    VACUUM,
    LinearField,
    NoiseVarianceModel,
    Quadrature,
    db_rel_shot,
)
from .elements import (
    BeamsplitterParams,
    HomodyneParams,
    LossParams,
    OpaParams,
    beamsplitter,
    homodyne_readout,
    loss,
    modulator,
    opa_transfer,
    phase_shift,
    source,
)

# Canonical noise-source labels used by build_mach_zehnder.
SRC = "src"
VAC = "vac"
OC = "oc"
LOSS = "loss"
PROP_VAC = "prop-vac"
REF_BLOCK_VAC = "ref-block-vac"

# Pseudo-sources reported in detection budgets.
DETECTION = "detection"
DARK = "dark"


class NetworkError(ValueError):
    """Invalid network description (cycle, dangling port, duplicate source)."""


@dataclass(frozen=True)
class Beamsplitter:
    params: BeamsplitterParams


@dataclass(frozen=True)
class PhaseShifter:
    phi: float


@dataclass(frozen=True)
class Opa:
    params: OpaParams
    oc_vacuum_id: str
    loss_vacuum_id: str


@dataclass(frozen=True)
class LossElement:
    params: LossParams


@dataclass(frozen=True)
class Modulator:
    mod_freq: float
    mod_depth: float


Element = Beamsplitter | PhaseShifter | Opa | LossElement | Modulator


def _port_counts(elem: Element) -> tuple[int, int]:
    if isinstance(elem, Beamsplitter):
        return 2, 2
    return 1, 1


@dataclass(frozen=True)
class SourceSpec:
    """Fresh input on an open port: noise-source label plus carrier power."""

    source_id: str
    carrier_power: float = 0.0


Port = tuple[str, int]


@dataclass(frozen=True)
class NetworkDescription:
    """Validated element graph with a designated homodyne detector port."""

    elements: Mapping[str, Element]
    edges: tuple[tuple[Port, Port], ...]
    inputs: Mapping[Port, SourceSpec]
    detector: Port
    detection: HomodyneParams = field(default_factory=HomodyneParams)

    def __post_init__(self) -> None:
        object.__setattr__(self, "elements", dict(self.elements))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "inputs", dict(self.inputs))
        self._validate()
        object.__setattr__(self, "_order", self._topological_order())

    def _validate(self) -> None:
        seen_in: set[Port] = set()
        seen_out: set[Port] = set()
        for (src_name, src_port), (dst_name, dst_port) in self.edges:
            for name in (src_name, dst_name):
                if name not in self.elements:
                    raise NetworkError(f"edge references unknown element '{name}'")
            n_in, n_out = _port_counts(self.elements[src_name])
            if not 0 <= src_port < n_out:
                raise NetworkError(f"element '{src_name}' has no output port {src_port}")
            n_in, n_out = _port_counts(self.elements[dst_name])
            if not 0 <= dst_port < n_in:
                raise NetworkError(f"element '{dst_name}' has no input port {dst_port}")
            if (src_name, src_port) in seen_out:
                raise NetworkError(f"output port {(src_name, src_port)} feeds more than one edge")
            if (dst_name, dst_port) in seen_in:
                raise NetworkError(f"input port {(dst_name, dst_port)} has more than one feed")
            seen_out.add((src_name, src_port))
            seen_in.add((dst_name, dst_port))
        for port in self.inputs:
            name, idx = port
            if name not in self.elements:
                raise NetworkError(f"input assignment references unknown element '{name}'")
            n_in, _ = _port_counts(self.elements[name])
            if not 0 <= idx < n_in:
                raise NetworkError(f"element '{name}' has no input port {idx}")
            if port in seen_in:
                raise NetworkError(f"input port {port} is both wired and assigned a source")
        for name, elem in self.elements.items():
            n_in, _ = _port_counts(elem)
            for idx in range(n_in):
                if (name, idx) not in seen_in and (name, idx) not in self.inputs:
                    raise NetworkError(f"dangling input port {(name, idx)}")
        det_name, det_port = self.detector
        if det_name not in self.elements:
            raise NetworkError(f"detector references unknown element '{det_name}'")
        _, n_out = _port_counts(self.elements[det_name])
        if not 0 <= det_port < n_out:
            raise NetworkError(f"element '{det_name}' has no output port {det_port}")
        if self.detector in seen_out:
            raise NetworkError(f"detector port {self.detector} is consumed by an edge")
        ids = [spec.source_id for spec in self.inputs.values()]
        for elem in self.elements.values():
            if isinstance(elem, Opa):
                ids += [elem.oc_vacuum_id, elem.loss_vacuum_id]
            elif isinstance(elem, LossElement) and elem.params.eta < 1.0:
                ids.append(elem.params.fresh_vacuum_id)
        dupes = {i for i in ids if ids.count(i) > 1}
        if dupes:
            raise NetworkError(f"noise sources injected more than once: {sorted(dupes)}")

    def _topological_order(self) -> tuple[str, ...]:
        indeg = {name: 0 for name in self.elements}
        downstream: dict[str, list[str]] = {name: [] for name in self.elements}
        for (src_name, _), (dst_name, _) in self.edges:
            indeg[dst_name] += 1
            downstream[src_name].append(dst_name)
        ready = deque(name for name, d in indeg.items() if d == 0)
        order: list[str] = []
        while ready:
            name = ready.popleft()
            order.append(name)
            for nxt in downstream[name]:
                indeg[nxt] -= 1
                if indeg[nxt] == 0:
                    ready.append(nxt)
        if len(order) < len(self.elements):
            cyclic = sorted(set(self.elements) - set(order))
            raise NetworkError(f"network contains a cycle through {cyclic}")
        return tuple(order)

    def source_ids(self) -> tuple[str, ...]:
        """All noise-source labels injected anywhere in the network."""
        ids = [spec.source_id for spec in self.inputs.values()]
        for elem in self.elements.values():
            if isinstance(elem, Opa):
                ids += [elem.oc_vacuum_id, elem.loss_vacuum_id]
            elif isinstance(elem, LossElement) and elem.params.eta < 1.0:
                ids.append(elem.params.fresh_vacuum_id)
        return tuple(ids)

    def source_models(
        self, overrides: Mapping[str, NoiseVarianceModel] | None = None
    ) -> dict[str, NoiseVarianceModel]:
        """Vacuum model for every injected source, with optional overrides."""
        models = {sid: VACUUM for sid in self.source_ids()}
        if overrides:
            unknown = set(overrides) - set(models)
            if unknown:
                raise KeyError(f"override for sources not in the network: {sorted(unknown)}")
            models.update(overrides)
        return models


def _apply(elem: Element, inputs: Sequence[LinearField]) -> tuple[LinearField, ...]:
    if isinstance(elem, Beamsplitter):
        return beamsplitter(inputs[0], inputs[1], elem.params)
    if isinstance(elem, PhaseShifter):
        return (phase_shift(inputs[0], elem.phi),)
    if isinstance(elem, Opa):
        return (opa_transfer(inputs[0], elem.params, elem.oc_vacuum_id, elem.loss_vacuum_id),)
    if isinstance(elem, LossElement):
        return (loss(inputs[0], elem.params),)
    if isinstance(elem, Modulator):
        return (modulator(inputs[0], elem.mod_freq, elem.mod_depth),)
    raise TypeError(f"unknown element type {type(elem).__name__}")


def evaluate(net: NetworkDescription, omega: float) -> LinearField:
    """Field at the detector port at sideband angular frequency ``omega``."""
    feeds: dict[Port, Port] = {dst: src for src, dst in net.edges}
    fields: dict[Port, LinearField] = {}
    for name in net._order:  # noqa: SLF001 - cached on the description itself
        elem = net.elements[name]
        n_in, _ = _port_counts(elem)
        ins: list[LinearField] = []
        for idx in range(n_in):
            port = (name, idx)
            if port in net.inputs:
                spec = net.inputs[port]
                ins.append(source(spec.source_id, spec.carrier_power, omega))
            else:
                ins.append(fields[feeds[port]])
        for out_idx, out_field in enumerate(_apply(elem, ins)):
            fields[(name, out_idx)] = out_field
    return fields[net.detector]


@dataclass(frozen=True)
class MachZehnderParams:
    """Parameters of the canonical noise-cancellation interferometer."""

    epsilon1: BeamsplitterParams
    epsilon2: BeamsplitterParams
    opa: OpaParams
    phi: float
    src_model: NoiseVarianceModel = VACUUM
    detection: HomodyneParams = field(default_factory=HomodyneParams)
    propagation_eta: float = 1.0
    carrier_power: float = 0.0
    modulation: tuple[float, float] | None = None  # (frequency_hz, depth)

    def __post_init__(self) -> None:
        if not 0.0 < self.propagation_eta <= 1.0:
            raise ValueError(f"propagation_eta must be in (0, 1], got {self.propagation_eta}")
        if self.carrier_power < 0.0:
            raise ValueError(f"carrier_power must be >= 0, got {self.carrier_power}")

    def source_models(self) -> dict[str, NoiseVarianceModel]:
        models = {SRC: self.src_model, VAC: VACUUM, OC: VACUUM, LOSS: VACUUM}
        if self.propagation_eta < 1.0:
            models[PROP_VAC] = VACUUM
        return models


def build_mach_zehnder(
    p: MachZehnderParams, block_reference: bool = False
) -> NetworkDescription:
    """Wire the single-OPA noise-cancellation interferometer.

    Port 0 of ``bs1`` carries the squeezed-arm field (vacuum-side input on
    port 0, bright source on port 1); the reference arm passes a phase
    shifter before recombining on ``bs2``.  With ``block_reference`` the
    reference input of ``bs2`` is replaced by fresh vacuum, the analog of
    blocking that beam on the table.
    """
    elements: dict[str, Element] = {
        "bs1": Beamsplitter(p.epsilon1),
        "opa": Opa(p.opa, oc_vacuum_id=OC, loss_vacuum_id=LOSS),
        "phase": PhaseShifter(p.phi),
        "bs2": Beamsplitter(p.epsilon2),
    }
    sqz_out: Port = ("opa", 0)
    if p.modulation is not None:
        mod_freq, mod_depth = p.modulation
        elements["mod"] = Modulator(mod_freq, mod_depth)
    edges: list[tuple[Port, Port]] = [(("bs1", 0), ("opa", 0))]
    if "mod" in elements:
        edges.append((sqz_out, ("mod", 0)))
        sqz_out = ("mod", 0)
    edges.append((sqz_out, ("bs2", 0)))
    inputs: dict[Port, SourceSpec] = {
        ("bs1", 0): SourceSpec(VAC),
        ("bs1", 1): SourceSpec(SRC, p.carrier_power),
    }
    if block_reference:
        inputs[("phase", 0)] = SourceSpec(REF_BLOCK_VAC)
    else:
        edges.append((("bs1", 1), ("phase", 0)))
    edges.append((("phase", 0), ("bs2", 1)))
    detector: Port = ("bs2", 0)
    if p.propagation_eta < 1.0:
        elements["prop"] = LossElement(LossParams(p.propagation_eta, PROP_VAC))
        edges.append((detector, ("prop", 0)))
        detector = ("prop", 0)
    return NetworkDescription(
        elements=elements,
        edges=tuple(edges),
        inputs=inputs,
        detector=detector,
        detection=p.detection,
    )


@dataclass(frozen=True)
class SpectrumPoint:
    """Detected noise at one sideband frequency.

    ``contributions`` decomposes the amplitude-quadrature total into
    per-source parts, including the ``detection`` shot-noise admixture and
    ``dark`` electronic noise; they sum to ``v_plus``.
    """

    frequency_hz: float
    v_plus: float
    v_minus: float
    v_plus_db: float
    contributions: Mapping[str, float]


def sweep(
    net: NetworkDescription,
    grid_hz: Sequence[float],
    sources: Mapping[str, NoiseVarianceModel],
) -> list[SpectrumPoint]:
    """Noise spectra over a frequency grid (Hz), with per-source budgets.

    Each grid point is evaluated independently; the grid must be nonempty,
    strictly increasing and positive.
    """
    if len(grid_hz) == 0:
        raise ValueError("frequency grid is empty")
    if grid_hz[0] <= 0.0 or any(b <= a for a, b in zip(grid_hz, grid_hz[1:])):
        raise ValueError("frequency grid must be strictly increasing and positive")
    eta = net.detection.eta_eff
    points: list[SpectrumPoint] = []
    for f_hz in grid_hz:
        fld = evaluate(net, 2.0 * math.pi * f_hz)
        contributions: dict[str, float] = {}
        for sid, (cp, _) in fld.coeffs.items():
            contributions[sid] = eta * abs(cp) ** 2 * sources[sid].evaluate(fld.omega)
        contributions[DETECTION] = 1.0 - eta
        contributions[DARK] = net.detection.dark_rel
        v_plus = homodyne_readout(fld, Quadrature.PLUS, net.detection, sources)
        v_minus = homodyne_readout(fld, Quadrature.MINUS, net.detection, sources)
        points.append(
            SpectrumPoint(
                frequency_hz=f_hz,
                v_plus=v_plus,
                v_minus=v_minus,
                v_plus_db=db_rel_shot(v_plus),
                contributions=contributions,
            )
        )
    return points


def bare_opa_params(p: MachZehnderParams) -> MachZehnderParams:
    """Degenerate topology measuring the OPA output directly (no reference arm)."""
    return replace(
        p,
        epsilon1=BeamsplitterParams(0.0),
        epsilon2=BeamsplitterParams(1.0),
        phi=0.0,
    )
