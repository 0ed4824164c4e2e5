"""Gate accounting and Grover key-search cost arithmetic.

Depth here is plain DAG depth over the X/CNOT/Toffoli/SWAP/RESET gate set;
it is the quantity set beside the published "T-depth" column, not a
Clifford+T figure.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Mapping

from qminiaes.circuit import Circuit

COUNT_KEYS = {
    "x": "x",
    "cx": "cnot",
    "ccx": "toffoli",
    "mcx": "mcx",
    "swap": "swap",
    "reset": "reset",
    "measure": "measure",
}

# Published per-stage figures, kept for side-by-side display only.
PUBLISHED_STAGE_COUNTS = {
    "first_sbox": {"cnot": 52, "toffoli": 80, "x": 28, "reset": 52, "depth": 187},
    "round1": {"qubits": 24, "cnot": 106, "toffoli": 80, "x": 38, "reset": 72, "swap": 22, "depth": 207},
    "rearrangement": {"cnot": 12, "reset": 12},
    "second_sbox": {"cnot": 198, "toffoli": 160, "reset": 156, "x": 50, "swap": 22, "depth": 395},
    "round2": {"qubits": 28, "cnot": 198, "toffoli": 160, "reset": 156, "x": 58, "swap": 26, "depth": 397},
}


class CostError(ValueError):
    pass


@dataclass(frozen=True)
class CostWeights:
    swap_weight: int = 3
    toffoli_weight: int = 6
    mcx_weight: int | None = None

    def __post_init__(self) -> None:
        for w in (self.swap_weight, self.toffoli_weight, self.mcx_weight):
            if w is not None and w < 1:
                raise CostError("weights must be at least 1")


def _zero_counts() -> dict[str, int]:
    return {k: 0 for k in COUNT_KEYS.values()}


@dataclass(frozen=True)
class ResourceReport:
    counts: dict[str, int] = field(default_factory=_zero_counts)
    dag_depth: int = 0
    qubit_count: int = 0
    cnot_equivalent: int | None = None

    @property
    def total_gates(self) -> int:
        return sum(self.counts.values())

    @classmethod
    def from_counts(
        cls,
        counts: Mapping[str, int],
        dag_depth: int = 0,
        qubit_count: int = 0,
        weights: CostWeights | None = None,
    ) -> ResourceReport:
        full = _zero_counts()
        for k, v in counts.items():
            if k not in full:
                raise CostError(f"unknown gate count key {k!r}")
            if v < 0:
                raise CostError("gate counts are non-negative")
            full[k] = int(v)
        try:
            ce = cnot_equivalent(full, weights or CostWeights())
        except CostError:
            ce = None
        return cls(full, dag_depth, qubit_count, ce)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["total_gates"] = self.total_gates
        d["t_depth_analogue"] = self.dag_depth
        return d


def depth(circuit: Circuit) -> int:
    """Greedy layering: a gate sits one layer above the latest of its qubits."""
    level = [0] * circuit.qubit_count
    best = 0
    for g in circuit.gates:
        layer = 1 + max(level[q] for q in g.qubits)
        for q in g.qubits:
            level[q] = layer
        best = max(best, layer)
    return best


def histogram(circuit: Circuit, weights: CostWeights | None = None) -> ResourceReport:
    counts = _zero_counts()
    for g in circuit.gates:
        counts[COUNT_KEYS[g.kind]] += 1
    return ResourceReport.from_counts(counts, depth(circuit), circuit.qubit_count, weights)


def cnot_equivalent(
    report: ResourceReport | Mapping[str, int], weights: CostWeights | None = None
) -> int:
    """CNOTs plus weighted SWAPs and Toffolis; X, RESET and MEASURE are left out."""
    weights = weights or CostWeights()
    counts = report.counts if isinstance(report, ResourceReport) else report
    mcx = counts.get("mcx", 0)
    if mcx and weights.mcx_weight is None:
        raise CostError("circuit contains MCX gates but no mcx_weight was given")
    return (
        counts.get("cnot", 0)
        + weights.swap_weight * counts.get("swap", 0)
        + weights.toffoli_weight * counts.get("toffoli", 0)
        + (weights.mcx_weight or 0) * mcx
    )


@dataclass(frozen=True)
class GroverEstimate:
    key_bits: int
    iterations_real: float
    iterations: int
    depth_cost: int
    t_count_cost: int
    qubit_cost_paper_formula: int
    oracle_qubits: int

    def as_dict(self) -> dict:
        return asdict(self)


def grover_iterations(key_bits: int) -> float:
    return math.pi * 2 ** (key_bits / 2) / 4


def grover_estimate(
    report: ResourceReport,
    key_bits: int,
    not_count: int | None = None,
    weights: CostWeights | None = None,
) -> GroverEstimate:
    """Scale one oracle's cost by the Grover iteration count (floored).

    ``not_count`` defaults to the report's X count.  The qubit figure is
    given both as iterations x qubits, as published, and as the plain
    oracle width.
    """
    if key_bits < 1:
        raise CostError("key_bits must be positive")
    real = grover_iterations(key_bits)
    iters = math.floor(real)
    if not_count is None:
        not_count = report.counts.get("x", 0)
    ce = report.cnot_equivalent
    if ce is None or weights is not None:
        ce = cnot_equivalent(report, weights)
    return GroverEstimate(
        key_bits=key_bits,
        iterations_real=real,
        iterations=iters,
        depth_cost=iters * report.dag_depth,
        t_count_cost=iters * (ce + not_count),
        qubit_cost_paper_formula=iters * report.qubit_count,
        oracle_qubits=report.qubit_count,
    )
