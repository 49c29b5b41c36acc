"""Scalar circuit-fidelity model and measurement-cost comparisons.

With an error channel acting after every unitary, the circuit prepares
rho = F * rho_ideal + (1 - F) * rho_noise, and in the worst case 1/F
measurements are expected per sample from the ideal distribution. F is
a product of per-gate survival probabilities, so only the gate counts
and the two error rates enter:

    F = (1 - eps_n)^{#1q gates} * (1 - eps_m)^{#2q gates}

On fully connected hardware one MaxCut layer costs n single-qubit and
m two-qubit unitaries. Gate counts are real-valued so ensemble means
(say 14.4 edges per graph) plug in directly. Any gate whose angle came
out exactly zero is the identity and can be dropped from the compiled
circuit, which is what makes the multi-angle ansatz cheaper to sample
than its layer count suggests.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

from .graph import Graph


@dataclass(frozen=True)
class NoiseModel:
    """Per-gate error probabilities.

    eps_n applies to every single-qubit unitary, eps_m to every
    two-qubit unitary. Both must lie in [0, 1).
    """

    eps_n: float = 0.0
    eps_m: float = 0.0

    def __post_init__(self):
        for name in ("eps_n", "eps_m"):
            v = getattr(self, name)
            if not 0.0 <= v < 1.0:
                raise ValueError(f"{name}={v!r} outside [0, 1)")


@dataclass(frozen=True)
class CircuitProfile:
    """Effective gate counts of a compiled circuit.

    Counts are floats on purpose: profiles averaged over an ensemble
    (mean edge count, mean pruning fraction) are as valid an input to
    the fidelity model as any single circuit. ``layers`` is carried
    for bookkeeping; the counts must already include it.
    """

    n_gates_1q: float
    n_gates_2q: float
    layers: int = 1

    def __post_init__(self):
        if self.n_gates_1q < 0 or self.n_gates_2q < 0:
            raise ValueError("gate counts must be nonnegative")
        if self.layers < 1:
            raise ValueError("layers must be >= 1")


def qaoa_profile(g: Graph, p: int) -> CircuitProfile:
    """Unpruned p-layer profile: n*p single-qubit, m*p two-qubit gates."""
    if p < 1:
        raise ValueError("p must be >= 1")
    return CircuitProfile(g.n * p, g.m * p, p)


def pruned_profile(g: Graph, result) -> CircuitProfile:
    """Single-layer profile after dropping the zero-angle unitaries.

    ``result`` is an OptimizationResult carrying zero_beta/zero_gamma
    counts; a vertex unitary with beta = 0 and an edge unitary with
    gamma = 0 are identities and are excluded from the compiled
    circuit.
    """
    if result.p != 1:
        raise ValueError("pruned gate counts are defined per layer; need p=1")
    zb, zg = result.zero_beta, result.zero_gamma
    if not 0 <= zb <= g.n or not 0 <= zg <= g.m:
        raise ValueError(f"zero-angle counts ({zb}, {zg}) exceed (n={g.n}, m={g.m})")
    return CircuitProfile(g.n - zb, g.m - zg, 1)


def mean_pruned_profile(n: float, m: float, beta_zero_frac: float,
                        gamma_zero_frac: float) -> CircuitProfile:
    """Ensemble-mean single-layer profile from mean pruning fractions."""
    for frac in (beta_zero_frac, gamma_zero_frac):
        if not 0.0 <= frac <= 1.0:
            raise ValueError("pruning fractions must lie in [0, 1]")
    return CircuitProfile(n * (1.0 - beta_zero_frac), m * (1.0 - gamma_zero_frac), 1)


def fidelity(profile: CircuitProfile, nm: NoiseModel) -> float:
    """Probability that no gate errored: the weight of the ideal state."""
    return ((1.0 - nm.eps_n) ** profile.n_gates_1q
            * (1.0 - nm.eps_m) ** profile.n_gates_2q)


def expected_measurements(profile: CircuitProfile, nm: NoiseModel) -> float:
    """Worst-case expected samples per ideal-distribution draw: 1/F."""
    return 1.0 / fidelity(profile, nm)


def measurement_ratio(qaoa: CircuitProfile, ma: CircuitProfile,
                      nm: NoiseModel) -> float:
    """How many times more samples the plain ansatz needs than ma.

    Equal profiles give exactly 1.0; computed in log space so deep
    circuits at high error rates do not underflow.
    """
    log_ratio = ((qaoa.n_gates_1q - ma.n_gates_1q) * math.log1p(-nm.eps_n)
                 + (qaoa.n_gates_2q - ma.n_gates_2q) * math.log1p(-nm.eps_m))
    return math.exp(-log_ratio)


# ---------------------------------------------------------------------------
# stock benchmark families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BenchmarkFamily:
    """Ensemble statistics feeding the stock measurement-cost report.

    ``mean_edges`` is the ensemble's average edge count and the two
    percentages are the average share of vertex/edge angles that
    optimize to zero under the single-layer multi-angle ansatz, i.e.
    the average pruning the compiled circuit enjoys.
    """

    label: str
    n: int
    mean_edges: float
    beta_zero_percent: float
    gamma_zero_percent: float

    def ma_profile(self) -> CircuitProfile:
        return mean_pruned_profile(self.n, self.mean_edges,
                                   self.beta_zero_percent / 100.0,
                                   self.gamma_zero_percent / 100.0)

    def qaoa_profile(self, p: int) -> CircuitProfile:
        if p < 1:
            raise ValueError("p must be >= 1")
        return CircuitProfile(self.n * p, self.mean_edges * p, p)


# all connected non-isomorphic 8-vertex graphs, then 3-regular and
# Erdos-Renyi collections at 50 and 100 vertices
BENCHMARK_FAMILIES = (
    BenchmarkFamily("8-vertex", 8, 14.4, 15.030, 25.449),
    BenchmarkFamily("50-vertex-3-regular", 50, 75.0, 13.000, 18.147),
    BenchmarkFamily("50-vertex-er", 50, 87.2, 11.440, 14.381),
    BenchmarkFamily("100-vertex-3-regular", 100, 150.0, 14.690, 19.973),
    BenchmarkFamily("100-vertex-er", 100, 167.34, 12.900, 16.541),
)

STOCK_NOISE_MODELS = (NoiseModel(0.01, 0.01), NoiseModel(0.01, 0.05))
STOCK_DEPTHS = (1, 2, 3)


def measurement_ratio_grid(families=BENCHMARK_FAMILIES,
                           noise_models=STOCK_NOISE_MODELS,
                           depths=STOCK_DEPTHS) -> list[dict]:
    """Sample-cost ratios of p-layer QAOA over pruned 1-layer ma-QAOA.

    One row per (family, noise model, p), as dicts ready for the CSV
    emitter.
    """
    rows = []
    for fam in families:
        ma = fam.ma_profile()
        for nm in noise_models:
            for p in depths:
                rows.append({
                    "label": fam.label,
                    "n": fam.n,
                    "m": fam.mean_edges,
                    "p": p,
                    "eps_n": nm.eps_n,
                    "eps_m": nm.eps_m,
                    "ratio": measurement_ratio(fam.qaoa_profile(p), ma, nm),
                })
    return rows


def write_ratio_csv(path, rows) -> None:
    """Write grid rows as CSV with columns n, m, p, eps_n, eps_m, ratio."""
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(
            fh, fieldnames=["n", "m", "p", "eps_n", "eps_m", "ratio"],
            extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
