"""Angle assignments for the (multi-angle) QAOA ansatz.

One layer holds a gamma angle per edge (cost phases) and a beta angle
per vertex (mixer rotations). Plain QAOA is the special case where each
layer's gammas are all equal and so are its betas; it is stored in the
same broadcast per-edge / per-vertex form so that zero counting, pruning
and serialization treat both ansatz families uniformly.

The flat vector convention used by optimizers and gradients is: all
betas first (layer-major, vertex index fastest), then all gammas
(layer-major, edge index fastest). For one layer that is
``[beta_0 .. beta_{n-1}, gamma_0 .. gamma_{m-1}]``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph

GAMMA_PERIOD = 2.0 * np.pi  # cost unitary has integer spectrum
BETA_PERIOD = np.pi         # exp(-i*pi*X) is a global phase


@dataclass(frozen=True)
class AngleAssignment:
    """Per-layer angle arrays: gamma (p, m), beta (p, n)."""

    gamma: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        g = np.atleast_2d(np.asarray(self.gamma, dtype=float))
        b = np.atleast_2d(np.asarray(self.beta, dtype=float))
        if g.shape[0] != b.shape[0]:
            raise ValueError("gamma and beta must have the same layer count")
        object.__setattr__(self, "gamma", g)
        object.__setattr__(self, "beta", b)

    @property
    def p(self) -> int:
        return self.gamma.shape[0]

    @property
    def n(self) -> int:
        return self.beta.shape[1]

    @property
    def m(self) -> int:
        return self.gamma.shape[1]

    def is_shared(self, tol: float = 0.0) -> bool:
        """True if every layer uses one gamma and one beta (plain QAOA)."""
        g_ok = np.all(np.abs(self.gamma - self.gamma[:, :1]) <= tol)
        b_ok = np.all(np.abs(self.beta - self.beta[:, :1]) <= tol)
        return bool(g_ok and b_ok)

    def to_vector(self) -> np.ndarray:
        """Flat [betas..., gammas...] vector (layer-major within each block)."""
        return np.concatenate([self.beta.ravel(), self.gamma.ravel()])


def assignment_from_vector(g: Graph, p: int, vec) -> AngleAssignment:
    """Inverse of AngleAssignment.to_vector for a p-layer ma ansatz."""
    vec = np.asarray(vec, dtype=float)
    nb, ng = p * g.n, p * g.m
    if vec.size != nb + ng:
        raise ValueError(f"expected {nb + ng} components, got {vec.size}")
    return AngleAssignment(
        beta=vec[:nb].reshape(p, g.n).copy(),
        gamma=vec[nb:].reshape(p, g.m).copy(),
    )


def shared_assignment(g: Graph, gammas, betas) -> AngleAssignment:
    """Broadcast plain-QAOA angles (one gamma, beta per layer) per edge/vertex."""
    gammas = np.atleast_1d(np.asarray(gammas, dtype=float))
    betas = np.atleast_1d(np.asarray(betas, dtype=float))
    if gammas.shape != betas.shape:
        raise ValueError("need one gamma and one beta per layer")
    p = gammas.size
    return AngleAssignment(
        gamma=np.repeat(gammas.reshape(p, 1), g.m, axis=1),
        beta=np.repeat(betas.reshape(p, 1), g.n, axis=1),
    )


def zero_assignment(g: Graph, p: int = 1) -> AngleAssignment:
    return AngleAssignment(gamma=np.zeros((p, g.m)), beta=np.zeros((p, g.n)))


def random_assignment(g: Graph, p: int, rng,
                      gamma_range=(-np.pi, np.pi),
                      beta_range=(-np.pi / 2, np.pi / 2)) -> AngleAssignment:
    """Uniform angles: gamma in gamma_range, beta in beta_range."""
    return AngleAssignment(
        gamma=rng.uniform(*gamma_range, size=(p, g.m)),
        beta=rng.uniform(*beta_range, size=(p, g.n)),
    )


def _dist_mod(x: np.ndarray, period: float) -> np.ndarray:
    """Distance from each angle to the nearest multiple of ``period``."""
    r = np.mod(x, period)
    return np.minimum(r, period - r)


def count_zero_angles(a: AngleAssignment, threshold: float = 1e-3) -> tuple[int, int]:
    """(zero betas, zero gammas), counted modulo each angle's period.

    A gamma within ``threshold`` of a multiple of 2*pi contributes no
    cost phase and its gate can be pruned; a beta within ``threshold``
    of a multiple of pi likewise (exp(-i*pi*X) = -I). Counts are summed
    over layers.
    """
    zb = int(np.count_nonzero(_dist_mod(a.beta, BETA_PERIOD) < threshold))
    zg = int(np.count_nonzero(_dist_mod(a.gamma, GAMMA_PERIOD) < threshold))
    return zb, zg
