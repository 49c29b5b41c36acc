"""Dense statevector backend for (multi-angle) QAOA on MaxCut.

Basis convention is little-endian: qubit k is bit k of the basis index,
so amplitude ``state[z]`` belongs to the assignment where vertex k sits
on side ``(z >> k) & 1``. The cost layer is a diagonal phase pass
``exp(-i * sum_e gamma_e * [edge e is cut])`` and the mixer applies
``exp(-i * beta_k * X_k)`` per qubit. Works for any graph and any layer
count; it is the ground truth the closed forms are tested against.

States are flat complex128 arrays of length 2^n. The default size cap
keeps memory honest: 2^24 amplitudes is 256 MB.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .angles import AngleAssignment
from .graph import Graph, all_cut_values

QUBIT_LIMIT = 24

_PARITY_CACHE_BYTES = 32 * 2**20  # skip the dense parity matrix past 32 MB


def _check_size(n: int, limit: int = QUBIT_LIMIT):
    if n > limit:
        raise ValueError(f"n={n} exceeds the statevector limit of {limit} qubits")


@lru_cache(maxsize=8)
def _cut_values(g: Graph) -> np.ndarray:
    return all_cut_values(g)


@lru_cache(maxsize=8)
def _parity_matrix(g: Graph):
    """(2^n, m) float matrix of edge-cut indicators, or None if too big."""
    if (1 << g.n) * g.m * 8 > _PARITY_CACHE_BYTES:
        return None
    z = np.arange(1 << g.n, dtype=np.int64)
    par = np.empty(((1 << g.n), g.m), dtype=np.float64)
    for j, (u, v) in enumerate(g.edges):
        par[:, j] = (z >> u ^ z >> v) & 1
    return par


# ---------------------------------------------------------------------------
# state preparation
# ---------------------------------------------------------------------------


def uniform_state(n: int) -> np.ndarray:
    """|+>^n : every amplitude 2^(-n/2)."""
    _check_size(n)
    return np.full(1 << n, 2.0 ** (-n / 2.0), dtype=np.complex128)


def apply_cost_layer(state: np.ndarray, g: Graph, gamma) -> np.ndarray:
    """Multiply in the diagonal phases exp(-i * gamma_e) on cut edges.

    ``gamma`` is a length-m per-edge array (a scalar broadcasts). Returns
    a new state; the input is left untouched.
    """
    gamma = np.broadcast_to(np.asarray(gamma, dtype=float), (g.m,))
    par = _parity_matrix(g)
    if par is not None:
        phase = par @ gamma
    else:
        z = np.arange(1 << g.n, dtype=np.int64)
        phase = np.zeros(1 << g.n)
        for ge, (u, v) in zip(gamma, g.edges):
            phase += ge * ((z >> u ^ z >> v) & 1)
    return state * np.exp(-1j * phase)


def apply_mixer_layer(state: np.ndarray, beta) -> np.ndarray:
    """Apply exp(-i * beta_k * X_k) on every qubit k.

    ``beta`` is a length-n per-vertex array (a scalar broadcasts). The
    single-qubit matrix is [[cos b, -i sin b], [-i sin b, cos b]].
    """
    n = int(np.log2(state.size))
    beta = np.broadcast_to(np.asarray(beta, dtype=float), (n,))
    out = state.copy()
    for k in range(n):
        c, s = np.cos(beta[k]), np.sin(beta[k])
        v = out.reshape(-1, 2, 1 << k)
        a0 = v[:, 0, :].copy()
        a1 = v[:, 1, :]
        v[:, 0, :] = c * a0 - 1j * s * a1
        v[:, 1, :] = c * a1 - 1j * s * a0
    return out


def prepare_state(g: Graph, a: AngleAssignment) -> np.ndarray:
    """Run the p-layer circuit |s> -> U_B(beta_p) U_C(gamma_p) ... |s>."""
    _check_size(g.n)
    if a.m != g.m or a.n != g.n:
        raise ValueError("angle assignment does not match the graph")
    state = uniform_state(g.n)
    for layer in range(a.p):
        state = apply_cost_layer(state, g, a.gamma[layer])
        state = apply_mixer_layer(state, a.beta[layer])
    return state


# ---------------------------------------------------------------------------
# measurement
# ---------------------------------------------------------------------------


def expectation_cut(state: np.ndarray, g: Graph) -> float:
    """<C> = sum_z |state_z|^2 * cut(z)."""
    probs = np.abs(state) ** 2
    return float(probs @ _cut_values(g))


def edge_expectations(state: np.ndarray, g: Graph) -> np.ndarray:
    """Per-edge cut probabilities <C_e>, canonical edge order, each in [0, 1]."""
    probs = np.abs(state) ** 2
    par = _parity_matrix(g)
    if par is not None:
        return probs @ par
    z = np.arange(1 << g.n, dtype=np.int64)
    out = np.empty(g.m)
    for j, (u, v) in enumerate(g.edges):
        out[j] = probs @ ((z >> u ^ z >> v) & 1)
    return out


def sample_bitstrings(state: np.ndarray, shots: int, seed) -> list[str]:
    """Draw ``shots`` i.i.d. basis states from |state|^2.

    Returns bitstrings where character k is qubit k's bit (same
    little-endian convention as the amplitudes).
    """
    n = int(np.log2(state.size))
    probs = np.abs(state) ** 2
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    draws = rng.choice(state.size, size=shots, p=probs)
    return [format(z, f"0{n}b")[::-1] for z in draws]


# ---------------------------------------------------------------------------
# raw state dumps (debugging aid)
# ---------------------------------------------------------------------------


def write_state_dump(path, state: np.ndarray):
    """Interleaved re/im float64, little-endian, amplitude order 0 .. 2^n - 1."""
    with open(path, "wb") as fh:
        fh.write(np.ascontiguousarray(state, dtype="<c16").tobytes())


def read_state_dump(path) -> np.ndarray:
    data = np.fromfile(path, dtype="<c16")
    if data.size == 0 or data.size & (data.size - 1):
        raise ValueError("state dump length is not a power of two")
    return data.astype(np.complex128)
