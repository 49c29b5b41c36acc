"""Multi-start BFGS angle optimization for plain and multi-angle QAOA.

The optimizer is a textbook BFGS ascent with an Armijo backtracking
line search (initial step 1, contraction 0.5, c1 = 1e-4). Each restart
draws gammas uniformly from [-pi, pi) and betas from [-pi/2, pi/2) and
stops when the gradient infinity-norm drops below ``grad_tol``, the
value change falls below ``value_tol``, or ``max_iterations`` is hit.
A restart whose objective or gradient goes non-finite is logged and
skipped, never fatal.

Backends:

- "analytic": closed forms; plain QAOA needs p=1 (any graph), the
  multi-angle ansatz needs p=1 and a triangle-free graph, where the
  exact gradient is available.
- "statevector": any graph, any p. Gradients are central finite
  differences. Restarts run in lockstep: the line-search candidates
  and difference stencils of every live restart are fused into single
  (2^n, B) simulator passes, which is what makes dense-backend
  multi-starts affordable.

Flat vector convention everywhere: betas first, then gammas
(layer-major within each block).
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from types import SimpleNamespace

import numpy as np

from .angles import (
    AngleAssignment,
    assignment_from_vector,
    count_zero_angles,
    shared_assignment,
)
from .analytic import _tf_workspace, qaoa1_total_expectation
from .graph import EXHAUSTIVE_LIMIT, Graph, maxcut_bruteforce
from .statevector import QUBIT_LIMIT, _cut_values, _parity_matrix

log = logging.getLogger(__name__)

ARMIJO_C1 = 1e-4
BACKTRACK = 0.5
MIN_STEP = 1e-14


class NonFiniteObjective(RuntimeError):
    """Objective or gradient produced NaN/inf during a restart."""


@dataclass
class OptimizerConfig:
    seeds: int = 50
    gradient: str = "auto"            # auto | analytic | fd
    fd_step: float = 1e-5
    grad_tol: float = 1e-6
    value_tol: float = 1e-10
    max_iterations: int = 500
    gamma_range: tuple = (-np.pi, np.pi)
    beta_range: tuple = (-np.pi / 2, np.pi / 2)
    zero_threshold: float = 1e-3
    keep_traces: bool = False


@dataclass
class OptimizationResult:
    ansatz: str
    p: int
    best_value: float
    best_angles: AngleAssignment
    c_max: int | None
    approximation_ratio: float | None
    zero_beta: int
    zero_gamma: int
    seeds: int
    best_seed: int
    iterations: int
    aborted: int
    seconds: float
    traces: list = field(default=None, repr=False)


# ---------------------------------------------------------------------------
# BFGS core
# ---------------------------------------------------------------------------


LS_CHUNK = 6  # backtracking candidates evaluated per batched pass


def _line_search(fun, fun_batch, x, d, f, slope):
    """Largest alpha in 1, 1/2, 1/4, ... meeting the Armijo test.

    With ``fun_batch`` the candidates are evaluated LS_CHUNK at a time
    in one backend pass; the candidate sequence and the acceptance rule
    are the same as the scalar loop, only cheaper on batched backends.
    Returns (alpha, f_new) or (None, None) when no step is acceptable.
    """
    alpha = 1.0
    while alpha >= MIN_STEP:
        if fun_batch is None:
            vals = [float(fun(x + alpha * d))]
        else:
            alphas = [alpha * BACKTRACK ** k for k in range(LS_CHUNK)]
            vals = fun_batch(np.stack([x + a * d for a in alphas], axis=1))
        for k, f_try in enumerate(np.atleast_1d(vals)):
            a = alpha * BACKTRACK ** k
            if not np.isfinite(f_try):
                raise NonFiniteObjective("objective not finite during line search")
            if f_try >= f + ARMIJO_C1 * a * slope:
                return a, float(f_try)
        alpha *= BACKTRACK ** (1 if fun_batch is None else LS_CHUNK)
    return None, None


def bfgs_maximize(fun, grad, x0, cfg: OptimizerConfig, fun_batch=None):
    """Maximize ``fun`` from ``x0``; returns (value, x, trace, iterations).

    ``trace`` holds the objective after the start point and every
    accepted step, so it is nondecreasing by the Armijo condition.
    """
    x = np.asarray(x0, dtype=float).copy()
    f = float(fun(x))
    if not np.isfinite(f):
        raise NonFiniteObjective("objective not finite at the start point")
    g = np.asarray(grad(x), dtype=float)
    if not np.all(np.isfinite(g)):
        raise NonFiniteObjective("gradient not finite at the start point")
    dim = x.size
    h_inv = np.eye(dim)
    trace = [f]
    iterations = 0
    for _ in range(cfg.max_iterations):
        if np.max(np.abs(g)) < cfg.grad_tol:
            break
        d = h_inv @ g
        if d @ g <= 0.0:          # curvature gone bad: restart from steepest ascent
            h_inv = np.eye(dim)
            d = g.copy()
        slope = d @ g
        alpha, f_new = _line_search(fun, fun_batch, x, d, f, slope)
        if alpha is None:
            break                  # no acceptable step left
        x_new = x + alpha * d
        g_new = np.asarray(grad(x_new), dtype=float)
        if not np.all(np.isfinite(g_new)):
            raise NonFiniteObjective("gradient not finite during line search")
        iterations += 1
        trace.append(f_new)
        s = x_new - x
        y = g - g_new              # ascent: y flips sign vs the minimization form
        done = abs(f_new - f) < cfg.value_tol
        x, f, g = x_new, f_new, g_new
        if done:
            break
        sy = s @ y
        if sy > 1e-12:
            rho = 1.0 / sy
            hy = h_inv @ y
            h_inv -= rho * (np.outer(s, hy) + np.outer(hy, s))
            h_inv += (rho * rho * (y @ hy) + rho) * np.outer(s, s)
    return f, x, np.array(trace), iterations


def _fd_gradient(fun, x, h):
    out = np.empty(x.size)
    for k in range(x.size):
        xp = x.copy()
        xp[k] += h
        xm = x.copy()
        xm[k] -= h
        out[k] = (fun(xp) - fun(xm)) / (2.0 * h)
    return out


def _batched_fd_grads(evaluate, xs, h):
    """Central-difference gradients at several points in one backend pass."""
    dim = xs[0].size
    width = 2 * dim
    cols = np.empty((dim, width * len(xs)))
    idx = np.arange(dim)
    for i, x in enumerate(xs):
        blk = cols[:, width * i:width * (i + 1)]
        blk[:] = x[:, None]
        blk[idx, 2 * idx] += h
        blk[idx, 2 * idx + 1] -= h
    vals = np.asarray(evaluate(cols))
    grads = []
    for i in range(len(xs)):
        v = vals[width * i:width * (i + 1)]
        grads.append((v[0::2] - v[1::2]) / (2.0 * h))
    return grads


def _lockstep_bfgs(evaluate, dim, starts, cfg: OptimizerConfig):
    """BFGS-ascend many restarts at once against a batched objective.

    Per restart the iterates, line-search decisions and stopping tests
    are exactly the ones bfgs_maximize makes with finite-difference
    gradients; lockstep only fuses the backend calls of all restarts
    that are still running, so the two paths agree to floating-point
    noise. Returns one (status, f, x, trace, iterations, message)
    tuple per start with status "done" or "aborted".
    """
    group = max(1, 128 // (2 * dim))   # keep batch widths cache-sized
    out = []
    for lo in range(0, len(starts), group):
        out.extend(_lockstep_group(evaluate, dim, starts[lo:lo + group], cfg))
    return out


def _lockstep_group(evaluate, dim, starts, cfg: OptimizerConfig):
    h = cfg.fd_step
    rs = [
        SimpleNamespace(x=np.asarray(x0, dtype=float).copy(), f=None, g=None,
                        hinv=np.eye(dim), trace=None, iters=0, status=None,
                        msg=None, d=None, slope=0.0, alpha=1.0, step=None)
        for x0 in starts
    ]
    f0 = np.asarray(evaluate(np.stack([r.x for r in rs], axis=1)))
    for r, f in zip(rs, f0):
        if np.isfinite(f):
            r.f = float(f)
            r.trace = [r.f]
        else:
            r.status, r.msg = "aborted", "objective not finite at the start point"
    live = [r for r in rs if r.status is None]
    if live:
        for r, g0 in zip(live, _batched_fd_grads(evaluate, [r.x for r in live], h)):
            if np.all(np.isfinite(g0)):
                r.g = g0
            else:
                r.status, r.msg = "aborted", "gradient not finite at the start point"
    while True:
        stepping = []
        for r in rs:
            if r.status is not None:
                continue
            if r.iters >= cfg.max_iterations or np.max(np.abs(r.g)) < cfg.grad_tol:
                r.status = "done"
                continue
            d = r.hinv @ r.g
            if d @ r.g <= 0.0:        # curvature gone bad: steepest ascent
                r.hinv = np.eye(dim)
                d = r.g.copy()
            r.d, r.slope, r.alpha, r.step = d, d @ r.g, 1.0, None
            stepping.append(r)
        if not stepping:
            break
        pending = stepping
        while pending:
            cols = np.empty((dim, LS_CHUNK * len(pending)))
            for j, r in enumerate(pending):
                alphas = r.alpha * BACKTRACK ** np.arange(LS_CHUNK)
                cols[:, LS_CHUNK * j:LS_CHUNK * (j + 1)] = r.x[:, None] + alphas * r.d[:, None]
            vals = np.asarray(evaluate(cols))
            retry = []
            for j, r in enumerate(pending):
                cand = vals[LS_CHUNK * j:LS_CHUNK * (j + 1)]
                for k, f_try in enumerate(cand):
                    a = r.alpha * BACKTRACK ** k
                    if not np.isfinite(f_try):
                        r.status, r.msg = "aborted", "objective not finite during line search"
                        break
                    if f_try >= r.f + ARMIJO_C1 * a * r.slope:
                        r.step = (a, float(f_try))
                        break
                if r.status is None and r.step is None:
                    r.alpha *= BACKTRACK ** LS_CHUNK
                    if r.alpha >= MIN_STEP:
                        retry.append(r)
                    else:
                        r.status = "done"      # no acceptable step left
            pending = retry
        movers = [r for r in stepping if r.status is None and r.step is not None]
        if not movers:
            continue
        xs_new = [r.x + r.step[0] * r.d for r in movers]
        for r, x_new, g_new in zip(movers, xs_new,
                                   _batched_fd_grads(evaluate, xs_new, h)):
            if not np.all(np.isfinite(g_new)):
                r.status, r.msg = "aborted", "gradient not finite during line search"
                continue
            f_new = r.step[1]
            r.iters += 1
            r.trace.append(f_new)
            s = x_new - r.x
            y = r.g - g_new
            done = abs(f_new - r.f) < cfg.value_tol
            r.x, r.f, r.g = x_new, f_new, g_new
            if done:
                r.status = "done"
                continue
            sy = s @ y
            if sy > 1e-12:
                rho = 1.0 / sy
                hy = r.hinv @ y
                r.hinv -= rho * (np.outer(s, hy) + np.outer(hy, s))
                r.hinv += (rho * rho * (y @ hy) + rho) * np.outer(s, s)
    return [
        (r.status, r.f, r.x, None if r.trace is None else np.array(r.trace),
         r.iters, r.msg)
        for r in rs
    ]


# ---------------------------------------------------------------------------
# backend objective factories
# ---------------------------------------------------------------------------


def _sv_batch_evaluator(g: Graph, p: int, multi_angle: bool):
    """Batched statevector <C>: takes a (dim, B) matrix of flat vectors.

    Simulating every requested circuit as one column of a (2^n, B)
    array amortizes dispatch overhead across difference stencils,
    line-search candidates and lockstep restarts alike. Shared-gamma
    cost layers exploit that cut values are integers: exp(-i*gamma*c)
    is a power table gathered by cut count, far cheaper than a dense
    complex exponential. The mixer applies each qubit as a gather of
    the bit-flipped amplitudes, which stays contiguous at any qubit
    index (the index tables get large, so big n falls back to slicing).
    """
    if g.n > QUBIT_LIMIT:
        raise ValueError(f"n={g.n} exceeds the statevector limit {QUBIT_LIMIT}")
    n, m = g.n, g.m
    size = 1 << n
    cuts_i = _cut_values(g)
    cuts = cuts_i.astype(float)
    par = None
    if multi_angle:
        par = _parity_matrix(g)
        if par is None:
            z = np.arange(size, dtype=np.int64)
            par = np.empty((size, m))
            for j, (u, v) in enumerate(g.edges):
                par[:, j] = (z >> u ^ z >> v) & 1
    flips = [np.arange(size) ^ (1 << k) for k in range(n)] if n <= 16 else None
    nb = p * n if multi_angle else p
    ng = p * m if multi_angle else p

    def evaluate(vecs: np.ndarray) -> np.ndarray:
        vecs = np.atleast_2d(np.asarray(vecs, dtype=float))
        if vecs.shape[0] != nb + ng:
            vecs = vecs.T
        bsz = vecs.shape[1]
        betas = vecs[:nb].reshape(p, -1, bsz)
        gammas = vecs[nb:].reshape(p, -1, bsz)
        cb = np.cos(betas)
        sb = np.sin(betas)
        state = np.full((size, bsz), 2.0 ** (-n / 2.0), dtype=np.complex128)
        for layer in range(p):
            if multi_angle:
                phase = par @ gammas[layer]
                state *= np.cos(phase) - 1j * np.sin(phase)
            else:
                tab = np.empty((m + 1, bsz), dtype=np.complex128)
                tab[0] = 1.0
                tab[1:] = np.exp(-1j * gammas[layer][0])
                np.cumprod(tab, axis=0, out=tab)
                state *= tab[cuts_i]
            for k in range(n):
                c = cb[layer, k if multi_angle else 0]
                w = -1j * sb[layer, k if multi_angle else 0]
                if flips is not None:
                    tmp = state[flips[k]]
                    tmp *= w
                    state *= c
                    state += tmp
                else:
                    v = state.reshape(-1, 2, 1 << k, bsz)
                    a0 = v[:, 0].copy()
                    v[:, 0] *= c
                    v[:, 0] += w * v[:, 1]
                    v[:, 1] *= c
                    v[:, 1] += w * a0
        pr = np.abs(state)
        np.square(pr, out=pr)
        return cuts @ pr

    return evaluate


def _make_objective(g: Graph, p: int, ansatz: str, backend: str, cfg: OptimizerConfig):
    """Returns (fun, grad, fun_batch, dim) over flat [betas, gammas] vectors."""
    if backend == "analytic":
        if p != 1:
            raise ValueError("analytic backend covers p=1 only")
        if ansatz == "ma":
            ws = _tf_workspace(g)   # raises on triangles
            n = g.n

            def fun(x):
                return ws.total(x[:n], x[n:])

            if cfg.gradient == "fd":
                def grad(x):
                    return _fd_gradient(fun, x, cfg.fd_step)
            else:
                def grad(x):
                    return ws.gradient(x[:n], x[n:])
            return fun, grad, None, n + g.m

        def fun(x):
            return qaoa1_total_expectation(g, x[1], x[0])

        def grad(x):
            return _fd_gradient(fun, x, cfg.fd_step)
        return fun, grad, None, 2

    if backend == "statevector":
        if cfg.gradient == "analytic":
            raise ValueError("statevector backend has no analytic gradient; use fd")
        evaluate = _sv_batch_evaluator(g, p, multi_angle=(ansatz == "ma"))
        dim = p * (g.n + g.m) if ansatz == "ma" else 2 * p
        h = cfg.fd_step

        def fun(x):
            return float(evaluate(x[:, None])[0])

        def grad(x):
            cols = np.repeat(x[:, None], 2 * x.size, axis=1)
            idx = np.arange(x.size)
            cols[idx, 2 * idx] += h
            cols[idx, 2 * idx + 1] -= h
            vals = evaluate(cols)
            return (vals[0::2] - vals[1::2]) / (2.0 * h)
        return fun, grad, evaluate, dim

    raise ValueError(f"unknown backend {backend!r}")


# ---------------------------------------------------------------------------
# multi-start drivers
# ---------------------------------------------------------------------------


def _resolve_cmax(g: Graph, c_max):
    if c_max is not None:
        return int(c_max)
    if g.n <= EXHAUSTIVE_LIMIT:
        return maxcut_bruteforce(g)
    raise ValueError(
        f"n={g.n} exceeds the exhaustive MaxCut limit; pass c_max "
        "(e.g. from maxcut_local_search)"
    )


def _multistart(g, p, ansatz, backend, cfg, c_max, seed, warm_starts):
    fun, grad, fun_batch, dim = _make_objective(g, p, ansatz, backend, cfg)
    rng = np.random.default_rng(seed)
    nb = dim - (p * g.m if ansatz == "ma" else p)
    start_time = time.perf_counter()
    best_f, best_x, best_seed = -np.inf, None, -1
    traces = [] if cfg.keep_traces else None
    total_iters = 0
    aborted = 0
    starts = []
    for _ in range(cfg.seeds):
        x0 = np.empty(dim)
        x0[:nb] = rng.uniform(*cfg.beta_range, size=nb)
        x0[nb:] = rng.uniform(*cfg.gamma_range, size=dim - nb)
        starts.append(x0)
    for extra in warm_starts:
        extra = np.asarray(extra, dtype=float)
        if extra.size != dim:
            raise ValueError(f"warm start has {extra.size} components, expected {dim}")
        starts.append(extra)
    if fun_batch is not None:
        records = _lockstep_bfgs(fun_batch, dim, starts, cfg)
        for idx, (status, f, x, trace, iters, msg) in enumerate(records):
            if status == "aborted":
                aborted += 1
                log.warning("restart %d aborted: %s", idx, msg)
                continue
            total_iters += iters
            if traces is not None:
                traces.append(trace)
            if f > best_f:
                best_f, best_x, best_seed = f, x, idx
    else:
        for idx, x0 in enumerate(starts):
            try:
                f, x, trace, iters = bfgs_maximize(fun, grad, x0, cfg)
            except NonFiniteObjective as err:
                aborted += 1
                log.warning("restart %d aborted: %s", idx, err)
                continue
            total_iters += iters
            if traces is not None:
                traces.append(trace)
            if f > best_f:
                best_f, best_x, best_seed = f, x, idx
    if best_x is None:
        raise RuntimeError("every restart aborted with a non-finite objective")
    seconds = time.perf_counter() - start_time
    cmax = _resolve_cmax(g, c_max)
    if ansatz == "ma":
        angles = assignment_from_vector(g, p, best_x)
    else:
        angles = shared_assignment(g, best_x[p:], best_x[:p])
    zb, zg = count_zero_angles(angles, cfg.zero_threshold)
    return OptimizationResult(
        ansatz=ansatz,
        p=p,
        best_value=float(best_f),
        best_angles=angles,
        c_max=cmax,
        approximation_ratio=float(best_f) / cmax if cmax > 0 else None,
        zero_beta=zb,
        zero_gamma=zg,
        seeds=cfg.seeds,
        best_seed=best_seed,
        iterations=total_iters,
        aborted=aborted,
        seconds=seconds,
        traces=traces,
    )


def optimize_qaoa(g: Graph, p: int, cfg: OptimizerConfig = None,
                  backend: str = "statevector", c_max=None, seed=0,
                  warm_starts=()) -> OptimizationResult:
    """Best-of-multistart plain p-layer QAOA angles for one graph."""
    if p < 1:
        raise ValueError("p must be >= 1")
    cfg = cfg or OptimizerConfig()
    return _multistart(g, p, "qaoa", backend, cfg, c_max, seed, warm_starts)


def optimize_ma_qaoa(g: Graph, cfg: OptimizerConfig = None,
                     backend: str = "analytic", p: int = 1, c_max=None,
                     seed=0, warm_starts=()) -> OptimizationResult:
    """Best-of-multistart multi-angle QAOA angles for one graph.

    The analytic backend (default) is exact for triangle-free graphs at
    p=1 and uses the closed-form gradient; pass backend="statevector"
    for anything else.
    """
    cfg = cfg or OptimizerConfig()
    return _multistart(g, p, "ma", backend, cfg, c_max, seed, warm_starts)


def warm_start_from_qaoa(result: OptimizationResult, g: Graph) -> np.ndarray:
    """Broadcast a plain-QAOA result to a multi-angle start vector.

    Every vertex inherits the layer's beta and every edge the layer's
    gamma, so the multi-angle search starts exactly at the plain-QAOA
    optimum and can only improve on it.
    """
    if result.ansatz != "qaoa":
        raise ValueError("warm start needs a plain-QAOA result")
    return result.best_angles.to_vector()


def pad_layers(result: OptimizationResult, p_new: int) -> np.ndarray:
    """Extend a plain-QAOA result with identity layers (angles 0).

    The padded vector evaluates to exactly the old objective value, so
    feeding it to optimize_qaoa(..., warm_starts=[...]) makes the deeper
    search start no worse than the shallower optimum.
    """
    if result.ansatz != "qaoa":
        raise ValueError("layer padding needs a plain-QAOA result")
    if p_new < result.p:
        raise ValueError("p_new must be >= the result's p")
    betas = [result.best_angles.beta[l][0] for l in range(result.p)]
    gammas = [result.best_angles.gamma[l][0] for l in range(result.p)]
    pad = [0.0] * (p_new - result.p)
    return np.array(betas + pad + gammas + pad)
