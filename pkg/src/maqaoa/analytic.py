"""Closed-form MaxCut expectation values for depth-1 circuits.

Two families of formulas, both exact:

- multi-angle ansatz on triangle-free graphs: each edge (u, v) contributes

    1/2 + (1/2) sin(g_uv) [ cos(2b_v) sin(2b_u) prod_{w in N(u)\\v} cos(g_uw)
                          + cos(2b_u) sin(2b_v) prod_{x in N(v)\\u} cos(g_vx) ]

  with one gamma per edge and one beta per vertex; empty neighbor
  products are 1 (leaf endpoints).

- plain one-layer QAOA on any graph (shared gamma, beta):

    1/2 + (1/4) sin(4b) sin(g) (cos^d g + cos^e g)
        - (1/4) sin^2(2b) cos^(d+e-2f)(g) (1 - cos^f(2g))

  where d = deg(u) - 1, e = deg(v) - 1 and f counts triangles through
  the edge. The exponent d + e - 2f is verified against the dense
  statevector backend to 1e-10 in the test suite.

The multi-angle gradient is assembled the same way its cost is usually
accounted: a dense (n + m) x m matrix of per-edge-term partial
derivatives, summed over edges, so one gradient call evaluates exactly
(n + m) * m terms. A module counter tracks that count for the scaling
tests.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.optimize import minimize_scalar

from .angles import AngleAssignment
from .graph import Graph, triangle_count, triangles_through_edge

# running total of per-edge-term derivatives evaluated by ma_gradient_tf
_GRADIENT_TERMS = 0


def reset_gradient_terms():
    global _GRADIENT_TERMS
    _GRADIENT_TERMS = 0


def gradient_terms() -> int:
    return _GRADIENT_TERMS


# ---------------------------------------------------------------------------
# triangle-free multi-angle workspace
# ---------------------------------------------------------------------------


class _TFWorkspace:
    """Precomputed index arrays for one triangle-free graph.

    Keeps the per-evaluation work to a fixed handful of vectorized
    passes: padded incidence (vertex -> incident edge ids, pad = m),
    each edge's slot inside both endpoints' rows, and one-hot
    vertex-by-edge masks for the dense beta-derivative matrix.
    """

    def __init__(self, g: Graph):
        if triangle_count(g) != 0:
            raise ValueError("closed form requires a triangle-free graph")
        self.g = g
        n, m = g.n, g.m
        e = g.edge_array()
        self.eu, self.ev = e[:, 0], e[:, 1]
        dmax = max(g.degrees) if n else 0
        inc = np.full((n, dmax), m, dtype=np.int64)
        fill = [0] * n
        slot_u = np.empty(m, dtype=np.int64)
        slot_v = np.empty(m, dtype=np.int64)
        for j, (u, v) in enumerate(g.edges):
            inc[u, fill[u]] = j
            slot_u[j] = fill[u]
            fill[u] += 1
            inc[v, fill[v]] = j
            slot_v[j] = fill[v]
            fill[v] += 1
        self.inc = inc
        self.slot_u, self.slot_v = slot_u, slot_v
        cols = np.arange(m)
        self.is_u = np.zeros((n, m))
        self.is_u[self.eu, cols] = 1.0
        self.is_v = np.zeros((n, m))
        self.is_v[self.ev, cols] = 1.0

    def _products(self, gamma):
        """cos/sin tables plus each endpoint's leave-one-out cos product."""
        cg = np.append(np.cos(gamma), 1.0)  # slot m is the padding entry
        sg = np.append(np.sin(gamma), 0.0)
        rows = cg[self.inc]
        pre = np.cumprod(rows, axis=1)
        suf = np.cumprod(rows[:, ::-1], axis=1)[:, ::-1]
        loo = np.ones_like(rows)
        loo[:, 1:] *= pre[:, :-1]
        loo[:, :-1] *= suf[:, 1:]
        p_u = loo[self.eu, self.slot_u]
        p_v = loo[self.ev, self.slot_v]
        return cg, sg, loo, p_u, p_v

    def edge_values(self, beta, gamma):
        """Per-edge <C_uv> for one layer of per-edge/per-vertex angles."""
        _, sg, _, p_u, p_v = self._products(gamma)
        c2b, s2b = np.cos(2.0 * beta), np.sin(2.0 * beta)
        a = c2b[self.ev] * s2b[self.eu] * p_u
        b = c2b[self.eu] * s2b[self.ev] * p_v
        return 0.5 + 0.5 * sg[:-1] * (a + b)

    def total(self, beta, gamma) -> float:
        return float(self.edge_values(beta, gamma).sum())

    def gradient(self, beta, gamma) -> np.ndarray:
        """d<C>/d[beta, gamma] via the dense (n + m) x m term matrix."""
        global _GRADIENT_TERMS
        g = self.g
        n, m = g.n, g.m
        cg, sg, loo, p_u, p_v = self._products(gamma)
        c2b, s2b = np.cos(2.0 * beta), np.sin(2.0 * beta)
        cu, su = c2b[self.eu], s2b[self.eu]
        cv, sv = c2b[self.ev], s2b[self.ev]
        se = sg[:-1]

        # beta block: edge e responds only to its endpoints' betas
        x_u = se * (cv * cu * p_u - su * sv * p_v)  # d<C_e>/d beta_u
        x_v = se * (cu * cv * p_v - sv * su * p_u)  # d<C_e>/d beta_v
        d_beta = self.is_u * x_u + self.is_v * x_v
        grad_b = d_beta.sum(axis=1)

        # gamma block: diagonal from the sin factor, off-diagonal through
        # the neighbor cos products (remove one cos factor, swap in -sin)
        d_gamma = np.zeros((m + 1, m))
        cols = np.arange(m)
        d_gamma[cols, cols] = 0.5 * cg[:-1] * (cv * su * p_u + cu * sv * p_v)
        for rows_of, coef, p in (
            (self.inc[self.eu], 0.5 * se * cv * su, p_u),
            (self.inc[self.ev], 0.5 * se * cu * sv, p_v),
        ):
            cosg = cg[rows_of]
            with np.errstate(divide="ignore", invalid="ignore"):
                strip = p[:, None] / cosg
            bad = ~np.isfinite(strip)
            if bad.any():
                strip[bad] = self._strip_exact(rows_of, bad, cg)
            contrib = coef[:, None] * (-sg[rows_of]) * strip
            valid = (rows_of != m) & (rows_of != cols[:, None])
            np.add.at(d_gamma, (np.where(valid, rows_of, m), cols[:, None]), np.where(valid, contrib, 0.0))
        grad_g = d_gamma[:m].sum(axis=1)

        _GRADIENT_TERMS += (n + m) * m
        return np.concatenate([grad_b, grad_g])

    def _strip_exact(self, rows_of, bad, cg):
        """Slow path: recompute a leave-two-out product where a cos is 0."""
        es, slots = np.nonzero(bad)
        vals = np.empty(len(es))
        for k, (e_idx, slot) in enumerate(zip(es, slots)):
            row = rows_of[e_idx]
            keep = [cg[r] for t, r in enumerate(row)
                    if t != slot and r != self.g.m and r != e_idx]
            vals[k] = float(np.prod(keep)) if keep else 1.0
        return vals


@lru_cache(maxsize=32)
def _tf_workspace(g: Graph) -> _TFWorkspace:
    return _TFWorkspace(g)


def _one_layer(a: AngleAssignment):
    if a.p != 1:
        raise ValueError("closed forms cover exactly one layer (p=1)")
    return a.beta[0], a.gamma[0]


def ma_edge_expectation_tf(g: Graph, a: AngleAssignment, edge) -> float:
    """Exact <C_uv> for one edge under the p=1 multi-angle ansatz."""
    beta, gamma = _one_layer(a)
    u, v = min(edge), max(edge)
    j = g.edge_index.get((u, v))
    if j is None:
        raise ValueError(f"({u}, {v}) is not an edge of the graph")
    return float(_tf_workspace(g).edge_values(beta, gamma)[j])


def ma_total_expectation_tf(g: Graph, a: AngleAssignment) -> float:
    """Exact <C> = sum of edge expectations; triangle-free graphs, p=1."""
    beta, gamma = _one_layer(a)
    return _tf_workspace(g).total(beta, gamma)


def ma_gradient_tf(g: Graph, a: AngleAssignment) -> np.ndarray:
    """Exact gradient of <C>, ordered [beta by vertex, gamma by edge]."""
    beta, gamma = _one_layer(a)
    return _tf_workspace(g).gradient(beta, gamma)


# ---------------------------------------------------------------------------
# plain one-layer QAOA, any graph
# ---------------------------------------------------------------------------


@lru_cache(maxsize=32)
def _edge_triangle_data(g: Graph):
    e = g.edge_array()
    deg = np.asarray(g.degrees, dtype=np.int64)
    tri = np.array([triangles_through_edge(g, tuple(edge)) for edge in g.edges],
                   dtype=np.int64)
    return e, deg, tri


def qaoa1_edge_expectations(g: Graph, gamma: float, beta: float) -> np.ndarray:
    """Per-edge <C_uv> for one-layer plain QAOA with shared angles."""
    e, deg, tri = _edge_triangle_data(g)
    d = deg[e[:, 0]] - 1
    ee = deg[e[:, 1]] - 1
    cg = np.cos(gamma)
    first = 0.25 * np.sin(4.0 * beta) * np.sin(gamma) * (cg ** d + cg ** ee)
    second = 0.25 * np.sin(2.0 * beta) ** 2 * cg ** (d + ee - 2 * tri) \
        * (1.0 - np.cos(2.0 * gamma) ** tri)
    return 0.5 + first - second


def qaoa1_edge_expectation(g: Graph, gamma: float, beta: float, edge) -> float:
    u, v = min(edge), max(edge)
    j = g.edge_index.get((u, v))
    if j is None:
        raise ValueError(f"({u}, {v}) is not an edge of the graph")
    return float(qaoa1_edge_expectations(g, gamma, beta)[j])


def qaoa1_total_expectation(g: Graph, gamma: float, beta: float) -> float:
    """<C> for one-layer plain QAOA on any graph (triangles included)."""
    return float(qaoa1_edge_expectations(g, gamma, beta).sum())


# ---------------------------------------------------------------------------
# stars
# ---------------------------------------------------------------------------


def star_qaoa1_limit(n: int) -> float:
    """Best per-edge <C> of one-layer plain QAOA on the star S_n.

    At the optimal beta = pi/8 the per-edge value is
    1/2 + (1/4) sin(g) (1 + cos^(n-2) g); maximized over g in [0, pi] by
    a 1024-point grid scan refined with golden-section. Decreases toward
    3/4 as n grows (S_2 = K2 gives exactly 1).
    """
    if n < 2:
        raise ValueError("star graph needs n >= 2")

    def h(gamma):
        return 0.5 + 0.25 * np.sin(gamma) * (1.0 + np.cos(gamma) ** (n - 2))

    grid = np.linspace(0.0, np.pi, 1024)
    vals = h(grid)
    i = int(np.clip(np.argmax(vals), 1, len(grid) - 2))
    try:
        res = minimize_scalar(lambda x: -h(x),
                              bracket=(grid[i - 1], grid[i], grid[i + 1]),
                              method="golden")
    except ValueError:
        # grid neighbors can tie exactly when h is symmetric about pi/2
        # (even n-2); golden needs a strict bracket, bounded does not
        res = minimize_scalar(lambda x: -h(x),
                              bounds=(grid[i - 1], grid[i + 1]),
                              method="bounded",
                              options={"xatol": 1e-12})
    return float(max(h(res.x), vals[i]))
