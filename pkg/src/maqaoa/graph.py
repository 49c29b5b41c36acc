"""Undirected simple graphs for MaxCut experiments.

Features
--------
- immutable ``Graph`` value type with canonical (sorted) edge lists
- edge-list text I/O ("u v" per line, ``#`` comments)
- generators: stars, triangle-free regular graphs (pairing model with
  rejection), Erdos-Renyi graphs with triangles stripped edge by edge
- exact MaxCut by exhaustive bipartition scan, plus a multi-restart
  local search for sizes past the exhaustive limit
- triangle counting per edge and per graph

Vertices are ``0 .. n-1``. Every edge is stored as ``(u, v)`` with
``u < v`` and the edge list is sorted, so equal graphs compare equal and
serialize identically.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

EXHAUSTIVE_LIMIT = 26  # 2^(n-1) bipartition scan stays in seconds up to here


class GraphParseError(ValueError):
    """Raised for malformed edge-list text; message names the bad line."""


class GenerationError(RuntimeError):
    """Raised when a random generator exhausts its retry budget."""


# ---------------------------------------------------------------------------
# graph type
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph with a canonical edge order."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("graph needs at least one vertex")
        seen = set()
        for u, v in self.edges:
            if not (0 <= u < v < self.n):
                raise ValueError(f"bad edge ({u}, {v}) for n={self.n}")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
        if tuple(sorted(self.edges)) != self.edges:
            raise ValueError("edges must be sorted lexicographically")

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def neighbors(self) -> tuple[frozenset, ...]:
        adj = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return tuple(frozenset(s) for s in adj)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.neighbors)

    @cached_property
    def edge_index(self) -> dict:
        return {e: i for i, e in enumerate(self.edges)}

    def degree(self, v: int) -> int:
        return self.degrees[v]

    def edge_array(self) -> np.ndarray:
        """Edges as an (m, 2) int array in canonical order."""
        return np.array(self.edges, dtype=np.int64).reshape(self.m, 2)


def make_graph(n: int, edges) -> Graph:
    """Build a Graph from any iterable of (u, v) pairs, canonicalizing order."""
    canon = sorted((min(u, v), max(u, v)) for u, v in edges)
    return Graph(n=n, edges=tuple(canon))


# ---------------------------------------------------------------------------
# edge-list text format
# ---------------------------------------------------------------------------


def parse_edge_list(text: str) -> Graph:
    """Parse "u v" lines into a Graph.

    Blank lines are skipped and ``#`` starts a comment (full-line or
    trailing). Vertex count is 1 + the largest label seen. Self-loops,
    duplicate edges and malformed lines raise GraphParseError naming the
    1-based line number.
    """
    edges = []
    seen = set()
    top = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphParseError(f"line {lineno}: expected 'u v', got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphParseError(f"line {lineno}: non-integer vertex in {raw!r}") from None
        if u < 0 or v < 0:
            raise GraphParseError(f"line {lineno}: negative vertex label in {raw!r}")
        if u == v:
            raise GraphParseError(f"line {lineno}: self-loop at vertex {u}")
        e = (min(u, v), max(u, v))
        if e in seen:
            raise GraphParseError(f"line {lineno}: duplicate edge {e}")
        seen.add(e)
        edges.append(e)
        top = max(top, v, u)
    if top < 0:
        raise GraphParseError("no edges found")
    return make_graph(top + 1, edges)


def write_edge_list(g: Graph) -> str:
    """Canonical text form: sorted "u v" lines, trailing newline."""
    return "".join(f"{u} {v}\n" for u, v in g.edges)


def graph_metadata(g: Graph, seed=None, generator=None) -> dict:
    """JSON-ready metadata block describing a graph."""
    return {
        "n": g.n,
        "m": g.m,
        "degrees": list(g.degrees),
        "triangle_count": triangle_count(g),
        "components": component_count(g),
        "seed": seed,
        "generator": generator,
    }


# ---------------------------------------------------------------------------
# constructions and generators
# ---------------------------------------------------------------------------


def star_graph(n: int) -> Graph:
    """Star S_n: vertex 0 is the hub, n-1 leaves. Needs n >= 2."""
    if n < 2:
        raise ValueError("star graph needs n >= 2")
    return Graph(n=n, edges=tuple((0, v) for v in range(1, n)))


def is_connected(g: Graph) -> bool:
    if g.n == 1:
        return True
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for v in g.neighbors[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == g.n


def component_count(g: Graph) -> int:
    """Number of connected components (isolated vertices count)."""
    seen = [False] * g.n
    parts = 0
    for root in range(g.n):
        if seen[root]:
            continue
        parts += 1
        seen[root] = True
        stack = [root]
        while stack:
            u = stack.pop()
            for v in g.neighbors[u]:
                if not seen[v]:
                    seen[v] = True
                    stack.append(v)
    return parts


def random_regular_triangle_free(n: int, degree: int, seed, max_tries: int = 10_000) -> Graph:
    """Uniform-ish random connected triangle-free ``degree``-regular graph.

    Pairing (configuration) model: shuffle n*degree stubs, pair them up,
    resample whenever the pairing produces a self-loop or parallel edge,
    a triangle, or a disconnected graph. All draws come from one
    ``np.random.default_rng(seed)`` stream, so results are reproducible
    byte for byte. Raises GenerationError once ``max_tries`` pairings
    are used up (e.g. n=4, degree=3: K4 is the only candidate and has
    triangles).
    """
    if n * degree % 2 != 0:
        raise ValueError("n * degree must be even")
    if degree >= n:
        raise ValueError("degree must be < n")
    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(n), degree)
    for _ in range(max_tries):
        rng.shuffle(stubs)
        a, b = stubs[0::2], stubs[1::2]
        if np.any(a == b):
            continue
        lo = np.minimum(a, b)
        hi = np.maximum(a, b)
        pairs = set(zip(lo.tolist(), hi.tolist()))
        if len(pairs) < len(lo):
            continue
        g = make_graph(n, pairs)
        if triangle_count(g) != 0:
            continue
        if not is_connected(g):
            continue
        return g
    raise GenerationError(
        f"no connected triangle-free {degree}-regular graph on {n} vertices "
        f"after {max_tries} pairings"
    )


def random_gnp_connected(n: int, p_edge: float, seed,
                         max_tries: int = 10_000) -> Graph:
    """Connected G(n, p) sample, triangles allowed.

    Each of the C(n, 2) edges is drawn independently in lexicographic
    pair order from one rng stream; disconnected draws are rejected and
    redrawn. Deterministic for a fixed seed.
    """
    if not 0.0 < p_edge <= 1.0:
        raise ValueError("p_edge must be in (0, 1]")
    rng = np.random.default_rng(seed)
    pairs = [(u, v) for u in range(n - 1) for v in range(u + 1, n)]
    for _ in range(max_tries):
        keep = rng.random(len(pairs)) < p_edge
        g = make_graph(n, (e for e, k in zip(pairs, keep) if k))
        if is_connected(g):
            return g
    raise GenerationError(
        f"no connected G({n}, {p_edge}) draw in {max_tries} tries"
    )


def random_gnp_triangle_stripped(n: int, p_edge: float, seed) -> Graph:
    """G(n, p) with triangles removed one edge at a time.

    Draws each of the C(n, 2) edges independently (lexicographic pair
    order, one rng stream), then repeatedly finds the lexicographically
    first remaining triangle (as a sorted vertex triple) and deletes one
    of its three edges uniformly at random. Connectivity is not
    enforced. Deterministic for a fixed seed.
    """
    if not 0.0 <= p_edge <= 1.0:
        raise ValueError("p_edge must be in [0, 1]")
    rng = np.random.default_rng(seed)
    pairs = [(u, v) for u in range(n - 1) for v in range(u + 1, n)]
    keep = rng.random(len(pairs)) < p_edge
    edges = {e for e, k in zip(pairs, keep) if k}
    while True:
        tri = _first_triangle(n, edges)
        if tri is None:
            break
        a, b, c = tri
        drop = ((a, b), (a, c), (b, c))[rng.integers(3)]
        edges.remove(drop)
    return make_graph(n, edges)


def _first_triangle(n: int, edges: set):
    """Lexicographically first triangle (a, b, c) with a < b < c, else None."""
    adj = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    for a in range(n):
        for b in sorted(w for w in adj[a] if w > a):
            common = adj[a] & adj[b]
            above = [c for c in common if c > b]
            if above:
                return (a, b, min(above))
    return None


# ---------------------------------------------------------------------------
# triangles
# ---------------------------------------------------------------------------


def triangles_through_edge(g: Graph, edge: tuple[int, int]) -> int:
    """Number of triangles containing ``edge`` (= common neighbors of its ends)."""
    u, v = min(edge), max(edge)
    if (u, v) not in g.edge_index:
        raise ValueError(f"({u}, {v}) is not an edge of the graph")
    return len(g.neighbors[u] & g.neighbors[v])


def triangle_count(g: Graph) -> int:
    """Total triangles in the graph."""
    total = sum(len(g.neighbors[u] & g.neighbors[v]) for u, v in g.edges)
    return total // 3


# ---------------------------------------------------------------------------
# MaxCut
# ---------------------------------------------------------------------------


def cut_value(g: Graph, assignment) -> int:
    """Cut size of a 0/1 vertex assignment (length-n sequence)."""
    a = np.asarray(assignment)
    e = g.edge_array()
    return int(np.count_nonzero(a[e[:, 0]] != a[e[:, 1]]))


def all_cut_values(g: Graph) -> np.ndarray:
    """Cut sizes for every basis assignment 0 .. 2^n - 1.

    Bit k of the index is vertex k's side. Used by the statevector
    backend as the diagonal of the cost operator; memory is 2^n int64.
    """
    z = np.arange(1 << g.n, dtype=np.int64)
    cuts = np.zeros(1 << g.n, dtype=np.int64)
    for u, v in g.edges:
        cuts += (z >> u ^ z >> v) & 1
    return cuts


def maxcut_bruteforce(g: Graph, limit: int = EXHAUSTIVE_LIMIT) -> int:
    """Exact MaxCut by scanning all 2^(n-1) bipartitions.

    Vertex n-1 is pinned to side 0 (complement symmetry halves the
    scan). Refuses graphs with n > limit; callers past the limit must
    supply a known C_max or use maxcut_local_search.
    """
    if g.n > limit:
        raise ValueError(f"n={g.n} exceeds exhaustive limit {limit}; supply C_max")
    if g.m == 0:
        return 0
    half = 1 << (g.n - 1)
    e = g.edge_array()
    best = 0
    chunk = 1 << 20
    for start in range(0, half, chunk):
        z = np.arange(start, min(start + chunk, half), dtype=np.int64)
        cuts = np.zeros(len(z), dtype=np.int32)
        for u, v in g.edges:
            cuts += ((z >> u ^ z >> v) & 1).astype(np.int32)
        best = max(best, int(cuts.max()))
    return best


def maxcut_local_search(g: Graph, seed=0, restarts: int = 400) -> int:
    """Multi-restart steepest-ascent MaxCut heuristic for n past the limit.

    Each restart: random bipartition, flip the best-gain vertex until no
    flip helps, with a random plateau kick when gains tie at zero. Not a
    certificate; on sparse graphs up to a few hundred vertices it finds
    the optimum with high probability (validated against brute force on
    random instances up to n=24).
    """
    rng = np.random.default_rng(seed)
    e = g.edge_array()
    u, v = e[:, 0], e[:, 1]
    best = 0
    for _ in range(restarts):
        side = rng.integers(0, 2, size=g.n)
        # gain[i]: cut change if vertex i flips = deg(i) - 2 * (cut edges at i)
        cut_edge = side[u] != side[v]
        gain = np.asarray(g.degrees, dtype=np.int64).copy()
        np.subtract.at(gain, u, 2 * cut_edge)
        np.subtract.at(gain, v, 2 * cut_edge)
        kicks = 0
        while True:
            i = int(np.argmax(gain))
            if gain[i] <= 0:
                if gain[i] == 0 and kicks < 2 * g.n:
                    zero = np.flatnonzero(gain == 0)
                    i = int(rng.choice(zero))
                    kicks += 1
                else:
                    break
            side[i] ^= 1
            # refresh gains around i
            for w in g.neighbors[i]:
                if side[w] != side[i]:
                    gain[w] -= 2
                    gain[i] -= 2
                else:
                    gain[w] += 2
                    gain[i] += 2
        best = max(best, int(np.count_nonzero(side[u] != side[v])))
    return best
