"""Exact fractional vertex covers, matchings, and edge covers.

Every optimum here is attained at a half-integral point, so the solvers
enumerate weight vectors over {0, 1/2, 1} exactly (stored doubled as int8
numpy tables) instead of running a floating-point LP. All reported values
and witnesses are exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import CapExceededError, PreconditionError
from .graphs import Edge, Graph

DEFAULT_COVER_CAP = 12     # vertices; 3^12 candidate covers
DEFAULT_MATCHING_CAP = 13  # edges; 3^13 candidate edge weightings

HALF = Fraction(1, 2)


@lru_cache(maxsize=16)
def _ternary_table(m: int) -> np.ndarray:
    """All vectors in {0,1,2}^m as rows, lexicographic order, int8."""
    idx = np.arange(3 ** m, dtype=np.int64)
    out = np.empty((3 ** m, m), dtype=np.int8)
    for j in range(m):
        out[:, j] = (idx // 3 ** (m - 1 - j)) % 3
    return out


def _doubled_to_fraction(x: int) -> Fraction:
    return Fraction(int(x), 2)


@dataclass(frozen=True)
class HalfIntCover:
    """Fractional vertex cover with weights in {0, 1/2, 1}."""

    weights: dict[int, Fraction]
    total: Fraction

    def ones(self) -> frozenset[int]:
        return frozenset(v for v, c in self.weights.items() if c == 1)

    def to_jsonable(self) -> dict:
        return {"vertex_weights": {str(v): str(c) for v, c in sorted(self.weights.items())},
                "total": str(self.total)}


@dataclass(frozen=True)
class EdgeWeightVector:
    """Nonnegative edge weights tagged with the constraint system they satisfy."""

    role: str  # "matching" | "edge-cover" | "perfect-matching"
    weights: dict[Edge, Fraction]
    total: Fraction

    def vertex_sums(self) -> dict[int, Fraction]:
        sums: dict[int, Fraction] = {}
        for (u, v), w in self.weights.items():
            sums[u] = sums.get(u, Fraction(0)) + w
            sums[v] = sums.get(v, Fraction(0)) + w
        return sums

    def validate(self) -> None:
        if any(w < 0 for w in self.weights.values()):
            raise PreconditionError("negative edge weight")
        sums = self.vertex_sums()
        if self.role == "matching" and any(s > 1 for s in sums.values()):
            raise PreconditionError("matching constraint violated")
        if self.role == "edge-cover" and any(s < 1 for s in sums.values()):
            raise PreconditionError("edge-cover constraint violated")
        if self.role == "perfect-matching" and any(s != 1 for s in sums.values()):
            raise PreconditionError("perfect-matching constraint violated")
        if self.total != sum(self.weights.values(), Fraction(0)):
            raise PreconditionError("stated total does not match the weights")

    def to_jsonable(self) -> dict:
        return {"role": self.role,
                "edge_weights": {f"{u}-{v}": str(w) for (u, v), w in sorted(self.weights.items())},
                "total": str(self.total)}


def _edge_vector(g: Graph, row: np.ndarray, role: str) -> EdgeWeightVector:
    es = g.sorted_edges()
    weights = {e: _doubled_to_fraction(row[i]) for i, e in enumerate(es)}
    total = sum(weights.values(), Fraction(0))
    vec = EdgeWeightVector(role, weights, total)
    vec.validate()
    return vec


# ---------------------------------------------------------------------------
# Vertex covers
# ---------------------------------------------------------------------------

def _cover_candidates(g: Graph, cap: int) -> tuple[np.ndarray, np.ndarray]:
    """(rows of doubled weights for the minimum covers, doubled optimum)."""
    v = g.n_vertices
    if v > cap:
        raise CapExceededError(f"{v} vertices exceeds cover cap {cap}")
    if v == 0:
        return np.zeros((1, 0), dtype=np.int8), np.int16(0)
    table = _ternary_table(v)
    index = {vid: i for i, vid in enumerate(g.vertices)}
    feasible = np.ones(len(table), dtype=bool)
    for u, w in g.edges:
        feasible &= table[:, index[u]] + table[:, index[w]] >= 2
    totals = table.sum(axis=1, dtype=np.int16)
    best = int(totals[feasible].min())
    rows = table[feasible & (totals == best)]
    return rows, best


@lru_cache(maxsize=4096)
def _cover_cached(edges: frozenset[Edge], cap: int):
    g = Graph(edges)
    rows, best = _cover_candidates(g, cap)
    return g.vertices, rows, best


def frac_vertex_cover_number(g: Graph, cap: int = DEFAULT_COVER_CAP) -> tuple[Fraction, HalfIntCover]:
    """Exact minimum fractional vertex cover value with a half-integral witness."""
    vertices, rows, best = _cover_cached(g.edges, cap)
    witness = HalfIntCover({v: _doubled_to_fraction(rows[0][i]) for i, v in enumerate(vertices)},
                           _doubled_to_fraction(best))
    return _doubled_to_fraction(best), witness


def cover_number(g: Graph, cap: int = DEFAULT_COVER_CAP) -> Fraction:
    _, _, best = _cover_cached(g.edges, cap)
    return _doubled_to_fraction(best)


def minimum_covers(g: Graph, cap: int = DEFAULT_COVER_CAP) -> list[HalfIntCover]:
    """All half-integral minimum covers (the vertices of the optimal face)."""
    vertices, rows, best = _cover_cached(g.edges, cap)
    total = _doubled_to_fraction(best)
    return [HalfIntCover({v: _doubled_to_fraction(r[i]) for i, v in enumerate(vertices)}, total)
            for r in rows]


def valid_subsets(g: Graph, cap: int = DEFAULT_COVER_CAP) -> frozenset[frozenset[int]]:
    """Vertex sets carried with weight 1 by some half-integral minimum cover."""
    return frozenset(c.ones() for c in minimum_covers(g, cap))


# ---------------------------------------------------------------------------
# Matchings and edge covers
# ---------------------------------------------------------------------------

def _matching_tableau(g: Graph, cap: int):
    """Shared enumeration state: (sorted edges, table, feasibility, totals)."""
    e = g.n_edges
    if e > cap:
        raise CapExceededError(f"{e} edges exceeds matching cap {cap}")
    es = g.sorted_edges()
    table = _ternary_table(e) if e else np.zeros((1, 0), dtype=np.int8)
    index = {vid: i for i, vid in enumerate(g.vertices)}
    incidence = np.zeros((e, g.n_vertices), dtype=np.int16)
    for i, (u, w) in enumerate(es):
        incidence[i, index[u]] = 1
        incidence[i, index[w]] = 1
    sums = table @ incidence  # doubled per-vertex sums
    totals = table.sum(axis=1, dtype=np.int16)
    return es, table, sums, totals


def max_frac_matching(g: Graph, cap: int = DEFAULT_MATCHING_CAP) -> tuple[Fraction, EdgeWeightVector]:
    """Exact maximum fractional matching value with a half-integral witness."""
    es, table, sums, totals = _matching_tableau(g, cap)
    feasible = (sums <= 2).all(axis=1)
    best = int(totals[feasible].max()) if g.n_edges else 0
    row = table[feasible & (totals == best)][0] if g.n_edges else np.zeros(0, dtype=np.int8)
    return _doubled_to_fraction(best), _edge_vector(g, row, "matching")


def enumerate_max_matchings(g: Graph, cap: int = DEFAULT_MATCHING_CAP) -> list[EdgeWeightVector]:
    """All half-integral maximum fractional matchings, lexicographic order."""
    es, table, sums, totals = _matching_tableau(g, cap)
    feasible = (sums <= 2).all(axis=1)
    best = int(totals[feasible].max()) if g.n_edges else 0
    rows = table[feasible & (totals == best)] if g.n_edges else np.zeros((1, 0), dtype=np.int8)
    return [_edge_vector(g, r, "matching") for r in rows]


def min_frac_edge_cover(g: Graph, cap: int = DEFAULT_MATCHING_CAP) -> tuple[Fraction, EdgeWeightVector]:
    """Exact minimum fractional edge cover, computed by direct enumeration.

    Deliberately independent of the v - c identity so the two sides can be
    cross-checked; raises when the graph is empty but has declared vertices
    (cannot happen here: graphs carry no isolated vertices) or has no edges
    while vertices remain.
    """
    if g.is_empty:
        if g.n_vertices:
            raise PreconditionError("isolated vertices cannot be edge-covered")
        zero = Fraction(0)
        return zero, EdgeWeightVector("edge-cover", {}, zero)
    es, table, sums, totals = _matching_tableau(g, cap)
    feasible = (sums >= 2).all(axis=1)
    best = int(totals[feasible].min())
    row = table[feasible & (totals == best)][0]
    return _doubled_to_fraction(best), _edge_vector(g, row, "edge-cover")


def bad_edges(g: Graph, cap: int = DEFAULT_MATCHING_CAP) -> frozenset[Edge]:
    """Edges carrying weight 1 in every maximum fractional matching.

    An edge e0 is bad iff capping w_{e0} at 1/2 strictly drops the optimum:
    half-integrality of the optimal face makes this equivalent to the
    universally-quantified definition.
    """
    if g.is_empty:
        return frozenset()
    es, table, sums, totals = _matching_tableau(g, cap)
    feasible = (sums <= 2).all(axis=1)
    best = int(totals[feasible].max())
    bad = []
    for j, e in enumerate(es):
        capped = feasible & (table[:, j] <= 1)
        if int(totals[capped].max()) < best:
            bad.append(e)
    return frozenset(bad)


# ---------------------------------------------------------------------------
# Matching <-> edge cover conversions
# ---------------------------------------------------------------------------

def matching_to_cover(g: Graph, matching: EdgeWeightVector) -> EdgeWeightVector:
    """Grow a maximum matching into a minimum edge cover.

    Every vertex v with deficiency 1 - sum_{e: v in e} w_e > 0 spreads its
    deficiency evenly over its incident edges. Maximality is checked, not
    trusted: deficient vertices of a maximum matching form an independent
    set, so each edge is raised at most once.
    """
    matching.validate()
    c = cover_number(g)
    if matching.total != c:
        raise PreconditionError(f"matching total {matching.total} is not maximum (c={c})")
    sums = matching.vertex_sums()
    deg = g.degrees()
    new = dict(matching.weights)
    for v in g.vertices:
        deficiency = 1 - sums.get(v, Fraction(0))
        if deficiency > 0:
            for e in g.edges:
                if v in e:
                    new[e] = new.get(e, Fraction(0)) + Fraction(deficiency, deg[v])
    total = sum(new.values(), Fraction(0))
    cover = EdgeWeightVector("edge-cover", new, total)
    cover.validate()
    if total != g.n_vertices - c:
        raise PreconditionError("conversion produced a non-minimum cover")
    return cover


def cover_to_matching(g: Graph, cover: EdgeWeightVector) -> EdgeWeightVector:
    """Scale a minimum edge cover down to a maximum matching.

    At every oversaturated vertex the incident weights are divided by their
    sum; edges between two oversaturated vertices carry weight 0 in any
    minimum cover, so no edge is rescaled twice.
    """
    cover.validate()
    c = cover_number(g)
    if cover.total != g.n_vertices - c:
        raise PreconditionError(
            f"cover total {cover.total} is not minimum (v-c={g.n_vertices - c})")
    sums = cover.vertex_sums()
    over = {v for v, s in sums.items() if s > 1}
    new = {}
    for e, w in cover.weights.items():
        u, v = e
        if u in over and v in over:
            if w != 0:
                raise PreconditionError("positive weight between oversaturated vertices")
            new[e] = w
        elif u in over:
            new[e] = w / sums[u]
        elif v in over:
            new[e] = w / sums[v]
        else:
            new[e] = w
    total = sum(new.values(), Fraction(0))
    matching = EdgeWeightVector("matching", new, total)
    matching.validate()
    if total != c:
        raise PreconditionError("conversion produced a non-maximum matching")
    return matching


def strict_weight_pair(g: Graph, cap: int = DEFAULT_MATCHING_CAP) -> tuple[EdgeWeightVector, EdgeWeightVector]:
    """Matching/cover pair with w_e <= w'_e < 1 on every edge.

    Exists whenever min degree >= 2 and no edge is bad: average, over edges
    e0, one maximum matching with w_{e0} <= 1/2 each, then grow the average
    into a cover. The degree condition keeps the raised weights below 1.
    """
    deg = g.degrees()
    if g.is_empty or min(deg.values()) < 2:
        raise PreconditionError("strict pair needs minimum degree >= 2")
    if bad_edges(g, cap):
        raise PreconditionError("graph has a bad edge; no strict pair exists")
    maxima = enumerate_max_matchings(g, cap)
    chosen = []
    for e0 in g.sorted_edges():
        chosen.append(next(m for m in maxima if m.weights[e0] <= HALF))
    k = len(chosen)
    avg = {e: sum(m.weights[e] for m in chosen) / k for e in g.edges}
    total = sum(avg.values(), Fraction(0))
    matching = EdgeWeightVector("matching", avg, total)
    matching.validate()
    cover = matching_to_cover(g, matching)
    if any(w >= 1 for w in cover.weights.values()):
        raise PreconditionError("averaging failed to keep cover weights below 1")
    return matching, cover


def weight_pair(g: Graph, cap: int = DEFAULT_MATCHING_CAP) -> tuple[EdgeWeightVector, EdgeWeightVector]:
    """Any admissible (maximum matching, dominating minimum cover) pair."""
    _, matching = max_frac_matching(g, cap)
    return matching, matching_to_cover(g, matching)
