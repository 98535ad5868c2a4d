"""Desk-scale random regular graph sampling and homomorphism counting.

The sampler proposes pairings of stubs and rejects non-simple outcomes,
which is exactly uniform conditioned on success; when the rejection budget
runs out (degrees where almost every pairing collides) it falls back to a
repair strategy and relies on a long double-edge-swap walk for mixing, with
the provenance recording which path produced the sample. Tail probabilities
at asymptotic scale are unreachable here by design; the module targets
moderate sizes and planted-mean comparisons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .errors import BudgetExhaustedError, CapExceededError, PreconditionError
from .graphs import Edge, Graph
from .graphons import BlockGraphon, hom_density

HOM_VERTEX_CAP = 6
HOM_N_CAP = 64
CYCLE_POWER_CAP = 12


@dataclass
class SimGraph:
    """Sampled n-vertex graph with adjacency rows as bitmasks."""

    n: int
    rows: list[int]
    provenance: dict = field(default_factory=dict)
    _dense: Optional[np.ndarray] = field(default=None, repr=False, compare=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], provenance=None) -> "SimGraph":
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise PreconditionError("self-loop")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, rows, provenance or {})

    @classmethod
    def from_bool_matrix(cls, adj: np.ndarray, provenance=None) -> "SimGraph":
        n = adj.shape[0]
        rows = [int.from_bytes(np.packbits(adj[i], bitorder="little").tobytes(), "little")
                for i in range(n)]
        return cls(n, rows, provenance or {}, adj.astype(bool))

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def degrees(self) -> list[int]:
        return [r.bit_count() for r in self.rows]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u in range(self.n):
            m = self.rows[u] >> (u + 1)
            v = u + 1
            while m:
                if m & 1:
                    out.append((u, v))
                m >>= 1
                v += 1
        return out

    @property
    def n_edges(self) -> int:
        return sum(r.bit_count() for r in self.rows) // 2

    def adjacency(self, dtype=np.float64) -> np.ndarray:
        if self._dense is not None:
            return self._dense.astype(dtype)
        a = np.zeros((self.n, self.n), dtype=dtype)
        for u, v in self.edges():
            a[u, v] = a[v, u] = 1
        return a

    def to_edge_list(self) -> str:
        return "\n".join(f"{u} {v}" for u, v in self.edges()) + "\n"


# ---------------------------------------------------------------------------
# Sampling d-regular graphs
# ---------------------------------------------------------------------------

def _pairing_attempt(n: int, d: int, rng: np.random.Generator) -> Optional[list[tuple[int, int]]]:
    stubs = np.repeat(np.arange(n), d)
    perm = rng.permutation(stubs)
    a, b = perm[0::2], perm[1::2]
    if np.any(a == b):
        return None
    lo = np.minimum(a, b).astype(np.int64)
    hi = np.maximum(a, b).astype(np.int64)
    keys = lo * n + hi
    if len(np.unique(keys)) != len(keys):
        return None
    return list(zip(lo.tolist(), hi.tolist()))


def _repair_attempt(n: int, d: int, rng: np.random.Generator) -> Optional[list[tuple[int, int]]]:
    """Pair stubs greedily, reshuffling the conflicting leftovers."""
    edges: set[tuple[int, int]] = set()
    stubs = list(np.repeat(np.arange(n), d))
    rounds = 0
    while stubs:
        rounds += 1
        if rounds > 500:
            return None
        leftover: dict[int, int] = {}
        perm = rng.permutation(np.asarray(stubs, dtype=np.int64))
        it = iter(perm.tolist())
        for u, v in zip(it, it):
            if u > v:
                u, v = v, u
            if u == v or (u, v) in edges:
                leftover[u] = leftover.get(u, 0) + 1
                leftover[v] = leftover.get(v, 0) + 1
            else:
                edges.add((u, v))
        if not leftover:
            return sorted(edges)
        # Stuck when no leftover pair can still be placed.
        items = sorted(leftover)
        stuck = all((min(x, y), max(x, y)) in edges or x == y
                    for i, x in enumerate(items) for y in items[i:])
        if stuck:
            return None
        stubs = [v for v, k in sorted(leftover.items()) for _ in range(k)]
    return sorted(edges)


def _swap_walk(g: SimGraph, steps: int, rng: np.random.Generator) -> int:
    """Double-edge swaps {ab, cd} -> {ac, bd}; invalid proposals are skipped."""
    edge_list = g.edges()
    edge_set = set(edge_list)
    applied = 0
    m = len(edge_list)
    if m < 2:
        return 0
    for _ in range(steps):
        i, j = rng.integers(0, m, size=2)
        if i == j:
            continue
        a, b = edge_list[i]
        c, d = edge_list[j]
        if rng.integers(0, 2):
            c, d = d, c
        # Proposed new edges: (a, c) and (b, d).
        if a == c or b == d:
            continue
        e1 = (a, c) if a < c else (c, a)
        e2 = (b, d) if b < d else (d, b)
        if e1 in edge_set or e2 in edge_set or e1 == e2:
            continue
        edge_set.discard(edge_list[i])
        edge_set.discard(edge_list[j])
        edge_set.add(e1)
        edge_set.add(e2)
        edge_list[i] = e1
        edge_list[j] = e2
        applied += 1
    result = SimGraph.from_edges(g.n, edge_set)
    g.rows = result.rows
    return applied


def default_reject_budget(d: int) -> int:
    """Attempts before falling back, sized from the asymptotic success rate.

    When the expected number of attempts is already in the thousands the
    exact-rejection path is hopeless at any sane budget, so it is skipped
    outright and the repair path (plus the swap walk) takes over.
    """
    lam = (d - 1) / 2.0
    expected = math.exp(lam + lam * lam)
    if expected > 2500.0:
        return 0
    return int(min(2000, max(50, 20.0 * expected)))


def sample_regular(n: int, d: int, seed, swap_factor: int = 10,
                   reject_budget: Optional[int] = None,
                   allow_repair: bool = True) -> SimGraph:
    """One d-regular graph on n vertices, deterministic in (n, d, seed).

    Pairing proposals are rejected until simple (uniform conditioned on
    success); after ``reject_budget`` misses the repair fallback builds a
    simple pairing greedily, flagged in the provenance as approximate. The
    sample is then randomized by swap_factor * n * d double-edge swaps.
    """
    if n * d % 2 != 0:
        raise PreconditionError("n*d must be even")
    if not 0 <= d < n:
        raise PreconditionError("need 0 <= d < n")
    rng = np.random.default_rng(seed)
    budget = default_reject_budget(d) if reject_budget is None else reject_budget
    edges = None
    sampler = "pairing-rejection"
    attempts = 0
    for attempts in range(1, budget + 1):
        edges = _pairing_attempt(n, d, rng)
        if edges is not None:
            break
    if edges is None:
        if not allow_repair:
            raise BudgetExhaustedError(f"no simple pairing in {budget} attempts")
        sampler = "pairing-repair"
        for _ in range(200):
            edges = _repair_attempt(n, d, rng)
            if edges is not None:
                break
        if edges is None:
            raise BudgetExhaustedError("repair fallback failed to complete a pairing")
    g = SimGraph.from_edges(n, edges, {"sampler": sampler, "seed": seed,
                                       "attempts": attempts, "n": n, "d": d})
    swaps = _swap_walk(g, swap_factor * n * d, rng)
    g.provenance["swaps_applied"] = swaps
    if g.degrees() != [d] * n:
        raise PreconditionError("internal error: sample is not d-regular")
    return g


# ---------------------------------------------------------------------------
# Homomorphism counting
# ---------------------------------------------------------------------------

def _component_order(g: Graph) -> list[list[tuple[int, list[int]]]]:
    """Per component: BFS vertex order with each vertex's earlier neighbors."""
    nbr = g.neighbors()
    seen: set[int] = set()
    plans = []
    for start in g.vertices:
        if start in seen:
            continue
        order = [start]
        seen.add(start)
        i = 0
        while i < len(order):
            for u in sorted(nbr[order[i]]):
                if u not in seen:
                    seen.add(u)
                    order.append(u)
            i += 1
        plan = []
        for idx, v in enumerate(order):
            anchors = [order.index(u) for u in nbr[v] if order.index(u) < idx]
            plan.append((v, anchors))
        plans.append(plan)
    return plans


def hom_count(pattern: Graph, g: SimGraph) -> int:
    """Exact number of edge-preserving vertex maps from the pattern into g.

    Backtracking with adjacency-bitmask pruning; counts all homomorphisms,
    not just injective ones. Capped at 6 pattern vertices and 64 target
    vertices.
    """
    if pattern.n_vertices > HOM_VERTEX_CAP:
        raise CapExceededError(f"pattern has more than {HOM_VERTEX_CAP} vertices")
    if g.n > HOM_N_CAP:
        raise CapExceededError(f"target has more than {HOM_N_CAP} vertices")
    if pattern.is_empty:
        return 1
    full = (1 << g.n) - 1
    rows = g.rows
    total = 1
    for plan in _component_order(pattern):
        k = len(plan)

        def count_from(level: int, assigned: list[int]) -> int:
            cand = full
            for a in plan[level][1]:
                cand &= rows[assigned[a]]
            if level == k - 1:
                return cand.bit_count()
            subtotal = 0
            while cand:
                low = cand & -cand
                v = low.bit_length() - 1
                cand ^= low
                assigned.append(v)
                subtotal += count_from(level + 1, assigned)
                assigned.pop()
            return subtotal

        total *= count_from(0, [])
    return total


def cycle_hom_oracle(k: int, g: SimGraph) -> int:
    """Hom(C_k, g) as the trace of the k-th adjacency power, exactly.

    Python-integer matrices keep the arithmetic exact at any size.
    """
    if not 3 <= k <= CYCLE_POWER_CAP:
        raise CapExceededError(f"cycle length must be in [3, {CYCLE_POWER_CAP}]")
    if g.n > HOM_N_CAP:
        raise CapExceededError(f"target has more than {HOM_N_CAP} vertices")
    a = np.empty((g.n, g.n), dtype=object)
    for i in range(g.n):
        for j in range(g.n):
            a[i, j] = 1 if g.has_edge(i, j) else 0
    power = a
    for _ in range(k - 1):
        power = power @ a
    return int(np.trace(power))


# ---------------------------------------------------------------------------
# Dense counters for patterns at sizes beyond the backtracking caps
# ---------------------------------------------------------------------------

def hom_counts_dense(pattern: Graph, adj: np.ndarray) -> tuple[float, float]:
    """(all-maps count, injective count) via matrix identities.

    Supports complete bipartite K_{2,m} and the K_{2,4}-plus-an-edge
    pattern; these cover the planted-comparison workloads where n is far
    beyond the backtracking cap.
    """
    from .graphs import is_complete_bipartite
    from .exponents import _is_k0

    a = np.asarray(adj, dtype=np.float32)
    ab = is_complete_bipartite(pattern)
    if ab is not None and ab[0] == 2:
        m = ab[1]
        c = (a @ a).astype(np.float64)
        hom = float((c ** m).sum())
        offdiag = c.copy()
        np.fill_diagonal(offdiag, 0.0)
        inj = offdiag.copy()
        for t in range(1, m):
            inj *= np.maximum(offdiag - t, 0.0)
        np.fill_diagonal(inj, 0.0)
        return hom, float(inj.sum())
    if _is_k0(pattern):
        c = (a @ a).astype(np.float64)
        hom = inj = 0.0
        rows_bool = a.astype(bool)
        xs, ys = np.nonzero(np.triu(a, 1))
        for x, y in zip(xs, ys):
            common = np.flatnonzero(rows_bool[x] & rows_bool[y])
            sub = c[np.ix_(common, common)]
            hom += 2.0 * float((sub ** 2).sum())
            off = sub.copy()
            np.fill_diagonal(off, 0.0)
            inj_sub = np.maximum(off - 2.0, 0.0) * np.maximum(off - 3.0, 0.0)
            np.fill_diagonal(inj_sub, 0.0)
            inj += 2.0 * float(inj_sub.sum())
        return hom, inj
    raise CapExceededError("no dense counter for this pattern; use hom_count")


# ---------------------------------------------------------------------------
# The tilted independent-edge model
# ---------------------------------------------------------------------------

@dataclass
class PStarSpec:
    """Inhomogeneous independent-edge model matching a block graphon on its
    masked (important) block pairs and staying at p elsewhere."""

    n: int
    p: float
    boundaries: list[int]      # cumulative vertex-class boundaries, len k+1
    values: np.ndarray
    mask: np.ndarray           # boolean (k, k); only non-dominant pairs
    a_counts: np.ndarray       # rounded target pair counts per block

    @classmethod
    def from_graphon(cls, w: BlockGraphon, n: int, p: float,
                     mask: Optional[np.ndarray] = None) -> "PStarSpec":
        k = w.k
        cum = np.concatenate([[0.0], np.cumsum(w.sizes)])
        boundaries = [int(math.floor(n * c + 1e-9)) for c in cum]
        boundaries[-1] = n
        sizes_n = np.diff(boundaries)
        if np.any(sizes_n <= 0):
            raise PreconditionError("a vertex class came out empty; n too small")
        if mask is None:
            dom = w.dominant_block()
            mask = np.zeros((k, k), dtype=bool)
            for i in range(k):
                for j in range(k):
                    mask[i, j] = i != dom and j != dom and abs(w.values[i, j] - p) > 1e-12 * p
        a = np.zeros((k, k), dtype=np.int64)
        for i in range(k):
            for j in range(k):
                if i == j:
                    pairs = sizes_n[i] * (sizes_n[i] - 1) // 2
                    a[i, i] = 2 * int(math.floor(w.values[i, i] * pairs + 0.5))
                else:
                    a[i, j] = int(math.floor(w.values[i, j] * sizes_n[i] * sizes_n[j] + 0.5))
        return cls(n, p, boundaries, w.values.copy(), np.asarray(mask, bool), a)

    def class_of(self, v: int) -> int:
        for i in range(len(self.boundaries) - 1):
            if self.boundaries[i] <= v < self.boundaries[i + 1]:
                return i
        raise ValueError(v)

    def probability_matrix(self) -> np.ndarray:
        prob = np.full((self.n, self.n), self.p, dtype=np.float64)
        b = self.boundaries
        k = len(b) - 1
        for i in range(k):
            for j in range(k):
                if self.mask[i, j]:
                    prob[b[i]:b[i + 1], b[j]:b[j + 1]] = self.values[i, j]
        np.fill_diagonal(prob, 0.0)
        return prob


def _sample_bool(prob: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    upper = np.triu(rng.random(prob.shape) < prob, 1)
    return upper | upper.T


def sample_pstar(spec: PStarSpec, seed, conditioned: bool = False,
                 budget: int = 10000) -> SimGraph:
    """Sample the tilted model; optionally reject until every masked block
    hits its rounded pair count exactly."""
    rng = np.random.default_rng(seed)
    prob = spec.probability_matrix()
    b = spec.boundaries
    k = len(b) - 1
    for attempt in range(1, budget + 1):
        adj = _sample_bool(prob, rng)
        if not conditioned:
            break
        ok = True
        for i in range(k):
            for j in range(i, k):
                if not spec.mask[i, j]:
                    continue
                block = adj[b[i]:b[i + 1], b[j]:b[j + 1]]
                count = int(block.sum()) if i != j else int(np.triu(block, 1).sum()) * 2
                if count != spec.a_counts[i, j]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            break
    else:
        raise BudgetExhaustedError(f"no conditioned sample in {budget} attempts")
    return SimGraph.from_bool_matrix(adj, {"sampler": "pstar", "seed": seed,
                                           "conditioned": conditioned})


def sample_gnp(n: int, p: float, seed) -> SimGraph:
    rng = np.random.default_rng(seed)
    adj = _sample_bool(np.full((n, n), p), rng)
    return SimGraph.from_bool_matrix(adj, {"sampler": "gnp", "seed": seed})


# ---------------------------------------------------------------------------
# Monte Carlo tail estimate and planted comparison
# ---------------------------------------------------------------------------

def wilson_interval(hits: int, trials: int, z: float = 1.959963984540054) -> tuple[float, float]:
    if trials == 0:
        return (0.0, 1.0)
    phat = hits / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    lo = 0.0 if hits == 0 else max(0.0, center - half)
    hi = 1.0 if hits == trials else min(1.0, center + half)
    return (lo, hi)


@dataclass
class TailEstimate:
    trials: int
    hits: int
    estimate: float
    wilson95: tuple[float, float]
    threshold: float
    seed: object

    def to_jsonable(self) -> dict:
        return {"trials": self.trials, "hits": self.hits, "estimate": self.estimate,
                "wilson95": list(self.wilson95), "threshold": self.threshold,
                "seed": self.seed}


def tail_estimate(pattern: Graph, n: int, d: int, delta: float, trials: int,
                  seed: int, **sampler_kwargs) -> TailEstimate:
    """Frequency of Hom(K, sample) >= (1+delta) p^e n^v over regular samples.

    Per-trial RNG streams are keyed by (seed, trial), so the result does not
    depend on any batching of the trials.
    """
    p = d / n
    threshold = (1.0 + delta) * p ** pattern.n_edges * float(n) ** pattern.n_vertices
    hits = 0
    for t in range(trials):
        g = sample_regular(n, d, [seed, t], **sampler_kwargs)
        if hom_count(pattern, g) >= threshold:
            hits += 1
    return TailEstimate(trials, hits, hits / trials if trials else 0.0,
                        wilson_interval(hits, trials), threshold, seed)


@dataclass
class PlantedComparison:
    trials: int
    mean_tilted: float
    mean_baseline: float
    ratio: float
    mean_tilted_injective: float
    mean_baseline_injective: float
    ratio_injective: float
    predicted_ratio: float

    def to_jsonable(self) -> dict:
        return {"trials": self.trials,
                "hom_ratio": self.ratio,
                "injective_ratio": self.ratio_injective,
                "predicted_ratio": self.predicted_ratio,
                "mean_tilted": self.mean_tilted,
                "mean_baseline": self.mean_baseline}


def planted_comparison(pattern: Graph, w: BlockGraphon, n: int, p: float,
                       trials: int, seed: int) -> PlantedComparison:
    """Mean homomorphism count under the tilted model versus plain G(n, p).

    Reports both the all-maps ratio and the injective-embedding ratio next
    to the block-sum prediction Hom(K, W) / p^e; at moderate n the all-maps
    count carries a large degenerate-map component, which the injective
    column removes.
    """
    spec = PStarSpec.from_graphon(w, n, p)
    sums = np.zeros(4)
    for t in range(trials):
        gs = sample_pstar(spec, [seed, 0, t])
        hom_s, inj_s = hom_counts_dense(pattern, gs.adjacency())
        ge = sample_gnp(n, p, [seed, 1, t])
        hom_e, inj_e = hom_counts_dense(pattern, ge.adjacency())
        sums += (hom_s, inj_s, hom_e, inj_e)
    mean_ts, mean_ti, mean_bs, mean_bi = sums / trials
    predicted = hom_density(pattern, w) / p ** pattern.n_edges
    return PlantedComparison(trials, mean_ts, mean_bs, mean_ts / mean_bs,
                             mean_ti, mean_bi, mean_ti / mean_bi, predicted)
