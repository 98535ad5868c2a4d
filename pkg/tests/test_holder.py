import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from regtail.errors import PreconditionError
from regtail.fractional import EdgeWeightVector, strict_weight_pair
from regtail.graphs import Graph, butterfly, complete_bipartite, cycle_graph, k0_graph
from regtail.holder import (HolderInstance, WeightPair, lhs_integral,
                            random_instance, rhs_bound, simple_bound_check,
                            verify_batch, verify_instance)
from regtail.graphons import build_w0

H = Fraction(1, 2)


def nested_loop_lhs_oracle(inst):
    """Second implementation of the product integral: plain nested loops."""
    g = inst.graph
    verts = list(g.vertices)
    r = inst.resolution
    total = 0.0
    for combo in itertools.product(range(r), repeat=len(verts)):
        idx = dict(zip(verts, combo))
        term = 1.0
        for (u, v) in g.sorted_edges():
            term *= inst.kernels[(u, v)][idx[u], idx[v]]
        total += term
    for v in verts:
        total *= inst.cell(v)
    return total


def constant_instance(g, constants, boxes=None, r=4):
    boxes = boxes or {v: (0.0, 1.0) for v in g.vertices}
    kernels = {e: np.full((r, r), constants[e]) for e in g.sorted_edges()}
    return HolderInstance(g, boxes, kernels, r)


def pair_from(g, w, wp):
    matching = EdgeWeightVector("matching", dict(w), sum(w.values(), Fraction(0)))
    cover = EdgeWeightVector("edge-cover", dict(wp), sum(wp.values(), Fraction(0)))
    return WeightPair(matching, cover)


def test_lhs_constant_single_edge():
    g = Graph([(0, 1)])
    inst = constant_instance(g, {(0, 1): 0.7})
    assert abs(lhs_integral(inst) - 0.7) < 1e-15


def test_lhs_constant_path():
    g = Graph([(0, 1), (1, 2)])
    inst = constant_instance(g, {(0, 1): 0.5, (1, 2): 0.25})
    assert abs(lhs_integral(inst) - 0.125) < 1e-15


def test_lhs_matches_nested_loop_oracle():
    rng = np.random.default_rng(42)
    for g in (cycle_graph(4), complete_bipartite(2, 3)):
        inst = random_instance(g, rng, resolution=5)
        assert abs(lhs_integral(inst) - nested_loop_lhs_oracle(inst)) < 1e-12


def test_equality_single_edge():
    g = Graph([(0, 1)])
    inst = constant_instance(g, {(0, 1): 0.6})
    wp = pair_from(g, {(0, 1): Fraction(1)}, {(0, 1): Fraction(1)})
    res = verify_instance(inst, wp)
    assert abs(res.lhs - res.rhs) < 1e-12
    assert res.passed


def test_equality_p3_half_weights():
    # w = (1/2, 1/2), w' = (1, 1): the center is oversaturated and both
    # pulled-out factors appear; for constants the bound is tight.
    g = Graph([(0, 1), (1, 2)])
    inst = constant_instance(g, {(0, 1): 0.3, (1, 2): 0.8})
    wp = pair_from(g, {(0, 1): H, (1, 2): H}, {(0, 1): Fraction(1), (1, 2): Fraction(1)})
    res = verify_instance(inst, wp)
    assert abs(res.rhs - 0.3 * 0.8) < 1e-12
    assert abs(res.lhs - res.rhs) < 1e-12


def test_equality_perfect_matching_constants():
    # Perfect-matching weights give exact equality for constant kernels even
    # on shrunken boxes, where the box measures rebalance across the product.
    cases = [
        (cycle_graph(4), {e: H for e in cycle_graph(4).edges}),
        (Graph([(0, 1), (2, 3)]), {(0, 1): Fraction(1), (2, 3): Fraction(1)}),
    ]
    rng = np.random.default_rng(3)
    for g, weights in cases:
        boxes = {v: (0.1 * (v % 3), 0.4 + 0.15 * (v % 4)) for v in g.vertices}
        constants = {e: float(rng.uniform(0.2, 1.0)) for e in g.sorted_edges()}
        inst = constant_instance(g, constants, boxes)
        wp = pair_from(g, weights, weights)
        res = verify_instance(inst, wp)
        assert abs(res.lhs - res.rhs) <= 1e-12 * max(1.0, abs(res.rhs))


def test_zero_weight_edge_convention():
    # K_{2,3} carries maximum matchings with two zero-weight edges; the
    # kernels on those edges still multiply into both sides.
    g = complete_bipartite(2, 3)
    w = {e: Fraction(0) for e in g.edges}
    w[(0, 2)] = w[(1, 3)] = Fraction(1)
    wp_weights = {e: H for e in g.edges}
    wp_weights[(0, 2)] = wp_weights[(1, 3)] = Fraction(1)
    # That cover is not minimum (total 4 != 3); use the grown conversion.
    from regtail.fractional import matching_to_cover
    matching = EdgeWeightVector("matching", w, Fraction(2))
    cover = matching_to_cover(g, matching)
    wp = WeightPair(matching, cover)
    rng = np.random.default_rng(11)
    inst = random_instance(g, rng, resolution=6)
    res = verify_instance(inst, wp)
    assert res.passed


def test_k23_four_cycle_weighting_bound_shape():
    # Max matching: 1/2 on the 4-cycle through w1, w2 and 0 on the two w3
    # edges; min cover: 1/2 everywhere. For f_e = |U| with near-regular rows
    # the bound collapses to sup-column-norms times ||U||_2^4, and the
    # sup-column term is at most sqrt((2 + eps) p).
    g = complete_bipartite(2, 3)
    w = {e: H for e in g.edges}
    w[(0, 4)] = w[(1, 4)] = Fraction(0)
    wp = pair_from(g, w, {e: H for e in g.edges})
    wp.validate(g)

    rng = np.random.default_rng(31)
    r, p, eps = 10, 0.2, 0.9
    wk = p + rng.uniform(-0.4, 0.4, size=(r, r)) * p
    wk = (wk + wk.T) / 2
    wk = wk - (wk.mean(axis=1, keepdims=True) - p)
    wk = (wk + wk.T) / 2
    u = np.abs(wk - p)
    inst = HolderInstance(g, {v: (0.0, 1.0) for v in g.vertices},
                          {e: u for e in g.sorted_edges()}, r)
    res = verify_instance(inst, wp)
    assert res.passed
    u2 = float((u ** 2).mean())
    sup_col = float(np.sqrt((u ** 2).mean(axis=1)).max())
    assert abs(res.rhs - sup_col ** 2 * u2 ** 2) < 1e-12  # the Example-5.2 shape
    assert sup_col ** 2 <= (2 + eps) * p


def test_batch_no_violations_small():
    for g in (Graph([(0, 1), (1, 2)]), cycle_graph(4), butterfly(), k0_graph()):
        out = verify_batch(g, 60, seed=5, resolution=6)
        assert out["violations"] == 0


def test_rhs_monotone_in_absolute_value():
    # Replacing a kernel by |kernel| leaves the bound unchanged and can only
    # grow the left side.
    g = cycle_graph(5)
    wp = WeightPair.generate(g)
    rng = np.random.default_rng(17)
    for _ in range(5):
        inst = random_instance(g, rng, resolution=5)
        abs_inst = HolderInstance(g, inst.boxes,
                                  {e: np.abs(k) for e, k in inst.kernels.items()},
                                  inst.resolution)
        assert abs(rhs_bound(inst, wp) - rhs_bound(abs_inst, wp)) < 1e-12
        assert lhs_integral(abs_inst) >= lhs_integral(inst) - 1e-12


def test_adversarial_spike_kernel():
    g = complete_bipartite(2, 3)
    wp = WeightPair.generate(g)
    kernels = {e: np.zeros((6, 6)) for e in g.sorted_edges()}
    for e in kernels:
        kernels[e][2, 3] = 1.0  # one large cell
    kernels[(0, 2)] = np.zeros((6, 6))
    kernels[(0, 2)][5, 5] = 1.0  # misaligned spike: zero left side, positive right
    inst = HolderInstance(g, {v: (0.0, 1.0) for v in g.vertices}, kernels, 6)
    res = verify_instance(inst, wp)
    assert res.passed and res.margin > 0


def test_grid_refinement_stability():
    # Lipschitz-generated kernels: doubling the resolution moves the
    # integral by well under 5%.
    g = cycle_graph(4)

    def smooth_kernels(r):
        xs = (np.arange(r) + 0.5) / r
        grid = 0.3 + 0.2 * np.sin(2 * np.pi * xs)[:, None] * np.cos(np.pi * xs)[None, :]
        return {e: grid for e in g.sorted_edges()}

    boxes = {v: (0.0, 1.0) for v in g.vertices}
    lhs_a = lhs_integral(HolderInstance(g, boxes, smooth_kernels(8), 8))
    lhs_b = lhs_integral(HolderInstance(g, boxes, smooth_kernels(16), 16))
    assert abs(lhs_b - lhs_a) < 0.05 * abs(lhs_a)


def test_strict_pair_feeds_holder():
    # Bad-edge-free graphs admit pairs with w <= w' < 1; the inequality
    # holds along them too.
    g = butterfly()
    matching, cover = strict_weight_pair(g)
    wp = WeightPair(matching, cover)
    rng = np.random.default_rng(23)
    inst = random_instance(g, rng, resolution=6)
    assert verify_instance(inst, wp).passed


def test_weight_pair_validation():
    g = cycle_graph(3)
    bad_cover = EdgeWeightVector("edge-cover", {e: Fraction(1) for e in g.edges}, Fraction(3))
    good_matching = EdgeWeightVector("matching", {e: H for e in g.edges}, Fraction(3, 2))
    with pytest.raises(PreconditionError):
        WeightPair(good_matching, bad_cover).validate(g)


def test_simple_bound_zero_kernel():
    g = cycle_graph(3)
    u = np.zeros((8, 8))
    res = simple_bound_check(g, u, p=0.1, eps=0.5)
    assert res.lhs == 0.0 and res.passed


def test_simple_bound_near_regular_random():
    # Random symmetric near-regular step kernel around p.
    rng = np.random.default_rng(9)
    r, p, eps = 10, 0.2, 0.9
    w = p + rng.uniform(-0.4, 0.4, size=(r, r)) * p
    w = (w + w.T) / 2
    w = w - (w.mean(axis=1, keepdims=True) - p)  # force rows near p
    w = (w + w.T) / 2
    u = w - p
    for g in (butterfly(), complete_bipartite(2, 3)):
        res = simple_bound_check(g, u, p, eps)
        assert res.passed


def test_simple_bound_discretized_construction():
    p = 1e-2
    w = build_w0(0.5, 1.0, 0.0, p)
    # Rasterize the block graphon on a grid aligned with cumulative sizes.
    r = 20
    bounds = np.concatenate([[0.0], np.cumsum(w.sizes)])
    xs = (np.arange(r) + 0.5) / r
    blocks = np.minimum(np.searchsorted(bounds, xs, side="right") - 1, w.k - 1)
    grid = w.values[np.ix_(blocks, blocks)]
    rows = grid.mean(axis=1)
    eps = float(np.max(np.abs(rows / p - 1.0))) + 1e-6
    res = simple_bound_check(complete_bipartite(2, 3), grid - p, p, eps)
    assert res.passed


def test_simple_bound_refuses_bad_rows():
    g = cycle_graph(3)
    u = np.full((6, 6), 0.5)  # rows of U + p are nowhere near p
    with pytest.raises(PreconditionError):
        simple_bound_check(g, u, p=0.1, eps=0.1)
