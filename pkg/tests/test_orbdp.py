import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import fixed_corpus
from eulercount import families
from eulercount.multigraph import MultiGraph, NotEulerianError
from eulercount.oracle import count_orbs_bruteforce, enumerate_euler_tours, enumerate_forest_orbs
from eulercount.orbdp import (
    DpTable,
    count_euler_tours,
    count_orbs,
    forget_table,
    introduce_table,
    join_table,
    leaf_table,
    prepare,
    run_tables,
)
from eulercount.treedecomp import (
    FORGET,
    INTRODUCE,
    JOIN,
    LEAF,
    DecompositionError,
    NodeScope,
    TreeDecomposition,
    compute_scopes,
    elimination_decompose,
    make_nice,
)


def scope(kind, bag, vertex=None, mult=None):
    bag = tuple(bag)
    return NodeScope(0, kind, bag, None, None, None, frozenset(), frozenset(bag), vertex, mult or {})


def test_leaf_table():
    assert leaf_table(scope(LEAF, (4,), 4)).entries == {((0,), (4,)): 1}
    assert len(leaf_table(scope(LEAF, (0,), 0))) == 1
    with pytest.raises(ValueError):
        leaf_table(scope(JOIN, (0,)))


def test_introduce_table():
    child = DpTable((0,), {((0,), (0,)): 1})
    assert introduce_table(scope(INTRODUCE, (0, 1), 1), child).entries == {((0, 0), (0, 1)): 1}
    # w lands in sorted position, not at the end
    child = DpTable((3,), {((0,), (3,)): 5})
    assert introduce_table(scope(INTRODUCE, (1, 3), 1), child).entries == {((0, 0), (1, 3)): 5}
    assert introduce_table(scope(INTRODUCE, (0, 1), 1), DpTable((0,), {})).entries == {}
    two = DpTable((0, 2), {((1, -1), (0, 2)): 3, ((1, -1), (2, 2)): 7})
    out = introduce_table(scope(INTRODUCE, (0, 1, 2), 1), two)
    assert sorted(out.entries.values()) == [3, 7]


def test_forget_path_example():
    child_scope = scope(INTRODUCE, (0, 1, 2), 2)
    child = DpTable((0, 1, 2), {((0, 0, 0), (0, 1, 2)): 1})
    out = forget_table(scope(FORGET, (0, 2), 1, {0: 1, 2: 1}), child_scope, child)
    assert out.entries == {
        ((1, -1), (0, 2)): 1,
        ((1, -1), (2, 2)): 1,
        ((-1, 1), (0, 2)): 1,
        ((-1, 1), (0, 0)): 1,
    }


def test_forget_parity_mismatch_is_empty():
    child_scope = scope(INTRODUCE, (0, 1, 2), 2)
    child = DpTable((0, 1, 2), {((0, 1, 0), (0, 1, 2)): 1})
    assert forget_table(scope(FORGET, (0, 2), 1, {0: 1, 2: 1}), child_scope, child).entries == {}


def test_forget_binomial_weight():
    # w=1 joined to x=0 by two parallel edges; one must point each way
    child_scope = scope(INTRODUCE, (0, 1), 1)
    child = DpTable((0, 1), {((0, 0), (0, 1)): 1})
    out = forget_table(scope(FORGET, (0,), 1, {0: 2}), child_scope, child)
    assert out.entries == {((0,), (0,)): 2}


def test_join_bowtie_center():
    left = DpTable((2,), {((0,), (2,)): 2})
    right = DpTable((2,), {((0,), (2,)): 2})
    assert join_table(scope(JOIN, (2,)), left, right).entries == {((0,), (2,)): 4}


def test_join_two_out_arcs_rejected():
    left = DpTable((0, 1), {((1, 1), (1, 1)): 1})
    right = DpTable((0, 1), {((1, -1), (1, 1)): 1})
    assert join_table(scope(JOIN, (0, 1)), left, right).entries == {}


def test_join_two_cycle_rejected():
    left = DpTable((0, 1), {((1, 1), (1, 1)): 1})  # 0 drains to 1 on the left
    right = DpTable((0, 1), {((1, 1), (0, 0)): 1})  # 1 drains to 0 on the right
    assert join_table(scope(JOIN, (0, 1)), left, right).entries == {}


def test_join_long_alternating_cycle_rejected():
    # left: 0->1, 2->3 ; right: 1->2, 3->0 ; no 2-cycle, but a 4-cycle overall
    left = DpTable((0, 1, 2, 3), {((0, 0, 0, 0), (1, 1, 3, 3)): 1})
    right = DpTable((0, 1, 2, 3), {((0, 0, 0, 0), (0, 2, 2, 0)): 1})
    assert join_table(scope(JOIN, (0, 1, 2, 3)), left, right).entries == {}


def test_join_chain_follows_to_fixpoint():
    # left: 0->1 ; right: 1->2 ; merged root of 0 is 2
    left = DpTable((0, 1, 2), {((0, 0, 0), (1, 1, 2)): 3})
    right = DpTable((0, 1, 2), {((0, 0, 0), (0, 2, 2)): 5})
    assert join_table(scope(JOIN, (0, 1, 2)), left, right).entries == {((0, 0, 0), (2, 2, 2)): 15}


@pytest.mark.parametrize("r", [0, 1, 2])
def test_count_orbs_triangle(r):
    g = families.triangle()
    assert count_orbs(g, prepare(g, r=r), r) == 2


def test_count_orbs_examples():
    g = families.bowtie()
    assert count_orbs(g, prepare(g, r=2), 2) == 4
    g = families.single_vertex()
    assert count_orbs(g, prepare(g), 0) == 1


def test_count_orbs_errors():
    g = families.triangle()
    ntd = prepare(g, r=0)
    with pytest.raises(DecompositionError):
        count_orbs(g, ntd, 1)
    with pytest.raises(NotEulerianError):
        count_orbs(MultiGraph(2, ((0, 1),)), ntd, 0)
    bad = TreeDecomposition(3, {1: frozenset({0, 1}), 2: frozenset({1, 2})}, ((1, 2),))
    with pytest.raises(DecompositionError):
        count_euler_tours(g, bad)


@pytest.mark.parametrize("n", range(3, 11))
def test_cycles_have_two_tours(n):
    assert count_euler_tours(families.cycle(n)) == 2


def test_count_euler_tours_examples():
    assert count_euler_tours(families.triangle()) == 2
    assert count_euler_tours(families.bowtie()) == 4
    assert count_euler_tours(families.single_vertex()) == 1
    assert count_euler_tours(families.complete(5)) == 264


def test_large_counts_stay_exact():
    # 2^t orbs along a chain of t triangles; far beyond 64-bit range
    assert count_euler_tours(families.triangle_chain(150)) == 2**150


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(sorted(fixed_corpus())), st.randoms(use_true_random=False))
def test_random_decompositions_match_oracle_per_node(name, rnd):
    g = fixed_corpus()[name]
    order = list(range(g.n))
    rnd.shuffle(order)
    r = rnd.randrange(g.n)
    ntd = make_nice(elimination_decompose(g, order), g, r)
    tables = run_tables(g, ntd, keep=True)
    for sc, table in zip(compute_scopes(ntd, g), tables):
        if len(sc.lower_edges) <= 12:
            assert table.entries == enumerate_forest_orbs(g, sc, cap=12)
    assert tables[ntd.root].entries.get(((0,), (r,)), 0) == count_orbs_bruteforce(g, r)


def test_key_invariants(corpus_graph):
    _, g = corpus_graph
    ntd = prepare(g)
    scopes = compute_scopes(ntd, g)
    for sc, table in zip(scopes, run_tables(g, ntd, keep=True)):
        deg = {x: sum(1 for e in sc.lower_edges if x in g.edges[e]) for x in sc.bag}
        for (charges, roots), value in table.entries.items():
            assert value > 0
            for x, c, s in zip(sc.bag, charges, roots):
                assert (c - deg[x]) % 2 == 0 and abs(c) <= deg[x]
                if x in sc.upper:
                    assert c == 0 and s == x
                else:
                    assert s in sc.lower and roots[sc.bag.index(s)] == s
            if sc.lower:
                assert any(roots[sc.bag.index(x)] == x for x in sc.lower)


def test_oracle_agrees_with_dp_on_multigraph():
    g = MultiGraph.from_multiplicities(3, {(0, 1): 3, (1, 2): 3, (0, 2): 1})
    assert count_euler_tours(g) == enumerate_euler_tours(g)
