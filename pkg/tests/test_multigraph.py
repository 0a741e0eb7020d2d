import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eulercount import families
from eulercount.multigraph import (
    GraphFormatError,
    MultiGraph,
    NotEulerianError,
    eulerian_status,
    factorial_factor,
    format_edge_list,
    parse_edge_list,
)


def test_parse_triangle_with_header():
    g = parse_edge_list("p et 3 3\n1 2\n2 3\n3 1")
    assert (g.n, g.m) == (3, 3)
    assert g.multiplicities() == {(0, 1): 1, (1, 2): 1, (0, 2): 1}


def test_parse_repeated_lines_are_parallel_edges():
    g = parse_edge_list("1 2\n1 2")
    assert (g.n, g.m) == (2, 2)
    assert g.multiplicity(0, 1) == g.multiplicity(1, 0) == 2


def test_comments_are_skipped():
    g = parse_edge_list("c hello\n# also a comment\n\n1 2\n2 1\n")
    assert g.m == 2


@pytest.mark.parametrize(
    "text",
    [
        "1 1",
        "p et 2 1\n1 3",
        "1 2 3",
        "a b",
        "0 1",
        "p et 3 2\n1 2",
        "p et 3\n1 2",
        "p et 3 1\np et 3 1\n1 2",
    ],
)
def test_malformed_documents_are_rejected(text):
    with pytest.raises(GraphFormatError):
        parse_edge_list(text)


def test_self_loop_rejected_in_constructor():
    with pytest.raises(GraphFormatError):
        MultiGraph(2, ((1, 1),))


def test_eulerian_status_examples():
    assert eulerian_status(families.triangle()).is_eulerian
    single = MultiGraph(2, ((0, 1),))
    status = eulerian_status(single)
    assert not status.is_eulerian and status.odd_vertices == (0, 1)
    two_triangles = MultiGraph(6, ((0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)))
    status = eulerian_status(two_triangles)
    assert not status.connected and not status.is_eulerian
    assert eulerian_status(families.single_vertex()).is_eulerian


def test_factorial_factor_examples():
    assert factorial_factor(families.triangle()) == 1
    assert factorial_factor(families.bowtie()) == 1
    # three triangles through one hub: hub degree 6
    hub = MultiGraph(7, ((0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0), (0, 5), (5, 6), (6, 0)))
    assert factorial_factor(hub) == 2
    assert factorial_factor(families.single_vertex()) == 1
    with pytest.raises(NotEulerianError):
        factorial_factor(MultiGraph(2, ((0, 1),)))


@st.composite
def multigraphs(draw):
    n = draw(st.integers(2, 7))
    pair = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda p: p[0] != p[1])
    edges = draw(st.lists(pair, max_size=15))
    return MultiGraph(n, tuple(edges))


@given(multigraphs())
def test_handshake_and_round_trip(g):
    assert sum(g.degrees()) == 2 * g.m
    again = parse_edge_list(format_edge_list(g))
    assert again.n == g.n
    assert again.edges == g.edges
    assert format_edge_list(again) == format_edge_list(g)


@settings(max_examples=50)
@given(multigraphs(), st.randoms(use_true_random=False))
def test_status_invariant_under_edge_permutation(g, rnd: random.Random):
    edges = list(g.edges)
    rnd.shuffle(edges)
    assert eulerian_status(MultiGraph(g.n, tuple(edges))) == eulerian_status(g)


def test_factorial_factor_at_least_one_on_corpus(corpus_graph):
    _, g = corpus_graph
    assert factorial_factor(g) >= 1
