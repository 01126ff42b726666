import pytest

from kempekit.coloring import canonical, iter_colorings, three_coloring
from kempekit.fisk import (
    CycleInterchange,
    FiskError,
    VertexRecolor,
    check_preconditions,
    classify_edges,
    count_nonsingular,
    find_nonsingular_cycle,
    fisk_reduce,
    fisk_trace,
    interchange_interior,
    select_step,
)
from kempekit.graph_core import bipyramid, complete_graph, insert_octahedron, octahedron
from kempekit.kempe import verify_certificate

A, B, C, B2, C2, A2 = range(6)
F1 = (4, 1, 2, 3, 2, 4)
F2 = (1, 2, 3, 2, 3, 4)  # a=1, a'=4, b=b'=2, c=c'=3


def oct_outer_b2():
    G = octahedron()
    return G.with_outer(next(i for i, f in enumerate(G.faces) if B2 in f))


def same_cycle(x, y):
    x = list(x)
    return len(x) == len(y) and any((x[i:] + x[:i]) in (list(y), list(y)[::-1]) for i in range(len(x)))


def test_three_coloring_all_singular():
    G = octahedron()
    f = three_coloring(G)
    cls = classify_edges(G, f)
    assert len(cls) == 12 and cls.count_nonsingular() == 0


def test_nonsingular_edges_example():
    cls = classify_edges(octahedron(), F1)
    assert cls.nonsingular() == sorted([(A, C), (A, C2), (C, A2), (C2, A2)])
    assert all(cls[e].pair == (2, 4) for e in cls.nonsingular())


def test_nonsingular_rim_example():
    cls = classify_edges(octahedron(), F2)
    rim = sorted([(B, C), (C, B2), (B2, C2), (B, C2)])
    assert cls.nonsingular() == rim
    assert all(cls[e].pair == (2, 3) for e in rim)


def test_find_cycle_examples():
    G = octahedron()
    assert same_cycle(find_nonsingular_cycle(G, F1, (2, 4)), (A, C, A2, C2))
    assert same_cycle(find_nonsingular_cycle(G, F2, (2, 3)), (B, C, B2, C2))
    with pytest.raises(FiskError):
        find_nonsingular_cycle(G, three_coloring(G), (1, 2))


def test_select_step_examples():
    G = octahedron()
    assert select_step(G, F2) == VertexRecolor(A2, 1)
    step = select_step(G, F1)
    assert isinstance(step, CycleInterchange) and step.pair == (1, 3)
    assert same_cycle(step.cycle, (A, C, A2, C2))
    with pytest.raises(FiskError):
        select_step(G, three_coloring(G))


def test_interchange_example():
    G = oct_outer_b2()
    out, moves = interchange_interior(G, F1, (A, C, A2, C2), (1, 3))
    assert out == (4, 3, 2, 3, 2, 4) and len(moves) == 1
    assert count_nonsingular(G, out) == 0


def test_interchange_empty_interior():
    G = octahedron()
    f = three_coloring(G)
    face = G.faces[1]
    outer = G.with_outer(0)
    pair = tuple(sorted({1, 2, 3, 4} - {f[x] for x in face}))[:2]
    if len(pair) == 2 and not any(f[x] in pair for x in face):
        out, moves = interchange_interior(outer, f, face, pair)
        assert moves == [] and out == f


def test_reduce_example():
    G = oct_outer_b2()
    cert, log = fisk_trace(G, F1)
    assert log[0].kind == "cycle_interchange"
    assert cert.end == (1, 3, 2, 3, 2, 1)
    assert verify_certificate(G, cert)


def test_reduce_three_coloring_is_empty():
    G = octahedron()
    f = three_coloring(G)
    assert fisk_reduce(G, f).moves == []


def test_reduce_single_recolor():
    cert, log = fisk_trace(octahedron(), F2)
    assert [s.kind for s in log] == ["vertex_recolor"]
    assert cert.end == (1, 2, 3, 2, 3, 1)


def test_preconditions():
    with pytest.raises(FiskError):
        check_preconditions(complete_graph(4), (1, 2, 3, 4))
    with pytest.raises(FiskError):
        check_preconditions(octahedron(), (1, 1, 2, 3, 2, 4))


@pytest.mark.parametrize("G", [octahedron(), bipyramid(6), insert_octahedron(octahedron(), 0)],
                         ids=["octahedron", "bipyramid6", "oct+oct"])
def test_every_coloring_reduces(G):
    target = canonical(three_coloring(G))
    for f in iter_colorings(G, 4):
        cert, log = fisk_trace(G, f, check=False)
        assert verify_certificate(G, cert)
        assert 4 not in cert.end and canonical(cert.end) == target
        counts = [s.nonsingular_before for s in log if s.kind == "cycle_interchange"]
        assert counts == sorted(set(counts), reverse=True)
