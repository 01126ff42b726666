import itertools
import random
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from kempekit.coloring import is_4_critical, iter_colorings
from kempekit.critical_pipeline import (
    ChordObstruction,
    build_g_star,
    catalog,
    check_g_star,
    fill_face,
    find_separating_chord,
    find_v_good,
    is_special_configuration,
    is_v_good,
    koester_check,
    v_good_certificate,
    two_apex_extension,
    verify_theorem,
)
from kempekit.graph_core import AbstractGraph, PlaneGraph, complete_graph, load_graph, moser_spindle, odd_wheel, star, wheel
from kempekit.kempe import verify_certificate

from oracles import gadget_extends, proper_cycle_colorings

DATA = Path(__file__).parent / "data"
CRITICAL = sorted(DATA.glob("critical*.rot"))


def degree_four(G):
    return next(v for v in range(G.n) if G.degree(v) == 4)


def test_is_v_good_examples():
    W = wheel(4)
    assert is_v_good(W, 0, (4, 1, 2, 1, 3))
    assert not is_v_good(W, 0, (4, 1, 2, 1, 2))
    assert not is_v_good(star(4), 0, (1, 1, 2, 3, 4))
    with pytest.raises(ValueError):
        is_v_good(odd_wheel(5), 0, (4, 1, 2, 1, 2, 3))


def test_find_v_good_already_good():
    G = moser_spindle()
    c = next(c for c in iter_colorings(G, 4) if is_v_good(G, 0, c))
    assert find_v_good(G, 0, c).moves == []


@pytest.mark.parametrize("path", [DATA / "moser.rot"] + CRITICAL, ids=lambda p: p.stem)
def test_find_v_good_every_coloring(path):
    G = load_graph(path)
    assert is_4_critical(G)
    v = degree_four(G)
    for c in iter_colorings(G, 4):
        cert = find_v_good(G, v, c, check=False)
        assert verify_certificate(G, cert) and is_v_good(G, v, cert.end)
        assert not any("does not see three colors" in n for n in cert.notes)


def test_g_star_no_apexes():
    r = build_g_star(star(4), 0, (4, 1, 2, 1, 3), (4, 2, 1, 3, 1))
    assert [e["kind"] for e in r.added] == ["edge"] * 4
    assert r.graph.n == 5 and r.graph.m == 8 and check_g_star(r) == []


def test_g_star_apex_follows_neighbour_rule():
    r = build_g_star(star(4), 0, (4, 1, 1, 2, 3), (4, 1, 2, 1, 3))
    apex = [e for e in r.added if e["kind"] == "apex"]
    assert len(apex) == 1 and apex[0]["ends"] == [1, 2]
    assert r.c1[apex[0]["vertex"]] == 3
    assert check_g_star(r) == []


def test_g_star_of_wheel_is_wheel():
    W = wheel(4)
    r = build_g_star(W, 0, (4, 1, 2, 1, 3), (4, 2, 1, 3, 1))
    assert r.added == [] and r.graph.m == W.m


def test_g_star_rejects_bad_input():
    with pytest.raises(ValueError):
        build_g_star(star(4), 0, (4, 1, 2, 1, 2), (4, 2, 1, 3, 1))
    with pytest.raises(ValueError):
        build_g_star(star(4), 0, (4, 4, 2, 1, 3), (4, 1, 2, 3, 3))


def test_chord_examples():
    assert find_separating_chord((1, 2, 1, 2, 1, 2), (1, 2, 1, 2, 1, 2)) == (0, 3)
    obs = find_separating_chord((1, 2, 1, 2, 1, 2), (1, 2, 3, 1, 2, 3))
    assert isinstance(obs, ChordObstruction) and obs.matches_proof


def test_c5_always_has_chord():
    for a, b in itertools.product(proper_cycle_colorings(5, 4), repeat=2):
        assert isinstance(find_separating_chord(a, b), tuple)


@pytest.mark.parametrize("L", [5, 6])
def test_chord_matches_brute_force(L):
    pairs = [(i, j) for i in range(L) for j in range(i + 2, L) if (i, j) != (0, L - 1)]
    for a, b in itertools.product(proper_cycle_colorings(L, 4), repeat=2):
        ok = [p for p in pairs if a[p[0]] != a[p[1]] and b[p[0]] != b[p[1]]]
        got = find_separating_chord(a, b)
        assert (got == ok[0]) if ok else isinstance(got, ChordObstruction)


def test_two_apex_examples():
    assert two_apex_extension((1, 2, 1, 2), (1, 2, 1, 3))
    assert two_apex_extension((1, 2, 1, 2), (1, 2, 1, 2))
    fig = ((1, 2, 1, 3), (1, 2, 3, 2))
    assert is_special_configuration(*fig)
    assert not two_apex_extension(*fig)


@pytest.mark.parametrize("palette", [(1, 2, 3), (1, 2, 3, 4)])
def test_two_apex_matches_brute_force(palette):
    for a in proper_cycle_colorings(4, len(palette)):
        for b in proper_cycle_colorings(4, 4):
            want = any(gadget_extends(a, palette, s) and gadget_extends(b, (1, 2, 3, 4), s) for s in (0, 1))
            got = two_apex_extension(a, b, palette)
            assert bool(got) == want
            if got:
                x = [a[(got.shift + t) % 4] for t in range(4)]
                y = [b[(got.shift + t) % 4] for t in range(4)]
                for col, w1, w2 in ((x, got.w1[0], got.w2[0]), (y, got.w1[1], got.w2[1])):
                    assert w1 not in (col[0], col[1], col[2]) and w2 not in (col[0], col[2], col[3]) and w1 != w2


def c4():
    return PlaneGraph([[1, 3], [2, 0], [3, 1], [0, 2]])


def test_fill_square_two_colored():
    p = fill_face(c4(), 0, (1, 2, 1, 2), (1, 2, 1, 2))
    assert p.graph.n == 5 and p.cert1.moves == [] and p.cert2.moves == []
    assert p.c1[4] == 3


def test_fill_triangle_noop():
    K = complete_graph(3)
    p = fill_face(K, 0, (1, 2, 3), (1, 2, 3))
    assert p.graph.rotation == K.rotation and p.log == []


def test_fill_special_square_moves_c2():
    p = fill_face(c4(), 0, (1, 2, 1, 3), (1, 2, 3, 2))
    assert p.cert1.moves == [] and len(p.cert2.moves) >= 1
    assert verify_certificate(c4(), p.cert2)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(["star", "wheel", "fan1", "fan2"]), st.integers(0, 10**6))
def test_g_star_random_pairs(kind, seed):
    rng = random.Random(seed)
    G = {"star": star(4), "wheel": wheel(4), "fan1": _fan(1), "fan2": _fan(2)}[kind]
    cols = [c for c in iter_colorings(G, 4) if is_v_good(G, 0, c)]
    one = [c for c in cols if c[0] not in c[1:]]
    c1, c2 = rng.choice(one), rng.choice(cols)
    assert check_g_star(build_g_star(G, 0, c1, c2)) == []


def _fan(rim_edges):
    G = star(4)
    from kempekit.graph_core import add_edge_in_face
    for i in range(rim_edges):
        x, y = G.rotation[0][i], G.rotation[0][i + 1]
        fi = G.dart_face[(0, x)]
        w = G.faces[fi]
        p = next(t for t in range(len(w)) if w[t] == 0 and w[(t + 1) % len(w)] == x)
        G = add_edge_in_face(G, fi, (p + 1) % len(w), (p - 1) % len(w))
        assert G.has_edge(x, y)
    return G


def test_v_good_certificates_constructive_on_moser():
    G = moser_spindle()
    good = [c for c in iter_colorings(G, 4) if is_v_good(G, 0, c)]
    psi = next(c for c in good if len(set(c[1:])) == 3)
    for c in good[::7]:
        r = v_good_certificate(G, 0, psi, c)
        assert r.constructive, r.log
        assert r.certificate.start == c and r.certificate.end == psi
        assert verify_certificate(G, r.certificate)


def test_verify_theorem_examples():
    r = verify_theorem(complete_graph(4))
    assert r["ok"] and r["kc"] == 1 and r["n_colorings"] == 24
    r = verify_theorem(odd_wheel(5))
    assert r["ok"] and r["degree_route"] == "low_degree" and r["checks"]["low_degree"]["ok"]
    W = odd_wheel(5)
    r = verify_theorem(AbstractGraph(6, [e for e in W.edges if e != (1, 2)]))
    assert not r["is_4_critical"] and not r["ok"]


@pytest.mark.parametrize("path", [DATA / "moser.rot"] + CRITICAL, ids=lambda p: p.stem)
def test_verify_theorem_on_files(path):
    r = verify_theorem(load_graph(path))
    assert r["ok"] and r["kc"] == 1
    assert r["checks"]["reach_v_good"]["ok"] and r["checks"]["v_good_class"]["ok"]
    assert r["checks"]["v_good_class"]["fallback"] == 0


def test_koester():
    assert koester_check(complete_graph(4)) and koester_check(odd_wheel(7))
    for G in catalog().values():
        assert koester_check(G)
