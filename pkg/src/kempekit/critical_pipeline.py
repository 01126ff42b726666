"""Kempe equivalence of 4-colorings of 4-critical planar graphs.

This module holds the machinery around a vertex ``v`` of degree four:

* v-good colorings (exactly two neighbours of ``v`` share a color) and the
  reduction of an arbitrary 4-coloring to a v-good one;
* the augmented graph G* (chords or apex vertices between consecutive
  neighbours of ``v``);
* the chord and two-apex case analysis used to complete ``G* - v`` to a
  triangulation carrying both colorings;
* face filling by small patches (apex, chords, two-apex gadget), with
  Kempe changes of the second coloring when no patch fits;
* the constructive pipeline that turns all of the above plus the Fisk
  reduction into a checked certificate between two v-good colorings;
* :func:`verify_theorem`, which checks ``Kc(G, 4) == 1`` exhaustively and
  runs the structural checks along the way.

Where a step has no constructive description the pipeline falls back to
breadth-first search and says so in its log; certificates are always
verified before being returned.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Sequence

from .coloring import Coloring, as_colors, check_cap, is_4_critical, is_3_colorable, is_proper
from .fisk import fisk_reduce
from .graph_core import (
    AbstractGraph,
    GraphError,
    PlaneGraph,
    add_edge_in_face,
    add_vertex_in_face,
    delete_vertex,
    is_triangulation,
    neighbor_cycle,
    odd_wheel,
    complete_graph,
    moser_spindle,
    replace_face,
)
from .kempe import (
    Certificate,
    KempeMove,
    _chain,
    _swapped,
    find_nearest,
    find_path,
    kempe_classes,
    lift_sequence,
    restriction_check,
    verify_certificate,
)

PALETTE = (1, 2, 3, 4)
NO_CAP = 10**9


class PipelineError(RuntimeError):
    pass


# -- v-goodness ---------------------------------------------------------


def _require_degree_four(G: AbstractGraph, v: int) -> None:
    if G.degree(v) != 4:
        raise ValueError(f"vertex {v} has degree {G.degree(v)}, not 4")


def _two_alike(colors, nbrs) -> bool:
    return len({colors[u] for u in nbrs}) == 3


def is_v_good(G: AbstractGraph, v: int, c) -> bool:
    """Exactly two of the four neighbours of ``v`` share a color."""
    _require_degree_four(G, v)
    return _two_alike(as_colors(c), G.adj[v])


def find_v_good(G: AbstractGraph, v: int, c, check: bool = True, cap: int | None = None) -> Certificate:
    """Certificate from ``c`` to a v-good coloring.

    The restriction of ``c`` to ``G - v`` is moved towards a coloring with at
    most three colors by a shortest Kempe path; the path is cut at the first
    coloring with exactly two neighbours of ``v`` alike and that prefix is
    lifted to ``G``.
    """
    _require_degree_four(G, v)
    if check and not is_4_critical(G):
        raise ValueError("graph is not 4-critical")
    colors = as_colors(c)
    k = c.k if isinstance(c, Coloring) else 4
    if _two_alike(colors, G.adj[v]):
        return Certificate(k, colors, [], colors)
    H, keep = delete_vertex(G, v)
    back = {x: i for i, x in enumerate(keep)}
    hn = [back[u] for u in G.adj[v]]
    path = find_nearest(H, tuple(colors[x] for x in keep), k, lambda s: len(set(s)) <= 3, cap=cap)
    if path is None:
        raise PipelineError("no Kempe path to a 3-coloring of G - v")
    notes = []
    if len({path.end[u] for u in hn}) != 3:
        notes.append("3-colored endpoint does not see three colors on N(v)")
    states = [path.start]
    for m in path.moves:
        a, b = m.pair
        states.append(_swapped(states[-1], _chain(H.adj, states[-1], m.anchor, a, b), a, b))
    cut = next((i for i, s in enumerate(states) if _two_alike(s, hn)), None)
    if cut is None:
        notes.append("no v-good prefix; direct search in G")
        cert = find_nearest(G, colors, k, lambda s: _two_alike(s, G.adj[v]), cap=cap)
    else:
        prefix = Certificate(k, path.start, path.moves[:cut], states[cut])
        cert = lift_sequence(G, v, prefix, colors, cap=cap)
        if not _two_alike(cert.end, G.adj[v]):
            notes.append("lifted prefix not v-good; direct search in G")
            cert = find_nearest(G, colors, k, lambda s: _two_alike(s, G.adj[v]), cap=cap)
    cert.notes = cert.notes + notes
    return cert


# -- G* -----------------------------------------------------------------


@dataclass
class GStarResult:
    graph: PlaneGraph
    v: int
    neighbors: tuple[int, ...]
    c1: tuple[int, ...]
    c2: tuple[int, ...]
    added: list[dict]

    def to_dict(self) -> dict:
        from .graph_core import format_rotation
        return {
            "n": self.graph.n,
            "rotation": format_rotation(self.graph),
            "v": self.v,
            "neighbors": list(self.neighbors),
            "c1": list(self.c1),
            "c2": list(self.c2),
            "added": self.added,
        }


def _palette_minus_v(c, v) -> set[int]:
    return {x for i, x in enumerate(c) if i != v}


def build_g_star(G: PlaneGraph, v: int, c1, c2) -> GStarResult:
    """Augment ``G`` around ``v`` so that consecutive neighbours are linked.

    For each clockwise-consecutive pair ``v_i, v_{i+1}`` that is not an edge,
    the edge is added when both colorings distinguish the two ends, and an
    apex ``u`` adjacent to ``v_i, v_{i+1}, v`` otherwise.  An apex over an
    alike pair of ``c1`` copies the ``c1`` color of a neighbour ``z`` of
    ``v_i`` (``z = v_{i-1}``) or of ``v_{i+1}`` (``z = v_{i+2}``) in G*.

    If ``v_i v_{i+1}`` is an edge that does not bound the face at that angle
    of ``v``, an apex is added there as well (logged as ``nonfacial``), so
    that every face at ``v`` is a triangle.
    """
    _require_degree_four(G, v)
    a1, a2 = as_colors(c1), as_colors(c2)
    for c in (a1, a2):
        if not is_proper(G, c, 4):
            raise ValueError("colorings must be proper 4-colorings")
        if not _two_alike(c, G.adj[v]):
            raise ValueError("colorings must be v-good")
    if len(_palette_minus_v(a1, v)) > 3:
        raise ValueError("c1 restricted to G - v must be a 3-coloring")
    palette1 = [x for x in PALETTE if x != a1[v]]
    nb = G.rotation[v]
    plan = []
    for i in range(4):
        x, y = nb[i], nb[(i + 1) % 4]
        if not G.has_edge(x, y):
            both = a1[x] != a1[y] and a2[x] != a2[y]
            plan.append("edge" if both else "apex")
        else:
            face = G.faces[G.dart_face[(v, x)]]
            plan.append("keep" if len(face) == 3 else "nonfacial")
    linked = [p in ("edge", "keep", "nonfacial") for p in plan]

    def in_g_star(i):  # v_i v_{i+1} an edge of G*
        return linked[i % 4]

    g = G.with_outer(G.dart_face[(v, nb[0])])
    c1s, c2s = list(a1), list(a2)
    added = []
    for i in range(4):
        x, y = nb[i], nb[(i + 1) % 4]
        if plan[i] == "keep":
            continue
        fi = g.dart_face[(v, x)]
        walk = g.faces[fi]
        L = len(walk)
        p = next(t for t in range(L) if walk[t] == v and walk[(t + 1) % L] == x)
        if plan[i] == "edge":
            g = add_edge_in_face(g, fi, (p + 1) % L, (p - 1) % L)
            added.append({"kind": "edge", "i": i, "ends": [x, y]})
            continue
        u = g.n
        g = add_vertex_in_face(g, fi, [(p - 1) % L, p, (p + 1) % L])
        entry = {"kind": "apex", "i": i, "vertex": u, "ends": [x, y]}
        if a1[x] == a1[y]:
            if in_g_star(i - 1):
                z = nb[(i - 1) % 4]
            elif in_g_star(i + 1):
                z = nb[(i + 2) % 4]
            else:
                raise PipelineError(f"no vertex z for apex over ({x}, {y}); c2 is not v-good")
            col1 = a1[z]
            entry["z"] = z
        else:
            opts = [col for col in palette1 if col not in (a1[x], a1[y])]
            col1 = opts[0]
        col2 = min(col for col in PALETTE if col not in (a2[x], a2[y], a2[v]))
        if plan[i] == "nonfacial":
            entry["nonfacial"] = True
        c1s.append(col1)
        c2s.append(col2)
        added.append(entry)
    result = GStarResult(g, v, tuple(nb), tuple(c1s), tuple(c2s), added)
    _check_g_star(result)
    return result


def _check_g_star(r: GStarResult) -> None:
    g = r.graph
    if not is_proper(g, r.c1, 4) or not is_proper(g, r.c2, 4):
        raise PipelineError("extended colorings are not proper")
    if len(_palette_minus_v(r.c1, r.v)) > 3:
        raise PipelineError("c1* restricted to G* - v is not a 3-coloring")
    for e in r.added:
        if e["kind"] == "apex" and "z" in e and r.c1[e["vertex"]] != r.c1[e["z"]]:
            raise PipelineError("apex color rule violated")


def check_g_star(r: GStarResult) -> list[str]:
    """Invariant violations of a G* result (empty when all hold)."""
    bad = []
    g = r.graph
    if g.n - g.m + len(g.faces) != 2:
        bad.append("euler")
    if not is_proper(g, r.c1, 4):
        bad.append("c1 not proper")
    if not is_proper(g, r.c2, 4):
        bad.append("c2 not proper")
    if len(_palette_minus_v(r.c1, r.v)) > 3:
        bad.append("c1 not 3-colored off v")
    nb = r.neighbors
    for e in r.added:
        if e["kind"] != "apex" or "z" not in e:
            continue
        i, z = e["i"], e["z"]
        ok_z = (z == nb[(i - 1) % 4] and g.has_edge(z, nb[i])) or (
            z == nb[(i + 2) % 4] and g.has_edge(z, nb[(i + 1) % 4]))
        if not ok_z or r.c1[e["vertex"]] != r.c1[z]:
            bad.append(f"apex rule at {e['vertex']}")
    for i in range(4):
        x, y = nb[i], nb[(i + 1) % 4]
        if not g.has_edge(x, y) and not any(e.get("ends") == [x, y] for e in r.added):
            bad.append(f"pair {x},{y} not linked")
    return bad


# -- chords and the two-apex gadget --------------------------------------


@dataclass
class ChordObstruction:
    """No non-consecutive pair is separated by both colorings."""

    length: int
    c1_classes: list[list[int]]
    c2_classes: list[list[int]]
    matches_proof: bool
    roles_swapped: bool = False

    def to_dict(self) -> dict:
        return {"length": self.length, "c1_classes": self.c1_classes, "c2_classes": self.c2_classes,
                "matches_proof": self.matches_proof, "roles_swapped": self.roles_swapped}


def _classes(col) -> list[list[int]]:
    groups: dict[int, list[int]] = {}
    for i, x in enumerate(col):
        groups.setdefault(x, []).append(i)
    return sorted(groups.values())


def _hexagon_pattern(a, b) -> bool:
    # a alternates two colors; b colors opposite positions alike
    alt = _classes(a) == [[0, 2, 4], [1, 3, 5]]
    opp = _classes(b) == [[0, 3], [1, 4], [2, 5]]
    return alt and opp


def non_consecutive_pairs(L: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(L) for j in range(i + 2, L) if not (i == 0 and j == L - 1)]


def find_separating_chord(c1: Sequence[int], c2: Sequence[int], blocked=()):
    """First non-consecutive pair ``(i, j)`` colored differently by both colorings.

    ``c1`` and ``c2`` list the colors around a cycle of length 5 or 6.
    Pairs in ``blocked`` (already adjacent elsewhere) are skipped.  Returns
    a :class:`ChordObstruction` when no pair qualifies.
    """
    L = len(c1)
    if L not in (5, 6) or len(c2) != L:
        raise ValueError("cycle must have length 5 or 6")
    blocked = {frozenset(p) for p in blocked}
    for i, j in non_consecutive_pairs(L):
        if frozenset((i, j)) in blocked:
            continue
        if c1[i] != c1[j] and c2[i] != c2[j]:
            return i, j
    if L == 6:
        for shift in range(6):
            r1 = [c1[(t + shift) % 6] for t in range(6)]
            r2 = [c2[(t + shift) % 6] for t in range(6)]
            if _hexagon_pattern(r1, r2):
                return ChordObstruction(L, _classes(c1), _classes(c2), True, False)
            if _hexagon_pattern(r2, r1):
                return ChordObstruction(L, _classes(c1), _classes(c2), True, True)
    return ChordObstruction(L, _classes(c1), _classes(c2), False)


@dataclass
class TwoApexResult:
    ok: bool
    shift: int
    w1: tuple[int, int] | None = None
    w2: tuple[int, int] | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def two_apex_faces(x: Sequence[int], w1: int, w2: int) -> list[tuple[int, ...]]:
    """Six triangles filling the 4-face walk ``x`` with apices over the ``x0 x2`` diagonal."""
    x0, x1, x2, x3 = x
    return [(x0, x1, w1), (x1, x2, w1), (x2, x3, w2), (x3, x0, w2), (x0, w1, w2), (x2, w2, w1)]


def _apex_pair(col, palette) -> tuple[int, int] | None:
    # w1 sees x0, x1, x2; w2 sees x0, x2, x3; w1 ~ w2
    opts = [(p, q) for p in palette if p not in (col[0], col[1], col[2])
            for q in palette if q not in (col[0], col[2], col[3]) and q != p]
    return min(opts) if opts else None


def two_apex_shifts(c1: Sequence[int], c2: Sequence[int]) -> list[int]:
    """Placements to try: diagonals alike in ``c1`` first, then alike in ``c2``."""
    def rank(s):
        return (c1[s] != c1[s + 2], c2[s] != c2[s + 2], s)
    return sorted((0, 1), key=rank)


def two_apex_extension(c1: Sequence[int], c2: Sequence[int], palette1=PALETTE) -> TwoApexResult:
    """Extend both colorings of a 4-cycle over the two-apex gadget.

    The gadget puts two adjacent apices ``w1``, ``w2`` inside the cycle
    ``x0 x1 x2 x3``, both joined to ``x0`` and ``x2``, ``w1`` also to ``x1``
    and ``w2`` to ``x3``; it can sit on either diagonal.  ``c1`` must extend
    within ``palette1`` and ``c2`` within four colors.  Per coloring the
    verdict is local: ``w1`` avoids three cycle colors, ``w2`` three others
    and ``w1``.  With a 3-color palette ``c1`` extends iff the diagonal is
    alike and the other two vertices differ; ``c2`` extends iff the diagonal
    is alike or the cycle uses four colors.  The special configuration
    (``c1`` alike on one diagonal only, ``c2`` alike on the other only) has
    no extension on either diagonal.
    """
    if len(c1) != 4 or len(c2) != 4:
        raise ValueError("two-apex extension works on 4-cycles")
    for c in (c1, c2):
        if any(c[i] == c[(i + 1) % 4] for i in range(4)):
            raise ValueError("colorings must be proper on the cycle")
    if any(x not in palette1 for x in c1):
        raise ValueError("c1 must use colors of palette1")
    reasons = []
    for s in two_apex_shifts(c1, c2):
        a = [c1[(s + t) % 4] for t in range(4)]
        b = [c2[(s + t) % 4] for t in range(4)]
        p1 = _apex_pair(a, tuple(palette1))
        p2 = _apex_pair(b, PALETTE)
        if p1 and p2:
            return TwoApexResult(True, s, (p1[0], p2[0]), (p1[1], p2[1]))
        reasons.append(f"shift {s}: " + ("c1" if not p1 else "c2") + " does not extend")
    return TwoApexResult(False, two_apex_shifts(c1, c2)[0], reason="; ".join(reasons))


def is_special_configuration(c1: Sequence[int], c2: Sequence[int]) -> bool:
    """``c1`` alike on exactly one diagonal of a 4-cycle, ``c2`` on exactly the other."""
    d1 = [c1[0] == c1[2], c1[1] == c1[3]]
    d2 = [c2[0] == c2[2], c2[1] == c2[3]]
    return sum(d1) == 1 and sum(d2) == 1 and d1 != d2


# -- face filling ---------------------------------------------------------


@dataclass
class _Plan:
    faces: list[tuple[int, ...]]
    colors: dict[int, tuple[int, int]]
    log: list[str]
    next_id: int


def _plan_generic(cycle, col1, col2, adjacent, next_id, palette1, added=frozenset(), depth=0):
    """Patch for the face walk ``cycle``: chords first, then one apex, then the gadget."""
    L = len(cycle)
    if L == 3:
        return _Plan([tuple(cycle)], {}, [], next_id)
    if depth > 8:
        return None

    def adj(x, y):
        return adjacent(x, y) or frozenset((x, y)) in added

    for i, j in non_consecutive_pairs(L):
        x, y = cycle[i], cycle[j]
        if adj(x, y) or col1[x] == col1[y] or col2[x] == col2[y]:
            continue
        more = added | {frozenset((x, y))}
        A = cycle[i:j + 1]
        B = cycle[j:] + cycle[:i + 1]
        pa = _plan_generic(A, col1, col2, adjacent, next_id, palette1, more, depth + 1)
        if pa is None:
            continue
        pb = _plan_generic(B, col1, col2, adjacent, pa.next_id, palette1, more, depth + 1)
        if pb is None:
            continue
        return _Plan(pa.faces + pb.faces, {**pa.colors, **pb.colors},
                     [f"chord {x}-{y}"] + pa.log + pb.log, pb.next_id)
    o1 = [x for x in palette1 if x not in {col1[t] for t in cycle}]
    o2 = [x for x in PALETTE if x not in {col2[t] for t in cycle}]
    if o1 and o2 and len(set(cycle)) == L:
        u = next_id
        faces = [(cycle[t], cycle[(t + 1) % L], u) for t in range(L)]
        return _Plan(faces, {u: (o1[0], o2[0])}, [f"apex {u} over {list(cycle)}"], next_id + 1)
    if L == 4 and not adj(cycle[0], cycle[2]) and not adj(cycle[1], cycle[3]):
        p = _plan_two_apex(cycle, col1, col2, next_id, palette1)
        if p is not None:
            return p
    return None


def _plan_two_apex(cycle, col1, col2, next_id, palette1):
    a = [col1[x] for x in cycle]
    b = [col2[x] for x in cycle]
    if len(set(a)) > 3 or any(x not in palette1 for x in a):
        return None
    r = two_apex_extension(a, b, palette1)
    if not r:
        return None
    x = [cycle[(r.shift + t) % 4] for t in range(4)]
    w1, w2 = next_id, next_id + 1
    return _Plan(two_apex_faces(x, w1, w2), {w1: r.w1, w2: r.w2}, [f"two-apex {w1},{w2} over {x}"],
                 next_id + 2)


@dataclass
class FacePatch:
    graph: PlaneGraph
    c1: tuple[int, ...]
    c2: tuple[int, ...]
    cert1: Certificate
    cert2: Certificate
    log: list[str] = field(default_factory=list)


def _face_index(G: PlaneGraph, face) -> int:
    if isinstance(face, int):
        return face
    return G.with_outer(face).outer_face


def _default_palette(c1_on_c) -> tuple[int, ...]:
    used = sorted(set(c1_on_c))
    if len(used) > 3:
        return PALETTE
    for x in PALETTE:
        if len(used) == 3:
            break
        if x not in used:
            used.append(x)
    return tuple(sorted(used))


def fill_face(G: PlaneGraph, face, c1, c2, palette1=None, restricted=None, forbidden=None,
              planner=None, max_states: int = 20000) -> FacePatch:
    """Triangulate a facial cycle so that both colorings extend.

    The patch meets ``G`` only in the cycle.  When ``c1`` is a 3-coloring on
    the cycle it is never changed and its extension stays within
    ``palette1``.  If no template fits, ``c2`` (and, when ``c1`` uses four
    colors on the cycle, ``c1``) is moved by a shortest Kempe path in ``G``
    to the nearest coloring for which one does; ``restricted``/``forbidden``
    constrain those moves.

    Raises:
        PipelineError: no template fits within ``max_states`` searched
            colorings.
    """
    fi = _face_index(G, face)
    cycle = list(G.faces[fi])
    if len(set(cycle)) != len(cycle):
        raise PipelineError(f"face {cycle} is not a simple cycle")
    a1, a2 = as_colors(c1), as_colors(c2)
    three = len({a1[x] for x in cycle}) <= 3
    if palette1 is None:
        palette1 = _default_palette([a1[x] for x in cycle])
    planner = planner or _plan_generic

    def plan_for(s1, s2):
        return planner(cycle, s1, s2, G.has_edge, G.n, tuple(palette1))

    log = []
    cert1 = Certificate(4, a1, [], a1)
    cert2 = Certificate(4, a2, [], a2)
    plan = plan_for(a1, a2)
    if plan is None:
        try:
            found = find_nearest(G, a2, 4, lambda s: plan_for(a1, s) is not None, restricted, forbidden,
                                 cap=NO_CAP, max_states=max_states)
        except RuntimeError:
            found = None
        if found is not None:
            cert2 = found
            log.append(f"c2 moved by {len(found)} Kempe changes")
        elif not three:
            found = find_nearest(G, a1, 4, lambda s: plan_for(s, a2) is not None, cap=NO_CAP,
                                 max_states=max_states)
            if found is not None:
                cert1 = found
                log.append(f"c1 moved by {len(found)} Kempe changes")
        if found is None:
            raise PipelineError(f"no patch found for face {cycle}")
        plan = plan_for(cert1.end, cert2.end)
    log.extend(plan.log)
    g = replace_face(G, fi, plan.faces, n=plan.next_id) if len(cycle) > 3 else G
    e1 = list(cert1.end) + [plan.colors[u][0] for u in range(G.n, plan.next_id)]
    e2 = list(cert2.end) + [plan.colors[u][1] for u in range(G.n, plan.next_id)]
    if not (is_proper(g, e1, 4) and is_proper(g, e2, 4)):
        raise PipelineError("patch colorings are not proper")
    return FacePatch(g, tuple(e1), tuple(e2), cert1, cert2, log)


# -- completing G_m - v to a triangulation --------------------


def _plan_completion(cycle, col1, col2, adjacent, next_id, palette1, added=frozenset(), depth=0):
    """Patch following the chord / two-apex case analysis.

    Length 4: the two-apex gadget, unless the colorings form the special
    configuration.  Length 5 or 6: the first separating chord (then any other
    valid chord) splits the cycle and both parts are handled recursively.
    """
    L = len(cycle)
    if L == 3:
        return _Plan([tuple(cycle)], {}, [], next_id)

    def adj(x, y):
        return adjacent(x, y) or frozenset((x, y)) in added

    if L == 4:
        a = [col1[x] for x in cycle]
        b = [col2[x] for x in cycle]
        if adj(cycle[0], cycle[2]) or adj(cycle[1], cycle[3]):
            return None
        p = _plan_two_apex(cycle, col1, col2, next_id, palette1)
        if p is None and len(set(a)) == 2:
            o2 = [x for x in PALETTE if x not in set(b)]
            o1 = [x for x in palette1 if x not in set(a)]
            if o1 and o2:
                u = next_id
                return _Plan([(cycle[t], cycle[(t + 1) % 4], u) for t in range(4)], {u: (o1[0], o2[0])},
                             [f"apex {u} over {list(cycle)}"], next_id + 1)
        if p is None and len(set(a)) == 3 and is_special_configuration(a, b):
            return None
        return p
    if L > 6 or depth > 4:
        return None
    blocked = [(i, j) for i, j in non_consecutive_pairs(L) if adj(cycle[i], cycle[j])]
    candidates = []
    first = find_separating_chord([col1[x] for x in cycle], [col2[x] for x in cycle], blocked)
    if isinstance(first, tuple):
        candidates.append(first)
    for i, j in non_consecutive_pairs(L):
        x, y = cycle[i], cycle[j]
        if (i, j) not in candidates and not adj(x, y) and col1[x] != col1[y] and col2[x] != col2[y]:
            candidates.append((i, j))
    for i, j in candidates:
        x, y = cycle[i], cycle[j]
        more = added | {frozenset((x, y))}
        A = cycle[i:j + 1]
        B = cycle[j:] + cycle[:i + 1]
        pa = _plan_completion(A, col1, col2, adjacent, next_id, palette1, more, depth + 1)
        if pa is None:
            continue
        pb = _plan_completion(B, col1, col2, adjacent, pa.next_id, palette1, more, depth + 1)
        if pb is None:
            continue
        return _Plan(pa.faces + pb.faces, {**pa.colors, **pb.colors},
                     [f"chord {x}-{y}"] + pa.log + pb.log, pb.next_id)
    return None


# -- v-good certificates---------------------------------------------------


@dataclass
class PipelineResult:
    certificate: Certificate
    constructive: bool
    log: list[str]


def _transpose(c, x, y):
    return tuple(y if t == x else x if t == y else t for t in c)


def _palette_moves(G: AbstractGraph, start, target) -> Certificate:
    """Kempe moves renaming the colors of ``start`` to those of ``target``.

    Both colorings must induce the same partition into color classes.
    """
    perm = {}
    for s, t in zip(start, target):
        if perm.setdefault(s, t) != t:
            raise PipelineError("colorings have different color classes")
    cur = tuple(start)
    moves = []
    for _ in range(8):
        wrong = sorted({s for s, t in zip(cur, target) if s != t})
        if not wrong:
            break
        x = wrong[0]
        y = next(t for s, t in zip(cur, target) if s == x)
        done: set[int] = set()
        for v in range(G.n):
            if v in done or cur[v] not in (x, y):
                continue
            ch = _chain(G.adj, cur, v, x, y)
            done.update(ch)
            moves.append(KempeMove(ch[0], (x, y)))
        cur = _transpose(cur, x, y)
    if cur != tuple(target):
        raise PipelineError("palette renaming failed")
    return Certificate(4, tuple(start), moves, cur)


def _restrict_to(G_big, G, cert) -> Certificate:
    return restriction_check(G_big, G, cert)


def v_good_certificate(G: PlaneGraph, v: int, c1, c2, fallback: bool = True) -> PipelineResult:
    """Certificate from ``c2`` to ``c1`` built along the G* construction.

    ``c1`` and ``c2`` must be v-good and ``c1`` must 3-color ``G - v``.  The
    route: build G*; fill every face not at ``v``; make ``c2(v) = 4`` with
    one Kempe change; complete ``G_m - v`` to a triangulation ``N`` along the
    chord / two-apex analysis (search with Kempe changes that never
    recolor to 4 when the special configuration needs the copy-of-H
    construction); reduce with Fisk inside ``N``; rename the palette; project
    back to ``G``.  Any failure falls back to breadth-first search when
    ``fallback`` is set.
    """
    a1, a2 = as_colors(c1), as_colors(c2)
    log: list[str] = []
    try:
        cert = _v_good_route(G, v, a1, a2, log)
        ok = verify_certificate(G, cert)
        if not ok:
            raise PipelineError(f"pipeline certificate invalid: {ok.reason}")
        return PipelineResult(cert, True, log)
    except (PipelineError, GraphError, ValueError) as exc:
        if not fallback:
            raise
        log.append(f"fallback to search: {exc}")
        cert = find_path(G, a2, a1, 4, cap=NO_CAP)
        if cert is None:
            raise PipelineError("colorings are not Kempe equivalent") from exc
        return PipelineResult(cert, False, log)


def _v_good_route(G: PlaneGraph, v: int, a1, a2, log) -> Certificate:
    four = a1[v]
    if four != 4:
        # rename colors so that c1(v) = 4; moves are mapped back at the end
        b1, b2 = _transpose(a1, four, 4), _transpose(a2, four, 4)
        inner = _v_good_route(G, v, b1, b2, log)
        moves = [KempeMove(m.anchor, tuple(sorted(_transpose(m.pair, four, 4)))) for m in inner.moves]
        log.append(f"palette: swapped colors {four} and 4")
        return Certificate(4, a2, moves, a1)
    gs = build_g_star(G, v, a1, a2)
    log.append(f"G*: {len(gs.added)} additions " + ", ".join(e["kind"] for e in gs.added))
    g, e1, e2 = gs.graph, gs.c1, gs.c2
    c2_steps: list[tuple[PlaneGraph, Certificate]] = []
    while True:
        todo = [i for i, f in enumerate(g.faces) if len(f) > 3 and v not in f]
        if not todo:
            break
        patch = fill_face(g, todo[0], e1, e2, palette1=(1, 2, 3))
        if patch.cert1.moves:
            raise PipelineError("face filling changed c1")
        if patch.cert2.moves:
            c2_steps.append((g, patch.cert2))
        log.extend(f"fill: {x}" for x in patch.log)
        g, e1, e2 = patch.graph, patch.c1, patch.c2
    gm = g
    link = neighbor_cycle(gm, v)
    if any(len(f) != 3 for f in gm.faces):
        raise PipelineError("G_m is not a triangulation")
    head = Certificate(4, e2, [], e2)
    if e2[v] != 4:
        m = KempeMove(v, (e2[v], 4))
        chain = _chain(gm.adj, e2, v, e2[v], 4)
        if len(chain) > 1:
            log.append(f"v-move swaps {len(chain)} vertices")
        new = _swapped(e2, chain, *m.pair)
        head = Certificate(4, e2, [m], new)
        e2 = new
    H, keep = delete_vertex(gm, v)
    back = {x: i for i, x in enumerate(keep)}
    c_h = [back[x] for x in link]
    h1 = tuple(e1[x] for x in keep)
    h2 = tuple(e2[x] for x in keep)
    outer = next(i for i, f in enumerate(H.faces) if len(f) == len(c_h) and set(f) == set(c_h))
    H = H.with_outer(outer)
    log.append(f"completion: outer cycle of length {len(c_h)}")
    try:
        patch = fill_face(H, outer, h1, h2, palette1=(1, 2, 3), planner=_plan_completion,
                          restricted=range(H.n), forbidden=4)
        log.extend(f"completion: {x}" for x in patch.log)
    except PipelineError:
        patch = fill_face(H, outer, h1, h2, palette1=(1, 2, 3), restricted=range(H.n), forbidden=4)
        log.append("completion: special configuration; copy-of-H construction replaced by search")
        log.extend(f"completion: {x}" for x in patch.log)
    N = patch.graph
    if not is_triangulation(N):
        raise PipelineError("completion is not a triangulation")
    n1, n2 = patch.c1, patch.c2
    fisk = fisk_reduce(N, n2)
    rename = _palette_moves(N, fisk.end, n1)
    n_cert = Certificate(4, n2, fisk.moves + rename.moves, n1, restricted=frozenset(range(N.n)), forbidden=4)
    if not verify_certificate(N, n_cert):
        raise PipelineError("certificate in N does not verify")
    h_cert = restriction_check(N, H, n_cert)
    if patch.cert2.moves:
        pre = patch.cert2
        h_cert = Certificate(4, pre.start, pre.moves + h_cert.moves, h_cert.end,
                             restricted=frozenset(range(H.n)), forbidden=4)
    lifted = lift_sequence(gm, v, h_cert, e2, cap=NO_CAP)
    if lifted.notes:
        log.extend(lifted.notes)
    if lifted.end[v] != e1[v] and lifted.end[:v] + lifted.end[v + 1:] == e1[:v] + e1[v + 1:]:
        # c1(v) = 4 is absent from N(v), so v alone is a chain
        fix = KempeMove(v, (lifted.end[v], e1[v]))
        lifted = Certificate(4, lifted.start, lifted.moves + [fix], e1, notes=lifted.notes)
    if lifted.end != e1:
        raise PipelineError("lift to G_m does not reach c1")
    gm_cert = head.then(lifted)
    pieces = [restriction_check(gb, G, cert) for gb, cert in c2_steps]
    pieces.append(restriction_check(gm, G, gm_cert))
    out = Certificate(4, a2, [], a2)
    for p in pieces:
        out = out.then(p)
    return out


# -- theorem harness -------------------------------------------------------


def koester_check(G: AbstractGraph) -> bool:
    """Minimum degree is at most four."""
    return G.n > 0 and min(G.degree(v) for v in range(G.n)) <= 4


def catalog() -> dict[str, PlaneGraph]:
    return {"K4": complete_graph(4), "W5": odd_wheel(5), "W7": odd_wheel(7), "W9": odd_wheel(9),
            "moser": moser_spindle()}


def _criticality_reason(G: AbstractGraph) -> str:
    if is_3_colorable(G):
        return "graph is 3-colorable"
    if any(G.degree(v) == 0 for v in range(G.n)):
        return "isolated vertex"
    for e in G.edges:
        H = AbstractGraph(G.n, [f for f in G.edges if f != e])
        if not is_3_colorable(H):
            return f"G - {e[0]}{e[1]} is still not 3-colorable"
    return ""


def verify_theorem(G: AbstractGraph, cap: int | None = None, constructive: bool = True) -> dict:
    """Exhaustive check that the 4-colorings of ``G`` form one Kempe class.

    The report also carries structural checks: the low-degree route
    when a vertex of degree at most 3 exists, and for a degree-4 vertex
    (when present) reachability of v-good colorings from every coloring and
    connectivity of the v-good colorings.
    """
    t0 = time.perf_counter()
    check_cap(G, cap)
    report: dict = {"n": G.n, "m": G.m}
    reason = _criticality_reason(G)
    report["is_4_critical"] = not reason
    if reason:
        report["reason"] = reason
    classes = kempe_classes(G, 4, cap)
    report["n_colorings"] = classes.total
    report["kc"] = classes.count
    report["class_sizes"] = classes.sizes
    report["min_degree_at_most_4"] = koester_check(G)
    checks: dict = {}
    low = [v for v in range(G.n) if G.degree(v) <= 3]
    if low:
        v = low[0]
        H, _ = delete_vertex(G, v)
        kc_h = kempe_classes(H, 4, cap).count
        checks["low_degree"] = {"vertex": v, "degree": G.degree(v), "kc_minus_v": kc_h,
                            "ok": kc_h == 1 and classes.count == 1}
        report["degree_route"] = "low_degree"
    else:
        report["degree_route"] = "degree_four"
    four = [v for v in range(G.n) if G.degree(v) == 4]
    if four and not reason:
        checks.update(_degree_four_checks(G, four[0], classes, constructive and isinstance(G, PlaneGraph)))
    elif not low:
        checks["min_degree"] = {"ok": False, "reason": "no vertex of degree <= 4"}
    report["checks"] = checks
    report["ok"] = bool(not reason and classes.count == 1 and report["min_degree_at_most_4"]
                        and all(c.get("ok", True) for c in checks.values()))
    report["elapsed"] = round(time.perf_counter() - t0, 3)
    return report


def _degree_four_checks(G, v, classes, constructive) -> dict:
    idx = classes.class_index()
    good = [c for cls in classes.classes for c in cls if _two_alike(c, G.adj[v])]
    failures = 0
    for cls in classes.classes:
        for c in cls:
            cert = find_v_good(G, v, c, check=False, cap=NO_CAP)
            if not (verify_certificate(G, cert) and _two_alike(cert.end, G.adj[v])):
                failures += 1
    out = {"reach_v_good": {"vertex": v, "colorings": classes.total, "failures": failures, "ok": failures == 0}}
    one_class = len({idx[c] for c in good}) <= 1
    out["v_good_class"] = {"vertex": v, "v_good": len(good), "connected": one_class, "ok": one_class}
    if constructive:
        psi = next((c for c in good if len({x for i, x in enumerate(c) if i != v}) <= 3), None)
        if psi is not None:
            built = fell_back = 0
            for c in good:
                r = v_good_certificate(G, v, psi, c)
                if not verify_certificate(G, r.certificate):
                    fell_back = -1
                    break
                built += r.constructive
                fell_back += not r.constructive
            out["v_good_class"]["constructive"] = built
            out["v_good_class"]["fallback"] = fell_back
            out["v_good_class"]["ok"] = one_class and fell_back >= 0
    return out


def brute_force_count(G: AbstractGraph, k: int) -> int:
    """Count proper k-colorings over the full product; independent of the backtracking."""
    return sum(1 for t in itertools.product(range(1, k + 1), repeat=G.n)
               if all(t[u] != t[w] for u, w in G.edges))
