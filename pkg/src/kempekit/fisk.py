"""Reduction of 4-colorings of 3-colorable triangulations to the 3-coloring.

Every 4-coloring ``f`` of a 3-colorable plane triangulation is carried to a
3-coloring by Kempe changes that never recolor a vertex to color 4.  Each
step is one of

* for a nonsingular edge colored ``{a, 4}``, a cycle of nonsingular
  ``{a, 4}`` edges is found and the two colors other than ``a`` and 4 are
  swapped strictly inside it, which makes every edge of the cycle singular
  and leaves all other edges as they were, or
* when no such edge exists, a color-4 vertex whose neighbour cycle sees
  only two colors is recolored to the third one.

An edge ``xy`` lying in triangles ``xyz`` and ``xyw`` is singular when
``f(z) == f(w)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import networkx as nx

from .coloring import Coloring, as_colors, is_proper, three_coloring
from .graph_core import GraphError, PlaneGraph, interior_vertices, is_triangulation, neighbor_cycle, region_faces
from .kempe import Certificate, KempeMove, _chain, _swapped

FOUR = 4


class FiskError(RuntimeError):
    """A precondition failed or an invariant of the reduction broke."""


@dataclass(frozen=True)
class EdgeVerdict:
    pair: tuple[int, int]
    singular: bool
    apexes: tuple[int, int]


class EdgeClassification(dict):
    """Maps each edge ``(x, y)``, ``x < y``, to its :class:`EdgeVerdict`."""

    def nonsingular(self, pair=None) -> list[tuple[int, int]]:
        out = [e for e, ev in self.items() if not ev.singular]
        if pair is not None:
            pair = tuple(sorted(pair))
            out = [e for e in out if self[e].pair == pair]
        return sorted(out)

    def count_nonsingular(self) -> int:
        return sum(1 for ev in self.values() if not ev.singular)


def _third(face, x, y):
    return next(z for z in face if z != x and z != y)


def classify_edges(G: PlaneGraph, f) -> EdgeClassification:
    if not is_triangulation(G):
        raise FiskError("edge classification needs a triangulation")
    colors = as_colors(f)
    out = EdgeClassification()
    for x, y in G.edges:
        z = _third(G.faces[G.dart_face[(x, y)]], x, y)
        w = _third(G.faces[G.dart_face[(y, x)]], x, y)
        pair = tuple(sorted((colors[x], colors[y])))
        out[(x, y)] = EdgeVerdict(pair, colors[z] == colors[w], (z, w))
    return out


def count_nonsingular(G: PlaneGraph, f) -> int:
    return classify_edges(G, f).count_nonsingular()


def _canonical_cycle(cycle) -> tuple[int, ...]:
    i = cycle.index(min(cycle))
    fwd = tuple(cycle[i:]) + tuple(cycle[:i])
    back = (fwd[0],) + tuple(reversed(fwd[1:]))
    return min(fwd, back)


def _outer(G: PlaneGraph) -> int:
    return 0 if G.outer_face is None else G.outer_face


def find_nonsingular_cycle(G: PlaneGraph, f, pair, classification: EdgeClassification | None = None):
    """Innermost simple cycle of nonsingular edges colored ``pair``.

    Innermost means fewest faces on the side away from the outer face (face
    0 when none is designated); ties go to the smaller canonical vertex
    sequence.

    Raises:
        FiskError: the nonsingular ``pair`` edges contain no cycle.
    """
    cls = classification if classification is not None else classify_edges(G, f)
    edges = cls.nonsingular(pair)
    if not edges:
        raise FiskError(f"no nonsingular edge colored {tuple(sorted(pair))}")
    S = nx.Graph(edges)
    outer = _outer(G)
    best = None
    for cyc in nx.simple_cycles(S):
        if len(cyc) < 3:
            continue
        canon = _canonical_cycle(cyc)
        key = (len(region_faces(G, canon, outer)), canon)
        if best is None or key < best:
            best = key
    if best is None:
        raise FiskError(
            f"nonsingular {tuple(sorted(pair))} edges form a forest; no simple cycle "
            "(graph not 3-colorable or classification broken)")
    return list(best[1])


@dataclass(frozen=True)
class VertexRecolor:
    vertex: int
    color: int
    kind: str = "vertex_recolor"


@dataclass(frozen=True)
class CycleInterchange:
    cycle: tuple[int, ...]
    pair: tuple[int, int]
    kind: str = "cycle_interchange"


def select_step(G: PlaneGraph, f, classification: EdgeClassification | None = None):
    """Next reduction step for ``f``.

    A nonsingular edge colored ``{a, 4}`` is used whenever one exists (the
    lexicographically first edge decides ``a``).  Otherwise every color-4
    vertex sees only two colors on its neighbour cycle, and the first such
    vertex is recolored.
    """
    colors = as_colors(f)
    if FOUR not in colors:
        raise FiskError("coloring already avoids color 4; no step needed")
    cls = classification if classification is not None else classify_edges(G, colors)
    for e in cls.nonsingular():
        pair = cls[e].pair
        if FOUR in pair:
            a = pair[0]
            cycle = find_nonsingular_cycle(G, colors, pair, cls)
            return CycleInterchange(tuple(cycle), tuple(sorted({1, 2, 3} - {a})))
    for v in range(G.n):
        if colors[v] != FOUR:
            continue
        seen = {colors[u] for u in neighbor_cycle(G, v)}
        if len(seen) == 2:
            (a,) = {1, 2, 3} - seen
            return VertexRecolor(v, a)
    raise FiskError("color-4 vertex with a 3-colored neighbour cycle but no nonsingular {a,4} edge")


def interchange_interior(G: PlaneGraph, f, cycle, pair):
    """Swap ``pair`` on the vertices strictly inside ``cycle``.

    Returns the new coloring and one Kempe move per ``pair``-chain inside.
    The cycle must avoid both colors of ``pair``, so no chain leaves the
    interior.
    """
    colors = as_colors(f)
    b, c = pair
    if any(colors[x] in (b, c) for x in cycle):
        raise FiskError(f"cycle uses a color of {tuple(pair)}")
    inside = interior_vertices(G, cycle, _outer(G))
    moves = []
    done: set[int] = set()
    for x in sorted(inside):
        if x in done or colors[x] not in (b, c):
            continue
        chain = _chain(G.adj, colors, x, b, c)
        done.update(chain)
        if not set(chain) <= inside:
            raise FiskError("chain escapes the cycle interior")
        colors = _swapped(colors, chain, b, c)
        moves.append(KempeMove(chain[0], (b, c)))
    out = Coloring(f.k, colors) if isinstance(f, Coloring) else colors
    return out, moves


@dataclass
class StepRecord:
    kind: str
    detail: dict
    nonsingular_before: int
    nonsingular_after: int
    moves: int

    def to_dict(self) -> dict:
        return {"kind": self.kind, **self.detail, "nonsingular_before": self.nonsingular_before,
                "nonsingular_after": self.nonsingular_after, "moves": self.moves}


def check_preconditions(G: PlaneGraph, f) -> None:
    if not is_triangulation(G):
        raise FiskError("input graph is not a triangulation")
    colors = as_colors(f)
    if not is_proper(G, colors, 4):
        raise FiskError("input is not a proper 4-coloring")
    if three_coloring(G) is None:
        raise FiskError("triangulation is not 3-colorable")


def fisk_trace(G: PlaneGraph, f, check: bool = True) -> tuple[Certificate, list[StepRecord]]:
    """Run the reduction, returning the certificate and a per-step log."""
    if check:
        check_preconditions(G, f)
    start = as_colors(f)
    colors = start
    moves: list[KempeMove] = []
    log: list[StepRecord] = []
    limit = 4 * (G.n + G.m) + 8
    while FOUR in colors:
        if len(log) > limit:
            raise FiskError("reduction does not terminate")
        cls = classify_edges(G, colors)
        before = cls.count_nonsingular()
        try:
            step = select_step(G, colors, cls)
        except GraphError as exc:
            raise FiskError(str(exc)) from exc
        if isinstance(step, VertexRecolor):
            v, a = step.vertex, step.color
            colors = _swapped(colors, [v], FOUR, a)
            new = [KempeMove(v, (a, FOUR))]
            detail = {"vertex": v, "color": a}
        else:
            colors, new = interchange_interior(G, colors, step.cycle, step.pair)
            detail = {"cycle": list(step.cycle), "pair": list(step.pair)}
        after = count_nonsingular(G, colors)
        if isinstance(step, CycleInterchange) and after >= before:
            raise FiskError(f"interchange did not reduce nonsingular edges ({before} -> {after})")
        moves.extend(new)
        log.append(StepRecord(step.kind, detail, before, after, len(new)))
    cert = Certificate(4, start, moves, colors, restricted=frozenset(range(G.n)), forbidden=FOUR)
    return cert, log


def fisk_reduce(G: PlaneGraph, f) -> Certificate:
    """K_V certificate from ``f`` to a 3-coloring of the triangulation ``G``."""
    return fisk_trace(G, f)[0]
