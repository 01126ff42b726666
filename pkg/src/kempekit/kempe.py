"""Kempe chains, Kempe changes and Kempe classes.

A move is stored as ``(anchor, {a, b})``; the chain it swaps is recomputed
from the coloring it is applied to.  Single-vertex chains are ordinary
moves.  Moves generated by this module always use the smallest vertex of
the chain as anchor, and are listed by anchor, then by color pair.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

from .coloring import Coloring, ColoringError, as_colors, check_cap, is_proper, iter_colorings
from .graph_core import AbstractGraph, delete_vertex


@dataclass(frozen=True)
class KempeMove:
    anchor: int
    pair: tuple[int, int]

    def __post_init__(self):
        a, b = self.pair
        if a == b:
            raise ValueError("a Kempe move needs two distinct colors")
        object.__setattr__(self, "pair", (min(a, b), max(a, b)))

    def to_dict(self) -> dict:
        return {"anchor": self.anchor, "colors": list(self.pair)}


@dataclass
class Certificate:
    """A replayable sequence of Kempe changes from ``start`` to ``end``.

    ``restricted``/``forbidden`` record a restriction the sequence claims to
    respect: no move recolors a vertex of ``restricted`` to ``forbidden``.
    """

    k: int
    start: tuple[int, ...]
    moves: list[KempeMove]
    end: tuple[int, ...]
    restricted: frozenset[int] | None = None
    forbidden: int | None = None
    notes: list[str] = field(default_factory=list, compare=False)

    def __post_init__(self):
        self.start = as_colors(self.start)
        self.end = as_colors(self.end)
        if self.restricted is not None:
            self.restricted = frozenset(self.restricted)

    def __len__(self) -> int:
        return len(self.moves)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "start": list(self.start),
            "end": list(self.end),
            "moves": [m.to_dict() for m in self.moves],
            "options": {
                "restricted": None if self.restricted is None else sorted(self.restricted),
                "forbidden_color": self.forbidden,
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "Certificate":
        opts = d.get("options") or {}
        restricted = opts.get("restricted")
        return cls(
            k=int(d["k"]),
            start=tuple(d["start"]),
            moves=[KempeMove(int(m["anchor"]), tuple(m["colors"])) for m in d["moves"]],
            end=tuple(d["end"]),
            restricted=None if restricted is None else frozenset(restricted),
            forbidden=opts.get("forbidden_color"),
        )

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        return cls.from_dict(json.loads(text))

    def then(self, other: "Certificate") -> "Certificate":
        if other.start != self.end:
            raise ValueError("certificates do not compose")
        return Certificate(self.k, self.start, self.moves + other.moves, other.end,
                           notes=self.notes + other.notes)


@dataclass
class Verdict:
    ok: bool
    index: int | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


@dataclass
class ClassReport:
    total: int
    count: int
    sizes: list[int]
    witnesses: list[tuple[int, ...]]
    classes: list[list[tuple[int, ...]]] = field(repr=False)

    def class_index(self) -> dict[tuple[int, ...], int]:
        return {c: i for i, cls in enumerate(self.classes) for c in cls}


# -- primitives ---------------------------------------------------------


def _chain(adj, colors, v, a, b) -> list[int]:
    seen = {v}
    stack = [v]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen and (colors[y] == a or colors[y] == b):
                seen.add(y)
                stack.append(y)
    return sorted(seen)


def _swapped(colors, chain, a, b) -> tuple[int, ...]:
    out = list(colors)
    for x in chain:
        out[x] = b if out[x] == a else a
    return tuple(out)


def kempe_chain(G: AbstractGraph, c, v: int, pair) -> list[int]:
    """Vertices of the ``{a, b}``-chain through ``v``, sorted.

    Raises:
        ColoringError: ``c(v)`` is not one of the two colors.
    """
    colors = as_colors(c)
    a, b = pair
    if a == b:
        raise ColoringError("chain colors must differ")
    if colors[v] not in (a, b):
        raise ColoringError(f"vertex {v} has color {colors[v]}, not in {{{a}, {b}}}")
    return _chain(G.adj, colors, v, a, b)


def apply_move(G: AbstractGraph, c, move: KempeMove):
    """Swap the two colors of ``move`` on its chain.  Returns the same type as ``c``."""
    colors = as_colors(c)
    a, b = move.pair
    out = _swapped(colors, kempe_chain(G, colors, move.anchor, move.pair), a, b)
    return Coloring(c.k, out) if isinstance(c, Coloring) else out


def _allowed(colors, chain, pair, restricted, forbidden) -> bool:
    if restricted is None or forbidden not in pair:
        return True
    return not any(colors[x] != forbidden and x in restricted for x in chain)


def kempe_moves(G: AbstractGraph, colors: Sequence[int], k: int,
                restricted=None, forbidden=None) -> Iterator[tuple[KempeMove, tuple[int, ...]]]:
    """All distinct Kempe changes of ``colors``, in (anchor, pair) order."""
    adj = G.adj
    for v in range(G.n):
        cv = colors[v]
        for b in range(1, k + 1):
            if b == cv:
                continue
            chain = _chain(adj, colors, v, cv, b)
            if chain[0] != v:
                continue
            pair = (min(cv, b), max(cv, b))
            if not _allowed(colors, chain, pair, restricted, forbidden):
                continue
            yield KempeMove(v, pair), _swapped(colors, chain, cv, b)


def _kempe_successors(adj, n, colors, pairs) -> Iterator[tuple[int, ...]]:
    # every chain for every pair; order irrelevant
    for a, b in pairs:
        seen = set()
        for v in range(n):
            if v in seen or (colors[v] != a and colors[v] != b):
                continue
            chain = _chain(adj, colors, v, a, b)
            seen.update(chain)
            yield _swapped(colors, chain, a, b)


# -- classes ------------------------------------------------------------


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, x: int, y: int) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if self.rank[rx] < self.rank[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        if self.rank[rx] == self.rank[ry]:
            self.rank[rx] += 1
        return True


def kempe_classes(G: AbstractGraph, k: int, cap: int | None = None) -> ClassReport:
    """Exact partition of the proper k-colorings of ``G`` into Kempe classes.

    Every coloring is joined (union-find) to the result of swapping each of
    its chains.
    """
    check_cap(G, cap)
    cols = list(iter_colorings(G, k))
    index = {c: i for i, c in enumerate(cols)}
    uf = UnionFind(len(cols))
    pairs = [(a, b) for a in range(1, k + 1) for b in range(a + 1, k + 1)]
    adj, n = G.adj, G.n
    for i, c in enumerate(cols):
        for d in _kempe_successors(adj, n, c, pairs):
            uf.union(i, index[d])
    groups: dict[int, list[tuple[int, ...]]] = {}
    for i, c in enumerate(cols):
        groups.setdefault(uf.find(i), []).append(c)
    classes = sorted(groups.values(), key=lambda g: g[0])
    return ClassReport(
        total=len(cols),
        count=len(classes),
        sizes=sorted((len(g) for g in classes), reverse=True),
        witnesses=[g[0] for g in classes],
        classes=classes,
    )


def kc(G: AbstractGraph, k: int, cap: int | None = None) -> int:
    return kempe_classes(G, k, cap).count


# -- search -------------------------------------------------------------


def _search(G, k, start, goal: Callable[[tuple[int, ...]], bool], restricted=None, forbidden=None,
            max_states: int | None = None):
    start = as_colors(start)
    parent: dict[tuple[int, ...], tuple | None] = {start: None}
    queue = deque([start])
    found = start if goal(start) else None
    while queue and found is None:
        s = queue.popleft()
        for move, t in kempe_moves(G, s, k, restricted, forbidden):
            if t in parent:
                continue
            parent[t] = (s, move)
            if goal(t):
                found = t
                break
            if max_states is not None and len(parent) > max_states:
                raise RuntimeError(f"search exceeded {max_states} states")
            queue.append(t)
    if found is None:
        return None
    moves = []
    s = found
    while parent[s] is not None:
        s, move = parent[s]
        moves.append(move)
    moves.reverse()
    return Certificate(k, start, moves, found,
                       restricted=restricted, forbidden=forbidden if restricted is not None else None)


def find_path(G: AbstractGraph, c1, c2, k: int | None = None, restricted: Iterable[int] | None = None,
              forbidden: int | None = None, cap: int | None = None,
              max_states: int | None = None) -> Certificate | None:
    """Shortest Kempe-change sequence from ``c1`` to ``c2``, or ``None``.

    With ``restricted=S`` and ``forbidden=f`` only moves that never recolor
    a vertex of ``S`` to ``f`` are allowed (``S = V``, ``f = 4`` gives
    K_V-equivalence).
    """
    check_cap(G, cap)
    if k is None:
        k = c1.k
    target = as_colors(c2)
    if restricted is not None:
        restricted = frozenset(restricted)
        if forbidden is None:
            raise ValueError("a restriction set needs a forbidden color")
    return _search(G, k, c1, lambda s: s == target, restricted, forbidden, max_states)


def find_nearest(G: AbstractGraph, c, k: int, goal: Callable[[tuple[int, ...]], bool],
                 restricted=None, forbidden=None, cap: int | None = None,
                 max_states: int | None = None) -> Certificate | None:
    """Shortest certificate from ``c`` to any coloring satisfying ``goal``."""
    check_cap(G, cap)
    if restricted is not None:
        restricted = frozenset(restricted)
    return _search(G, k, c, goal, restricted, forbidden, max_states)


def replay(G: AbstractGraph, start, moves: Iterable[KempeMove]) -> tuple[int, ...]:
    s = as_colors(start)
    for m in moves:
        s = apply_move(G, s, m)
    return s


def verify_certificate(G: AbstractGraph, cert: Certificate) -> Verdict:
    """Replay ``cert`` on ``G``.

    The failure index is the position of the offending move; ``len(moves)``
    means the replay ended at the wrong coloring, ``-1`` a bad start.
    """
    k = cert.k
    s = cert.start
    try:
        if not is_proper(G, s, k):
            return Verdict(False, -1, "start coloring is not proper")
    except ColoringError as exc:
        return Verdict(False, -1, str(exc))
    for i, m in enumerate(cert.moves):
        a, b = m.pair
        if not (0 <= m.anchor < G.n):
            return Verdict(False, i, f"anchor {m.anchor} not a vertex")
        if not (1 <= a <= k and 1 <= b <= k):
            return Verdict(False, i, f"colors {m.pair} outside palette")
        if s[m.anchor] not in m.pair:
            return Verdict(False, i, f"anchor {m.anchor} has color {s[m.anchor]}, not in {m.pair}")
        chain = _chain(G.adj, s, m.anchor, a, b)
        if not _allowed(s, chain, m.pair, cert.restricted, cert.forbidden):
            return Verdict(False, i, f"move recolors a restricted vertex to {cert.forbidden}")
        s = _swapped(s, chain, a, b)
        if not is_proper(G, s, k):
            return Verdict(False, i, "intermediate coloring is not proper")
    if s != cert.end:
        return Verdict(False, len(cert.moves), "replay does not reach the end coloring")
    return Verdict(True)


def restriction_check(G_big: AbstractGraph, G_small: AbstractGraph, cert: Certificate,
                      vertex_map: Sequence[int] | None = None) -> Certificate:
    """Project a certificate on ``G_big`` onto a subgraph.

    ``vertex_map[i]`` is the ``G_big`` vertex of ``G_small`` vertex ``i``
    (identity on a prefix by default).  Each big move swaps a chain whose
    trace on the subgraph is a union of subgraph chains; each of those
    becomes one move.
    """
    if vertex_map is None:
        vertex_map = list(range(G_small.n))
    for u, v in G_small.edges:
        if not G_big.has_edge(vertex_map[u], vertex_map[v]):
            raise ValueError(f"edge {u}-{v} of the subgraph is missing from the supergraph")
    verdict = verify_certificate(G_big, cert)
    if not verdict:
        raise ValueError(f"certificate invalid on the supergraph: {verdict.reason} (move {verdict.index})")
    back = {x: i for i, x in enumerate(vertex_map)}

    def project(s):
        return tuple(s[x] for x in vertex_map)

    s = cert.start
    small = project(s)
    moves = []
    for m in cert.moves:
        a, b = m.pair
        chain = _chain(G_big.adj, s, m.anchor, a, b)
        s = _swapped(s, chain, a, b)
        left = sorted(back[x] for x in chain if x in back)
        done: set[int] = set()
        for x in left:
            if x in done:
                continue
            sub = _chain(G_small.adj, small, x, a, b)
            done.update(sub)
            moves.append(KempeMove(x, m.pair))
            small = _swapped(small, sub, a, b)
    assert small == project(s)
    restricted = None
    if cert.restricted is not None:
        restricted = frozenset(i for i, x in enumerate(vertex_map) if x in cert.restricted)
    return Certificate(cert.k, project(cert.start), moves, small, restricted,
                       cert.forbidden if restricted is not None else None)


def lift_sequence(G: AbstractGraph, v: int, cert: Certificate, start, cap: int | None = None) -> Certificate:
    """Lift a certificate on ``G - v`` to ``G``, starting from ``start``.

    ``G - v`` is numbered as by :func:`graph_core.delete_vertex`.  Each move
    is replayed in ``G``; when the chain through the anchor also picks up
    ``v`` together with other chains of ``G - v``, ``v`` is first recolored
    to a color missing from its neighbourhood and from the pair.  Such a
    color exists whenever ``deg(v) < k``.  A step that still cannot be
    lifted exactly falls back to breadth-first search in ``G``.
    """
    H, keep = delete_vertex(G, v)
    k = cert.k
    s = as_colors(start)
    if tuple(s[x] for x in keep) != cert.start:
        raise ValueError("start does not restrict to the certificate's start")
    moves: list[KempeMove] = []
    notes: list[str] = []
    h = cert.start
    for i, m in enumerate(cert.moves):
        a, b = m.pair
        h_chain = _chain(H.adj, h, m.anchor, a, b)
        h_next = _swapped(h, h_chain, a, b)
        want = {keep[x] for x in h_chain}
        g_anchor = keep[m.anchor]
        chain = _chain(G.adj, s, g_anchor, a, b)
        if v in chain and set(chain) - {v} != want:
            used = {s[u] for u in G.adj[v]} | {a, b}
            free = [d for d in range(1, k + 1) if d not in used]
            if free:
                d = free[0]
                pre = KempeMove(v, (s[v], d))
                s = _swapped(s, [v], s[v], d)
                moves.append(pre)
                chain = _chain(G.adj, s, g_anchor, a, b)
        if v not in chain or set(chain) - {v} == want:
            s = _swapped(s, chain, a, b)
            moves.append(KempeMove(chain[0], m.pair))
        else:
            notes.append(f"step {i}: fell back to search")
            sub = find_nearest(G, s, k, lambda t: tuple(t[x] for x in keep) == h_next, cap=cap)
            if sub is None:
                raise RuntimeError(f"cannot lift step {i}")
            moves.extend(sub.moves)
            s = sub.end
        h = h_next
    return Certificate(k, as_colors(start), moves, s, notes=notes)
