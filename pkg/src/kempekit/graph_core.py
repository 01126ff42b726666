"""Plane graphs given by rotation systems.

A plane graph is stored as a rotation system: for every vertex, the cyclic
clockwise order of its neighbours.  Faces are recovered by the usual
next-edge traversal.  The convention used throughout the package is:

    after arriving at ``v`` along the dart ``(u, v)``, leave along
    ``(v, w)`` where ``w`` is the neighbour *preceding* ``u`` in the
    clockwise rotation at ``v``.

With this rule bounded faces of a drawing are traced clockwise and the
unbounded face counter-clockwise.  Every region computation in the package
(interiors of cycles, face filling, edge insertion) is expressed in terms of
this rule.

Embeddings are always supplied by the caller.  There is no planarity test;
an embedding that is not spherical is rejected by the Euler check.
"""

from __future__ import annotations

from collections import deque
from pathlib import Path
from typing import Iterable, Sequence

import networkx as nx

Walk = tuple[int, ...]


class GraphError(ValueError):
    """Raised for malformed graphs or embeddings."""


class GraphFormatError(GraphError):
    """Raised when a graph file cannot be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class AbstractGraph:
    """A simple undirected graph on vertices ``0..n-1`` without an embedding."""

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 0:
            raise GraphError("vertex count must be non-negative")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        self.n = n
        self.adj: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(s)) for s in nbrs)
        self._adjset = tuple(frozenset(s) for s in nbrs)
        self.edges: tuple[tuple[int, int], ...] = tuple(
            (u, v) for u in range(n) for v in self.adj[u] if u < v
        )

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adjset[u]

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        out = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp, queue = [s], deque([s])
            while queue:
                x = queue.popleft()
                for y in self.adj[x]:
                    if not seen[y]:
                        seen[y] = True
                        comp.append(y)
                        queue.append(y)
            out.append(sorted(comp))
        return out

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def to_abstract(self) -> "AbstractGraph":
        return AbstractGraph(self.n, self.edges)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, m={self.m})"


class PlaneGraph(AbstractGraph):
    """Simple graph with a combinatorial embedding on the sphere.

    Args:
        rotation: ``rotation[v]`` lists the neighbours of ``v`` in clockwise
            order.
        outer: optional designated outer face, given either as a face index
            or as a closed vertex walk (last edge implicit).  A walk matches
            a face if it equals the face's vertex sequence up to cyclic
            shift, or failing that, up to cyclic shift and reversal.

    Raises:
        GraphError: asymmetric or repeated adjacencies, loops, a failed Euler
            check, or an outer walk that is not a face.
    """

    def __init__(self, rotation: Sequence[Sequence[int]], outer=None):
        n = len(rotation)
        rot = tuple(tuple(int(u) for u in r) for r in rotation)
        for v, r in enumerate(rot):
            if len(set(r)) != len(r):
                raise GraphError(f"duplicate neighbour in rotation of vertex {v}")
            for u in r:
                if not 0 <= u < n:
                    raise GraphError(f"neighbour {u} of vertex {v} out of range")
                if u == v:
                    raise GraphError(f"loop at vertex {v}")
        for v, r in enumerate(rot):
            for u in r:
                if v not in rot[u]:
                    raise GraphError(f"asymmetric adjacency: {v}->{u} without {u}->{v}")
        super().__init__(n, ((v, u) for v in range(n) for u in rot[v]))
        self.rotation = rot
        self._pos = tuple({u: i for i, u in enumerate(r)} for r in rot)
        self.faces, self.dart_face = self._trace_faces()
        self._check_euler()
        self.outer_face: int | None = None
        if outer is not None:
            self.outer_face = self._resolve_outer(outer)

    # -- faces ---------------------------------------------------------

    def next_dart(self, u: int, v: int) -> tuple[int, int]:
        """The dart following ``(u, v)`` on its face."""
        r = self.rotation[v]
        return v, r[(self._pos[v][u] - 1) % len(r)]

    def succ(self, v: int, u: int) -> int:
        """Clockwise successor of neighbour ``u`` around ``v``."""
        r = self.rotation[v]
        return r[(self._pos[v][u] + 1) % len(r)]

    def pred(self, v: int, u: int) -> int:
        """Clockwise predecessor of neighbour ``u`` around ``v``."""
        r = self.rotation[v]
        return r[(self._pos[v][u] - 1) % len(r)]

    def trace_face(self, u: int, v: int) -> Walk:
        walk = []
        dart = (u, v)
        while True:
            walk.append(dart[0])
            dart = self.next_dart(*dart)
            if dart == (u, v):
                return tuple(walk)

    def _trace_faces(self):
        dart_face: dict[tuple[int, int], int] = {}
        faces: list[Walk] = []
        for u in range(self.n):
            for v in self.rotation[u]:
                if (u, v) in dart_face:
                    continue
                walk = self.trace_face(u, v)
                idx = len(faces)
                for i, x in enumerate(walk):
                    dart_face[(x, walk[(i + 1) % len(walk)])] = idx
                faces.append(walk)
        return tuple(faces), dart_face

    def _check_euler(self) -> None:
        # isolated vertices are traced by no face; each bounds one region
        face_comp = {}
        comps = self.components()
        label = {}
        for ci, comp in enumerate(comps):
            for x in comp:
                label[x] = ci
        for fi, walk in enumerate(self.faces):
            face_comp.setdefault(label[walk[0]], []).append(fi)
        for ci, comp in enumerate(comps):
            nv = len(comp)
            ne = sum(len(self.adj[x]) for x in comp) // 2
            nf = len(face_comp.get(ci, ())) or 1
            if nv - ne + nf != 2:
                raise GraphError(
                    f"Euler check failed on component of vertex {comp[0]}: "
                    f"{nv} - {ne} + {nf} != 2 (rotation system is not spherical)"
                )

    def _resolve_outer(self, outer) -> int:
        if isinstance(outer, int):
            if not 0 <= outer < len(self.faces):
                raise GraphError(f"outer face index {outer} out of range")
            return outer
        walk = tuple(int(x) for x in outer)
        for candidate in (walk, walk[::-1]):
            for fi, face in enumerate(self.faces):
                if _cyclic_equal(face, candidate):
                    return fi
        raise GraphError(f"outer walk {list(walk)} is not a face of the embedding")

    def with_outer(self, outer) -> "PlaneGraph":
        """Same embedding with a different designated outer face."""
        g = PlaneGraph.__new__(PlaneGraph)
        g.__dict__.update(self.__dict__)
        g.outer_face = self._resolve_outer(outer)
        return g

    def face_of(self, u: int, v: int) -> int:
        return self.dart_face[(u, v)]

    def faces_at(self, v: int) -> list[int]:
        """Indices of the faces incident with ``v``, in clockwise order of darts."""
        return [self.dart_face[(v, u)] for u in self.rotation[v]]

    def to_faces(self) -> list[Walk]:
        return list(self.faces)


def _cyclic_equal(a: Sequence[int], b: Sequence[int]) -> bool:
    if len(a) != len(b):
        return False
    if not a:
        return True
    doubled = tuple(a) + tuple(a)
    b = tuple(b)
    return any(doubled[i:i + len(b)] == b for i in range(len(a)))


# -- construction -------------------------------------------------------


def build_plane_graph(rotation: Sequence[Sequence[int]], outer=None) -> PlaneGraph:
    return PlaneGraph(rotation, outer)


def _orient_faces(faces: list[list[int]]) -> list[list[int]]:
    """Flip face cycles so that every edge is traversed once in each direction."""
    by_edge: dict[frozenset, list[int]] = {}
    for fi, f in enumerate(faces):
        for i in range(len(f)):
            by_edge.setdefault(frozenset((f[i], f[(i + 1) % len(f)])), []).append(fi)
    out: list[list[int] | None] = [None] * len(faces)
    for seed in range(len(faces)):
        if out[seed] is not None:
            continue
        out[seed] = list(faces[seed])
        queue = deque([seed])
        while queue:
            fi = queue.popleft()
            f = out[fi]
            darts = {(f[i], f[(i + 1) % len(f)]) for i in range(len(f))}
            for a, b in darts:
                for gj in by_edge[frozenset((a, b))]:
                    if gj == fi:
                        continue
                    g = out[gj]
                    if g is None:
                        g = list(faces[gj])
                        gd = {(g[i], g[(i + 1) % len(g)]) for i in range(len(g))}
                        if (a, b) in gd:
                            g.reverse()
                        out[gj] = g
                        queue.append(gj)
                    else:
                        gd = {(g[i], g[(i + 1) % len(g)]) for i in range(len(g))}
                        if (a, b) in gd:
                            raise GraphError("face list is not consistently orientable")
    return out  # type: ignore[return-value]


def from_faces(n: int, faces: Iterable[Sequence[int]], outer=None, orient: bool = True) -> PlaneGraph:
    """Build a plane graph from its face walks.

    With ``orient=True`` the faces are taken as unoriented simple cycles and
    flipped into a consistent orientation first.  With ``orient=False`` they
    must already be walks in the traversal convention of this module, as
    produced by :attr:`PlaneGraph.faces`.
    """
    faces = [list(f) for f in faces]
    if orient:
        faces = _orient_faces(faces)
    succ: list[dict[int, int]] = [dict() for _ in range(n)]
    for f in faces:
        L = len(f)
        for i in range(L):
            u, v, w = f[i - 1], f[i], f[(i + 1) % L]
            if w in succ[v]:
                raise GraphError(f"angle at vertex {v} after {w} used twice")
            succ[v][w] = u
    rotation = []
    for v in range(n):
        if not succ[v]:
            rotation.append([])
            continue
        start = min(succ[v])
        r = [start]
        x = succ[v][start]
        while x != start:
            r.append(x)
            x = succ[v][x]
            if len(r) > len(succ[v]):
                raise GraphError(f"faces around vertex {v} do not close")
        if len(r) != len(succ[v]):
            raise GraphError(f"vertex {v} is not a disk neighbourhood")
        rotation.append(r)
    g = PlaneGraph(rotation)
    if outer is not None:
        g = g.with_outer(outer)
    return g


def replace_face(G: PlaneGraph, face: int, new_faces: Iterable[Sequence[int]], n: int | None = None) -> PlaneGraph:
    """Replace one face by a set of oriented faces (which may use new vertices).

    The new faces must traverse the old boundary darts in the same direction.
    If the outer face is replaced, the first new face becomes the outer face.
    """
    faces = [list(f) for i, f in enumerate(G.faces) if i != face]
    new_faces = [list(f) for f in new_faces]
    faces.extend(new_faces)
    out = new_faces[0] if G.outer_face == face else (
        None if G.outer_face is None else G.faces[G.outer_face])
    return from_faces(G.n if n is None else n, faces, outer=out, orient=False)


def add_edge_in_face(G: PlaneGraph, face: int, i: int, j: int) -> PlaneGraph:
    """Add the chord between positions ``i`` and ``j`` of a face walk."""
    walk = G.faces[face]
    L = len(walk)
    x, y = walk[i], walk[j]
    if x == y or G.has_edge(x, y):
        raise GraphError(f"cannot add edge {x}-{y}")
    a = [walk[(i + t) % L] for t in range((j - i) % L + 1)]
    b = [walk[(j + t) % L] for t in range((i - j) % L + 1)]
    return replace_face(G, face, [a, b])


def add_vertex_in_face(G: PlaneGraph, face: int, positions: Sequence[int]) -> PlaneGraph:
    """Add a new vertex ``G.n`` inside a face, joined to the given walk positions."""
    walk = G.faces[face]
    L = len(walk)
    u = G.n
    positions = sorted(positions)
    targets = [walk[p] for p in positions]
    if len(set(targets)) != len(targets):
        raise GraphError("new vertex would get a parallel edge")
    pieces = []
    for t, p in enumerate(positions):
        q = positions[(t + 1) % len(positions)]
        span = (q - p) % L or L
        pieces.append([walk[(p + s) % L] for s in range(span + 1)] + [u])
    if len(positions) == 1:
        raise GraphError("a new vertex needs at least two neighbours in a face")
    return replace_face(G, face, pieces, n=G.n + 1)


def delete_vertex(G: AbstractGraph, v: int):
    """``G - v`` with vertices renumbered; returns ``(H, keep)`` where ``keep[i]`` is the G-id of H-vertex ``i``."""
    keep = [x for x in range(G.n) if x != v]
    return induced_subgraph(G, keep), keep


def induced_subgraph(G: AbstractGraph, vertices: Sequence[int]):
    index = {x: i for i, x in enumerate(vertices)}
    if isinstance(G, PlaneGraph):
        rot = [[index[u] for u in G.rotation[x] if u in index] for x in vertices]
        return PlaneGraph(rot)
    edges = [(index[a], index[b]) for a, b in G.edges if a in index and b in index]
    return AbstractGraph(len(vertices), edges)


def delete_edges(G: PlaneGraph, edges: Iterable[tuple[int, int]]) -> PlaneGraph:
    gone = {frozenset(e) for e in edges}
    rot = [[u for u in G.rotation[v] if frozenset((u, v)) not in gone] for v in range(G.n)]
    return PlaneGraph(rot)


# -- queries ------------------------------------------------------------


def faces(G: PlaneGraph) -> list[Walk]:
    return list(G.faces)


def is_triangulation(G: PlaneGraph) -> bool:
    return bool(G.faces) and all(len(f) == 3 for f in G.faces)


def is_near_triangulation(G: PlaneGraph) -> bool:
    if G.outer_face is None:
        raise GraphError("near-triangulation query needs a designated outer face")
    return all(len(f) == 3 for i, f in enumerate(G.faces) if i != G.outer_face)


def neighbor_cycle(G: PlaneGraph, v: int) -> Walk:
    """Neighbours of ``v`` in rotation order, checked to form a cycle."""
    r = G.rotation[v]
    if len(r) < 3:
        raise GraphError(f"vertex {v} has fewer than three neighbours")
    for i, u in enumerate(r):
        w = r[(i + 1) % len(r)]
        if not G.has_edge(u, w):
            raise GraphError(f"neighbours {u} and {w} of vertex {v} are not adjacent")
    return r


def _check_cycle(G: AbstractGraph, cycle: Sequence[int]) -> None:
    if len(cycle) < 3 or len(set(cycle)) != len(cycle):
        raise GraphError(f"{list(cycle)} is not a simple cycle")
    for i, u in enumerate(cycle):
        w = cycle[(i + 1) % len(cycle)]
        if not G.has_edge(u, w):
            raise GraphError(f"{u}-{w} is not an edge; {list(cycle)} is not a cycle of G")


def region_faces(G: PlaneGraph, cycle: Sequence[int], outer: int | None = None) -> set[int]:
    """Faces on the side of ``cycle`` away from the outer face.

    Found by breadth-first search in the dual from the outer face, never
    crossing an edge of the cycle; the faces not reached form the region.
    """
    _check_cycle(G, cycle)
    if outer is None:
        outer = G.outer_face
    if outer is None:
        raise GraphError("region query needs a designated outer face")
    cut = {frozenset((cycle[i], cycle[(i + 1) % len(cycle)])) for i in range(len(cycle))}
    seen = {outer}
    queue = deque([outer])
    while queue:
        fi = queue.popleft()
        walk = G.faces[fi]
        for i, x in enumerate(walk):
            y = walk[(i + 1) % len(walk)]
            if frozenset((x, y)) in cut:
                continue
            fj = G.dart_face[(y, x)]
            if fj not in seen:
                seen.add(fj)
                queue.append(fj)
    return set(range(len(G.faces))) - seen


def interior_vertices(G: PlaneGraph, cycle: Sequence[int], outer: int | None = None) -> set[int]:
    """Vertices strictly inside ``cycle``, taking the outer face to be outside."""
    region = region_faces(G, cycle, outer)
    on_cycle = set(cycle)
    return {x for fi in region for x in G.faces[fi] if x not in on_cycle}


# -- generators ---------------------------------------------------------


def complete_graph(n: int = 4) -> PlaneGraph:
    """K1..K4 embedded in the sphere (K4 as the tetrahedron)."""
    if n == 4:
        return from_faces(4, [(0, 1, 2), (0, 2, 3), (0, 3, 1), (1, 3, 2)])
    if n == 3:
        return PlaneGraph([[1, 2], [2, 0], [0, 1]])
    if n in (1, 2):
        return PlaneGraph([[1], [0]] if n == 2 else [[]])
    raise GraphError(f"K{n} is not planar or not supported")


def wheel(r: int) -> PlaneGraph:
    """Hub ``0`` joined to the rim cycle ``1..r``; the rim is the outer face."""
    if r < 3:
        raise GraphError("wheel rim must have at least three vertices")
    rot = [list(range(1, r + 1))]
    for i in range(1, r + 1):
        prev = r if i == 1 else i - 1
        nxt = 1 if i == r else i + 1
        rot.append([0, prev, nxt])
    return PlaneGraph(rot, outer=list(range(1, r + 1)))


def odd_wheel(r: int) -> PlaneGraph:
    if r < 3 or r % 2 == 0:
        raise GraphError(f"odd_wheel needs an odd rim length >= 3, got {r}")
    return wheel(r)


def star(leaves: int) -> PlaneGraph:
    """Centre ``0`` with leaves ``1..leaves`` in clockwise order."""
    return PlaneGraph([list(range(1, leaves + 1))] + [[0] for _ in range(leaves)], outer=0)


def bipyramid(m: int) -> PlaneGraph:
    """Apices ``0`` and ``m+1`` over the equator cycle ``1..m``.

    ``bipyramid(4)`` is the octahedron with antipodal pairs (0,5), (1,3), (2,4).
    """
    if m < 3:
        raise GraphError("bipyramid needs an equator of length >= 3")
    top, bot = 0, m + 1
    fs = []
    for i in range(1, m + 1):
        j = 1 if i == m else i + 1
        fs.append((top, i, j))
        fs.append((bot, j, i))
    return from_faces(m + 2, fs)


def octahedron() -> PlaneGraph:
    return bipyramid(4)


def stack_vertex(G: PlaneGraph, face: int) -> PlaneGraph:
    """Insert a new degree-3 vertex into a triangular face."""
    x, y, z = G.faces[face]
    p = G.n
    return replace_face(G, face, [(x, y, p), (y, z, p), (z, x, p)], n=G.n + 1)


def insert_octahedron(G: PlaneGraph, face: int) -> PlaneGraph:
    """Glue an octahedron into a triangular face.

    Three new vertices of degree 4 are added and the corners gain two
    neighbours each, so Eulerian triangulations stay Eulerian.
    """
    x, y, z = G.faces[face]
    p, q, r = G.n, G.n + 1, G.n + 2
    new = [(x, y, p), (y, z, q), (z, x, r), (p, y, q), (q, z, r), (r, x, p), (p, q, r)]
    return replace_face(G, face, new, n=G.n + 3)


def moser_spindle() -> PlaneGraph:
    """The Moser spindle (Hajos sum of two K4), with vertex 0 of degree 4."""
    fs = [(0, 2, 3), (1, 2, 3), (0, 5, 6), (4, 5, 6), (0, 2, 1, 4, 5), (0, 3, 1, 4, 6)]
    return from_faces(7, fs)


# -- file formats -------------------------------------------------------


def parse_rotation(text: str) -> PlaneGraph:
    """Parse the rotation text format.

    ``#`` starts a comment line; ``n <N>`` must precede the rotation lines;
    ``rot <v>: u1 u2 ...`` gives the clockwise neighbours of ``v``; an
    optional ``outer: v0 v1 ... vk`` names the outer face.
    """
    n = None
    rot: dict[int, list[int]] = {}
    outer = None
    last = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        last = lineno
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, _, rest = line.partition(" ")
        try:
            if head == "n":
                if n is not None:
                    raise GraphFormatError("duplicate header", lineno)
                n = int(rest)
                if n < 0:
                    raise GraphFormatError("negative vertex count", lineno)
            elif head == "rot":
                if n is None:
                    raise GraphFormatError("rotation before header 'n <N>'", lineno)
                vs, colon, nb = rest.partition(":")
                if not colon:
                    raise GraphFormatError("expected 'rot <v>: ...'", lineno)
                v = int(vs)
                if not 0 <= v < n:
                    raise GraphFormatError(f"vertex {v} out of range", lineno)
                if v in rot:
                    raise GraphFormatError(f"duplicate rotation for vertex {v}", lineno)
                rot[v] = [int(x) for x in nb.split()]
            elif head.startswith("outer"):
                _, _, walk = line.partition(":")
                outer = [int(x) for x in walk.split()]
            else:
                raise GraphFormatError(f"unrecognised line {raw!r}", lineno)
        except ValueError as exc:
            if isinstance(exc, GraphFormatError):
                raise
            raise GraphFormatError(f"bad integer: {exc}", lineno) from None
    if n is None:
        raise GraphFormatError("missing header 'n <N>'", last or 1)
    missing = [v for v in range(n) if v not in rot]
    if missing:
        raise GraphFormatError(f"missing rotation for vertex {missing[0]} (truncated file?)", last)
    return PlaneGraph([rot[v] for v in range(n)], outer=outer)


def format_rotation(G: PlaneGraph) -> str:
    lines = [f"n {G.n}"]
    lines += [f"rot {v}: " + " ".join(map(str, G.rotation[v])) for v in range(G.n)]
    if G.outer_face is not None:
        lines.append("outer: " + " ".join(map(str, G.faces[G.outer_face])))
    return "\n".join(lines) + "\n"


def parse_graph6(line: str) -> AbstractGraph:
    data = line.strip()
    if data.startswith(">>graph6<<"):
        data = data[len(">>graph6<<"):]
    try:
        g = nx.from_graph6_bytes(data.encode("ascii"))
    except (nx.NetworkXError, ValueError, IndexError) as exc:
        raise GraphFormatError(f"bad graph6 data: {exc}", 1) from None
    return AbstractGraph(g.number_of_nodes(), g.edges())


def load_graph(path, fmt: str | None = None) -> AbstractGraph:
    """Load a rotation-format (``.rot``) or graph6 (``.g6``) file."""
    path = Path(path)
    if fmt is None:
        fmt = "graph6" if path.suffix in (".g6", ".graph6") else "rotation"
    text = path.read_text()
    if fmt == "rotation":
        return parse_rotation(text)
    if fmt == "graph6":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise GraphFormatError("empty graph6 file", 1)
        return parse_graph6(lines[0])
    raise GraphFormatError(f"unknown format {fmt!r}")
