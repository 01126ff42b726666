"""Proper vertex colorings, exhaustive enumeration and criticality tests.

Colors are the integers ``1..k``.  Enumeration is plain backtracking in
vertex-id order with colors tried in ascending order, so the output is in
lexicographic order of the color vectors.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterator, Sequence

from .graph_core import AbstractGraph

DEFAULT_CAP = 12


class ColoringError(ValueError):
    pass


class CapExceeded(RuntimeError):
    """An exhaustive operation was asked to run on a graph above the vertex cap."""


def default_cap() -> int:
    env = os.environ.get("KEMPE_CAP")
    return int(env) if env else DEFAULT_CAP


def check_cap(G: AbstractGraph, cap: int | None) -> None:
    cap = default_cap() if cap is None else cap
    if G.n > cap:
        raise CapExceeded(f"graph has {G.n} vertices, exhaustive cap is {cap}")


@dataclass(frozen=True)
class Coloring:
    """A total assignment ``vertex -> color`` with colors in ``1..k``."""

    k: int
    colors: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "colors", tuple(int(c) for c in self.colors))
        for v, c in enumerate(self.colors):
            if not 1 <= c <= self.k:
                raise ColoringError(f"color {c} of vertex {v} outside 1..{self.k}")

    def __getitem__(self, v: int) -> int:
        return self.colors[v]

    def __len__(self) -> int:
        return len(self.colors)

    def __iter__(self):
        return iter(self.colors)

    def used(self) -> set[int]:
        return set(self.colors)

    def num_colors(self) -> int:
        return len(set(self.colors))

    def permuted(self, perm: dict[int, int]) -> "Coloring":
        return Coloring(self.k, tuple(perm.get(c, c) for c in self.colors))

    def __str__(self) -> str:
        return " ".join(map(str, self.colors))


def as_colors(c) -> tuple[int, ...]:
    return c.colors if isinstance(c, Coloring) else tuple(c)


def is_proper(G: AbstractGraph, c, k: int | None = None) -> bool:
    """True iff every edge of ``G`` gets two different colors.

    Raises:
        ColoringError: the assignment is partial or uses a color outside
            ``1..k``.
    """
    colors = as_colors(c)
    if k is None and isinstance(c, Coloring):
        k = c.k
    if len(colors) != G.n:
        raise ColoringError(f"coloring has {len(colors)} entries for {G.n} vertices")
    if k is not None and any(not 1 <= x <= k for x in colors):
        raise ColoringError(f"color outside 1..{k}")
    return all(colors[u] != colors[v] for u, v in G.edges)


def iter_colorings(G: AbstractGraph, k: int) -> Iterator[tuple[int, ...]]:
    """Proper k-colorings as tuples, in lexicographic order."""
    n = G.n
    earlier = [[u for u in G.adj[v] if u < v] for v in range(n)]
    colors = [0] * n
    if n == 0:
        yield ()
        return
    v = 0
    while v >= 0:
        c = colors[v] + 1
        while c <= k and any(colors[u] == c for u in earlier[v]):
            c += 1
        if c > k:
            colors[v] = 0
            v -= 1
            continue
        colors[v] = c
        if v == n - 1:
            yield tuple(colors)
        else:
            v += 1


def enumerate_colorings(G: AbstractGraph, k: int, cap: int | None = None) -> list[Coloring]:
    check_cap(G, cap)
    return [Coloring(k, t) for t in iter_colorings(G, k)]


def count_colorings(G: AbstractGraph, k: int) -> int:
    return sum(1 for _ in iter_colorings(G, k))


def find_coloring(G: AbstractGraph, k: int) -> Coloring | None:
    for t in iter_colorings(G, k):
        return Coloring(k, t)
    return None


def three_coloring(G: AbstractGraph) -> Coloring | None:
    """A proper 3-coloring of ``G`` if one exists."""
    return find_coloring(G, 3)


def is_3_colorable(G: AbstractGraph) -> bool:
    return three_coloring(G) is not None


def is_4_critical(G: AbstractGraph) -> bool:
    """Not 3-colorable while every proper subgraph is.

    Deleting single edges suffices, except that an isolated vertex is itself
    a removable part of the graph.
    """
    if G.n == 0 or is_3_colorable(G):
        return False
    if any(G.degree(v) == 0 for v in range(G.n)):
        return False
    for e in G.edges:
        H = AbstractGraph(G.n, [f for f in G.edges if f != e])
        if not is_3_colorable(H):
            return False
    return True


def restrict(c: Coloring, vertices: Sequence[int]) -> Coloring:
    """Restriction to ``vertices``; vertex ``i`` of the result is ``vertices[i]``."""
    return Coloring(c.k, tuple(c.colors[v] for v in vertices))


def canonical(colors: Sequence[int]) -> tuple[int, ...]:
    """Rename colors in order of first appearance (palette-symmetry normal form)."""
    names: dict[int, int] = {}
    return tuple(names.setdefault(x, len(names) + 1) for x in colors)


def load_coloring(path, k: int) -> Coloring:
    text = open(path).read().split()
    try:
        return Coloring(k, tuple(int(x) for x in text))
    except ValueError as exc:
        raise ColoringError(f"{path}: {exc}") from None
