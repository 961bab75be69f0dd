"""Stallings core graphs for finitely generated subgroups of free groups.

A core graph is a folded, connected, base-pointed graph with edges labeled
by positive generators; a reduced word lies in the subgroup iff it labels a
base-to-base path (inverse letters traverse edges backwards).  Reduced
words of the subgroup correspond exactly to non-backtracking base-to-base
paths, which makes |B_G(o,r) & H| a non-backtracking path count and hence
a transfer-matrix computation over directed edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .balls import BallCounts, GrowthEstimate, growth_rate
from .errors import NotFreeGroup, PowerIterationDiverged, WindowTooSmall
from .groups import MarkedGroup, Word


class CoreGraph:
    """Folded subgroup graph.  Immutable after construction."""

    def __init__(self, group: MarkedGroup, n_vertices: int,
                 edges: Sequence[tuple[int, int, int]], base: int = 0):
        self.group = group
        self.n_vertices = n_vertices
        self.base = base
        self.edges = tuple(sorted(edges))
        self.out = [dict() for _ in range(n_vertices)]
        self.into = [dict() for _ in range(n_vertices)]
        for u, g, v in self.edges:
            if g in self.out[u] or g in self.into[v]:
                raise ValueError("core graph is not folded")
            self.out[u][g] = v
            self.into[v][g] = u

    # -- membership and index -------------------------------------------

    def trace(self, w: Word, start: int | None = None) -> int | None:
        """Follow the letters of w from a vertex; None when a step is missing."""
        v = self.base if start is None else start
        for l in w.letters():
            v = self.out[v].get(l - 1) if l > 0 else self.into[v].get(-l - 1)
            if v is None:
                return None
        return v

    def contains(self, w: Word) -> bool:
        return self.trace(w) == self.base

    def index(self) -> int | float:
        """Subgroup index: the vertex count if the graph is complete, else inf."""
        k = self.group.rank
        for v in range(self.n_vertices):
            if len(self.out[v]) < k or len(self.into[v]) < k:
                return math.inf
        return self.n_vertices

    # -- enumeration ------------------------------------------------------

    def directed_edges(self) -> list[tuple[int, int, int, int]]:
        """Directed halves (tail, head, letter, edge_id); reverse is id^1."""
        out = []
        for eid, (u, g, v) in enumerate(self.edges):
            out.append((u, v, g + 1, 2 * eid))
            out.append((v, u, -(g + 1), 2 * eid + 1))
        return out

    def elements_in_ball(self, radius: int) -> Iterator[Word]:
        """All subgroup elements of length <= radius (identity included)."""
        yield self.group.identity()
        halves = self.directed_edges()
        by_tail: dict[int, list[tuple[int, int, int, int]]] = {}
        for h in halves:
            by_tail.setdefault(h[0], []).append(h)

        letters: list[int] = []

        def walk(vertex: int, last_id: int) -> Iterator[Word]:
            if len(letters) >= radius:
                return
            for (_, head, letter, did) in by_tail.get(vertex, ()):
                if did == last_id ^ 1:
                    continue
                letters.append(letter)
                if head == self.base:
                    yield self.group.from_letters(letters)
                yield from walk(head, did)
                letters.pop()

        yield from walk(self.base, -2)

    def counts_by_length(self, r_max: int) -> list[int]:
        """|{h in H : |h| = n}| for n = 0..r_max via the edge transfer matrix."""
        halves = self.directed_edges()
        n = len(halves)
        if n == 0:
            return [1] + [0] * r_max
        T = np.zeros((n, n), dtype=np.int64)
        for i, (_, head, _, did) in enumerate(halves):
            for j, (tail2, _, _, did2) in enumerate(halves):
                if head == tail2 and did2 != did ^ 1:
                    T[i, j] = 1
        start = np.array([1 if h[0] == self.base else 0 for h in halves], dtype=np.int64)
        end = np.array([1 if h[1] == self.base else 0 for h in halves], dtype=np.int64)
        counts = [1]
        vec = start.copy()
        for _ in range(r_max):
            counts.append(int(vec @ end))
            vec = vec @ T
        return counts

    def transfer_matrix(self) -> np.ndarray:
        halves = self.directed_edges()
        n = len(halves)
        T = np.zeros((n, n), dtype=np.float64)
        for i, (_, head, _, did) in enumerate(halves):
            for j, (tail2, _, _, did2) in enumerate(halves):
                if head == tail2 and did2 != did ^ 1:
                    T[i, j] = 1.0
        return T

    # -- canonical form ----------------------------------------------------

    def canonical_form(self) -> tuple:
        """BFS relabeling from the base with deterministic edge order.

        Two folded core graphs describe the same subgroup iff their
        canonical forms are equal.
        """
        order = {self.base: 0}
        queue = [self.base]
        while queue:
            v = queue.pop(0)
            for g in sorted(self.out[v]):
                w = self.out[v][g]
                if w not in order:
                    order[w] = len(order)
                    queue.append(w)
            for g in sorted(self.into[v]):
                w = self.into[v][g]
                if w not in order:
                    order[w] = len(order)
                    queue.append(w)
        edges = tuple(sorted((order[u], g, order[v]) for u, g, v in self.edges))
        return (len(order), edges)

    def __repr__(self) -> str:
        return f"CoreGraph({self.n_vertices} vertices, {len(self.edges)} edges)"


def stallings_fold(group: MarkedGroup, generators: Sequence[Word]) -> CoreGraph:
    """Fold the wedge of generator loops into the subgroup's core graph."""
    if not group.is_free:
        raise NotFreeGroup("Stallings graphs require a free group")

    parent: list[int] = [0]

    def new_vertex() -> int:
        parent.append(len(parent))
        return len(parent) - 1

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    def union(u: int, v: int):
        u, v = find(u), find(v)
        if u != v:
            parent[max(u, v)] = min(u, v)

    base = 0
    edges: list[tuple[int, int, int]] = []
    for w in generators:
        if w.group != group:
            raise NotFreeGroup("generator from a different group")
        letters = w.letters()
        if not letters:
            continue
        cur = base
        for idx, l in enumerate(letters):
            nxt = base if idx == len(letters) - 1 else new_vertex()
            if l > 0:
                edges.append((cur, l - 1, nxt))
            else:
                edges.append((nxt, -l - 1, cur))
            cur = nxt

    # fold: repeatedly identify targets of equal-labeled parallel edges
    changed = True
    while changed:
        changed = False
        seen_out: dict[tuple[int, int], int] = {}
        seen_in: dict[tuple[int, int], int] = {}
        for u, g, v in edges:
            u, v = find(u), find(v)
            if (u, g) in seen_out and seen_out[(u, g)] != v:
                union(v, seen_out[(u, g)])
                changed = True
                break
            seen_out[(u, g)] = v
            if (v, g) in seen_in and seen_in[(v, g)] != u:
                union(u, seen_in[(v, g)])
                changed = True
                break
            seen_in[(v, g)] = u

    folded = {(find(u), g, find(v)) for u, g, v in edges}

    # prune hanging non-base vertices (possible only from degenerate input)
    while True:
        degree: dict[int, int] = {}
        for u, g, v in folded:
            degree[u] = degree.get(u, 0) + 1
            degree[v] = degree.get(v, 0) + 1
        hanging = {v for v, d in degree.items() if d <= 1 and v != find(base)}
        if not hanging:
            break
        folded = {(u, g, v) for u, g, v in folded if u not in hanging and v not in hanging}

    vertices = {find(base)}
    for u, g, v in folded:
        vertices.add(u)
        vertices.add(v)
    relabel = {v: i for i, v in enumerate(sorted(vertices, key=lambda x: (x != find(base), x)))}
    return CoreGraph(
        group,
        n_vertices=len(vertices),
        edges=[(relabel[u], g, relabel[v]) for u, g, v in folded],
        base=relabel[find(base)],
    )


# -- relative growth ------------------------------------------------------


def power_iteration(T: np.ndarray, tol: float = 1e-10, stable_steps: int = 5,
                    max_iter: int = 100_000) -> tuple[float, int]:
    """Rayleigh-quotient power iteration for a nonnegative matrix.

    Stops when the quotient varies less than tol over ``stable_steps``
    consecutive steps; raises PowerIterationDiverged at the iteration cap
    (periodic matrices may never settle).
    """
    n = T.shape[0]
    if n == 0:
        return 0.0, 0
    v = np.ones(n)
    history: list[float] = []
    for it in range(max_iter):
        w = T @ v
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0, it
        w /= norm
        rayleigh = float(w @ (T @ w))
        history.append(rayleigh)
        if len(history) >= stable_steps and max(history[-stable_steps:]) - min(history[-stable_steps:]) < tol:
            return rayleigh, it
        v = w
    raise PowerIterationDiverged(f"no convergence after {max_iter} iterations")


@dataclass(frozen=True)
class RelativeGrowth:
    """Relative growth data for a subgroup: exact counts plus two estimates."""

    counts: BallCounts
    spectral: GrowthEstimate | None
    fit: GrowthEstimate
    notes: tuple[str, ...] = field(default_factory=tuple)

    @property
    def rate(self) -> float:
        return self.spectral.rate if self.spectral is not None else self.fit.rate


def relative_growth(core: CoreGraph, r_max: int) -> RelativeGrowth:
    """|B_G(o,r) & H| counts with spectral-radius and bfs_fit estimates."""
    counts = core.counts_by_length(r_max)
    cumulative = []
    total = 0
    for c in counts:
        total += c
        cumulative.append(total)
    ball_counts = BallCounts(radius=r_max, sphere_sizes=tuple(counts),
                             cumulative=tuple(cumulative))
    notes: list[str] = []
    T = core.transfer_matrix()
    spectral = None
    if T.shape[0] == 0:
        spectral = GrowthEstimate(0.0, "spectral_radius", (0, r_max), 0.0,
                                  notes=("trivial subgroup",))
    else:
        try:
            rho, iters = power_iteration(T)
            rate = math.log(rho) if rho > 1.0 else 0.0
            spectral = GrowthEstimate(rate, "spectral_radius", (0, r_max), 0.0,
                                      notes=(f"power iteration, {iters} steps",))
        except PowerIterationDiverged:
            # periodic transfer matrix (e.g. a subgroup with only even-length
            # elements); recover the radius from an exact count recurrence
            notes.append("power iteration diverged (periodic matrix)")
            try:
                spectral = growth_rate(ball_counts, "spectral_radius")
            except (WindowTooSmall, ValueError):
                notes.append("no exact recurrence either; bfs_fit only")
    try:
        fit = growth_rate(ball_counts, "bfs_fit")
    except (WindowTooSmall, ValueError):
        fit = GrowthEstimate(0.0, "bfs_fit", (0, r_max), 0.0, notes=("window too small",))
    return RelativeGrowth(counts=ball_counts, spectral=spectral, fit=fit, notes=tuple(notes))
