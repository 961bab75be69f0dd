"""Lazy Schreier coset automata and quotient growth.

States are right cosets Hg; reading a letter multiplies the representative
on the right.  Completion is on demand: a missing transition mints a fresh
coset.  Beyond the folded core the Schreier graph of a free-group subgroup
is a forest, so freshly minted states never need re-folding and the BFS
can be vectorized level by level.

The left-coset count |L(B(o,r))| is obtained by the bijection gH -> Hg^-1,
concretely a second BFS over the same automaton that follows the
inverse-labeled transition arrays.  The two counts must agree at every
radius and the growth code asserts that they do.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .balls import BallCounts, GrowthEstimate, growth_rate
from .errors import BudgetExceeded, WindowTooSmall
from .groups import Word
from .stallings import CoreGraph

DEFAULT_STATE_CAP = 20_000_000


class SchreierAutomaton:
    """Growable coset automaton for a free-group subgroup.

    Transitions live in 2k int32 arrays (one per directed letter), -1 for
    "not yet explored".  Distances are BFS-correct for every completed
    radius.  Single-writer: completion mutates; share only after use.
    """

    def __init__(self, core: CoreGraph, max_states: int = DEFAULT_STATE_CAP):
        self.core = core
        self.group = core.group
        self.k = core.group.rank
        self.max_states = max_states
        cap = max(64, 2 * core.n_vertices)
        self.delta = [np.full(cap, -1, dtype=np.int32) for _ in range(2 * self.k)]
        self.n_states = core.n_vertices
        for u, g, v in core.edges:
            self.delta[g][u] = v
            self.delta[g + self.k][v] = u
        self.dist = np.full(cap, -1, dtype=np.int32)
        self.dist[core.base] = 0
        self.base = core.base
        self.level_sizes = [1]
        self._frontier = np.array([core.base], dtype=np.int32)

    @property
    def completed_radius(self) -> int:
        return len(self.level_sizes) - 1

    def _grow(self, needed: int):
        cap = len(self.dist)
        if needed <= cap:
            return
        new_cap = cap
        while new_cap < needed:
            new_cap *= 2
        for i in range(2 * self.k):
            arr = np.full(new_cap, -1, dtype=np.int32)
            arr[:cap] = self.delta[i]
            self.delta[i] = arr
        d = np.full(new_cap, -1, dtype=np.int32)
        d[:cap] = self.dist
        self.dist = d

    def complete_to(self, radius: int):
        """Run the level-synchronized BFS out to the given radius."""
        while self.completed_radius < radius:
            frontier = self._frontier
            if frontier.size == 0:
                self.level_sizes.append(0)
                continue
            next_parts = []
            level = self.completed_radius + 1
            for gi in range(2 * self.k):
                arr = self.delta[gi]
                targets = arr[frontier]
                missing = targets == -1
                n_new = int(missing.sum())
                if n_new:
                    if self.n_states + n_new > self.max_states:
                        raise BudgetExceeded(
                            f"Schreier automaton exceeded {self.max_states} states")
                    self._grow(self.n_states + n_new)
                    arr = self.delta[gi]
                    new_ids = np.arange(self.n_states, self.n_states + n_new, dtype=np.int32)
                    src = frontier[missing]
                    arr[src] = new_ids
                    inv = gi + self.k if gi < self.k else gi - self.k
                    self.delta[inv][new_ids] = src
                    self.dist[new_ids] = level
                    self.n_states += n_new
                    next_parts.append(new_ids)
                known = targets[~missing]
                if known.size:
                    fresh = known[self.dist[known] == -1]
                    if fresh.size:
                        fresh = np.unique(fresh)
                        self.dist[fresh] = level
                        next_parts.append(fresh)
            self._frontier = (np.unique(np.concatenate(next_parts))
                              if next_parts else np.array([], dtype=np.int32))
            self.level_sizes.append(int(self._frontier.size))

    def state_of(self, w: Word) -> int:
        """The coset state reached by reading w from the base."""
        self.complete_to(w.length)
        v = self.base
        for l in w.letters():
            gi = (l - 1) if l > 0 else (-l - 1 + self.k)
            v = int(self.delta[gi][v])
        return v

    def coset_distance(self, w: Word) -> int:
        """min{|u| : Hu = Hw}, i.e. the distance d(w, H o) in the Cayley graph."""
        state = self.state_of(w)  # may grow self.dist; fetch it afterwards
        return int(self.dist[state])

    def counts(self, radius: int) -> list[int]:
        """Cumulative coset counts |L(B(o,r))| for r = 0..radius."""
        self.complete_to(radius)
        out = []
        total = 0
        for r in range(radius + 1):
            total += self.level_sizes[r]
            out.append(total)
        return out

    def mirror_level_sizes(self, radius: int) -> list[int]:
        """Level sizes of the left-coset BFS (follows inverse letters).

        Realizes the bijection gH -> Hg^-1 as a traversal; no completion
        happens here, so complete_to(radius) must run first.
        """
        self.complete_to(radius)
        seen = np.full(self.n_states, False)
        seen[self.base] = True
        frontier = np.array([self.base], dtype=np.int32)
        sizes = [1]
        for _ in range(radius):
            parts = []
            for gi in range(2 * self.k):
                inv = gi + self.k if gi < self.k else gi - self.k
                targets = self.delta[inv][frontier]
                targets = targets[targets != -1]
                targets = targets[~seen[targets]]
                if targets.size:
                    targets = np.unique(targets)
                    seen[targets] = True
                    parts.append(targets)
            frontier = (np.unique(np.concatenate(parts))
                        if parts else np.array([], dtype=np.int32))
            sizes.append(int(frontier.size))
        return sizes


@dataclass(frozen=True)
class SchreierGrowth:
    """Left/right coset growth of a subgroup, with per-radius counts."""

    left_counts: BallCounts
    right_counts: BallCounts
    left: GrowthEstimate
    right: GrowthEstimate


def schreier_growth(core: CoreGraph, r_max: int,
                    max_states: int = DEFAULT_STATE_CAP) -> SchreierGrowth:
    """Quotient growth rates from the lazy coset BFS.

    The right count comes from the completion BFS, the left count from the
    mirrored traversal; equality at every radius is asserted, not assumed.
    """
    aut = SchreierAutomaton(core, max_states=max_states)
    aut.complete_to(r_max)
    right_sizes = aut.level_sizes[: r_max + 1]
    left_sizes = aut.mirror_level_sizes(r_max)
    assert left_sizes == right_sizes, "left and right coset counts disagree"

    def pack(sizes: list[int]) -> BallCounts:
        cum = []
        total = 0
        for s in sizes:
            total += s
            cum.append(total)
        return BallCounts(radius=r_max, sphere_sizes=tuple(sizes), cumulative=tuple(cum))

    right_counts = pack(right_sizes)
    left_counts = pack(left_sizes)

    def estimate(counts: BallCounts) -> GrowthEstimate:
        try:
            return growth_rate(counts, "bfs_fit")
        except (WindowTooSmall, ValueError):
            return GrowthEstimate(0.0, "bfs_fit", (0, r_max), 0.0, notes=("degenerate window",))

    return SchreierGrowth(left_counts=left_counts, right_counts=right_counts,
                          left=estimate(left_counts), right=estimate(right_counts))
