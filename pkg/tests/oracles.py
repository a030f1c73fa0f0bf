"""Slow, independent reference implementations used only by the tests.

* braid-move reduction (Tits' solution of the word problem): a word is
  reduced iff no word in its braid class has two equal adjacent letters,
  and two reduced words are equal iff they share a braid class;
* a Cayley-graph BFS that identifies elements by their rounded matrices,
  so lengths are BFS depths and descents come from depth comparisons.

Neither touches the production normal-form or descent code.
"""
from collections import deque
from itertools import product
import math

import numpy as np

from coxdense.core import INF


def braid_class(word, system):
    word = tuple(word)
    seen = {word}
    queue = deque([word])
    while queue:
        w = queue.popleft()
        for i in range(len(w) - 1):
            s, t = w[i], w[i + 1]
            if s == t:
                continue
            m = system.m(s, t)
            if m is INF or i + m > len(w):
                continue
            seg = w[i:i + m]
            if all(seg[k] == (s if k % 2 == 0 else t) for k in range(m)):
                swapped = tuple(t if k % 2 == 0 else s for k in range(m))
                new = w[:i] + swapped + w[i + m:]
                if new not in seen:
                    seen.add(new)
                    queue.append(new)
    return seen


def tits_reduce(word, system):
    """ShortLex-least reduced word equal to ``word``."""
    w = tuple(word)
    while True:
        cls = braid_class(w, system)
        for u in sorted(cls):
            k = next((i for i in range(len(u) - 1) if u[i] == u[i + 1]), None)
            if k is not None:
                w = u[:k] + u[k + 2:]
                break
        else:
            return min(cls)


def braid_ball_counts(system, radius):
    """Number of elements of each length up to ``radius``, by reducing all words."""
    nfs = set()
    for k in range(radius + 1):
        for word in product(range(system.rank), repeat=k):
            nfs.add(tits_reduce(word, system))
    counts = [0] * (radius + 1)
    for nf in nfs:
        counts[len(nf)] += 1
    return counts


def _reflections(system):
    n = system.rank
    gram = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            m = system.m(i, j)
            if m is INF:
                gram[i, j] = -1.0
            else:
                gram[i, j] = {1: 1.0, 2: 0.0, 3: -0.5}.get(m, -math.cos(math.pi / m))
    mats = []
    for s in range(n):
        r = np.eye(n)
        for t in range(n):
            r[s, t] -= 2 * gram[s, t]
        mats.append(r)
    return mats


class MatrixBall:
    """BFS ball with elements keyed by their rounded matrices."""

    def __init__(self, system, radius, digits=7):
        self.system = system
        gens = _reflections(system)
        n = system.rank
        ident = np.eye(n)
        key = lambda m: tuple(np.round(m, digits).ravel() + 0.0)
        self.mats = [ident]
        self.words = [()]
        self.depth = [0]
        self.index = {key(ident): 0}
        self.nbr = [[-1] * n]
        frontier = [0]
        for d in range(1, radius + 1):
            nxt = []
            for i in frontier:
                for s in range(n):
                    m = self.mats[i] @ gens[s]
                    k = key(m)
                    j = self.index.get(k)
                    if j is None:
                        j = len(self.mats)
                        self.index[k] = j
                        self.mats.append(m)
                        self.words.append(self.words[i] + (s,))
                        self.depth.append(d)
                        self.nbr.append([-1] * n)
                        nxt.append(j)
                    self.nbr[i][s] = j
                    self.nbr[j][s] = i
            frontier = nxt
        self.radius = radius

    def __len__(self):
        return len(self.mats)

    def right_descents(self, i):
        """Generators s with depth(ws) < depth(w)."""
        return {s for s, j in enumerate(self.nbr[i]) if j >= 0 and self.depth[j] < self.depth[i]}

    def distance_to(self, i, is_target, limit):
        """BFS distance from node i to the nearest target node, within the ball."""
        seen = {i}
        frontier = [i]
        for d in range(limit + 1):
            if any(is_target(j) for j in frontier):
                return d
            nxt = []
            for j in frontier:
                for k in self.nbr[j]:
                    if k >= 0 and k not in seen:
                        seen.add(k)
                        nxt.append(k)
            frontier = nxt
        return None
