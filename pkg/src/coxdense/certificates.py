"""Density certificates for ``W . boundary(W_T)`` and ball-level lemma checks.

The hypotheses of the density criterion are decided from the Coxeter
matrix alone.  Quasi-density itself is a statement about all of ``W``, so
it is only *profiled* on finite balls, with every row flagged when the
ball is too small to trust it.  The ``verify_*`` functions scan Cayley
balls for counterexamples to the supporting lemmas; they return the
counterexamples rather than a boolean.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .classify import essential_of, group_order, is_spherical, maximal_spherical_subsets
from .core import INF, CoxeterSystem, GenSubset, at_least, mask_indices
from .errors import PreconditionError
from .parabolic import index
from .words import EPS, CayleyBall, Element, descent_set, enumerate_ball, enumerate_group


def _require_infinite(system, T):
    if is_spherical(system, T):
        raise PreconditionError(f"W_T is finite for T = {system.labels(T)}")


def _noncommuting(system, s, t) -> bool:
    return s != t and at_least(system.m(s, t), 3)


def _inf_pair(system, s, t) -> bool:
    return s != t and system.m(s, t) is INF


@dataclass(frozen=True)
class CorollaryWitness:
    U: GenSubset
    s: int
    u0: int
    condition: int
    T_tilde: GenSubset
    via: GenSubset  # subset the conditions hold for; equals T for direct witnesses


def theorem_generator_set(system: CoxeterSystem, T: GenSubset) -> GenSubset:
    """Generators ``s`` with ``m(s, s0) = inf`` for some ``s0`` outside ``T``
    that fails to commute with some ``t`` in the essential part of ``T``.

    The target set of the density theorem is the union of ``W^{s}`` over
    the returned generators.
    """
    _require_infinite(system, T)
    t_tilde = essential_of(system, T)
    n = system.rank
    bridges = [
        s0 for s0 in range(n)
        if s0 not in T and any(_noncommuting(system, s0, t) for t in t_tilde)
    ]
    return GenSubset.of(
        n, (s for s in range(n) if any(_inf_pair(system, s, s0) for s0 in bridges))
    )


def _order_witnesses(system):
    """``(U, s, u0)`` with U maximal spherical, ``m(s,u) >= 3`` on U, ``m(s,u0) = inf``."""
    n = system.rank
    for U in maximal_spherical_subsets(system):
        for s in range(n):
            if not all(_noncommuting(system, s, u) for u in U):
                continue
            for u0 in U:
                if _inf_pair(system, s, u0):
                    yield U, s, u0


def _direct_witnesses(system, T, triples):
    t_tilde = essential_of(system, T)
    out = []
    for U, s, u0 in triples:
        if s not in T and u0 in t_tilde:
            out.append(CorollaryWitness(U, s, u0, 1, t_tilde, T))
        elif u0 not in T and s in t_tilde:
            out.append(CorollaryWitness(U, s, u0, 2, t_tilde, T))
    return out


def check_corollary(system: CoxeterSystem, T: GenSubset, inherit: bool = True
                    ) -> list[CorollaryWitness]:
    """Witnesses ``(U, s, u0, condition)`` of the density corollary for ``T``.

    Direct witnesses (conditions checked against ``T`` itself) come first,
    ordered by (U mask, s, u0).  With ``inherit``, witnesses for smaller
    ``T' <= T`` with ``W_T'`` infinite follow, tagged by ``via = T'``: the
    boundary of ``W_T'`` sits inside that of ``W_T``, so density passes up.
    An empty list means the corollary does not apply, not that density fails.
    """
    _require_infinite(system, T)
    triples = list(_order_witnesses(system))
    out = _direct_witnesses(system, T, triples)
    if not inherit:
        return out
    seen = {(w.U, w.s, w.u0, w.condition) for w in out}
    sub = T.mask
    proper = []
    while sub:
        sub = (sub - 1) & T.mask
        if sub:
            proper.append(sub)
    for mask in sorted(proper):
        Tp = GenSubset(mask, system.rank)
        if is_spherical(system, Tp):
            continue
        for w in _direct_witnesses(system, Tp, triples):
            key = (w.U, w.s, w.u0, w.condition)
            if key not in seen:
                seen.add(key)
                out.append(w)
    return out


def check_quasidense_certificate(system: CoxeterSystem) -> list[tuple[GenSubset, int]]:
    """Pairs ``(U, s0)`` certifying that ``W^{s0}`` is quasi-dense in ``W``."""
    seen = []
    for U, s, _ in _order_witnesses(system):
        if (U, s) not in seen:
            seen.append((U, s))
    return seen


def check_w_invariance(system: CoxeterSystem, T: GenSubset) -> bool:
    """Whether ``W`` splits as ``W_{T~} x W_{S - T~}``.

    This is the criterion for the boundary of ``(W_T, T)`` to be
    ``W``-invariant.
    """
    t_tilde = essential_of(system, T)
    rest = t_tilde.complement()
    return all(system.m(t, s) == 2 for t in t_tilde for s in rest)


# --------------------------------------------------------------------------
# density profiles

class DescentClassUnion:
    """Membership predicate for the union of ``W^{s}`` over ``s`` in ``gens``."""

    def __init__(self, gens: GenSubset):
        self.gens = gens

    def __call__(self, w: Element) -> bool:
        d = descent_set(w, "right")
        return len(d) == 1 and d.mask & self.gens.mask != 0

    def select(self, ball: CayleyBall) -> np.ndarray:
        singles = np.array([1 << s for s in self.gens], dtype=np.int64)
        return np.isin(ball.dr, singles)


def _select(target, ball) -> np.ndarray:
    if hasattr(target, "select"):
        return np.asarray(target.select(ball), dtype=bool)
    return np.array([bool(target(ball.element(i))) for i in range(len(ball))], dtype=bool)


@dataclass(frozen=True)
class DensityRow:
    radius: int
    max_distance: Optional[int]  # None: some element has no target inside the ball
    witness: tuple[int, ...]
    boundary_reliable: bool


@dataclass(frozen=True)
class DensityProfile:
    target: str
    R: int
    margin: int
    rows: tuple[DensityRow, ...]
    target_size: int = 0


def ball_distances(ball: CayleyBall, sources: np.ndarray) -> np.ndarray:
    """Graph distance inside the ball from each element to the source set (-1 if none)."""
    dist = np.full(len(ball), -1, dtype=np.int64)
    frontier = np.nonzero(sources)[0]
    dist[frontier] = 0
    d = 0
    while frontier.size:
        d += 1
        nbrs = ball.radj[frontier].ravel()
        nbrs = np.unique(nbrs[nbrs >= 0])
        nbrs = nbrs[dist[nbrs] < 0]
        dist[nbrs] = d
        frontier = nbrs
    return dist


def density_profile(system: CoxeterSystem, target: Union[Callable, DescentClassUnion], R: int,
                    margin: int = 4, *, description: str = "", eps=EPS,
                    ball: CayleyBall = None) -> DensityProfile:
    """Per inner radius ``r <= R - margin``, the largest distance from
    ``ball(r)`` to ``target`` within ``ball(R)``.

    A row is boundary-reliable when that distance is at most ``margin``: the
    nearest target element then provably lies inside ``ball(R)``.
    """
    if not R > margin >= 0:
        raise PreconditionError("need R > margin >= 0")
    if ball is None:
        ball = enumerate_ball(system, R, eps=eps)
    chosen = _select(target, ball)
    dist = ball_distances(ball, chosen)
    rows = []
    for r in range(R - margin + 1):
        stop = int(ball.offsets[r + 1])
        part = dist[:stop]
        if (part < 0).any():
            i = int(np.argmax(part < 0))
            rows.append(DensityRow(r, None, ball.nf(i), False))
            continue
        i = int(np.argmax(part))
        value = int(part[i])
        rows.append(DensityRow(r, value, ball.nf(i), value <= margin))
    if not description:
        description = getattr(target, "__name__", type(target).__name__)
    return DensityProfile(description, R, margin, tuple(rows), int(chosen.sum()))


# --------------------------------------------------------------------------
# lemma verifiers

def _check_chain(system, T, chain):
    if len(chain) == 0:
        raise PreconditionError("the chain t1..tn must be nonempty")
    if len(set(chain)) != len(chain):
        raise PreconditionError("chain generators must be distinct")
    if any(t in T for t in chain):
        raise PreconditionError("chain generators must lie outside T")
    for a, b in zip(chain, chain[1:]):
        if not _noncommuting(system, a, b):
            raise PreconditionError(
                f"consecutive chain generators {system.names[a]}, {system.names[b]} commute"
            )
    last = chain[-1]
    for t in T:
        if not _noncommuting(system, last, t):
            raise PreconditionError(
                f"last chain generator {system.names[last]} commutes with {system.names[t]}"
            )


def verify_lemma_2_7(system: CoxeterSystem, T: GenSubset, chain: Sequence[int], R: int,
                     *, ball: CayleyBall = None) -> list[tuple[int, ...]]:
    """Normal forms of ``w`` in ``ball(R)`` violating the chain-descent inclusion.

    For ``w`` supported off the chain with descent set exactly ``T``, the
    product ``w t_n ... t_1`` must have descent set exactly ``{t_1}``.
    """
    chain = tuple(chain)
    _check_chain(system, T, chain)
    if ball is None or ball.radius < R + len(chain):
        ball = enumerate_ball(system, R + len(chain))
    stop = int(ball.offsets[R + 1])
    chain_mask = 0
    for t in chain:
        chain_mask |= 1 << t
    idx = np.arange(stop)
    idx = idx[((ball.support[:stop] & chain_mask) == 0) & (ball.dr[:stop] == T.mask)]
    cur = idx
    for t in reversed(chain):
        cur = ball.radj[cur, t]
    bad = idx[ball.dr[cur] != (1 << chain[0])]
    return sorted(ball.nf(int(i)) for i in bad)


def lemma_2_7_instances(system: CoxeterSystem, max_chain: int = 2):
    """Every ``(T, chain)`` meeting the chain hypotheses with chain length <= max_chain."""
    n = system.rank
    out = []
    for mask in range(1 << n):
        T = GenSubset(mask, n)
        outside = [s for s in range(n) if s not in T]
        for k in range(1, max_chain + 1):
            for chain in permutations(outside, k):
                try:
                    _check_chain(system, T, chain)
                except PreconditionError:
                    continue
                out.append((T, chain))
    return out


def verify_descent_extension(system: CoxeterSystem, R: int, *,
                             ball: CayleyBall = None) -> list[tuple[tuple[int, ...], int]]:
    """Pairs ``(w, s0)`` where ``s0`` is far from every descent of ``w`` (``m >= 3``,
    and ``m = inf`` for at least one) yet ``w s0`` has a descent besides ``s0``."""
    if R < 0:
        raise PreconditionError("radius must be nonnegative")
    if ball is None or ball.radius < R + 1:
        ball = enumerate_ball(system, R + 1)
    n = system.rank
    stop = int(ball.offsets[R + 1])
    dr = ball.dr[:stop]
    bad = []
    for s0 in range(n):
        far = sum(1 << t for t in range(n) if _noncommuting(system, s0, t))
        inf = sum(1 << t for t in range(n) if _inf_pair(system, s0, t))
        idx = np.nonzero(((dr & ~far) == 0) & ((dr & inf) != 0))[0]
        nxt = ball.radj[idx, s0]
        for i in idx[ball.dr[nxt] != (1 << s0)]:
            bad.append((ball.nf(int(i)), s0))
    return sorted(bad)


def _intersection_counts(system, T, s, R, ball):
    """``|W^{s} s  cap  W_T  cap  ball(r)|`` for r = 0..R."""
    stop = int(ball.offsets[R + 1])
    idx = np.arange(stop)
    idx = idx[((ball.support[:stop] & ~T.mask) == 0) & ((ball.dr[:stop] >> s) & 1 == 0)]
    hit = idx[ball.dr[ball.radj[idx, s]] == (1 << s)]
    per_level = np.bincount(ball.length[hit], minlength=R + 1)[: R + 1]
    return np.cumsum(per_level).tolist()


@dataclass(frozen=True)
class GrowthTable:
    s: int
    counts: tuple[int, ...]  # counts[r - 1] for r = 1..R
    monotone: bool
    strictly_increasing: bool
    checkpoints: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return self.monotone and self.strictly_increasing


def verify_infinite_intersection(system: CoxeterSystem, T: GenSubset, s: int, R: int, *,
                                 ball: CayleyBall = None) -> GrowthTable:
    """Growth of ``W^{s} s`` inside ``W_T`` for ``s`` outside ``T`` that fails to
    commute with the essential part of ``T``; it should grow without bound."""
    if s in T:
        raise PreconditionError("s must lie outside T")
    if R < 3:
        raise PreconditionError("radius must be at least 3")
    t_tilde = essential_of(system, T)
    if not any(_noncommuting(system, s, t) for t in t_tilde):
        raise PreconditionError(
            f"{system.names[s]} commutes with every generator of the essential part of T"
        )
    if ball is None or ball.radius < R + 1:
        ball = enumerate_ball(system, R + 1)
    counts = _intersection_counts(system, T, s, R, ball)[1:]
    monotone = all(a <= b for a, b in zip(counts, counts[1:]))
    checkpoints = (R // 3, 2 * R // 3, R)
    vals = [counts[r - 1] for r in checkpoints]
    strict = vals[0] > 0 and vals[0] < vals[1] < vals[2]
    return GrowthTable(s, tuple(counts), monotone, strict, checkpoints)


@dataclass(frozen=True)
class CommutingReport:
    counts: dict  # generator index -> counts for r = 1..R
    stabilized: dict
    T_tilde: GenSubset
    violations: tuple[tuple[int, int], ...] = field(default=())

    @property
    def discrepancy(self) -> bool:
        return bool(self.violations)


def estimate_commuting_set(system: CoxeterSystem, T: GenSubset, R: int, window: int = 3, *,
                           ball: CayleyBall = None) -> tuple[GenSubset, CommutingReport]:
    """Estimate the generators ``s`` outside ``T`` whose ``W^{s} s  cap  W_T`` is finite.

    A count that has not grown over the last ``window`` radii is treated as
    finite.  Every estimated member should commute with the essential part
    of ``T``; violations are reported as a discrepancy (the radius is too
    small), never dropped.
    """
    _require_infinite(system, T)
    if T.mask == system.full().mask:
        raise PreconditionError("T must be a proper subset")
    if R <= window:
        raise PreconditionError("radius must exceed the stabilization window")
    if ball is None or ball.radius < R + 1:
        ball = enumerate_ball(system, R + 1)
    t_tilde = essential_of(system, T)
    counts, stable = {}, {}
    members = []
    for s in range(system.rank):
        if s in T:
            continue
        c = _intersection_counts(system, T, s, R, ball)[1:]
        counts[s] = tuple(c)
        stable[s] = c[-1] == c[-1 - window]
        if stable[s]:
            members.append(s)
    U = GenSubset.of(system.rank, members)
    violations = tuple((t, u) for t in t_tilde for u in U if system.m(t, u) != 2)
    return U, CommutingReport(counts, stable, t_tilde, violations)


def verify_index_lemma(system: CoxeterSystem, T: GenSubset, *, ball: CayleyBall = None) -> bool:
    """On a finite group: ``|A_T| * |W_T| == |W|`` and ``|A_T| == index(T)``."""
    if group_order(system) is INF:
        raise PreconditionError("W is infinite")
    if ball is None:
        ball = enumerate_group(system)
    a_t = int(((ball.dr & T.mask) == 0).sum())
    w_t = int(((ball.support & ~T.mask) == 0).sum())
    return a_t * w_t == len(ball) and a_t == index(system, T)


def left_coset_count(ball: CayleyBall, T: GenSubset) -> int:
    """Distinct cosets ``w W_T`` met by the ball, counted by their minimal representatives."""
    reps = set()
    for i in range(len(ball)):
        j = i
        while ball.dr[j] & T.mask:
            hits = int(ball.dr[j] & T.mask)
            j = int(ball.radj[j, (hits & -hits).bit_length() - 1])
        reps.add(j)
    return len(reps)


def infinite_proper_subsets(system: CoxeterSystem) -> list[GenSubset]:
    n = system.rank
    return [
        GenSubset(mask, n) for mask in range(1, (1 << n) - 1)
        if not is_spherical(system, GenSubset(mask, n))
    ]


def describe_mask(system: CoxeterSystem, mask: int) -> str:
    return "{" + ",".join(system.names[i] for i in mask_indices(mask)) + "}"
