"""The word problem through the geometric representation.

An element ``w`` carries the matrix of its action on the span of the
simple roots (``fwd``), the matrix of ``w^{-1}`` (``inv``) and its
ShortLex normal form.  ``s`` is a right descent of ``w`` exactly when
``w(alpha_s)`` (column ``s`` of ``fwd``) is a negative root; left descents
are read off ``inv`` the same way.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .core import INF, CoxeterSystem, GenSubset
from .errors import NumericalAmbiguity, PreconditionError, ResourceLimit

EPS = 1e-8
DEFAULT_MAX_BALL = 2_000_000

try:
    from . import _kernel as _compiled
except ImportError:  # extension not built
    _compiled = None
from . import _kernel_py

KERNEL = "cython" if _compiled is not None else "python"


def kernel_module(name=None):
    """Resolve a kernel by name; ``None`` picks the compiled one when present."""
    name = name or os.environ.get("COX_KERNEL") or KERNEL
    if name == "cython":
        if _compiled is None:
            raise ImportError("compiled kernel coxdense._kernel is not built")
        return _compiled
    if name == "python":
        return _kernel_py
    raise ValueError(f"unknown kernel {name!r}")


# cos(pi/m) where an exactly representable (or correctly rounded) value
# exists; math.cos(math.pi / m) is off by an ulp, which long words amplify
_EXACT_COS = {2: 0.0, 3: 0.5, 4: math.sqrt(2.0) / 2, 6: math.sqrt(3.0) / 2}


@lru_cache(maxsize=None)
def _bilinear(matrix) -> np.ndarray:
    n = matrix.rank
    B = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            m = matrix.entries[i][j]
            B[i, j] = -1.0 if m is INF else -_EXACT_COS.get(m, math.cos(math.pi / m))
    B.setflags(write=False)
    return B


def bilinear_form(system: CoxeterSystem) -> np.ndarray:
    """``B(alpha_s, alpha_t) = -cos(pi / m(s, t))``, with ``-1`` for ``m = inf``."""
    return _bilinear(system.matrix)


def reflection_matrix(system: CoxeterSystem, s: int) -> np.ndarray:
    B = bilinear_form(system)
    sigma = np.eye(system.rank)
    sigma[s, :] -= 2.0 * B[s]
    return sigma


def root_sign(vec, eps=EPS) -> int:
    if (vec >= -eps).all() and (vec > eps).any():
        return 1
    if (vec <= eps).all() and (vec < -eps).any():
        return -1
    raise NumericalAmbiguity(
        f"root vector {np.asarray(vec).tolist()} is neither certifiably positive "
        f"nor negative at eps={eps:g}"
    )


def _negative_columns(mat, eps) -> int:
    mask = 0
    for j in range(mat.shape[1]):
        if root_sign(mat[:, j], eps) < 0:
            mask |= 1 << j
    return mask


def _normal_form(system, inv, eps, limit) -> tuple[int, ...]:
    # greedy: strip the least left descent until none is left
    B = bilinear_form(system)
    x = inv.copy()
    word = []
    while True:
        mask = _negative_columns(x, eps)
        if not mask:
            return tuple(word)
        if len(word) >= limit:
            raise NumericalAmbiguity("normal form longer than the length bound")
        t = (mask & -mask).bit_length() - 1
        word.append(t)
        x -= 2.0 * np.outer(x[:, t], B[t])


@dataclass(frozen=True, eq=False)
class Element:
    system: CoxeterSystem
    fwd: np.ndarray = field(repr=False)
    inv: np.ndarray = field(repr=False)
    nf: tuple[int, ...]
    eps: float = EPS

    @property
    def length(self) -> int:
        return len(self.nf)

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return equals(self, other)

    def __hash__(self):
        return hash(self.nf)

    def __mul__(self, other: "Element") -> "Element":
        return multiply(self, other)

    def word(self) -> str:
        return word_string(self.system, self.nf)

    def __str__(self):
        return self.word()


def word_string(system: CoxeterSystem, word: Sequence[int]) -> str:
    if not word:
        return "1"
    sep = "" if all(len(x) == 1 for x in system.names) else " "
    return sep.join(system.names[i] for i in word)


def parse_word(system: CoxeterSystem, text: str) -> tuple[int, ...]:
    """Parse ``"aba"``, ``"a b a"`` or ``"s1 s2"``; ``"1"`` or ``""`` is the identity."""
    text = text.strip()
    if text in ("", "1", "e"):
        return ()
    tokens = text.replace(",", " ").split()
    if len(tokens) == 1 and tokens[0] not in system.names:
        tokens = list(tokens[0])
    return tuple(system.index(tok) for tok in tokens)


def identity(system: CoxeterSystem, eps=EPS) -> Element:
    n = system.rank
    return Element(system, np.eye(n), np.eye(n), (), eps)


def _from_matrices(system, fwd, inv, eps, limit) -> Element:
    return Element(system, fwd, inv, _normal_form(system, inv, eps, limit), eps)


def mul_gen(w: Element, s: int, side: str = "right") -> Element:
    """``w s`` (``side="right"``) or ``s w`` (``side="left"``)."""
    if not 0 <= s < w.system.rank:
        raise PreconditionError(f"generator index {s} out of range")
    B = bilinear_form(w.system)
    if side == "right":
        fwd = w.fwd - 2.0 * np.outer(w.fwd[:, s], B[s])
        inv = w.inv.copy()
        inv[s, :] -= 2.0 * (B[s] @ w.inv)
    elif side == "left":
        fwd = w.fwd.copy()
        fwd[s, :] -= 2.0 * (B[s] @ w.fwd)
        inv = w.inv - 2.0 * np.outer(w.inv[:, s], B[s])
    else:
        raise ValueError(f"side must be 'left' or 'right', not {side!r}")
    out = _from_matrices(w.system, fwd, inv, w.eps, w.length + 1)
    if abs(out.length - w.length) != 1:
        raise NumericalAmbiguity("multiplication by a generator did not change length by one")
    return out


def from_word(system: CoxeterSystem, word: Iterable[int], eps=EPS) -> Element:
    word = tuple(word)
    B = bilinear_form(system)
    fwd = np.eye(system.rank)
    inv = np.eye(system.rank)
    for s in word:
        if not 0 <= s < system.rank:
            raise PreconditionError(f"generator index {s} out of range")
        fwd -= 2.0 * np.outer(fwd[:, s], B[s])
        inv[s, :] -= 2.0 * (B[s] @ inv)
    return _from_matrices(system, fwd, inv, eps, len(word))


def _reduced_product(system, nf, letters, eps) -> Element:
    # One letter at a time, rebuilding from the current normal form.  Matrix
    # products or long unreduced words pass through elements much longer than
    # the result, and cancelling their large entries leaves noise above eps.
    out = from_word(system, nf, eps)
    for s in letters:
        out = from_word(system, out.nf + (s,), eps)
    return out


def element(system: CoxeterSystem, text: str, eps=EPS) -> Element:
    word = parse_word(system, text)
    return from_word(system, word, eps) if word else identity(system, eps)


def descent_set(w: Element, side: str = "right") -> GenSubset:
    if side == "right":
        mat = w.fwd
    elif side == "left":
        mat = w.inv
    else:
        raise ValueError(f"side must be 'left' or 'right', not {side!r}")
    return GenSubset(_negative_columns(mat, w.eps), w.system.rank)


def normal_form(w: Element) -> tuple[int, ...]:
    """Recompute the ShortLex normal form from the matrices."""
    return _normal_form(w.system, w.inv, w.eps, max(w.length, 1) * 4 + 16)


def _same_system(w, v):
    if w.system != v.system:
        raise PreconditionError("elements belong to different Coxeter systems")


def equals(w: Element, v: Element) -> bool:
    _same_system(w, v)
    return w.nf == v.nf


def inverse(w: Element) -> Element:
    # nf of the inverse comes from re-normalizing, so only the matrices swap
    return _from_matrices(w.system, w.inv, w.fwd, w.eps, w.length)


def multiply(w: Element, v: Element) -> Element:
    _same_system(w, v)
    return _reduced_product(w.system, w.nf, v.nf, w.eps)


def word_distance(w: Element, v: Element) -> int:
    """``d(w, v) = l(w^{-1} v)``."""
    _same_system(w, v)
    return _reduced_product(w.system, w.nf[::-1], v.nf, w.eps).length


def max_ball() -> int:
    return int(os.environ.get("COX_MAX_BALL", DEFAULT_MAX_BALL))


class CayleyBall:
    """All elements of length at most ``radius``, in ShortLex order.

    Element ``i`` has normal form ``letter[i]`` followed by the normal form
    of ``parent[i]``.  ``radj[i, s]`` is the index of ``w_i s`` or ``-1``
    when that element lies outside the ball; ``inverse[i]`` indexes
    ``w_i^{-1}``.  ``dl``/``dr``/``support`` are bitmasks.
    """

    def __init__(self, system, radius, offsets, parent, letter, dl, dr, support, inverse, radj,
                 lchild, eps=EPS):
        self.system = system
        self.radius = radius
        self.offsets = offsets
        self.parent = parent
        self.letter = letter
        self.dl = dl
        self.dr = dr
        self.support = support
        self.inverse = inverse
        self.radj = radj
        self.lchild = lchild
        self.eps = eps
        self.length = np.repeat(np.arange(len(offsets) - 1), np.diff(offsets))

    def __len__(self):
        return int(self.offsets[-1])

    def level(self, k: int) -> range:
        if k < 0 or k >= len(self.offsets) - 1:
            return range(0)
        return range(int(self.offsets[k]), int(self.offsets[k + 1]))

    def counts(self) -> list[int]:
        """Number of elements of each length ``0..radius``."""
        return np.diff(self.offsets).tolist()

    def nf(self, i: int) -> tuple[int, ...]:
        word = []
        while i:
            word.append(int(self.letter[i]))
            i = int(self.parent[i])
        return tuple(word)

    def element(self, i: int) -> Element:
        return from_word(self.system, self.nf(i), self.eps)

    @property
    def elements(self) -> list[Element]:
        return [self.element(i) for i in range(len(self))]

    def find(self, word: Sequence[int]) -> int:
        """Index of the element spelled by ``word``; -1 if the path leaves the ball."""
        i = 0
        for s in word:
            i = int(self.radj[i, s])
            if i < 0:
                return -1
        return i

    def find_nf(self, nf: Sequence[int]) -> int:
        """Index of the element whose normal form is ``nf``; -1 if ``nf`` is not one."""
        i = 0
        for s in reversed(nf):
            i = int(self.lchild[i, s])
            if i < 0:
                return -1
        return i


def enumerate_ball(system: CoxeterSystem, radius: int, *, cap=None, eps=EPS,
                   kernel=None) -> CayleyBall:
    """Every element of length at most ``radius``.

    Raises :class:`ResourceLimit` when the ball would hold more than ``cap``
    elements (default ``COX_MAX_BALL`` or 2,000,000).
    """
    if radius < 0:
        raise PreconditionError("radius must be nonnegative")
    kern = kernel_module(kernel)
    cap = max_ball() if cap is None else cap
    n = system.rank
    B = np.ascontiguousarray(bilinear_form(system), dtype=np.float64)

    capacity = 64
    parent = np.zeros(capacity, dtype=np.int64)
    letter = np.full(capacity, -1, dtype=np.int64)
    dl = np.zeros(capacity, dtype=np.int64)
    dr = np.zeros(capacity, dtype=np.int64)
    support = np.zeros(capacity, dtype=np.int64)
    inv_idx = np.zeros(capacity, dtype=np.int64)
    radj = np.full((capacity, n), -1, dtype=np.int64)
    lchild = np.full((capacity, n), -1, dtype=np.int64)

    fw = np.eye(n)[None].copy()
    iv = np.eye(n)[None].copy()
    offsets = [0, 1]
    lo = 0
    for _ in range(radius):
        hi = lo + fw.shape[0]
        cpar, clet, cfw, civ, cdl, cdr, rup = kern.expand_level(
            B, fw, iv, dl, dr, inv_idx, radj, lo, eps
        )
        c = cpar.shape[0]
        if hi + c > cap:
            raise ResourceLimit(f"Cayley ball of radius {radius} exceeds {cap} elements")
        if hi + c > capacity:
            capacity = max(2 * capacity, hi + c)
            parent, letter, dl, dr, support, inv_idx = (
                _grow(a, capacity, 0) for a in (parent, letter, dl, dr, support, inv_idx)
            )
            radj = _grow(radj, capacity, -1)
            lchild = _grow(lchild, capacity, -1)
        new = np.arange(hi, hi + c)
        parent[new] = cpar
        letter[new] = clet
        dl[new] = cdl
        dr[new] = cdr
        support[new] = support[cpar] | (np.int64(1) << clet)
        lchild[cpar, clet] = new
        radj[lo:hi] = np.where(rup >= 0, rup, radj[lo:hi])
        w_idx, s_idx = np.nonzero(rup >= 0)
        radj[rup[w_idx, s_idx], s_idx] = w_idx + lo
        inv_idx[new] = radj[inv_idx[cpar], clet]
        offsets.append(hi + c)
        fw, iv, lo = cfw, civ, hi
        if c == 0:
            break
    while len(offsets) < radius + 2:
        offsets.append(offsets[-1])
    N = offsets[-1]
    return CayleyBall(
        system, radius, np.asarray(offsets, dtype=np.int64),
        parent[:N].copy(), letter[:N].copy(), dl[:N].copy(), dr[:N].copy(),
        support[:N].copy(), inv_idx[:N].copy(), radj[:N].copy(), lchild[:N].copy(), eps,
    )


def _grow(a, capacity, fill):
    out = np.full((capacity,) + a.shape[1:], fill, dtype=a.dtype)
    out[: a.shape[0]] = a
    return out


def enumerate_group(system: CoxeterSystem, *, cap=None, eps=EPS, kernel=None) -> CayleyBall:
    """The whole group, for finite ``W``.

    The returned ball's radius is the length of the longest element.
    """
    from .classify import group_order

    if group_order(system) is INF:
        raise PreconditionError("W is infinite")
    radius = 4
    while True:
        ball = enumerate_ball(system, radius, cap=cap, eps=eps, kernel=kernel)
        if ball.counts()[-1] == 0:
            top = max(k for k, c in enumerate(ball.counts()) if c)
            return CayleyBall(
                system, top, ball.offsets[: top + 2], ball.parent, ball.letter, ball.dl,
                ball.dr, ball.support, ball.inverse, ball.radj, ball.lchild, eps,
            )
        radius *= 2


def sign_sweep(system: CoxeterSystem, radius: int, *, eps=EPS, kernel=None):
    """Sign-check every root vector ``w(alpha_s)`` with ``l(w) <= radius``.

    Nothing is stored, so this reaches radii far beyond the ball cap.
    Returns ``(counts per length, smallest max-abs coordinate)``; raises
    :class:`NumericalAmbiguity` on the first uncertifiable vector.
    """
    if radius < 0:
        raise PreconditionError("radius must be nonnegative")
    _negative_columns(np.eye(system.rank), eps)
    B = np.ascontiguousarray(bilinear_form(system), dtype=np.float64)
    counts, margin = kernel_module(kernel).sign_sweep(B, radius, eps)
    return [int(c) for c in counts], min(float(margin), 1.0)
