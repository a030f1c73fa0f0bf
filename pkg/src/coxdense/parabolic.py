"""Parabolic subgroups: supports, descent classes, A_T and the index."""
from __future__ import annotations

from .classify import essential_subset, group_order
from .core import INF, CoxeterSystem, GenSubset
from .words import Element, descent_set, from_word, mul_gen


def support(w: Element) -> GenSubset:
    """Letters occurring in the normal form; ``w`` lies in ``W_T`` iff this is inside ``T``."""
    return GenSubset.of(w.system.rank, set(w.nf))


def in_descent_class(w: Element, T: GenSubset) -> bool:
    """Membership in ``W^T``: the right descent set is exactly ``T``."""
    return descent_set(w, "right").mask == T.mask


def in_A_T(w: Element, T: GenSubset) -> bool:
    """No right descent of ``w`` lies in ``T``."""
    return descent_set(w, "right").mask & T.mask == 0


def coset_decompose(w: Element, T: GenSubset) -> tuple[Element, Element]:
    """Split ``w = u v`` with ``u`` in ``A_T`` and ``v`` in ``W_T``.

    Right descents in ``T`` are stripped, least first; lengths add.
    """
    u = w
    stripped = []
    while True:
        hits = descent_set(u, "right").mask & T.mask
        if not hits:
            break
        t = (hits & -hits).bit_length() - 1
        u = mul_gen(u, t, "right")
        stripped.append(t)
    v = from_word(w.system, reversed(stripped), w.eps)
    return u, v


def index(system: CoxeterSystem, T: GenSubset):
    """``[W : W_T]``, or ``INF``.

    Finite exactly when ``T`` contains the essential subset; then it is
    ``|W_{S - S~}| / |W_{T - S~}|``.
    """
    ess = essential_subset(system)
    if not ess.issubset(T):
        return INF
    whole = group_order(system, system.full() - ess)
    part = group_order(system, T - ess)
    return whole // part

