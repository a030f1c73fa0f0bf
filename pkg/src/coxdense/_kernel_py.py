"""Pure numpy implementation of the level-expansion kernel.

The compiled module ``_kernel`` exposes the same function; see
:func:`expand_level` for the contract both follow.
"""
import numpy as np

from .errors import NumericalAmbiguity


def column_masks(mats, eps):
    """Bitmask of negative columns for a stack of ``(c, n, n)`` matrices.

    Every column must be certifiably positive or negative.
    """
    pos = (mats >= -eps).all(axis=1) & (mats > eps).any(axis=1)
    neg = (mats <= eps).all(axis=1) & (mats < -eps).any(axis=1)
    bad = ~(pos | neg)
    if bad.any():
        c, j = np.argwhere(bad)[0]
        raise NumericalAmbiguity(
            f"root vector {mats[c, :, j].tolist()} is neither certifiably positive "
            f"nor negative at eps={eps:g}"
        )
    weights = np.left_shift(np.int64(1), np.arange(mats.shape[2], dtype=np.int64))
    return (neg.astype(np.int64) * weights).sum(axis=1)


def _lowest_bit(masks):
    low = masks & -masks
    return np.log2(low).astype(np.int64)


def expand_level(bil, fw, iv, dl, dr, inverse, radj, lo, eps):
    """Expand one level of a Cayley ball.

    ``fw``/``iv`` hold the forward and inverse matrices of the level's
    elements, whose global indices are ``lo .. lo + len(fw) - 1``.  ``dl``,
    ``dr``, ``inverse`` and ``radj`` are global arrays; entries for this level
    (and the right-up edges of the previous level) must be filled in.

    Returns ``(parent, letter, cfw, civ, cdl, cdr, rup)``: the next level in
    ShortLex order (child ``k`` has normal form ``letter[k]`` followed by the
    normal form of ``parent[k]``) and ``rup[w - lo, s]``, the global index of
    ``w s`` whenever ``s`` is not a right descent of ``w`` (``-1`` elsewhere).
    Children are numbered from ``lo + len(fw)``.
    """
    F, n = fw.shape[0], bil.shape[0]
    hi = lo + F
    ldl = dl[lo:hi]
    ldr = dr[lo:hi]
    child = np.full((F, n), -1, dtype=np.int64)

    parents, letters, cfws, civs, cdls, cdrs = [], [], [], [], [], []
    count = 0
    for s in range(n):
        cand = np.nonzero((ldl >> s) & 1 == 0)[0]
        if cand.size == 0:
            continue
        m = iv[cand]
        m = m - 2.0 * m[:, :, s][:, :, None] * bil[s][None, None, :]
        lmask = column_masks(m, eps)
        keep = (lmask & ((1 << s) - 1)) == 0
        cand, m, lmask = cand[keep], m[keep], lmask[keep]
        if cand.size == 0:
            continue
        f = fw[cand].copy()
        f[:, s, :] -= 2.0 * np.einsum("j,cjk->ck", bil[s], fw[cand])
        rmask = column_masks(f, eps)
        child[cand, s] = hi + count + np.arange(cand.size)
        count += cand.size
        parents.append(cand + lo)
        letters.append(np.full(cand.size, s, dtype=np.int64))
        cfws.append(f)
        civs.append(m)
        cdls.append(lmask)
        cdrs.append(rmask)

    rup = np.full((F, n), -1, dtype=np.int64)
    for s in range(n):
        cand = np.nonzero((ldr >> s) & 1 == 0)[0]
        if cand.size == 0:
            continue
        m = iv[cand].copy()
        m[:, s, :] -= 2.0 * np.einsum("j,cjk->ck", bil[s], iv[cand])
        lmask = column_masks(m, eps)
        if (lmask == 0).any():
            raise NumericalAmbiguity("right multiple without a left descent")
        t = _lowest_bit(lmask)
        fresh = ((ldl[cand] >> t) & 1) == 0
        v = np.empty(cand.size, dtype=np.int64)
        v[fresh] = child[cand[fresh], t[fresh]]
        old = ~fresh
        if old.any():
            w = cand[old] + lo
            tt = t[old]
            wprime = inverse[radj[inverse[w], tt]]
            x = radj[wprime, s]
            v[old] = child[x - lo, tt]
        if (v < 0).any():
            raise NumericalAmbiguity("descent data inconsistent with the exchange condition")
        rup[cand, s] = v

    if count == 0:
        empty = np.zeros(0, dtype=np.int64)
        mats = np.zeros((0, n, n))
        return empty, empty, mats, mats.copy(), empty, empty, rup
    return (
        np.concatenate(parents),
        np.concatenate(letters),
        np.concatenate(cfws),
        np.concatenate(civs),
        np.concatenate(cdls),
        np.concatenate(cdrs),
        rup,
    )


def sign_sweep(bil, radius, eps):
    """Visit every element of length <= radius without storing the ball.

    Only inverse matrices are tracked: the ball is closed under inversion,
    so their columns cover every root vector ``w(alpha_s)``.  Returns
    ``(counts per length, smallest max-abs coordinate seen)``.
    """
    n = bil.shape[0]
    counts = np.zeros(radius + 1, dtype=np.int64)
    counts[0] = 1
    margin = np.inf
    stack = [(np.eye(n), 0, 0)]
    while stack:
        iv, dlmask, depth = stack.pop()
        if depth == radius:
            continue
        for s in range(n):
            if dlmask >> s & 1:
                continue
            civ = iv - 2.0 * np.outer(iv[:, s], bil[s])
            lmask = int(column_masks(civ[None], eps)[0])
            if lmask & ((1 << s) - 1):
                continue
            margin = min(margin, np.abs(civ).max(axis=0).min())
            counts[depth + 1] += 1
            stack.append((civ, lmask, depth + 1))
    return counts, float(margin)
