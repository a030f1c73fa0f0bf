# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled level-expansion and sign-sweep kernels.

Same contracts as :mod:`coxdense._kernel_py`.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs

from .errors import NumericalAmbiguity

cnp.import_array()

ctypedef cnp.int64_t i64


cdef inline int col_sign(const double[:, :] m, Py_ssize_t j, Py_ssize_t n, double eps) noexcept nogil:
    # 1 positive, -1 negative, 0 ambiguous
    cdef Py_ssize_t i
    cdef bint all_ge = True, all_le = True, any_gt = False, any_lt = False
    cdef double x
    for i in range(n):
        x = m[i, j]
        if x < -eps:
            all_ge = False
            any_lt = True
        elif x > eps:
            all_le = False
            any_gt = True
    if all_ge and any_gt:
        return 1
    if all_le and any_lt:
        return -1
    return 0


cdef inline i64 neg_mask(const double[:, :] m, Py_ssize_t n, double eps, int *ok) noexcept nogil:
    cdef i64 mask = 0
    cdef Py_ssize_t j
    cdef int sg
    for j in range(n):
        sg = col_sign(m, j, n, eps)
        if sg == 0:
            ok[0] = 0
            return 0
        if sg < 0:
            mask |= (<i64>1) << j
    return mask


cdef inline void right_reflect(const double[:, :] src, double[:, :] dst, const double[:] b, Py_ssize_t s,
                               Py_ssize_t n) noexcept nogil:
    # dst = src * sigma_s  (rank-one update of every column)
    cdef Py_ssize_t i, j
    cdef double c
    for i in range(n):
        c = 2.0 * src[i, s]
        for j in range(n):
            dst[i, j] = src[i, j] - c * b[j]


cdef inline void left_reflect(const double[:, :] src, double[:, :] dst, const double[:] b, Py_ssize_t s,
                              Py_ssize_t n) noexcept nogil:
    # dst = sigma_s * src  (only row s changes)
    cdef Py_ssize_t i, j
    cdef double acc
    for i in range(n):
        for j in range(n):
            dst[i, j] = src[i, j]
    for j in range(n):
        acc = 0.0
        for i in range(n):
            acc += b[i] * src[i, j]
        dst[s, j] = src[s, j] - 2.0 * acc


def _ambiguous(m, eps):
    raise NumericalAmbiguity(
        f"root vector in {np.asarray(m).tolist()} is neither certifiably positive "
        f"nor negative at eps={eps:g}"
    )


def expand_level(const double[:, :] bil, const double[:, :, :] fw, const double[:, :, :] iv,
                 const i64[:] dl, const i64[:] dr, const i64[:] inverse, const i64[:, :] radj,
                 Py_ssize_t lo, double eps):
    cdef Py_ssize_t F = fw.shape[0], n = bil.shape[0], hi = lo + F
    cdef Py_ssize_t s, k, t, c = 0, cap = F * n
    cdef i64 lmask, rmask, wprime, x, v
    cdef int ok = 1
    cdef double[:, :] tmp = np.empty((n, n))

    child_arr = np.full((F, n), -1, dtype=np.int64)
    cdef i64[:, :] child = child_arr
    par_arr = np.empty(cap, dtype=np.int64)
    let_arr = np.empty(cap, dtype=np.int64)
    cdl_arr = np.empty(cap, dtype=np.int64)
    cdr_arr = np.empty(cap, dtype=np.int64)
    cfw_arr = np.empty((cap, n, n))
    civ_arr = np.empty((cap, n, n))
    cdef i64[:] par = par_arr, let = let_arr, cdl = cdl_arr, cdr = cdr_arr
    cdef double[:, :, :] cfw = cfw_arr, civ = civ_arr

    for s in range(n):
        for k in range(F):
            if (dl[lo + k] >> s) & 1:
                continue
            right_reflect(iv[k], civ[c], bil[s], s, n)
            lmask = neg_mask(civ[c], n, eps, &ok)
            if not ok:
                _ambiguous(civ[c], eps)
            if lmask & ((<i64>1 << s) - 1):
                continue
            left_reflect(fw[k], cfw[c], bil[s], s, n)
            rmask = neg_mask(cfw[c], n, eps, &ok)
            if not ok:
                _ambiguous(cfw[c], eps)
            par[c] = lo + k
            let[c] = s
            cdl[c] = lmask
            cdr[c] = rmask
            child[k, s] = hi + c
            c += 1

    rup_arr = np.full((F, n), -1, dtype=np.int64)
    cdef i64[:, :] rup = rup_arr
    for k in range(F):
        for s in range(n):
            if (dr[lo + k] >> s) & 1:
                continue
            left_reflect(iv[k], tmp, bil[s], s, n)
            lmask = neg_mask(tmp, n, eps, &ok)
            if not ok:
                _ambiguous(tmp, eps)
            if lmask == 0:
                raise NumericalAmbiguity("right multiple without a left descent")
            t = 0
            while not (lmask >> t) & 1:
                t += 1
            if not (dl[lo + k] >> t) & 1:
                v = child[k, t]
            else:
                wprime = inverse[radj[inverse[lo + k], t]]
                x = radj[wprime, s]
                v = child[x - lo, t]
            if v < 0:
                raise NumericalAmbiguity("descent data inconsistent with the exchange condition")
            rup[k, s] = v

    return (par_arr[:c], let_arr[:c], cfw_arr[:c], civ_arr[:c], cdl_arr[:c], cdr_arr[:c], rup_arr)


cdef inline int pcol_sign(const double *m, Py_ssize_t j, Py_ssize_t n, double eps) noexcept nogil:
    cdef Py_ssize_t i
    cdef bint all_ge = True, all_le = True, any_gt = False, any_lt = False
    cdef double x
    for i in range(n):
        x = m[i * n + j]
        if x < -eps:
            all_ge = False
            any_lt = True
        elif x > eps:
            all_le = False
            any_gt = True
    if all_ge and any_gt:
        return 1
    if all_le and any_lt:
        return -1
    return 0


cdef inline double pcol_size(const double *m, Py_ssize_t j, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i
    cdef double big = 0.0, a
    for i in range(n):
        a = fabs(m[i * n + j])
        if a > big:
            big = a
    return big


def sign_sweep(const double[:, ::1] bil, Py_ssize_t radius, double eps):
    """Visit every element of length <= radius without storing the ball.

    Every column of every inverse matrix is sign-checked.  The ball is closed
    under inversion and ``fwd(w) = inv(w^{-1})``, so this covers every root
    vector ``w(alpha_s)`` as well.  Returns ``(counts per length, smallest
    max-abs coordinate seen)``.
    """
    cdef Py_ssize_t n = bil.shape[0], nn = n * n, depth, s, j, i
    cdef int ok = 1, sg
    cdef double margin = 1e300, a, c
    iv_arr = np.zeros((radius + 1) * nn)
    cdef double[::1] ivv = iv_arr
    cdef double *iv = &ivv[0]
    cdef const double *b = &bil[0, 0]
    cdef double *src
    cdef double *dst
    nxt_arr = np.zeros(radius + 1, dtype=np.int64)
    dlm_arr = np.zeros(radius + 1, dtype=np.int64)
    counts_arr = np.zeros(radius + 1, dtype=np.int64)
    cdef i64[::1] nxt = nxt_arr, dlm = dlm_arr, counts = counts_arr
    cdef i64 lmask
    for i in range(n):
        iv[i * n + i] = 1.0
    counts[0] = 1
    depth = 0
    with nogil:
        while depth >= 0:
            if depth == radius or nxt[depth] >= n:
                depth -= 1
                continue
            s = nxt[depth]
            nxt[depth] += 1
            if (dlm[depth] >> s) & 1:
                continue
            # child inverse matrix: iv * sigma_s
            src = iv + depth * nn
            dst = src + nn
            for i in range(n):
                c = 2.0 * src[i * n + s]
                for j in range(n):
                    dst[i * n + j] = src[i * n + j] - c * b[s * n + j]
            lmask = 0
            for j in range(n):
                sg = pcol_sign(dst, j, n, eps)
                if sg == 0:
                    ok = 0
                    break
                if sg < 0:
                    lmask |= (<i64>1) << j
                    if j < s:
                        break
                a = pcol_size(dst, j, n)
                if a < margin:
                    margin = a
            if not ok:
                break
            if lmask & ((<i64>1 << s) - 1):
                continue
            depth += 1
            counts[depth] += 1
            dlm[depth] = lmask
            nxt[depth] = 0
    if not ok:
        raise NumericalAmbiguity(
            f"root vector at length {depth + 1} is neither certifiably positive "
            f"nor negative at eps={eps:g}"
        )
    return counts_arr, margin
