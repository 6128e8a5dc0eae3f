# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled lane of the hot kernels.

Contract and pivoting order match _kernels_py exactly; the parity test
in tests/test_kernels.py asserts identical outputs on random inputs.
"""

from libc.stdlib cimport calloc, free

BACKEND = "compiled"


cdef inline long _m(long x, long p):
    x %= p
    return x + p if x < 0 else x


cdef long _inv_mod(long x, long p):
    cdef long result = 1
    cdef long base = x % p
    cdef long e = p - 2
    while e > 0:
        if e & 1:
            result = (result * base) % p
        base = (base * base) % p
        e >>= 1
    return result


def polymulmod(a, b, mod, long p):
    """(a*b) mod `mod` over F_p; tuples low-to-high, mod monic."""
    cdef Py_ssize_t n = len(mod) - 1
    cdef Py_ssize_t la = len(a), lb = len(b)
    cdef Py_ssize_t i, j, base_i
    cdef long c
    cdef long *prod = <long *> calloc(2 * n if n > 0 else 1, sizeof(long))
    cdef long *am = <long *> calloc(la if la else 1, sizeof(long))
    cdef long *bm = <long *> calloc(lb if lb else 1, sizeof(long))
    cdef long *mm = <long *> calloc(n + 1, sizeof(long))
    try:
        for i in range(la):
            am[i] = a[i]
        for i in range(lb):
            bm[i] = b[i]
        for i in range(n + 1):
            mm[i] = mod[i]
        for i in range(la):
            c = am[i]
            if c:
                for j in range(lb):
                    if bm[j]:
                        prod[i + j] = _m(prod[i + j] + c * bm[j], p)
        for i in range(2 * n - 2, n - 1, -1):
            c = prod[i]
            if c:
                prod[i] = 0
                base_i = i - n
                for j in range(n):
                    if mm[j]:
                        prod[base_i + j] = _m(prod[base_i + j] - c * mm[j], p)
        return tuple([prod[i] for i in range(n)])
    finally:
        free(prod)
        free(am)
        free(bm)
        free(mm)


def polypowmod(a, e, mod, long p):
    """a**e mod `mod` over F_p, e >= 0 (python int, may be large)."""
    cdef Py_ssize_t n = len(mod) - 1
    result = tuple([1] + [0] * (n - 1))
    base = tuple(a)
    while e > 0:
        if e & 1:
            result = polymulmod(result, base, mod, p)
        base = polymulmod(base, base, mod, p)
        e >>= 1
    return result


def rref_mod_p(mat, long p):
    """Reduced row echelon form over F_p; returns (rows, pivot columns)."""
    cdef Py_ssize_t rows = len(mat)
    if rows == 0:
        return [], []
    cdef Py_ssize_t cols = len(mat[0])
    cdef Py_ssize_t r, c, i, j, k
    cdef long piv_inv, factor, tmp
    cdef long *A = <long *> calloc(rows * cols if rows * cols else 1, sizeof(long))
    pivots = []
    try:
        for i in range(rows):
            row = mat[i]
            for j in range(cols):
                A[i * cols + j] = _m(row[j], p)
        r = 0
        for c in range(cols):
            if r >= rows:
                break
            i = -1
            for k in range(r, rows):
                if A[k * cols + c]:
                    i = k
                    break
            if i < 0:
                continue
            if i != r:
                for j in range(cols):
                    tmp = A[r * cols + j]
                    A[r * cols + j] = A[i * cols + j]
                    A[i * cols + j] = tmp
            piv_inv = _inv_mod(A[r * cols + c], p)
            for j in range(cols):
                A[r * cols + j] = _m(A[r * cols + j] * piv_inv, p)
            for k in range(rows):
                if k != r:
                    factor = A[k * cols + c]
                    if factor:
                        for j in range(cols):
                            A[k * cols + j] = _m(A[k * cols + j] - factor * A[r * cols + j], p)
            pivots.append(c)
            r += 1
        out = [[A[i * cols + j] for j in range(cols)] for i in range(rows)]
        return out, pivots
    finally:
        free(A)


def nullspace_mod_p(mat, Py_ssize_t ncols, long p):
    """Basis of the right kernel of mat (ncols columns) over F_p."""
    if not mat:
        return [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]
    R, pivots = rref_mod_p(mat, p)
    pivset = set(pivots)
    free_cols = [c for c in range(ncols) if c not in pivset]
    basis = []
    for f in free_cols:
        v = [0] * ncols
        v[f] = 1
        for r, c in enumerate(pivots):
            v[c] = (-R[r][f]) % p
        basis.append(v)
    return basis


def solve_mod_p(mat, rhs, long p):
    """One solution of mat @ v = rhs over F_p, or None."""
    if not mat:
        return None
    ncols = len(mat[0])
    aug = [list(row) + [rhs[i]] for i, row in enumerate(mat)]
    R, pivots = rref_mod_p(aug, p)
    if ncols in pivots:
        return None
    v = [0] * ncols
    for r, c in enumerate(pivots):
        v[c] = R[r][ncols] % p
    return v
