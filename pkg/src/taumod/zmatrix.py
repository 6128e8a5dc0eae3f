"""Dense matrices of z-series: the little algebra layer under
isocrystals and the semilinear solvers.

Matrices are lists of rows of ZSeries over a shared base K. Everything
is exact-arithmetic; windows propagate through the entry operations.
"""

import math

from taumod.errors import InputError, NotInvertible
from taumod.zseries import ZSeries

INF = math.inf


def zeros(K, rows, cols):
    return [[ZSeries.zero(K) for _ in range(cols)] for _ in range(rows)]


def identity(K, n):
    out = zeros(K, n, n)
    for i in range(n):
        out[i][i] = ZSeries.one(K)
    return out


def dims(A):
    return len(A), len(A[0]) if A else 0


def add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]

def sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def neg(A):
    return [[-a for a in row] for row in A]


def mul(A, B):
    n, k = dims(A)
    k2, m = dims(B)
    if k != k2:
        raise InputError(f"matrix shapes {n}x{k} and {k2}x{m} do not compose")
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = A[i][0] * B[0][j]
            for l in range(1, k):
                acc = acc + A[i][l] * B[l][j]
            row.append(acc)
        out.append(row)
    return out


def matvec(A, v):
    return [col[0] for col in mul(A, [[x] for x in v])]


def scale(A, s):
    """Entrywise product with a ZSeries scalar."""
    return [[s * a for a in row] for row in A]


def sigma(A, k=1):
    return [[a.sigma(k) for a in row] for row in A]


def transpose(A):
    return [list(row) for row in zip(*A)]


def kron(A, B):
    """Kronecker product with row-major index pairing:
    (A kron B)[(i,j),(k,l)] = A[i][k] * B[j][l]."""
    n, m = dims(A)
    p, q = dims(B)
    out = []
    for i in range(n):
        for j in range(p):
            row = []
            for k in range(m):
                for l in range(q):
                    row.append(A[i][k] * B[j][l])
            out.append(row)
    return out


def det(A):
    """Laplace expansion; fine at the ranks used here (<= 9)."""
    n, m = dims(A)
    if n != m:
        raise InputError("determinant of a non-square matrix")
    if n == 0:
        raise InputError("determinant of an empty matrix")
    if n == 1:
        return A[0][0]
    acc = None
    for j in range(n):
        entry = A[0][j]
        if not entry.co and entry.hi is INF:
            continue  # exact zero column entry
        minor = [row[:j] + row[j + 1 :] for row in A[1:]]
        term = entry * det(minor)
        if j % 2 == 1:
            term = -term
        acc = term if acc is None else acc + term
    if acc is None:
        K = A[0][0].K
        return ZSeries.zero(K)
    return acc


def agrees(A, B):
    n, m = dims(A)
    n2, m2 = dims(B)
    if (n, m) != (n2, m2):
        return False
    return all(a.agrees_with(b) for ra, rb in zip(A, B) for a, b in zip(ra, rb))


def truncate(A, hi):
    return [[a.truncate(hi) for a in row] for row in A]


def inv(A, prec=None):
    """Inverse over K((z)) by Gauss-Jordan elimination.

    Pivots are chosen by least z-order among known-nonzero candidates,
    which keeps windows as wide as the input allows. NotInvertible when
    no usable pivot exists in some column.
    """
    n, m = dims(A)
    if n != m:
        raise InputError("inverse of a non-square matrix")
    work = [list(row) for row in A]
    out = identity(A[0][0].K, n) if n else []
    for col in range(n):
        piv, piv_val = None, None
        for r in range(col, n):
            entry = work[r][col]
            if entry.known_nonzero():
                v = entry.valuation()
                if piv_val is None or v < piv_val:
                    piv, piv_val = r, v
        if piv is None:
            raise NotInvertible(f"no usable pivot in column {col}")
        work[col], work[piv] = work[piv], work[col]
        out[col], out[piv] = out[piv], out[col]
        pinv = work[col][col].inv(prec)
        work[col] = [x * pinv for x in work[col]]
        out[col] = [x * pinv for x in out[col]]
        for r in range(n):
            if r != col:
                f = work[r][col]
                if f.known_nonzero() or f.co:
                    work[r] = [x - f * y for x, y in zip(work[r], work[col])]
                    out[r] = [x - f * y for x, y in zip(out[r], out[col])]
    return out


def tau_power_matrix(A, k):
    """Matrix of tau^k when tau acts v -> A*sigma(v):
    A_k = A * sigma(A) * ... * sigma^{k-1}(A)."""
    if k < 0:
        raise InputError("negative tau powers need the inverse matrix")
    n, _ = dims(A)
    acc = identity(A[0][0].K, n)
    for i in range(k):
        acc = mul(acc, sigma(A, i))
    return acc
