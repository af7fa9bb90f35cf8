"""Square integer matrices as tuples of row tuples.

Column-vector convention throughout: column ``j`` is the image of basis
element ``j``, so a matrix acts on column vectors by ``M @ v``.
"""

from __future__ import annotations

from typing import Sequence

from .errors import InputError
from .qnumber import QuadraticNumber

IntMatrix = tuple  # tuple[tuple[int, ...], ...]


def as_matrix(rows, *, field: str | None = None) -> IntMatrix:
    """Validate and freeze a square integer matrix."""
    try:
        m = tuple(tuple(row) for row in rows)
    except TypeError:
        raise InputError("matrix must be a list of rows", field) from None
    n = len(m)
    if n == 0:
        raise InputError("empty matrix", field)
    for i, row in enumerate(m):
        if len(row) != n:
            raise InputError(f"row {i} has {len(row)} entries, expected {n} (matrix must be square)", field)
        for x in row:
            if not isinstance(x, int) or isinstance(x, bool):
                raise InputError(f"non-integer entry {x!r}", field)
    return m


def dim(m: IntMatrix) -> int:
    return len(m)


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(m: IntMatrix) -> IntMatrix:
    return tuple(zip(*m))


def mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    if len(a[0]) != len(b):
        raise ValueError(f"dimension mismatch: {len(a)}x{len(a[0])} times {len(b)}x{len(b[0])}")
    cols = tuple(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def product(*ms: IntMatrix, n: int | None = None) -> IntMatrix:
    """Ordered product ``ms[0] @ ms[1] @ ...``; identity of size ``n`` if empty."""
    if not ms:
        if n is None:
            raise ValueError("empty product needs a dimension")
        return identity(n)
    out = ms[0]
    for m in ms[1:]:
        out = mat_mul(out, m)
    return out


def power(m: IntMatrix, k: int) -> IntMatrix:
    if k < 0:
        raise ValueError("negative power")
    result, base = identity(len(m)), m
    while k:
        if k & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        k >>= 1
    return result


def det(m: IntMatrix) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    a = [list(row) for row in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def is_unimodular(m: IntMatrix) -> bool:
    return det(m) in (1, -1)


def is_nonnegative(m: IntMatrix) -> bool:
    return all(x >= 0 for row in m for x in row)


def is_positive(m: IntMatrix) -> bool:
    return all(x > 0 for row in m for x in row)


def is_permutation(m: IntMatrix) -> bool:
    n = len(m)
    if any(x not in (0, 1) for row in m for x in row):
        return False
    return all(sum(row) == 1 for row in m) and all(sum(m[i][j] for i in range(n)) == 1 for j in range(n))


def permutation_inverse(u: IntMatrix) -> IntMatrix:
    return transpose(u)


def _bool_mul(a, b):
    n = len(a)
    return tuple(tuple(any(a[i][k] and b[k][j] for k in range(n)) for j in range(n)) for i in range(n))


def is_primitive(m: IntMatrix) -> bool:
    """True iff some power of the non-negative matrix ``m`` is strictly positive.

    Decided at the Wielandt exponent ``(n-1)**2 + 1``: a primitive matrix is
    positive from that power on, and an imprimitive one never is.
    """
    if not is_nonnegative(m):
        raise InputError("is_primitive needs a non-negative matrix")
    n = len(m)
    pattern = tuple(tuple(x > 0 for x in row) for row in m)
    k = (n - 1) ** 2 + 1
    result, base = None, pattern
    while k:
        if k & 1:
            result = base if result is None else _bool_mul(result, base)
        base = _bool_mul(base, base)
        k >>= 1
    return all(all(row) for row in result)


def primitivity_exponent(m: IntMatrix) -> int | None:
    """Least ``k`` with ``m**k`` strictly positive, or ``None`` if imprimitive."""
    if not is_primitive(m):
        return None
    n = len(m)
    pattern = tuple(tuple(x > 0 for x in row) for row in m)
    cur, k = pattern, 1
    while not all(all(row) for row in cur):
        cur = _bool_mul(cur, pattern)
        k += 1
        assert k <= (n - 1) ** 2 + 1
    return k


def apply(m: IntMatrix, v: Sequence):
    """``m @ v`` for a vector of exact numbers (int, Fraction, QuadraticNumber)."""
    if len(v) != len(m[0]):
        raise ValueError("dimension mismatch")
    out = []
    for row in m:
        acc = 0
        for x, y in zip(row, v):
            if x:
                acc = acc + x * y
        out.append(acc)
    return tuple(out)


def column(m: IntMatrix, j: int) -> tuple:
    return tuple(row[j] for row in m)


def pf_eigen_2x2(m: IntMatrix) -> tuple[QuadraticNumber, tuple[QuadraticNumber, QuadraticNumber]]:
    """Perron-Frobenius eigenvalue and right eigenray of a primitive 2x2 matrix.

    The ray is normalized to second coordinate 1.
    """
    if len(m) != 2:
        raise InputError("pf_eigen_2x2 needs a 2x2 matrix")
    if not is_primitive(m):
        raise InputError(f"matrix {m} is not primitive: Perron-Frobenius ray is not unique")
    (a, b), (c, d) = m
    tr, dt = a + d, a * d - b * c
    disc = tr * tr - 4 * dt
    lam = QuadraticNumber(tr, 1, 2, disc)
    # primitive => b, c > 0, and lam - a > 0 since sqrt(disc) > |a - d|
    x = QuadraticNumber(b) / (lam - a)
    ray = (x, QuadraticNumber(1))
    assert apply(m, ray) == (lam * ray[0], lam * ray[1])
    assert lam > lam.conjugate() or lam.is_rational()
    return lam, ray
