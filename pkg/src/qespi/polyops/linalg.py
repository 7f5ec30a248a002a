"""Small exact linear algebra over Gaussian rationals."""

from __future__ import annotations

from .scalar import ONE, ZERO, CScalar


def _matmul(a, b):
    n, m, k = len(a), len(b), len(b[0]) if b else 0
    return [[sum((a[i][l] * b[l][j] for l in range(m)), ZERO) for j in range(k)] for i in range(n)]


def charpoly(mat) -> list[CScalar]:
    """Coefficients ``[c_0, ..., c_m]`` of ``det(lambda I - M)`` (monic, ascending).

    Faddeev-LeVerrier recursion; exact because every division is by an integer.
    """
    m = len(mat)
    mat = [[CScalar.coerce(x) for x in row] for row in mat]
    coeffs = [ZERO] * (m + 1)
    coeffs[m] = ONE
    mk = [[ZERO] * m for _ in range(m)]
    for k in range(1, m + 1):
        prod = _matmul(mat, mk)
        mk = [[prod[i][j] + (coeffs[m - k + 1] if i == j else ZERO) for j in range(m)] for i in range(m)]
        am = _matmul(mat, mk)
        tr = sum((am[i][i] for i in range(m)), ZERO)
        coeffs[m - k] = tr / (-k)
    return coeffs


def row_reduce(rows):
    """Reduced row echelon form; returns ``(rref, pivot_columns)``."""
    a = [[CScalar.coerce(x) for x in row] for row in rows]
    if not a:
        return a, []
    nr, nc = len(a), len(a[0])
    pivots = []
    r = 0
    for c in range(nc):
        pr = next((i for i in range(r, nr) if not a[i][c].is_zero()), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = a[r][c].inverse()
        a[r] = [x * inv for x in a[r]]
        for i in range(nr):
            if i != r and not a[i][c].is_zero():
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    return a, pivots


def solve(mat, rhs):
    """Solve ``mat @ x = rhs`` exactly; raise ``ArithmeticError`` if inconsistent or not unique."""
    aug = [list(row) + [b] for row, b in zip(mat, rhs)]
    nc = len(mat[0])
    red, piv = row_reduce(aug)
    if nc in piv:
        raise ArithmeticError("inconsistent linear system")
    if len(piv) != nc:
        raise ArithmeticError("linear system is underdetermined")
    x = [ZERO] * nc
    for r, c in enumerate(piv):
        x[c] = red[r][nc]
    return x


def nullspace(mat) -> list[list[CScalar]]:
    """Exact basis of the right kernel of ``mat``."""
    if not mat:
        return []
    nc = len(mat[0])
    red, piv = row_reduce(mat)
    free = [c for c in range(nc) if c not in piv]
    basis = []
    for fc in free:
        v = [ZERO] * nc
        v[fc] = ONE
        for r, pc in enumerate(piv):
            v[pc] = -red[r][fc]
        basis.append(v)
    return basis
