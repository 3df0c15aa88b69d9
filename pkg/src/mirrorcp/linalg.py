"""Exact dense linear algebra over Q for the small systems in this package.

Everything here is plain fraction-pivot Gauss elimination. System sizes are
tiny (tens of unknowns), and exactness matters far more than asymptotics, so
no external solver buys anything.
"""

from ._coeff import ONE, Q, ZERO


class SingularMatrixError(ValueError):
    """Matrix not invertible / system not uniquely solvable."""


class InconsistentSystemError(ValueError):
    """Equations contradict each other (no exact solution)."""


def invert_matrix(rows):
    """Exact inverse of a square rational matrix (Gauss-Jordan)."""
    m = len(rows)
    for row in rows:
        if len(row) != m:
            raise ValueError("matrix is not square")
    a = [[Q(x) for x in row] for row in rows]
    inv = [[ONE if i == j else ZERO for j in range(m)] for i in range(m)]
    for col in range(m):
        pivot = None
        for r in range(col, m):
            if a[r][col]:
                pivot = r
                break
        if pivot is None:
            raise SingularMatrixError("singular at column %d" % col)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            inv[col], inv[pivot] = inv[pivot], inv[col]
        p = a[col][col]
        if p != ONE:
            a[col] = [x / p for x in a[col]]
            inv[col] = [x / p for x in inv[col]]
        for r in range(m):
            if r == col:
                continue
            f = a[r][col]
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
                inv[r] = [x - f * y for x, y in zip(inv[r], inv[col])]
    return inv


def mat_vec(mat, vec):
    out = []
    for row in mat:
        s = ZERO
        for c, v in zip(row, vec):
            if c and v:
                s += c * v
        out.append(s)
    return out


def rank_profile(rows):
    """Rank and pivot columns of a rational matrix (copy, then eliminate)."""
    a = [[Q(x) for x in row] for row in rows]
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    pivots = []
    r = 0
    for col in range(ncols):
        pivot = None
        for i in range(r, nrows):
            if a[i][col]:
                pivot = i
                break
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        p = a[r][col]
        a[r] = [x / p for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    return r, pivots


def solve_unique(rows, rhs):
    """Solve a (possibly overdetermined) exact system with a unique solution.

    Raises InconsistentSystemError if the equations contradict each other and
    SingularMatrixError if they do not pin every unknown.
    """
    if len(rows) != len(rhs):
        raise ValueError("rows/rhs length mismatch")
    if not rows:
        return []
    ncols = len(rows[0])
    a = [[Q(x) for x in row] + [Q(b)] for row, b in zip(rows, rhs)]
    nrows = len(a)
    r = 0
    pivots = []
    for col in range(ncols):
        pivot = None
        for i in range(r, nrows):
            if a[i][col]:
                pivot = i
                break
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        p = a[r][col]
        a[r] = [x / p for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if a[i][ncols]:
            raise InconsistentSystemError("0 = %s" % a[i][ncols])
    if len(pivots) != ncols:
        missing = [c for c in range(ncols) if c not in pivots]
        raise SingularMatrixError("unknowns not determined: columns %s" % missing)
    x = [ZERO] * ncols
    for i, col in enumerate(pivots):
        x[col] = a[i][ncols]
    return x
