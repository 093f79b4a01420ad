"""Exact linear algebra over the rationals.

Matrices are lists of rows of Fractions.  Only what the package needs:
reduced row echelon form, null spaces and solving consistent systems.
"""

from fractions import Fraction


def rref(rows, ncols=None, column_order=None):
    """Reduced row echelon form.

    ``column_order`` lists the column indices in the order in which pivots are
    searched; by default columns are scanned left to right.  Returns the
    nonzero reduced rows and the list of pivot columns (in pivot order).
    """
    m = [[Fraction(x) for x in r] for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    order = list(range(ncols)) if column_order is None else list(column_order)
    pivots = []
    r = 0
    for c in order:
        if r == len(m):
            break
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        pr = m[r]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], pr)]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(rows):
    return len(rref(rows)[1]) if rows else 0


def nullspace(rows, ncols):
    """Basis of {x : A x = 0}, one vector per free column, in RREF-dual form."""
    red, pivots = rref(rows, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def solve(rows, rhs):
    """One solution of A x = b (free variables set to zero), or None."""
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, ncols + 1, column_order=range(ncols + 1))
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(red, pivots):
        x[p] = row[ncols]
    return x


def mat_vec(rows, v):
    return [sum((a * b for a, b in zip(r, v)), Fraction(0)) for r in rows]
