"""Pure-Python integer-lattice kernels.

The same operations exist as a compiled extension (``_core``); this module is
the reference implementation and the fallback when the extension is absent or
when its fixed-width integers would overflow.  All functions work on plain
lists of Python ints and never mutate their arguments.
"""

__all__ = [
    "xgcd",
    "hnf_rows",
    "reduce_vector",
    "smith_invariants",
    "solve_in_rowspan",
]


def xgcd(a, b):
    # Returns (x, y, g) with x*a + y*b == g == gcd(a, b), g >= 0 when a,b not both 0.
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


def _eliminate(work, trans=None):
    # Row-echelon pass over the integers: for each column (left to right)
    # combine the remaining rows into a single pivot row via gcd steps.
    # Returns (rows, pivot_cols); rows appear in pivot-column order.
    # `trans`, when given, is a parallel list of rows that receives the same
    # row operations (used to track coefficients for solving).
    if not work:
        return [], []
    ncols = len(work[0])
    out_rows, out_cols = [], []
    out_trans = [] if trans is not None else None
    for col in range(ncols):
        if not work:
            break
        idx = [i for i, r in enumerate(work) if r[col]]
        if not idx:
            continue
        base = idx[0]
        rb = work[base]
        tb = trans[base] if trans is not None else None
        for i in idx[1:]:
            ri = work[i]
            ti = trans[i] if trans is not None else None
            a, b = rb[col], ri[col]
            if b % a == 0:
                q = b // a
                for c in range(col, ncols):
                    ri[c] -= q * rb[c]
                if ti is not None:
                    for c in range(len(ti)):
                        ti[c] -= q * tb[c]
            else:
                x, y, g = xgcd(a, b)
                ag, bg = a // g, b // g
                for c in range(col, ncols):
                    va, vb = rb[c], ri[c]
                    rb[c] = x * va + y * vb
                    ri[c] = ag * vb - bg * va
                if ti is not None:
                    for c in range(len(ti)):
                        va, vb = tb[c], ti[c]
                        tb[c] = x * va + y * vb
                        ti[c] = ag * vb - bg * va
        if rb[col] < 0:
            for c in range(col, ncols):
                rb[c] = -rb[c]
            if tb is not None:
                for c in range(len(tb)):
                    tb[c] = -tb[c]
        out_rows.append(rb)
        out_cols.append(col)
        if out_trans is not None:
            out_trans.append(tb)
        del work[base]
        if trans is not None:
            del trans[base]
    if trans is not None:
        trans[:] = out_trans
    return out_rows, out_cols


def hnf_rows(rows):
    """Row-style Hermite normal form of the lattice spanned by `rows`.

    Returns (rows, pivot_cols) with positive pivots, entries above each pivot
    reduced into [0, pivot), rows ordered by pivot column.  The result depends
    only on the spanned lattice, which makes coset representatives canonical.
    """
    work = [list(r) for r in rows if any(r)]
    out_rows, out_cols = _eliminate(work)
    ncols = len(out_rows[0]) if out_rows else 0
    for j in range(len(out_rows)):
        pj = out_rows[j]
        cj = out_cols[j]
        p = pj[cj]
        for i in range(j):
            q = out_rows[i][cj] // p
            if q:
                ri = out_rows[i]
                for c in range(cj, ncols):
                    ri[c] -= q * pj[c]
    return out_rows, out_cols


def reduce_vector(vec, rows, pivot_cols):
    """Canonical representative of `vec` modulo the HNF lattice (rows, pivot_cols)."""
    v = list(vec)
    n = len(v)
    for row, c in zip(rows, pivot_cols):
        q = v[c] // row[c]
        if q:
            for i in range(c, n):
                v[i] -= q * row[i]
    return v


def smith_invariants(rows):
    """Invariant factors (diagonal of the Smith normal form) of the row matrix.

    Returned in divisibility order, one entry per nonzero diagonal element.
    """
    m = [list(r) for r in rows if any(r)]
    if not m:
        return []
    nr, nc = len(m), len(m[0])
    inv = []
    t = 0
    while t < nr and t < nc:
        piv = None
        for i in range(t, nr):
            for j in range(t, nc):
                if m[i][j]:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            break
        i0, j0 = piv
        m[t], m[i0] = m[i0], m[t]
        for row in m:
            row[t], row[j0] = row[j0], row[t]
        while True:
            for i in range(t + 1, nr):
                if m[i][t]:
                    a, b = m[t][t], m[i][t]
                    if b % a:
                        x, y, g = xgcd(a, b)
                        ag, bg = a // g, b // g
                        for c in range(t, nc):
                            va, vb = m[t][c], m[i][c]
                            m[t][c] = x * va + y * vb
                            m[i][c] = ag * vb - bg * va
                    else:
                        q = b // a
                        for c in range(t, nc):
                            m[i][c] -= q * m[t][c]
            for j in range(t + 1, nc):
                if m[t][j]:
                    a, b = m[t][t], m[t][j]
                    if b % a:
                        x, y, g = xgcd(a, b)
                        ag, bg = a // g, b // g
                        for r in range(t, nr):
                            va, vb = m[r][t], m[r][j]
                            m[r][t] = x * va + y * vb
                            m[r][j] = ag * vb - bg * va
                    else:
                        q = b // a
                        for r in range(t, nr):
                            m[r][j] -= q * m[r][t]
            if any(m[i][t] for i in range(t + 1, nr)) or any(
                m[t][j] for j in range(t + 1, nc)
            ):
                continue
            bad = None
            for i in range(t + 1, nr):
                for j in range(t + 1, nc):
                    if m[i][j] % m[t][t]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            for c in range(t, nc):
                m[t][c] += m[bad][c]
        inv.append(abs(m[t][t]))
        t += 1
    return inv


def solve_in_rowspan(rows, target):
    """Integer coefficients z with sum(z[i]*rows[i]) == target, or None.

    The particular solution is deterministic (canonical HNF reduction).
    """
    rows = [list(r) for r in rows]
    if not rows:
        return [] if not any(target) else None
    work = []
    trans = []
    nrows = len(rows)
    for i, r in enumerate(rows):
        if any(r):
            work.append(list(r))
            trans.append([1 if j == i else 0 for j in range(nrows)])
    ech_rows, ech_cols = _eliminate(work, trans)
    t = list(target)
    n = len(t)
    coeffs = [0] * nrows
    for row, trow, c in zip(ech_rows, trans, ech_cols):
        q = t[c] // row[c]
        if q:
            for i in range(c, n):
                t[i] -= q * row[i]
            for i in range(nrows):
                coeffs[i] += q * trow[i]
    if any(t):
        return None
    return coeffs
