# cython: language_level=3
# cython: boundscheck=False
# cython: wraparound=False
"""Compiled integer-lattice kernels.

Same contracts as ``_core_py``; coefficients are 64-bit with a conservative
magnitude guard.  Any value leaving the safe range raises OverflowError and
the caller falls back to the arbitrary-precision implementation.
"""

from cpython cimport array
import array

# Stored entries and multipliers stay below LIMIT, so every product fits
# comfortably in 64 bits and a sum of two products cannot wrap.
cdef long long LIMIT = 1LL << 30


cdef inline long long _guard(long long v) except? -9223372036854775807:
    if v > LIMIT or v < -LIMIT:
        raise OverflowError("kernel value out of safe range")
    return v


cdef inline long long _floordiv(long long a, long long b):
    cdef long long q = a / b
    if (a % b != 0) and ((a < 0) != (b < 0)):
        q -= 1
    return q


cdef void _xgcd(long long a, long long b, long long *px, long long *py, long long *pg):
    cdef long long x = 1, nx = 0, y = 0, ny = 1, g = a, ng = b, q, t
    while ng:
        q = _floordiv(g, ng)
        t = nx; nx = x - q * nx; x = t
        t = ny; ny = y - q * ny; y = t
        t = ng; ng = g - q * ng; g = t
    if g < 0:
        x = -x; y = -y; g = -g
    px[0] = x; py[0] = y; pg[0] = g


cdef class _Mat:
    cdef array.array data
    cdef long long[::1] buf
    cdef Py_ssize_t nrows, ncols

    def __cinit__(self, rows):
        cdef Py_ssize_t i, j
        self.nrows = len(rows)
        self.ncols = len(rows[0]) if self.nrows else 0
        flat = []
        for r in rows:
            flat.extend(r)
        # array('q', ...) raises OverflowError for entries beyond 64 bits
        self.data = array.array("q", flat)
        if self.nrows:
            self.buf = self.data
            for i in range(self.nrows * self.ncols):
                _guard(self.buf[i])

    cdef inline long long get(self, Py_ssize_t i, Py_ssize_t j):
        return self.buf[i * self.ncols + j]

    cdef inline void set(self, Py_ssize_t i, Py_ssize_t j, long long v):
        self.buf[i * self.ncols + j] = v

    cdef list row(self, Py_ssize_t i):
        cdef Py_ssize_t j
        return [self.buf[i * self.ncols + j] for j in range(self.ncols)]


def hnf_rows(rows):
    """Row-style Hermite normal form; see _core_py.hnf_rows."""
    live = [list(r) for r in rows if any(r)]
    if not live:
        return [], []
    cdef _Mat m = _Mat(live)
    cdef Py_ssize_t ncols = m.ncols
    cdef Py_ssize_t col, i, c, base, n_out = 0
    cdef long long a, b, q, x, y, g, ag, bg, va, vb
    # order[:n_out] are finished pivot rows, order[n_out:] still active
    cdef list order = list(range(m.nrows))
    cdef list out_cols = []
    for col in range(ncols):
        if n_out == m.nrows:
            break
        idx = [i for i in order[n_out:] if m.get(i, col) != 0]
        if not idx:
            continue
        base = idx[0]
        for i in idx[1:]:
            a = m.get(base, col)
            b = m.get(i, col)
            if b % a == 0:
                q = _floordiv(b, a)
                for c in range(col, ncols):
                    m.set(i, c, _guard(m.get(i, c) - q * m.get(base, c)))
            else:
                _xgcd(a, b, &x, &y, &g)
                _guard(x); _guard(y)
                ag = _floordiv(a, g)
                bg = _floordiv(b, g)
                _guard(ag); _guard(bg)
                for c in range(col, ncols):
                    va = m.get(base, c)
                    vb = m.get(i, c)
                    m.set(base, c, _guard(x * va + y * vb))
                    m.set(i, c, _guard(ag * vb - bg * va))
        if m.get(base, col) < 0:
            for c in range(col, ncols):
                m.set(base, c, -m.get(base, c))
        order.remove(base)
        order.insert(n_out, base)
        n_out += 1
        out_cols.append(col)
    # reduce entries above each pivot into [0, pivot)
    cdef Py_ssize_t j, cj
    cdef long long p
    for j in range(n_out):
        cj = out_cols[j]
        p = m.get(order[j], cj)
        for i in range(j):
            q = _floordiv(m.get(order[i], cj), p)
            if q:
                _guard(q)
                for c in range(cj, ncols):
                    m.set(order[i], c, _guard(m.get(order[i], c) - q * m.get(order[j], c)))
    return [m.row(order[j]) for j in range(n_out)], out_cols


def reduce_vector(vec, rows, pivot_cols):
    """Canonical representative of vec modulo the HNF lattice; see _core_py."""
    if not rows:
        return list(vec)
    cdef _Mat m = _Mat(rows)
    cdef array.array va = array.array("q", vec)
    cdef long long[::1] v = va
    cdef Py_ssize_t n = len(vec)
    cdef Py_ssize_t j, c, i
    cdef long long q
    for i in range(n):
        _guard(v[i])
    for j in range(m.nrows):
        c = pivot_cols[j]
        q = _floordiv(v[c], m.get(j, c))
        if q:
            _guard(q)
            for i in range(c, n):
                v[i] = _guard(v[i] - q * m.get(j, i))
    return list(va)
