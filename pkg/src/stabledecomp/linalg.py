"""Exact normal forms and linear solving over the ring engines.

Euclidean-domain engines (``Z`` and ``F_p[x]``) get Smith and column Hermite
forms directly.  Residue engines ``Z/n`` are handled by lifting to ``Z``: a
system over ``Z/n`` in ``A`` is the integer system in ``[A | n*I]``.  The
Howell form of a ``Z/n`` matrix is the row Hermite form of the lattice
``rowspan(A) + n*Z^c`` reduced modulo ``n``, which is canonical because that
lattice is determined by the row span of ``A`` over ``Z/n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .matrix import Matrix
from .rings import Integers, IntegersMod, RingEngine

ZZ = Integers()


@dataclass(frozen=True)
class SmithDecomposition:
    U: Matrix
    S: Matrix
    V: Matrix
    invariant_factors: tuple

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


def _require_domain(engine: RingEngine, op: str) -> None:
    if not engine.is_domain:
        raise TypeError(f"{op} needs a Euclidean-domain engine, got {engine.name} (use howell_form)")


def _identity_lists(engine, n):
    z, o = engine.zero(), engine.one()
    return [[o if i == j else z for j in range(n)] for i in range(n)]


# Elementary operations on list-of-lists matrices.  Row ops act on ``rows``
# of every matrix given; column ops on columns.

def _row_axpy(e, mats, dst, src, q):
    """row[dst] -= q * row[src]"""
    for M in mats:
        rd, rs = M[dst], M[src]
        for k, x in enumerate(rs):
            if not e.is_zero(x):
                rd[k] = e.sub(rd[k], e.mul(q, x))


def _col_axpy(e, mats, dst, src, q):
    """col[dst] -= q * col[src]"""
    for M in mats:
        for r in M:
            x = r[src]
            if not e.is_zero(x):
                r[dst] = e.sub(r[dst], e.mul(q, x))


def _swap_rows(mats, i, j):
    if i != j:
        for M in mats:
            M[i], M[j] = M[j], M[i]


def _swap_cols(mats, i, j):
    if i != j:
        for M in mats:
            for r in M:
                r[i], r[j] = r[j], r[i]


def _scale_row(e, mats, i, u):
    for M in mats:
        M[i] = [e.mul(u, x) for x in M[i]]


def _scale_col(e, mats, j, u):
    for M in mats:
        for r in M:
            r[j] = e.mul(u, r[j])


def _combine_cols(e, mats, k, j, s, t, y, x):
    """(col_k, col_j) <- (s*col_k + t*col_j, -y*col_k + x*col_j)"""
    for M in mats:
        for r in M:
            a, b = r[k], r[j]
            r[k] = e.add(e.mul(s, a), e.mul(t, b))
            r[j] = e.sub(e.mul(x, b), e.mul(y, a))


def _min_entry(e, S, rows, cols):
    best = None
    for i in rows:
        for j in cols:
            x = S[i][j]
            if not e.is_zero(x):
                m = e.measure(x)
                if best is None or m < best[0]:
                    best = (m, i, j)
    return None if best is None else best[1:]


def smith_normal_form(A: Matrix) -> SmithDecomposition:
    """Return ``U, S, V`` with ``U @ A @ V == S`` diagonal in Smith form.

    Pivots are chosen by smallest Euclidean measure with row-then-column tie
    break. Invariant factors are positive over ``Z`` and monic over ``F_p[x]``.
    """
    e = A.engine
    _require_domain(e, "smith_normal_form")
    m, n = A.shape
    S = A.to_lists()
    U = _identity_lists(e, m)
    V = _identity_lists(e, n)
    rows_, cols_ = (S, U), (S, V)
    t = 0
    while t < min(m, n):
        piv = _min_entry(e, S, range(t, m), range(t, n))
        if piv is None:
            break
        _swap_rows(rows_, t, piv[0])
        _swap_cols(cols_, t, piv[1])
        while True:
            clean = True
            p = S[t][t]
            for i in range(t + 1, m):
                if not e.is_zero(S[i][t]):
                    q, r = e.divmod(S[i][t], p)
                    _row_axpy(e, rows_, i, t, q)
                    clean &= e.is_zero(r)
            for j in range(t + 1, n):
                if not e.is_zero(S[t][j]):
                    q, r = e.divmod(S[t][j], p)
                    _col_axpy(e, cols_, j, t, q)
                    clean &= e.is_zero(r)
            if not clean:
                # a remainder is now smaller than the pivot: promote it
                cand = _min_entry(e, S, range(t + 1, m), [t])
                cand2 = _min_entry(e, S, [t], range(t + 1, n))
                choices = [c for c in (cand, cand2) if c is not None]
                i, j = min(choices, key=lambda c: (e.measure(S[c[0]][c[1]]), c))
                _swap_rows(rows_, t, i)
                _swap_cols(cols_, t, j)
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if e.exact_div(S[i][j], p) is None:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            _row_axpy(e, rows_, t, bad, e.neg(e.one()))
        _, u = e.canonical_associate(S[t][t])
        _scale_row(e, rows_, t, u)
        t += 1
    factors = tuple(S[i][i] for i in range(min(m, n)) if not e.is_zero(S[i][i]))
    return SmithDecomposition(
        U=Matrix(e, m, m, U), S=Matrix(e, m, n, S), V=Matrix(e, n, n, V), invariant_factors=factors
    )


def _hermite_lists(e, H, V):
    """In-place column Hermite reduction; returns pivot positions ``[(row, col)]``."""
    m = len(H)
    n = len(H[0]) if H else len(V)
    mats = (H, V)
    k = 0
    pivots = []
    for i in range(m):
        if k == n:
            break
        for j in range(k + 1, n):
            b = H[i][j]
            if e.is_zero(b):
                continue
            a = H[i][k]
            if e.is_zero(a):
                _swap_cols(mats, k, j)
                continue
            g, s, t = e.gcdex(a, b)
            _combine_cols(e, mats, k, j, s, t, e.exact_div(b, g), e.exact_div(a, g))
        if e.is_zero(H[i][k]):
            continue
        _, u = e.canonical_associate(H[i][k])
        _scale_col(e, mats, k, u)
        piv = H[i][k]
        for l in range(k):
            if not e.is_zero(H[i][l]):
                q, _ = e.divmod(H[i][l], piv)
                _col_axpy(e, mats, l, k, q)
        pivots.append((i, k))
        k += 1
    return pivots


def hermite_column_reduce(A: Matrix) -> tuple[Matrix, Matrix]:
    """Column Hermite form: ``A @ V == H`` with ``V`` unimodular.

    Nonzero columns of ``H`` come first, in echelon form with canonical
    pivots and entries left of each pivot reduced modulo it; the remaining
    columns are zero.
    """
    e = A.engine
    _require_domain(e, "hermite_column_reduce")
    H = A.to_lists()
    V = _identity_lists(e, A.cols)
    _hermite_lists(e, H, V)
    return Matrix(e, A.rows, A.cols, H), Matrix(e, A.cols, A.cols, V)


def rank(A: Matrix) -> int:
    e = A.engine
    _require_domain(e, "rank")
    H = A.to_lists()
    return len(_hermite_lists(e, H, _identity_lists(e, A.cols)))


def kernel_basis(A: Matrix) -> Matrix:
    """Columns form a free basis of ``{x : A x = 0}`` (domain engines)."""
    e = A.engine
    _require_domain(e, "kernel_basis")
    H = A.to_lists()
    V = _identity_lists(e, A.cols)
    r = len(_hermite_lists(e, H, V))
    return Matrix(e, A.cols, A.cols, V).select_columns(range(r, A.cols))


def _lift_with_modulus(A: Matrix) -> Matrix:
    """Integer matrix ``[A | n I]`` for ``A`` over ``Z/n``."""
    n = A.engine.n
    return A.lift(ZZ).hstack(Matrix.diagonal(ZZ, [n] * A.rows))


def howell_form(A: Matrix) -> Matrix:
    """Canonical generators of the row span of ``A`` over ``Z/n``.

    Two matrices with the same number of columns have equal row spans iff
    their Howell forms are equal.
    """
    e = A.engine
    if not isinstance(e, IntegersMod):
        raise TypeError(f"howell_form needs an IntegersMod engine, got {e.name}")
    n, c = e.n, A.cols
    # column lattice of [A^T | n I_c] is the row lattice of [A; n I]
    H, _ = hermite_column_reduce(A.T.lift(ZZ).hstack(Matrix.diagonal(ZZ, [n] * c)))
    rows = []
    for j in range(c):
        r = [x % n for x in H.column(j)]
        if any(r):
            rows.append(r)
    return Matrix(e, len(rows), c, rows)


def syzygy_generators(A: Matrix) -> Matrix:
    """Columns generate ``{x : A x = 0}`` as a module (any engine).

    Over domains this is :func:`kernel_basis`; over ``Z/n`` the generators are
    the Howell form of the lifted integer kernel.
    """
    e = A.engine
    if e.is_domain:
        return kernel_basis(A)
    K = kernel_basis(_lift_with_modulus(A))
    top = Matrix(ZZ, A.cols, K.cols, [K.row(i) for i in range(A.cols)]).lift(e)
    if top.cols == 0:
        return Matrix.zeros(e, A.cols, 0)
    return howell_form(top.T).T


class _Solver:
    """Column Hermite data for repeated membership queries against ``A``."""

    def __init__(self, A: Matrix):
        self.A = A
        e = A.engine
        if e.is_domain:
            self.B = A
        else:
            self.B = _lift_with_modulus(A)
        be = self.B.engine
        H = self.B.to_lists()
        V = _identity_lists(be, self.B.cols)
        self.pivots = _hermite_lists(be, H, V)
        self.H, self.V = H, V

    def solve(self, b: Sequence) -> Optional[tuple]:
        A = self.A
        if len(b) != A.rows:
            raise ValueError(f"right-hand side has length {len(b)}, expected {A.rows}")
        e = A.engine
        be = self.B.engine
        res = [be.from_int(x) for x in b] if not e.is_domain else list(b)
        y = []
        H = self.H
        done_rows = 0
        for (i, k) in self.pivots:
            for r in range(done_rows, i):
                if not be.is_zero(res[r]):
                    return None
            q = be.exact_div(res[i], H[i][k])
            if q is None:
                return None
            y.append(q)
            if not be.is_zero(q):
                for r in range(i, len(res)):
                    if not be.is_zero(H[r][k]):
                        res[r] = be.sub(res[r], be.mul(q, H[r][k]))
            done_rows = i + 1
        if any(not be.is_zero(x) for x in res):
            return None
        x = []
        for row in self.V[: A.cols]:
            acc = be.zero()
            for coef, v in zip(y, row):
                if not be.is_zero(coef) and not be.is_zero(v):
                    acc = be.add(acc, be.mul(v, coef))
            x.append(acc)
        if not e.is_domain:
            x = [e.from_int(v) for v in x]
        return tuple(x)


def solve_membership(A: Matrix, b: Sequence) -> Optional[tuple]:
    """Return ``x`` with ``A x == b``, or ``None`` when ``b`` is not in the column span."""
    return _Solver(A).solve(b)


def solve_many(A: Matrix, B: Matrix) -> Optional[Matrix]:
    """Solve ``A X == B`` column by column; ``None`` if any column is unreachable."""
    if B.rows != A.rows:
        raise ValueError("dimension mismatch")
    solver = _Solver(A)
    cols = []
    for col in B.columns():
        x = solver.solve(col)
        if x is None:
            return None
        cols.append(x)
    return Matrix.from_columns(A.engine, cols, A.cols)


def unimodular_inverse(U: Matrix) -> Matrix:
    inv = solve_many(U, Matrix.identity(U.engine, U.rows))
    if inv is None:
        raise ValueError("matrix is not invertible over its engine")
    return inv
