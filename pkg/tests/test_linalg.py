import itertools
import random
from math import gcd

import pytest

from stabledecomp.linalg import (
    hermite_column_reduce,
    howell_form,
    kernel_basis,
    rank,
    smith_normal_form,
    solve_many,
    solve_membership,
    syzygy_generators,
)
from stabledecomp.matrix import Matrix
from stabledecomp.rings import Integers, IntegersMod, PolynomialsOverPrimeField

from oracles import determinantal_invariants, kernel_mod, rank_polynomial, rank_rational, span_mod

ZZ = Integers()
F5 = PolynomialsOverPrimeField(5)


def M(rows, engine=ZZ, cols=None):
    return Matrix.from_ints(engine, rows, cols)


def random_matrix(engine, rng, max_dim=6, bound=9):
    m, n = rng.randint(0, max_dim), rng.randint(0, max_dim)
    density = rng.choice((0.3, 0.7, 1.0))
    rows = [[engine.random_element(rng, bound) if rng.random() < density else engine.zero()
             for _ in range(n)] for _ in range(m)]
    return Matrix(engine, m, n, rows)


def det_is_unit(engine, U):
    # U unimodular iff it has an inverse over the engine
    return solve_many(U, Matrix.identity(engine, U.rows)) is not None


# -- Smith form --------------------------------------------------------------


def test_smith_examples():
    assert smith_normal_form(M([[2, 4], [6, 8]])).invariant_factors == (2, 4)
    assert determinantal_invariants([[2, 4], [6, 8]]) == (2, 4)
    assert smith_normal_form(Matrix.identity(ZZ, 3)).invariant_factors == (1, 1, 1)
    assert smith_normal_form(Matrix.zeros(ZZ, 2, 3)).invariant_factors == ()


def test_smith_rejects_residue_engine():
    with pytest.raises(TypeError):
        smith_normal_form(M([[2]], IntegersMod(4)))


@pytest.mark.parametrize("engine", [ZZ, F5], ids=["Z", "F5[x]"])
def test_smith_random(engine):
    rng = random.Random(11)
    for _ in range(500):
        A = random_matrix(engine, rng)
        D = smith_normal_form(A)
        assert D.U @ A @ D.V == D.S
        assert det_is_unit(engine, D.U) and det_is_unit(engine, D.V)
        f = D.invariant_factors
        for a, b in zip(f, f[1:]):
            assert engine.exact_div(b, a) is not None
        for d in f:
            assert engine.canonical_associate(d)[0] == d
        for i in range(D.S.rows):
            for j in range(D.S.cols):
                if i != j:
                    assert engine.is_zero(D.S[i, j])
        if engine == ZZ:
            assert D.rank == rank_rational(A.to_lists())
        else:
            assert D.rank == rank_polynomial(A.to_lists(), 5)


def test_smith_matches_determinantal_divisors():
    rng = random.Random(5)
    for _ in range(150):
        A = random_matrix(ZZ, rng, max_dim=4)
        if A.rows and A.cols:
            assert smith_normal_form(A).invariant_factors == determinantal_invariants(A.to_lists())


def test_empty_matrices():
    for shape in [(0, 0), (0, 3), (3, 0)]:
        A = Matrix.zeros(ZZ, *shape)
        D = smith_normal_form(A)
        assert D.invariant_factors == ()
        H, V = hermite_column_reduce(A)
        assert H.shape == shape and V.shape == (shape[1], shape[1])
    assert kernel_basis(Matrix.zeros(ZZ, 0, 2)) == Matrix.identity(ZZ, 2)


# -- Hermite form and kernels -------------------------------------------------


def test_hermite_examples():
    H, V = hermite_column_reduce(M([[2, 4]]))
    assert H == M([[2, 0]])
    assert H.nonzero_columns() == M([[2]])
    assert M([[2, 4]]) @ V == H
    H, _ = hermite_column_reduce(Matrix.zeros(ZZ, 2, 2))
    assert H.nonzero_columns().cols == 0
    H, V = hermite_column_reduce(Matrix.identity(ZZ, 2))
    assert H == Matrix.identity(ZZ, 2) and V == Matrix.identity(ZZ, 2)


def test_hermite_random_columns_independent():
    rng = random.Random(2)
    for engine in (ZZ, F5):
        for _ in range(150):
            A = random_matrix(engine, rng)
            H, V = hermite_column_reduce(A)
            assert A @ V == H
            Hn = H.nonzero_columns()
            assert rank(Hn) == Hn.cols == rank(A)
            # zero columns are trailing
            assert H.select_columns(range(Hn.cols)) == Hn


def test_kernel_examples():
    K = kernel_basis(M([[2, -4]]))
    assert K == M([[2], [1]])
    # minimality: every small kernel vector is an integer multiple of (2, 1)
    for x, y in itertools.product(range(-6, 7), repeat=2):
        if 2 * x - 4 * y == 0:
            assert x == 2 * y
    assert kernel_basis(Matrix.identity(ZZ, 3)).cols == 0
    assert kernel_basis(Matrix.zeros(ZZ, 1, 1)) == M([[1]])


def test_kernel_random_is_primitive():
    rng = random.Random(8)
    for engine in (ZZ, F5):
        for _ in range(200):
            A = random_matrix(engine, rng)
            K = kernel_basis(A)
            assert (A @ K).is_zero()
            assert K.cols == A.cols - rank(A)
            assert all(d == engine.one() for d in smith_normal_form(K).invariant_factors)
            assert smith_normal_form(K).rank == K.cols


# -- Z/n ----------------------------------------------------------------------


def test_syzygy_examples():
    assert syzygy_generators(M([[2]], IntegersMod(4))) == M([[2]], IntegersMod(4))
    assert syzygy_generators(M([[1]], IntegersMod(6))).cols == 0
    assert syzygy_generators(M([[3]], IntegersMod(6))) == M([[2]], IntegersMod(6))
    assert kernel_mod([[3]], 6, 1) == span_mod([(2,)], 6, 1)


def _span_of_columns(G, n):
    return span_mod([tuple(c) for c in G.columns()], n, G.rows)


@pytest.mark.parametrize("n", range(2, 13))
def test_syzygies_match_enumerated_kernel(n):
    e = IntegersMod(n)
    rng = random.Random(n)
    # all 1x1 and 1x2 matrices, then random shapes up to 3x3
    shapes = [[[a]] for a in range(n)] + [[[a, b]] for a in range(n) for b in range(n)]
    for _ in range(40):
        r, c = rng.randint(1, 3), rng.randint(1, 3)
        shapes.append([[rng.randrange(n) for _ in range(c)] for _ in range(r)])
    for rows in shapes:
        A = M(rows, e)
        G = syzygy_generators(A)
        assert (A @ G).is_zero()
        assert _span_of_columns(G, n) == kernel_mod(rows, n, A.cols)


def test_howell_examples():
    Z4, Z6 = IntegersMod(4), IntegersMod(6)
    assert howell_form(M([[2]], Z4)) == M([[2]], Z4)
    assert howell_form(M([[3]], Z6)) == M([[3]], Z6)
    a, b = M([[2, 0], [0, 0]], Z4), M([[2, 0], [2, 0]], Z4)
    assert span_mod(a.to_lists(), 4, 2) == span_mod(b.to_lists(), 4, 2)
    assert howell_form(a) == howell_form(b)
    with pytest.raises(TypeError):
        howell_form(M([[2]]))


def _random_unimodular_mod(n, k, rng):
    e = IntegersMod(n)
    T = Matrix.identity(e, k).to_lists()
    for _ in range(3 * k):
        i, j = rng.sample(range(k), 2) if k > 1 else (0, 0)
        if i != j:
            q = rng.randrange(n)
            T[i] = [(x + q * y) % n for x, y in zip(T[i], T[j])]
        u = rng.choice([v for v in range(1, n) if gcd(v, n) == 1])
        T[i] = [(u * x) % n for x in T[i]]
    return Matrix(e, k, k, T)


@pytest.mark.parametrize("n", [4, 6, 8, 9, 12, 30])
def test_howell_canonical_under_row_operations(n):
    e = IntegersMod(n)
    rng = random.Random(100 + n)
    for _ in range(60):
        r, c = rng.randint(1, 4), rng.randint(1, 3)
        A = Matrix(e, r, c, [[rng.randrange(n) for _ in range(c)] for _ in range(r)])
        T = _random_unimodular_mod(n, r, rng)
        H = howell_form(A)
        assert howell_form(T @ A) == H
        assert span_mod(H.to_lists(), n, c) == span_mod(A.to_lists(), n, c)


def test_howell_equal_iff_spans_equal():
    n = 6
    e = IntegersMod(n)
    rows = list(itertools.product(range(n), repeat=2))
    rng = random.Random(9)
    mats = [[list(rng.choice(rows)) for _ in range(rng.randint(1, 2))] for _ in range(120)]
    forms = [howell_form(M(r, e)) for r in mats]
    spans = [span_mod(r, n, 2) for r in mats]
    for i in range(len(mats)):
        for j in range(i):
            assert (forms[i] == forms[j]) == (spans[i] == spans[j])


# -- solving --------------------------------------------------------------------


def test_solve_examples():
    assert solve_membership(M([[2]]), [6]) == (3,)
    assert solve_membership(M([[2]]), [3]) is None
    assert solve_membership(M([[2]], IntegersMod(5)), [3]) == (4,)
    with pytest.raises(ValueError):
        solve_membership(M([[2]]), [1, 2])


def test_solve_random_consistent():
    rng = random.Random(4)
    for engine in (ZZ, F5, IntegersMod(12)):
        for _ in range(150):
            A = random_matrix(engine, rng, max_dim=4)
            x = [engine.random_element(rng, 5) for _ in range(A.cols)]
            b = A.apply(x)
            y = solve_membership(A, b)
            assert y is not None and A.apply(y) == b
