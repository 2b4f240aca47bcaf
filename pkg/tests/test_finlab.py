import itertools

import numpy as np
import pytest

from stabledecomp.finlab.modules import (
    FiniteModule,
    direct_sum,
    free_module,
    mask_of,
    members,
    module_from_int_relations,
    regular_module,
)
from stabledecomp.finlab.oracle import (
    decompose_bruteforce,
    endomorphisms,
    enumerate_modules,
    enumerate_submodules,
    hdim_bruteforce,
    is_baer,
    is_isomorphic,
    is_projective_bruteforce,
    is_rickart,
    is_stable_bruteforce,
    jacobson_radical,
    socle_and_radical,
    submodule_predicates,
    udim_bruteforce,
)
from stabledecomp.finlab.rings import (
    CAPS,
    AxiomError,
    CapExceeded,
    FiniteRing,
    build_ring,
    idealization,
    integers_mod,
    parse_ring_spec,
    poly_quotient,
    power,
    product,
    quotient_ring,
    triangular,
)
from stabledecomp.fpmod import Finite

Z2, Z4, Z6 = integers_mod(2), integers_mod(4), integers_mod(6)
DUAL_NUMBERS = poly_quotient(2, [0, 0, 1])  # F2[x]/(x^2)


def as_set(mask):
    return set(members(mask).tolist())


# -- rings ------------------------------------------------------------------------


def test_build_ring_examples():
    assert Z4.size == 4 and Z4.commutative
    assert build_ring(("zmod", 4)).size == 4
    assert parse_ring_spec("z4").size == 4
    for k in range(1, 5):
        A = idealization(power(Z2, k))
        assert A.size == 2 ** (k + 1) and A.commutative


def test_small_idealization_is_dual_numbers():
    A = idealization(Z2)
    assert DUAL_NUMBERS.labels == ["0", "1", "x", "1+x"]
    # (r, s) -> r + s x, which is index r + 2s in the quotient ring
    to_d = {i: r + 2 * s for i, (r, s) in enumerate(A.elements)}
    for a, b in itertools.product(range(4), repeat=2):
        assert to_d[A.mul[a, b]] == DUAL_NUMBERS.mul[to_d[a], to_d[b]]
        assert to_d[A.add[a, b]] == DUAL_NUMBERS.add[to_d[a], to_d[b]]


def test_idealization_follows_product_rule():
    R = power(Z2, 2)
    A = idealization(R)
    S, proj = quotient_ring(R, A.ideal_T)
    index = {x: i for i, x in enumerate(A.elements)}
    for (r, s), (r2, s2) in itertools.product(A.elements, repeat=2):
        got = A.elements[A.mul[index[(r, s)], index[(r2, s2)]]]
        assert got[0] == R.mul[r, r2]
        assert got[1] == S.add[S.mul[proj[r], s2], S.mul[s, proj[r2]]]


def test_triangular_ring_is_noncommutative():
    T = triangular(Z2)
    assert T.size == 8 and not T.commutative
    T.verify_axioms()


def test_every_constructed_ring_passes_axioms():
    for spec in ["z12", "prod(z2,z3)", "f2[x]/(1,1,1)", "f3[x]/(0,0,1)", "idealization(z2^2)",
                 "idealization(z2^3,T=1)", "tri(z2)", "z2^3"]:
        parse_ring_spec(spec).verify_axioms()


def test_malformed_tables_are_rejected():
    add = np.array([[0, 1], [1, 0]])
    mul = np.array([[0, 0], [0, 0]])  # 1 is not a multiplicative identity
    with pytest.raises(AxiomError):
        FiniteRing(add, mul, ["0", "1"])
    for bad in ["q7", "f6", "f4[x]/(1,0,1)", "z4^", "prod(z2"]:
        with pytest.raises(ValueError):
            parse_ring_spec(bad)
    with pytest.raises(AxiomError):
        idealization(Z4, T={0})


def test_ring_cap(monkeypatch):
    monkeypatch.setitem(CAPS, "ring", 8)
    with pytest.raises(CapExceeded):
        integers_mod(9)


# -- Jacobson radical -------------------------------------------------------------


def test_jacobson_examples():
    assert jacobson_radical(Z4).elements == (0, 2)
    for k in range(1, 4):
        assert jacobson_radical(power(Z2, k)).elements == (0,)
    cert = jacobson_radical(DUAL_NUMBERS)
    assert cert.is_ideal and [DUAL_NUMBERS.labels[i] for i in cert.elements] == ["0", "x"]


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_idealization_radical_is_zero_times_corner(k):
    A = idealization(power(Z2, k))
    cert = jacobson_radical(A)
    assert cert.is_ideal
    assert {A.elements[i] for i in cert.elements} == {(0, s) for s in range(A.corner.size)}


@pytest.mark.parametrize("spec", ["z2", "z4", "z8", "z12", "z30", "prod(z4,z3)", "f2[x]/(0,0,1)",
                                  "f2[x]/(1,1,1)", "f3[x]/(1,0,1)", "idealization(z2^2)", "z2^4"])
def test_radical_is_intersection_of_maximal_right_ideals(spec):
    R = parse_ring_spec(spec)
    _, rad = socle_and_radical(regular_module(R))
    assert as_set(rad) == set(jacobson_radical(R).elements)


# -- lattices and predicates --------------------------------------------------------


def test_submodule_counts():
    assert len(enumerate_submodules(regular_module(Z4)).submodules) == 3
    assert len(enumerate_submodules(free_module(Z2, 2)).submodules) == 5
    zero = module_from_int_relations(Z4, 1, [[1]])
    assert zero.size == 1 and len(enumerate_submodules(zero).submodules) == 1
    # Z/2 + Z/4 has 8 subgroups
    assert len(enumerate_submodules(module_from_int_relations(Z4, 2, [[2, 0]])).submodules) == 8


def test_lattice_closed_under_meet_and_join():
    for M in [free_module(Z2, 3), free_module(Z4, 2), regular_module(triangular(Z2))]:
        L = enumerate_submodules(M)
        subs = set(L.submodules)
        assert L.zero in subs and L.top in subs
        for a, b in itertools.product(L.submodules, repeat=2):
            assert a & b in subs
            assert L.join(a, b) in subs
            assert M.is_submodule(a)


def test_predicate_examples():
    M = regular_module(Z4)
    assert submodule_predicates(M, [0, 2]) == {"essential": True, "small": True, "maximal": True, "simple": True}
    V = free_module(Z2, 2)
    # codes: first coordinate most significant, so (1, 0) is 2
    p = submodule_predicates(V, [0, 2])
    assert not p["essential"] and not p["small"]
    p = submodule_predicates(M, [0])
    assert not p["essential"] and p["small"]
    with pytest.raises(ValueError):
        submodule_predicates(M, [0, 1])


def test_socle_radical_examples():
    soc, rad = socle_and_radical(regular_module(Z4))
    assert as_set(soc) == as_set(rad) == {0, 2}
    soc, rad = socle_and_radical(regular_module(Z6))
    assert as_set(soc) == set(range(6)) and as_set(rad) == {0}
    soc, rad = socle_and_radical(regular_module(DUAL_NUMBERS))
    x = DUAL_NUMBERS.labels.index("x")
    assert as_set(soc) == as_set(rad) == {0, x}


# -- dimensions ---------------------------------------------------------------------


def test_dimension_examples():
    for M, d in [(regular_module(Z6), 2), (regular_module(integers_mod(8)), 1), (free_module(Z2, 2), 2),
                 (free_module(Z2, 3), 3), (module_from_int_relations(Z4, 1, [[1]]), 0)]:
        assert udim_bruteforce(M) == Finite(d)
        assert hdim_bruteforce(M) == Finite(d)


# -- projectivity, stability, decomposition ----------------------------------------


def test_projective_examples():
    assert is_projective_bruteforce(regular_module(Z4))
    assert not is_projective_bruteforce(module_from_int_relations(Z4, 1, [[2]]))
    assert is_projective_bruteforce(module_from_int_relations(Z6, 1, [[2]]))
    assert is_projective_bruteforce(free_module(DUAL_NUMBERS, 2))


def test_stable_and_decompose_examples():
    half = module_from_int_relations(Z4, 1, [[2]])
    assert is_stable_bruteforce(half)
    d = decompose_bruteforce(half)
    assert d.pairs == ((1, half.full),)

    M = direct_sum(regular_module(Z4), half)
    assert not is_stable_bruteforce(M)
    d = decompose_bruteforce(M)
    assert d.exists and d.pairwise_isomorphic and len(d.pairs) > 1
    for P, N in d.pairs:
        assert len(as_set(P)) == 4 and len(as_set(N)) == 2
        Pm, _ = M.submodule(P)
        assert is_isomorphic(Pm, regular_module(Z4))

    zero = module_from_int_relations(Z4, 1, [[1]])
    assert is_stable_bruteforce(zero)
    assert decompose_bruteforce(zero).pairs == ((1, 1),)


def test_idempotent_endomorphisms_split_the_module():
    M = free_module(Z2, 2)
    ends = endomorphisms(M)
    assert len(ends) == 16  # 2x2 matrices over F2
    for e in ends:
        if np.array_equal(e[e], e):
            image, kernel = mask_of(e), mask_of(np.flatnonzero(e == 0))
            assert image & kernel == 1 and M.sum(image, kernel) == M.full


# -- annihilator conditions ------------------------------------------------------------


def test_rickart_baer_examples():
    assert not is_rickart(Z4)
    assert is_rickart(power(Z2, 3)) and is_baer(power(Z2, 3))
    assert not is_rickart(DUAL_NUMBERS)
    assert is_baer(Z6) and is_rickart(product(Z2, integers_mod(3)))


# -- module enumeration and determinism -----------------------------------------------


def test_enumerate_modules_over_z4():
    mods = enumerate_modules(Z4, max_size=16)
    # Z/4-modules of order <= 16 are Z/2^a + Z/4^b with a + 2b <= 4
    types = sorted((M.size for M in mods))
    assert types == sorted([1, 2, 4, 4, 8, 8, 16, 16, 16])
    for A, B in itertools.combinations(mods, 2):
        assert not is_isomorphic(A, B)


def test_modules_pass_axioms():
    for M in enumerate_modules(DUAL_NUMBERS, max_size=16):
        M.verify_axioms()
    with pytest.raises(AxiomError):
        FiniteModule(Z2, np.array([[0, 1], [1, 0]]), np.array([[0, 0], [0, 0]]))


def test_results_are_deterministic():
    def run():
        M = direct_sum(regular_module(Z4), module_from_int_relations(Z4, 1, [[2]]))
        L = enumerate_submodules(M)
        return (tuple(L.submodules), decompose_bruteforce(M).pairs,
                tuple(tuple(e.tolist()) for e in endomorphisms(M)))

    assert run() == run()


def test_module_cap(monkeypatch):
    monkeypatch.setitem(CAPS, "module", 8)
    with pytest.raises(CapExceeded):
        enumerate_submodules(free_module(Z4, 2))
