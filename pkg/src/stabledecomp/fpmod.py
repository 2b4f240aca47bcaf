"""Finitely presented modules as cokernels of relation matrices.

A :class:`Presentation` with relation matrix ``F`` (``m`` rows, ``n``
columns) stands for ``M = Coker(F: R^n -> R^m)``: the columns of ``F`` are
relations among the ``m`` generators.  With this convention dualizing a
presentation is literally transposing ``F``.

Isomorphism is decided by :class:`ModuleInvariants`, which is a complete
invariant on the supported engines (structure theorem over the PIDs, and
primary decomposition of finite abelian groups over ``Z/n``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple, Optional

from sympy import factorint
from sympy.polys.domains import ZZ as SZZ
from sympy.polys.galoistools import gf_factor

from .linalg import (
    ZZ,
    howell_form,
    hermite_column_reduce,
    smith_normal_form,
    solve_many,
    syzygy_generators,
    unimodular_inverse,
)
from .matrix import Matrix
from .rings import Integers, IntegersMod, PolynomialsOverPrimeField, RingEngine


class EngineMismatch(ValueError):
    pass


class DomainError(ValueError):
    """A well-formed request that is mathematically invalid (e.g. a unit where a non-unit is required)."""


@dataclass(frozen=True)
class Presentation:
    engine: RingEngine
    generators: int
    relations: Matrix

    def __post_init__(self):
        if self.relations.rows != self.generators:
            raise ValueError(
                f"relation matrix has {self.relations.rows} rows but there are {self.generators} generators"
            )
        if self.relations.engine != self.engine:
            raise EngineMismatch("relation matrix engine differs from presentation engine")

    @classmethod
    def from_rows(cls, engine: RingEngine, rows, generators: int | None = None) -> "Presentation":
        rows = [list(r) for r in rows]
        if generators is None:
            generators = len(rows)
        ncols = len(rows[0]) if rows else 0
        if len(rows) == 0 and generators > 0:
            return cls.free(engine, generators)
        return cls(engine, generators, Matrix.from_ints(engine, rows, ncols))

    @classmethod
    def free(cls, engine: RingEngine, k: int) -> "Presentation":
        return cls(engine, k, Matrix.zeros(engine, k, 0))

    @classmethod
    def zero(cls, engine: RingEngine) -> "Presentation":
        return cls.free(engine, 0)

    @classmethod
    def cyclic(cls, engine: RingEngine, a) -> "Presentation":
        """``R / aR``."""
        return cls(engine, 1, Matrix.from_rows(engine, [[a]]))

    @property
    def num_relations(self) -> int:
        return self.relations.cols

    def direct_sum(self, other: "Presentation") -> "Presentation":
        _same_engine(self, other)
        return Presentation(self.engine, self.generators + other.generators,
                            self.relations.block_diag(other.relations))

    def to_json(self) -> dict:
        return {
            "engine": self.engine.header(),
            "generators": self.generators,
            "relations": self.relations.to_json(),
        }


def _same_engine(P: Presentation, Q: Presentation) -> None:
    if P.engine != Q.engine:
        raise EngineMismatch(f"engine mismatch: {P.engine.name} vs {Q.engine.name}")


@dataclass(frozen=True)
class ModuleInvariants:
    """Isomorphism-class fingerprint.

    ``torsion`` is the divisibility chain of non-unit invariant factors.  Over
    ``Z/n`` a factor equal to ``n`` is a free summand and is counted in
    ``free_rank`` instead; ``local`` then lists, per prime power ``p^k`` of
    ``n``, the exponents ``e`` of the cyclic summands ``Z/p^e`` (descending).
    """

    engine: RingEngine
    free_rank: int
    torsion: tuple = ()
    local: tuple = ()

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self) -> str:
        e = self.engine
        base = "Z" if isinstance(e, (Integers, IntegersMod)) else e.name
        ring = e.name
        parts = []
        if self.free_rank:
            parts.append(ring if self.free_rank == 1 else f"{ring}^{self.free_rank}")
        for d in self.torsion:
            if isinstance(e, PolynomialsOverPrimeField):
                parts.append(f"{ring}/({e.format_element(d)})")
            else:
                parts.append(f"{base}/{d}")
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        out = {
            "engine": self.engine.header(),
            "free_rank": self.free_rank,
            "torsion": [self.engine.to_json(d) for d in self.torsion],
            "text": str(self),
        }
        if isinstance(self.engine, IntegersMod):
            out["local"] = [{"p": p, "k": k, "exponents": list(ex)} for p, k, ex in self.local]
        return out


@dataclass(frozen=True)
class ModuleMap:
    """A map ``Coker(F_source) -> Coker(F_target)`` given on generators.

    ``witness`` satisfies ``F_target @ witness == matrix @ F_source``, which
    certifies that relations go to relations.
    """

    source: Presentation
    target: Presentation
    matrix: Matrix
    witness: Matrix

    @classmethod
    def build(cls, source: Presentation, target: Presentation, matrix: Matrix) -> "ModuleMap":
        _same_engine(source, target)
        if matrix.shape != (target.generators, source.generators):
            raise ValueError(f"map matrix has shape {matrix.shape}, expected "
                             f"{(target.generators, source.generators)}")
        images = matrix @ source.relations
        W = solve_many(target.relations, images)
        if W is None:
            raise ValueError("matrix does not send relations into the target relations")
        return cls(source, target, matrix, W)


@dataclass(frozen=True)
class DimensionValue:
    value: Optional[int]  # None means infinite

    @property
    def is_finite(self) -> bool:
        return self.value is not None

    def __add__(self, other: "DimensionValue") -> "DimensionValue":
        if self.value is None or other.value is None:
            return INFINITE
        return DimensionValue(self.value + other.value)

    def __str__(self) -> str:
        return "inf" if self.value is None else str(self.value)

    def to_json(self):
        return "inf" if self.value is None else self.value


def Finite(k: int) -> DimensionValue:
    return DimensionValue(k)


INFINITE = DimensionValue(None)


@dataclass(frozen=True)
class PeelingTrace:
    steps: tuple  # ((projective summand, remainder), ...)
    terminated: bool

    def to_json(self) -> dict:
        return {
            "steps": [{"projective": p.to_json(), "remainder": n.to_json()} for p, n in self.steps],
            "terminated": self.terminated,
        }


class DoubleDual(NamedTuple):
    sigma: ModuleMap
    kernel: ModuleInvariants
    cokernel: ModuleInvariants


class Decomposition(NamedTuple):
    proj: ModuleInvariants
    stab: ModuleInvariants
    splitting: ModuleMap
    # whether M ~ M** + Ext^1(Tr M, R) applies (pd(Tr M) <= 1)
    formula_applicable: bool


# ---------------------------------------------------------------------------
# normalization and invariants


def normalize(P: Presentation) -> Presentation:
    """Minimal presentation of the same module.

    Over domains the relation matrix is made injective (column Hermite form,
    zero columns dropped); over ``Z/n`` the relations are replaced by the
    Howell form of their span.  Then every unit entry eliminates one
    generator together with one relation.
    """
    e = P.engine
    F = P.relations
    if e.is_domain:
        H, _ = hermite_column_reduce(F)
        F = H.nonzero_columns()
    elif F.cols:
        F = howell_form(F.T).T
    rows = F.to_lists()
    while True:
        hit = next(((i, j) for i, r in enumerate(rows) for j, x in enumerate(r) if e.is_unit(x)), None)
        if hit is None:
            break
        i, j = hit
        inv = e.inverse(rows[i][j])
        for r, row in enumerate(rows):
            if r != i and not e.is_zero(row[j]):
                q = e.mul(row[j], inv)
                rows[r] = [e.sub(x, e.mul(q, y)) for x, y in zip(row, rows[i])]
        rows.pop(i)
        rows = [r[:j] + r[j + 1:] for r in rows]
    F = Matrix(e, len(rows), len(rows[0]) if rows else 0, rows)
    return Presentation(e, F.rows, F.nonzero_columns())


def _smith_factors(P: Presentation) -> tuple:
    e = P.engine
    if e.is_domain:
        return smith_normal_form(P.relations).invariant_factors
    n = e.n
    lifted = P.relations.lift(ZZ).hstack(Matrix.diagonal(ZZ, [n] * P.generators))
    return smith_normal_form(lifted).invariant_factors


@lru_cache(maxsize=8192)
def invariants(P: Presentation) -> ModuleInvariants:
    e = P.engine
    factors = _smith_factors(P)
    if e.is_domain:
        torsion = tuple(d for d in factors if not e.is_unit(d))
        return ModuleInvariants(e, P.generators - len(factors), torsion)
    n = e.n
    free = sum(1 for d in factors if d == n)
    torsion = tuple(d for d in factors if d not in (1, n))
    local = []
    for p, k in e.prime_powers():
        exps = []
        for d in factors:
            v = 0
            while d % p == 0:
                d //= p
                v += 1
            if v:
                exps.append(v)
        local.append((p, k, tuple(sorted(exps, reverse=True))))
    return ModuleInvariants(e, free, torsion, tuple(local))


def presentation_of(inv: ModuleInvariants) -> Presentation:
    """A diagonal presentation of the module with the given invariants."""
    e = inv.engine
    t = len(inv.torsion)
    m = inv.free_rank + t
    rows = [[e.zero()] * t for _ in range(m)]
    for i, d in enumerate(inv.torsion):
        rows[i][i] = d
    return Presentation(e, m, Matrix(e, m, t, rows))


def direct_sum(a: ModuleInvariants, b: ModuleInvariants) -> ModuleInvariants:
    if a.engine != b.engine:
        raise EngineMismatch("engine mismatch")
    return invariants(presentation_of(a).direct_sum(presentation_of(b)))


def is_isomorphic(P: Presentation, Q: Presentation) -> bool:
    _same_engine(P, Q)
    return invariants(P) == invariants(Q)


# ---------------------------------------------------------------------------
# kernels, homology


def _kernel(phi: Matrix, src_rel: Matrix, tgt_rel: Matrix) -> tuple[Presentation, Matrix]:
    """Kernel of ``Coker(src_rel) -> Coker(tgt_rel)`` given by ``phi``.

    Returns the kernel's presentation and its generators as columns in the
    source's generator coordinates.
    """
    e = phi.engine
    m = phi.cols
    S = syzygy_generators(phi.hstack(tgt_rel))
    X = S.select_rows(range(m)).nonzero_columns()
    T = syzygy_generators(X.hstack(src_rel))
    C = T.select_rows(range(X.cols))
    return Presentation(e, X.cols, C), X


def _homology(incoming: Matrix, outgoing: Matrix, mid_rel: Matrix, out_rel: Matrix) -> Presentation:
    """``ker(outgoing) / im(incoming)`` at a middle module ``Coker(mid_rel)``."""
    Zp, X = _kernel(outgoing, mid_rel, out_rel)
    if incoming.cols == 0:
        return Zp
    sol = solve_many(X.hstack(mid_rel), incoming)
    if sol is None:
        raise ArithmeticError("complex is not a complex: image escapes the kernel")
    coords = sol.select_rows(range(X.cols))
    return Presentation(Zp.engine, X.cols, Zp.relations.hstack(coords))


def _cokernel(phi: Matrix, tgt_rel: Matrix) -> Presentation:
    return Presentation(phi.engine, phi.rows, phi.hstack(tgt_rel))


# ---------------------------------------------------------------------------
# duals and transposes


def _dual_data(P: Presentation) -> tuple[Presentation, Matrix]:
    """``M* = Ker(F^T)`` as a presentation plus its generators (columns in ``R^m``)."""
    G = syzygy_generators(P.relations.T)
    return Presentation(P.engine, G.cols, syzygy_generators(G)), G


def dual(P: Presentation) -> Presentation:
    return _dual_data(P)[0]


def ab_transpose(P: Presentation, raw: bool = False) -> Presentation:
    """``Coker(F^T)`` for the normalized presentation (or ``P`` itself if ``raw``)."""
    Pn = P if raw else normalize(P)
    F = Pn.relations
    return Presentation(P.engine, F.cols, F.T)


def _syzygy_module(P: Presentation) -> Presentation:
    """``Im(F) ~ R^n / Ker(F)``, generated by the columns of ``F``."""
    F = P.relations
    return Presentation(P.engine, F.cols, syzygy_generators(F))


def monic_transpose(P: Presentation) -> Presentation:
    """Transpose with respect to the presentation ``Im(F) -> R^m -> M -> 0``.

    The first map is injective.  When ``Im(F)`` is projective this is the
    presentation used for the isomorphisms of the mu/epsilon comparison;
    over domains it coincides with :func:`ab_transpose` on a normalized
    presentation.
    """
    Pn = normalize(P)
    F = Pn.relations
    D, Gd = _dual_data(_syzygy_module(Pn))
    coords = solve_many(Gd, F.T)
    if coords is None:
        raise ArithmeticError("restricted coordinate functionals are not in the dual")
    return Presentation(P.engine, Gd.cols, coords.hstack(D.relations))


def double_dual_map(P: Presentation) -> DoubleDual:
    """The natural map ``M -> M**`` with its kernel and cokernel."""
    D, G = _dual_data(P)
    DD, H = _dual_data(D)
    # sigma(e_i) is the functional g_j -> G[i][j] on the generators of M*
    S = solve_many(H, G.T)
    if S is None:
        raise ArithmeticError("evaluation functionals are not in the double dual")
    sigma = ModuleMap.build(P, DD, S)
    kern, _ = _kernel(S, P.relations, DD.relations)
    return DoubleDual(sigma, invariants(kern), invariants(_cokernel(S, DD.relations)))


def is_torsionless(P: Presentation) -> bool:
    return double_dual_map(P).kernel.is_zero


# ---------------------------------------------------------------------------
# Hom, tensor, Ext^1, Tor_1


def _ident(e, k):
    return Matrix.identity(e, k)


def hom(P: Presentation, Q: Presentation) -> ModuleInvariants:
    _same_engine(P, Q)
    e = P.engine
    F, G = P.relations, Q.relations
    m, k = P.generators, Q.generators
    out = F.T.kron(_ident(e, k))
    K, _ = _kernel(out, _ident(e, m).kron(G), _ident(e, F.cols).kron(G))
    return invariants(K)


def tensor(P: Presentation, Q: Presentation) -> ModuleInvariants:
    _same_engine(P, Q)
    e = P.engine
    F, G = P.relations, Q.relations
    m, k = P.generators, Q.generators
    rel = F.kron(_ident(e, k)).hstack(_ident(e, m).kron(G))
    return invariants(Presentation(e, m * k, rel))


def _resolution(P: Presentation) -> tuple[Matrix, Matrix]:
    """``(F, F2)``: ``R^c --F2--> R^a --F--> R^m -> M -> 0`` exact at ``R^a``."""
    F = normalize(P).relations
    return F, syzygy_generators(F)


def ext1(P: Presentation, Q: Presentation) -> ModuleInvariants:
    _same_engine(P, Q)
    e = P.engine
    F, F2 = _resolution(P)
    G, k = Q.relations, Q.generators
    H = _homology(
        incoming=F.T.kron(_ident(e, k)),
        outgoing=F2.T.kron(_ident(e, k)),
        mid_rel=_ident(e, F.cols).kron(G),
        out_rel=_ident(e, F2.cols).kron(G),
    )
    return invariants(H)


def tor1(P: Presentation, Q: Presentation) -> ModuleInvariants:
    _same_engine(P, Q)
    e = P.engine
    F, F2 = _resolution(P)
    G, k = Q.relations, Q.generators
    H = _homology(
        incoming=F2.kron(_ident(e, k)),
        outgoing=F.kron(_ident(e, k)),
        mid_rel=_ident(e, F.cols).kron(G),
        out_rel=_ident(e, F.rows).kron(G),
    )
    return invariants(H)


# ---------------------------------------------------------------------------
# projective / stable


def _local_flags(inv: ModuleInvariants) -> list[tuple[int, int]]:
    """``[(free local summands, non-free local summands)]`` per prime."""
    return [(sum(1 for x in ex if x == k), sum(1 for x in ex if x != k)) for _, k, ex in inv.local]


def is_projective(P: Presentation) -> bool:
    inv = invariants(P)
    if P.engine.is_domain:
        return not inv.torsion
    return all(bad == 0 for _, bad in _local_flags(inv))


def is_stable(P: Presentation) -> bool:
    inv = invariants(P)
    if P.engine.is_domain:
        return inv.free_rank == 0
    return all(good == 0 for good, _ in _local_flags(inv))


def pd_le_1_certificate(P: Presentation) -> bool:
    """Certify ``pd(M) <= 1``.

    The presentation ``Im(F) -> R^m -> M -> 0`` has an injective first map;
    when ``Im(F)`` is projective it is a projective presentation and the
    criterion is that the transpose taken along it has zero dual.  Over the
    domain engines ``Im(F)`` is always free.
    """
    Pn = normalize(P)
    if not is_projective(_syzygy_module(Pn)):
        return False
    if P.engine.is_domain:
        tr = ab_transpose(Pn, raw=True)
    else:
        tr = monic_transpose(Pn)
    return invariants(dual(tr)).is_zero


def _local_split(P: Presentation) -> tuple[ModuleInvariants, ModuleInvariants, ModuleMap]:
    """Projective/stable split over ``Z/n`` from the primary decomposition."""
    e = P.engine
    n = e.n
    lifted = P.relations.lift(ZZ).hstack(Matrix.diagonal(ZZ, [n] * P.generators))
    snf = smith_normal_form(lifted)
    Uinv = unimodular_inverse(snf.U)
    proj_gens, proj_orders = [], []
    stab_rel = []
    for i, d in enumerate(snf.invariant_factors):
        for p, k in e.prime_powers():
            v, dd = 0, d
            while dd % p == 0:
                dd //= p
                v += 1
            if v == k:
                c = d // p ** k
                proj_gens.append(tuple((c * x) % n for x in Uinv.column(i)))
                proj_orders.append(p ** k)
            elif v:
                stab_rel.append(p ** v)
    m = len(proj_gens)
    Pproj = Presentation(e, m, Matrix.diagonal(e, [e.from_int(q) for q in proj_orders]))
    inc = ModuleMap.build(Pproj, P, Matrix.from_columns(e, proj_gens, P.generators))
    Pstab = Presentation(e, len(stab_rel), Matrix.diagonal(e, [e.from_int(q) for q in stab_rel]))
    return invariants(Pproj), invariants(Pstab), inc


def decompose(P: Presentation) -> Decomposition:
    """``M = projective + stable``.

    Over the domain engines the projective part is ``M**`` and the stable part
    ``Ext^1(Tr M, R)``; ``splitting`` is a section ``s: M** -> M`` of the
    natural map, so ``sigma @ s`` is the identity on generators.  Over
    ``Z/n`` the split comes from the primary decomposition and ``splitting``
    is the inclusion of the projective summand; when ``pd(Tr M) <= 1`` the
    double-dual formula is evaluated too and must agree.
    """
    e = P.engine
    R = Presentation.free(e, 1)
    if e.is_domain:
        dd = double_dual_map(P)
        target = dd.sigma.target
        s = solve_many(dd.sigma.matrix, _ident(e, target.generators))
        if s is None:
            raise ArithmeticError("natural map to the double dual is not split surjective")
        splitting = ModuleMap.build(target, P, s)
        proj = invariants(target)
        stab = ext1(ab_transpose(P), R)
        return Decomposition(proj, stab, splitting, True)
    proj, stab, inc = _local_split(P)
    applicable = pd_le_1_certificate(ab_transpose(P))
    if applicable:
        f_proj = invariants(dual(dual(P)))
        f_stab = ext1(ab_transpose(P), R)
        if (f_proj, f_stab) != (proj, stab):
            raise ArithmeticError(f"decomposition paths disagree: {f_proj}+{f_stab} vs {proj}+{stab}")
    return Decomposition(proj, stab, inc, applicable)


def peel(P: Presentation, max_steps: int = 8) -> PeelingTrace:
    """Split off projective summands until the remainder is stable."""
    if max_steps < 1:
        raise ValueError("max_steps must be positive")
    steps = []
    current = P
    for _ in range(max_steps):
        if is_stable(current):
            return PeelingTrace(tuple(steps), True)
        d = decompose(current)
        steps.append((d.proj, d.stab))
        current = presentation_of(d.stab)
    return PeelingTrace(tuple(steps), is_stable(current))


def projectively_equivalent(P: Presentation, Q: Presentation) -> bool:
    _same_engine(P, Q)
    return decompose(P).stab == decompose(Q).stab


# ---------------------------------------------------------------------------
# uniform and hollow dimension


def _primary_count(e: RingEngine, d) -> int:
    if isinstance(e, Integers):
        return len(factorint(abs(d)))
    if isinstance(e, PolynomialsOverPrimeField):
        _, facs = gf_factor([SZZ(c) for c in reversed(d)], e.p, SZZ)
        return len(facs)
    raise TypeError(e.name)


def _primary_components(P: Presentation) -> int:
    inv = invariants(P)
    if P.engine.is_domain:
        return sum(_primary_count(P.engine, d) for d in inv.torsion)
    return sum(len(ex) for _, _, ex in inv.local)


def udim(P: Presentation) -> DimensionValue:
    inv = invariants(P)
    if P.engine.is_domain:
        return Finite(inv.free_rank + _primary_components(P))
    return Finite(_primary_components(P))


def hdim(P: Presentation) -> DimensionValue:
    inv = invariants(P)
    if P.engine.is_domain and inv.free_rank > 0:
        # R itself has infinitely many coindependent maximal ideals
        return INFINITE
    return Finite(_primary_components(P))


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class MuEpsilonReport:
    ext1: ModuleInvariants
    tensor_tr: ModuleInvariants
    hom_tr: ModuleInvariants
    tor1: ModuleInvariants
    pd_le_1: bool
    mu_verdict: object  # bool, or a string when not checked
    epsilon_verdict: object

    def to_json(self) -> dict:
        return {
            "ext1(M,N)": self.ext1.to_json(),
            "N(x)Tr(M)": self.tensor_tr.to_json(),
            "Hom(Tr(M),N)": self.hom_tr.to_json(),
            "Tor1(M,N)": self.tor1.to_json(),
            "pd_le_1": self.pd_le_1,
            "mu_iso": self.mu_verdict,
            "epsilon_iso": self.epsilon_verdict,
        }


NOT_CHECKED = "containment not checked"


def verify_mu_epsilon(P: Presentation, Q: Presentation) -> MuEpsilonReport:
    """Compare ``Ext^1(M,N)`` with ``N (x) Tr M`` and ``Hom(Tr M, N)`` with ``Tor_1(M,N)``."""
    _same_engine(P, Q)
    cert = pd_le_1_certificate(P)
    tr = monic_transpose(P) if cert else ab_transpose(P)
    ex, tn = ext1(P, Q), tensor(Q, tr)
    hm, tr1 = hom(tr, Q), tor1(P, Q)
    if cert:
        return MuEpsilonReport(ex, tn, hm, tr1, True, ex == tn, hm == tr1)
    return MuEpsilonReport(ex, tn, hm, tr1, False, NOT_CHECKED, NOT_CHECKED)


@dataclass(frozen=True)
class DualCounterexampleReport:
    module: Presentation
    transpose: ModuleInvariants
    pd_transpose_le_1: bool
    dual: ModuleInvariants
    holds: bool = field(default=False)

    def to_json(self) -> dict:
        return {
            "U": self.module.to_json(),
            "U_invariants": invariants(self.module).to_json(),
            "Tr(U)": self.transpose.to_json(),
            "pd(Tr(U))<=1": self.pd_transpose_le_1,
            "U*": self.dual.to_json(),
            "U*_nonzero": not self.dual.is_zero,
            "counterexample_holds": self.holds,
        }


def dual_counterexample(P_proj: Presentation, a) -> DualCounterexampleReport:
    """``U = P + R/aR``: ``pd(Tr U) <= 1`` although ``U* != 0``."""
    e = P_proj.engine
    if not e.is_domain:
        raise DomainError("this construction needs a domain engine")
    if e.is_zero(a) or e.is_unit(a):
        raise DomainError(f"a = {e.format_element(a)} must be a nonzero non-unit")
    if not is_projective(P_proj):
        raise DomainError("the first summand must be projective")
    U = P_proj.direct_sum(Presentation.cyclic(e, a))
    tr = ab_transpose(U)
    cert = pd_le_1_certificate(tr)
    d = invariants(dual(U))
    return DualCounterexampleReport(U, invariants(tr), cert, d, cert and not d.is_zero)
