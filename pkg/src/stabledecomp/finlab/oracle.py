"""Definitional brute-force checks on finite modules.

Every predicate here quantifies over the complete submodule lattice or over
complete homomorphism sets, so the answers are ground truth at small scale.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

import math

import numpy as np
from sympy import factorint

from ..fpmod import DimensionValue, Finite
from .modules import FiniteModule, direct_sum, mask_of, members, regular_module, _decode, _encode
from .rings import CAPS, CapExceeded, FiniteRing


class OracleInconsistency(AssertionError):
    """Two definitional characterizations disagreed (a bug, never expected)."""


# ---------------------------------------------------------------------------
# Jacobson radical


@dataclass(frozen=True)
class RadicalCertificate:
    elements: tuple
    closed_under_addition: bool
    left_ideal: bool
    right_ideal: bool

    @property
    def is_ideal(self) -> bool:
        return self.closed_under_addition and self.left_ideal and self.right_ideal


def jacobson_radical(R: FiniteRing) -> RadicalCertificate:
    """``{x : 1 - x*y is a unit for every y}`` with an ideal certificate."""
    unit = np.zeros(R.size, dtype=bool)
    unit[R.units] = True
    one_minus = R.sub(1, R.mul)  # one_minus[x, y] = 1 - x*y
    J = np.flatnonzero(unit[one_minus].all(axis=1))
    Jset = set(J.tolist())
    closed = set(R.add[np.ix_(J, J)].ravel().tolist()) <= Jset
    left = set(R.mul[:, J].ravel().tolist()) <= Jset
    right = set(R.mul[J].ravel().tolist()) <= Jset
    return RadicalCertificate(tuple(int(x) for x in J), closed, left, right)


# ---------------------------------------------------------------------------
# submodule lattice


@dataclass
class SubmoduleLattice:
    module: FiniteModule
    submodules: list  # bitmasks sorted by (size, mask)
    _sums: dict = field(default_factory=dict, repr=False)

    @property
    def zero(self) -> int:
        return 1

    @property
    def top(self) -> int:
        return self.module.full

    def __len__(self):
        return len(self.submodules)

    def __contains__(self, mask):
        return mask in self._index

    def __post_init__(self):
        self._index = {m: i for i, m in enumerate(self.submodules)}

    def join(self, a: int, b: int) -> int:
        key = (a, b) if a <= b else (b, a)
        out = self._sums.get(key)
        if out is None:
            out = self.module.sum(a, b)
            self._sums[key] = out
        return out

    def below(self, mask: int) -> list:
        return [L for L in self.submodules if L & ~mask == 0]

    def above(self, mask: int) -> list:
        return [L for L in self.submodules if mask & ~L == 0]

    def atoms(self) -> list:
        return [K for K in self.submodules if _is_simple(self, K)]

    def coatoms(self) -> list:
        return [K for K in self.submodules if _is_maximal(self, K)]


def enumerate_submodules(M: FiniteModule) -> SubmoduleLattice:
    """All submodules, by closing the cyclic submodules under sums."""
    cached = getattr(M, "_lattice", None)
    if cached is not None:
        return cached
    if M.size > CAPS["module"]:
        raise CapExceeded(f"module of size {M.size} exceeds cap {CAPS['module']}")
    cyclic = sorted({M.cyclic(x) for x in range(M.size)})
    found = {1}
    frontier = [1]
    while frontier:
        nxt = []
        for S in frontier:
            for C in cyclic:
                if C & ~S:
                    T = M.sum(S, C)
                    if T not in found:
                        found.add(T)
                        nxt.append(T)
        frontier = nxt
    subs = sorted(found, key=lambda m: (m.bit_count(), m))
    for S in subs:
        if not M.is_submodule(S):
            raise OracleInconsistency("lattice closure produced a non-submodule")
    lattice = SubmoduleLattice(M, subs)
    M._lattice = lattice
    return lattice


def _is_simple(L: SubmoduleLattice, K: int) -> bool:
    return K != L.zero and not any(S != L.zero and S != K and S & ~K == 0 for S in L.submodules)


def _is_maximal(L: SubmoduleLattice, K: int) -> bool:
    return K != L.top and not any(S != L.top and S != K and K & ~S == 0 for S in L.submodules)


def _is_essential(L: SubmoduleLattice, K: int) -> bool:
    return all(S == L.zero or S & K != L.zero for S in L.submodules)


def _is_small(L: SubmoduleLattice, K: int) -> bool:
    return all(S == L.top or L.join(K, S) != L.top for S in L.submodules)


def submodule_predicates(M: FiniteModule, K) -> dict:
    L = enumerate_submodules(M)
    K = K if isinstance(K, int) else mask_of(K)
    if K not in L:
        raise ValueError("K is not a submodule")
    return {
        "essential": _is_essential(L, K),
        "small": _is_small(L, K),
        "maximal": _is_maximal(L, K),
        "simple": _is_simple(L, K),
    }


def socle_and_radical(M: FiniteModule) -> tuple[int, int]:
    L = enumerate_submodules(M)
    soc = L.zero
    for A in L.atoms():
        soc = L.join(soc, A)
    rad = L.top
    for C in L.coatoms():
        rad &= C
    return soc, rad


# ---------------------------------------------------------------------------
# uniform and hollow dimension


def _search_cap() -> int:
    return CAPS["endo"]


def udim_bruteforce(M: FiniteModule) -> DimensionValue:
    """Largest independent family of nonzero submodules.

    Cross-checked against the sizes of essential direct sums of uniform
    submodules, which must all agree with it.
    """
    L = enumerate_submodules(M)
    if M.size == 1:
        return Finite(0)
    atoms = L.atoms()
    best = _max_independent(L, atoms)
    # uniform: nonzero with exactly one simple submodule below it
    uniforms = [U for U in L.submodules if U != L.zero and sum(1 for A in atoms if A & ~U == 0) == 1]
    sizes = set()
    budget = [_search_cap()]

    def dfs(start, S, prod, k):
        budget[0] -= 1
        if budget[0] < 0:
            raise CapExceeded("uniform-family search exceeded the cap")
        if k and _is_essential(L, S):
            sizes.add(k)
            return
        for i in range(start, len(uniforms)):
            U = uniforms[i]
            T = L.join(S, U)
            if T.bit_count() == prod * U.bit_count():
                dfs(i + 1, T, prod * U.bit_count(), k + 1)

    dfs(0, L.zero, 1, 0)
    if sizes != {best}:
        raise OracleInconsistency(f"udim characterizations disagree: {best} vs {sorted(sizes)}")
    return Finite(best)


def _max_independent(L: SubmoduleLattice, atoms: list) -> int:
    best = 0

    def dfs(start, S, prod, k):
        nonlocal best
        best = max(best, k)
        for i in range(start, len(atoms)):
            A = atoms[i]
            T = L.join(S, A)
            if T.bit_count() == prod * A.bit_count():
                dfs(i + 1, T, prod * A.bit_count(), k + 1)

    dfs(0, L.zero, 1, 0)
    return best


def hdim_bruteforce(M: FiniteModule) -> DimensionValue:
    """Largest coindependent family of proper submodules with hollow quotients
    and small intersection; cross-checked against the largest coindependent
    family with hollow quotients alone."""
    L = enumerate_submodules(M)
    if M.size == 1:
        return Finite(0)
    proper = [N for N in L.submodules if N != L.top]

    def hollow_quotient(N):
        ups = [S for S in L.above(N) if S != L.top]
        return all(L.join(a, b) != L.top for i, a in enumerate(ups) for b in ups[i:])

    cands = [N for N in proper if hollow_quotient(N)]
    with_small = set()
    best_any = 0
    budget = [_search_cap()]

    def coindependent(fam):
        for i, N in enumerate(fam):
            rest = L.top
            for j, K in enumerate(fam):
                if j != i:
                    rest &= K
            if L.join(N, rest) != L.top:
                return False
        return True

    def dfs(start, fam):
        nonlocal best_any
        budget[0] -= 1
        if budget[0] < 0:
            raise CapExceeded("coindependent-family search exceeded the cap")
        best_any = max(best_any, len(fam))
        inter = L.top
        for N in fam:
            inter &= N
        if fam and _is_small(L, inter):
            with_small.add(len(fam))
        for i in range(start, len(cands)):
            nxt = fam + [cands[i]]
            if coindependent(nxt):
                dfs(i + 1, nxt)

    dfs(0, [])
    if not with_small or max(with_small) != best_any:
        raise OracleInconsistency(f"hdim characterizations disagree: {best_any} vs {sorted(with_small)}")
    return Finite(best_any)


# ---------------------------------------------------------------------------
# homomorphisms


class _TableTarget:
    def __init__(self, N: FiniteModule):
        self.size = N.size
        self.N = N

    def add(self, a, b):
        return self.N.add[a, b]

    def act_row(self, y: int) -> np.ndarray:
        return self.N.act[y]

    def killed_by(self, ann: np.ndarray) -> np.ndarray:
        return (self.N.act[:, ann] == 0).all(axis=1)


class _FreeTarget:
    """``R^t`` without tables: codes in base ``|R|``."""

    def __init__(self, R: FiniteRing, t: int):
        self.R, self.t = R, t
        self.size = R.size ** t
        if self.size > CAPS["endo"]:
            raise CapExceeded(f"free module of size {self.size} exceeds the search cap")
        self.digits = _decode(np.arange(self.size), R.size, t)

    def add(self, a, b):
        return _encode(self.R.add[_decode(np.asarray(a), self.R.size, self.t),
                                  _decode(np.asarray(b), self.R.size, self.t)], self.R.size)

    def act_row(self, y: int) -> np.ndarray:
        d = self.digits[y]
        return _encode(self.R.mul[d[None, :], np.arange(self.R.size)[:, None]], self.R.size)

    def killed_by(self, ann: np.ndarray) -> np.ndarray:
        ok = np.ones(self.size, dtype=bool)
        for r in ann:
            ok &= (self.R.mul[self.digits, r] == 0).all(axis=1)
        return ok


def generating_set(M: FiniteModule) -> list[int]:
    """Greedy generating set: repeatedly add the element enlarging the span most."""
    S, gens = 1, []
    while S != M.full:
        best = None
        for x in members(M.full & ~S):
            T = M.sum(S, M.cyclic(int(x)))
            if best is None or T.bit_count() > best[0]:
                best = (T.bit_count(), int(x), T)
        gens.append(best[1])
        S = best[2]
    return gens


def _annihilator(M: FiniteModule, x: int) -> np.ndarray:
    return np.flatnonzero(M.act[x] == 0)


def _extend(M: FiniteModule, target, img: np.ndarray, g: int, y: int) -> Optional[np.ndarray]:
    """Extend a partial homomorphism defined on a submodule by ``g -> y``."""
    known = np.flatnonzero(img >= 0)
    src = M.add[known[:, None], M.act[g][None, :]].ravel()
    val = target.add(img[known][:, None], target.act_row(y)[None, :]).ravel()
    new = np.full_like(img, -1)
    new[src] = val
    if (new[src] != val).any():
        return None
    return new


def iter_homs(M: FiniteModule, target, candidates=None, budget=None) -> Iterator[np.ndarray]:
    """All homomorphisms ``M -> target`` as image arrays, in deterministic order.

    ``candidates[i]`` optionally restricts the image of the ``i``-th generator.
    """
    if isinstance(target, FiniteModule):
        target = _TableTarget(target)
    gens = generating_set(M)
    if budget is None:
        budget = [CAPS["endo"]]
    cand = []
    for i, g in enumerate(gens):
        ok = target.killed_by(_annihilator(M, g))
        if candidates is not None:
            mask = np.zeros(target.size, dtype=bool)
            mask[np.asarray(candidates[i], dtype=np.int64)] = True
            ok &= mask
        cand.append(np.flatnonzero(ok))
    start = np.full(M.size, -1, dtype=np.int64)
    start[0] = 0

    def rec(level, img):
        if level == len(gens):
            yield img
            return
        for y in cand[level]:
            budget[0] -= 1
            if budget[0] < 0:
                raise CapExceeded("homomorphism search exceeded the cap")
            nxt = _extend(M, target, img, gens[level], int(y))
            if nxt is not None:
                yield from rec(level + 1, nxt)

    yield from rec(0, start)


def isomorphism(M: FiniteModule, N: FiniteModule) -> Optional[np.ndarray]:
    if M.ring is not N.ring or M.fingerprint != N.fingerprint:
        return None
    gens = generating_set(M)
    prof = [N.element_profile(y) for y in range(N.size)]
    cands = [[y for y in range(N.size) if prof[y] == M.element_profile(g)] for g in gens]
    for img in iter_homs(M, N, cands):
        if np.unique(img).size == N.size:
            return img
    return None


def is_isomorphic(M: FiniteModule, N: FiniteModule) -> bool:
    return isomorphism(M, N) is not None


def endomorphisms(M: FiniteModule) -> list[np.ndarray]:
    cached = getattr(M, "_endos", None)
    if cached is None:
        cached = [img.copy() for img in iter_homs(M, M)]
        M._endos = cached
    return cached


def idempotents(M: FiniteModule) -> list[np.ndarray]:
    return [e for e in endomorphisms(M) if (e[e] == e).all()]


# ---------------------------------------------------------------------------
# projectivity, stability, decomposition


def is_projective_bruteforce(M: FiniteModule) -> bool:
    """True iff the epimorphism ``R^t -> M`` onto a generating set splits."""
    cached = getattr(M, "_projective", None)
    if cached is not None:
        return cached
    if M.size == 1:
        M._projective = True
        return True
    R = M.ring
    gens = generating_set(M)
    F = _FreeTarget(R, len(gens))
    pi = np.zeros(F.size, dtype=np.int64)
    for i, g in enumerate(gens):
        pi = M.add[pi, M.act[g][F.digits[:, i]]]
    fibers = [np.flatnonzero(pi == g) for g in gens]
    result = False
    for s in iter_homs(M, F, fibers):
        if (pi[s] == np.arange(M.size)).all():
            result = True
            break
    M._projective = result
    return result


def is_stable_bruteforce(M: FiniteModule) -> bool:
    """No idempotent endomorphism has a nonzero projective image."""
    for e in idempotents(M):
        img = mask_of(e)
        if img != 1 and _submodule_projective(M, img):
            return False
    return True


def _sub_cache(M: FiniteModule) -> dict:
    if not hasattr(M, "_subs"):
        M._subs = {}
    return M._subs


def _as_module(M: FiniteModule, mask: int) -> FiniteModule:
    cache = _sub_cache(M)
    if mask == M.full:
        return M
    if mask not in cache:
        cache[mask] = M.submodule(mask)[0]
    return cache[mask]


def _submodule_projective(M: FiniteModule, mask: int) -> bool:
    return is_projective_bruteforce(_as_module(M, mask))


@dataclass(frozen=True)
class BruteDecomposition:
    pairs: tuple  # (P mask, N mask) internal summand pairs
    pairwise_isomorphic: bool

    @property
    def exists(self) -> bool:
        return bool(self.pairs)


def decompose_bruteforce(M: FiniteModule) -> BruteDecomposition:
    """Every ``M = P + N`` (internal) with ``P`` projective and ``N`` stable."""
    pairs = []
    seen = set()
    for e in idempotents(M):
        P = mask_of(e)
        N = mask_of(np.flatnonzero(e == 0))
        if (P, N) in seen:
            continue
        seen.add((P, N))
        if not _submodule_projective(M, P):
            continue
        if is_stable_bruteforce(_as_module(M, N)):
            pairs.append((P, N))
    pairs.sort(key=lambda pn: (pn[0].bit_count(), pn[0], pn[1]))
    ok = True
    if pairs:
        P0, N0 = _as_module(M, pairs[0][0]), _as_module(M, pairs[0][1])
        for P, N in pairs[1:]:
            if not (is_isomorphic(P0, _as_module(M, P)) and is_isomorphic(N0, _as_module(M, N))):
                ok = False
                break
    return BruteDecomposition(tuple(pairs), ok)


# ---------------------------------------------------------------------------
# annihilator conditions


def _idempotent_ideals(R: FiniteRing) -> set:
    return {R.principal_right_ideal(e) for e in R.idempotents()}


def is_rickart(R: FiniteRing) -> bool:
    """Every element's right annihilator is ``eR`` for an idempotent ``e``."""
    ideals = _idempotent_ideals(R)
    return all(R.right_annihilator([a]) in ideals for a in range(R.size))


def is_baer(R: FiniteRing) -> bool:
    """Every intersection of element right annihilators is ``eR``."""
    ideals = _idempotent_ideals(R)
    found = {R.right_annihilator([a]) for a in range(R.size)}
    frontier = list(found)
    while frontier:
        nxt = []
        for A in frontier:
            for B in list(found):
                C = A & B
                if C not in found:
                    found.add(C)
                    nxt.append(C)
        frontier = nxt
    return all(A in ideals for A in found)


# ---------------------------------------------------------------------------
# group structure and module enumeration


def abelian_type(M: FiniteModule) -> dict:
    """``{p: exponents}`` of the underlying abelian group, exponents descending."""
    out = {}
    for p in sorted(factorint(M.size)):
        # logs[j] = log_p #{x : p^j x = 0} = sum_i min(e_i, j)
        logs = [0]
        while True:
            killed = int((M.multiple(p ** len(logs)) == 0).sum())
            logs.append(round(math.log(killed, p)))
            if logs[-1] == logs[-2]:
                break
        ge = [logs[j] - logs[j - 1] for j in range(1, len(logs))] + [0]
        exps = []
        for j in range(len(ge) - 1, 0, -1):
            exps += [j] * (ge[j - 1] - ge[j])
        out[p] = tuple(exps)
    return out


def enumerate_modules(R: FiniteRing, max_size: int = 16) -> list[FiniteModule]:
    """Representatives of all isomorphism classes of right modules with at most
    ``max_size`` elements.

    Every finite module is reached from 0 by repeatedly adjoining one
    generator: ``M = (N + R) / {(-phi(i), i) : i in I}`` for a right ideal ``I``
    and a homomorphism ``phi: I -> N``.
    """
    RR = regular_module(R)
    ideals = enumerate_submodules(RR).submodules
    zero = FiniteModule(R, [[0]], [[0] * R.size], ["0"], "0", check=False)
    reps = [zero]
    queue = [zero]
    while queue:
        N = queue.pop(0)
        for I in ideals:
            size = N.size * (R.size // I.bit_count())
            if I == RR.full or size > max_size:
                continue
            Imod, incl = RR.submodule(I)
            S = direct_sum(N, RR)
            for phi in iter_homs(Imod, N):
                # element (n, r) sits at index n * |R| + r
                K = mask_of(N.neg[phi] * R.size + incl)
                Mnew, _ = S.quotient(K)
                Mnew.verify_axioms()
                if not any(is_isomorphic(Mnew, X) for X in reps if X.fingerprint == Mnew.fingerprint):
                    Mnew.name = f"M{len(reps)}"
                    reps.append(Mnew)
                    queue.append(Mnew)
    return reps
