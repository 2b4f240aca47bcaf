"""Finite rings given by explicit addition and multiplication tables.

Elements are indexed ``0..N-1`` with index 0 the zero and index 1 the one.
Every constructor verifies the ring axioms over the full tables.
"""

from __future__ import annotations

import itertools
import os
import re
from typing import Callable, Hashable, Sequence

import numpy as np
from sympy import isprime


class CapExceeded(RuntimeError):
    """An exhaustive computation would exceed a configured size cap."""


class AxiomError(ValueError):
    pass


def _env_caps() -> dict:
    caps = {"ring": 512, "module": 256, "endo": 2 ** 20}
    raw = os.environ.get("STABLEDECOMP_CAPS", "")
    for item in filter(None, (s.strip() for s in raw.split(","))):
        key, _, val = item.partition("=")
        if key.strip() in caps:
            caps[key.strip()] = int(val)
    return caps


CAPS = _env_caps()


class FiniteRing:
    def __init__(self, add, mul, labels: Sequence[str], name: str = "R", check: bool = True):
        self.add = np.asarray(add, dtype=np.int64)
        self.mul = np.asarray(mul, dtype=np.int64)
        self.labels = list(labels)
        self.name = name
        self.size = len(self.labels)
        if self.size > CAPS["ring"]:
            raise CapExceeded(f"ring of size {self.size} exceeds cap {CAPS['ring']}")
        if self.add.shape != (self.size, self.size) or self.mul.shape != (self.size, self.size):
            raise AxiomError("table shape does not match the element count")
        self.neg = np.argmin(self.add, axis=1)  # index 0 is zero, so x + neg[x] = 0
        self.commutative = bool((self.mul == self.mul.T).all())
        if check:
            self.verify_axioms()
        self._units = None

    @classmethod
    def from_operations(cls, elements: Sequence[Hashable], add: Callable, mul: Callable, zero, one,
                        name: str, label: Callable = str) -> "FiniteRing":
        """Tabulate ``add``/``mul`` on ``elements``; reorders so zero, one come first."""
        if len(elements) > CAPS["ring"]:
            raise CapExceeded(f"ring of size {len(elements)} exceeds cap {CAPS['ring']}")
        rest = [x for x in elements if x != zero and x != one]
        if zero == one:
            raise AxiomError("the zero ring is not supported")
        order = [zero, one] + rest
        index = {x: i for i, x in enumerate(order)}
        if len(index) != len(order):
            raise AxiomError("duplicate elements")
        n = len(order)
        A = np.empty((n, n), dtype=np.int64)
        M = np.empty((n, n), dtype=np.int64)
        try:
            for i, x in enumerate(order):
                for j, y in enumerate(order):
                    A[i, j] = index[add(x, y)]
                    M[i, j] = index[mul(x, y)]
        except KeyError as exc:
            raise AxiomError(f"operation leaves the element set: {exc}") from None
        ring = cls(A, M, [label(x) for x in order], name)
        ring.elements = order
        ring.index = index
        return ring

    def verify_axioms(self) -> None:
        n = self.size
        A, M = self.add, self.mul
        ar = np.arange(n)
        if not (A[0] == ar).all() or not (A[:, 0] == ar).all():
            raise AxiomError("index 0 is not an additive identity")
        if not (M[1] == ar).all() or not (M[:, 1] == ar).all():
            raise AxiomError("index 1 is not a multiplicative identity")
        if not (A == A.T).all():
            raise AxiomError("addition is not commutative")
        if not (A[ar, self.neg] == 0).all():
            raise AxiomError("missing additive inverses")
        for a in range(n):
            # (a+b)+c = a+(b+c);  (ab)c = a(bc);  a(b+c) = ab+ac;  (b+c)a = ba+ca
            if not (A[A[a]] == A[a][A]).all():
                raise AxiomError("addition is not associative")
            if not (M[M[a]] == M[a][M]).all():
                raise AxiomError("multiplication is not associative")
            if not (M[a][A] == A[M[a]][:, M[a]]).all():
                raise AxiomError("left distributivity fails")
            if not (M[:, a][A] == A[M[:, a]][:, M[:, a]]).all():
                raise AxiomError("right distributivity fails")

    # -- element queries ------------------------------------------------
    @property
    def units(self) -> np.ndarray:
        if self._units is None:
            self._units = np.flatnonzero(((self.mul == 1) & (self.mul.T == 1)).any(axis=1))
        return self._units

    def is_unit(self, x: int) -> bool:
        return bool(((self.mul[x] == 1) & (self.mul[:, x] == 1)).any())

    def idempotents(self) -> list[int]:
        return [int(x) for x in range(self.size) if self.mul[x, x] == x]

    def sub(self, a, b):
        return self.add[a, self.neg[b]]

    def principal_right_ideal(self, x: int) -> frozenset:
        return frozenset(int(v) for v in self.mul[x])

    def right_annihilator(self, subset) -> frozenset:
        subset = list(subset)
        if not subset:
            return frozenset(range(self.size))
        ok = (self.mul[subset] == 0).all(axis=0)
        return frozenset(int(v) for v in np.flatnonzero(ok))

    def ideal_subsets(self) -> list[frozenset]:
        """All two-sided ideals (brute force over additive closures of principal ideals)."""
        found = {frozenset([0])}
        frontier = list(found)
        gens = [self._two_sided_closure({x}) for x in range(self.size)]
        while frontier:
            nxt = []
            for I in frontier:
                for g in gens:
                    if not g <= I:
                        J = self._two_sided_closure(I | g)
                        if J not in found:
                            found.add(J)
                            nxt.append(J)
            frontier = nxt
        return sorted(found, key=lambda s: (len(s), sorted(s)))

    def _two_sided_closure(self, seed) -> frozenset:
        S = set(seed) | {0}
        while True:
            idx = np.fromiter(S, dtype=np.int64)
            new = set(self.add[np.ix_(idx, idx)].ravel().tolist())
            new |= set(self.mul[idx].ravel().tolist())
            new |= set(self.mul[:, idx].ravel().tolist())
            if new <= S:
                return frozenset(S)
            S |= new

    def maximal_ideals(self) -> list[frozenset]:
        ideals = [I for I in self.ideal_subsets() if len(I) < self.size]
        return [I for I in ideals if not any(I < J for J in ideals)]

    def __repr__(self):
        return f"FiniteRing({self.name}, {self.size} elements)"


# ---------------------------------------------------------------------------
# constructions


def integers_mod(n: int) -> FiniteRing:
    if n < 2:
        raise AxiomError("modulus must be at least 2")
    return FiniteRing.from_operations(
        list(range(n)), lambda a, b: (a + b) % n, lambda a, b: (a * b) % n, 0, 1, f"Z/{n}"
    )


def product(*rings: FiniteRing) -> FiniteRing:
    elems = list(itertools.product(*[range(R.size) for R in rings]))
    zero = tuple(0 for _ in rings)
    one = tuple(1 for _ in rings)

    def add(x, y):
        return tuple(int(R.add[a, b]) for R, a, b in zip(rings, x, y))

    def mul(x, y):
        return tuple(int(R.mul[a, b]) for R, a, b in zip(rings, x, y))

    def label(x):
        return "(" + ",".join(R.labels[a] for R, a in zip(rings, x)) + ")"

    return FiniteRing.from_operations(elems, add, mul, zero, one, " x ".join(R.name for R in rings), label)


def power(R: FiniteRing, k: int) -> FiniteRing:
    ring = product(*([R] * k))
    ring.name = f"({R.name})^{k}"
    return ring


def poly_quotient(p: int, modulus: Sequence[int]) -> FiniteRing:
    """``F_p[x]/(f)`` with ``f`` given by coefficients, lowest degree first."""
    if not isprime(p):
        raise AxiomError(f"F_{p}: {p} is not prime")
    f = [c % p for c in modulus]
    while f and f[-1] == 0:
        f.pop()
    d = len(f) - 1
    if d < 1:
        raise AxiomError("modulus polynomial must have positive degree")
    inv = pow(f[-1], -1, p)
    f = [(c * inv) % p for c in f]
    elems = list(itertools.product(range(p), repeat=d))

    def add(a, b):
        return tuple((x + y) % p for x, y in zip(a, b))

    def mul(a, b):
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                prod[i + j] += x * y
        for i in range(len(prod) - 1, d - 1, -1):
            c = prod[i] % p
            if c:
                for j in range(d + 1):
                    prod[i - d + j] -= c * f[j]
        return tuple(c % p for c in prod[:d])

    def label(a):
        terms = [(c, i) for i, c in enumerate(a) if c]
        if not terms:
            return "0"
        return "+".join(str(c) if i == 0 else (f"{'' if c == 1 else c}x" + (f"^{i}" if i > 1 else ""))
                        for c, i in terms)

    zero = tuple([0] * d)
    one = tuple([1] + [0] * (d - 1))
    fname = "+".join(f"{c}x^{i}" for i, c in enumerate(f) if c)
    return FiniteRing.from_operations(elems, add, mul, zero, one, f"F{p}[x]/({fname})", label)


def quotient_ring(R: FiniteRing, ideal) -> tuple[FiniteRing, np.ndarray]:
    """``R/I`` for a two-sided ideal; also returns the projection as an index array."""
    I = np.array(sorted(ideal), dtype=np.int64)
    reps = R.add[:, I].min(axis=1)
    classes = sorted(set(reps.tolist()))
    if 1 not in classes and reps[1] == 0:
        raise AxiomError("quotient by the whole ring")
    order = [0, int(reps[1])] + [c for c in classes if c not in (0, int(reps[1]))]
    pos = {c: i for i, c in enumerate(order)}
    proj = np.array([pos[int(r)] for r in reps], dtype=np.int64)
    reps_arr = np.array(order, dtype=np.int64)
    A = proj[R.add[np.ix_(reps_arr, reps_arr)]]
    M = proj[R.mul[np.ix_(reps_arr, reps_arr)]]
    Q = FiniteRing(A, M, [R.labels[c] + "+I" for c in order], f"{R.name}/I")
    return Q, proj


def idealization(R: FiniteRing, T=None) -> FiniteRing:
    """``R x S`` with ``(r,s)(r',s') = (rr', rs' + sr')`` for ``S = R/T``.

    ``T`` is a maximal ideal (a set of indices, or an index into
    :meth:`FiniteRing.maximal_ideals`); default is the first maximal ideal.
    """
    maximal = R.maximal_ideals()
    if T is None:
        T = maximal[0]
    elif isinstance(T, int):
        T = maximal[T]
    T = frozenset(T)
    if T not in maximal:
        raise AxiomError("T must be a maximal ideal")
    S, proj = quotient_ring(R, T)
    elems = [(r, s) for r in range(R.size) for s in range(S.size)]

    def add(x, y):
        return int(R.add[x[0], y[0]]), int(S.add[x[1], y[1]])

    def mul(x, y):
        r, s = x
        r2, s2 = y
        return int(R.mul[r, r2]), int(S.add[S.mul[proj[r], s2], S.mul[s, proj[r2]]])

    def label(x):
        return f"({R.labels[x[0]]},{S.labels[x[1]]})"

    ring = FiniteRing.from_operations(elems, add, mul, (0, 0), (1, 0), f"{R.name} |x S", label)
    ring.base, ring.corner, ring.ideal_T = R, S, T
    return ring


def triangular(R: FiniteRing) -> FiniteRing:
    """Upper triangular ``2x2`` matrices ``[[a, b], [0, c]]`` over ``R``."""
    elems = list(itertools.product(range(R.size), repeat=3))

    def add(x, y):
        return tuple(int(R.add[a, b]) for a, b in zip(x, y))

    def mul(x, y):
        a, b, c = x
        a2, b2, c2 = y
        return int(R.mul[a, a2]), int(R.add[R.mul[a, b2], R.mul[b, c2]]), int(R.mul[c, c2])

    def label(x):
        return "[" + ",".join(R.labels[v] for v in x) + "]"

    return FiniteRing.from_operations(elems, add, mul, (0, 0, 0), (1, 0, 1), f"T2({R.name})", label)


# ---------------------------------------------------------------------------
# textual ring specs

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\[x\])|(.))")


def parse_ring_spec(text: str) -> FiniteRing:
    """Parse a ring spec.

    Grammar (whitespace-insensitive)::

        ring    := factor ('^' INT)?
        factor  := 'z' INT | 'IntegersMod(' INT ')'
                 | 'f' PRIME ('[x]/(' INT (',' INT)* ')')?
                 | 'prod(' ring (',' ring)* ')'
                 | 'idealization(' ring (',' 'T=' INT)? ')'
                 | 'tri(' ring ')'

    ``f2[x]/(0,0,1)`` is ``F_2[x]/(x^2)``: coefficients lowest degree first.
    """
    toks = [m.group(0).strip() for m in _TOKEN.finditer(text) if m.group(0).strip()]
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else None

    def take(expected=None):
        nonlocal pos
        if pos >= len(toks):
            raise ValueError(f"unexpected end of ring spec {text!r}")
        t = toks[pos]
        if expected is not None and t.lower() != expected:
            raise ValueError(f"expected {expected!r} at {t!r} in ring spec {text!r}")
        pos += 1
        return t

    def integer():
        t = take()
        if not t.isdigit():
            raise ValueError(f"expected an integer at {t!r} in ring spec {text!r}")
        return int(t)

    def ring():
        R = factor()
        if peek() == "^":
            take("^")
            R = power(R, integer())
        return R

    def factor():
        t = take()
        low = t.lower()
        m = re.fullmatch(r"z(\d+)", low)
        if m:
            return integers_mod(int(m.group(1)))
        m = re.fullmatch(r"f(\d+)", low)
        if m:
            p = int(m.group(1))
            if not isprime(p):
                raise ValueError(f"F_{p} needs a prime, in ring spec {text!r}")
            if peek() == "[x]":
                take("[x]")
                take("/")
                take("(")
                coeffs = [integer()]
                while peek() == ",":
                    take(",")
                    coeffs.append(integer())
                take(")")
                return poly_quotient(p, coeffs)
            return integers_mod(p)
        if low == "integersmod":
            take("(")
            n = integer()
            take(")")
            return integers_mod(n)
        if low == "prod":
            take("(")
            parts = [ring()]
            while peek() == ",":
                take(",")
                parts.append(ring())
            take(")")
            return product(*parts)
        if low == "idealization":
            take("(")
            base = ring()
            T = None
            if peek() == ",":
                take(",")
                take("t")
                take("=")
                T = integer()
            take(")")
            return idealization(base, T)
        if low == "tri":
            take("(")
            base = ring()
            take(")")
            return triangular(base)
        raise ValueError(f"unknown ring constructor {t!r} in {text!r}")

    R = ring()
    if pos != len(toks):
        raise ValueError(f"trailing input {toks[pos:]} in ring spec {text!r}")
    R.spec = text.strip()
    return R


def build_ring(spec) -> FiniteRing:
    """Build a ring from a spec string or a nested tuple.

    Tuples: ``("zmod", n)``, ``("product", spec, ...)``, ``("poly", p, coeffs)``,
    ``("idealization", spec[, T])``, ``("triangular", spec)``.
    """
    if isinstance(spec, str):
        return parse_ring_spec(spec)
    kind, *rest = spec
    if kind == "zmod":
        return integers_mod(*rest)
    if kind == "product":
        return product(*[build_ring(s) for s in rest])
    if kind == "poly":
        return poly_quotient(*rest)
    if kind == "idealization":
        return idealization(build_ring(rest[0]), *rest[1:])
    if kind == "triangular":
        return triangular(build_ring(rest[0]))
    raise ValueError(f"unknown ring constructor {kind!r}")
