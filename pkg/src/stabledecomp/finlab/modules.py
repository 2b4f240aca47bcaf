"""Finite right modules over :class:`FiniteRing`, stored as tables.

Submodules are represented as Python ``int`` bitmasks over element indices,
which keeps lattice operations cheap and hashable.
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .rings import CAPS, AxiomError, CapExceeded, FiniteRing


def mask_of(indices: Iterable[int]) -> int:
    arr = np.zeros(0, dtype=bool)
    idx = np.fromiter(indices, dtype=np.int64)
    if idx.size:
        arr = np.zeros(int(idx.max()) + 1, dtype=bool)
        arr[idx] = True
    return int.from_bytes(np.packbits(arr, bitorder="little").tobytes(), "little")


def members(mask: int) -> np.ndarray:
    if mask == 0:
        return np.zeros(0, dtype=np.int64)
    raw = np.frombuffer(mask.to_bytes((mask.bit_length() + 7) // 8, "little"), dtype=np.uint8)
    return np.flatnonzero(np.unpackbits(raw, bitorder="little")).astype(np.int64)


class FiniteModule:
    """A right ``R``-module; ``act[x, r]`` is the index of ``x * r``."""

    def __init__(self, ring: FiniteRing, add, act, labels: Sequence[str] | None = None,
                 name: str = "M", check: bool = True):
        self.ring = ring
        self.add = np.asarray(add, dtype=np.int64)
        self.act = np.asarray(act, dtype=np.int64)
        self.size = self.add.shape[0]
        if self.size > CAPS["module"]:
            raise CapExceeded(f"module of size {self.size} exceeds cap {CAPS['module']}")
        self.labels = list(labels) if labels is not None else [str(i) for i in range(self.size)]
        self.name = name
        self.neg = np.argmin(self.add, axis=1)
        if check:
            self.verify_axioms()

    def verify_axioms(self) -> None:
        n, R = self.size, self.ring
        A, X = self.add, self.act
        ar = np.arange(n)
        if A.shape != (n, n) or X.shape != (n, R.size):
            raise AxiomError("table shapes do not match")
        if not (A[0] == ar).all() or not (A == A.T).all() or not (A[ar, self.neg] == 0).all():
            raise AxiomError("not an abelian group with identity at index 0")
        for a in range(n):
            if not (A[A[a]] == A[a][A]).all():
                raise AxiomError("addition is not associative")
        if not (X[:, 1] == ar).all():
            raise AxiomError("the ring identity does not act trivially")
        # (x + y) r = x r + y r
        for r in range(R.size):
            if not (X[:, r][A] == A[np.ix_(X[:, r], X[:, r])]).all():
                raise AxiomError("action is not additive in the module argument")
        # x (r + s) = x r + x s  and  x (r s) = (x r) s
        for x in range(n):
            row = X[x]
            if not (row[R.add] == A[np.ix_(row, row)]).all():
                raise AxiomError("action is not additive in the ring argument")
            if not (row[R.mul] == X[row]).all():
                raise AxiomError("action is not associative")

    def __repr__(self):
        return f"FiniteModule({self.name} over {self.ring.name}, {self.size} elements)"

    @property
    def full(self) -> int:
        return (1 << self.size) - 1

    # -- submodule arithmetic -------------------------------------------
    def cyclic(self, x: int) -> int:
        return mask_of(self.act[x])

    def span(self, seed: Iterable[int]) -> int:
        """Smallest submodule containing the given elements."""
        S = mask_of([0])
        for x in seed:
            S = self.sum(S, self.cyclic(int(x)))
        return S

    def sum(self, a: int, b: int) -> int:
        if a & ~b == 0:
            return b
        if b & ~a == 0:
            return a
        ia, ib = members(a), members(b)
        return mask_of(self.add[np.ix_(ia, ib)].ravel())

    def is_submodule(self, mask: int) -> bool:
        idx = members(mask)
        if idx.size == 0 or idx[0] != 0:
            return False
        return mask_of(self.add[np.ix_(idx, idx)].ravel()) | mask == mask and \
            mask_of(self.act[idx].ravel()) | mask == mask

    def multiple(self, k: int) -> np.ndarray:
        """``k * x`` for every element, by repeated addition."""
        out = np.zeros(self.size, dtype=np.int64)
        ar = np.arange(self.size)
        for _ in range(k):
            out = self.add[out, ar]
        return out

    # -- derived modules -------------------------------------------------
    def submodule(self, mask: int, name: str = "K") -> tuple["FiniteModule", np.ndarray]:
        """The submodule as a module in its own right, plus the inclusion map."""
        idx = members(mask)
        pos = np.full(self.size, -1, dtype=np.int64)
        pos[idx] = np.arange(idx.size)
        add = pos[self.add[np.ix_(idx, idx)]]
        act = pos[self.act[idx]]
        if (add < 0).any() or (act < 0).any():
            raise AxiomError("subset is not a submodule")
        return FiniteModule(self.ring, add, act, [self.labels[i] for i in idx], name, check=False), idx

    def quotient(self, mask: int, name: str = "M/K") -> tuple["FiniteModule", np.ndarray]:
        """``M/K`` plus the projection map."""
        if not self.is_submodule(mask):
            raise AxiomError("quotient by a non-submodule")
        K = members(mask)
        reps = self.add[:, K].min(axis=1)
        classes = np.unique(reps)
        pos = np.full(self.size, -1, dtype=np.int64)
        pos[classes] = np.arange(classes.size)
        proj = pos[reps]
        add = proj[self.add[np.ix_(classes, classes)]]
        act = proj[self.act[classes]]
        labels = [self.labels[c] + "+K" for c in classes]
        return FiniteModule(self.ring, add, act, labels, name, check=False), proj

    @cached_property
    def fingerprint(self) -> tuple:
        """Isomorphism-invariant summary used to prune isomorphism tests."""
        cyc = sorted(self.cyclic(x).bit_count() for x in range(self.size))
        orders = []
        for x in range(self.size):
            k, y = 1, x
            while y != 0:
                y = int(self.add[y, x])
                k += 1
            orders.append(k)
        return self.size, tuple(cyc), tuple(sorted(orders))

    def element_profile(self, x: int) -> tuple:
        k, y = 1, x
        while y != 0:
            y = int(self.add[y, x])
            k += 1
        return self.cyclic(x).bit_count(), k


def regular_module(R: FiniteRing) -> FiniteModule:
    return FiniteModule(R, R.add, R.mul, R.labels, f"{R.name}_{R.name}", check=False)


def free_module(R: FiniteRing, k: int) -> FiniteModule:
    """``R^k`` with elements encoded in base ``|R|`` (first coordinate most significant)."""
    size = R.size ** k
    if size > CAPS["module"]:
        raise CapExceeded(f"free module of size {size} exceeds cap {CAPS['module']}")
    digits = _decode(np.arange(size), R.size, k)
    add = _encode(R.add[digits[:, None, :], digits[None, :, :]], R.size)
    act = _encode(np.stack([R.mul[digits, r] for r in range(R.size)], axis=1), R.size)
    labels = ["(" + ",".join(R.labels[d] for d in row) + ")" for row in digits]
    return FiniteModule(R, add, act, labels, f"{R.name}^{k}", check=False)


def _decode(codes: np.ndarray, base: int, k: int) -> np.ndarray:
    out = np.empty(codes.shape + (k,), dtype=np.int64)
    c = codes.copy()
    for i in range(k - 1, -1, -1):
        out[..., i] = c % base
        c //= base
    return out


def _encode(digits: np.ndarray, base: int) -> np.ndarray:
    out = np.zeros(digits.shape[:-1], dtype=np.int64)
    for i in range(digits.shape[-1]):
        out = out * base + digits[..., i]
    return out


def direct_sum(M: FiniteModule, N: FiniteModule) -> FiniteModule:
    """``M + N`` with element ``(m, n)`` at index ``m * |N| + n``."""
    if M.ring is not N.ring:
        raise AxiomError("direct sum of modules over different rings")
    if M.size * N.size > CAPS["module"]:
        raise CapExceeded(f"module of size {M.size * N.size} exceeds cap {CAPS['module']}")
    m = np.repeat(np.arange(M.size), N.size)
    n = np.tile(np.arange(N.size), M.size)
    add = M.add[m[:, None], m[None, :]] * N.size + N.add[n[:, None], n[None, :]]
    act = M.act[m] * N.size + N.act[n]
    labels = [f"({M.labels[a]},{N.labels[b]})" for a, b in zip(m, n)]
    return FiniteModule(M.ring, add, act, labels, f"{M.name}+{N.name}", check=False)


def module_from_relations(R: FiniteRing, generators: int, columns: Sequence[Sequence[int]]) -> FiniteModule:
    """``R^m`` modulo the right submodule spanned by the given columns.

    Column entries are ring element indices.
    """
    F = free_module(R, generators)
    codes = [int(_encode(np.array(col, dtype=np.int64), R.size)) if generators else 0 for col in columns]
    K = F.span(codes)
    Q, _ = F.quotient(K, "Coker")
    return Q


def module_from_int_relations(R: FiniteRing, generators: int, columns: Sequence[Sequence[int]]) -> FiniteModule:
    """Like :func:`module_from_relations` for ``R = Z/n`` built by ``integers_mod``.

    Integer entries are reduced mod ``n``; there element index ``i`` is the residue ``i``.
    """
    n = R.size
    if R.labels != [str(i) for i in range(n)]:
        raise AxiomError("integer relations need a ring built by integers_mod")
    return module_from_relations(R, generators, [[int(x) % n for x in col] for col in columns])
