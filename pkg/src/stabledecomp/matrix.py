"""Immutable dense matrices over a :class:`~stabledecomp.rings.RingEngine`."""

from __future__ import annotations

from typing import Iterable, Sequence

from .rings import RingEngine


class Matrix:
    """An ``rows x cols`` matrix; either dimension may be zero."""

    __slots__ = ("engine", "rows", "cols", "_data")

    def __init__(self, engine: RingEngine, rows: int, cols: int, data: Iterable[Iterable]):
        self.engine = engine
        self.rows = rows
        self.cols = cols
        self._data = tuple(tuple(r) for r in data)
        if len(self._data) != rows or any(len(r) != cols for r in self._data):
            raise ValueError(f"matrix data does not match shape {rows}x{cols}")

    # -- constructors ---------------------------------------------------
    @classmethod
    def from_rows(cls, engine: RingEngine, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(engine, len(rows), cols, rows)

    @classmethod
    def from_ints(cls, engine: RingEngine, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        """Build from raw entries, coercing through ``engine.parse_element``."""
        return cls.from_rows(engine, [[engine.parse_element(x) for x in r] for r in rows], cols)

    @classmethod
    def from_columns(cls, engine: RingEngine, columns: Sequence[Sequence], rows: int) -> "Matrix":
        columns = list(columns)
        data = [[columns[j][i] for j in range(len(columns))] for i in range(rows)]
        return cls(engine, rows, len(columns), data)

    @classmethod
    def zeros(cls, engine: RingEngine, rows: int, cols: int) -> "Matrix":
        z = engine.zero()
        return cls(engine, rows, cols, [[z] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, engine: RingEngine, n: int) -> "Matrix":
        z, o = engine.zero(), engine.one()
        return cls(engine, n, n, [[o if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, engine: RingEngine, entries: Sequence, rows: int | None = None,
                 cols: int | None = None) -> "Matrix":
        k = len(entries)
        rows = k if rows is None else rows
        cols = k if cols is None else cols
        z = engine.zero()
        data = [[z] * cols for _ in range(rows)]
        for i, d in enumerate(entries):
            data[i][i] = d
        return cls(engine, rows, cols, data)

    # -- access ---------------------------------------------------------
    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> tuple:
        return self._data[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self._data)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.cols)]

    def to_lists(self) -> list[list]:
        return [list(r) for r in self._data]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.engine == other.engine
            and self.shape == other.shape
            and self._data == other._data
        )

    def __hash__(self):
        return hash((self.engine, self.rows, self.cols, self._data))

    def __repr__(self):
        body = [[self.engine.format_element(x) for x in r] for r in self._data]
        return f"Matrix({self.engine.name}, {self.rows}x{self.cols}, {body})"

    def is_zero(self) -> bool:
        return all(self.engine.is_zero(x) for r in self._data for x in r)

    # -- algebra --------------------------------------------------------
    @property
    def T(self) -> "Matrix":
        return Matrix(self.engine, self.cols, self.rows,
                      [[self._data[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        e = self.engine
        add, mul, z = e.add, e.mul, e.zero()
        ocols = other.columns()
        data = []
        for r in self._data:
            out = []
            for c in ocols:
                acc = z
                for x, y in zip(r, c):
                    if not e.is_zero(x) and not e.is_zero(y):
                        acc = add(acc, mul(x, y))
                out.append(acc)
            data.append(out)
        return Matrix(e, self.rows, other.cols, data)

    def apply(self, vector: Sequence) -> tuple:
        """Matrix-vector product."""
        if len(vector) != self.cols:
            raise ValueError("dimension mismatch")
        e = self.engine
        out = []
        for r in self._data:
            acc = e.zero()
            for x, y in zip(r, vector):
                acc = e.add(acc, e.mul(x, y))
            out.append(acc)
        return tuple(out)

    def hstack(self, *others: "Matrix") -> "Matrix":
        mats = (self,) + others
        if any(m.rows != self.rows for m in mats):
            raise ValueError("hstack needs equal row counts")
        data = [sum((list(m._data[i]) for m in mats), []) for i in range(self.rows)]
        return Matrix(self.engine, self.rows, sum(m.cols for m in mats), data)

    def vstack(self, *others: "Matrix") -> "Matrix":
        mats = (self,) + others
        if any(m.cols != self.cols for m in mats):
            raise ValueError("vstack needs equal column counts")
        data = [r for m in mats for r in m._data]
        return Matrix(self.engine, len(data), self.cols, data)

    def block_diag(self, other: "Matrix") -> "Matrix":
        z = self.engine.zero()
        data = [list(r) + [z] * other.cols for r in self._data]
        data += [[z] * self.cols + list(r) for r in other._data]
        return Matrix(self.engine, self.rows + other.rows, self.cols + other.cols, data)

    def kron(self, other: "Matrix") -> "Matrix":
        """Kronecker product; row index ``(i, s)`` is ``i * other.rows + s``."""
        e = self.engine
        rows, cols = self.rows * other.rows, self.cols * other.cols
        data = [[e.zero()] * cols for _ in range(rows)]
        for i in range(self.rows):
            for j in range(self.cols):
                a = self._data[i][j]
                if e.is_zero(a):
                    continue
                for s in range(other.rows):
                    for t in range(other.cols):
                        data[i * other.rows + s][j * other.cols + t] = e.mul(a, other._data[s][t])
        return Matrix(e, rows, cols, data)

    def select_columns(self, idx: Sequence[int]) -> "Matrix":
        return Matrix(self.engine, self.rows, len(idx), [[r[j] for j in idx] for r in self._data])

    def select_rows(self, idx: Sequence[int]) -> "Matrix":
        return Matrix(self.engine, len(idx), self.cols, [self._data[i] for i in idx])

    def nonzero_columns(self) -> "Matrix":
        e = self.engine
        keep = [j for j in range(self.cols) if any(not e.is_zero(r[j]) for r in self._data)]
        return self.select_columns(keep)

    def lift(self, engine: RingEngine) -> "Matrix":
        """Reinterpret residue entries in another engine (``Z/n`` -> ``Z``)."""
        return Matrix(engine, self.rows, self.cols, [[engine.from_int(x) for x in r] for r in self._data])

    def to_json(self) -> list:
        return [[self.engine.to_json(x) for x in r] for r in self._data]
