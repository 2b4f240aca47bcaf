"""Computable commutative ring engines.

Three engines are supported:

* :class:`Integers` -- arbitrary-precision integers (a Euclidean domain).
* :class:`IntegersMod` -- residues modulo ``n`` (a principal ideal ring with
  zero divisors when ``n`` is composite).
* :class:`PolynomialsOverPrimeField` -- ``F_p[x]`` with elements stored as
  coefficient tuples, lowest degree first, with no trailing zeros.

Every engine stores elements in a canonical form, so ``==`` on elements is
element equality.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Any, Tuple

from sympy import factorint, isprime

Poly = Tuple[int, ...]


class RingEngine:
    """Common interface; concrete engines override what they support."""

    is_domain = False
    name = "?"

    # -- arithmetic -----------------------------------------------------
    def zero(self) -> Any:
        raise NotImplementedError

    def one(self) -> Any:
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        return a == self.zero()

    def is_unit(self, a) -> bool:
        raise NotImplementedError

    def inverse(self, a):
        raise NotImplementedError

    def from_int(self, k: int):
        raise NotImplementedError

    # -- Euclidean structure (domains only) -----------------------------
    def measure(self, a) -> int:
        raise TypeError(f"{self.name} is not a Euclidean domain")

    def divmod(self, a, b):
        raise TypeError(f"{self.name} is not a Euclidean domain")

    def canonical_associate(self, a):
        """Return ``(c, u)`` with ``c = u * a`` canonical and ``u`` a unit."""
        raise TypeError(f"{self.name} is not a Euclidean domain")

    def gcdex(self, a, b):
        """Return ``(g, s, t)`` with ``g = s*a + t*b`` the canonical gcd."""
        r0, r1 = a, b
        s0, s1 = self.one(), self.zero()
        t0, t1 = self.zero(), self.one()
        while not self.is_zero(r1):
            q, r = self.divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, self.sub(s0, self.mul(q, s1))
            t0, t1 = t1, self.sub(t0, self.mul(q, t1))
        g, u = self.canonical_associate(r0)
        return g, self.mul(u, s0), self.mul(u, t0)

    def exact_div(self, a, b):
        """``a / b`` when ``b`` divides ``a``, else ``None``."""
        if self.is_zero(b):
            return self.zero() if self.is_zero(a) else None
        q, r = self.divmod(a, b)
        return q if self.is_zero(r) else None

    def reduce_mod(self, a, b):
        """Canonical remainder of ``a`` modulo a nonzero ``b``."""
        return self.divmod(a, b)[1]

    # -- misc -----------------------------------------------------------
    def random_element(self, rng: random.Random, bound: int = 9):
        raise NotImplementedError

    def parse_element(self, obj):
        raise NotImplementedError

    def to_json(self, a):
        return a

    def format_element(self, a) -> str:
        return str(a)

    def header(self) -> str:
        """Engine header as used in presentation files."""
        raise NotImplementedError


@dataclass(frozen=True)
class Integers(RingEngine):
    is_domain = True
    name = "Z"

    def zero(self):
        return 0

    def one(self):
        return 1

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def is_zero(self, a):
        return a == 0

    def is_unit(self, a):
        return a in (1, -1)

    def inverse(self, a):
        if a not in (1, -1):
            raise ZeroDivisionError(f"{a} is not a unit in Z")
        return a

    def from_int(self, k):
        return int(k)

    def measure(self, a):
        return abs(a)

    def divmod(self, a, b):
        # Remainder in [0, |b|), so that reduction modulo a pivot is canonical.
        q, r = divmod(a, b)
        if r < 0:
            r += abs(b)
            q = (a - r) // b
        return q, r

    def canonical_associate(self, a):
        return (-a, -1) if a < 0 else (a, 1)

    def random_element(self, rng, bound=9):
        return rng.randint(-bound, bound)

    def parse_element(self, obj):
        if isinstance(obj, bool) or not isinstance(obj, int):
            raise ValueError(f"integer entry expected, got {obj!r}")
        return obj

    def header(self):
        return "int"


@dataclass(frozen=True)
class IntegersMod(RingEngine):
    n: int

    is_domain = False

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise ValueError("IntegersMod needs a modulus n >= 2")

    @property
    def name(self):
        return f"Z/{self.n}"

    def zero(self):
        return 0

    def one(self):
        return 1 % self.n

    def add(self, a, b):
        return (a + b) % self.n

    def sub(self, a, b):
        return (a - b) % self.n

    def neg(self, a):
        return (-a) % self.n

    def mul(self, a, b):
        return (a * b) % self.n

    def is_zero(self, a):
        return a == 0

    def is_unit(self, a):
        return math.gcd(a, self.n) == 1

    def inverse(self, a):
        return pow(a, -1, self.n)

    def from_int(self, k):
        return int(k) % self.n

    def prime_powers(self) -> list[tuple[int, int]]:
        """``[(p, k), ...]`` with ``n = prod p**k``, primes ascending."""
        return sorted(factorint(self.n).items())

    def random_element(self, rng, bound=9):
        return rng.randrange(self.n)

    def parse_element(self, obj):
        if isinstance(obj, bool) or not isinstance(obj, int):
            raise ValueError(f"integer entry expected, got {obj!r}")
        return obj % self.n

    def header(self):
        return f"mod {self.n}"


def _trim(coeffs) -> Poly:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class PolynomialsOverPrimeField(RingEngine):
    p: int

    is_domain = True

    def __post_init__(self):
        if not isinstance(self.p, int) or not isprime(self.p):
            raise ValueError(f"{self.p!r} is not a prime")

    @property
    def name(self):
        return f"F{self.p}[x]"

    def poly(self, coeffs) -> Poly:
        return _trim(c % self.p for c in coeffs)

    def zero(self):
        return ()

    def one(self):
        return (1,)

    def is_zero(self, a):
        return not a

    def add(self, a, b):
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = (out[i] + c) % self.p
        return _trim(out)

    def neg(self, a):
        return tuple((-c) % self.p for c in a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if not a or not b:
            return ()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return _trim(c % self.p for c in out)

    def is_unit(self, a):
        return len(a) == 1

    def inverse(self, a):
        if len(a) != 1:
            raise ZeroDivisionError(f"{a} is not a unit in {self.name}")
        return (pow(a[0], -1, self.p),)

    def from_int(self, k):
        return self.poly([k])

    def degree(self, a) -> int:
        return len(a) - 1

    def measure(self, a):
        return len(a) - 1

    def divmod(self, a, b):
        if not b:
            raise ZeroDivisionError("polynomial division by zero")
        p = self.p
        r = list(a)
        db = len(b) - 1
        inv = pow(b[-1], -1, p)
        q = [0] * max(len(a) - db, 0)
        for i in range(len(a) - 1, db - 1, -1):
            c = r[i] % p
            if c:
                f = (c * inv) % p
                q[i - db] = f
                for j, bc in enumerate(b):
                    r[i - db + j] = (r[i - db + j] - f * bc) % p
        return _trim(q), _trim(x % p for x in r[:db])

    def canonical_associate(self, a):
        if not a:
            return (), (1,)
        u = pow(a[-1], -1, self.p)
        return self.mul(a, (u,)), (u,)

    def random_element(self, rng, bound=9, max_degree=2):
        return self.poly(rng.randint(-bound, bound) for _ in range(max_degree + 1))

    def parse_element(self, obj):
        if isinstance(obj, bool):
            raise ValueError(f"polynomial entry expected, got {obj!r}")
        if isinstance(obj, int):
            return self.poly([obj])
        if isinstance(obj, (list, tuple)) and all(
            isinstance(c, int) and not isinstance(c, bool) for c in obj
        ):
            return self.poly(obj)
        raise ValueError(f"polynomial entry must be a coefficient list, got {obj!r}")

    def to_json(self, a):
        return list(a)

    def format_element(self, a):
        if not a:
            return "0"
        terms = []
        for i in range(len(a) - 1, -1, -1):
            c = a[i]
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                mon = "x" if i == 1 else f"x^{i}"
                terms.append(mon if c == 1 else f"{c}{mon}")
        return "+".join(terms)

    def header(self):
        return f"poly {self.p}"


def parse_engine(text: str) -> RingEngine:
    """Parse an engine header: ``int``, ``mod N`` or ``poly P``.

    A few aliases are accepted (``Z``, ``Integers``, ``IntegersMod(N)``,
    ``zmod N``, ``F5[x]``).
    """
    t = text.strip()
    low = t.lower().replace("(", " ").replace(")", " ").replace("/", " ")
    parts = low.split()
    if not parts:
        raise ValueError("empty engine header")
    head = parts[0]
    if head in ("int", "z", "integers", "zz") and len(parts) == 1:
        return Integers()
    if head in ("mod", "zmod", "integersmod") and len(parts) == 2:
        return IntegersMod(int(parts[1]))
    if head in ("z",) and len(parts) == 2:
        return IntegersMod(int(parts[1]))
    if head in ("poly", "polynomialsoverprimefield") and len(parts) == 2:
        return PolynomialsOverPrimeField(int(parts[1]))
    if head.startswith("f") and head.endswith("[x]") and head[1:-3].isdigit():
        return PolynomialsOverPrimeField(int(head[1:-3]))
    raise ValueError(f"unknown engine header {text!r}")
