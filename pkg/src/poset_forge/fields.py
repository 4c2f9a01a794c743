"""Concrete coefficient fields: F_q, Q, and a structural-only symbolic field.

Finite field elements are plain ints. For q = p^k with k > 1 an element is the
base-p integer whose digits are the coefficients of a polynomial reduced
modulo the least monic irreducible of degree k.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property, lru_cache

import sympy

from .errors import ParseError, SymbolicFieldUnsupported

MAX_FINITE_ORDER = 1 << 20


def prime_power(q: int) -> tuple[int, int] | None:
    if q < 2:
        return None
    factors = sympy.factorint(q)
    if len(factors) != 1:
        return None
    ((p, k),) = factors.items()
    return p, k


class Field:
    is_concrete = True
    characteristic: int

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        if e < 0:
            a, e = self.inv(a), -e
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def is_zero(self, a) -> bool:
        return a == self.zero

    def product(self, values):
        out = self.one
        for v in values:
            out = self.mul(out, v)
        return out


class FiniteField(Field):
    def __init__(self, q: int):
        pk = prime_power(q)
        if pk is None:
            raise ValueError(f"field order must be a prime power, got {q}")
        if q > MAX_FINITE_ORDER:
            raise ValueError(f"finite fields are limited to q <= 2^20, got {q}")
        self.q = q
        self.p, self.k = pk
        self.characteristic = self.p
        self.zero, self.one = 0, 1
        self.order = q
        self.modulus = _least_irreducible(self.p, self.k) if self.k > 1 else None

    def __repr__(self):
        return f"FiniteField({self.q})"

    def __str__(self):
        return f"F_{self.q}"

    def __eq__(self, other):
        return isinstance(other, FiniteField) and other.q == self.q

    def __hash__(self):
        return hash(("F", self.q))

    # arithmetic
    def add(self, a, b):
        if self.k == 1:
            return (a + b) % self.p
        return _digit_op(a, b, self.p, lambda x, y: (x + y) % self.p)

    def neg(self, a):
        if self.k == 1:
            return -a % self.p
        return _digit_op(a, 0, self.p, lambda x, _: -x % self.p)

    def mul(self, a, b):
        if self.k == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        if self.k == 1:
            return pow(a, -1, self.p)
        return self._exp[-self._log[a] % (self.q - 1)]

    # unit group: cyclic of order q - 1 generated by the least primitive element
    @cached_property
    def generator(self) -> int:
        if self.k == 1:
            return int(sympy.primitive_root(self.p)) if self.p > 2 else 1
        n = self.q - 1
        primes = list(sympy.factorint(n)) if n > 1 else []
        for g in range(1, self.q):
            if all(self._poly_pow(g, n // r) != 1 for r in primes):
                return g
        raise AssertionError("no primitive element")  # pragma: no cover

    @cached_property
    def _tables(self):
        n = self.q - 1
        exp = [0] * n
        log = [0] * self.q
        x = 1
        g = self.generator
        for i in range(n):
            exp[i] = x
            log[x] = i
            x = x * g % self.p if self.k == 1 else self._poly_mul(x, g)
        return exp, log

    @property
    def _exp(self):
        return self._tables[0]

    @property
    def _log(self):
        return self._tables[1]

    def dlog(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no discrete logarithm")
        return self._log[a]

    def exp(self, e: int) -> int:
        return self._exp[e % (self.q - 1)]

    def elements(self):
        return range(self.q)

    def units(self):
        return range(1, self.q)

    def parse(self, token: str) -> int:
        try:
            v = int(token)
        except ValueError:
            raise ParseError(f"expected an integer field element, got {token!r}")
        if self.k == 1:
            return v % self.p
        if not 0 <= v < self.q:
            raise ParseError(f"F_{self.q} elements are encoded as 0..{self.q - 1}, got {v}")
        return v

    def fmt(self, a) -> str:
        return str(a)

    def to_json(self, a):
        return a

    def coerce(self, v) -> int:
        if isinstance(v, Fraction):
            return self.div(self.coerce(v.numerator), self.coerce(v.denominator))
        if self.k == 1:
            return int(v) % self.p
        return int(v)

    # polynomial helpers for q = p^k
    def _poly_mul(self, a: int, b: int) -> int:
        p, k = self.p, self.k
        da, db = _digits(a, p, k), _digits(b, p, k)
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        mod = _digits(self.modulus, p, k + 1)
        for deg in range(2 * k - 2, k - 1, -1):
            c = prod[deg]
            if c:
                for i in range(k + 1):
                    prod[deg - k + i] = (prod[deg - k + i] - c * mod[i]) % p
        return _undigits(prod[:k], p)

    def _poly_pow(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self._poly_mul(result, a)
            a = self._poly_mul(a, a)
            e >>= 1
        return result


def _digits(a: int, p: int, n: int) -> list[int]:
    out = []
    for _ in range(n):
        a, r = divmod(a, p)
        out.append(r)
    return out


def _undigits(ds, p: int) -> int:
    v = 0
    for d in reversed(ds):
        v = v * p + d
    return v


def _digit_op(a: int, b: int, p: int, op) -> int:
    out, scale = 0, 1
    while a or b:
        a, x = divmod(a, p)
        b, y = divmod(b, p)
        out += op(x, y) * scale
        scale *= p
    return out


@lru_cache(maxsize=None)
def _least_irreducible(p: int, k: int) -> int:
    """Least monic irreducible polynomial of degree k over F_p, base-p encoded."""
    x = sympy.Symbol("x")
    for low in range(p**k):
        coeffs = _digits(low, p, k) + [1]
        poly = sympy.Poly(list(reversed(coeffs)), x, modulus=p)
        if poly.is_irreducible:
            return _undigits(coeffs, p)
    raise AssertionError("no irreducible polynomial")  # pragma: no cover


class Rationals(Field):
    characteristic = 0
    order = None

    def __init__(self):
        self.zero, self.one = Fraction(0), Fraction(1)

    def __repr__(self):
        return "Rationals()"

    def __str__(self):
        return "Q"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        return a / b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return 1 / a

    def pow(self, a, e):
        return a**e

    def parse(self, token: str) -> Fraction:
        try:
            return Fraction(token)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"expected a rational number, got {token!r}")

    def fmt(self, a) -> str:
        return str(a)

    def to_json(self, a):
        return str(a)

    def coerce(self, v) -> Fraction:
        return Fraction(v)

    @staticmethod
    def unit_exponents(a: Fraction) -> tuple[int, dict[int, int]]:
        """Sign bit and prime exponents of a nonzero rational."""
        if a == 0:
            raise ZeroDivisionError("zero is not a unit")
        exps: dict[int, int] = {}
        for p, e in _factor(abs(a.numerator)).items():
            exps[p] = e
        for p, e in _factor(a.denominator).items():
            exps[p] = exps.get(p, 0) - e
        return int(a < 0), exps

    @staticmethod
    def from_exponents(sign: int, exps: dict[int, int]) -> Fraction:
        v = Fraction(-1 if sign % 2 else 1)
        for p, e in exps.items():
            v *= Fraction(p) ** e
        return v


@lru_cache(maxsize=4096)
def _factor(n: int) -> dict[int, int]:
    return {int(p): int(e) for p, e in sympy.factorint(n).items()} if n > 1 else {}


class Symbolic(Field):
    """Field known only by characteristic and algebraic closedness."""

    is_concrete = False
    order = None

    def __init__(self, characteristic: int, closed: bool = True):
        if characteristic != 0 and prime_power(characteristic) != (characteristic, 1):
            raise ValueError(f"characteristic must be 0 or a prime, got {characteristic}")
        self.characteristic = characteristic
        self.closed = closed

    def __repr__(self):
        return f"Symbolic({self.characteristic}, closed={self.closed})"

    def __str__(self):
        prefix = "closed" if self.closed else "symbolic"
        return f"{prefix}:{self.characteristic}"

    def __eq__(self, other):
        return (
            isinstance(other, Symbolic)
            and other.characteristic == self.characteristic
            and other.closed == self.closed
        )

    def __hash__(self):
        return hash(("S", self.characteristic, self.closed))

    def _refuse(self, *args, **kwargs):
        raise SymbolicFieldUnsupported(f"{self} supports structural queries only")

    add = sub = neg = mul = inv = div = parse = coerce = _refuse


def parse_field(text: str) -> Field:
    """``"5"``, ``"9"``, ``"Q"``, ``"C"``, ``"closed:p"``, ``"symbolic:p"``."""
    t = text.strip()
    if t in ("Q", "q"):
        return Rationals()
    if t in ("C", "c"):
        return Symbolic(0, True)
    for prefix, closed in (("closed:", True), ("symbolic:", False)):
        if t.startswith(prefix):
            try:
                return Symbolic(int(t[len(prefix):]), closed)
            except ValueError as exc:
                raise ParseError(f"bad field {text!r}: {exc}")
    try:
        return FiniteField(int(t))
    except ValueError as exc:
        raise ParseError(f"bad field {text!r}: {exc}")
