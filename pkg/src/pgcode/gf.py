"""Exact arithmetic in GF(p^h) for q = p^h up to 2**16.

Elements are encoded as integers in [0, q): the polynomial sum(c_i x^i) is
stored as sum(c_i p^i).  All operations go through precomputed tables
(discrete log/antilog for multiplication, digit tables for addition), so
both scalar and numpy-vectorised arithmetic are exact and allocation-free
apart from the outputs.
"""

from __future__ import annotations

import numpy as np

from .errors import DivisionByZero, NotPrime, Reducible, TooLarge

MAX_ORDER = 1 << 16

# full q x q addition tables are built below this order; larger fields fall
# back to digit-wise addition (still vectorised)
_ADD_TABLE_LIMIT = 1024


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _poly_mul_mod(a: list[int], b: list[int], irr: list[int], p: int) -> list[int]:
    """Multiply two coefficient lists modulo the monic polynomial irr."""
    h = len(irr) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    # reduce: x^h == -(irr[0] + ... + irr[h-1] x^(h-1))
    for d in range(len(prod) - 1, h - 1, -1):
        c = prod[d]
        if c:
            prod[d] = 0
            for i in range(h):
                prod[d - h + i] = (prod[d - h + i] - c * irr[i]) % p
    return prod[:h] + [0] * (h - len(prod))


def _poly_divmod(num: list[int], den: list[int], p: int):
    num = list(num)
    dd = len(den) - 1
    while den[-1] == 0:
        den = den[:-1]
        dd -= 1
    inv_lead = pow(den[-1], -1, p)
    quot = [0] * max(len(num) - dd, 1)
    for i in range(len(num) - 1, dd - 1, -1):
        c = (num[i] * inv_lead) % p
        quot[i - dd] = c
        if c:
            for j in range(dd + 1):
                num[i - dd + j] = (num[i - dd + j] - c * den[j]) % p
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return quot, num


def _is_irreducible(coeffs: list[int], p: int) -> bool:
    """Brute-force irreducibility test by trial division.

    coeffs is monic of degree h = len(coeffs) - 1; we divide by every monic
    polynomial of degree 1..h//2.
    """
    h = len(coeffs) - 1
    if h == 1:
        return True
    for d in range(1, h // 2 + 1):
        for v in range(p**d):
            den = [(v // p**i) % p for i in range(d)] + [1]
            _, rem = _poly_divmod(coeffs, den, p)
            if rem == [0]:
                return False
    return True


def _first_irreducible(p: int, h: int) -> tuple[int, ...]:
    """Lexicographically first monic irreducible of degree h over F_p.

    Candidates (c_0, ..., c_{h-1}) are scanned in lexicographic order with
    c_0 compared first.
    """
    if h == 1:
        return (0, 1)
    for v in range(p**h):
        lower = [(v // p ** (h - 1 - i)) % p for i in range(h)]
        coeffs = lower + [1]
        if _is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise Reducible(f"no irreducible polynomial of degree {h} over F_{p}")  # pragma: no cover


class Field:
    """An immutable GF(p^h) with a fixed monic irreducible polynomial.

    Construction validates primality of p and irreducibility of the chosen
    polynomial, then builds the arithmetic tables.  All methods are pure.
    """

    __slots__ = (
        "p", "h", "q", "irreducible",
        "_exp", "_log", "_inv", "_neg", "_add_table",
        "_digits", "_pow_p",
    )

    def __init__(self, p: int, h: int, irreducible=None):
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if h < 1:
            raise TooLarge("extension degree must be >= 1")
        q = p**h
        if q > MAX_ORDER:
            raise TooLarge(f"field order {q} exceeds {MAX_ORDER}")
        if irreducible is None:
            irr = _first_irreducible(p, h)
        else:
            irr = tuple(int(c) % p for c in irreducible)
            if len(irr) != h + 1 or irr[-1] != 1:
                raise Reducible(f"polynomial must be monic of degree {h}")
            if not _is_irreducible(list(irr), p):
                raise Reducible(f"{list(irr)} is reducible over F_{p}")
        self.p = p
        self.h = h
        self.q = q
        self.irreducible = irr
        self._build_tables()

    # -- construction internals ------------------------------------------

    def _encode(self, coeffs: list[int]) -> int:
        return sum(c * self.p**i for i, c in enumerate(coeffs))

    def _decode(self, value: int) -> list[int]:
        return [(value // self.p**i) % self.p for i in range(self.h)]

    def _raw_mul(self, a: int, b: int) -> int:
        return self._encode(
            _poly_mul_mod(self._decode(a), self._decode(b), list(self.irreducible), self.p)
        )

    def _build_tables(self):
        p, q = self.p, self.q
        # digit table: base-p digits of every encoding
        digs = np.zeros((q, self.h), dtype=np.int32)
        vals = np.arange(q)
        for i in range(self.h):
            digs[:, i] = (vals // p**i) % p
        self._digits = digs
        self._pow_p = np.array([p**i for i in range(self.h)], dtype=np.int64)

        # multiplicative group via a generator
        gen = self._find_generator()
        exp = np.zeros(2 * (q - 1), dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        x = 1
        for i in range(q - 1):
            exp[i] = x
            exp[i + q - 1] = x
            log[x] = i
            x = self._raw_mul(x, gen)
        if x != 1:
            raise Reducible("multiplicative group has wrong order")  # pragma: no cover
        self._exp = exp
        self._log = log

        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = exp[(q - 1 - log[1:]) % (q - 1)]
        self._inv = inv

        neg_digits = (-digs) % p
        self._neg = (neg_digits @ self._pow_p).astype(np.int64)

        if q <= _ADD_TABLE_LIMIT:
            s = (digs[:, None, :] + digs[None, :, :]) % p
            self._add_table = (s @ self._pow_p).astype(np.int64)
        else:
            self._add_table = None

    def _find_generator(self) -> int:
        q = self.q
        factors = []
        m = q - 1
        d = 2
        while d * d <= m:
            if m % d == 0:
                factors.append(d)
                while m % d == 0:
                    m //= d
            d += 1
        if m > 1:
            factors.append(m)
        for g in range(1, q):
            if all(self._raw_pow(g, (q - 1) // r) != 1 for r in factors):
                return g
        raise Reducible("no generator found")  # pragma: no cover

    def _raw_pow(self, a: int, e: int) -> int:
        r = 1
        b = a
        while e:
            if e & 1:
                r = self._raw_mul(r, b)
            b = self._raw_mul(b, b)
            e >>= 1
        return r

    # -- identity / serialization ----------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, Field)
            and (self.p, self.h, self.irreducible) == (other.p, other.h, other.irreducible)
        )

    def __hash__(self):
        return hash((self.p, self.h, self.irreducible))

    def __repr__(self):
        return f"Field(p={self.p}, h={self.h}, q={self.q})"

    def description(self) -> str:
        """Header form `p h c_0 c_1 ... c_h` used by all file formats."""
        return " ".join(str(x) for x in (self.p, self.h, *self.irreducible))

    # -- scalar arithmetic -------------------------------------------------

    def _check(self, *ops):
        for a in ops:
            if not 0 <= a < self.q:
                raise TooLarge(f"operand {a} outside [0, {self.q})")

    def add(self, a: int, b: int) -> int:
        self._check(a, b)
        if self.p == 2:
            return a ^ b
        if self._add_table is not None:
            return int(self._add_table[a, b])
        return self._encode([(x + y) % self.p for x, y in zip(self._decode(a), self._decode(b))])

    def neg(self, a: int) -> int:
        self._check(a)
        return int(self._neg[a])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        self._check(a, b)
        if a == 0 or b == 0:
            return 0
        return int(self._exp[self._log[a] + self._log[b]])

    def inv(self, a: int) -> int:
        self._check(a)
        if a == 0:
            raise DivisionByZero("inverse of 0")
        return int(self._inv[a])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        self._check(a)
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise DivisionByZero("0 to a negative power")
            return 0
        return int(self._exp[(self._log[a] * e) % (self.q - 1)])

    def frobenius(self, a: int, e: int) -> int:
        """a ** (p**e)."""
        self._check(a)
        if a == 0:
            return 0
        return self.pow(a, pow(self.p, e, self.q - 1))

    # -- vectorised arithmetic on integer arrays --------------------------

    def add_arr(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        if self.p == 2:
            return a ^ b
        if self._add_table is not None:
            return self._add_table[a, b]
        s = (self._digits[a] + self._digits[b]) % self.p
        return s @ self._pow_p

    def neg_arr(self, a):
        return self._neg[np.asarray(a)]

    def sub_arr(self, a, b):
        return self.add_arr(a, self._neg[np.asarray(b)])

    def mul_arr(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        out = self._exp[self._log[a] + self._log[b]]
        zero = (a == 0) | (b == 0)
        if zero.ndim == 0:
            return out if not zero else np.int64(0)
        out[zero] = 0
        return out

    def inv_arr(self, a):
        """Vectorised inverse; caller guarantees entries are nonzero."""
        return self._inv[np.asarray(a)]

    def pow_arr(self, a, e: int):
        """Entry-wise a**e for e >= 1 (0**e = 0)."""
        a = np.asarray(a)
        out = self._exp[(self._log[a] * e) % (self.q - 1)]
        zero = a == 0
        if zero.ndim == 0:
            return out if not zero else np.int64(0)
        out[zero] = 0
        return out


def field_new(p: int, h: int, irreducible=None) -> Field:
    """Build GF(p^h); without an explicit polynomial the lexicographically
    first monic irreducible of degree h is chosen."""
    return Field(p, h, irreducible)


_ARITH_OPS = {"add", "sub", "mul", "div", "inv", "neg", "pow"}


def arith(field: Field, op: str, a: int, b: int | None = None) -> int:
    """Dispatch a named field operation; `b` is the exponent for `pow`."""
    if op not in _ARITH_OPS:
        raise ValueError(f"unknown operation {op!r}")
    if op in ("inv", "neg"):
        return getattr(field, op)(a)
    if b is None:
        raise ValueError(f"{op} needs a second operand")
    return getattr(field, op)(a, b)


def frobenius(field: Field, a: int, e: int) -> int:
    return field.frobenius(a, e)


def factor_prime_power(q: int) -> tuple[int, int]:
    """Return (p, h) with q = p^h, p prime; raises NotPrime otherwise."""
    if q < 2:
        raise NotPrime(f"{q} is not a prime power")
    p = 2
    while p * p <= q:
        if q % p == 0:
            h = 0
            m = q
            while m % p == 0:
                m //= p
                h += 1
            if m != 1:
                raise NotPrime(f"{q} is not a prime power")
            return p, h
        p += 1
    return q, 1
