"""Exact coefficient fields: GF(p), GF(p^k), and the rationals.

Extension field elements are coefficient vectors of length k over GF(p),
ascending degree, reduced modulo a monic irreducible polynomial in the
generator t.  Rationals ride on fractions.Fraction, which keeps every value
reduced.  All arithmetic is exact; there is no floating point anywhere.

scalar_rank fixes a bijection field -> [0, q): the rank of an element is the
base-p value of its coefficient vector, so 0 -> 0 and 1 -> 1 always, and the
remaining elements sort lexicographically by descending-degree coefficients.
Deterministic witness selection everywhere else in the package leans on this
ordering.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import CarrierMismatch, NotFinite, ParseError, ValidationError

__all__ = [
    "Field",
    "PrimeField",
    "ExtensionField",
    "RationalField",
    "Scalar",
    "field_make",
    "rationals",
    "parse_field_spec",
    "DEFAULT_MODULI",
]


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# polynomial helpers over GF(p); tuples ascending degree, no trailing zeros


def _ptrim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _pmul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _ptrim(out)


def _pdivmod(a, b, p):
    a = list(_ptrim(a))
    b = _ptrim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    db = len(b) - 1
    if len(a) - 1 < db:
        return (), _ptrim(a)
    linv = pow(b[-1], -1, p)
    q = [0] * (len(a) - db)
    for da in range(len(a) - 1, db - 1, -1):
        c = (a[da] * linv) % p
        if c:
            q[da - db] = c
            for i in range(db + 1):
                a[da - db + i] = (a[da - db + i] - c * b[i]) % p
    return _ptrim(q), _ptrim(a)


def _psub(a, b, p):
    n = max(len(a), len(b))
    return _ptrim(tuple(((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p
                        for i in range(n)))


def _pmod(a, b, p):
    return _pdivmod(a, b, p)[1]


def _format_poly(coeffs):
    """Canonical text for a GF(p)[t] polynomial, descending degree."""
    parts = []
    for d in range(len(coeffs) - 1, -1, -1):
        c = coeffs[d] if d < len(coeffs) else 0
        if c == 0:
            continue
        if d == 0:
            parts.append(str(c))
        else:
            head = "" if c == 1 else f"{c}*"
            parts.append(f"{head}t" + (f"^{d}" if d > 1 else ""))
    return "+".join(parts) if parts else "0"


def _irreducibility_witness(modulus, p):
    """Return a proper monic factor of `modulus` over GF(p), or None."""
    k = len(modulus) - 1
    for deg in range(1, k // 2 + 1):
        # all monic polynomials of this degree
        for idx in range(p**deg):
            coeffs = []
            r = idx
            for _ in range(deg):
                coeffs.append(r % p)
                r //= p
            cand = tuple(coeffs) + (1,)
            if not _pmod(modulus, cand, p):
                return cand
    return None


# default monic irreducible moduli for every prime power q <= 64 with k > 1
DEFAULT_MODULI = {
    (2, 2): (1, 1, 1),            # t^2+t+1
    (2, 3): (1, 1, 0, 1),         # t^3+t+1
    (2, 4): (1, 1, 0, 0, 1),      # t^4+t+1
    (2, 5): (1, 0, 1, 0, 0, 1),   # t^5+t^2+1
    (2, 6): (1, 1, 0, 0, 0, 0, 1),  # t^6+t+1
    (3, 2): (1, 0, 1),            # t^2+1
    (3, 3): (1, 2, 0, 1),         # t^3+2t+1
    (5, 2): (1, 1, 1),            # t^2+t+1
    (7, 2): (1, 0, 1),            # t^2+1
}


class Scalar:
    """One field element in canonical form."""

    __slots__ = ("field", "v")

    def __init__(self, field, v):
        self.field = field
        self.v = v

    def _same(self, other):
        f = self.field
        if other.field is f or other.field == f:
            return True
        raise CarrierMismatch(
            f"mixed fields: {f.name()} vs {other.field.name()}")

    def __add__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        self._same(other)
        return Scalar(self.field, self.field.add_v(self.v, other.v))

    def __sub__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        self._same(other)
        return Scalar(self.field, self.field.sub_v(self.v, other.v))

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        self._same(other)
        return Scalar(self.field, self.field.mul_v(self.v, other.v))

    def __truediv__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        self._same(other)
        return Scalar(self.field, self.field.mul_v(self.v, self.field.inv_v(other.v)))

    def __neg__(self):
        return Scalar(self.field, self.field.neg_v(self.v))

    def inverse(self):
        return Scalar(self.field, self.field.inv_v(self.v))

    def is_zero(self):
        return self.v == self.field.zero_v

    def is_one(self):
        return self.v == self.field.one_v

    def rank(self):
        return self.field.rank_v(self.v)

    def __eq__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        return (self.field is other.field or self.field == other.field) and self.v == other.v

    def __hash__(self):
        return hash((self.field.key(), self.v))

    def __str__(self):
        return self.field.literal_of_v(self.v)

    def __repr__(self):
        return f"Scalar({str(self)!r}, {self.field.spec_string()!r})"


class Field:
    """Common surface for the three carrier kinds."""

    is_rational = False

    def scalar_from_int(self, n):
        return Scalar(self, self.int_v(n))

    @property
    def zero(self):
        return Scalar(self, self.zero_v)

    @property
    def one(self):
        return Scalar(self, self.one_v)

    def is_finite(self):
        return self.order is not None

    def elements(self):
        if self.order is None:
            raise NotFinite(f"{self.name()} is infinite")
        return [self.unrank(r) for r in range(self.order)]

    def unrank(self, r):
        return Scalar(self, self.unrank_v(r))

    def parse_literal(self, text):
        return Scalar(self, self.parse_literal_v(text))

    def rank_tables(self):
        """Cayley tables for + and * indexed by rank; finite fields only."""
        if self.order is None:
            raise NotFinite(f"{self.name()} has no rank tables")
        tabs = getattr(self, "_rank_tables", None)
        if tabs is None:
            q = self.order
            vals = [self.unrank_v(r) for r in range(q)]
            add = [[self.rank_v(self.add_v(vals[i], vals[j])) for j in range(q)] for i in range(q)]
            mul = [[self.rank_v(self.mul_v(vals[i], vals[j])) for j in range(q)] for i in range(q)]
            tabs = (add, mul)
            self._rank_tables = tabs
        return tabs

    def __eq__(self, other):
        return isinstance(other, Field) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"<{self.name()}>"


class PrimeField(Field):
    def __init__(self, p):
        if not _is_prime(p):
            raise ValidationError(f"{p} is not prime", witness=p)
        self.p = p
        self.k = 1
        self.order = p
        self.zero_v = 0
        self.one_v = 1 % p

    def key(self):
        return ("prime", self.p)

    def name(self):
        return f"GF({self.p})"

    def spec_string(self):
        return str(self.p)

    def int_v(self, n):
        return n % self.p

    def add_v(self, a, b):
        return (a + b) % self.p

    def sub_v(self, a, b):
        return (a - b) % self.p

    def mul_v(self, a, b):
        return (a * b) % self.p

    def neg_v(self, a):
        return (-a) % self.p

    def inv_v(self, a):
        if a == 0:
            raise ZeroDivisionError(f"division by zero in {self.name()}")
        return pow(a, -1, self.p)

    def rank_v(self, a):
        return a

    def unrank_v(self, r):
        if not 0 <= r < self.p:
            raise ValidationError(f"rank {r} out of range for {self.name()}")
        return r

    def literal_of_v(self, a):
        return str(a)

    def parse_literal_v(self, text):
        s = re.sub(r"\s+", "", text)
        if not re.fullmatch(r"[+-]?[0-9]+", s):
            raise ParseError(f"bad {self.name()} literal {text!r}")
        return int(s) % self.p


class ExtensionField(Field):
    def __init__(self, p, k, modulus=None):
        if not _is_prime(p):
            raise ValidationError(f"{p} is not prime", witness=p)
        if k < 2:
            raise ValidationError(f"extension degree must be >= 2, got {k}")
        if modulus is None:
            modulus = DEFAULT_MODULI.get((p, k))
            if modulus is None:
                raise ValidationError(
                    f"no default modulus for GF({p}^{k}); supply one")
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise ValidationError(
                f"modulus must be monic of degree {k}", witness=modulus)
        factor = _irreducibility_witness(modulus, p)
        if factor is not None:
            raise ValidationError(
                f"modulus {_format_poly(modulus)} is reducible over GF({p}); "
                f"factor {_format_poly(factor)}",
                witness=factor)
        self.p = p
        self.k = k
        self.modulus = modulus
        self.order = p**k
        self.zero_v = (0,) * k
        self.one_v = (1,) + (0,) * (k - 1)
        # t^(k+j) reduced, for folding products back below degree k
        red = []
        cur = tuple((-modulus[i]) % p for i in range(k))  # t^k
        red.append(cur)
        for _ in range(k - 2):
            shifted = (0,) + cur[: k - 1]
            top = cur[k - 1]
            cur = tuple((shifted[i] + top * red[0][i]) % p for i in range(k))
            red.append(cur)
        self._red = red
        self._inv_cache = {}

    def key(self):
        return ("ext", self.p, self.k, self.modulus)

    def name(self):
        return f"GF({self.p}^{self.k})"

    def spec_string(self):
        return f"{self.p}^{self.k}"

    def int_v(self, n):
        return (n % self.p,) + (0,) * (self.k - 1)

    def add_v(self, a, b):
        p = self.p
        return tuple((a[i] + b[i]) % p for i in range(self.k))

    def sub_v(self, a, b):
        p = self.p
        return tuple((a[i] - b[i]) % p for i in range(self.k))

    def neg_v(self, a):
        p = self.p
        return tuple((-a[i]) % p for i in range(self.k))

    def mul_v(self, a, b):
        p, k = self.p, self.k
        prod = [0] * (2 * k - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        prod[i + j] = (prod[i + j] + ai * bj) % p
        out = prod[:k]
        for e in range(k, 2 * k - 1):
            c = prod[e]
            if c:
                row = self._red[e - k]
                for i in range(k):
                    out[i] = (out[i] + c * row[i]) % p
        return tuple(out)

    def inv_v(self, a):
        if a == self.zero_v:
            raise ZeroDivisionError(f"division by zero in {self.name()}")
        got = self._inv_cache.get(a)
        if got is not None:
            return got
        p = self.p
        # extended Euclid in GF(p)[t]; invariant r_i = s_i*a + t_i*modulus
        r0, r1 = _ptrim(a), self.modulus
        s0, s1 = (1,), ()
        while r1:
            q, r = _pdivmod(r0, r1, p)
            r0, r1 = r1, r
            s0, s1 = s1, _psub(s0, _pmul(q, s1, p), p)
        # r0 is the gcd, a nonzero constant since the modulus is irreducible
        c = pow(r0[0], -1, p)
        scaled = tuple((c * x) % p for x in s0)
        rem = _pmod(scaled, self.modulus, p)
        inv = tuple(rem) + (0,) * (self.k - len(rem))
        self._inv_cache[a] = inv
        return inv

    def rank_v(self, a):
        r = 0
        for c in reversed(a):
            r = r * self.p + c
        return r

    def unrank_v(self, r):
        if not 0 <= r < self.order:
            raise ValidationError(f"rank {r} out of range for {self.name()}")
        out = []
        for _ in range(self.k):
            out.append(r % self.p)
            r //= self.p
        return tuple(out)

    def from_coeffs(self, coeffs):
        """Scalar from an arbitrary-degree coefficient list, reduced."""
        coeffs = tuple(c % self.p for c in coeffs)
        rem = _pmod(_ptrim(coeffs), self.modulus, self.p)
        return Scalar(self, tuple(rem) + (0,) * (self.k - len(rem)))

    @property
    def generator(self):
        return Scalar(self, (0, 1) + (0,) * (self.k - 2))

    def literal_of_v(self, a):
        return _format_poly(a)

    def parse_literal_v(self, text):
        s = re.sub(r"\s+", "", text)
        if not s:
            raise ParseError(f"empty {self.name()} literal")
        # split into signed terms at top level (no parens in field literals)
        terms = []
        cur = ""
        sign = 1
        first = True
        i = 0
        while i < len(s):
            ch = s[i]
            if ch in "+-" and not first and cur:
                terms.append((sign, cur))
                sign = 1 if ch == "+" else -1
                cur = ""
            elif ch in "+-" and (first or not cur):
                if ch == "-":
                    sign = -sign
            else:
                cur += ch
            first = False
            i += 1
        if not cur:
            raise ParseError(f"bad {self.name()} literal {text!r}")
        terms.append((sign, cur))
        degs = {}
        for sg, term in terms:
            m = re.fullmatch(r"(?:([0-9]+)\*?)?(t(?:\^([0-9]+))?)?", term)
            if not m or (m.group(1) is None and m.group(2) is None):
                raise ParseError(f"bad term {term!r} in {self.name()} literal")
            coeff = int(m.group(1)) if m.group(1) is not None else 1
            if m.group(2) is None:
                deg = 0
            else:
                deg = int(m.group(3)) if m.group(3) is not None else 1
            degs[deg] = degs.get(deg, 0) + sg * coeff
        top = max(degs) if degs else 0
        vec = [degs.get(d, 0) % self.p for d in range(top + 1)]
        return self.from_coeffs(vec).v


class RationalField(Field):
    is_rational = True
    p = 0
    k = 1
    order = None
    zero_v = Fraction(0)
    one_v = Fraction(1)

    def key(self):
        return ("rational",)

    def name(self):
        return "Q"

    def spec_string(self):
        return "Q"

    def int_v(self, n):
        return Fraction(n)

    def add_v(self, a, b):
        return a + b

    def sub_v(self, a, b):
        return a - b

    def mul_v(self, a, b):
        return a * b

    def neg_v(self, a):
        return -a

    def inv_v(self, a):
        if a == 0:
            raise ZeroDivisionError("division by zero in Q")
        return 1 / a

    def rank_v(self, a):
        raise NotFinite("Q has no scalar rank")

    def unrank_v(self, r):
        raise NotFinite("Q has no scalar rank")

    def literal_of_v(self, a):
        if a.denominator == 1:
            return str(a.numerator)
        return f"{a.numerator}/{a.denominator}"

    def parse_literal_v(self, text):
        s = re.sub(r"\s+", "", text)
        m = re.fullmatch(r"([+-]?[0-9]+)(?:/([0-9]+))?", s)
        if not m:
            raise ParseError(f"bad rational literal {text!r}")
        num = int(m.group(1))
        den = int(m.group(2)) if m.group(2) is not None else 1
        if den == 0:
            raise ParseError(f"zero denominator in {text!r}")
        return Fraction(num, den)


_RATIONALS = RationalField()


def rationals():
    return _RATIONALS


def field_make(p, k=1, modulus=None):
    """Build GF(p^k); k=1 gives the prime field, modulus defaults from a table."""
    if k == 1:
        if modulus is not None:
            raise ValidationError("prime fields take no modulus")
        return PrimeField(p)
    return ExtensionField(p, k, modulus)


def parse_field_spec(text):
    """Parse a CLI field spec: 'p', 'p^k', or 'Q'."""
    s = text.strip()
    if s in ("Q", "q"):
        return rationals()
    m = re.fullmatch(r"([0-9]+)(?:\^([0-9]+))?", s)
    if not m:
        raise ParseError(f"bad field spec {text!r}; expected p, p^k, or Q")
    p = int(m.group(1))
    k = int(m.group(2)) if m.group(2) is not None else 1
    return field_make(p, k)
