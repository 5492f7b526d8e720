"""Exact coefficient arithmetic for the two base fields.

Every polynomial in this package carries its coefficients in one of two
fields: the rationals, represented by ``fractions.Fraction`` (always in
lowest terms with positive denominator), or a prime field F_p with
elements stored as plain ints in ``0..p-1``.  The field objects below
bundle the raw operations so ring-level code never branches on the
coefficient type.
"""

from __future__ import annotations

from fractions import Fraction


class RationalField:
    """The field of rational numbers, elements are Fraction instances."""

    char = 0

    def __init__(self):
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def of(self, value):
        """Coerce an int, Fraction or 'a/b' string to a field element."""
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str):
            return Fraction(value)
        raise TypeError("cannot coerce %r into QQ" % (value,))

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in QQ")
        return 1 / a

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by 0 in QQ")
        return a / b

    def to_str(self, a):
        return str(a)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


class PrimeField:
    """The prime field F_p, elements are ints reduced to 0..p-1."""

    def __init__(self, p):
        if p < 2:
            raise ValueError("field characteristic must be a prime >= 2")
        # A cheap compositeness screen; callers pass genuine primes.
        for q in (2, 3, 5, 7, 11, 13):
            if p % q == 0 and p != q:
                raise ValueError("%d is not prime" % p)
        self.p = p
        self.char = p
        self.zero = 0
        self.one = 1 % p

    def of(self, value):
        """Coerce an int, Fraction or 'a/b' string to a field element.

        Fractions with denominator divisible by p are not reducible and
        raise ZeroDivisionError.
        """
        p = self.p
        if isinstance(value, int):
            return value % p
        if isinstance(value, str):
            value = Fraction(value)
        if isinstance(value, Fraction):
            den = value.denominator % p
            if den == 0:
                raise ZeroDivisionError(
                    "denominator of %s is divisible by p = %d" % (value, p))
            return value.numerator * pow(den, -1, p) % p
        raise TypeError("cannot coerce %r into GF(%d)" % (value, self.p))

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        return pow(a, -1, self.p)

    def div(self, a, b):
        return a * pow(b, -1, self.p) % self.p

    def to_str(self, a):
        return str(a)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return "GF(%d)" % self.p


QQ = RationalField()

_prime_fields = {}


def GF(p):
    """Return the (cached) prime field of characteristic p."""
    field = _prime_fields.get(p)
    if field is None:
        field = _prime_fields[p] = PrimeField(p)
    return field
