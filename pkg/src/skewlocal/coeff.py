"""Exact coefficient fields: rationals, cyclotomic extensions, prime fields.

Elements are plain payloads and all arithmetic goes through the owning
:class:`Field` object, which keeps hot loops free of wrapper objects:

* rationals: :class:`fractions.Fraction`
* cyclotomic Q(zeta_n): tuple of ``Fraction`` of length ``deg(Phi_n)``,
  coordinates with respect to ``1, zeta, ..., zeta^(deg-1)``
* prime field F_p: ``int`` normalized to ``0..p-1``
"""

from fractions import Fraction
from math import gcd

from .errors import (
    DivisionByZero,
    ParseError,
    UnsupportedField,
    ZeroElement,
)

RATIONAL = "rational"
CYCLOTOMIC = "cyclotomic"
PRIME = "prime"

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _is_prime(p):
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def _poly_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mul(a, b):
    out = [_ZERO] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return _poly_trim(out)


def _poly_divmod(a, b):
    a = list(a)
    q = [_ZERO] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b):
        c = a[-1] / lead
        k = len(a) - len(b)
        q[k] = c
        for j, bj in enumerate(b):
            a[k + j] -= c * bj
        _poly_trim(a)
        if not a:
            break
    return _poly_trim(q), a


def _cyclotomic_poly(n):
    """Dense coefficient list of Phi_n, little-endian, Fraction entries."""
    poly = [_ZERO] * n + [_ONE]
    poly[0] = -_ONE  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            q, r = _poly_divmod(poly, _cyclotomic_poly(d))
            if r:
                raise AssertionError("cyclotomic division left a remainder")
            poly = q
    return poly


def _iroot(n, d):
    """Exact integer d-th root of n >= 0, or None."""
    if n == 0:
        return 0
    if d == 1:
        return n
    x = int(round(n ** (1.0 / d))) or 1
    for _ in range(200):
        xd = x ** (d - 1)
        nx = ((d - 1) * x + n // xd) // d
        if nx >= x:
            break
        x = nx
    for c in (x - 1, x, x + 1, x + 2):
        if c >= 0 and c ** d == n:
            return c
    return None


class Field:
    """One of Q, Q(zeta_n), F_p with exact element arithmetic."""

    def __init__(self, kind, param=None):
        self.kind = kind
        self.param = param
        if kind == RATIONAL:
            pass
        elif kind == CYCLOTOMIC:
            n = param
            if not isinstance(n, int) or n < 1:
                raise ValueError("cyclotomic order must be a positive integer")
            self.modulus = _cyclotomic_poly(n)
            self.degree = len(self.modulus) - 1
            # x^k mod Phi_n for k = degree .. 2*degree - 2
            pows = []
            rem = [-c for c in self.modulus[:-1]]  # x^degree, Phi_n is monic
            for _ in range(self.degree - 1):
                pows.append(list(rem))
                rem = [_ZERO] + rem
                top = rem.pop()
                if top:
                    base = pows[0]
                    for i in range(self.degree):
                        rem[i] += top * base[i]
            self._xpow = pows
        elif kind == PRIME:
            if not _is_prime(param):
                raise ValueError("%r is not prime" % (param,))
        else:
            raise ValueError("unknown field kind %r" % (kind,))

    # -- constructors ---------------------------------------------------

    @staticmethod
    def rationals():
        return Field(RATIONAL)

    @staticmethod
    def cyclotomic(n):
        return Field(CYCLOTOMIC, n)

    @staticmethod
    def prime_field(p):
        return Field(PRIME, p)

    @staticmethod
    def from_text(text):
        """Parse a field name: ``Q``, ``Q(zeta_5)``, ``F7``."""
        t = text.strip()
        if t == "Q":
            return Field.rationals()
        if t.startswith("Q(zeta_") and t.endswith(")"):
            inner = t[len("Q(zeta_"):-1]
            if not inner.isdigit() or int(inner) < 1:
                raise ParseError("bad cyclotomic order in field name %r" % text)
            return Field.cyclotomic(int(inner))
        if t.startswith("F") and t[1:].isdigit():
            p = int(t[1:])
            if not _is_prime(p):
                raise ParseError("F%d is not a prime field" % p)
            return Field.prime_field(p)
        raise ParseError("unknown field name %r (expected Q, Q(zeta_N) or Fp)" % text)

    def name(self):
        if self.kind == RATIONAL:
            return "Q"
        if self.kind == CYCLOTOMIC:
            return "Q(zeta_%d)" % self.param
        return "F%d" % self.param

    def __repr__(self):
        return "Field(%s)" % self.name()

    def __eq__(self, other):
        return (
            isinstance(other, Field)
            and self.kind == other.kind
            and self.param == other.param
        )

    def __hash__(self):
        return hash((self.kind, self.param))

    def char(self):
        return self.param if self.kind == PRIME else 0

    # -- element construction -------------------------------------------

    def zero(self):
        if self.kind == RATIONAL:
            return _ZERO
        if self.kind == CYCLOTOMIC:
            return (_ZERO,) * self.degree
        return 0

    def one(self):
        return self.from_int(1)

    def from_int(self, m):
        if self.kind == RATIONAL:
            return Fraction(m)
        if self.kind == CYCLOTOMIC:
            return (Fraction(m),) + (_ZERO,) * (self.degree - 1)
        return m % self.param

    def from_fraction(self, fr):
        fr = Fraction(fr)
        if self.kind == RATIONAL:
            return fr
        if self.kind == CYCLOTOMIC:
            return (fr,) + (_ZERO,) * (self.degree - 1)
        num = fr.numerator % self.param
        den = fr.denominator % self.param
        if den == 0:
            raise DivisionByZero("denominator divisible by %d" % self.param)
        return num * pow(den, -1, self.param) % self.param

    def zeta(self):
        """The distinguished generator zeta_n of a cyclotomic field."""
        if self.kind != CYCLOTOMIC:
            raise UnsupportedField("zeta is only defined for cyclotomic fields")
        if self.degree == 1:
            # zeta is rational here: the root of the degree-one Phi_n
            return (-self.modulus[0],)
        return (_ZERO, _ONE) + (_ZERO,) * (self.degree - 2)

    # -- arithmetic ------------------------------------------------------

    def is_zero(self, a):
        if self.kind == CYCLOTOMIC:
            return all(c == 0 for c in a)
        return a == 0

    def eq(self, a, b):
        return a == b

    def add(self, a, b):
        if self.kind == RATIONAL:
            return a + b
        if self.kind == CYCLOTOMIC:
            return tuple(x + y for x, y in zip(a, b))
        return (a + b) % self.param

    def sub(self, a, b):
        if self.kind == RATIONAL:
            return a - b
        if self.kind == CYCLOTOMIC:
            return tuple(x - y for x, y in zip(a, b))
        return (a - b) % self.param

    def neg(self, a):
        if self.kind == RATIONAL:
            return -a
        if self.kind == CYCLOTOMIC:
            return tuple(-x for x in a)
        return (-a) % self.param

    def mul(self, a, b):
        if self.kind == RATIONAL:
            return a * b
        if self.kind == PRIME:
            return (a * b) % self.param
        d = self.degree
        out = [_ZERO] * d
        high = [_ZERO] * (d - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                if bj == 0:
                    continue
                k = i + j
                if k < d:
                    out[k] += ai * bj
                else:
                    high[k - d] += ai * bj
        for k, hk in enumerate(high):
            if hk == 0:
                continue
            red = self._xpow[k]
            for i in range(len(red)):
                if red[i]:
                    out[i] += hk * red[i]
        return tuple(out)

    def inv(self, a):
        if self.is_zero(a):
            raise DivisionByZero("inverse of zero in %s" % self.name())
        if self.kind == RATIONAL:
            return 1 / a
        if self.kind == PRIME:
            return pow(a, -1, self.param)
        # extended Euclid in Q[x] against Phi_n; invariant r_k = s_k*a mod Phi_n
        r0, r1 = list(self.modulus), _poly_trim(list(a))
        s0, s1 = [], [_ONE]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            qs = _poly_mul(q, s1)
            new_s = [
                (s0[i] if i < len(s0) else _ZERO) - (qs[i] if i < len(qs) else _ZERO)
                for i in range(max(len(s0), len(qs)))
            ]
            s0, s1 = s1, _poly_trim(new_s)
        if not r1:
            raise DivisionByZero("element is a zero divisor (not coprime to Phi_n)")
        c = r1[0]
        inv = [x / c for x in s1]
        _, rem = _poly_divmod(inv, self.modulus)
        rem = rem + [_ZERO] * (self.degree - len(rem))
        return tuple(rem[: self.degree])

    def div(self, a, b):
        if self.kind == RATIONAL:
            if b == 0:
                raise DivisionByZero("inverse of zero in Q")
            return a / b
        return self.mul(a, self.inv(b))

    def pow(self, a, m):
        if m < 0:
            a = self.inv(a)
            m = -m
        out = self.one()
        base = a
        while m:
            if m & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            m >>= 1
        return out

    # -- structure queries ------------------------------------------------

    def default_order_bound(self):
        if self.kind == RATIONAL:
            return 2
        if self.kind == CYCLOTOMIC:
            return self.param
        return self.param - 1

    def root_of_unity_order(self, a, bound=None):
        """Least m <= bound with a^m = 1, or None.

        The default bound is 2 over Q, n over Q(zeta_n), p - 1 over F_p.
        """
        if self.is_zero(a):
            raise ZeroElement("zero is not a root of unity")
        if bound is None:
            bound = self.default_order_bound()
        one = self.one()
        pw = a
        for m in range(1, bound + 1):
            if pw == one:
                return m
            pw = self.mul(pw, a)
        return None

    def primitive_root_of_unity(self, order):
        """Some element of exact multiplicative order ``order``."""
        if order < 1:
            raise ValueError("order must be positive")
        if order == 1:
            return self.one()
        if self.kind == RATIONAL:
            if order == 2:
                return Fraction(-1)
            raise UnsupportedField("Q has no root of unity of order %d" % order)
        if self.kind == CYCLOTOMIC:
            n = self.param
            bound = n if n % 2 == 0 else 2 * n  # lcm(2, n)
            z = self.zeta()
            for sign in (False, True):
                cand = self.neg(z) if sign else z
                cur = self.one()
                for _ in range(bound):
                    cur = self.mul(cur, cand)
                    if self.root_of_unity_order(cur, bound) == order:
                        return cur
            raise UnsupportedField(
                "%s has no root of unity of order %d" % (self.name(), order)
            )
        p = self.param
        if (p - 1) % order != 0:
            raise UnsupportedField("F%d has no root of unity of order %d" % (p, order))
        for a in range(2, p):
            if self.root_of_unity_order(a, p - 1) == order:
                return a
        raise UnsupportedField("no element of order %d found in F%d" % (order, p))

    def is_dth_power(self, a, d):
        """Decide whether a = b^d for some b; returns (bool, witness).

        Over cyclotomic fields the question is not decided here and
        UnsupportedField is raised.
        """
        if not isinstance(d, int) or d < 1:
            raise ValueError("d must be a positive integer")
        if d == 1:
            return True, a
        if self.kind == CYCLOTOMIC:
            raise UnsupportedField(
                "d-th power detection is not implemented over %s" % self.name()
            )
        if self.is_zero(a):
            return True, self.zero()
        if self.kind == RATIONAL:
            neg = a < 0
            if neg and d % 2 == 0:
                return False, None
            num = _iroot(abs(a.numerator), d)
            den = _iroot(a.denominator, d)
            if num is None or den is None:
                return False, None
            w = Fraction(num, den)
            if neg:
                w = -w
            return True, w
        p = self.param
        g = gcd(d, p - 1)
        if pow(a, (p - 1) // g, p) != 1:
            return False, None
        for b in range(1, p):
            if pow(b, d, p) == a:
                return True, b
        return False, None

    # -- formatting --------------------------------------------------------

    def format_element(self, a):
        if self.kind == RATIONAL:
            return str(a)
        if self.kind == PRIME:
            return str(a % self.param)
        parts = []
        for k, c in enumerate(a):
            if c == 0:
                continue
            if k == 0:
                parts.append(str(c))
            else:
                var = "zeta" if k == 1 else "zeta^%d" % k
                if c == 1:
                    term = var
                elif c == -1:
                    term = "-" + var
                else:
                    term = "%s*%s" % (c, var)
                parts.append(term)
        if not parts:
            return "0"
        out = parts[0]
        for term in parts[1:]:
            if term.startswith("-"):
                out += " - " + term[1:]
            else:
                out += " + " + term
        return out

    def is_simple(self, a):
        """True when format_element(a) needs no parentheses inside a product."""
        if self.kind != CYCLOTOMIC:
            return True
        nonzero = [k for k, c in enumerate(a) if c != 0]
        return len(nonzero) <= 1
