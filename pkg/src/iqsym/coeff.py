"""Exact arithmetic in Z[v, v^-1] and its fraction field Q(v).

LaurentPoly stores a dense integer coefficient run together with the lowest
exponent; RatFunc is a canonical reduced fraction of two LaurentPolys.  All
integers are Python ints (arbitrary precision); nothing here is floating
point.  Values are immutable and hashable, so they are safe to share across
threads and to use as dict keys.
"""

from __future__ import annotations

from math import gcd as _igcd

__all__ = [
    "LaurentPoly",
    "RatFunc",
    "ZERO",
    "ONE",
    "MINUS_ONE",
    "V",
    "VINV",
    "rf_int",
    "vpow",
    "qint",
    "qbinom",
    "rf_parse",
]


class LaurentPoly:
    """Integer Laurent polynomial in v.

    ``lo`` is the exponent of the first stored coefficient; ``c`` is a tuple
    of ints with nonzero first and last entry (zero polynomial: ``c == ()``).
    """

    __slots__ = ("lo", "c", "_hash")

    def __init__(self, lo: int, c: tuple):
        # trim zeros at both ends so the representation is canonical
        i, j = 0, len(c)
        while i < j and c[i] == 0:
            i += 1
        while j > i and c[j - 1] == 0:
            j -= 1
        if i == j:
            self.lo = 0
            self.c = ()
        else:
            self.lo = lo + i
            self.c = tuple(c[i:j])
        self._hash = hash((self.lo, self.c))

    # -- constructors -------------------------------------------------
    @staticmethod
    def from_dict(d: dict) -> "LaurentPoly":
        if not d:
            return LP_ZERO
        lo = min(d)
        hi = max(d)
        c = [0] * (hi - lo + 1)
        for e, a in d.items():
            c[e - lo] = a
        return LaurentPoly(lo, tuple(c))

    @staticmethod
    def term(coeff: int, exp: int = 0) -> "LaurentPoly":
        if coeff == 0:
            return LP_ZERO
        return LaurentPoly(exp, (coeff,))

    # -- queries ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.c

    def is_one(self) -> bool:
        return self.lo == 0 and self.c == (1,)

    def is_term(self) -> bool:
        """Single-term (monomial) Laurent polynomial."""
        return len(self.c) == 1

    @property
    def hi(self) -> int:
        return self.lo + len(self.c) - 1

    def coeffs(self) -> dict:
        return {self.lo + k: a for k, a in enumerate(self.c) if a}

    def content(self) -> int:
        g = 0
        for a in self.c:
            g = _igcd(g, a)
            if g == 1:
                return 1
        return g

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not self.c:
            return other
        if not other.c:
            return self
        lo = min(self.lo, other.lo)
        hi = max(self.hi, other.hi)
        c = [0] * (hi - lo + 1)
        o = self.lo - lo
        for k, a in enumerate(self.c):
            c[o + k] = a
        o = other.lo - lo
        for k, a in enumerate(other.c):
            c[o + k] += a
        return LaurentPoly(lo, tuple(c))

    def __neg__(self) -> "LaurentPoly":
        if not self.c:
            return self
        return LaurentPoly(self.lo, tuple(-a for a in self.c))

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        a, b = self.c, other.c
        if not a or not b:
            return LP_ZERO
        if len(a) == 1:
            s = a[0]
            return LaurentPoly(self.lo + other.lo, tuple(s * x for x in b))
        if len(b) == 1:
            s = b[0]
            return LaurentPoly(self.lo + other.lo, tuple(s * x for x in a))
        if len(a) + len(b) > 16:
            return LaurentPoly(self.lo + other.lo, _kron_mul(a, b))
        c = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    c[i + j] += x * y
        return LaurentPoly(self.lo + other.lo, tuple(c))

    def scale(self, k: int) -> "LaurentPoly":
        if k == 0 or not self.c:
            return LP_ZERO
        if k == 1:
            return self
        return LaurentPoly(self.lo, tuple(k * a for a in self.c))

    def shift(self, e: int) -> "LaurentPoly":
        if e == 0 or not self.c:
            return self
        return LaurentPoly(self.lo + e, self.c)

    def __eq__(self, other) -> bool:
        return (
            self is other
            or (isinstance(other, LaurentPoly) and self.lo == other.lo and self.c == other.c)
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"LaurentPoly({lp_to_str(self)!r})"


def _kron_mul(a: tuple, b: tuple) -> tuple:
    """Coefficient-run product via Kronecker substitution at v = 2^w with
    balanced digit recovery (exact for signed integer coefficients)."""
    bound = max(abs(x) for x in a) * max(abs(x) for x in b) * min(len(a), len(b))
    w = bound.bit_length() + 2
    A = 0
    for x in reversed(a):
        A = (A << w) + x
    B = 0
    for x in reversed(b):
        B = (B << w) + x
    C = A * B
    mask = (1 << w) - 1
    half = 1 << (w - 1)
    out = []
    for _ in range(len(a) + len(b) - 1):
        d = C & mask
        if d >= half:
            d -= mask + 1
        out.append(d)
        C = (C - d) >> w
    assert C == 0, "Kronecker unpacking failed"
    return tuple(out)


LP_ZERO = LaurentPoly(0, ())
LP_ONE = LaurentPoly(0, (1,))


def _poly_divexact(num: tuple, den: tuple) -> tuple:
    """Exact division of integer coefficient runs (low-to-high); asserts exactness."""
    dn, dd = len(num) - 1, len(den) - 1
    if dn < dd:
        raise ArithmeticError("inexact polynomial division")
    rem = list(num)
    q = [0] * (dn - dd + 1)
    lead = den[-1]
    for k in range(dn - dd, -1, -1):
        top = rem[k + dd]
        if top == 0:
            continue
        qq, rr = divmod(top, lead)
        if rr:
            raise ArithmeticError("inexact polynomial division")
        q[k] = qq
        for j in range(dd + 1):
            rem[k + j] -= qq * den[j]
    if any(rem):
        raise ArithmeticError("inexact polynomial division")
    return tuple(q)


def _poly_gcd(a: tuple, b: tuple) -> tuple:
    """GCD of integer coefficient runs via the primitive PRS; result is
    primitive with positive leading coefficient."""

    def primitive(p):
        g = 0
        for x in p:
            g = _igcd(g, x)
            if g == 1:
                break
        if g == 0:
            return p
        if p[-1] < 0:
            g = -g
        return tuple(x // g for x in p)

    def strip(p):
        i = 0
        while i < len(p) and p[i] == 0:
            i += 1
        j = len(p)
        while j > i and p[j - 1] == 0:
            j -= 1
        return p[i:j]

    a, b = strip(a), strip(b)
    if not a:
        return primitive(b) if b else ()
    if not b:
        return primitive(a)
    a, b = primitive(a), primitive(b)
    if len(a) < len(b):
        a, b = b, a
    while True:
        # pseudo-remainder of a by b
        dn, dd = len(a) - 1, len(b) - 1
        rem = [x * (b[-1] ** (dn - dd + 1)) for x in a]
        for k in range(dn - dd, -1, -1):
            top = rem[k + dd]
            if top == 0:
                continue
            qq = top // b[-1]
            for j in range(dd + 1):
                rem[k + j] -= qq * b[j]
        r = strip(tuple(rem))
        if not r:
            return primitive(b)
        a, b = b, primitive(r)
        if len(b) == 1:
            return (1,)


def lp_gcd(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """GCD in Z[v,v^-1] up to units: primitive part has valuation 0 and
    positive leading coefficient; integer content is gcd of contents."""
    if a.is_zero():
        g = b
    elif b.is_zero():
        g = a
    else:
        pp = _poly_gcd(a.c, b.c)
        cont = _igcd(a.content(), b.content())
        g = LaurentPoly(0, tuple(cont * x for x in pp))
    if g.is_zero():
        return g
    # normalize: valuation 0, positive leading coefficient
    g = g.shift(-g.lo)
    if g.c[-1] < 0:
        g = -g
    return g


def lp_divexact(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    if a.is_zero():
        return LP_ZERO
    if b.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if len(b.c) == 1:
        d = b.c[0]
        c = []
        for x in a.c:
            q, r = divmod(x, d)
            if r:
                raise ArithmeticError("inexact division")
            c.append(q)
        return LaurentPoly(a.lo - b.lo, tuple(c))
    return LaurentPoly(a.lo - b.lo, _poly_divexact(a.c, b.c))


class RatFunc:
    """Canonical element of Q(v): reduced num/den with den of valuation 0
    and positive leading coefficient, and coprime integer contents."""

    __slots__ = ("num", "den", "_hash")

    def __new__(cls, num: LaurentPoly, den: LaurentPoly = LP_ONE, _canonical: bool = False):
        self = object.__new__(cls)
        if _canonical:
            self.num, self.den = num, den
        else:
            self.num, self.den = _canonicalize(num, den)
        self._hash = hash((self.num, self.den))
        return self

    def is_zero(self) -> bool:
        return not self.num.c

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        if isinstance(other, int):
            other = rf_int(other)
        if self.num.is_zero():
            return other
        if other.num.is_zero():
            return self
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        if self.num.is_zero():
            return self
        return RatFunc(-self.num, self.den, _canonical=True)

    def __sub__(self, other):
        if isinstance(other, int):
            other = rf_int(other)
        return self + (-other)

    def __rsub__(self, other):
        return rf_int(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, int):
            other = rf_int(other)
        if self.num.is_zero() or other.num.is_zero():
            return ZERO
        # unit-monomial operands (+-v^k) just shift/flip the other factor
        if self.den.is_one() and len(self.num.c) == 1 and self.num.c[0] in (1, -1):
            num = other.num.shift(self.num.lo)
            if self.num.c[0] == -1:
                num = -num
            return RatFunc(num, other.den, _canonical=True)
        if other.den.is_one() and len(other.num.c) == 1 and other.num.c[0] in (1, -1):
            num = self.num.shift(other.num.lo)
            if other.num.c[0] == -1:
                num = -num
            return RatFunc(num, self.den, _canonical=True)
        if self.den.is_one() and other.den.is_one():
            return RatFunc(self.num * other.num, LP_ONE, _canonical=True)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inv(self):
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        if isinstance(other, int):
            other = rf_int(other)
        return self * other.inv()

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if isinstance(other, int):
            other = rf_int(other)
        return isinstance(other, RatFunc) and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"RatFunc({rf_to_str(self)!r})"

    def __str__(self) -> str:
        return rf_to_str(self)


_CANON_CACHE: dict = {}


def _canonicalize(num: LaurentPoly, den: LaurentPoly):
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    if num.is_zero():
        return LP_ZERO, LP_ONE
    if den.is_one():
        return num, den
    if len(den.c) == 1:
        d = den.c[0]
        num = num.shift(-den.lo)
        if d < 0:
            d, num = -d, -num
        if d != 1:
            g = _igcd(num.content(), d)
            if g != 1:
                num = LaurentPoly(num.lo, tuple(x // g for x in num.c))
                d //= g
        return num, LaurentPoly(0, (d,))
    key = (num, den)
    hit = _CANON_CACHE.get(key)
    if hit is not None:
        return hit
    g = lp_gcd(num, den)
    if not g.is_one():
        num2 = lp_divexact(num, g)
        den2 = lp_divexact(den, g)
    else:
        num2, den2 = num, den
    # unit normalization: den valuation 0, positive leading coefficient
    num2 = num2.shift(-den2.lo)
    den2 = den2.shift(-den2.lo)
    if den2.c[-1] < 0:
        num2, den2 = -num2, -den2
    res = (num2, den2)
    if len(_CANON_CACHE) < 400_000:
        _CANON_CACHE[key] = res
    return res


ZERO = RatFunc(LP_ZERO)
ONE = RatFunc(LP_ONE)
MINUS_ONE = RatFunc(LaurentPoly.term(-1))
V = RatFunc(LaurentPoly.term(1, 1))
VINV = RatFunc(LaurentPoly.term(1, -1))

_INT_CACHE: dict = {0: ZERO, 1: ONE, -1: MINUS_ONE}
_VPOW_CACHE: dict = {0: ONE, 1: V, -1: VINV}


def rf_int(n: int) -> RatFunc:
    r = _INT_CACHE.get(n)
    if r is None:
        r = RatFunc(LaurentPoly.term(n))
        if -64 <= n <= 64:
            _INT_CACHE[n] = r
    return r


def vpow(e: int) -> RatFunc:
    """v^e as a RatFunc."""
    r = _VPOW_CACHE.get(e)
    if r is None:
        r = RatFunc(LaurentPoly.term(1, e), LP_ONE, _canonical=True)
        if -128 <= e <= 128:
            _VPOW_CACHE[e] = r
    return r


_QINT_CACHE: dict = {}


def qint(n: int) -> RatFunc:
    """Quantum integer [n] = v^{n-1} + v^{n-3} + ... + v^{1-n}; [−n] = −[n]."""
    r = _QINT_CACHE.get(n)
    if r is not None:
        return r
    if n == 0:
        r = ZERO
    elif n < 0:
        r = -qint(-n)
    else:
        r = RatFunc(LaurentPoly(1 - n, (1,) * n if n == 1 else tuple(1 if k % 2 == 0 else 0 for k in range(2 * n - 1))))
    _QINT_CACHE[n] = r
    return r


def qbinom(n: int, k: int) -> RatFunc:
    """Gaussian binomial [n choose k]."""
    if k < 0 or k > n:
        raise ValueError(f"qbinom({n},{k}) out of range")
    k = min(k, n - k)
    num, den = ONE, ONE
    for j in range(k):
        num = num * qint(n - j)
        den = den * qint(j + 1)
    return num / den


# ---------------------------------------------------------------------------
# Text format: `(v^2 - 1 + v^-2)/(v - v^-1)`, exponents in decreasing order.
# ---------------------------------------------------------------------------

def lp_to_str(p: LaurentPoly) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for e in range(p.hi, p.lo - 1, -1):
        a = p.c[e - p.lo]
        if a == 0:
            continue
        sign = "-" if a < 0 else "+"
        a = abs(a)
        if e == 0:
            body = str(a)
        else:
            var = "v" if e == 1 else f"v^{e}"
            body = var if a == 1 else f"{a}*{var}"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    s = (("-" if first_sign == "-" else "") + first_body)
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s


def rf_to_str(r: RatFunc) -> str:
    if r.den.is_one():
        return lp_to_str(r.num)
    num = lp_to_str(r.num)
    den = lp_to_str(r.den)
    if len(r.num.c) > 1:
        num = f"({num})"
    if len(r.den.c) > 1 or r.den.c[0] < 0:
        den = f"({den})"
    return f"{num}/{den}"


def _lp_parse(s: str) -> LaurentPoly:
    import re

    s = s.strip()
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    tokens = re.findall(r"[+-]|\d+|v\^-?\d+|v|\*", s)
    d: dict = {}
    sign, coef, exp, seen = 1, None, None, False
    def flush():
        nonlocal sign, coef, exp, seen
        if seen:
            c = coef if coef is not None else 1
            e = exp if exp is not None else 0
            d[e] = d.get(e, 0) + sign * c
        sign, coef, exp, seen = 1, None, None, False
    for t in tokens:
        if t in "+-":
            flush()
            sign = -1 if t == "-" else 1
        elif t == "*":
            continue
        elif t.startswith("v"):
            exp = int(t[2:]) if t.startswith("v^") else 1
            seen = True
        else:
            coef = int(t)
            seen = True
    flush()
    return LaurentPoly.from_dict(d)


def rf_parse(s: str) -> RatFunc:
    """Parse the rendered RatFunc format (also accepts unparenthesized parts)."""
    s = s.strip()
    depth = 0
    for k, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "/" and depth == 0:
            return RatFunc(_lp_parse(s[:k]), _lp_parse(s[k + 1:]))
    return RatFunc(_lp_parse(s))
