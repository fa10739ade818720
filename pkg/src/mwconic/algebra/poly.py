"""Univariate polynomials and rational functions over an abstract coefficient field.

The degree of the zero polynomial is the sentinel -1.  Rational functions are
kept in reduced form with a monic denominator.
"""

from __future__ import annotations

import random
from typing import Iterable, Optional, Sequence

from .fields import QQ, FiniteField, MQField, RationalField, rational


class Poly:
    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs: Iterable):
        cs = [field.coerce(c) for c in coeffs]
        while cs and field.is_zero(cs[-1]):
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    # -- constructors --------------------------------------------------------
    @staticmethod
    def zero(field) -> "Poly":
        return Poly(field, ())

    @staticmethod
    def one(field) -> "Poly":
        return Poly(field, (field.one,))

    @staticmethod
    def const(field, c) -> "Poly":
        return Poly(field, (c,))

    @staticmethod
    def x(field) -> "Poly":
        return Poly(field, (field.zero, field.one))

    @staticmethod
    def from_roots(field, roots) -> "Poly":
        out = Poly.one(field)
        for r in roots:
            out = out * Poly(field, (-field.coerce(r), field.one))
        return out

    @staticmethod
    def random(field, rng: random.Random, degree: int, size: int = 8) -> "Poly":
        cs = [field.random(rng, size) for _ in range(degree)]
        lead = field.zero
        while field.is_zero(lead):
            lead = field.random(rng, size)
        return Poly(field, cs + [lead])

    # -- structure -------------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.field == other.field and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if self.field.is_zero(c):
                continue
            if i == 0:
                parts.append(f"({c})")
            elif i == 1:
                parts.append(f"({c})*t")
            else:
                parts.append(f"({c})*t^{i}")
        return " + ".join(parts)

    def __getitem__(self, i: int):
        return self.coeffs[i] if 0 <= i <= self.degree else self.field.zero

    @property
    def lead(self):
        if not self.coeffs:
            return self.field.zero
        return self.coeffs[-1]

    # -- ring ops -------------------------------------------------------------
    def _wrap(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly.const(self.field, other)

    def __add__(self, other):
        o = self._wrap(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return Poly(self.field, (self[i] + o[i] for i in range(n)))

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.field, (-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __mul__(self, other):
        o = self._wrap(other)
        if not self.coeffs or not o.coeffs:
            return Poly.zero(self.field)
        F = self.field
        out = [F.zero] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if F.is_zero(a):
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(F, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out, base = Poly.one(self.field), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def scale(self, c) -> "Poly":
        c = self.field.coerce(c)
        return Poly(self.field, (a * c for a in self.coeffs))

    def divmod(self, other: "Poly"):
        o = self._wrap(other)
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        F = self.field
        rem = list(self.coeffs)
        q = [F.zero] * max(0, len(rem) - len(o.coeffs) + 1)
        inv_lead = F.one / o.lead
        d = o.degree
        while len(rem) - 1 >= d and rem:
            if F.is_zero(rem[-1]):
                rem.pop()
                continue
            c = rem[-1] * inv_lead
            k = len(rem) - 1 - d
            q[k] = c
            for i in range(d + 1):
                rem[k + i] = rem[k + i] - c * o.coeffs[i]
            while rem and F.is_zero(rem[-1]):
                rem.pop()
        return Poly(F, q), Poly(F, rem)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ValueError("not an exact division")
        return q

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(self.field.one / self.lead)

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, self._wrap(other)
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def ext_gcd(self, other: "Poly"):
        """(g, u, v) with u*self + v*other = g, g monic gcd."""
        F = self.field
        a, b = self, self._wrap(other)
        u0, v0, u1, v1 = Poly.one(F), Poly.zero(F), Poly.zero(F), Poly.one(F)
        while not b.is_zero():
            q, r = a.divmod(b)
            a, b = b, r
            u0, u1 = u1, u0 - q * u1
            v0, v1 = v1, v0 - q * v1
        if a.is_zero():
            return a, u0, v0
        c = F.one / a.lead
        return a.scale(c), u0.scale(c), v0.scale(c)

    # -- calculus / transforms -------------------------------------------------
    def derivative(self) -> "Poly":
        return Poly(self.field, (self.coeffs[i] * i for i in range(1, len(self.coeffs))))

    def __call__(self, x):
        F = self.field
        if isinstance(x, Poly):
            out = Poly.zero(F)
            for c in reversed(self.coeffs):
                out = out * x + Poly.const(F, c)
            return out
        if isinstance(x, RatFunc):
            out = RatFunc.const(F, 0)
            for c in reversed(self.coeffs):
                out = out * x + RatFunc.const(F, c)
            return out
        x = F.coerce(x)
        out = F.zero
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def shift(self, a) -> "Poly":
        """self(t + a)."""
        return self(Poly(self.field, (a, self.field.one)))

    def reverse(self, n: Optional[int] = None) -> "Poly":
        """t^n * self(1/t) for n >= degree (default: the degree)."""
        if n is None:
            n = self.degree
        if n < self.degree:
            raise ValueError("reversal bound below degree")
        cs = [self.field.zero] * (n + 1)
        for i, c in enumerate(self.coeffs):
            cs[n - i] = c
        return Poly(self.field, cs)

    def map_coeffs(self, fn, new_field=None) -> "Poly":
        F = new_field if new_field is not None else self.field
        return Poly(F, (fn(c) for c in self.coeffs))

    # -- factor-free decompositions ---------------------------------------------
    def valuation(self, pi: "Poly") -> int:
        """Exact order of pi in self (pi nonconstant); zero poly -> raises."""
        if self.is_zero():
            raise ValueError("valuation of zero polynomial")
        v, cur = 0, self
        while True:
            q, r = cur.divmod(pi)
            if not r.is_zero():
                return v
            v, cur = v + 1, q

    def squarefree_part(self) -> "Poly":
        """rad(self): product of the distinct monic irreducible factors.

        Valid in characteristic 0 or p > degree (the derivative never dies).
        """
        if self.is_zero():
            return self
        if self.is_constant():
            return Poly.one(self.field)
        p = self.field.characteristic
        if p and p <= self.degree:
            raise ValueError("squarefree part needs characteristic 0 or p > degree")
        g = self.gcd(self.derivative())
        if g.is_constant():
            return self.monic()
        return self.exact_div(g).monic()

    def squarefree_decomposition(self) -> list[tuple["Poly", int]]:
        """Yun-style decomposition [(g_i, i)] with self = lc * prod g_i^i."""
        if self.is_zero() or self.is_constant():
            return []
        p = self.field.characteristic
        if p and p <= self.degree:
            raise ValueError("squarefree decomposition needs characteristic 0 or p > degree")
        f = self.monic()
        d = f.derivative()
        a = f.gcd(d)
        b = f.exact_div(a)
        c = d.exact_div(a)
        out = []
        i = 1
        while b.degree > 0:
            t = c - b.derivative()
            g = b.gcd(t)
            if g.degree > 0:
                out.append((g, i))
            b2 = b.exact_div(g)
            c = t.exact_div(g)
            b = b2
            i += 1
        return out

    def resultant(self, other: "Poly"):
        """Resultant via the subresultant-free Euclidean scheme (field coeffs)."""
        F = self.field
        a, b = self, self._wrap(other)
        if a.is_zero() or b.is_zero():
            return F.zero
        res = F.one
        while b.degree > 0:
            r = a % b
            if r.is_zero():
                return F.zero
            res = res * (b.lead ** (a.degree - r.degree)) \
                * (F.one if ((a.degree * b.degree) % 2 == 0) else -F.one)
            a, b = b, r
        # b constant nonzero
        return res * b.lead ** a.degree

    def discriminant(self):
        n = self.degree
        if n < 1:
            raise ValueError("discriminant needs degree >= 1")
        r = self.resultant(self.derivative())
        sign = -1 if (n * (n - 1) // 2) % 2 else 1
        return sign * r / self.lead


def lagrange_interpolate(field, points) -> Poly:
    """Unique polynomial of degree < len(points) through the given (x, y) pairs."""
    out = Poly.zero(field)
    xs = [field.coerce(x) for x, _ in points]
    for i, (_, y) in enumerate(points):
        num = Poly.one(field)
        den = field.one
        for j, xj in enumerate(xs):
            if j == i:
                continue
            num = num * Poly(field, (-xj, field.one))
            den = den * (xs[i] - xj)
        out = out + num.scale(field.coerce(y) / den)
    return out


class RatFunc:
    """Reduced rational function num/den, den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Optional[Poly] = None, reduce: bool = True):
        F = num.field
        if den is None:
            den = Poly.one(F)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if reduce:
            g = num.gcd(den)
            if g.degree > 0:
                num, den = num.exact_div(g), den.exact_div(g)
        lead = den.lead
        if not F.is_zero(lead - F.one):
            inv = F.one / lead
            num, den = num.scale(inv), den.scale(inv)
        self.num = num
        self.den = den

    @staticmethod
    def const(field, c) -> "RatFunc":
        return RatFunc(Poly.const(field, c))

    @staticmethod
    def t(field) -> "RatFunc":
        return RatFunc(Poly.x(field))

    @staticmethod
    def of(field, num_coeffs, den_coeffs=(1,)) -> "RatFunc":
        return RatFunc(Poly(field, num_coeffs), Poly(field, den_coeffs))

    @property
    def field(self):
        return self.num.field

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self):
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num[0]

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def as_poly(self) -> Poly:
        if not self.is_polynomial():
            raise ValueError(f"{self} is not a polynomial")
        return self.num

    @property
    def degree(self) -> int:
        """max(deg num, deg den); the zero function has degree -1."""
        return max(self.num.degree, self.den.degree)

    def __bool__(self):
        return not self.num.is_zero()

    def __eq__(self, other):
        o = self._wrap(other)
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        if self.den.is_constant():
            return repr(self.num)
        return f"({self.num}) / ({self.den})"

    def _wrap(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc(other)
        return RatFunc.const(self.field, other)

    def __add__(self, other):
        o = self._wrap(other)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __mul__(self, other):
        o = self._wrap(other)
        a = RatFunc(self.num, o.den)
        b = RatFunc(o.num, self.den)
        return RatFunc(a.num * b.num, a.den * b.den, reduce=False)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._wrap(other)
        if o.is_zero():
            raise ZeroDivisionError
        return self * RatFunc(o.den, o.num)

    def __rtruediv__(self, other):
        return self._wrap(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return (RatFunc(self.den, self.num)) ** (-n)
        return RatFunc(self.num ** n, self.den ** n, reduce=False)

    def __call__(self, x):
        if isinstance(x, (Poly, RatFunc)):
            return self.num(x) / self.den(x)
        num = self.num(x)
        den = self.den(x)
        if self.field.is_zero(den):
            raise ZeroDivisionError(f"pole at {x}")
        return num / den

    def map_coeffs(self, fn, new_field=None) -> "RatFunc":
        return RatFunc(self.num.map_coeffs(fn, new_field), self.den.map_coeffs(fn, new_field))

    def derivative(self) -> "RatFunc":
        return RatFunc(self.num.derivative() * self.den - self.num * self.den.derivative(),
                       self.den * self.den)

    # -- local data ------------------------------------------------------------
    def valuation(self, pi: Poly) -> int:
        """Order of vanishing at the place (pi); poles are negative.  Zero -> large."""
        if self.is_zero():
            return 10 ** 9
        vd = self.den.valuation(pi)
        if vd:
            return -vd  # reduced form: num coprime to den
        return self.num.valuation(pi)

    def infinity_valuation(self, weight: int = 0) -> int:
        """Order at t = infinity of t^(-weight) * self, i.e. of s^weight*self(1/s) at s=0."""
        if self.is_zero():
            return 10 ** 9
        return weight + self.den.degree - self.num.degree

    def residue(self, pi: Poly):
        """Value in the residue field K[t]/(pi); requires valuation >= 0."""
        R = ResidueField(self.field, pi)
        return R.of_ratfunc(self)

    def at_infinity_chart(self, weight: int) -> "RatFunc":
        """The function s^weight * self(1/s) as a rational function in s."""
        n = max(self.num.degree, self.den.degree, 0)
        num_rev = self.num.reverse(n)
        den_rev = self.den.reverse(n)
        s = Poly.x(self.field)
        if weight >= 0:
            return RatFunc(num_rev * s ** weight, den_rev)
        return RatFunc(num_rev, den_rev * s ** (-weight))


class ResidueField:
    """K[t]/(pi) for pi monic irreducible over K; elements are ResidueElements."""

    def __init__(self, base_field, pi: Poly):
        if pi.degree < 1:
            raise ValueError("place polynomial must be nonconstant")
        self.base = base_field
        self.pi = pi.monic()
        self.characteristic = base_field.characteristic

    def __repr__(self):
        return f"{self.base}[t]/({self.pi})"

    def __eq__(self, other):
        return (isinstance(other, ResidueField) and self.base == other.base
                and self.pi == other.pi)

    def __hash__(self):
        return hash(("RES", self.base, self.pi))

    @property
    def zero(self):
        return ResidueElement(self, Poly.zero(self.base))

    @property
    def one(self):
        return ResidueElement(self, Poly.one(self.base))

    @property
    def degree(self):
        return self.pi.degree

    def coerce(self, x) -> "ResidueElement":
        if isinstance(x, ResidueElement):
            if x.ring == self:
                return x
            raise TypeError("residue ring mismatch")
        if isinstance(x, Poly):
            return ResidueElement(self, x % self.pi)
        if isinstance(x, RatFunc):
            return self.of_ratfunc(x)
        return ResidueElement(self, Poly.const(self.base, self.base.coerce(x)))

    def of_ratfunc(self, f: RatFunc) -> "ResidueElement":
        dv = f.den % self.pi
        if dv.is_zero():
            raise ZeroDivisionError(f"pole of {f} at {self.pi}")
        return self.coerce(f.num) / self.coerce(f.den)

    def is_zero(self, x) -> bool:
        return x.rep.is_zero()

    def tbar(self) -> "ResidueElement":
        return ResidueElement(self, Poly.x(self.base) % self.pi)

    def random(self, rng: random.Random, size: int = 6) -> "ResidueElement":
        return ResidueElement(self, Poly(self.base, [self.base.random(rng, size)
                                                     for _ in range(self.pi.degree)]))


class ResidueElement:
    __slots__ = ("ring", "rep")

    def __init__(self, ring: ResidueField, rep: Poly):
        self.ring = ring
        self.rep = rep % ring.pi

    def __bool__(self):
        return not self.rep.is_zero()

    def __eq__(self, other):
        o = self.ring.coerce(other)
        return self.rep == o.rep

    def __hash__(self):
        return hash((self.ring, self.rep))

    def __repr__(self):
        return f"[{self.rep}]"

    def __add__(self, other):
        return ResidueElement(self.ring, self.rep + self.ring.coerce(other).rep)

    __radd__ = __add__

    def __neg__(self):
        return ResidueElement(self.ring, -self.rep)

    def __sub__(self, other):
        return self + (-self.ring.coerce(other))

    def __rsub__(self, other):
        return self.ring.coerce(other) - self

    def __mul__(self, other):
        return ResidueElement(self.ring, self.rep * self.ring.coerce(other).rep)

    __rmul__ = __mul__

    def inverse(self) -> "ResidueElement":
        g, u, _ = self.rep.ext_gcd(self.ring.pi)
        if g.degree != 0:
            raise ZeroDivisionError(f"{self} not invertible (place not irreducible?)")
        return ResidueElement(self.ring, u.scale(self.ring.base.one / g[0]))

    def __truediv__(self, other):
        return self * self.ring.coerce(other).inverse()

    def __rtruediv__(self, other):
        return self.ring.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out, base = self.ring.one, self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out
