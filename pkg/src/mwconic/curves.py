"""Weierstrass models y^2 = (x - r1)(x - r2)(x - r3) over K(t) and their arithmetic.

Curves are kept in factored-root form: every model in this project (the conic
family, its quadratic twists, the isogenous curves, the CM models) has rational
2-torsion over a small field, and fiber analysis reads the roots directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable, Optional, Sequence, Tuple

from .algebra import (MQField, Poly, QQ, RatFunc, rational, sqrt_with_extension,
                      unify_fields)
from .algebra.fields import FiniteField, as_mq


class SingularFamilyMember(ValueError):
    """Raised when alpha*beta*gamma = 0 or the root functions collide."""


@dataclass(frozen=True)
class FamilyTriple:
    """Conic-parametrizing data (f, g, h) with f^2 + g^2 = h^2, attached scalars."""

    alpha: object
    beta: object
    gamma: object
    f: Poly
    g: Poly
    h: Poly

    def validate(self) -> None:
        F = self.f.field
        if (self.f * self.f + self.g * self.g) != self.h * self.h:
            raise ValueError("triple does not satisfy f^2 + g^2 = h^2")
        if max(self.f.degree, self.g.degree, self.h.degree) != 2:
            raise ValueError("triple must have maximal degree 2")
        for a, b in ((self.f, self.g), (self.f, self.h), (self.g, self.h)):
            if a.gcd(b).degree > 0:
                raise ValueError("triple polynomials must be pairwise coprime")


def standard_triple(field=QQ) -> Tuple[Poly, Poly, Poly]:
    """(t^2 - 1, 2t, t^2 + 1)."""
    t = Poly.x(field)
    return (t * t - 1, 2 * t, t * t + 1)


class WeierstrassCurve:
    """Factored model y^2 = (x - r1)(x - r2)(x - r3) with r_i in K(t)."""

    def __init__(self, field, roots: Sequence[RatFunc], family: Optional[FamilyTriple] = None,
                 isotrivial: Optional[tuple] = None):
        roots = tuple(r if isinstance(r, RatFunc) else RatFunc(r) for r in roots)
        if len(roots) != 3:
            raise ValueError("need exactly three roots")
        for i in range(3):
            for j in range(i + 1, 3):
                if roots[i] == roots[j]:
                    raise SingularFamilyMember(f"equal roots r{i+1} = r{j+1}: singular model")
        self.field = field
        self.roots = roots
        self.family = family
        # (delta, r) twist data for the isotrivial quadric stratum, else None
        self.isotrivial = isotrivial

    def __repr__(self):
        return f"E: y^2 = (x - ({self.roots[0]}))(x - ({self.roots[1]}))(x - ({self.roots[2]}))"

    def __eq__(self, other):
        return (isinstance(other, WeierstrassCurve) and self.field == other.field
                and self.roots == other.roots)

    def __hash__(self):
        return hash((self.field, self.roots))

    # -- models ---------------------------------------------------------------
    def rhs(self, x: RatFunc) -> RatFunc:
        out = RatFunc.const(self.field, 1)
        for r in self.roots:
            out = out * (x - r)
        return out

    def a_invariants(self) -> tuple[RatFunc, RatFunc, RatFunc]:
        """(a2, a4, a6) of y^2 = x^3 + a2 x^2 + a4 x + a6."""
        r1, r2, r3 = self.roots
        s1 = r1 + r2 + r3
        s2 = r1 * r2 + r1 * r3 + r2 * r3
        s3 = r1 * r2 * r3
        return (-s1, s2, -s3)

    def invariants(self) -> dict:
        """Standard c4, c6, Delta, j; satisfies c4^3 - c6^2 = 1728*Delta."""
        r1, r2, r3 = self.roots
        e = [r1, r2, r3]
        s1 = e[0] + e[1] + e[2]
        s2 = e[0] * e[1] + e[0] * e[2] + e[1] * e[2]
        c4 = 16 * (s1 * s1 - 3 * s2)
        c6 = -32 * (2 * e[0] - e[1] - e[2]) * (2 * e[1] - e[0] - e[2]) * (2 * e[2] - e[0] - e[1])
        d12 = e[0] - e[1]
        d13 = e[0] - e[2]
        d23 = e[1] - e[2]
        delta = 16 * (d12 * d13 * d23) ** 2
        return {"c4": c4, "c6": c6, "delta": delta, "j": c4 ** 3 / delta}

    def change_field(self, new_field, embed: Callable) -> "WeierstrassCurve":
        roots = tuple(r.map_coeffs(embed, new_field) for r in self.roots)
        fam = self.family
        new_fam = None
        if fam is not None:
            new_fam = FamilyTriple(embed(as_coeff(self.field, fam.alpha)),
                                   embed(as_coeff(self.field, fam.beta)),
                                   embed(as_coeff(self.field, fam.gamma)),
                                   fam.f.map_coeffs(embed, new_field),
                                   fam.g.map_coeffs(embed, new_field),
                                   fam.h.map_coeffs(embed, new_field))
        iso = None
        if self.isotrivial is not None:
            delta, r = self.isotrivial
            iso = (delta.map_coeffs(embed, new_field), embed(as_coeff(self.field, r)))
        return WeierstrassCurve(new_field, roots, new_fam, iso)

    def infinity_weight(self) -> int:
        """Smallest n with all s^(2n) r_i(1/s) regular at s = 0 (chart exponent)."""
        n = 0
        for r in self.roots:
            need = r.num.degree - r.den.degree
            n = max(n, (need + 1) // 2)
        return n

    def infinity_chart(self) -> tuple["WeierstrassCurve", int]:
        """Model in the chart t = 1/s, (x, y) -> (x s^{2n}, y s^{3n})."""
        n = self.infinity_weight()
        roots = tuple(r.at_infinity_chart(2 * n) for r in self.roots)
        iso = None
        if self.isotrivial is not None:
            delta, r = self.isotrivial
            iso = (delta.at_infinity_chart(2 * n), r)
        return WeierstrassCurve(self.field, roots, isotrivial=iso), n

    def infinity(self) -> "CurvePoint":
        return CurvePoint(self, None, None)

    def point(self, x, y) -> "CurvePoint":
        x = x if isinstance(x, RatFunc) else RatFunc.const(self.field, x) \
            if not isinstance(x, Poly) else RatFunc(x)
        y = y if isinstance(y, RatFunc) else RatFunc.const(self.field, y) \
            if not isinstance(y, Poly) else RatFunc(y)
        P = CurvePoint(self, x, y)
        if not P.on_curve():
            raise ValueError(f"point ({x}, {y}) is not on {self}")
        return P


def as_coeff(field, v):
    return field.coerce(v)


class CurvePoint:
    """Point on the generic fiber with explicit coordinates (or O)."""

    __slots__ = ("curve", "x", "y")

    def __init__(self, curve: WeierstrassCurve, x: Optional[RatFunc], y: Optional[RatFunc]):
        self.curve = curve
        self.x = x
        self.y = y

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def on_curve(self) -> bool:
        if self.is_infinity:
            return True
        return self.y * self.y == self.curve.rhs(self.x)

    def __eq__(self, other):
        if not isinstance(other, CurvePoint):
            return NotImplemented
        if self.is_infinity or other.is_infinity:
            return self.is_infinity and other.is_infinity
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((None if self.is_infinity else (self.x, self.y)))

    def __repr__(self):
        return "O" if self.is_infinity else f"({self.x}, {self.y})"

    def __neg__(self):
        if self.is_infinity:
            return self
        return CurvePoint(self.curve, self.x, -self.y)

    def __add__(self, other: "CurvePoint") -> "CurvePoint":
        E = self.curve
        if self.is_infinity:
            return other
        if other.is_infinity:
            return self
        if self.x == other.x:
            if self.y == -other.y:
                return E.infinity()
            # doubling
            a2, a4, _ = E.a_invariants()
            num = 3 * self.x * self.x + 2 * a2 * self.x + a4
            lam = num / (2 * self.y)
        else:
            lam = (other.y - self.y) / (other.x - self.x)
        a2, _, _ = E.a_invariants()
        x3 = lam * lam - a2 - self.x - other.x
        y3 = lam * (self.x - x3) - self.y
        return CurvePoint(E, x3, y3)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, n: int) -> "CurvePoint":
        if n < 0:
            return (-self) * (-n)
        out, base = self.curve.infinity(), self
        while n:
            if n & 1:
                out = out + base
            base = base + base
            n >>= 1
        return out

    __rmul__ = __mul__


def add_points(E: WeierstrassCurve, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    """Chord-tangent sum (wrapper retaining the explicit-curve signature)."""
    if P.curve is not E and P.curve != E:
        raise ValueError("P not on E")
    return P + Q


def build_family_curve(alpha, beta, gamma, triple: Optional[Tuple[Poly, Poly, Poly]] = None,
                       field=QQ) -> WeierstrassCurve:
    """The curve y^2 = (x + a f^2)(x + b g^2)(x + c h^2) in factored-root form."""
    a = field.coerce(alpha)
    b = field.coerce(beta)
    c = field.coerce(gamma)
    if field.is_zero(a) or field.is_zero(b) or field.is_zero(c):
        raise SingularFamilyMember("alpha*beta*gamma = 0")
    f, g, h = triple if triple is not None else standard_triple(field)
    fam = FamilyTriple(a, b, c, f, g, h)
    fam.validate()
    roots = (RatFunc((f * f).scale(-a)), RatFunc((g * g).scale(-b)), RatFunc((h * h).scale(-c)))
    return WeierstrassCurve(field, roots, family=fam)


def two_torsion(E: WeierstrassCurve) -> list[CurvePoint]:
    zero = RatFunc.const(E.field, 0)
    return [CurvePoint(E, r, zero) for r in E.roots]


def quadratic_twist(E: WeierstrassCurve, delta) -> tuple[WeierstrassCurve, Callable]:
    """Twist by delta: roots r_i -> delta*r_i; (a, b*sqrt(delta)) -> (a*delta, b*delta^2).

    The transfer takes a point given by the pair (a, b) with b = y/sqrt(delta)
    rational and returns the honest point on the twist.
    """
    if isinstance(delta, Poly):
        delta = RatFunc(delta)
    if not isinstance(delta, RatFunc):
        delta = RatFunc.const(E.field, delta)
    if delta.is_zero():
        raise ValueError("twist by zero")
    roots = tuple(r * delta for r in E.roots)
    Et = WeierstrassCurve(E.field, roots, isotrivial=E.isotrivial)

    def transfer(a: RatFunc, b: RatFunc) -> CurvePoint:
        return CurvePoint(Et, a * delta, b * delta * delta)

    return Et, transfer


@dataclass
class IsogenyMap:
    domain: WeierstrassCurve
    codomain: WeierstrassCurve
    x_map: Callable[[RatFunc], RatFunc]
    y_map: Callable[[RatFunc, RatFunc], RatFunc]
    degree: int = 2

    def __call__(self, P: CurvePoint) -> CurvePoint:
        if P.is_infinity:
            return self.codomain.infinity()
        if P.x.is_zero():  # kernel point (0, 0)
            return self.codomain.infinity()
        return CurvePoint(self.codomain, self.x_map(P.x), self.y_map(P.x, P.y))


def two_isogeny_quotient(E: WeierstrassCurve, f: Poly, g: Poly) -> IsogenyMap:
    """Quotient of y^2 = x(x - f^2)(x - g^2) by the kernel {O, (0, 0)}.

    tau(x, y) = ((x^2 + f^2 g^2)/x, (x^2 y - f^2 g^2 y)/x^2), followed by the
    shift X -> X + f^2 + g^2 landing on y^2 = x(x + (f - g)^2)(x + (f + g)^2).
    """
    F = E.field
    zero = RatFunc.const(F, 0)
    f2 = RatFunc(f * f)
    g2 = RatFunc(g * g)
    if set(E.roots) != {zero, f2, g2}:
        raise ValueError("curve must be y^2 = x(x - f^2)(x - g^2) with (0,0) on it")
    fg2 = f2 * g2
    shift = f2 + g2
    fmg = RatFunc((f - g) ** 2)
    fpg = RatFunc((f + g) ** 2)
    codomain = WeierstrassCurve(F, (zero, -fmg, -fpg))

    def x_map(x: RatFunc) -> RatFunc:
        return (x * x + fg2) / x - shift

    def y_map(x: RatFunc, y: RatFunc) -> RatFunc:
        return (x * x - fg2) * y / (x * x)

    return IsogenyMap(E, codomain, x_map, y_map)


# ---------------------------------------------------------------------------
# CM endomorphisms of degree 2 on the three tabulated models
# ---------------------------------------------------------------------------

#   j = 1728:  y^2 = x^3 + x          omega = 1 + sqrt(-1)
#   j = 8000:  y^2 = x^3 + 4x^2 + 2x  omega = sqrt(-2)
#   j = -3375: y^2 = x^3 - 35x + 98   omega = (1 + sqrt(-7))/2
CM_JS = (1728, 8000, -3375)
# generators of the smallest multiquadratic field containing omega and the model roots
CM_MAP_GENS = {1728: (-1,), 8000: (2, -1), -3375: (-7,)}


def cm_model(j: int) -> WeierstrassCurve:
    """The fixed CM model for j in {1728, 8000, -3375} over its natural field."""
    if j == 1728:
        F = MQField((-1,))
        t0 = RatFunc.const(F, 0)
        i = F.gen(-1)
        return WeierstrassCurve(F, (t0, RatFunc.const(F, i), RatFunc.const(F, -i)))
    if j == 8000:
        F = MQField((2,))
        r2 = F.gen(2)
        # x(x^2 + 4x + 2): roots 0, -2 + sqrt2, -2 - sqrt2
        return WeierstrassCurve(F, (RatFunc.const(F, 0),
                                    RatFunc.const(F, -2 + r2),
                                    RatFunc.const(F, -2 - r2)))
    if j == -3375:
        F = MQField((-7,))
        r7 = F.gen(-7)
        half = F.from_rational(rational("1/2"))
        # x^3 - 35x + 98 = (x + 7)(x^2 - 7x + 14): roots -7, (7 +- sqrt(-7))/2
        return WeierstrassCurve(F, (RatFunc.const(F, -7),
                                    RatFunc.const(F, (7 + r7) * half),
                                    RatFunc.const(F, (7 - r7) * half)))
    raise ValueError(f"unsupported CM j-invariant {j}")


def cm_maps(j: int, field=None):
    """The degree-2 endomorphism [omega] as (x_map, y_multiplier) rational maps.

    Returns (F, omega, xfun, yfun) where xfun(x) is the image x-coordinate and
    yfun(x) multiplies y, i.e. [omega](x, y) = (xfun(x), y * yfun(x)).  The
    third model's printed x-scale is taken as omega^-2 (an on-curve check
    rejects the alternative reading).
    """
    if j == 1728:
        F = field or MQField((-1,))
        i = F.coerce(MQField((-1,)).gen(-1)) if field else F.gen(-1)
        omega = 1 + i
        w2 = omega * omega
        w3 = w2 * omega

        def xfun(x: RatFunc) -> RatFunc:
            return (x + 1 / x) / w2

        def yfun(x: RatFunc) -> RatFunc:
            return (1 - 1 / (x * x)) / w3

        return F, omega, xfun, yfun
    if j == 8000:
        F = field or MQField((2, -1))
        base = MQField((2, -1))
        omega = F.coerce(base.gen(2) * base.gen(-1))  # sqrt(-2)
        w2 = omega * omega
        w3 = w2 * omega

        def xfun(x: RatFunc) -> RatFunc:
            return (x + 4 + 2 / x) / w2

        def yfun(x: RatFunc) -> RatFunc:
            return (1 - 2 / (x * x)) / w3

        return F, omega, xfun, yfun
    if j == -3375:
        F = field or MQField((-7,))
        base = MQField((-7,))
        omega = F.coerce((1 + base.gen(-7)) * base.from_rational(rational("1/2")))
        w2 = omega * omega
        w3 = w2 * omega
        c = 7 * (1 - omega) ** 4
        shift = w2 - 2

        def xfun(x: RatFunc) -> RatFunc:
            return (x - c / (x + shift)) / w2

        def yfun(x: RatFunc) -> RatFunc:
            return (1 + c / ((x + shift) * (x + shift))) / w3

        return F, omega, xfun, yfun
    raise ValueError(f"unsupported CM j-invariant {j}")


def cm_endomorphism_apply(j: int, P: CurvePoint) -> CurvePoint:
    """Apply [omega] on the fixed model for j; kernel points map to O."""
    E = P.curve
    if P.is_infinity:
        return E.infinity()
    F, _omega, xfun, yfun = cm_maps(j, field=E.field)
    # kernel: the 2-torsion point where the formula has a pole
    try:
        xi = xfun(P.x)
        ym = yfun(P.x)
    except ZeroDivisionError:
        return E.infinity()
    return CurvePoint(E, xi, P.y * ym)
