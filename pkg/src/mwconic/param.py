"""Conic parametrization tools, Moebius standardization, specialization tests,
the quadric/CM stratum pipeline, Galois fixed modules, and homogeneous forms.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from typing import Callable, Optional, Sequence

try:
    from gmpy2 import mpq
except ImportError:  # pragma: no cover
    from fractions import Fraction as mpq

from .algebra import (MQField, Poly, QQ, RatFunc, factor_poly, integer_kernel,
                      is_prime, mat_mul, mat_sub, identity as int_identity,
                      rational, rational_is_square, squarefree_kernel, unify_fields)
from .algebra.intnt import squarefree_decompose
from .curves import (CM_JS, CM_MAP_GENS, CurvePoint, WeierstrassCurve, cm_maps,
                     cm_model, standard_triple)
from .heights import GramData, Section, gram, section_from_point, unify_sections
from .surface import fiber_configuration


# ---------------------------------------------------------------------------
# parametrizations and Moebius standardization
# ---------------------------------------------------------------------------


@dataclass
class Moebius:
    """t -> (a t + b)/(c t + d) with ad - bc != 0, entries in a fixed field."""

    field: object
    a: object
    b: object
    c: object
    d: object

    def __post_init__(self):
        F = self.field
        self.a, self.b = F.coerce(self.a), F.coerce(self.b)
        self.c, self.d = F.coerce(self.c), F.coerce(self.d)
        if F.is_zero(self.a * self.d - self.b * self.c):
            raise ValueError("ad - bc = 0: not invertible")

    def inverse(self) -> "Moebius":
        return Moebius(self.field, self.d, -self.b, -self.c, self.a)

    def numden(self) -> tuple[Poly, Poly]:
        F = self.field
        return (Poly(F, (self.b, self.a)), Poly(F, (self.d, self.c)))

    def act_poly(self, p: Poly) -> RatFunc:
        """p((at+b)/(ct+d)) as a rational function."""
        num, den = self.numden()
        F = p.field
        n = p.degree
        if n < 0:
            return RatFunc.const(F, 0)
        out = Poly.zero(F)
        for i, coeff in enumerate(p.coeffs):
            out = out + (num ** i) * (den ** (n - i)).scale(coeff)
        return RatFunc(out, den ** n)

    def act(self, f: RatFunc) -> RatFunc:
        return self.act_poly(f.num) / self.act_poly(f.den)


def is_proper_parametrization(f: Poly, g: Poly, h: Poly) -> bool:
    """True iff (f/h, g/h) parametrizes a^2 + b^2 = c^2 properly (degree 2).

    A proper parametrization of a smooth conic has degree exactly
    max(deg_x, deg_y) = 2 of the defining polynomial, with each nonzero
    coordinate hitting the matching partial degree.
    """
    if (f * f + g * g) != h * h:
        raise ValueError("triple is not on the conic: f^2 + g^2 != h^2")
    x1 = RatFunc(f, h)
    x2 = RatFunc(g, h)
    if x1.is_constant() and x2.is_constant():
        raise ValueError("constant parametrizations are not parametrizations")
    deg = max(x1.degree, x2.degree)
    if deg != 2:
        return False
    ok1 = x1.is_zero() or x1.degree == 2
    ok2 = x2.is_zero() or x2.degree == 2
    return ok1 and ok2


def standardizing_moebius(f: Poly, g: Poly, h: Poly) -> tuple[Moebius, bool]:
    """Moebius gamma relating (f, g, h) to the standard triple, plus a swap flag.

    With deg f = 2 (swapping f and g first if needed; the flag reports it),
    write h - g = L1 (t - alpha)^2 and h + g = L2 (t - beta)^2; then
    gamma = [[e/L1, -(e/L1) beta], [1, -alpha]] with e = lc(f) satisfies

        f/h = 2u/(1 + u^2),   g/h = (u^2 - 1)/(1 + u^2)   at u = gamma(t),

    proving constructively that gamma is defined over the coefficient field.
    """
    F = f.field
    swapped = False
    if f.degree != 2:
        if g.degree != 2:
            raise ValueError("improper triple: neither f nor g has degree 2")
        f, g = g, f
        swapped = True

    def sqrt_linear(p: Poly):
        if p.degree != 2:
            raise ValueError(f"{p} is not the square of a linear polynomial")
        L = p.lead
        alpha = -p[1] / (2 * L)
        lin = Poly(F, (-alpha, F.one))
        if lin * lin.scale(L) != p:
            raise ValueError(f"{p} is not L*(t - alpha)^2: triple not proper")
        return L, alpha

    L1, alpha = sqrt_linear(h - g)
    L2, beta = sqrt_linear(h + g)
    e = f.lead
    ratio = e / L1  # = d/c, rational in the coefficient field
    gamma = Moebius(F, ratio, -ratio * beta, F.one, -alpha)

    # verification of the composition identity (coordinate-swapped standard form)
    u = gamma.act(RatFunc.t(F))
    lhs1 = RatFunc(f, h)
    lhs2 = RatFunc(g, h)
    rhs1 = 2 * u / (1 + u * u)
    rhs2 = (u * u - 1) / (1 + u * u)
    if not (lhs1 == rhs1 and lhs2 == rhs2):
        raise ValueError("standardizing Moebius verification failed")
    return gamma, swapped


def apply_moebius_to_curve(E: WeierstrassCurve, gamma: Moebius):
    """Base change t -> gamma(t), renormalized to a polynomial model.

    Returns (curve, transport) where transport maps sections (x, y) to the new
    model via (x, y) -> (x(gamma t) * q^(2m), y(gamma t) * q^(3m)) with
    q = ct + d and 2m clearing the substituted root denominators.
    """
    F = E.field
    _, den = gamma.numden()
    max_deg = max(r.num.degree for r in E.roots)
    m = (max_deg + 1) // 2
    scale = RatFunc(den ** (2 * m))
    roots = tuple(gamma.act(r) * scale for r in E.roots)
    new_iso = None
    if E.isotrivial is not None:
        delta, r = E.isotrivial
        new_iso = (gamma.act(delta) * scale, r)
    Enew = WeierstrassCurve(F, roots, isotrivial=new_iso)
    scale_y = RatFunc(den ** (3 * m))

    def transport(S: Section) -> Section:
        x2 = gamma.act(S.x) * scale
        y2 = gamma.act(S.y) * scale_y
        return Section(Enew, x2, y2 * y2, y2, S.label)

    return Enew, transport


# ---------------------------------------------------------------------------
# specialization condition (*)
# ---------------------------------------------------------------------------


@dataclass
class StarClass:
    """One squarefree divisor class c * prod(factors), tested modulo squares."""

    constant: int
    factors: tuple[Poly, ...]

    def value_at(self, t0) -> "mpq":
        v = mpq(self.constant)
        for p in self.factors:
            v *= p(t0)
        return v

    def __repr__(self):
        body = "*".join(f"({p})" for p in self.factors)
        return f"{self.constant}*{body}" if self.constant != 1 else body or "1"


@dataclass
class StarConditionReport:
    t0: object
    admissible: bool
    failing: Optional[StarClass]
    classes_tested: int


def _primitive_int_poly(p: Poly) -> tuple[Poly, int]:
    """Scale a monic rational poly to primitive integer form; returns (poly, content=1)."""
    dens = [int(c.denominator) for c in p.coeffs]
    lcm = 1
    for d in dens:
        lcm = lcm * d // math.gcd(lcm, d)
    ints = [int(c * lcm) for c in p.coeffs]
    g = 0
    for v in ints:
        g = math.gcd(g, abs(v))
    g = g or 1
    return Poly(QQ, [v // g for v in ints]), 1


def star_condition_classes(e1: Poly, e2: Poly, e3: Poly
                           ) -> tuple[list[StarClass], int]:
    """All squarefree divisor classes of the three products (e_i - e_j)(e_i - e_k).

    Classes are c * m with m a nonempty product of distinct primitive
    irreducible factors and c a signed squarefree divisor of the content; they
    are deduplicated modulo squares.  Also returns the number of distinct
    positive-content classes (the paper-style count).
    """
    prods = [(e1 - e2) * (e1 - e3), (e2 - e1) * (e2 - e3), (e3 - e1) * (e3 - e2)]
    classes: dict = {}
    for F in prods:
        if F.is_zero():
            raise ValueError("repeated e_i: torsion coordinates must be distinct")
        if any(int(c.denominator) != 1 for c in F.coeffs):
            raise ValueError("torsion coordinates must lie in Z[t]")
        g = 0
        for v in F.coeffs:
            g = math.gcd(g, abs(int(v)))
        content_int = g or 1
        irr = []
        for fac, _e in factor_poly(F):
            if fac.degree >= 1:
                prim, _ = _primitive_int_poly(fac)
                irr.append(prim)
        cont_divs = _squarefree_divisors(content_int)
        for r in range(1, len(irr) + 1):
            for sub in itertools.combinations(range(len(irr)), r):
                key_polys = tuple(sorted((repr(irr[i]) for i in sub)))
                for cd in cont_divs:
                    for sign in (1, -1):
                        c = sign * cd
                        key = (c, key_polys)
                        if key not in classes:
                            classes[key] = StarClass(c, tuple(irr[i] for i in sub))
    positive = sum(1 for (c, _k) in classes if c > 0)
    return list(classes.values()), positive


def _squarefree_divisors(n: int) -> list[int]:
    n = abs(n)
    if n == 0:
        return [1]
    primes = sorted(p for p in squarefree_decompose_int_primes(n))
    out = []
    for r in range(len(primes) + 1):
        for sub in itertools.combinations(primes, r):
            d = 1
            for p in sub:
                d *= p
            out.append(d)
    return sorted(set(out))


def squarefree_decompose_int_primes(n: int) -> list[int]:
    from .algebra import factorint
    return list(factorint(n).keys()) if n > 1 else []


def specialization_star(e1: Poly, e2: Poly, e3: Poly, t0,
                        classes: Optional[list[StarClass]] = None) -> StarConditionReport:
    """Test condition (*) at t0: no tested divisor class evaluates to a rational square."""
    t0 = rational(t0)
    if classes is None:
        classes, _ = star_condition_classes(e1, e2, e3)
    for cls in classes:
        v = cls.value_at(t0)
        if v >= 0 and rational_is_square(v) is not None:
            return StarConditionReport(t0, False, cls, len(classes))
    return StarConditionReport(t0, True, None, len(classes))


def standard_star_data():
    """(e1, e2, e3) = (0, (t^2-1)^2, 4t^2) for the standard-triple model."""
    t = Poly.x(QQ)
    return Poly.zero(QQ) + 0 * t, (t * t - 1) ** 2, 4 * t * t


@dataclass
class SurveyResult:
    height: int
    total: int
    admissible_count: int
    admissible: Optional[list]  # list of mpq for small surveys, else None

    @property
    def fraction(self) -> float:
        return self.admissible_count / self.total if self.total else 0.0


def survey_specializations(height: int, e_triple=None,
                           keep_list: bool = None) -> SurveyResult:
    """Condition (*) over all t0 = a/b with gcd(a, b) = 1, max(|a|, b) <= height."""
    if keep_list is None:
        keep_list = height <= 50
    if e_triple is None:
        return _survey_standard(height, keep_list)
    e1, e2, e3 = e_triple
    classes, _ = star_condition_classes(e1, e2, e3)
    total = 0
    good: list = []
    count = 0
    for a, b in _farey_pairs(height):
        t0 = mpq(a, b)
        total += 1
        rep = specialization_star(e1, e2, e3, t0, classes=classes)
        if rep.admissible:
            count += 1
            if keep_list:
                good.append(t0)
    return SurveyResult(height, total, count, good if keep_list else None)


def _farey_pairs(H: int):
    for b in range(1, H + 1):
        for a in range(-H, H + 1):
            if math.gcd(abs(a), b) == 1:
                yield a, b


def _survey_standard(H: int, keep_list: bool) -> SurveyResult:
    """Fast path for e = (0, (t^2-1)^2, 4t^2) via squarefree kernels.

    Base squarefree values at t0 = a/b: t ~ ab, t-1 ~ (a-b)b, t+1 ~ (a+b)b,
    q1 = t^2-2t-1 ~ a^2-2ab-b^2, q2 = t^2+2t-1 ~ a^2+2ab-b^2.  A divisor class
    c*m is a square at t0 iff the product of the kernels of its factors equals
    c modulo squares; the admissible verdict scans all mask/constant combos.
    """
    # masks index the factor list [t, t-1, t+1, q1, q2]
    combos: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    pm12 = (1, -1, 2, -2)
    pm1 = (1, -1)
    f1 = [m for m in range(1, 8)]  # subsets of {t, t-1, t+1}
    f2 = [m << 1 for m in range(1, 16) if (m << 1) & 0b11000]  # touch q1/q2, no t
    f3 = [m for m in range(1, 32) if (m & 0b11000) and not (m & 0b00110)]
    seen = {}
    for mask in f1:
        seen.setdefault(mask, set()).update(pm12)
    for mask in f2:
        seen.setdefault(mask, set()).update(pm1)
    for mask in f3:
        seen.setdefault(mask, set()).update(pm12)
    mask_consts = sorted((m, tuple(sorted(cs))) for m, cs in seen.items())

    sieve_bound = 3 * H * H + 1
    spf = _smallest_prime_factors(sieve_bound)

    def kernel(v: int) -> int:
        if v == 0:
            return 0
        sign = -1 if v < 0 else 1
        v = abs(v)
        out = sign
        while v > 1:
            p = spf[v]
            e = 0
            while v % p == 0:
                v //= p
                e += 1
            if e % 2:
                out *= p
        return out

    total = 0
    count = 0
    good: list = []
    for a, b in _farey_pairs(H):
        total += 1
        ks = (kernel(a * b), kernel((a - b) * b), kernel((a + b) * b),
              kernel(a * a - 2 * a * b - b * b), kernel(a * a + 2 * a * b - b * b))
        ok = True
        for mask, consts in mask_consts:
            prod = 1
            zero = False
            for i in range(5):
                if mask >> i & 1:
                    ki = ks[i]
                    if ki == 0:
                        zero = True
                        break
                    g = math.gcd(abs(prod), abs(ki))
                    prod = (prod // g) * (ki // g)
            if zero or prod in consts:
                ok = False
                break
        if ok:
            count += 1
            if keep_list:
                good.append(mpq(a, b))
    return SurveyResult(H, total, count, sorted(good) if keep_list else None)


def _smallest_prime_factors(n: int):
    import numpy as np
    spf = np.arange(n + 1, dtype=np.int64)
    for i in range(2, int(n ** 0.5) + 1):
        if spf[i] == i:
            sl = spf[i * i:: i]
            sl[sl == np.arange(i * i, n + 1, i)] = i
    return spf


# ---------------------------------------------------------------------------
# quadric stratum: isotrivial I0* surfaces and CM points
# ---------------------------------------------------------------------------


def quadric_delta(r, field) -> Poly:
    t = Poly.x(field)
    one = Poly.one(field)
    return (one.scale(r) - one) - (2 * t * t).scale(r + 1) + (t ** 4).scale(r - 1)


def quadric_curve(r, field=None) -> WeierstrassCurve:
    """The shifted quadric-stratum model y^2 = x (x + delta)(x + r delta)."""
    if field is None:
        field = QQ
    r = field.coerce(r)
    if field.is_zero(r) or r == 1:
        raise ValueError("r in {0, 1} gives a singular member")
    delta = quadric_delta(r, field)
    zero = RatFunc.const(field, 0)
    E = WeierstrassCurve(field, (zero, RatFunc(-delta), RatFunc(-delta.scale(r))),
                         isotrivial=(RatFunc(delta), r))
    inv = E.invariants()
    expected = RatFunc((delta ** 6).scale(16 * r * r * (r - 1) * (r - 1)))
    assert inv["delta"] == expected, "quadric discriminant 16 r^2 (r-1)^2 delta^6 failed"
    return E


def constant_j(r, field) -> object:
    """j-invariant of y^2 = x(x-1)(x-r) (Legendre lambda = r)."""
    r = field.coerce(r)
    num = 256 * (r * r - r + 1) ** 3
    den = (r * (r - 1)) ** 2
    return num / den


def detect_cm_j(r, field) -> Optional[int]:
    j = constant_j(r, field)
    for cand in CM_JS:
        if j == field.coerce(cand):
            return cand
    return None


def _match_affine(field, src: tuple, dst: tuple):
    """Affine map x -> m x + v with {0, 1, r} -> dst as ordered sets, if any."""
    s0, s1, s2 = src
    for perm in itertools.permutations(dst):
        A, B, C = perm
        m = (B - A) / (s1 - s0)
        v = A - m * s0
        if m * s2 + v == C and not field.is_zero(m):
            return m, v
    return None


@dataclass
class QuadricBuild:
    r: object
    curve: WeierstrassCurve
    fibers: list
    summary: object
    points: list
    gram: Optional[GramData]
    cm_j: Optional[int]
    note: str = ""


def quadric_kummer_build(r, field=None) -> QuadricBuild:
    """Build the isotrivial quadric-stratum surface and its Mordell-Weil data.

    Constructs P1 = (4 r t^2, 2 r (r-1) t (t^4 - 1)); when the constant curve
    y^2 = x(x-1)(x-r) has CM with j in {1728, 8000, -3375}, a second point is
    produced by conjugating the degree-2 endomorphism through the twist.
    """
    if field is None:
        field = QQ
    r0 = field.coerce(r)
    cm_j = detect_cm_j(r0, field)
    work_field = field
    if cm_j is not None:
        work_field = unify_fields(field, MQField(CM_MAP_GENS[cm_j]))
    rw = work_field.coerce(r0)
    E = quadric_curve(rw, work_field)
    fibers, summary = fiber_configuration(E)
    assert all(fd.kodaira.kind == "I*" and fd.kodaira.n == 0 for fd in fibers), \
        "quadric stratum must have only I0* fibers"
    assert sum(fd.place.degree for fd in fibers) == 4

    t = Poly.x(work_field)
    x1 = RatFunc((t * t).scale(4 * rw))
    y1 = RatFunc((t ** 5 - t).scale(2 * rw * (rw - 1)))
    P1 = section_from_point(E, x1, y1, label="P1")
    points = [P1]
    note = ""
    if cm_j is None:
        note = "CM undetected: rank-1 data only"
        return QuadricBuild(r0, E, fibers, summary, points, gram(points), None, note)

    # conjugate [omega] through the affine match of {0,1,r} with the CM roots
    Ecm = cm_model(cm_j)
    _F, _omega, xfun, yfun = cm_maps(cm_j, field=work_field)
    cm_roots = tuple(root.constant_value() for root in
                     (Ecm.change_field(work_field, work_field.coerce).roots))
    match = _match_affine(work_field, (work_field.zero, work_field.one, rw), cm_roots)
    assert match is not None, "CM model roots do not match {0, 1, r} affinely"
    m, v = match
    delta, _ = E.isotrivial

    def endo_twisted(S: Section) -> Section:
        a = S.x / (-delta)
        X = m * a + v
        a_new = (xfun(X) - v) / m
        mult = yfun(X)
        x_new = a_new * (-delta)
        y_new = S.y * mult
        return section_from_point(E, x_new, y_new, label=f"[w]{S.label}")

    P2 = endo_twisted(P1)
    points = [P1, P2]
    return QuadricBuild(r0, E, fibers, summary, points, gram(points), cm_j, note)


# ---------------------------------------------------------------------------
# Galois fixed submodule
# ---------------------------------------------------------------------------


def galois_fixed_submodule(mats: Sequence[Sequence[Sequence[int]]],
                           word: Sequence[int]):
    """Integer kernel of (prod_{i in word} rho_i) - 1 for a (Z/2)^k representation.

    Validates the representation axioms first: each generator squares to the
    identity and the generators commute pairwise.
    """
    n = len(mats[0])
    I = int_identity(n)
    for M in mats:
        if mat_mul(M, M) != I:
            raise ValueError("generator is not an involution")
    for A, B in itertools.combinations(mats, 2):
        if mat_mul(A, B) != mat_mul(B, A):
            raise ValueError("generators do not commute")
    prod = I
    for i in word:
        prod = mat_mul(prod, mats[i])
    return integer_kernel(mat_sub(prod, I))


# ---------------------------------------------------------------------------
# homogeneous point forms on the conic
# ---------------------------------------------------------------------------


class HomPoly:
    """Homogeneous polynomial in Q(a, b, c)/(a^2 + b^2 - c^2), c-degree <= 1."""

    __slots__ = ("deg", "coeffs")

    def __init__(self, deg: int, coeffs=None):
        self.deg = deg
        self.coeffs = dict(coeffs or {})  # (i, j, eps) -> mpq, i + j + eps = deg

    @staticmethod
    def monomial(i: int, j: int, k: int, coeff=1) -> "HomPoly":
        """a^i b^j c^k reduced so that the c-exponent is 0 or 1."""
        out = HomPoly(i + j + k, {(i, j, k % 2): mpq(coeff)})
        if k >= 2:
            # c^2 = a^2 + b^2
            base = HomPoly(i + j + (k % 2), {(i, j, k % 2): mpq(coeff)})
            quad = HomPoly(2, {(2, 0, 0): mpq(1), (0, 2, 0): mpq(1)})
            for _ in range(k // 2):
                base = base * quad
            return base
        return out

    def __add__(self, other: "HomPoly") -> "HomPoly":
        if other.deg != self.deg and self.coeffs and other.coeffs:
            raise ValueError("inhomogeneous sum")
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, mpq(0)) + v
            if out[k] == 0:
                del out[k]
        return HomPoly(max(self.deg, other.deg), out)

    def __neg__(self):
        return HomPoly(self.deg, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "HomPoly") -> "HomPoly":
        out: dict = {}
        for (i1, j1, e1), v1 in self.coeffs.items():
            for (i2, j2, e2), v2 in other.coeffs.items():
                i, j, e = i1 + i2, j1 + j2, e1 + e2
                coeff = v1 * v2
                if e == 2:  # c^2 -> a^2 + b^2
                    for (ii, jj) in ((i + 2, j), (i, j + 2)):
                        key = (ii, jj, 0)
                        out[key] = out.get(key, mpq(0)) + coeff
                else:
                    key = (i, j, e)
                    out[key] = out.get(key, mpq(0)) + coeff
        out = {k: v for k, v in out.items() if v != 0}
        return HomPoly(self.deg + other.deg, out)

    def scale(self, c) -> "HomPoly":
        c = mpq(c)
        return HomPoly(self.deg, {k: v * c for k, v in self.coeffs.items() if v * c != 0})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return isinstance(other, HomPoly) and (self - other).is_zero()

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for (i, j, e), v in sorted(self.coeffs.items()):
            mono = "*".join(filter(None, [f"a^{i}" if i else "", f"b^{j}" if j else "",
                                          "c" if e else ""]))
            parts.append(f"({v}){'*' + mono if mono else ''}")
        return " + ".join(parts)


def _hom_of_poly(p: Poly, var_b: HomPoly, var_w: HomPoly, deg_bound: int) -> HomPoly:
    """p(b/w) * w^deg_bound as a homogeneous polynomial (deg_bound >= deg p)."""
    terms = []
    for i, c in enumerate(p.coeffs):
        if c == 0:
            continue
        term = HomPoly(0, {(0, 0, 0): mpq(1)})
        for _ in range(i):
            term = term * var_b
        for _ in range(deg_bound - i):
            term = term * var_w
        terms.append(term.scale(mpq(c)))
    if not terms:
        return HomPoly(deg_bound, {})
    out = terms[0]
    for t in terms[1:]:
        out = out + t
    return out


@dataclass
class HomogeneousForm:
    k: HomPoly
    l: HomPoly
    m: HomPoly

    def degree_relations(self) -> tuple[int, int, int]:
        return (self.k.deg, self.l.deg, self.m.deg)


def homogeneous_point_form(x: RatFunc, y: RatFunc) -> HomogeneousForm:
    """Express a section of y^2 = x(x - f^2)(x - g^2) homogeneously on the conic.

    Substituting t = b/(c - a) and rescaling (x, y) -> (x a^2, y a^3) produces
    x = k/l^2, y = m/l^3 with deg k = 2 + 2 deg l and deg m = 3 + 3 deg l; the
    output satisfies m^2 = k (k - a^2 l^2)(k - b^2 l^2) modulo a^2 + b^2 - c^2.
    """
    F = x.field
    # canonical section shape: den(x) = d^2, den(y) = d^3
    den = x.den
    pieces = den.squarefree_decomposition()
    d = Poly.one(F)
    for gpoly, e in pieces:
        if e % 2:
            raise ValueError("x-denominator is not a square: not a section of the model")
        d = d * gpoly ** (e // 2)
    n = x.num
    mnum = (y * RatFunc(d ** 3)).num
    if not (y * RatFunc(d ** 3)).is_polynomial():
        raise ValueError("y-denominator is not d^3: not a section of the model")
    N, M, Dd = n.degree, mnum.degree, d.degree

    A = HomPoly.monomial(1, 0, 0)
    B = HomPoly.monomial(0, 1, 0)
    C = HomPoly.monomial(0, 0, 1)
    W = C - A  # w = c - a
    CA = C + A  # (c + a), with w*(c+a) = b^2 on the conic

    ex_x = 2 * Dd + 2 - N
    ex_y = 3 * Dd + 3 - M
    s = max(0, -ex_x)
    if ex_y < 0:
        s = max(s, (2 * (-ex_y) + 2) // 3)  # ceil(2|ex_y|/3)

    n_h = _hom_of_poly(n, B, W, N) if N >= 0 else HomPoly(0, {})
    m_h = _hom_of_poly(mnum, B, W, M) if M >= 0 else HomPoly(0, {})
    d_h = _hom_of_poly(d, B, W, Dd)

    def w_power_adjust(base: HomPoly, exp: int, bpow: int) -> HomPoly:
        """base * w^exp * b^bpow with negative w-powers via w^-1 = (c+a)/b^2."""
        out = base
        if exp >= 0:
            for _ in range(exp):
                out = out * W
        else:
            for _ in range(-exp):
                out = out * CA
            bpow -= 2 * (-exp)
        if bpow < 0:
            raise ValueError("insufficient b-power in the normalizing factor")
        for _ in range(bpow):
            out = out * B
        return out

    lpoly = d_h.scale(2)
    for _ in range(s):
        lpoly = lpoly * B
    k = w_power_adjust(n_h, ex_x, 2 * s) if not n_h.is_zero() else HomPoly(0, {})
    mh = w_power_adjust(m_h, ex_y, 3 * s) if not m_h.is_zero() else HomPoly(0, {})
    form = HomogeneousForm(k, lpoly, mh)
    # Weierstrass identity m^2 = k (k - a^2 l^2)(k - b^2 l^2) modulo the conic
    l2 = lpoly * lpoly
    lhs = mh * mh
    rhs = k * (k - (A * A) * l2) * (k - (B * B) * l2)
    if not (lhs - rhs).is_zero():
        raise ValueError("homogeneous form fails the Weierstrass identity")
    return form
