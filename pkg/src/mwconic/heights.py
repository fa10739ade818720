"""Shioda height pairings from explicit intersection theory on the smooth model.

For sections P, Q of an elliptic surface over P^1 with Euler characteristic chi:

    <P,Q> = chi + P.O + Q.O - P.Q - sum_v c_v(P,Q)
    <P,P> = 2*chi + 2*P.O - sum_v c_v(P,P)

P.O counts (half) pole orders of x(P); P.Q is computed place by place, with
blow-up bookkeeping at the nodes of I_n fibers; the correction terms c_v come
from the fiber component a section reduces to.  Everything is exact and works
over any of the coefficient fields of the algebra layer (Q, multiquadratic
extensions, F_{p^k} with p >= 5).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

try:
    from gmpy2 import mpq
except ImportError:  # pragma: no cover
    from fractions import Fraction as mpq

from .algebra import (Poly, QQ, RatFunc, ResidueField, factor_poly, rational_det,
                      rational_rank, sqrt_with_extension, unify_fields)
from .algebra.fields import FiniteField, MQField
from .curves import CurvePoint, WeierstrassCurve
from .surface import (FiberData, Place, UnsupportedFiberType, fiber_configuration)

_BIG = 10 ** 9  # valuation sentinel used by RatFunc for the zero function


class Section:
    """A point of the generic fiber carried as (x, y^2) plus an explicit y branch."""

    __slots__ = ("curve", "x", "ysq", "y", "label")

    def __init__(self, curve: WeierstrassCurve, x: RatFunc, ysq: RatFunc,
                 y: RatFunc, label: str = ""):
        self.curve = curve
        self.x = x
        self.ysq = ysq
        self.y = y
        self.label = label

    @property
    def field(self):
        return self.curve.field

    def __repr__(self):
        name = self.label or "section"
        return f"{name}: ({self.x}, {self.y})"

    def __neg__(self) -> "Section":
        return Section(self.curve, self.x, self.ysq, -self.y,
                       f"-{self.label}" if self.label else "")

    def to_point(self) -> CurvePoint:
        return CurvePoint(self.curve, self.x, self.y)

    def is_torsion_two(self) -> bool:
        return self.y.is_zero()

    def __add__(self, other: "Section") -> "Section":
        P, Q = unify_sections(self, other)
        R = P.to_point() + Q.to_point()
        if R.is_infinity:
            raise ValueError("sum is the zero section")
        return Section(P.curve, R.x, R.y * R.y, R.y)

    def __sub__(self, other: "Section") -> "Section":
        return self + (-other)

    def __mul__(self, n: int) -> "Section":
        R = self.to_point() * n
        if R.is_infinity:
            raise ValueError("multiple is the zero section")
        return Section(self.curve, R.x, R.y * R.y, R.y)

    __rmul__ = __mul__


def section_from_point(E: WeierstrassCurve, x, y, label: str = "") -> Section:
    x = x if isinstance(x, RatFunc) else (RatFunc(x) if isinstance(x, Poly)
                                          else RatFunc.const(E.field, x))
    y = y if isinstance(y, RatFunc) else (RatFunc(y) if isinstance(y, Poly)
                                          else RatFunc.const(E.field, y))
    ysq = y * y
    if ysq != E.rhs(x):
        raise ValueError(f"({x}, {y}) is not on the curve")
    return Section(E, x, ysq, y, label)


def section_from_x_ysq(E: WeierstrassCurve, x, ysq, label: str = "") -> Section:
    """Build a section from (x, y^2), extracting an explicit square-root branch.

    The constant part of y^2 may force a quadratic extension of the coefficient
    field; the returned section lives on the base-changed curve in that case.
    """
    x = x if isinstance(x, RatFunc) else (RatFunc(x) if isinstance(x, Poly)
                                          else RatFunc.const(E.field, x))
    ysq = ysq if isinstance(ysq, RatFunc) else (RatFunc(ysq) if isinstance(ysq, Poly)
                                                else RatFunc.const(E.field, ysq))
    if ysq != E.rhs(x):
        raise ValueError(f"({x}, y^2 = {ysq}) is not on the curve {E}")
    F = E.field
    if ysq.is_zero():
        return Section(E, x, ysq, RatFunc.const(F, 0), label)
    w = ysq.num * ysq.den
    if isinstance(F, FiniteField):
        pieces = factor_poly(w)
    else:
        pieces = w.squarefree_decomposition()
    s = Poly.one(F)
    for g, e in pieces:
        if e % 2:
            raise ValueError(f"y^2 = {ysq} is not a square over a constant extension")
        s = s * g ** (e // 2)
    c = w.lead
    if isinstance(F, FiniteField):
        root = F.is_square(c)
        if root is None:
            raise ValueError(f"leading constant {c} is not a square in {F}")
        y = RatFunc(s.scale(root), ysq.den)
        return Section(E, x, ysq, y, label)
    F2, root = sqrt_with_extension(F, c)
    if F2 == F:
        y = RatFunc(s.scale(root), ysq.den)
        return Section(E, x, ysq, y, label)
    emb = F2.coerce
    E2 = E.change_field(F2, emb)
    x2 = x.map_coeffs(emb, F2)
    ysq2 = ysq.map_coeffs(emb, F2)
    y2 = RatFunc(s.map_coeffs(emb, F2).scale(root), ysq.den.map_coeffs(emb, F2))
    return Section(E2, x2, ysq2, y2, label)


def torsion_sections(E: WeierstrassCurve) -> list[Section]:
    zero = RatFunc.const(E.field, 0)
    return [Section(E, r, zero, zero, f"T{i+1}") for i, r in enumerate(E.roots)]


def unify_sections(P: Section, Q: Section) -> tuple[Section, Section]:
    """Embed both sections into the compositum of their coefficient fields."""
    FP, FQ = P.field, Q.field
    if FP == FQ:
        if P.curve != Q.curve:
            raise ValueError("sections live on different curves")
        return P, Q
    if isinstance(FP, FiniteField) or isinstance(FQ, FiniteField):
        raise ValueError("cannot unify distinct finite coefficient fields")
    F = unify_fields(FP, FQ)

    def lift(S: Section) -> Section:
        if S.field == F:
            return S
        emb = F.coerce
        E2 = S.curve.change_field(F, emb)
        return Section(E2, S.x.map_coeffs(emb, F), S.ysq.map_coeffs(emb, F),
                       S.y.map_coeffs(emb, F), S.label)

    P2, Q2 = lift(P), lift(Q)
    if P2.curve != Q2.curve:
        raise ValueError("sections live on different curves")
    return P2, Q2


# ---------------------------------------------------------------------------
# configuration cache and chart transforms
# ---------------------------------------------------------------------------

_CONFIG_CACHE: dict = {}


def surface_data(E: WeierstrassCurve):
    key = E
    if key not in _CONFIG_CACHE:
        _CONFIG_CACHE[key] = fiber_configuration(E)
    return _CONFIG_CACHE[key]


def _chart_section(S: Section, chart: WeierstrassCurve, n: int) -> Section:
    return Section(chart, S.x.at_infinity_chart(2 * n), S.ysq.at_infinity_chart(6 * n),
                   S.y.at_infinity_chart(3 * n), S.label)


# ---------------------------------------------------------------------------
# P.O : intersection with the zero section
# ---------------------------------------------------------------------------


def _even_half_degree(den: Poly) -> int:
    """deg(sqrt(den)) for a denominator with all-even multiplicities."""
    if den.degree == 0:
        return 0
    F = den.field
    pieces = factor_poly(den) if isinstance(F, FiniteField) else den.squarefree_decomposition()
    half = 0
    for g, e in pieces:
        if e % 2:
            raise ValueError(f"odd pole order at {g}: model not minimal?")
        half += g.degree * (e // 2)
    return half


def zero_section_intersection(P: Section) -> int:
    """P.O = sum over places of deg(v) * m where v(x(P)) = -2m < 0."""
    total = _even_half_degree(P.x.den)
    E = P.curve
    n = E.infinity_weight()
    v_inf = P.x.at_infinity_chart(2 * n).valuation(Poly.x(E.field))
    if v_inf < 0:
        if v_inf % 2:
            raise ValueError("odd pole order at infinity: model not minimal?")
        total += (-v_inf) // 2
    return total


# ---------------------------------------------------------------------------
# local reduction data at one place
# ---------------------------------------------------------------------------


@dataclass
class ComponentHit:
    """Where a section lands on the fiber at one place.

    kind: 'id-pole' (through fiber infinity), 'id-smooth' (smooth affine point
    of the Weierstrass fiber), 'near' (I_n chain, depth a < n/2), or 'far'
    (I_n depth n/2, or an I_0* far component labeled by a 2-torsion index).
    """

    kind: str
    depth: int = 0
    data: object = None

    @property
    def is_identity(self) -> bool:
        return self.kind in ("id-pole", "id-smooth")

    @property
    def index_label(self) -> str:
        if self.is_identity:
            return "0"
        if self.kind == "near":
            return f"near:{self.depth}"
        return f"far:{self.data}" if self.data is not None else "far"


def _component_In(E: WeierstrassCurve, fd: FiberData, pi: Poly, S: Section) -> ComponentHit:
    m = fd.kodaira.n // 2
    x = S.x
    if x.valuation(pi) < 0:
        return ComponentHit("id-pole")
    R = ResidueField(E.field, pi)
    xres = R.of_ratfunc(x)
    if xres != fd.node_x:
        return ComponentHit("id-smooth", data=xres)
    i, j = fd.pair
    vi = _vnum(x - E.roots[i], pi)
    vj = _vnum(x - E.roots[j], pi)
    a = min(vi, vj, m)
    if a < m:
        return ComponentHit("near", depth=a)
    return ComponentHit("far", depth=m)


def _component_I0star(E: WeierstrassCurve, fd: FiberData, pi: Poly, S: Section) -> ComponentHit:
    if E.isotrivial is None:
        raise UnsupportedFiberType("I0* components need quadric twist data on the curve")
    delta, r = E.isotrivial
    xprime = S.x / (-delta)
    v = xprime.valuation(pi)
    if v < 0:
        return ComponentHit("id-pole" if S.x.valuation(pi) < 0 else "id-smooth")
    R = ResidueField(E.field, pi)
    res = R.of_ratfunc(xprime)
    for e_label, e_val in (("0", E.field.zero), ("1", E.field.one), ("r", r)):
        if res == R.coerce(e_val):
            return ComponentHit("far", depth=1, data=e_label)
    raise UnsupportedFiberType(f"I0* section residue {res} is not a 2-torsion value")


def _hit(E: WeierstrassCurve, fd: FiberData, pi: Poly, S: Section) -> ComponentHit:
    if fd.rescaled:
        raise UnsupportedFiberType("model not minimal at the place; minimize first")
    if fd.kodaira.kind == "I":
        if fd.kodaira.n >= 2:
            return _component_In(E, fd, pi, S)
        return ComponentHit("id-pole" if S.x.valuation(pi) < 0 else "id-smooth")
    if fd.kodaira.kind == "I*" and fd.kodaira.n == 0:
        return _component_I0star(E, fd, pi, S)
    raise UnsupportedFiberType(f"components of {fd.kodaira} not supported")


def component_hit(S: Section, fd: FiberData) -> ComponentHit:
    """Which component of the fiber the section reduces to."""
    E = S.curve
    if fd.place.is_infinity:
        chart, n = E.infinity_chart()
        fd_chart = _refresh_fiber(chart, Poly.x(E.field))
        return _hit(chart, fd_chart, Poly.x(E.field), _chart_section(S, chart, n))
    pi = fd.place.poly
    if pi.field != E.field:
        pi = pi.map_coeffs(E.field.coerce, E.field)
    fd2 = fd if fd.place.poly.field == E.field else _refresh_fiber(E, pi)
    return _hit(E, fd2, pi, S)


def _refresh_fiber(chart: WeierstrassCurve, pi: Poly) -> FiberData:
    from .surface import _classify_finite
    return _classify_finite(chart, pi, compute_split=False)


def _sides_agree(E: WeierstrassCurve, fd: FiberData, pi: Poly,
                 P: Section, Q: Section, aP: int, aQ: int) -> bool:
    """Same-branch test at an I_n node without computing the tangent slope."""
    i = fd.pair[0]
    xiP = P.x - E.roots[i]
    xiQ = Q.x - E.roots[i]
    cross = P.y * xiQ - Q.y * xiP
    if cross.is_zero():
        return True
    return cross.valuation(pi) > aP + aQ


def correction_value(fd: FiberData, hP: ComponentHit, hQ: ComponentHit,
                     agree: Optional[bool] = None) -> "mpq":
    """c_v(P, Q) from the component data (agree: same near-side, when relevant)."""
    if hP.is_identity or hQ.is_identity:
        return mpq(0)
    if fd.kodaira.kind == "I*":
        if hP.data == hQ.data:
            return mpq(1)
        return mpq(1, 2)
    n = fd.kodaira.n
    m = n // 2
    if hP.kind == "far" and hQ.kind == "far":
        return mpq(m, 2)
    if hP.kind == "far" or hQ.kind == "far":
        a = hQ.depth if hP.kind == "far" else hP.depth
        return mpq(a, 2)
    a, b = hP.depth, hQ.depth
    if agree is None:
        raise ValueError("near-near correction needs the side agreement flag")
    if agree:
        a, b = min(a, b), max(a, b)
        return mpq(a * (n - b), n)
    return mpq(a * b, n)


def component_and_correction(P: Section, Q: Section, fd: FiberData):
    """Spec-facing helper: component hits of P and Q at the fiber plus c_v."""
    P2, Q2 = unify_sections(P, Q)
    E = P2.curve
    if fd.place.is_infinity:
        chart, n = E.infinity_chart()
        pi = Poly.x(E.field)
        fd2 = _refresh_fiber(chart, pi)
        Ework, Pw, Qw = chart, _chart_section(P2, chart, n), _chart_section(Q2, chart, n)
    else:
        pi = fd.place.poly
        if pi.field != E.field:
            pi = pi.map_coeffs(E.field.coerce, E.field)
            fd2 = _refresh_fiber(E, pi)
        else:
            fd2 = fd
        Ework, Pw, Qw = E, P2, Q2
    hP = _hit(Ework, fd2, pi, Pw)
    hQ = _hit(Ework, fd2, pi, Qw)
    agree = None
    if hP.kind == "near" and hQ.kind == "near":
        agree = _sides_agree(Ework, fd2, pi, Pw, Qw, hP.depth, hQ.depth)
    return (hP, hQ), correction_value(fd2, hP, hQ, agree)


# ---------------------------------------------------------------------------
# local intersection numbers
# ---------------------------------------------------------------------------


def _vnum(f: RatFunc, pi: Poly) -> int:
    return _BIG if f.is_zero() else f.valuation(pi)


def _local_intersection_at(E: WeierstrassCurve, fd: FiberData, pi: Poly,
                           P: Section, Q: Section) -> int:
    """Intersection multiplicity of the two section curves above one finite place."""
    vxP, vxQ = P.x.valuation(pi), Q.x.valuation(pi)
    if vxP < 0 or vxQ < 0:
        if vxP >= 0 or vxQ >= 0:
            return 0
        # both through fiber infinity: local coordinate u = x/y near the zero section
        u = P.x / P.y - Q.x / Q.y
        return 0 if u.is_zero() else max(0, u.valuation(pi))

    if fd.kodaira.kind == "I" and fd.kodaira.n >= 2:
        hP = _component_In(E, fd, pi, P)
        hQ = _component_In(E, fd, pi, Q)
        if hP.kind != "id-smooth" or hQ.kind != "id-smooth":
            return _local_intersection_node(E, fd, pi, P, Q, hP, hQ)
        # fall through: both at smooth points of the bad fiber
    if fd.kodaira.kind == "I*":
        hP = _component_I0star(E, fd, pi, P)
        hQ = _component_I0star(E, fd, pi, Q)
        if hP.kind == "far" or hQ.kind == "far":
            return _local_intersection_I0star(E, fd, pi, P, Q, hP, hQ)
        # both identity: smooth-point logic below

    # smooth-point meeting (good fiber, or identity components of a bad one)
    R = ResidueField(E.field, pi)
    if _vnum(P.x - Q.x, pi) < 1:
        return 0
    ysqP = R.of_ratfunc(P.ysq)
    if ysqP:  # y0 != 0: need same branch, multiplicity from x
        if _vnum(P.y - Q.y, pi) < 1:
            return 0
        return _vnum(P.x - Q.x, pi)
    return _vnum(P.y - Q.y, pi)


def _local_intersection_node(E, fd, pi, P, Q, hP, hQ) -> int:
    n = fd.kodaira.n
    m = n // 2
    if hP.kind != hQ.kind:
        return 0
    if hP.kind == "id-smooth":
        # both at smooth points of the bad fiber but not the node
        R = ResidueField(E.field, pi)
        if _vnum(P.x - Q.x, pi) < 1:
            return 0
        if R.of_ratfunc(P.ysq):
            if _vnum(P.y - Q.y, pi) < 1:
                return 0
            return _vnum(P.x - Q.x, pi)
        return _vnum(P.y - Q.y, pi)
    if hP.kind == "id-pole":
        u = P.x / P.y - Q.x / Q.y
        return 0 if u.is_zero() else max(0, u.valuation(pi))
    if hP.kind == "near":
        if hP.depth != hQ.depth:
            return 0
        if not _sides_agree(E, fd, pi, P, Q, hP.depth, hQ.depth):
            return 0
        return _vnum(P.x - Q.x, pi) - hP.depth
    # far-far on the middle component
    i = fd.pair[0]
    R = ResidueField(E.field, pi)
    pim = RatFunc(pi ** m)
    uP = R.of_ratfunc((P.x - E.roots[i]) / pim)
    uQ = R.of_ratfunc((Q.x - E.roots[i]) / pim)
    if uP != uQ:
        return 0
    wP = R.of_ratfunc(P.y / pim)
    wQ = R.of_ratfunc(Q.y / pim)
    if wP != wQ:
        return 0
    if wP:
        return _vnum(P.x - Q.x, pi) - m
    return _vnum(P.y - Q.y, pi) - m


def _local_intersection_I0star(E, fd, pi, P, Q, hP, hQ) -> int:
    if hP.kind != "far" or hQ.kind != "far" or hP.data != hQ.data:
        return 0
    delta, r = E.isotrivial
    # translate by the matching 2-torsion section so both land on far_0
    label = hP.data
    e_val = {"0": E.field.zero, "1": E.field.one, "r": r}[label]
    zero = RatFunc.const(E.field, 0)
    if label != "0":
        T = CurvePoint(E, RatFunc.const(E.field, e_val) * (-delta), zero)
        Pp = P.to_point() + T
        Qp = Q.to_point() + T
        P = Section(E, Pp.x, Pp.y * Pp.y, Pp.y)
        Q = Section(E, Qp.x, Qp.y * Qp.y, Qp.y)
    R = ResidueField(E.field, pi)
    pi2 = RatFunc(pi * pi)
    uP = R.of_ratfunc(P.x / pi2)
    uQ = R.of_ratfunc(Q.x / pi2)
    if uP != uQ:
        return 0
    wP = R.of_ratfunc(P.y / pi2)
    wQ = R.of_ratfunc(Q.y / pi2)
    if wP != wQ:
        return 0
    if wP:
        return _vnum(P.x - Q.x, pi) - 2
    return _vnum(P.y - Q.y, pi) - 2


# ---------------------------------------------------------------------------
# global intersection P.Q
# ---------------------------------------------------------------------------


def _supported_degree(N: Poly, G: Poly) -> int:
    """sum of deg(pi) * v_pi(N) over irreducible pi dividing gcd(N, G)."""
    if N.degree < 1 or G.is_zero():
        return 0
    g = N.gcd(G)
    if g.degree < 1:
        return 0
    total = 0
    cur = N
    while True:
        h = cur.gcd(g)
        if h.degree < 1:
            return total
        total += h.degree
        cur = cur.exact_div(h)


def _strip_support(N: Poly, G: Poly) -> Poly:
    """Remove from N every irreducible factor dividing G."""
    if N.degree < 1 or G.is_zero():
        return N
    cur = N
    while True:
        h = cur.gcd(G)
        if h.degree < 1:
            return cur
        cur = cur.exact_div(h)


def section_intersection(P: Section, Q: Section) -> int:
    """Geometric intersection number P.Q of the section curves (P != +-Q)."""
    P, Q = unify_sections(P, Q)
    if P.x == Q.x:
        raise ValueError("self-intersection P = +-Q is not defined here")
    E = P.curve
    fibers, _ = surface_data(E)
    bad_fin = {fd.place.poly: fd for fd in fibers if not fd.place.is_infinity}

    total = 0
    # 1. bad finite places
    for pi, fd in bad_fin.items():
        total += _local_intersection_at(E, fd, pi, P, Q) * pi.degree

    # 2. the place at infinity
    chart, n = E.infinity_chart()
    s = Poly.x(E.field)
    fd_inf = _refresh_fiber(chart, s)
    total += _local_intersection_at(chart, fd_inf, s,
                                    _chart_section(P, chart, n), _chart_section(Q, chart, n))

    bad_prod = Poly.one(E.field)
    for pi in bad_fin:
        bad_prod = bad_prod * pi

    # 3. common x-poles away from bad places (meetings along the zero section)
    gpol = P.x.den.gcd(Q.x.den)
    gpol = _strip_support(gpol, bad_prod)
    if gpol.degree >= 1:
        u = P.x / P.y - Q.x / Q.y
        if u.is_zero():
            raise ValueError("sections share x/y identically")
        total += _supported_degree(u.num, gpol)

    # 4. good affine meetings
    N = (P.x - Q.x).num
    N = _strip_support(N, bad_prod)
    N = _strip_support(N, P.x.den * Q.x.den)
    if N.degree >= 1:
        # meetings at 2-torsion-type points (y0 = 0): multiplicity from y
        g0 = N.gcd(P.ysq.num)
        if g0.degree >= 1:
            ydiff = P.y - Q.y
            if ydiff.is_zero():
                raise ValueError("identical y at a 2-torsion meeting is impossible")
            total += _supported_degree(ydiff.num, g0)
            N = _strip_support(N, g0)
        # ordinary meetings: same-branch places, multiplicity from x
        if N.degree >= 1:
            ydiff = P.y - Q.y
            if ydiff.is_zero():
                total += N.degree
            else:
                total += _supported_degree(N, ydiff.num)
    return total


# ---------------------------------------------------------------------------
# the pairing
# ---------------------------------------------------------------------------


def _corrections_sum(P: Section, Q: Section) -> "mpq":
    E = P.curve
    fibers, _ = surface_data(E)
    total = mpq(0)
    for fd in fibers:
        if fd.kodaira.kind == "I" and fd.kodaira.n < 2:
            continue
        if fd.place.is_infinity:
            chart, n = E.infinity_chart()
            s = Poly.x(E.field)
            fd2 = _refresh_fiber(chart, s)
            Pc, Qc = _chart_section(P, chart, n), _chart_section(Q, chart, n)
            hP = _hit(chart, fd2, s, Pc)
            hQ = _hit(chart, fd2, s, Qc)
            agree = None
            if hP.kind == "near" and hQ.kind == "near":
                agree = _sides_agree(chart, fd2, s, Pc, Qc, hP.depth, hQ.depth)
            total += correction_value(fd2, hP, hQ, agree) * fd.place.degree
        else:
            pi = fd.place.poly
            hP = _hit(E, fd, pi, P)
            hQ = _hit(E, fd, pi, Q)
            agree = None
            if hP.kind == "near" and hQ.kind == "near":
                agree = _sides_agree(E, fd, pi, P, Q, hP.depth, hQ.depth)
            total += correction_value(fd, hP, hQ, agree) * fd.place.degree
    return total


def height_pairing(P: Section, Q: Section) -> "mpq":
    """The Shioda pairing <P, Q>; torsion pairs to zero with everything."""
    P, Q = unify_sections(P, Q)
    _, summary = surface_data(P.curve)
    chi = summary.chi
    if P.x == Q.x:
        sign = 1 if P.y == Q.y else -1
        val = 2 * chi + 2 * zero_section_intersection(P) - _corrections_sum(P, P)
        return mpq(sign) * val
    po = zero_section_intersection(P)
    qo = zero_section_intersection(Q)
    pq = section_intersection(P, Q)
    return mpq(chi) + po + qo - pq - _corrections_sum(P, Q)


@dataclass
class GramData:
    points: list
    matrix: list  # rows of mpq
    det: "mpq"

    @property
    def rank(self) -> int:
        return rational_rank(self.matrix)

    def __repr__(self):
        rows = "\n".join("  [" + ", ".join(str(v) for v in row) + "]" for row in self.matrix)
        return f"Gram(det={self.det}):\n{rows}"


def gram(points: Sequence[Section]) -> GramData:
    n = len(points)
    M = [[mpq(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            val = height_pairing(points[i], points[j])
            M[i][j] = val
            M[j][i] = val
    return GramData(list(points), M, rational_det(M) if n else mpq(1))


def ns_discriminant(fibers: Sequence[FiberData], mwl_det, torsion_order: int,
                    rank: int) -> int:
    """d(X) = (-1)^rank * disc(Triv) * disc(MWL) / torsion^2 for the full lattice.

    disc(Triv) = disc(U) * prod over geometric bad fibers of disc(A_{m_v - 1}),
    with disc(U) = -1 and disc(A_n) = (-1)^n (n + 1).
    """
    if torsion_order == 0:
        raise ValueError("torsion order must be positive")
    triv = mpq(-1)
    for fd in fibers:
        mv = fd.m_v
        if mv >= 2:
            a = mv - 1
            disc_a = (-1) ** a * (a + 1)
            triv *= mpq(disc_a) ** fd.place.degree
    d = mpq((-1) ** rank) * triv * mpq(mwl_det) / (torsion_order ** 2)
    if d.denominator != 1:
        raise ValueError(f"non-integral Neron-Severi discriminant {d}")
    return int(d)
