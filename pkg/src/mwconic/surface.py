"""Places, Kodaira fiber classification, Euler numbers, Shioda-Tate bounds, strata.

Fiber types are read off the factored model: at a finite place the valuations
of the pairwise root differences determine everything.  Root functions are
polynomials for every model produced in this package, so only even I_n and
I_n* patterns can occur away from good reduction; the families themselves
only realize I_2, I_4 and I_0*.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Sequence

from .algebra import (Poly, QQ, RatFunc, ResidueField, factor_poly, residue_is_square)
from .curves import SingularFamilyMember, WeierstrassCurve, build_family_curve

INFINITY = "infinity"


class UnsupportedFiberType(ValueError):
    pass


@dataclass(frozen=True)
class Place:
    """A closed point of P^1: Finite(monic irreducible pi) or the point at infinity."""

    poly: Optional[Poly]  # None encodes t = infinity

    @property
    def is_infinity(self) -> bool:
        return self.poly is None

    @property
    def degree(self) -> int:
        return 1 if self.poly is None else self.poly.degree

    def __repr__(self):
        return "(t=oo)" if self.poly is None else f"({self.poly})"


@dataclass(frozen=True)
class KodairaType:
    kind: str  # "I" or "I*"
    n: int

    def __repr__(self):
        if self.kind == "I":
            return f"I{self.n}"
        return f"I{self.n}*"

    @property
    def components(self) -> int:
        """m_v: number of irreducible components of the fiber."""
        if self.kind == "I":
            return max(self.n, 1)
        return self.n + 5

    @property
    def euler_number(self) -> int:
        if self.kind == "I":
            return self.n
        return self.n + 6

    @property
    def is_good(self) -> bool:
        return self.kind == "I" and self.n == 0


@dataclass
class FiberData:
    """Classification data of one (possibly bad) fiber, plus node local data.

    For multiplicative I_n the congruent root pair is (i, j) with difference of
    valuation n/2 at the place; node_x is the residue of that pair and
    tangent_split records squareness of the tangent-cone discriminant
    node_x - e in the residue field.
    """

    place: Place
    kodaira: KodairaType
    pair: Optional[tuple[int, int]] = None
    third: Optional[int] = None
    node_x: object = None
    tangent_split: Optional[bool] = None
    chart_weight: int = 0  # infinity chart exponent n used (for bookkeeping)
    rescaled: int = 0  # minimization steps applied before classifying

    @property
    def m_v(self) -> int:
        return self.kodaira.components

    @property
    def e_v(self) -> int:
        return self.kodaira.euler_number

    def __repr__(self):
        return f"{self.place}: {self.kodaira}"


@dataclass
class SurfaceSummary:
    chi: int
    surface_class: str  # rational / K3 / higher
    rho_max_char0: int
    trivial_corank: int  # sum deg(v) * (m_v - 1)
    shioda_tate_bound: int


class Stratum(enum.Enum):
    GENERIC_G = "generic"
    GENERIC_ALPHA_EQ_BETA = "generic, alpha = beta"
    GENERIC_BETA_EQ_NEG_GAMMA = "generic, beta = -gamma"
    TYPE_M1M11 = "(-1,-1,1) type"
    S1_ALPHA_EQ_GAMMA = "S1: alpha = gamma"
    S2_ALPHA_EQ_NEG_BETA = "S2: alpha = -beta"
    S3_BETA_EQ_GAMMA = "S3: beta = gamma"
    TYPE_1M1M1 = "(1,-1,-1) type"
    TYPE_1M11 = "(1,-1,1) type"
    TYPE_111 = "(1,1,1) type"
    QUADRIC_VQ = "quadric: alpha*beta = gamma*(alpha+beta)"
    SINGULAR = "singular"


def classify_stratum(alpha, beta, gamma) -> Stratum:
    """Position of a projective triple in the degeneration lattice of the family."""
    a, b, c = QQ.coerce(alpha), QQ.coerce(beta), QQ.coerce(gamma)
    if (a, b, c) == (0, 0, 0):
        raise ValueError("(0,0,0) is not a projective point")
    if a * b * c == 0:
        return Stratum.SINGULAR
    if a * b - a * c - b * c == 0:
        return Stratum.QUADRIC_VQ
    v110 = (a + b == 0)
    v101 = (a == c)
    v011 = (b == c)
    e_ab = (a == b)
    e_bg = (b == -c)
    if not (v110 or v101 or v011):
        if e_ab and e_bg:
            return Stratum.TYPE_M1M11
        if e_ab:
            return Stratum.GENERIC_ALPHA_EQ_BETA
        if e_bg:
            return Stratum.GENERIC_BETA_EQ_NEG_GAMMA
        return Stratum.GENERIC_G
    if v101 and v011:
        return Stratum.TYPE_111  # alpha = beta = gamma
    if v110 and v101:
        return Stratum.TYPE_1M11
    if v110 and v011:
        return Stratum.TYPE_1M1M1
    if v101:
        return Stratum.S1_ALPHA_EQ_GAMMA
    if v110:
        return Stratum.S2_ALPHA_EQ_NEG_BETA
    return Stratum.S3_BETA_EQ_GAMMA


# ---------------------------------------------------------------------------
# fiber classification
# ---------------------------------------------------------------------------


def _residue(r: RatFunc, R: ResidueField):
    return R.of_ratfunc(r)


def classify_fiber(E: WeierstrassCurve, place: Place,
                   compute_split: bool = True) -> FiberData:
    """Kodaira type at a place, from pairwise root-difference valuations.

    The model is minimized at the place first (x-shift by the common root
    residue and division by pi^2, repeated).  Only good, I_n (n even) and
    I_n* fibers can arise from polynomial-root models; anything else raises.
    """
    if place.is_infinity:
        chart, n = E.infinity_chart()
        pi = Poly.x(chart.field)
        fd = _classify_finite(chart, pi, compute_split)
        return FiberData(place, fd.kodaira, fd.pair, fd.third, fd.node_x,
                         fd.tangent_split, chart_weight=n, rescaled=fd.rescaled)
    return _classify_finite(E, place.poly, compute_split)


def _classify_finite(E: WeierstrassCurve, pi: Poly, compute_split: bool) -> FiberData:
    place = Place(pi)
    roots = list(E.roots)
    for r in roots:
        if r.valuation(pi) < 0:
            raise UnsupportedFiberType(f"root with pole at {pi}; non-integral model")
    char = E.field.characteristic
    if char in (2, 3):
        raise UnsupportedFiberType("residue characteristic 2 or 3 not supported")
    R = ResidueField(E.field, pi)

    # minimization loop: all roots congruent mod pi^2 after a shift
    scaled = 0
    while True:
        res = [_residue(r, R) for r in roots]
        if not (res[0] == res[1] == res[2]):
            break
        # shift by a lift of the common residue, then test pi^2-congruence
        lift = RatFunc(res[0].rep)
        shifted = [r - lift for r in roots]
        res2 = [_residue(s / RatFunc(pi), R) for s in shifted]
        if not (res2[0] == res2[1] == res2[2]):
            break
        lift2 = lift + RatFunc(pi) * RatFunc(res2[0].rep)
        pi2 = RatFunc(pi * pi)
        roots = [(r - lift2) / pi2 for r in roots]
        scaled += 1
        if scaled > 40:
            raise UnsupportedFiberType("minimization loop did not terminate")

    v12 = (roots[0] - roots[1]).valuation(pi)
    v13 = (roots[0] - roots[2]).valuation(pi)
    v23 = (roots[1] - roots[2]).valuation(pi)
    pos = [(v, pair) for v, pair in ((v12, (0, 1)), (v13, (0, 2)), (v23, (1, 2))) if v > 0]

    if not pos:
        return FiberData(place, KodairaType("I", 0), rescaled=scaled)
    if len(pos) == 1:
        v, (i, j) = pos[0]
        k = 3 - i - j
        node_x = _residue(roots[i], R)
        split = None
        if compute_split:
            disc = _residue(roots[i] - roots[k], R)
            split = residue_is_square(disc) is not None
        return FiberData(place, KodairaType("I", 2 * v), (i, j), k, node_x, split,
                         rescaled=scaled)
    if len(pos) == 3:
        vals = sorted([v12, v13, v23])
        if vals[0] != 1 or vals[1] != 1:
            raise UnsupportedFiberType(f"additive valuation pattern {vals} unexpected")
        m = vals[2]
        return FiberData(place, KodairaType("I*", 2 * (m - 1)), rescaled=scaled)
    raise UnsupportedFiberType("two-pair congruence pattern is impossible")


def bad_places(E: WeierstrassCurve) -> list[Place]:
    """All finite places dividing the discriminant, via the root differences."""
    seen: dict = {}
    for i in range(3):
        for j in range(i + 1, 3):
            d = E.roots[i] - E.roots[j]
            num = d.num
            if num.degree < 1:
                continue
            for g, _e in factor_poly(num):
                if g.degree >= 1:
                    seen[g] = True
    return [Place(g) for g in seen]


def fiber_configuration(E: WeierstrassCurve,
                        compute_split: bool = False) -> tuple[list[FiberData], SurfaceSummary]:
    """All bad fibers (finite places + infinity) and the Shioda-Tate summary."""
    fibers = []
    for pl in bad_places(E):
        fd = classify_fiber(E, pl, compute_split)
        if not fd.kodaira.is_good:
            fibers.append(fd)
    fd_inf = classify_fiber(E, Place(None), compute_split)
    if not fd_inf.kodaira.is_good:
        fibers.append(fd_inf)

    total_e = sum(f.place.degree * f.e_v for f in fibers)
    if total_e % 12:
        raise UnsupportedFiberType(f"Euler number sum {total_e} not divisible by 12")
    chi = total_e // 12
    cls = {1: "rational", 2: "K3"}.get(chi, "higher")
    rho_max = 10 * chi  # genus-0 base
    corank = sum(f.place.degree * (f.m_v - 1) for f in fibers)
    bound = rho_max - 2 - corank
    return fibers, SurfaceSummary(chi, cls, rho_max, corank, bound)


# ---------------------------------------------------------------------------
# the explicit points of the paper's strata
# ---------------------------------------------------------------------------


def known_points(alpha, beta, gamma, triple=None, field=QQ) -> list:
    """Labeled sections spanning the stated Mordell-Weil subgroup of the stratum.

    Returns heights.Section objects.  For generic-type strata these are the
    points P1..P4 (plus P5 when alpha = beta, P6 when beta = -gamma, skipping
    degenerations to 2-torsion); the (-1,-1,1) stratum gets its six R-points.
    """
    from .heights import section_from_x_ysq  # deferred: heights imports surface

    stratum = classify_stratum(alpha, beta, gamma)
    E = build_family_curve(alpha, beta, gamma, triple=triple, field=field)
    fam = E.family
    a, b, c = fam.alpha, fam.beta, fam.gamma
    f, g, h = fam.f, fam.g, fam.h
    A = RatFunc(f * f)
    B = RatFunc(g * g)
    C = A + B  # = h^2 for a conic triple
    q = a * b - a * c - b * c
    out = []

    if stratum == Stratum.TYPE_M1M11:
        # (alpha, alpha, -alpha) ~ (-1,-1,1) scaled by lam = -alpha; a point
        # (X, Y) of the lam = 1 model scales to (lam X, ysq -> lam^3 ysq).
        lam = -a
        one = RatFunc.const(field, 1)
        half = one / 2
        lam3 = lam ** 3

        def pt(label, x, ysq):
            out.append(section_from_x_ysq(E, lam * x, lam3 * ysq, label=label))

        fgh2 = RatFunc((f * g * h) ** 2)
        # R3/R5/R6 y-coordinates carry a 1/4 the paper's display drops; the
        # on-curve identity in section_from_x_ysq pins the normalization.
        pt("R1", RatFunc.const(field, 0), fgh2)
        pt("R2", C, 2 * fgh2)
        pt("R3", C * half, (C - 2 * B) ** 2 * C * (-6) / 16)
        pt("R4", -A, 2 * fgh2)
        pt("R5", -B * half, B * (2 * C - B) ** 2 * 6 / 16)
        pt("R6", -A * half, A * (2 * C - A) ** 2 * 6 / 16)
        return out

    def add(label, x, ysq):
        out.append(section_from_x_ysq(E, x, ysq, label=label))

    add("P1", RatFunc.const(field, 0), a * b * c * A * B * C)
    if q != 0 and a != c:
        x2 = -a * A + (q / c) * B
        # sign: expanding the model at x2 gives -alpha*B*(gamma-alpha)*q*(...)^2/gamma^3
        y2 = -a * B * (c - a) * q * (A * c - b * B + B * c) ** 2 / (c ** 3)
        add("P2", x2, y2)
    if q != 0 and b != c:
        x3 = (b * c / (c - b)) * A
        y3 = A * b * c * q * (A * c - b * B + B * c) ** 2 / ((b - c) ** 3)
        add("P3", x3, y3)
    if q != 0 and a != -b:
        x4 = (-(a * b) / (a + b)) * C
        y4 = a * b * C * q * (a * A - b * B) ** 2 / ((a + b) ** 3)
        add("P4", x4, y4)
    if a == b and a != c:
        x5 = -a * C
        y5 = -a * B * (a - c) * C * (a * A + a * B - b * B)
        add("P5", x5, y5)
    if b == -c and a != b:
        x6 = b * A
        y6 = A * b * (a + b) * C * (A * b + A * c + B * c)
        add("P6", x6, y6)
    return out
