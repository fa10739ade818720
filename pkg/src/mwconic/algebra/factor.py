"""Polynomial factorization over Q, F_{p^k}, and multiquadratic number fields.

Over Q: squarefree decomposition + Zassenhaus (factor mod p, Hensel lift,
subset recombination).  Over F_{p^k}: Cantor-Zassenhaus.  Over multiquadratic
fields: Trager's norm-map reduction to Q.  Degrees in this project stay small
(<= 24 over Q, <= 12 over extensions), so the classical algorithms are ample.
"""

from __future__ import annotations

import itertools
import math
import random
from typing import Optional

try:
    from gmpy2 import mpq
except ImportError:  # pragma: no cover
    from fractions import Fraction as mpq

from .fields import (FFElement, FiniteField, MQElement, MQField, QQ, RationalField,
                     mq_is_square, rational)
from .intnt import is_prime, next_prime
from .poly import Poly, RatFunc, ResidueElement, ResidueField

_rng = random.Random(0x5EED)


# ---------------------------------------------------------------------------
# integer polynomial helpers
# ---------------------------------------------------------------------------


def _to_int_primitive(f: Poly) -> tuple[list[int], "mpq"]:
    """Write f = c * F with F primitive in Z[t]; returns (F coeffs, c)."""
    dens = [int(c.denominator) for c in f.coeffs]
    lcm = 1
    for d in dens:
        lcm = lcm * d // math.gcd(lcm, d)
    ints = [int(c * lcm) for c in f.coeffs]
    g = 0
    for v in ints:
        g = math.gcd(g, abs(v))
    g = g or 1
    ints = [v // g for v in ints]
    if ints and ints[-1] < 0:
        ints = [-v for v in ints]
        g = -g
    return ints, mpq(g, lcm)


def _int_poly_mod(f: list[int], p: int) -> list[int]:
    return [c % p for c in f]


def _zp_factor(coeffs: list[int], p: int) -> list[list[int]]:
    """Monic irreducible factors of a squarefree monic poly over F_p (as int lists)."""
    F = FiniteField(p)
    f = Poly(F, [F.from_int(c) for c in coeffs])
    out = []
    for g, e in ff_factor(f):
        assert e == 1
        out.append([c.coords[0] for c in g.coeffs])
    return out


def _hensel_lift_pair(f, g, h, s, t, p, m):
    """One quadratic lift step: f = g*h mod m -> mod m**2 (all int coeff lists)."""
    def mul(a, b, mod):
        out = [0] * (len(a) + len(b) - 1 if a and b else 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] = (out[i + j] + ai * bj) % mod
        return out

    def sub(a, b, mod):
        n = max(len(a), len(b))
        return [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % mod
                for i in range(n)]

    def add(a, b, mod):
        n = max(len(a), len(b))
        return [((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % mod
                for i in range(n)]

    def divmod_monic(a, b, mod):
        a = a[:]
        db = len(b) - 1
        q = [0] * max(1, len(a) - db)
        for i in range(len(a) - 1, db - 1, -1):
            c = a[i] % mod
            if c:
                q[i - db] = c
                for j in range(db + 1):
                    a[i - db + j] = (a[i - db + j] - c * b[j]) % mod
        while len(a) > 1 and a[-1] % mod == 0:
            a.pop()
        return q, a

    m2 = m * m
    e = sub(f, mul(g, h, m2), m2)
    qg, rg = divmod_monic(mul(s, e, m2), h, m2)
    g_new = add(add(g, mul(t, e, m2), m2), mul(qg, g, m2), m2)
    h_new = add(h, rg, m2)
    # high coefficients of g_new cancel mod m2; trim to the true degree
    glen = len(f) - len(h) + 1
    assert all(c % m2 == 0 for c in g_new[glen:]), "Hensel lift degree overflow"
    g_new = g_new[:glen]
    # lift Bezout: s*g + t*h = 1 mod m2
    b = sub([1], add(mul(s, g_new, m2), mul(t, h_new, m2), m2), m2)
    qs, rs = divmod_monic(mul(s, b, m2), h_new, m2)
    s_new = add(s, rs, m2)
    t_new = add(add(t, mul(t, b, m2), m2), mul(qs, g_new, m2), m2)
    return g_new, h_new, s_new, t_new


def _hensel_tree(f: list[int], factors: list[list[int]], p: int, target: int):
    """Lift the factorization of monic f (given mod >= target) from mod p data.

    `factors` are the monic factors of f mod p; returns (lifted factors, m)
    with every lifted factor reduced mod the same modulus m >= target.
    """
    if len(factors) == 1:
        return [f], target

    half = len(factors) // 2
    left, right = factors[:half], factors[half:]

    def prod_mod(fs, mod):
        out = [1]
        for g in fs:
            new = [0] * (len(out) + len(g) - 1)
            for i, a in enumerate(out):
                if a:
                    for j, b in enumerate(g):
                        new[i + j] = (new[i + j] + a * b) % mod
            out = new
        return out

    g = prod_mod(left, p)
    h = prod_mod(right, p)
    # Bezout mod p via F_p poly ext gcd
    F = FiniteField(p)
    gp = Poly(F, [F.from_int(c) for c in g])
    hp = Poly(F, [F.from_int(c) for c in h])
    one, s, t = gp.ext_gcd(hp)
    assert one.degree == 0
    inv = F.one / one[0]
    s_l = [(c * inv).coords[0] for c in s.coeffs] or [0]
    t_l = [(c * inv).coords[0] for c in t.coeffs] or [0]

    m = p
    g_l, h_l = list(g), list(h)
    while m < target:
        g_l, h_l, s_l, t_l = _hensel_lift_pair(f, g_l, h_l, s_l, t_l, p, m)
        m = m * m
    lifted_left, _ = _hensel_tree(g_l, left, p, m)
    lifted_right, _ = _hensel_tree(h_l, right, p, m)
    lifted = [[c % m for c in fac] for fac in lifted_left + lifted_right]
    return lifted, m


def _q_factor_squarefree(f: Poly) -> list[Poly]:
    """Irreducible monic factors over Q of a squarefree poly (any leading coeff)."""
    if f.degree == 1:
        return [f.monic()]
    ints, _ = _to_int_primitive(f)
    lc = ints[-1]
    n = len(ints) - 1
    # choose a prime keeping the poly squarefree with same degree
    p = 3
    while True:
        p = next_prime(p)
        if lc % p == 0:
            continue
        F = FiniteField(p)
        fp = Poly(F, [F.from_int(c) for c in ints])
        if fp.degree == n and fp.gcd(fp.derivative()).degree == 0:
            break
    # factor the monic-ized reduction
    inv_lc_p = pow(lc % p, p - 2, p)
    monic_mod = [(c * inv_lc_p) % p for c in ints]
    modular = _zp_factor(monic_mod, p)
    if len(modular) == 1:
        return [f.monic()]
    # lift to p^e beyond twice the Mignotte bound for factors of lc*f
    norm = math.isqrt(sum(c * c for c in ints)) + 1
    bound = (1 << (n + 1)) * norm * abs(lc)
    target = 2 * bound + 1
    big_m = p
    while big_m < target:
        big_m *= big_m
    inv_lc = pow(lc, -1, big_m)
    monic_big = [(c * inv_lc) % big_m for c in ints]
    lifted, m = _hensel_tree(monic_big, modular, p, big_m)
    assert m == big_m

    def centered(c):
        c %= m
        return c - m if c > m // 2 else c

    remaining = list(range(len(lifted)))
    cur = ints[:]
    out: list[Poly] = []

    def try_subset(idx: tuple[int, ...]) -> Optional[list[int]]:
        prod = [1]
        for i in idx:
            g = lifted[i]
            new = [0] * (len(prod) + len(g) - 1)
            for a, ca in enumerate(prod):
                if ca:
                    for b, cb in enumerate(g):
                        new[a + b] = (new[a + b] + ca * cb) % m
            prod = new
        lc_cur = cur[-1]
        cand = [centered(c * lc_cur) for c in prod]
        g0 = 0
        for v in cand:
            g0 = math.gcd(g0, abs(v))
        g0 = g0 or 1
        cand = [v // g0 for v in cand]
        if cand[-1] < 0:
            cand = [-v for v in cand]
        # exact division test over Z via rational poly division
        fq = Poly(QQ, cur)
        gq = Poly(QQ, cand)
        q, r = fq.divmod(gq)
        if r.is_zero() and all(c.denominator == 1 for c in q.coeffs):
            return cand
        return None

    size = 1
    while 2 * size <= len(remaining):
        found = True
        while found and 2 * size <= len(remaining):
            found = False
            for idx in itertools.combinations(remaining, size):
                cand = try_subset(idx)
                if cand is not None:
                    out.append(Poly(QQ, cand).monic())
                    for i in idx:
                        remaining.remove(i)
                    fq = Poly(QQ, cur)
                    cur = [int(c) for c in fq.exact_div(Poly(QQ, cand)).coeffs]
                    found = True
                    break
        size += 1
    if remaining:
        out.append(Poly(QQ, cur).monic())
    return out


# ---------------------------------------------------------------------------
# finite field factorization (Cantor-Zassenhaus)
# ---------------------------------------------------------------------------


def _ff_powmod(a: Poly, n: int, f: Poly) -> Poly:
    out = Poly.one(a.field) % f
    base = a % f
    while n:
        if n & 1:
            out = (out * base) % f
        base = (base * base) % f
        n >>= 1
    return out


def ff_factor(f: Poly) -> list[tuple[Poly, int]]:
    """Factor over F_{p^k}: returns [(monic irreducible, multiplicity)]."""
    F = f.field
    assert isinstance(F, FiniteField)
    out: dict = {}

    def add_factor(g: Poly, e: int):
        key = g
        out[key] = out.get(key, 0) + e

    def sqfree_split(g: Poly, mult: int):
        if g.degree < 1:
            return
        d = g.derivative()
        if d.is_zero():
            # g = h(t^p): take p-th root of coefficients (a -> a^(q/p))
            p = F.p
            root = Poly(F, [g.coeffs[i] ** (F.q // p) for i in range(0, g.degree + 1, p)])
            sqfree_split(root, mult * p)
            return
        a = g.gcd(d)
        b = g.exact_div(a)
        i = 1
        while b.degree > 0:
            c = a.gcd(b)
            piece = b.exact_div(c)
            if piece.degree > 0:
                for irr in _ff_factor_squarefree(piece):
                    add_factor(irr, mult * i)
            b = c
            a = a.exact_div(c)
            i += 1
        if a.degree > 0:
            sqfree_split(a, mult)

    sqfree_split(f.monic(), 1)
    return sorted(out.items(), key=lambda kv: (kv[0].degree, [repr(c) for c in kv[0].coeffs]))


def _ff_factor_squarefree(f: Poly) -> list[Poly]:
    F: FiniteField = f.field
    q = F.q
    x = Poly.x(F)
    out: list[Poly] = []
    # distinct degree
    h = x
    v = f.monic()
    d = 0
    buckets: list[tuple[Poly, int]] = []
    while v.degree >= 2 * (d + 1):
        d += 1
        h = _ff_powmod(h, q, v)
        g = v.gcd(h - x)
        if g.degree > 0:
            buckets.append((g, d))
            v = v.exact_div(g)
            h = h % v
    if v.degree > 0:
        buckets.append((v, v.degree))
    # equal degree (Cantor-Zassenhaus)
    for g, d in buckets:
        stack = [g]
        while stack:
            cur = stack.pop()
            if cur.degree == d:
                out.append(cur.monic())
                continue
            while True:
                r = Poly(F, [F.random(_rng) for _ in range(cur.degree)] + [F.one])
                if q % 2 == 1:
                    e = (q ** d - 1) // 2
                    w = _ff_powmod(r, e, cur) - Poly.one(F)
                else:  # char 2: trace map
                    w = Poly.zero(F)
                    t = r % cur
                    for _ in range(d * F.k):
                        w = (w + t) % cur
                        t = _ff_powmod(t, 2, cur)
                s = cur.gcd(w)
                if 0 < s.degree < cur.degree:
                    stack.append(s)
                    stack.append(cur.exact_div(s))
                    break
    return out


# ---------------------------------------------------------------------------
# multiquadratic factorization (Trager)
# ---------------------------------------------------------------------------


def _mq_conjugate_poly(f: Poly, signs) -> Poly:
    return f.map_coeffs(lambda c: c.apply_signs(signs))


def _mq_norm_poly(f: Poly) -> Poly:
    """Product of all Galois conjugates; returns a polynomial over Q."""
    F: MQField = f.field
    prod = Poly.one(F)
    for signs in itertools.product((1, -1), repeat=F.k):
        prod = prod * _mq_conjugate_poly(f, signs)
    assert all(c.is_rational() for c in prod.coeffs), "norm not rational"
    return prod.map_coeffs(lambda c: c.rational_value(), QQ)


def _mq_factor_squarefree(f: Poly) -> list[Poly]:
    F: MQField = f.field
    if F.k == 0:
        return [g.map_coeffs(F.from_rational, F)
                for g in _q_factor_squarefree(f.map_coeffs(lambda c: c.rational_value(), QQ))]
    theta = F.zero
    for d in F.gens:
        theta = theta + F.gen(d)
    s = 0
    while True:
        shifted = f.shift(F.from_rational(-s) * theta) if s else f
        nrm = _mq_norm_poly(shifted.monic())
        if nrm.gcd(nrm.derivative()).degree == 0:
            break
        s += 1
        if s > 40:
            raise RuntimeError("no squarefree norm shift found")
    out = []
    g_shifted = shifted.monic()
    for qfac in _q_factor_squarefree(nrm):
        qfac_mq = qfac.map_coeffs(F.from_rational, F)
        h = g_shifted.gcd(qfac_mq)
        if h.degree > 0:
            out.append(h.shift(F.from_rational(s) * theta).monic() if s else h.monic())
    assert sum(h.degree for h in out) == f.degree, "Trager factor degrees do not add up"
    return out


# ---------------------------------------------------------------------------
# public interface
# ---------------------------------------------------------------------------


def factor_poly(f: Poly) -> list[tuple[Poly, int]]:
    """Factor into monic irreducibles over the coefficient field.

    Returns [(factor, multiplicity)]; the product times the leading coefficient
    reconstructs f exactly.
    """
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    F = f.field
    if isinstance(F, FiniteField):
        return ff_factor(f)
    if not isinstance(F, (RationalField, MQField)):
        raise TypeError(f"unsupported coefficient field {F}")
    out = []
    for sq, e in f.squarefree_decomposition():
        if isinstance(F, RationalField):
            irrs = _q_factor_squarefree(sq)
        else:
            irrs = _mq_factor_squarefree(sq)
        out.extend((g, e) for g in irrs)
    out.sort(key=lambda kv: (kv[0].degree, repr(kv[0])))
    return out


def is_irreducible(f: Poly) -> bool:
    facs = factor_poly(f)
    return len(facs) == 1 and facs[0][1] == 1


def split_place_over(pi: Poly, field) -> list[Poly]:
    """Factor a place polynomial (irreducible over its own field) over a bigger field."""
    lifted = pi.map_coeffs(lambda c: field.coerce(c), field)
    return [g for g, _ in factor_poly(lifted)]


def poly_roots_in_field(f: Poly) -> list:
    """All roots of f in its coefficient field."""
    return [(-g[0] / g[1]) for g, _ in factor_poly(f) if g.degree == 1]


def residue_is_square(elem: ResidueElement):
    """Square root of an element of K[t]/(pi) within that field, or None.

    For finite base fields this is an Euler-criterion test; for exact base
    fields it reduces to factoring X^2 - c via Trager's norm trick.
    """
    ring = elem.ring
    if not elem:
        return ring.zero
    base = ring.base
    if isinstance(base, FiniteField):
        q = base.q ** ring.pi.degree
        if elem ** ((q - 1) // 2) != ring.one:
            return None
        return _residue_sqrt_finite(elem, q)
    # exact base: factor X^2 - c over the residue field
    for s in range(0, 24):
        shift = ring.tbar() * ring.coerce(s)
        c = elem
        # work with Y = X - s*tbar: (Y + s t)^2 = c -> norm in Q[X]
        # Build N(X) = Res_t(pi, (X + s*t)^2 - c(t)) over the base, then to Q.
        X = Poly.x(_residue_poly_field(ring))
        # polynomial in X with ResidueElement coefficients:
        lin = X + _residue_const(ring, shift)
        poly_x = lin * lin - _residue_const(ring, c)
        nrm = _residue_norm_to_base(poly_x, ring)
        if nrm.gcd(nrm.derivative()).degree != 0:
            continue
        for fac, _e in factor_poly(nrm):
            if fac.degree == 1:
                root = -fac[0] / fac[1]
                cand = ring.coerce(root) - shift
                if cand * cand == elem:
                    return cand
            elif fac.degree <= poly_x.degree:
                # gcd over the residue field picks up a linear factor if present
                fac_res = fac.map_coeffs(lambda q0: _residue_const_val(ring, q0),
                                         _residue_poly_field(ring))
                g = poly_x.gcd(fac_res)
                if g.degree == 1:
                    cand = (-g[0] / g[1]) - shift
                    if cand * cand == elem:
                        return cand
        return None
    raise RuntimeError("no squarefree shift for residue square test")


class _ResidueAsField:
    """Adapter presenting a ResidueField via the coefficient-field protocol."""

    def __init__(self, ring: ResidueField):
        self.ring = ring
        self.characteristic = ring.characteristic

    def __eq__(self, other):
        return isinstance(other, _ResidueAsField) and other.ring == self.ring

    def __hash__(self):
        return hash(("RAF", self.ring))

    @property
    def zero(self):
        return self.ring.zero

    @property
    def one(self):
        return self.ring.one

    def coerce(self, x):
        return self.ring.coerce(x)

    def is_zero(self, x):
        return not x

    def random(self, rng, size=6):
        return self.ring.random(rng, size)


def _residue_poly_field(ring: ResidueField) -> _ResidueAsField:
    return _ResidueAsField(ring)


def _residue_const(ring: ResidueField, val: ResidueElement) -> Poly:
    return Poly.const(_ResidueAsField(ring), val)


def _residue_const_val(ring: ResidueField, q0) -> ResidueElement:
    return ring.coerce(q0)


def _residue_norm_to_base(poly_x: Poly, ring: ResidueField) -> Poly:
    """Res_t(pi(t), P(X, t)) as a polynomial in X over the base field."""
    base = ring.base
    # write P as a polynomial in t with Poly-in-X coefficients, then resultant
    degX = poly_x.degree
    degT = ring.pi.degree
    # coefficients of X^i are ResidueElements; build bivariate array c[i][j]
    rows = []
    for i in range(degX + 1):
        coeff = poly_x[i]
        rep = coeff.rep if coeff else Poly.zero(base)
        rows.append([rep[j] for j in range(degT)])
    # resultant via evaluation-interpolation in X over base field (char 0 bases
    # have plenty of sample points; finite bases are handled elsewhere)
    n_samples = degX * degT + 1
    samples = []
    val = 0
    while len(samples) < n_samples:
        xv = base.coerce(val)
        # P(xv, t) as poly in t
        cs = [base.zero] * degT
        power = base.one
        for i in range(degX + 1):
            for j in range(degT):
                cs[j] = cs[j] + rows[i][j] * power
            power = power * xv
        pt = Poly(base, cs)
        samples.append((xv, ring.pi.resultant(pt)))
        val += 1
    from .poly import lagrange_interpolate
    res_poly = lagrange_interpolate(base, samples)
    if isinstance(base, MQField):
        assert all(c.is_rational() for c in res_poly.coeffs)
        return res_poly.map_coeffs(lambda c: c.rational_value(), QQ)
    return res_poly


def _residue_sqrt_finite(elem: ResidueElement, q: int) -> ResidueElement:
    """Tonelli-Shanks in the finite residue field of order q."""
    ring = elem.ring
    if q % 4 == 3:
        return elem ** ((q + 1) // 4)
    m, e = q - 1, 0
    while m % 2 == 0:
        m //= 2
        e += 1
    rng = random.Random(q ^ 0xABCD)
    z = None
    while z is None:
        cand = ring.random(rng)
        if cand and cand ** ((q - 1) // 2) != ring.one:
            z = cand
    c = z ** m
    t = elem ** m
    r = elem ** ((m + 1) // 2)
    one = ring.one
    while t != one:
        i, tt = 0, t
        while tt != one:
            tt = tt * tt
            i += 1
        b = c ** (1 << (e - i - 1))
        r = r * b
        c = b * b
        t = t * c
        e = i
    return r
