"""Coefficient fields: Q, multiquadratic extensions Q(sqrt(d1),...,sqrt(dk)), and F_{p^k}.

Every element type here is immutable and supports +, -, *, /, ==, hash, so the
generic polynomial layer can run over any of these fields.  Multiquadratic
fields are limited to k <= 3 generators, which covers every coefficient needed
by the curve families (sqrt(2), sqrt(3), sqrt(-3), sqrt(-1), sqrt(-6),
sqrt(-7), ...).
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

try:
    from gmpy2 import mpq
except ImportError:  # pragma: no cover
    mpq = Fraction

from .intnt import is_perfect_square, is_prime, isqrt, squarefree_decompose, squarefree_kernel

Rat = Union[int, Fraction]


def rational(x) -> "mpq":
    """Coerce ints, Fractions, mpq, or 'a/b' strings to an exact rational."""
    if isinstance(x, str):
        return mpq(x)
    return mpq(x)


def rational_is_square(x) -> Optional["mpq"]:
    """Exact square root of a rational, or None."""
    x = rational(x)
    if x < 0:
        return None
    num, den = x.numerator, x.denominator
    if not (is_perfect_square(num) and is_perfect_square(den)):
        return None
    return mpq(isqrt(num), isqrt(den))


def rational_squarefree_class(x) -> int:
    """The unique squarefree integer s with x/s a nonzero rational square."""
    x = rational(x)
    if x == 0:
        raise ValueError("0 has no squarefree class")
    return squarefree_kernel(int(x.numerator)) * abs(squarefree_kernel(int(x.denominator)))


class RationalField:
    """The field Q with mpq elements."""

    characteristic = 0

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    @property
    def zero(self):
        return mpq(0)

    @property
    def one(self):
        return mpq(1)

    def coerce(self, x):
        if isinstance(x, MQElement):
            if x.is_rational():
                return x.coords[0]
            raise TypeError(f"{x} is not rational")
        return rational(x)

    def is_square(self, x) -> Optional["mpq"]:
        return rational_is_square(self.coerce(x))

    def is_zero(self, x) -> bool:
        return x == 0

    def random(self, rng: random.Random, size: int = 10):
        return mpq(rng.randint(-size, size), rng.randint(1, size))


QQ = RationalField()


def _independent(gens: Sequence[int], d: int) -> bool:
    """True if d is multiplicatively independent of gens modulo squares."""
    for r in range(1, len(gens) + 1):
        for sub in itertools.combinations(gens, r):
            prod = d
            for g in sub:
                prod *= g
            if is_perfect_square(prod):
                return False
    return is_perfect_square(d) is False


class MQField:
    """Q(sqrt(d1),...,sqrt(dk)) with k <= 3 squarefree, independent generators.

    Elements are coordinate vectors of length 2**k over the basis
    prod_{i in S} sqrt(d_i) indexed by subset bitmasks S.
    """

    characteristic = 0
    MAX_GENS = 3

    def __init__(self, gens: Sequence[int]):
        gens = tuple(sorted(set(int(g) for g in gens), key=lambda d: (abs(d), d < 0)))
        if len(gens) > self.MAX_GENS:
            raise ValueError(f"at most {self.MAX_GENS} quadratic generators supported, got {gens}")
        seen: list[int] = []
        for d in gens:
            if d in (0, 1) or squarefree_kernel(d) != d:
                raise ValueError(f"generator {d} must be squarefree and != 0, 1")
            if not _independent(seen, d):
                raise ValueError(f"generator {d} is dependent on {seen} modulo squares")
            seen.append(d)
        self.gens = gens
        self.k = len(gens)
        self.dim = 1 << self.k
        # basis value of mask product sqrt(d_S)*sqrt(d_T) = d_{S&T} * sqrt(d_{S^T})
        self._mask_prod = [1] * self.dim
        for m in range(self.dim):
            v = 1
            for i in range(self.k):
                if m >> i & 1:
                    v *= gens[i]
            self._mask_prod[m] = v

    def __repr__(self):
        inside = ",".join(f"sqrt({d})" for d in self.gens)
        return f"Q({inside})" if self.gens else "QQ"

    def __eq__(self, other):
        return isinstance(other, MQField) and self.gens == other.gens

    def __hash__(self):
        return hash(("MQ", self.gens))

    @property
    def zero(self):
        return MQElement(self, (mpq(0),) * self.dim)

    @property
    def one(self):
        return MQElement(self, (mpq(1),) + (mpq(0),) * (self.dim - 1))

    def from_rational(self, q):
        return MQElement(self, (rational(q),) + (mpq(0),) * (self.dim - 1))

    def gen(self, d: int) -> "MQElement":
        """The element sqrt(d) for a generator d of this field."""
        i = self.gens.index(d)
        coords = [mpq(0)] * self.dim
        coords[1 << i] = mpq(1)
        return MQElement(self, tuple(coords))

    def coerce(self, x) -> "MQElement":
        if isinstance(x, MQElement):
            if x.field == self:
                return x
            return embed_mq(x, self)
        return self.from_rational(x)

    def is_zero(self, x) -> bool:
        return not any(x.coords)

    def conjugations(self):
        """All 2**k sign patterns (as functions on elements)."""
        return [lambda e, s=signs: e.apply_signs(s)
                for signs in itertools.product((1, -1), repeat=self.k)]

    def is_square(self, x) -> Optional["MQElement"]:
        return mq_is_square(self.coerce(x))

    def random(self, rng: random.Random, size: int = 6) -> "MQElement":
        return MQElement(self, tuple(mpq(rng.randint(-size, size), rng.randint(1, 3))
                                     for _ in range(self.dim)))


class MQElement:
    __slots__ = ("field", "coords")

    def __init__(self, field: MQField, coords):
        self.field = field
        self.coords = tuple(coords)

    # -- basic structure ---------------------------------------------------
    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def rational_value(self):
        if not self.is_rational():
            raise TypeError(f"{self} is not rational")
        return self.coords[0]

    def apply_signs(self, signs: Sequence[int]) -> "MQElement":
        """Galois conjugate sending sqrt(d_i) -> signs[i]*sqrt(d_i)."""
        out = []
        for m, c in enumerate(self.coords):
            s = 1
            for i in range(self.field.k):
                if m >> i & 1 and signs[i] < 0:
                    s = -s
            out.append(c if s > 0 else -c)
        return MQElement(self.field, out)

    def __bool__(self):
        return any(self.coords)

    def __eq__(self, other):
        if isinstance(other, MQElement):
            if other.field != self.field:
                return NotImplemented
            return self.coords == other.coords
        if isinstance(other, (int, Fraction, type(mpq(0)))):
            return self.is_rational() and self.coords[0] == other
        return NotImplemented

    def __hash__(self):
        return hash((self.field.gens, self.coords))

    def __repr__(self):
        names = {0: ""}
        for m in range(1, self.field.dim):
            names[m] = "*".join(f"sqrt({self.field.gens[i]})"
                                for i in range(self.field.k) if m >> i & 1)
        parts = []
        for m, c in enumerate(self.coords):
            if c == 0:
                continue
            parts.append(f"{c}" if m == 0 else f"{c}*{names[m]}")
        return " + ".join(parts) if parts else "0"

    # -- arithmetic --------------------------------------------------------
    def _co(self, other) -> Optional["MQElement"]:
        try:
            return self.field.coerce(other)
        except (TypeError, ValueError):
            return None

    def __add__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return MQElement(self.field, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return MQElement(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        dim = self.field.dim
        prod = self.field._mask_prod
        out = [mpq(0)] * dim
        for m1, c1 in enumerate(self.coords):
            if not c1:
                continue
            for m2, c2 in enumerate(o.coords):
                if not c2:
                    continue
                out[m1 ^ m2] += c1 * c2 * prod[m1 & m2]
        return MQElement(self.field, out)

    __rmul__ = __mul__

    def _split_top(self):
        """Write self = a + b*sqrt(d_top) over the subfield without d_top."""
        F = self.field
        sub = MQField(F.gens[:-1])
        half = F.dim // 2
        a = MQElement(sub, self.coords[:half])
        b = MQElement(sub, self.coords[half:])
        return sub, a, b

    def inverse(self) -> "MQElement":
        if not self:
            raise ZeroDivisionError("division by zero")
        F = self.field
        if F.k == 0:
            return MQElement(F, (1 / self.coords[0],))
        sub, a, b = self._split_top()
        d = F.gens[-1]
        nrm = a * a - b * b * d  # norm to subfield: nonzero since field
        inv_n = nrm.inverse()
        num_a, num_b = a * inv_n, -(b * inv_n)
        return MQElement(F, num_a.coords + num_b.coords)

    def __truediv__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out, base = self.field.one, self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out


def mq_is_square(x: MQElement) -> Optional[MQElement]:
    """Square root of x inside its own multiquadratic field, or None.

    Recursive: writing x = a + b*sqrt(d) over the subfield, a square root
    u + v*sqrt(d) requires the norm a^2 - d*b^2 to be a square in the subfield.
    """
    F = x.field
    if not x:
        return F.zero
    if F.k == 0:
        r = rational_is_square(x.coords[0])
        return None if r is None else MQElement(F, (r,))
    sub, a, b = x._split_top()
    d = F.gens[-1]
    zero_sub = sub.zero
    if not b:
        r = mq_is_square(a)
        if r is not None:
            return MQElement(F, r.coords + zero_sub.coords)
        r = mq_is_square(a / sub.from_rational(d))
        if r is not None:  # sqrt = r * sqrt(d)
            return MQElement(F, zero_sub.coords + r.coords)
        return None
    nrm = a * a - b * b * d
    w = mq_is_square(nrm)
    if w is None:
        return None
    two = sub.from_rational(2)
    for s in (w, -w):
        usq = (a + s) / two
        u = mq_is_square(usq)
        if u is not None and u:
            v = b / (two * u)
            return MQElement(F, u.coords + v.coords)
    return None


def embed_mq(x: MQElement, target: MQField) -> MQElement:
    """Embed x into a field whose square classes contain all of x's generators."""
    reps: list[MQElement] = []
    for d in x.field.gens:
        rep = mq_square_class_rep(target, d)
        if rep is None:
            raise ValueError(f"sqrt({d}) does not live in {target}")
        reps.append(rep)
    out = target.zero
    for m, c in enumerate(x.coords):
        if not c:
            continue
        term = target.from_rational(c)
        for i in range(x.field.k):
            if m >> i & 1:
                term = term * reps[i]
        out = out + term
    return out


def mq_square_class_rep(F: MQField, d: int) -> Optional[MQElement]:
    """An element of F whose square is d, if the class of d is represented."""
    if d in F.gens:
        return F.gen(d)
    r = rational_is_square(d)
    if r is not None:
        return F.from_rational(r)
    for rsize in range(1, F.k + 1):
        for sub in itertools.combinations(range(F.k), rsize):
            prod = d
            for i in sub:
                prod *= F.gens[i]
            rt = rational_is_square(prod)
            if rt is not None:
                denom = 1
                elem = F.from_rational(rt)
                for i in sub:
                    denom *= F.gens[i]
                    elem = elem * F.gen(F.gens[i])
                return elem / F.from_rational(denom)
    return None


def compose_mq(F1: MQField, F2: MQField) -> MQField:
    """Smallest multiquadratic field containing both (k <= 3 enforced)."""
    gens = list(F1.gens)
    for d in F2.gens:
        if mq_square_class_rep(MQField(gens), d) is not None:
            continue
        gens.append(d)
    return MQField(gens)


def as_mq(field) -> MQField:
    if isinstance(field, MQField):
        return field
    if isinstance(field, RationalField):
        return MQField(())
    raise TypeError(f"not a characteristic-0 field: {field}")


def unify_fields(*fields):
    """Compositum of characteristic-0 fields (returns QQ if all rational)."""
    mqs = [as_mq(f) for f in fields]
    out = mqs[0]
    for f in mqs[1:]:
        out = compose_mq(out, f)
    return QQ if out.k == 0 else out


def coerce_into(x, field):
    """Coerce a rational/MQ element into `field` (QQ or MQField)."""
    return field.coerce(x)


def sqrt_with_extension(field, c):
    """Find sqrt(c), extending the multiquadratic field if needed.

    Returns (new_field, sqrt_element).  Tries: square in the field; (-1)*c a
    square (adjoin sqrt(-1)); c rational (adjoin its squarefree class);
    c = m * square for m a signed squarefree kernel built from c's coordinates.
    """
    F = as_mq(field)
    c = F.coerce(c)
    if not c:
        return (field, F.zero)
    r = mq_is_square(c)
    if r is not None:
        return (field, r)
    candidates: list[int] = []
    if c.is_rational():
        candidates.append(rational_squarefree_class(c.coords[0]))
    r1 = mq_is_square(-c)
    if r1 is not None:
        candidates.append(-1)
    for coeff in c.coords:
        if coeff:
            candidates.append(squarefree_kernel(int(coeff.numerator) * int(coeff.denominator)))
            candidates.append(-squarefree_kernel(int(coeff.numerator) * int(coeff.denominator)))
    seen = set()
    for m in candidates:
        if m in seen or m in (0, 1):
            continue
        seen.add(m)
        if mq_square_class_rep(F, m) is not None:
            continue  # would not enlarge; already handled by mq_is_square
        big = compose_mq(F, MQField((m,)))
        cc = big.coerce(c)
        root_m = big.coerce(mq_square_class_rep(big, m))
        quot = cc / (root_m * root_m)  # = c/m, should be a square in big
        r2 = mq_is_square(quot)
        if r2 is not None:
            return (big, r2 * root_m)
    raise ValueError(f"cannot express sqrt of {c} in a multiquadratic extension")


# ---------------------------------------------------------------------------
# finite fields
# ---------------------------------------------------------------------------


def _ff_poly_mul(a, b, mod, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    # reduce by monic mod of degree k
    k = len(mod) - 1
    for i in range(len(out) - 1, k - 1, -1):
        c = out[i]
        if c:
            out[i] = 0
            for j in range(k):
                out[i - k + j] = (out[i - k + j] - c * mod[j]) % p
    return tuple((out + [0] * k)[:k])


class FiniteField:
    """F_{p^k} = F_p[s]/(modulus); modulus is a monic irreducible of degree k."""

    def __init__(self, p: int, modulus: Optional[Sequence[int]] = None):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        if modulus is None:
            modulus = (0, 1)  # F_p itself: s - 0... degree 1, element = residue
        modulus = tuple(m % p for m in modulus)
        if modulus[-1] != 1:
            raise ValueError("modulus must be monic")
        self.modulus = modulus
        self.k = len(modulus) - 1
        self.q = p ** self.k
        self.characteristic = p

    def __repr__(self):
        return f"GF({self.p})" if self.k == 1 else f"GF({self.p}^{self.k})"

    def __eq__(self, other):
        return (isinstance(other, FiniteField) and other.p == self.p
                and other.modulus == self.modulus)

    def __hash__(self):
        return hash(("FF", self.p, self.modulus))

    @property
    def zero(self):
        return FFElement(self, (0,) * self.k)

    @property
    def one(self):
        return FFElement(self, (1,) + (0,) * (self.k - 1))

    def gen(self) -> "FFElement":
        """The class of s (only meaningful for k >= 2)."""
        if self.k == 1:
            return self.zero
        return FFElement(self, (0, 1) + (0,) * (self.k - 2))

    def from_int(self, n: int) -> "FFElement":
        return FFElement(self, (n % self.p,) + (0,) * (self.k - 1))

    def coerce(self, x) -> "FFElement":
        if isinstance(x, FFElement):
            if x.field == self:
                return x
            if x.field.p == self.p and x.field.k == 1:
                return self.from_int(x.coords[0])
            raise TypeError(f"cannot coerce {x} from {x.field} into {self}")
        if isinstance(x, int):
            return self.from_int(x)
        q = rational(x)
        num = self.from_int(int(q.numerator))
        den = self.from_int(int(q.denominator))
        return num / den

    def is_zero(self, x) -> bool:
        return not any(x.coords)

    def elements(self):
        for coords in itertools.product(range(self.p), repeat=self.k):
            yield FFElement(self, coords)

    def is_square(self, x) -> Optional["FFElement"]:
        x = self.coerce(x)
        if not x:
            return self.zero
        if x ** ((self.q - 1) // 2) != self.one:
            return None
        return self._sqrt(x)

    def _sqrt(self, x: "FFElement") -> "FFElement":
        # Tonelli-Shanks over F_q (q odd)
        q = self.q
        if q % 4 == 3:
            return x ** ((q + 1) // 4)
        m, e = q - 1, 0
        while m % 2 == 0:
            m //= 2
            e += 1
        z = None
        rng = random.Random(q * 31 + 7)
        while z is None:
            cand_coords = tuple(rng.randrange(self.p) for _ in range(self.k))
            cand = FFElement(self, cand_coords)
            if cand and cand ** ((q - 1) // 2) != self.one:
                z = cand
        c = z ** m
        t = x ** m
        r = x ** ((m + 1) // 2)
        while t != self.one:
            i, tt = 0, t
            while tt != self.one:
                tt = tt * tt
                i += 1
            b = c ** (1 << (e - i - 1))
            r = r * b
            c = b * b
            t = t * c
            e = i
        return r

    def frobenius(self, x: "FFElement") -> "FFElement":
        return x ** self.p

    def random(self, rng: random.Random, size: int = 0) -> "FFElement":
        return FFElement(self, tuple(rng.randrange(self.p) for _ in range(self.k)))


class FFElement:
    __slots__ = ("field", "coords")

    def __init__(self, field: FiniteField, coords):
        self.field = field
        self.coords = tuple(c % field.p for c in coords)

    def __bool__(self):
        return any(self.coords)

    def __eq__(self, other):
        if isinstance(other, FFElement):
            return self.field == other.field and self.coords == other.coords
        if isinstance(other, int):
            return self == self.field.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.modulus, self.coords))

    def __repr__(self):
        if self.field.k == 1:
            return str(self.coords[0])
        terms = []
        for i, c in enumerate(self.coords):
            if not c:
                continue
            terms.append(str(c) if i == 0 else (f"{c}*s" if i == 1 else f"{c}*s^{i}"))
        return " + ".join(terms) if terms else "0"

    def _co(self, other):
        try:
            return self.field.coerce(other)
        except (TypeError, ValueError, ZeroDivisionError):
            return None

    def __add__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        p = self.field.p
        return FFElement(self.field, tuple((a + b) % p for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return FFElement(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return FFElement(self.field,
                         _ff_poly_mul(self.coords, o.coords, self.field.modulus, self.field.p))

    __rmul__ = __mul__

    def inverse(self) -> "FFElement":
        if not self:
            raise ZeroDivisionError("division by zero")
        # extended gcd in F_p[s] of the coordinate poly against the modulus
        p = self.field.p
        a = list(self.coords)
        while a and a[-1] == 0:
            a.pop()
        r0, r1 = list(self.field.modulus), a
        s0, s1 = [0], [1]
        while _ff_deg(r1) > 0:
            q, r = _ff_polydiv(r0, r1, p)
            r0, r1 = r1, r
            qs = _ff_polymulraw(q, s1, p)
            news = [(x - y) % p for x, y in itertools.zip_longest(s0, qs, fillvalue=0)]
            s0, s1 = s1, news
        if not any(r1):
            raise ZeroDivisionError("element not invertible")
        inv_c = pow(r1[0], p - 2, p)
        res = [(x * inv_c) % p for x in s1]
        res = (res + [0] * self.field.k)[: self.field.k]
        return FFElement(self.field, res)

    def __truediv__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out, base = self.field.one, self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out


def _ff_deg(a) -> int:
    d = len(a) - 1
    while d >= 0 and a[d] == 0:
        d -= 1
    return d


def _ff_polydiv(a, b, p):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    b = list(b)
    while b and b[-1] == 0:
        b.pop()
    if not b:
        raise ZeroDivisionError
    inv = pow(b[-1], p - 2, p)
    q = [0] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b) and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        c = a[-1] * inv % p
        d = len(a) - len(b)
        q[d] = c
        for i, bc in enumerate(b):
            a[d + i] = (a[d + i] - c * bc) % p
        while a and a[-1] == 0:
            a.pop()
    return q, a if a else [0]


def _ff_polymulraw(a, b, p):
    out = [0] * (len(a) + len(b) - 1 if a and b else 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return out


def field_is_finite(field) -> bool:
    return isinstance(field, FiniteField)
