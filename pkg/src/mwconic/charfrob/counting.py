"""Point counting for reduced surfaces: naive character sums and BSGS modes.

#S(F_q) = sum over t in P^1(F_q) of the F_q-points of the smooth-model fiber.
Good fibers are counted as q + 1 - a_t; bad I_n fibers contribute by the
component bookkeeping (split: nq; nonsplit: 2q + 2 for even n, q + 2 for odd).
"""

from __future__ import annotations

import json
import math
import os
import random
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..algebra import FiniteField, Poly, RatFunc, factor_poly, legendre
from ..algebra.fields import FFElement
from ..curves import WeierstrassCurve
from ..surface import Place, UnsupportedFiberType, classify_fiber, fiber_configuration
from . import kernels


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def base_change_curve(E: WeierstrassCurve, F: FiniteField) -> WeierstrassCurve:
    """Extend constants of a curve over F_p(t) to F_{p^k}(t)."""
    return E.change_field(F, F.coerce)


def bad_fiber_count(n: int, split: bool, q: int) -> int:
    """F_q-points of an I_n fiber of the smooth model."""
    if n < 1:
        raise ValueError("good fiber")
    if split:
        return n * q
    return 2 * q + 2 if n % 2 == 0 else q + 2


def _cubic_at(E: WeierstrassCurve, t0: FFElement):
    return tuple(r(t0) for r in E.roots)


def count_points_cubic_naive(e1, e2, e3) -> int:
    """#{y^2 = (x-e1)(x-e2)(x-e3)} over the coefficient field, with infinity."""
    F = e1.field
    q = F.q
    total = 1
    half = (q - 1) // 2
    one = F.one
    for x in F.elements():
        v = (x - e1) * (x - e2) * (x - e3)
        if not v:
            total += 1
        else:
            total += 2 if v ** half == one else 0
    return total


def count_points_cubic_bsgs(e1, e2, e3, seed: int = 1) -> int:
    """Order search in the Hasse window (pure Python, any F_q with q odd)."""
    F = e1.field
    q = F.q
    amax = math.isqrt(4 * q)
    lo = max(1, q + 1 - amax)
    hi = q + 1 + amax
    width = hi - lo + 1
    a2 = -(e1 + e2 + e3)
    a4 = e1 * e2 + e1 * e3 + e2 * e3

    def add(P, Q):
        if P is None:
            return Q
        if Q is None:
            return P
        (x1, y1), (x2, y2) = P, Q
        if x1 == x2:
            if y1 == -y2:
                return None
            lam = (3 * x1 * x1 + 2 * a2 * x1 + a4) / (2 * y1)
        else:
            lam = (y2 - y1) / (x2 - x1)
        x3 = lam * lam - a2 - x1 - x2
        return (x3, lam * (x1 - x3) - y1)

    def mul(n, P):
        out, base = None, P
        while n:
            if n & 1:
                out = add(out, base)
            base = add(base, base)
            n >>= 1
        return out

    rng = random.Random(seed)
    A = 4  # full 2-torsion
    r = math.isqrt(width) + 1
    for _attempt in range(10):
        P = None
        for _ in range(6 * q):
            x = F.random(rng)
            v = (x - e1) * (x - e2) * (x - e3)
            if not v:
                continue
            y = F.is_square(v)
            if y is not None:
                P = (x, y)
                break
        if P is None:
            break
        baby = {}
        R = None
        small = 0
        for i in range(r):
            if R is None and i > 0:
                small = i
                break
            if R is not None:
                baby.setdefault(R[0], []).append(i)
            R = add(R, P)
        mults = set()
        if small:
            d = small
            n0 = lo + (-lo) % d
            mults.update(range(n0, hi + 1, d))
        else:
            G = mul(r, P)
            cur = mul(lo, P)
            for j in range(width // r + 3):
                if cur is None:
                    if lo <= lo + j * r <= hi:
                        mults.add(lo + j * r)
                else:
                    for i in baby.get(cur[0], []):
                        for n in (lo + j * r - i, lo + j * r + i):
                            if lo <= n <= hi and mul(n, P) is None:
                                mults.add(n)
                cur = add(cur, G)
        if not mults:
            continue
        if len(mults) == 1:
            return mults.pop()
        ms = sorted(mults)
        d = ms[1] - ms[0]
        for k in range(2, len(ms)):
            d = math.gcd(d, ms[k] - ms[k - 1])
        A = A * d // math.gcd(A, d)
        n0 = lo + (-lo) % A
        cands = list(range(n0, hi + 1, A))
        if len(cands) == 1:
            return cands[0]
    n0 = lo + (-lo) % A
    cands = [n for n in range(n0, hi + 1, A)
             if A % (n // A) == 0 and (q - 1) % (n // A) == 0]
    if len(cands) == 1:
        return cands[0]
    return count_points_cubic_naive(e1, e2, e3)


def count_fiber(E: WeierstrassCurve, v, mode: str = "naive") -> int:
    """#(smooth-model fiber)(F_q) at v in P^1(F_q) for a curve over F_q(t).

    v is an FFElement of the coefficient field, or the string "infinity".
    Good fibers are counted naively or by BSGS; bad I_n fibers use the
    component formula driven by the node and tangent-splitting data.
    """
    F = E.field
    q = F.q
    if isinstance(v, str) and v == "infinity":
        chart, _n = E.infinity_chart()
        return count_fiber(chart, F.zero, mode=mode)
    e1, e2, e3 = _cubic_at_place(E, v)
    if e1 != e2 and e1 != e3 and e2 != e3:
        if mode == "naive":
            return count_points_cubic_naive(e1, e2, e3)
        return count_points_cubic_bsgs(e1, e2, e3, seed=_seed_of(v))
    # bad fiber: classify at the place t - v
    t = Poly.x(F)
    pi = t - v
    fd = classify_fiber(E, Place(pi), compute_split=True)
    if fd.kodaira.kind != "I" or fd.kodaira.n < 1:
        raise UnsupportedFiberType(f"counting supports I_n fibers only, got {fd.kodaira}")
    return bad_fiber_count(fd.kodaira.n, bool(fd.tangent_split), q)


def _cubic_at_place(E: WeierstrassCurve, t0):
    try:
        return tuple(r(t0) for r in E.roots)
    except ZeroDivisionError:
        raise UnsupportedFiberType("root with a pole at the fiber; non-integral model")


def _seed_of(v) -> int:
    return 1 + sum(c * 1315423911 ** i for i, c in enumerate(v.coords)) % (2 ** 31)


# ---------------------------------------------------------------------------
# whole-surface counts
# ---------------------------------------------------------------------------


def _bad_points_over(E: WeierstrassCurve, F: FiniteField):
    """All t0 in F (deg-1 places over F) where the reduced fibers degenerate."""
    EF = base_change_curve(E, F) if E.field != F else E
    bad = set()
    for i in range(3):
        for j in range(i + 1, 3):
            d = (EF.roots[i] - EF.roots[j]).num
            if d.degree >= 1:
                for g, _e in factor_poly(d):
                    if g.degree == 1:
                        bad.add(-g[0] / g[1])
    return EF, sorted(bad, key=lambda x: x.coords)


def count_surface_naive_fp(E: WeierstrassCurve, threads: int = 1) -> int:
    """#S(F_p) by vectorized character sums (curve over F_p(t), p >= 5)."""
    F = E.field
    assert F.k == 1
    p = F.p
    # chi table
    chi = np.full(p, -1, dtype=np.int64)
    chi[0] = 0
    sq = (np.arange(p, dtype=np.int64) ** 2) % p
    chi[sq] = 1
    # root coefficient arrays
    rc = np.zeros((3, 5), dtype=np.int64)
    for k, r in enumerate(E.roots):
        poly = r.as_poly()
        if poly.degree > 4:
            raise ValueError("root degree > 4 unsupported in the fast counter")
        for d0 in range(poly.degree + 1):
            rc[k, d0] = poly[d0].coords[0] % p
    EF, bad = _bad_points_over(E, F)
    bad_vals = {b.coords[0] for b in bad}
    ts = np.arange(p, dtype=np.int64)
    roots_at = np.zeros((3, p), dtype=np.int64)
    for k in range(3):
        acc = np.zeros(p, dtype=np.int64)
        for d0 in range(4, -1, -1):
            acc = (acc * ts + rc[k, d0]) % p
        roots_at[k] = acc
    xs = np.arange(p, dtype=np.int64)
    total = 0
    good_mask = np.ones(p, dtype=bool)
    for b in bad_vals:
        good_mask[b] = False
    # vectorized over x for each good t
    for t0 in range(p):
        if not good_mask[t0]:
            continue
        vals = ((xs - roots_at[0, t0]) * (xs - roots_at[1, t0])) % p
        vals = (vals * (xs - roots_at[2, t0])) % p
        total += int(p + 1 + chi[vals].sum())
    for b in bad:
        total += _bad_count_at(EF, b)
    total += _infinity_count(EF, mode="naive")
    return total


def _bad_count_at(EF: WeierstrassCurve, t0) -> int:
    F = EF.field
    pi = Poly.x(F) - t0
    fd = classify_fiber(EF, Place(pi), compute_split=True)
    if fd.kodaira.is_good:
        e1, e2, e3 = _cubic_at_place(EF, t0)
        return count_points_cubic_naive(e1, e2, e3)
    if fd.kodaira.kind != "I":
        raise UnsupportedFiberType(f"count formula needs I_n, got {fd.kodaira}")
    return bad_fiber_count(fd.kodaira.n, bool(fd.tangent_split), F.q)


def _infinity_count(EF: WeierstrassCurve, mode: str) -> int:
    chart, _n = EF.infinity_chart()
    F = EF.field
    zero = F.zero
    e1, e2, e3 = _cubic_at_place(chart, zero)
    if e1 != e2 and e1 != e3 and e2 != e3:
        if mode == "bsgs" and F.k == 2:
            return _fiber_bsgs_kernel(chart, zero)
        return count_points_cubic_naive(e1, e2, e3)
    return _bad_count_at(chart, zero)


# -- q = p^2 via the numba kernel -------------------------------------------


def _fq2_params(p: int):
    D = 2
    while legendre(D, p) != -1:
        D += 1
    q = p * p
    m2, e2 = q - 1, 0
    while m2 % 2 == 0:
        m2 //= 2
        e2 += 1
    # nonresidue of F_q: s works iff its norm -D is a nonresidue mod p
    F = FiniteField(p, (p - D, 0, 1))  # s^2 = D
    rng = random.Random(p)
    while True:
        z0, z1 = rng.randrange(p), rng.randrange(p)
        n = (z0 * z0 - D * z1 * z1) % p
        if n and legendre(n, p) == -1:
            return D, m2, e2, z0, z1, F


def _fiber_bsgs_kernel(E: WeierstrassCurve, t0) -> int:
    F = E.field
    assert F.k == 2
    p = F.p
    # re-express the field as F_p[s]/(s^2 - D) for the kernel
    D, m2, e2, z0, z1, FD = _fq2_params(p)
    # map t0 and roots into FD via a field isomorphism: find sqrt(D) in F
    rootD = F.is_square(F.from_int(D))
    assert rootD is not None

    def to_pair(x):
        # x = a + b*sqrt(D): solve in the basis (1, rootD)
        a0, a1 = x.coords if len(x.coords) == 2 else (x.coords[0], 0)
        r0, r1 = rootD.coords if len(rootD.coords) == 2 else (rootD.coords[0], 0)
        # x = a0 + a1 s_orig; rootD = r0 + r1 s_orig -> b = a1 / r1, a = a0 - b r0
        if r1 == 0:
            raise ValueError("sqrt(D) is rational: p splits, cannot renormalize")
        inv = pow(r1, p - 2, p)
        b = a1 * inv % p
        a = (a0 - b * r0) % p
        return a, b

    e = []
    for r in E.roots:
        val = r(t0)
        e.extend(to_pair(val))
    return int(kernels.fiber_order_q2(p, D, np.array(e, dtype=np.int64),
                                      m2, e2, z0, z1, _seed_of(t0)))


def count_surface_q2(E: WeierstrassCurve, threads: int = 1,
                     cache_path: Optional[str] = None,
                     chunk: int = 200_000) -> int:
    """#S(F_{p^2}) for a curve over F_p(t) via the numba BSGS kernel."""
    F = E.field
    assert F.k == 1, "pass the F_p model; the count is over F_{p^2}"
    p = F.p
    D, m2, e2, z0, z1, FD = _fq2_params(p)
    rc = np.zeros((3, 5), dtype=np.int64)
    for k, r in enumerate(E.roots):
        poly = r.as_poly()
        if poly.degree > 4:
            raise ValueError("root degree > 4 unsupported in the fast counter")
        for d0 in range(poly.degree + 1):
            rc[k, d0] = poly[d0].coords[0] % p

    if threads and threads > 0:
        try:
            import numba
            numba.set_num_threads(max(1, threads))
        except Exception:
            pass

    q = p * p
    cache = _load_cache(cache_path, p, 2, rc)
    total_good = 0
    done = {(c[0], c[1]): c[2] for c in cache["chunks"]}
    for lo in range(0, q, chunk):
        hi = min(q, lo + chunk)
        if (lo, hi) in done:
            total_good += done[(lo, hi)]
            continue
        part = int(kernels.surface_sum_q2(p, D, rc, lo, hi, m2, e2, z0, z1))
        total_good += part
        cache["chunks"].append([lo, hi, part])
        _save_cache(cache_path, cache)

    # bad fibers over F_{p^2} and the fiber at infinity
    EF, bad = _bad_points_over(E, FD)
    for b in bad:
        total_good += _bad_count_at(EF, b)
    total_good += _infinity_count(EF, mode="bsgs")
    return total_good


def _model_key(p: int, m: int, rc: np.ndarray) -> str:
    return f"p={p};m={m};rc={rc.tolist()}"


def _load_cache(path: Optional[str], p: int, m: int, rc: np.ndarray) -> dict:
    key = _model_key(p, m, rc)
    if path and os.path.exists(path):
        with open(path) as fh:
            data = json.load(fh)
        if data.get("version") == 1 and data.get("model") == key:
            return data
    return {"version": 1, "p": p, "m": m, "model": key, "chunks": []}


def _save_cache(path: Optional[str], cache: dict) -> None:
    if not path:
        return
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(cache, fh)
    os.replace(tmp, path)


def count_surface(E: WeierstrassCurve, m: int = 1, mode: str = "auto",
                  threads: int = 1, cache_path: Optional[str] = None) -> int:
    """#S(F_{p^m}) for the reduction of the surface with generic fiber E/F_p(t)."""
    F = E.field
    assert isinstance(F, FiniteField) and F.k == 1
    p = F.p
    if m == 1:
        return count_surface_naive_fp(E, threads)
    if m == 2:
        if mode == "naive" or (mode == "auto" and p * p <= 2500):
            FQ = FiniteField(p, _irreducible_quadratic(p))
            return _count_surface_generic(E, FQ)
        return count_surface_q2(E, threads=threads, cache_path=cache_path)
    FQ = FiniteField(p, _irreducible_tuple(p, m))
    return _count_surface_generic(E, FQ)


def _irreducible_quadratic(p: int):
    D = 2
    while legendre(D, p) != -1:
        D += 1
    return (p - D, 0, 1)


def _irreducible_tuple(p: int, k: int):
    from ..algebra import is_irreducible
    F = FiniteField(p)
    rng = random.Random(p * 1000 + k)
    while True:
        coeffs = [rng.randrange(p) for _ in range(k)] + [1]
        poly = Poly(F, [F.from_int(c) for c in coeffs])
        if is_irreducible(poly):
            return tuple(c.coords[0] for c in poly.coeffs)


def _count_surface_generic(E: WeierstrassCurve, FQ: FiniteField) -> int:
    """Pure-Python reference count over any F_q (oracle for small q)."""
    EF = base_change_curve(E, FQ)
    total = 0
    for t0 in FQ.elements():
        e1, e2, e3 = _cubic_at_place(EF, t0)
        if e1 != e2 and e1 != e3 and e2 != e3:
            total += count_points_cubic_naive(e1, e2, e3)
        else:
            total += _bad_count_at(EF, t0)
    total += _infinity_count(EF, mode="naive")
    return total
