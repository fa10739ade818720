"""Numba kernels for point counting over F_{p^2}.

Elements of F_q (q = p^2) are pairs (a0, a1) with s^2 = D for a fixed
quadratic nonresidue D mod p.  Per-fiber counting finds the group order in
the Hasse window by baby-step/giant-step order hunting on random points,
falling back to a full character sum for the rare small-exponent fibers.
All randomness is a fiber-indexed LCG, so counts are deterministic and
independent of the thread count.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit, prange
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f
        if args and callable(args[0]):
            return args[0]
        return wrap

    prange = range


@njit(cache=True)
def _inv_mod(a, p):
    t, newt = 0, 1
    r, newr = p, a % p
    while newr != 0:
        q = r // newr
        t, newt = newt, t - q * newt
        r, newr = newr, r - q * newr
    return t % p


@njit(cache=True)
def _fq_mul(a0, a1, b0, b1, p, D):
    return (a0 * b0 + a1 * b1 % p * D) % p, (a0 * b1 + a1 * b0) % p


@njit(cache=True)
def _fq_inv(a0, a1, p, D):
    n = (a0 * a0 - D * (a1 * a1 % p)) % p
    ninv = _inv_mod(n, p)
    return a0 * ninv % p, (p - a1) * ninv % p


@njit(cache=True)
def _fq_pow(a0, a1, e, p, D):
    r0, r1 = 1, 0
    b0, b1 = a0, a1
    while e > 0:
        if e & 1:
            r0, r1 = _fq_mul(r0, r1, b0, b1, p, D)
        b0, b1 = _fq_mul(b0, b1, b0, b1, p, D)
        e >>= 1
    return r0, r1


@njit(cache=True)
def _fq_is_square(a0, a1, p, D):
    """Euler criterion via the norm: chi_q(a) = chi_p(a0^2 - D a1^2)."""
    n = (a0 * a0 - D * (a1 * a1 % p)) % p
    if n == 0:
        return 0
    e = pow_mod(n, (p - 1) // 2, p)
    return 1 if e == 1 else -1


@njit(cache=True)
def pow_mod(a, e, p):
    r = 1
    b = a % p
    while e > 0:
        if e & 1:
            r = r * b % p
        b = b * b % p
        e >>= 1
    return r


@njit(cache=True)
def _fq_sqrt(a0, a1, p, D, m2, e2, z0, z1):
    """Tonelli-Shanks in F_q; q - 1 = m2 * 2^e2, (z0, z1) a nonresidue."""
    c0, c1 = _fq_pow(z0, z1, m2, p, D)
    t0, t1 = _fq_pow(a0, a1, m2, p, D)
    r0, r1 = _fq_pow(a0, a1, (m2 + 1) // 2, p, D)
    e = e2
    while not (t0 == 1 and t1 == 0):
        i = 0
        u0, u1 = t0, t1
        while not (u0 == 1 and u1 == 0):
            u0, u1 = _fq_mul(u0, u1, u0, u1, p, D)
            i += 1
        b0, b1 = c0, c1
        for _ in range(e - i - 1):
            b0, b1 = _fq_mul(b0, b1, b0, b1, p, D)
        r0, r1 = _fq_mul(r0, r1, b0, b1, p, D)
        c0, c1 = _fq_mul(b0, b1, b0, b1, p, D)
        t0, t1 = _fq_mul(t0, t1, c0, c1, p, D)
        e = i
    return r0, r1


@njit(cache=True)
def _ec_add(x10, x11, y10, y11, i1, x20, x21, y20, y21, i2,
            a20, a21, a40, a41, p, D):
    if i1 == 1:
        return x20, x21, y20, y21, i2
    if i2 == 1:
        return x10, x11, y10, y11, i1
    if x10 == x20 and x11 == x21:
        s0 = (y10 + y20) % p
        s1 = (y11 + y21) % p
        if s0 == 0 and s1 == 0:
            return 0, 0, 0, 0, 1
        # tangent slope (3x^2 + 2 a2 x + a4) / (2y)
        xx0, xx1 = _fq_mul(x10, x11, x10, x11, p, D)
        n0 = (3 * xx0) % p
        n1 = (3 * xx1) % p
        t0, t1 = _fq_mul(a20, a21, x10, x11, p, D)
        n0 = (n0 + 2 * t0) % p
        n1 = (n1 + 2 * t1) % p
        n0 = (n0 + a40) % p
        n1 = (n1 + a41) % p
        d0 = (2 * y10) % p
        d1 = (2 * y11) % p
        di0, di1 = _fq_inv(d0, d1, p, D)
        l0, l1 = _fq_mul(n0, n1, di0, di1, p, D)
    else:
        n0 = (y20 - y10) % p
        n1 = (y21 - y11) % p
        d0 = (x20 - x10) % p
        d1 = (x21 - x11) % p
        di0, di1 = _fq_inv(d0, d1, p, D)
        l0, l1 = _fq_mul(n0, n1, di0, di1, p, D)
    ll0, ll1 = _fq_mul(l0, l1, l0, l1, p, D)
    x30 = (ll0 - a20 - x10 - x20) % p
    x31 = (ll1 - a21 - x11 - x21) % p
    t0, t1 = _fq_mul(l0, l1, (x10 - x30) % p, (x11 - x31) % p, p, D)
    y30 = (t0 - y10) % p
    y31 = (t1 - y11) % p
    return x30, x31, y30, y31, 0


@njit(cache=True)
def _ec_mul(n, x0, x1, y0, y1, a20, a21, a40, a41, p, D):
    rx0, rx1, ry0, ry1, ri = 0, 0, 0, 0, 1
    bx0, bx1, by0, by1, bi = x0, x1, y0, y1, 0
    while n > 0:
        if n & 1:
            rx0, rx1, ry0, ry1, ri = _ec_add(rx0, rx1, ry0, ry1, ri,
                                             bx0, bx1, by0, by1, bi,
                                             a20, a21, a40, a41, p, D)
        bx0, bx1, by0, by1, bi = _ec_add(bx0, bx1, by0, by1, bi,
                                         bx0, bx1, by0, by1, bi,
                                         a20, a21, a40, a41, p, D)
        n >>= 1
    return rx0, rx1, ry0, ry1, ri


@njit(cache=True)
def _gcd64(a, b):
    while b:
        a, b = b, a % b
    return a


@njit(cache=True)
def _chi_sum_count(e10, e11, e20, e21, e30, e31, p, D):
    """Full character-sum count of y^2 = (x-e1)(x-e2)(x-e3) over F_q, with O."""
    total = 1
    for x0 in range(p):
        for x1 in range(p):
            f0 = (x0 - e10) % p
            f1 = (x1 - e11) % p
            g0 = (x0 - e20) % p
            g1 = (x1 - e21) % p
            h0 = (x0 - e30) % p
            h1 = (x1 - e31) % p
            u0, u1 = _fq_mul(f0, f1, g0, g1, p, D)
            u0, u1 = _fq_mul(u0, u1, h0, h1, p, D)
            total += 1 + _fq_is_square(u0, u1, p, D)
    return total


@njit(cache=True)
def _fiber_order(e10, e11, e20, e21, e30, e31, p, D, m2, e2, z0, z1, seed):
    """#E(F_q) for the good fiber y^2 = (x - e1)(x - e2)(x - e3), q = p^2."""
    q = p * p
    lo = q + 1 - 2 * p
    hi = q + 1 + 2 * p
    width = hi - lo + 1
    # curve in a-invariant form
    a20 = (-(e10 + e20 + e30)) % p
    a21 = (-(e11 + e21 + e31)) % p
    t0, t1 = _fq_mul(e10, e11, e20, e21, p, D)
    u0, u1 = _fq_mul(e10, e11, e30, e31, p, D)
    v0, v1 = _fq_mul(e20, e21, e30, e31, p, D)
    a40 = (t0 + u0 + v0) % p
    a41 = (t1 + u1 + v1) % p

    r = 1
    while r * r < width:
        r += 1
    max_mults = 16
    mults = np.zeros(max_mults, dtype=np.int64)

    A = np.int64(4)  # full rational 2-torsion forces 4 | N
    state = np.int64(seed * 6364136223846793005 + 1442695040888963407)

    baby_keys = np.zeros(r, dtype=np.int64)
    baby_idx = np.zeros(r, dtype=np.int64)

    for attempt in range(10):
        # deterministic pseudo-random x with f(x) a nonzero square
        px0, px1, py0, py1 = -1, -1, -1, -1
        for _ in range(4 * p):
            state = state * np.int64(6364136223846793005) + np.int64(1442695040888963407)
            v = np.int64((state >> 17) & np.int64(0x7FFFFFFFFFFF))
            xv = v % q
            x0 = int(xv % p)
            x1 = int(xv // p)
            f0 = (x0 - e10) % p
            f1 = (x1 - e11) % p
            g0 = (x0 - e20) % p
            g1 = (x1 - e21) % p
            h0 = (x0 - e30) % p
            h1 = (x1 - e31) % p
            u0b, u1b = _fq_mul(f0, f1, g0, g1, p, D)
            u0b, u1b = _fq_mul(u0b, u1b, h0, h1, p, D)
            if u0b == 0 and u1b == 0:
                continue
            if _fq_is_square(u0b, u1b, p, D) == 1:
                yy0, yy1 = _fq_sqrt(u0b, u1b, p, D, m2, e2, z0, z1)
                px0, px1, py0, py1 = x0, x1, yy0, yy1
                break
        if px0 < 0:
            break  # pathological: fall back to full count

        n_mults = 0
        # baby steps i*P for 0 <= i < r
        bx0, bx1, by0, by1, bi = 0, 0, 0, 0, 1
        small_order = 0
        for i in range(r):
            if bi == 1 and i > 0:
                small_order = i
                break
            baby_keys[i] = np.int64(-1) if bi == 1 else np.int64(bx0) * p + bx1
            baby_idx[i] = i
            bx0, bx1, by0, by1, bi = _ec_add(bx0, bx1, by0, by1, bi,
                                             px0, px1, py0, py1, 0,
                                             a20, a21, a40, a41, p, D)
        if small_order > 0:
            d = small_order
            first = lo + ((-lo) % d)
            n_mults = 0
            n = first
            while n <= hi and n_mults < max_mults:
                mults[n_mults] = n
                n_mults += 1
                n += d
        else:
            order = np.argsort(baby_keys[:r])
            sorted_keys = baby_keys[:r][order]
            sorted_idx = baby_idx[:r][order]
            # giant steps
            gx0, gx1, gy0, gy1, gi = _ec_mul(r, px0, px1, py0, py1,
                                             a20, a21, a40, a41, p, D)
            cx0, cx1, cy0, cy1, ci = _ec_mul(lo, px0, px1, py0, py1,
                                             a20, a21, a40, a41, p, D)
            jmax = width // r + 2
            for j in range(jmax + 1):
                if ci == 1:
                    n = lo + j * r
                    if lo <= n <= hi and n_mults < max_mults:
                        dup = False
                        for k in range(n_mults):
                            if mults[k] == n:
                                dup = True
                        if not dup:
                            mults[n_mults] = n
                            n_mults += 1
                else:
                    key = np.int64(cx0) * p + cx1
                    lo_b, hi_b = 0, r
                    while lo_b < hi_b:
                        mid = (lo_b + hi_b) // 2
                        if sorted_keys[mid] < key:
                            lo_b = mid + 1
                        else:
                            hi_b = mid
                    kk = lo_b
                    while kk < r and sorted_keys[kk] == key:
                        i = sorted_idx[kk]
                        for sgn in (-1, 1):
                            n = lo + j * r + sgn * i
                            if lo <= n <= hi:
                                vx0, vx1, vy0, vy1, vi = _ec_mul(
                                    n, px0, px1, py0, py1, a20, a21, a40, a41, p, D)
                                if vi == 1 and n_mults < max_mults:
                                    dup = False
                                    for k2 in range(n_mults):
                                        if mults[k2] == n:
                                            dup = True
                                    if not dup:
                                        mults[n_mults] = n
                                        n_mults += 1
                        kk += 1
                cx0, cx1, cy0, cy1, ci = _ec_add(cx0, cx1, cy0, cy1, ci,
                                                 gx0, gx1, gy0, gy1, gi,
                                                 a20, a21, a40, a41, p, D)
        if n_mults == 0:
            continue  # numerical impossibility; try another point
        if n_mults == 1:
            return mults[0]
        # order of P = gap between consecutive multiples
        mm = np.sort(mults[:n_mults])
        d = mm[1] - mm[0]
        for k in range(2, n_mults):
            d = _gcd64(d, mm[k] - mm[k - 1])
        A = A // _gcd64(A, d) * d  # lcm
        first = lo + ((-lo) % A)
        cnt = 0
        last = np.int64(-1)
        n = first
        while n <= hi:
            cnt += 1
            last = n
            n += A
        if cnt == 1:
            return last
    # structure filter: N = A*B with B | A and B | q - 1
    first = lo + ((-lo) % A)
    cand = np.int64(-1)
    ncand = 0
    n = first
    while n <= hi:
        B = n // A
        if n % A == 0 and A % B == 0 and (q - 1) % B == 0:
            cand = n
            ncand += 1
        n += A
    if ncand == 1:
        return cand
    return _chi_sum_count(e10, e11, e20, e21, e30, e31, p, D)


@njit(cache=True, parallel=True)
def surface_sum_q2(p, D, rc, lo_idx, hi_idx, m2, e2, z0, z1):
    """Sum of good-fiber orders over t-indices [lo_idx, hi_idx).

    rc is a 3 x 5 int64 array of root-polynomial coefficients mod p (t-degree
    <= 4).  The index encodes t = (idx % p) + (idx // p) s; indices with
    s-component > (p-1)/2 are skipped and their Frobenius partner is counted
    with weight 2.  Degenerate fibers (colliding roots) are skipped.
    """
    half = (p - 1) // 2
    total = np.int64(0)
    for idx in prange(lo_idx, hi_idx):
        a = idx % p
        b = idx // p
        if b > half:
            continue
        weight = 1 if b == 0 else 2
        # evaluate the three root polynomials at t = (a, b) by Horner
        e = np.zeros(6, dtype=np.int64)
        for k in range(3):
            acc0, acc1 = 0, 0
            for d in range(4, -1, -1):
                acc0, acc1 = _fq_mul(acc0, acc1, a, b, p, D)
                acc0 = (acc0 + rc[k, d]) % p
            e[2 * k] = acc0
            e[2 * k + 1] = acc1
        if ((e[0] == e[2] and e[1] == e[3]) or (e[0] == e[4] and e[1] == e[5])
                or (e[2] == e[4] and e[3] == e[5])):
            continue
        total += weight * _fiber_order(e[0], e[1], e[2], e[3], e[4], e[5],
                                       p, D, m2, e2, z0, z1, idx + 1)
    return total


@njit(cache=True)
def fiber_order_q2(p, D, e_coords, m2, e2, z0, z1, seed):
    """Single good fiber over F_{p^2}: e_coords = (e10,e11,e20,e21,e30,e31)."""
    return _fiber_order(e_coords[0], e_coords[1], e_coords[2], e_coords[3],
                        e_coords[4], e_coords[5], p, D, m2, e2, z0, z1, seed)
