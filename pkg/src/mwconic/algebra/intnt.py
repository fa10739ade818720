"""Integer number theory: primality, factorization, square classes, Legendre symbols."""

from __future__ import annotations

import math
import random
from typing import Dict

try:
    from gmpy2 import isqrt as _isqrt, is_square as _gmpy_is_square
except ImportError:  # pragma: no cover
    _isqrt = math.isqrt
    _gmpy_is_square = None

_SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]


def is_perfect_square(n: int) -> bool:
    if n < 0:
        return False
    if _gmpy_is_square is not None:
        return bool(_gmpy_is_square(n))
    r = math.isqrt(n)
    return r * r == n


def isqrt(n: int) -> int:
    return int(_isqrt(n))


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24 (fixed base set)."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    n += 1
    while not is_prime(n):
        n += 1
    return n


def primes_up_to(bound: int) -> list[int]:
    if bound < 2:
        return []
    sieve = bytearray([1]) * (bound + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, isqrt(bound) + 1):
        if sieve[i]:
            sieve[i * i :: i] = b"\x00" * len(range(i * i, bound + 1, i))
    return [i for i in range(bound + 1) if sieve[i]]


def _pollard_brent(n: int, rng: random.Random) -> int:
    if n % 2 == 0:
        return 2
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factorint(n: int) -> Dict[int, int]:
    """Prime factorization of |n| (n != 0); trial division then Pollard-Brent."""
    if n == 0:
        raise ValueError("cannot factor 0")
    n = abs(n)
    out: Dict[int, int] = {}
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    if n == 1:
        return out
    rng = random.Random(0xC0FFEE ^ n)
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        if is_perfect_square(m):
            r = isqrt(m)
            stack += [r, r]
            continue
        d = _pollard_brent(m, rng)
        stack += [d, m // d]
    return out


def squarefree_decompose(n: int) -> tuple[int, int]:
    """n = s * r**2 with s squarefree carrying the sign of n. Returns (s, r)."""
    if n == 0:
        raise ValueError("0 has no squarefree decomposition")
    sign = -1 if n < 0 else 1
    s, r = sign, 1
    for p, e in factorint(n).items():
        if e % 2:
            s *= p
        r *= p ** (e // 2)
    return s, r


def squarefree_kernel(n: int) -> int:
    """Signed squarefree part of n; kernel of 0 is 0."""
    if n == 0:
        return 0
    return squarefree_decompose(n)[0]


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p, via Euler's criterion."""
    if p == 2 or not is_prime(p):
        raise ValueError(f"p = {p} must be an odd prime")
    a %= p
    if a == 0:
        return 0
    r = pow(a, (p - 1) // 2, p)
    return 1 if r == 1 else -1
