"""Small prime utilities: sieve, primality, factoring.

Everything here is exact integer arithmetic.  Factoring falls back to
sympy only for operands too large for quick trial division, which keeps
the common path dependency-free and fast to import.
"""

from functools import lru_cache

# Witnesses sufficient for a deterministic Miller-Rabin test below 3.3 * 10^24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)

_TRIAL_DIVISION_LIMIT = 10**12


def is_prime(m: int) -> bool:
    """Deterministic Miller-Rabin, exact for every int this package meets."""
    if m < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        if m % p == 0:
            return m == p
    d = m - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, m)
        if x in (1, m - 1):
            continue
        for _ in range(r - 1):
            x = x * x % m
            if x == m - 1:
                break
        else:
            return False
    return True


def primes_below(bound: int) -> list[int]:
    """All primes p < bound, by a plain sieve of Eratosthenes."""
    if bound <= 2:
        return []
    flags = bytearray([1]) * bound
    flags[0] = flags[1] = 0
    for q in range(2, int(bound**0.5) + 1):
        if flags[q]:
            flags[q * q :: q] = bytearray(len(range(q * q, bound, q)))
    return [i for i in range(bound) if flags[i]]


def next_prime(m: int) -> int:
    """Smallest prime strictly greater than m."""
    q = max(m + 1, 2)
    if q > 2 and q % 2 == 0:
        q += 1
    while not is_prime(q):
        q += 1 if q == 2 else 2
    return q


@lru_cache(maxsize=None)
def factor(m: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of m >= 1 as sorted (prime, exponent) pairs."""
    if m < 1:
        raise ValueError("factor() expects a positive integer")
    if m == 1:
        return ()
    if m > _TRIAL_DIVISION_LIMIT:
        from sympy import factorint

        return tuple(sorted((int(p), int(e)) for p, e in factorint(m).items()))
    out = []
    for p in (2, 3, 5):
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
    # wheel over 30 avoids multiples of 2, 3, 5
    q = 7
    increments = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while q * q <= m:
        if m % q == 0:
            e = 0
            while m % q == 0:
                m //= q
                e += 1
            out.append((q, e))
        q += increments[i]
        i = (i + 1) % 8
    if m > 1:
        out.append((m, 1))
    return tuple(sorted(out))


def prime_divisors(m: int) -> list[int]:
    """Sorted prime divisors of abs(m); empty for 0 and units."""
    m = abs(m)
    if m <= 1:
        return []
    return [p for p, _ in factor(m)]
