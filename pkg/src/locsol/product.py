"""Certified enclosures for the product of densities over all places.

The full local density rho_loc(n, k) is the real-place density times the
product of rho_p over every prime.  Truncating at a cutoff P gives an
exact upper bound; a tail hypothesis 1 - rho_p <= A p^-s (valid from
p_min on, with s >= 2 once n >= 3) turns the truncation into a certified
lower bound via

    prod_{p >= P} rho_p >= 1 - A * sum_{p >= P} p^-s
                        >= 1 - A * (P-1)^(1-s) / (s-1).

The integral majorant uses P-1, not P: sum_{m >= P} m^-s is bounded by
the integral from P-1, and the cruder P^(1-s)/(s-1) would be false
(already at s = 2, P = 2 the sum 0.6449... exceeds 1/2).

For n = 2 the deficits 1 - rho_p decay like 1/p, the product diverges to
zero, and the enclosure is the exact point [0, 0].
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .density import generic_sum, rho_infinity, rho_p_closed_form, rho_p_exact
from .errors import DegenerateInput, DivergentTail, PreconditionViolated
from .primes import next_prime, prime_divisors, primes_below


@dataclass(frozen=True)
class TailBound:
    """Certificate that 1 - rho_p <= constant * p^-exponent for p >= p_min."""

    constant: Fraction
    exponent: int
    p_min: int


_STORED_TAILS = {
    (3, 2): TailBound(Fraction(3, 2), 2, 2),
    (3, 3): TailBound(Fraction(8, 3), 2, 2),
    (4, 3): TailBound(Fraction(40, 3), 4, 2),
    (5, 3): TailBound(Fraction(80, 3), 6, 2),
}


def pathological_primes(k: int) -> list[int]:
    """Primes where the generic density formulas can fail: divisors of k
    and small primes below (k-1)(k-2) with gcd(p-1, k) > 1."""
    out = set(prime_divisors(k))
    for p in primes_below((k - 1) * (k - 2)):
        if gcd(p - 1, k) > 1:
            out.add(p)
    return sorted(out)


def tail_hypothesis(n: int, k: int) -> TailBound:
    """A proven coefficient for the tail of the density product.

    k in {2, 3} uses constants read off the closed forms.  Other k get a
    coarse but sound bound from the generic sum, valid from the first
    prime past both (k-1)(k-2) and k: each term p^-w is split off the
    minimal weight s and the remainder bounded at p_min, while the
    class-count factor (1/2 - 1/(2d))^r is bounded by d <= k.
    """
    if n < 2 or k < 2:
        raise DegenerateInput(f"need n >= 2 and k >= 2, got ({n}, {k})")
    if n == 2:
        raise DivergentTail("deficits decay like 1/p for n = 2; "
                            "the density product diverges to zero")
    if k == 2:
        return _STORED_TAILS[(3, 2)] if n == 3 \
            else TailBound(Fraction(0), 2, 2)
    if k == 3:
        if n in (3, 4, 5):
            return _STORED_TAILS[(n, 3)]
        return TailBound(Fraction(0), 2, 2)
    p_min = next_prime(max((k - 1) * (k - 2), k + 1) - 1)
    from itertools import combinations
    from math import factorial
    weights = []
    r_lo = max(n - k + 1, 0)
    r_hi = min((n + 1) // 2, k)
    for r in range(r_lo, r_hi + 1):
        for pair_exps in combinations(range(k), r):
            rest = [e for e in range(k) if e not in pair_exps]
            for single_exps in combinations(rest, n + 1 - 2 * r):
                weights.append((r, 2 * sum(pair_exps) + sum(single_exps)))
    if not weights:
        return TailBound(Fraction(0), 2, p_min)
    s = min(w for _, w in weights)
    if s < 2:
        raise DivergentTail(f"tail exponent {s} does not converge")
    constant = Fraction(0)
    for r, w in weights:
        constant += Fraction(k - 1, 2 * k)**r * Fraction(1, p_min**(w - s))
    return TailBound(factorial(n + 1) * constant, s, p_min)


@dataclass(frozen=True)
class CertifiedInterval:
    """Exact rational enclosure of rho_loc, with the finite-prime part
    broken out separately (finite_lo/finite_hi exclude the real place)."""

    n: int
    k: int
    cutoff: int
    lo: Fraction
    hi: Fraction
    finite_lo: Fraction
    finite_hi: Fraction
    real_factor: Fraction
    tail: TailBound | None

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def to_record(self, digits: int = 6) -> dict:
        dec_lo, dec_hi = decimalize(self, digits)
        return {
            "n": self.n,
            "k": self.k,
            "P": self.cutoff,
            "lo": {"num": self.lo.numerator, "den": self.lo.denominator},
            "hi": {"num": self.hi.numerator, "den": self.hi.denominator},
            "decimal": {"lo": dec_lo, "hi": dec_hi},
            "finite": {
                "lo": {"num": self.finite_lo.numerator,
                       "den": self.finite_lo.denominator},
                "hi": {"num": self.finite_hi.numerator,
                       "den": self.finite_hi.denominator},
            },
            "real_factor": {"num": self.real_factor.numerator,
                            "den": self.real_factor.denominator},
            "note": "density of everywhere-locally-soluble coefficient "
                    "vectors; reading it as a proportion of actual "
                    "rational points assumes the usual local-global "
                    "hypothesis for these hypersurfaces",
        }


def rho_loc_interval(n: int, k: int, cutoff: int = 10**4, *,
                     use_cache: bool = True) -> CertifiedInterval:
    """Enclose rho_loc(n, k) = rho_infinity * prod_p rho_p exactly.

    Primes below the cutoff contribute exact factors (pathological ones
    by cell enumeration, the rest by closed form or generic sum); the
    tail past the cutoff is bounded by tail_hypothesis.  Requires
    n >= 2; for n = 2 the result is the exact point [0, 0].
    """
    if n < 2 or k < 2:
        raise DegenerateInput(f"need n >= 2 and k >= 2, got ({n}, {k})")
    real = rho_infinity(n, k).value
    if n == 2:
        zero = Fraction(0)
        return CertifiedInterval(n=n, k=k, cutoff=cutoff, lo=zero, hi=zero,
                                 finite_lo=zero, finite_hi=zero,
                                 real_factor=real, tail=None)
    tail = tail_hypothesis(n, k)
    bad = pathological_primes(k)
    if cutoff <= max(bad + [tail.p_min, 2]):
        raise PreconditionViolated(
            f"cutoff {cutoff} does not clear the pathological primes")
    penalty = tail.constant * Fraction(
        1, (cutoff - 1)**(tail.exponent - 1) * (tail.exponent - 1))
    if penalty >= 1:
        raise PreconditionViolated(
            f"cutoff {cutoff} is too small for the tail constant")
    num, den = 1, 1
    for p in primes_below(cutoff):
        if p in bad:
            factor = rho_p_exact(n, k, p, use_cache=use_cache).value
        elif k in (2, 3):
            factor = rho_p_closed_form(n, k, p).value
        else:
            factor = generic_sum(n, k, p).value
        num *= factor.numerator
        den *= factor.denominator
    finite_hi = Fraction(num, den)
    finite_lo = finite_hi * (1 - penalty)
    return CertifiedInterval(
        n=n, k=k, cutoff=cutoff, lo=real * finite_lo, hi=real * finite_hi,
        finite_lo=finite_lo, finite_hi=finite_hi, real_factor=real,
        tail=tail)


def _decimal(value: Fraction, digits: int, round_up: bool) -> str:
    scale = 10**digits
    scaled = value.numerator * scale
    if round_up:
        q = -((-scaled) // value.denominator)
    else:
        q = scaled // value.denominator
    sign = "-" if q < 0 else ""
    q = abs(q)
    return f"{sign}{q // scale}.{q % scale:0{digits}d}"


def decimalize(interval: CertifiedInterval, digits: int) -> tuple[str, str]:
    """Outward-rounded decimal rendering of the enclosure."""
    if digits < 1:
        raise PreconditionViolated(f"need at least one digit, got {digits}")
    return (_decimal(interval.lo, digits, round_up=False),
            _decimal(interval.hi, digits, round_up=True))
