from fractions import Fraction

import pytest

from locsol.density import rho_p_closed_form
from locsol.errors import (DegenerateInput, DivergentTail,
                           PreconditionViolated)
from locsol.primes import primes_below
from locsol.product import (CertifiedInterval, TailBound, decimalize,
                            pathological_primes, rho_loc_interval,
                            tail_hypothesis)

F = Fraction


def test_stored_tail_constants():
    assert tail_hypothesis(3, 2) == TailBound(F(3, 2), 2, 2)
    assert tail_hypothesis(3, 3) == TailBound(F(8, 3), 2, 2)
    assert tail_hypothesis(4, 3) == TailBound(F(40, 3), 4, 2)
    assert tail_hypothesis(5, 3) == TailBound(F(80, 3), 6, 2)
    # saturated dimensions have no deficit at all
    assert tail_hypothesis(4, 2).constant == 0
    assert tail_hypothesis(7, 2).constant == 0
    assert tail_hypothesis(6, 3).constant == 0
    assert tail_hypothesis(9, 3).constant == 0


def test_tail_constants_audit_against_closed_forms():
    # the claimed 1 - rho_p <= A p^-s must hold at every checked prime
    for (n, k), tail in ((pair, tail_hypothesis(*pair))
                         for pair in ((3, 2), (3, 3), (4, 3), (5, 3))):
        for p in primes_below(1000):
            if p < tail.p_min:
                continue
            deficit = 1 - rho_p_closed_form(n, k, p).value
            assert deficit <= tail.constant * F(1, p**tail.exponent), \
                (n, k, p)


def test_generic_tail_for_quartics():
    tail = tail_hypothesis(3, 4)
    assert tail.exponent == 2
    assert tail.p_min == 7
    assert 1 < tail.constant < 40
    tail = tail_hypothesis(4, 4)
    assert tail.exponent == 4
    assert tail.p_min == 7
    assert tail.constant > 0


def test_divergent_plane_case():
    with pytest.raises(DivergentTail):
        tail_hypothesis(2, 2)
    with pytest.raises(DivergentTail):
        tail_hypothesis(2, 3)
    with pytest.raises(DegenerateInput):
        tail_hypothesis(1, 2)


def test_pathological_primes():
    assert pathological_primes(2) == [2]
    assert pathological_primes(3) == [3]
    assert pathological_primes(4) == [2, 3, 5]
    assert pathological_primes(6) == [2, 3, 5, 7, 11, 13, 17, 19]


def test_interval_nesting_and_positivity():
    ivs = [rho_loc_interval(3, 2, cutoff=c) for c in (300, 1000, 2000)]
    for iv in ivs:
        assert 0 < iv.lo <= iv.hi
    for loose, tight in zip(ivs, ivs[1:]):
        assert loose.lo <= tight.lo
        assert tight.hi <= loose.hi
        assert tight.width < loose.width


def test_exact_points():
    iv = rho_loc_interval(4, 2, cutoff=30)
    assert iv.lo == iv.hi == F(15, 16)
    assert iv.finite_lo == iv.finite_hi == 1
    assert rho_loc_interval(5, 2, cutoff=30).lo == F(31, 32)
    iv = rho_loc_interval(6, 3, cutoff=30)
    assert iv.lo == iv.hi == 1
    iv = rho_loc_interval(2, 2)
    assert iv.lo == iv.hi == 0
    assert iv.real_factor == F(3, 4)
    assert rho_loc_interval(2, 3).hi == 0


def test_real_factor_splits_off_the_finite_product():
    iv = rho_loc_interval(3, 2, cutoff=2000)
    assert iv.hi == F(7, 8) * iv.finite_hi
    assert iv.lo == F(7, 8) * iv.finite_lo
    assert F(82, 100) < iv.finite_lo <= iv.finite_hi < F(83, 100)
    assert F(72, 100) < iv.lo <= iv.hi < F(73, 100)


def test_decimalize_rounds_outward():
    point = rho_loc_interval(4, 2, cutoff=100)
    assert decimalize(point, 4) == ("0.9375", "0.9375")
    stub = CertifiedInterval(n=3, k=2, cutoff=10, lo=F(7, 12), hi=F(7, 12),
                             finite_lo=F(7, 12), finite_hi=F(7, 12),
                             real_factor=F(1), tail=None)
    assert decimalize(stub, 4) == ("0.5833", "0.5834")
    with pytest.raises(PreconditionViolated):
        decimalize(stub, 0)


def test_record_shape():
    rec = rho_loc_interval(4, 2, cutoff=100).to_record(digits=6)
    assert rec["decimal"] == {"lo": "0.937500", "hi": "0.937500"}
    assert rec["lo"] == {"num": 15, "den": 16}
    assert rec["real_factor"] == {"num": 15, "den": 16}
    assert rec["finite"]["hi"] == {"num": 1, "den": 1}
    assert rec["P"] == 100
    assert "local-global" in rec["note"]


def test_cutoff_guards():
    with pytest.raises(PreconditionViolated):
        rho_loc_interval(3, 2, cutoff=2)
    with pytest.raises(PreconditionViolated):
        rho_loc_interval(3, 3, cutoff=3)
