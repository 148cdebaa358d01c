from fractions import Fraction

import pytest

from locsol.density import (all_cells, cell_measure, generic_sum, kappa,
                            power_ratio, rho_infinity, rho_p_closed_form,
                            rho_p_exact)
from locsol.errors import (DegenerateInput, PreconditionViolated,
                           ResourceBound, UnsupportedPair)

F = Fraction

# every value below was recomputed away from the library before freezing:
# the p | k entries by exhaustive cell enumeration, the rest by hand from
# q = (p-1) p^(k-1) / (p^k - 1)
FROZEN = {
    (2, 2, 2): F(7, 12),
    (3, 2, 2): F(1231, 1296),
    (2, 2, 3): F(23, 32),
    (2, 2, 5): F(19, 24),
    (3, 2, 3): F(485, 512),
    (2, 3, 3): F(13831, 19773),
    (3, 3, 3): F(6391, 6591),
    (2, 3, 2): F(295, 343),
    (2, 3, 5): F(29041, 29791),
    (2, 3, 7): F(43, 57),
    (3, 3, 7): F(530491, 555579),
}


def test_closed_form_frozen_values():
    for (n, k, p), want in FROZEN.items():
        got = rho_p_closed_form(n, k, p)
        assert got.value == want, (n, k, p)
        assert got.route == "closed-form"


def test_exact_enumeration_reproduces_pathological_values():
    for n, k, p in ((2, 2, 2), (3, 2, 2), (2, 3, 3), (3, 3, 3)):
        d = rho_p_exact(n, k, p)
        assert d.value == FROZEN[(n, k, p)]
        assert d.route == "enumeration"


def test_saturated_dimensions_give_one():
    assert rho_p_closed_form(4, 2, 5).value == 1
    assert rho_p_closed_form(7, 2, 3).value == 1
    assert rho_p_closed_form(6, 3, 7).value == 1
    assert rho_p_closed_form(9, 3, 13).value == 1


def test_three_routes_agree_on_small_grid():
    for n, k, p in ((2, 2, 3), (2, 2, 5), (3, 2, 3), (2, 3, 2),
                    (2, 3, 7), (3, 3, 2)):
        exact = rho_p_exact(n, k, p).value
        closed = rho_p_closed_form(n, k, p).value
        generic = generic_sum(n, k, p).value
        assert exact == closed == generic, (n, k, p)


def test_generic_sum_dominates_below_threshold():
    # p = 3 < (k-1)(k-2) for k = 4: only an upper bound there
    exact = rho_p_exact(3, 4, 3).value
    generic = generic_sum(3, 4, 3).value
    assert generic >= exact
    # past the threshold the sum is exact again
    assert generic_sum(3, 4, 7).value == rho_p_exact(3, 4, 7).value


def test_generic_sum_requires_coprime_prime():
    with pytest.raises(PreconditionViolated):
        generic_sum(2, 2, 2)
    with pytest.raises(PreconditionViolated):
        generic_sum(2, 3, 3)
    with pytest.raises(PreconditionViolated):
        generic_sum(2, 2, 9)


def test_power_ratio_and_kappa():
    assert power_ratio(2, 2) == F(2, 3)
    assert power_ratio(3, 2) == F(3, 4)
    assert power_ratio(2, 3) == F(4, 7)
    assert kappa(2, 2, 2) == F(64, 27)
    assert kappa(3, 2, 2) == F(256, 81)
    assert kappa(2, 3, 3) == F(27, 26)**3


def test_cell_measures_sum_to_one():
    for p, k, n in ((3, 2, 2), (2, 3, 2), (5, 2, 3)):
        total = sum(cell_measure(c, p, k) for c in all_cells(p, k, n))
        assert total == 1


def test_rho_infinity():
    assert rho_infinity(2, 3).value == 1
    assert rho_infinity(5, 7).value == 1
    assert rho_infinity(2, 2).value == F(3, 4)
    assert rho_infinity(3, 2).value == F(7, 8)
    assert rho_infinity(5, 4).value == F(31, 32)
    assert rho_infinity(3, 2).place == "infinity"


def test_record_shape():
    rec = rho_p_closed_form(2, 2, 5).to_record()
    assert rec == {"n": 2, "k": 2, "p": 5, "numerator": 19,
                   "denominator": 24, "route": "closed-form"}


def test_unsupported_and_invalid_inputs():
    with pytest.raises(UnsupportedPair):
        rho_p_closed_form(2, 5, 7)
    with pytest.raises(UnsupportedPair):
        rho_p_closed_form(1, 2, 7)
    with pytest.raises(PreconditionViolated):
        rho_p_closed_form(2, 2, 6)
    with pytest.raises(DegenerateInput):
        rho_p_exact(0, 2, 3)
    with pytest.raises(DegenerateInput):
        rho_p_closed_form(2, 1, 3)


def test_enumeration_cell_cap():
    with pytest.raises(ResourceBound) as info:
        rho_p_exact(4, 12, 13)
    assert info.value.required > 10**7
