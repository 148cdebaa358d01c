import io
from itertools import product

import pytest

from locsol.errors import (DegenerateInput, PreconditionViolated,
                           ResourceBound)
from locsol.product import rho_loc_interval
from locsol.survey import (CSV_COLUMNS, convergence_sweep,
                           is_everywhere_soluble, survey_box, write_csv)


def test_tiny_quadratic_box_frozen_count():
    report = survey_box(3, 2, 2)
    assert (report.soluble, report.total) == (79, 81)


def test_tiny_box_against_sign_recount():
    # independent recount: a vector with a zero entry or two opposite
    # signs has the exact zero e_i +/- e_j; all-same-sign quadratics
    # fail over the reals; that covers the whole box at height 2
    expected = 0
    for entries in product((-1, 0, 1), repeat=4):
        if 0 in entries or len(set(entries)) > 1:
            expected += 1
    report = survey_box(3, 2, 2)
    assert report.soluble == expected


def test_cubic_boxes_are_fully_soluble():
    # odd degree kills the real obstruction; height 2 leaves units only
    report = survey_box(3, 3, 2)
    assert report.soluble == report.total == 81


def test_height_one_is_the_zero_vector():
    report = survey_box(2, 2, 1)
    assert (report.soluble, report.total) == (1, 1)


def test_sampling_is_deterministic_and_chunk_stable():
    a = survey_box(3, 2, 50, mode="sample", sample_count=12_345, seed=7)
    b = survey_box(3, 2, 50, mode="sample", sample_count=12_345, seed=7)
    assert (a.soluble, a.total) == (b.soluble, b.total)
    assert a.proportion == b.proportion


def test_parallel_jobs_do_not_change_counts():
    kw = dict(mode="sample", sample_count=25_000, seed=11)
    serial = survey_box(3, 2, 30, jobs=1, **kw)
    parallel = survey_box(3, 2, 30, jobs=2, **kw)
    assert serial.soluble == parallel.soluble


def test_sample_proportion_lands_near_the_certified_interval():
    iv = rho_loc_interval(3, 2, cutoff=500)
    report = survey_box(3, 2, 100, mode="sample", sample_count=20_000,
                        seed=20260815, reference=iv)
    gap = abs(report.proportion - iv.midpoint)
    assert gap < 0.03
    assert report.ref_lo == iv.lo and report.ref_hi == iv.hi


def test_input_guards():
    with pytest.raises(DegenerateInput):
        survey_box(0, 2, 2)
    with pytest.raises(DegenerateInput):
        survey_box(2, 2, 0)
    with pytest.raises(PreconditionViolated):
        survey_box(2, 2, 2, mode="approximate")
    with pytest.raises(PreconditionViolated):
        survey_box(2, 2, 2, mode="sample", sample_count=100)
    with pytest.raises(PreconditionViolated):
        survey_box(2, 2, 2, mode="sample", seed=1)
    with pytest.raises(ResourceBound):
        survey_box(3, 2, 40)


def test_convergence_sweep_and_csv_round_trip():
    reports = convergence_sweep(2, 2, (2, 3))
    assert [r.total for r in reports] == [27, 125]
    assert [r.height for r in reports] == [2, 3]
    buf = io.StringIO()
    write_csv(reports, buf)
    lines = buf.getvalue().strip().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    first = lines[1].split(",")
    assert first[:4] == ["2", "2", "2", "exhaustive"]
    assert first[5] == "27"
    num, den = int(first[7]), int(first[8])
    assert reports[0].proportion.numerator == num
    assert reports[0].proportion.denominator == den


def test_zero_entry_convention():
    assert is_everywhere_soluble((1, 0, 1), 2)
    assert is_everywhere_soluble((0, 0, 0), 2)
    assert not is_everywhere_soluble((1, 1, 1, 1), 2)
    assert is_everywhere_soluble((1, 1, -3, 1), 2)
