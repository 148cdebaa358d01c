"""Acceptance gate: each criterion prints one PASS/FAIL line and asserts.

Run with -s to see the lines as they complete; the same registry backs
`locsol verify-paper`, so this file and the CLI can never disagree.
"""

from time import perf_counter

from locsol.verification import CRITERIA

_BY_NAME = dict(CRITERIA)


def _run(number: int, name: str) -> None:
    start = perf_counter()
    passed, detail = _BY_NAME[name]("all")
    elapsed = perf_counter() - start
    flag = "PASS" if passed else "FAIL"
    print(f"criterion-{number} {name}: {flag} ({elapsed:.1f}s): {detail}")
    assert passed, f"{name}: {detail}"


def test_criterion_1_pathological_densities():
    _run(1, "pathological-densities")


def test_criterion_2_route_agreement():
    _run(2, "route-agreement")


def test_criterion_3_classification_catalogue():
    _run(3, "classification-catalogue")


def test_criterion_4_certified_intervals():
    _run(4, "certified-intervals")


def test_criterion_5_lifting_oracle_agreement():
    _run(5, "lifting-oracle-agreement")


def test_criterion_6_measure_normalization():
    _run(6, "measure-normalization")


def test_criterion_7_survey_midpoint():
    _run(7, "survey-midpoint")
