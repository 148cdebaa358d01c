"""Counting everywhere-locally-soluble forms in integer coefficient boxes.

A box of height H holds every vector with entries in [-(H-1), H-1]; a
vector counts as soluble when each completion of Q has a nontrivial zero
on it.  Vectors with a zero entry (including the zero vector) vanish on
a coordinate axis and count as soluble, which inflates small boxes by at
most 3(n+1)/(2H-1) but washes out as H grows.

Sampling is chunked so the result for a given seed is bit-for-bit
reproducible no matter how many workers run: chunk c draws from
random.Random(seed * 1000003 + c).
"""

from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iter_product
from random import Random

from .errors import DegenerateInput, PreconditionViolated, ResourceBound
from .padic import CoefficientVector
from .solubility import decide_qp, decide_real, relevant_primes

SAMPLE_CHUNK = 10_000
EXHAUSTIVE_CAP = 2_000_000


@dataclass(frozen=True)
class SurveyReport:
    n: int
    k: int
    height: int
    mode: str
    seed: int | None
    total: int
    soluble: int
    ref_lo: Fraction | None = None
    ref_hi: Fraction | None = None

    @property
    def proportion(self) -> Fraction:
        return Fraction(self.soluble, self.total)


def is_everywhere_soluble(entries: tuple[int, ...], k: int) -> bool:
    """Box convention: any zero entry counts as soluble outright."""
    if any(a == 0 for a in entries):
        return True
    vec = CoefficientVector(entries, k)
    if len(entries) >= 3:
        if not decide_real(vec).is_soluble:
            return False
        return all(decide_qp(vec, p).is_soluble
                   for p in relevant_primes(vec))
    from .solubility import decide_everywhere_local
    return decide_everywhere_local(vec).overall


def _sample_chunk(task) -> int:
    n, k, height, seed, chunk_index, count = task
    rng = Random(seed * 1_000_003 + chunk_index)
    lo, hi = -(height - 1), height - 1
    soluble = 0
    for _ in range(count):
        entries = tuple(rng.randint(lo, hi) for _ in range(n + 1))
        if is_everywhere_soluble(entries, k):
            soluble += 1
    return soluble


def survey_box(n: int, k: int, height: int, *, mode: str = "exhaustive",
               sample_count: int | None = None, seed: int | None = None,
               reference=None, jobs: int = 1,
               exhaustive_cap: int = EXHAUSTIVE_CAP) -> SurveyReport:
    """Measure the soluble proportion of a coefficient box.

    mode "exhaustive" enumerates the whole box (guarded by a cap); mode
    "sample" draws sample_count vectors with the given seed.  reference,
    if provided, is a CertifiedInterval whose bounds are copied into the
    report for side-by-side output.
    """
    if n < 1 or k < 2 or height < 1:
        raise DegenerateInput(
            f"need n >= 1, k >= 2, height >= 1, got ({n}, {k}, {height})")
    ref_lo = reference.lo if reference is not None else None
    ref_hi = reference.hi if reference is not None else None
    if mode == "exhaustive":
        side = 2 * height - 1
        total = side**(n + 1)
        if total > exhaustive_cap:
            raise ResourceBound(
                f"box holds {total} vectors", required=total)
        values = range(-(height - 1), height)
        soluble = sum(1 for entries in iter_product(values, repeat=n + 1)
                      if is_everywhere_soluble(entries, k))
        return SurveyReport(n=n, k=k, height=height, mode=mode, seed=None,
                            total=total, soluble=soluble,
                            ref_lo=ref_lo, ref_hi=ref_hi)
    if mode != "sample":
        raise PreconditionViolated(f"unknown mode: {mode}")
    if sample_count is None or sample_count < 1 or seed is None:
        raise PreconditionViolated(
            "sample mode needs sample_count >= 1 and a seed")
    tasks = []
    remaining = sample_count
    chunk_index = 0
    while remaining > 0:
        size = min(SAMPLE_CHUNK, remaining)
        tasks.append((n, k, height, seed, chunk_index, size))
        remaining -= size
        chunk_index += 1
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            soluble = sum(pool.map(_sample_chunk, tasks))
    else:
        soluble = sum(_sample_chunk(t) for t in tasks)
    return SurveyReport(n=n, k=k, height=height, mode=mode, seed=seed,
                        total=sample_count, soluble=soluble,
                        ref_lo=ref_lo, ref_hi=ref_hi)


def convergence_sweep(n: int, k: int, heights, *, mode: str = "exhaustive",
                      sample_count: int | None = None,
                      seed: int | None = None, reference=None,
                      jobs: int = 1) -> list[SurveyReport]:
    return [survey_box(n, k, h, mode=mode, sample_count=sample_count,
                       seed=seed, reference=reference, jobs=jobs)
            for h in heights]


CSV_COLUMNS = ("n", "k", "H", "mode", "seed", "total", "soluble",
               "proportion_num", "proportion_den", "ref_lo", "ref_hi")


def write_csv(reports, stream) -> None:
    """Emit reports as CSV; rationals stay exact as num/den or p/q text."""
    writer = csv.writer(stream)
    writer.writerow(CSV_COLUMNS)
    for r in reports:
        prop = r.proportion
        writer.writerow([
            r.n, r.k, r.height, r.mode,
            "" if r.seed is None else r.seed,
            r.total, r.soluble, prop.numerator, prop.denominator,
            "" if r.ref_lo is None else f"{r.ref_lo.numerator}/"
                                        f"{r.ref_lo.denominator}",
            "" if r.ref_hi is None else f"{r.ref_hi.numerator}/"
                                        f"{r.ref_hi.denominator}",
        ])
