import math

import numpy as np
import pytest

from src.almost_periodic import extract_vertical_limit, translation_defect
from src.errors import DegenerateFrequencies, EmptyFamily, MalformedDocument, NumericPrecondition
from src.families import (
    DriftingFrequencyFamily,
    FamilySpec,
    SharedFrequencyFamily,
    VerticalTranslateFamily,
    build_family,
)
from src.montel import (
    counterexample_gap,
    distance_matrix,
    exponential_separation,
    extract_uniform_subsequence,
    joint_ap_dichotomy,
    riesz_truncation_plan,
    series_truncation_plan,
)
from src.polynomial import GDPolynomial, analytic_bound


def test_build_family_is_seeded():
    spec = FamilySpec("shared-frequency", {"size": 6}, seed=3)
    first, second = build_family(spec), build_family(spec)
    assert first == second
    assert len(first) == 6
    assert all(member.coefficient_sum <= 1.0 + 1e-12 for member in first)
    assert build_family(FamilySpec("shared-frequency", {"size": 6}, seed=4)) != first


def test_build_family_generators():
    translates = build_family(FamilySpec("vertical-translates", {"size": 5}))
    assert len(translates) == 5
    drifting = build_family(FamilySpec("drifting-frequency", {"size": 4}))
    assert [member.lambdas.tolist() for member in drifting] == [[2.0], [1.5], [1 + 1 / 3], [1.25]]


def test_unknown_generator_is_malformed():
    with pytest.raises(MalformedDocument):
        build_family(FamilySpec("spiral", {}))


def test_bad_generator_parameters_are_malformed():
    with pytest.raises(MalformedDocument):
        build_family(FamilySpec("drifting-frequency", {"colour": "red"}))


def test_distance_matrix_is_symmetric_with_zero_diagonal():
    family = SharedFrequencyFamily(size=5, seed=1).generate()
    distances = distance_matrix(family, 0.5)
    assert distances.shape == (5, 5)
    assert np.allclose(distances, distances.T)
    assert np.all(np.diag(distances) == 0)


def test_shared_family_clusters_and_is_jointly_ap():
    family = SharedFrequencyFamily(size=20, seed=0).generate()
    report = joint_ap_dichotomy(family, 0.3, 0.5, 100.0)
    assert report.jointly_ap
    assert report.translation_count > 0
    assert report.max_gap < 100.0 / 4
    assert report.extraction.length >= 10
    assert report.clustering_succeeds
    assert report.consistent
    assert report.extraction.diameter <= 0.3


def test_drifting_family_neither_clusters_nor_is_jointly_ap():
    generator = DriftingFrequencyFamily(size=10)
    family = generator.generate()
    report = joint_ap_dichotomy(family, 0.3, 0.5, 100.0)
    assert not report.jointly_ap
    assert report.extraction.length == 1
    assert not report.clustering_succeeds
    assert report.consistent
    assert report.max_pair_lower >= 0.3

    lambdas = generator.frequencies()
    for i in range(len(lambdas)):
        for j in range(i + 1, len(lambdas)):
            gap = counterexample_gap(lambdas[i], lambdas[j], 0.5)
            assert gap.measured >= 2 * math.exp(-1) * (1 - 1e-3)


def test_vertical_translate_extraction_is_pairwise_close():
    generator = VerticalTranslateFamily(size=30, seed=2)
    taus = generator.taus()
    extraction = extract_uniform_subsequence(generator.generate(), 1.0, 0.2)
    for i in extraction.indices:
        for j in extraction.indices:
            assert translation_defect(generator.base, taus[i] - taus[j], 1.0) <= 0.2 + 1e-9


def _clusters():
    near_one = [GDPolynomial(((1, 1 + 0.01 * k),)) for k in range(5)]
    near_three = [GDPolynomial(((2, 3 + 0.01 * k),)) for k in range(3)]
    return near_one + near_three


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_extraction_is_stable_under_permutation(seed):
    family = _clusters()
    order = np.random.default_rng(seed).permutation(len(family))
    shuffled = [family[k] for k in order]
    extraction = extract_uniform_subsequence(shuffled, 0.0, 0.1)
    assert extraction.length == 5
    assert {shuffled[k] for k in extraction.indices} == set(family[:5])


def test_extraction_errors():
    with pytest.raises(EmptyFamily):
        extract_uniform_subsequence([], 0.0, 0.1)
    with pytest.raises(NumericPrecondition):
        extract_uniform_subsequence(_clusters(), 0.0, 0.0)


def test_counterexample_gap_closed_form():
    gap = counterexample_gap(2.0, 1.0, 0.5)
    assert gap.t_star == pytest.approx(math.pi)
    assert gap.measured == pytest.approx(0.97441, abs=1e-5)
    assert gap.measured_squared == pytest.approx(0.94948, abs=1e-5)
    assert gap.measured_squared == pytest.approx(gap.closed_form_squared)
    assert gap.bound == pytest.approx(2 * math.exp(-1))
    assert gap.measured >= gap.bound


def test_counterexample_gap_errors():
    with pytest.raises(DegenerateFrequencies):
        counterexample_gap(1.0, 1.0, 0.5)
    with pytest.raises(NumericPrecondition):
        counterexample_gap(2.0, 1.0, 0.0)
    with pytest.raises(NumericPrecondition):
        counterexample_gap(-1.0, 1.0, 0.5)


def test_exponential_separation():
    matrix = exponential_separation([0, 0.5, 1, 2], 1e-3)
    off_diagonal = matrix[~np.eye(4, dtype=bool)]
    assert np.all(off_diagonal > 1.9)
    assert np.all(np.diag(matrix) == 0)
    with pytest.raises(DegenerateFrequencies):
        exponential_separation([1, 2, 1], 0.5)


def test_series_truncation_plan():
    lambdas = np.arange(1, 65, dtype=float)
    plan = series_truncation_plan(lambdas, 1.0, 0.1, 1.0)
    assert plan.exponentials == 4
    assert plan.tolerance == pytest.approx(0.0125)
    assert plan.tail <= 0.025
    assert math.isnan(plan.omega)


def test_series_truncation_plan_rejects_bad_inputs():
    with pytest.raises(NumericPrecondition):
        series_truncation_plan(np.arange(1, 65, dtype=float), 1.0, 0.0, 1.0)


def test_riesz_truncation_plan():
    plan = riesz_truncation_plan([GDPolynomial(((1, 1), (2, 1)))], 1.0, 0.3, [1, 2, 4, 8, 16])
    assert plan.omega == 8.0
    assert plan.exponentials == 2
    assert plan.tolerance == pytest.approx(0.025)
    assert plan.tail <= 0.1


def test_riesz_truncation_plan_unreachable():
    with pytest.raises(NumericPrecondition):
        riesz_truncation_plan([GDPolynomial(((1, 1), (2, 1)))], 1.0, 0.3, [1, 2])


def test_drifting_family_of_thirty_has_no_cluster():
    generator = DriftingFrequencyFamily(size=30)
    family = generator.generate()
    extraction = extract_uniform_subsequence(family, 0.5, 0.5)
    assert extraction.length == 1
    lambdas = generator.frequencies()
    for i in range(len(lambdas)):
        for j in range(i + 1, len(lambdas)):
            gap = counterexample_gap(lambdas[i], lambdas[j], 0.5)
            assert gap.measured >= 2 * math.exp(-1) * (1 - 1e-3)


def test_extraction_limit_keeps_the_family_frequencies():
    generator = SharedFrequencyFamily(size=20, seed=0)
    family = generator.generate()
    extraction = extract_uniform_subsequence(family, 0.5, 0.3)
    assert set(extraction.limit.lambdas.tolist()) <= set(generator.frequencies)
    for i in extraction.indices:
        assert analytic_bound(extraction.limit - family[i], 0.5) <= 0.3


def test_vertical_limit_keeps_the_base_frequencies():
    generator = VerticalTranslateFamily(size=30, seed=2)
    result = extract_vertical_limit(generator.base, generator.taus(), 1.0, 0.1, 0.2, t_window=5)
    assert result.limit.lambdas.tolist() == generator.base.lambdas.tolist()
    assert analytic_bound(result.limit, 1.0) == pytest.approx(analytic_bound(generator.base, 1.0))
