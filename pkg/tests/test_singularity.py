"""Unit tests for the generic conjugate-locus scanner and classifier.

The scanner is exercised through all three structure adapters. Expected radii
on the SU(2) ray are frozen from the closed forms: the first stratum's roots
sit at full turns of the horizontal oscillation (s = 2 pi k for a unit
direction), the second stratum's at twice the positive fixed points of the
tangent, 8.986818915818128 and 15.450503673875414. On the SL(2) ray with unit
direction d the same radii appear rescaled by 1 / sqrt(r(d)), where
r(d) = dw^2 - du^2 - dv^2 must be positive for conjugate points to exist at
all. Classification outcomes are checked against the transversality dichotomy
and certified independently: folds through explicit two-preimage witnesses,
tangential points through the mixed second-derivative norm.
"""

from __future__ import annotations

import math
from dataclasses import replace

import numpy as np
import pytest

from srfolds import (ConjugateRecord, FoldWitness, InvalidInput,
                     SingularityClass, WitnessNotFound, classify,
                     fd_jacobian, fold_witness, grushin_adapter,
                     regularity_isomorphism_check, scan_ray,
                     second_order_transversality, sl2_adapter, su2_adapter)
from srfolds.grushin import GrushinBase

TWO_PI = 6.283185307179586
C0_RHO_1 = 8.986818915818128
C0_RHO_2 = 15.450503673875414

SU2_RAY = (1.0, 0.0, 0.5)
SU2_RADII = (TWO_PI, C0_RHO_1, 2.0 * TWO_PI, C0_RHO_2, 3.0 * TWO_PI)
SU2_STRATA = ("C1", "C0", "C1", "C0", "C1")

# unit vector of (1, 0, 2) has r = (2^2 - 1^2) / 5 = 3/5
SL2_RAY = (1.0, 0.0, 2.0)
SL2_SQRT_R = math.sqrt(0.6)


def _unit(direction):
    d = np.asarray(direction, dtype=float)
    return d / np.linalg.norm(d)


@pytest.fixture(scope="module")
def su2():
    return su2_adapter()


@pytest.fixture(scope="module")
def sl2():
    return sl2_adapter()


@pytest.fixture(scope="module")
def grushin():
    return grushin_adapter(GrushinBase(1.0, 1.0, 0.0))


@pytest.fixture(scope="module")
def su2_records(su2):
    return scan_ray(su2, SU2_RAY, 20.0)


@pytest.fixture(scope="module")
def sl2_records(sl2):
    return scan_ray(sl2, SL2_RAY, 14.0)


@pytest.fixture(scope="module")
def grushin_fold_records(grushin):
    return scan_ray(grushin, (0.4, 1.0), 10.0)


class TestScanRay:
    def test_su2_ray_radii_and_strata(self, su2_records):
        assert len(su2_records) == len(SU2_RADII)
        for rec, s_expect, stratum in zip(su2_records, SU2_RADII, SU2_STRATA):
            assert rec.s == pytest.approx(s_expect, abs=1e-8)
            assert rec.stratum == stratum
            assert rec.order == 1

    def test_records_sorted_and_distinct(self, su2_records):
        s_values = [rec.s for rec in su2_records]
        assert s_values == sorted(s_values)
        assert min(np.diff(s_values)) > 1.0

    def test_covector_lies_on_ray(self, su2_records):
        d = _unit(SU2_RAY)
        for rec in su2_records:
            np.testing.assert_allclose(rec.covector, rec.s * d, rtol=1e-12)

    def test_direction_scale_invariance(self, su2, su2_records):
        # normalization of the scaled direction may differ in the last ulp,
        # so the refined roots agree to rounding rather than bitwise
        scaled = scan_ray(su2, tuple(7.5 * c for c in SU2_RAY), 20.0)
        assert [rec.s for rec in scaled] == pytest.approx(
            [rec.s for rec in su2_records], rel=1e-12)

    def test_sl2_ray_radii_and_strata(self, sl2_records):
        assert len(sl2_records) == 2
        first, second = sl2_records
        assert first.s == pytest.approx(TWO_PI / SL2_SQRT_R, rel=1e-9)
        assert first.stratum == "C1"
        assert second.s == pytest.approx(C0_RHO_1 / SL2_SQRT_R, rel=1e-9)
        assert second.stratum == "C0"
        assert all(rec.order == 1 for rec in sl2_records)

    def test_sl2_nonpositive_r_ray_is_empty(self, sl2):
        assert scan_ray(sl2, (1.0, -0.5, -1.0), 10.0) == []
        assert scan_ray(sl2, (1.0, 0.0, 1.0), 10.0) == []  # r = 0 exactly

    def test_sl2_vertical_ray_is_empty(self, sl2):
        assert scan_ray(sl2, (0.0, 0.0, 1.0), 10.0) == []

    def test_grushin_ray_with_zero_v_is_empty(self, grushin):
        assert scan_ray(grushin, (1.0, 0.0), 10.0) == []

    def test_grushin_vertical_ray_radii(self, grushin):
        # u0 = 0 from x0 = 1, alpha = 1: conjugate radii at multiples of pi
        records = scan_ray(grushin, (0.0, 1.0), 10.0)
        assert [rec.s for rec in records] == pytest.approx(
            [math.pi, 2.0 * math.pi, 3.0 * math.pi], abs=1e-8)
        assert all(rec.order == 1 for rec in records)

    def test_grushin_generic_ray_has_folds(self, grushin_fold_records):
        assert len(grushin_fold_records) == 2
        for rec in grushin_fold_records:
            assert rec.order == 1
            assert rec.stratum == "C0"
            assert rec.singularity_class is SingularityClass.FOLD

    def test_scan_is_deterministic(self, su2, su2_records):
        again = scan_ray(su2, SU2_RAY, 20.0)
        assert [rec.s for rec in again] == [rec.s for rec in su2_records]
        for rec, ref in zip(again, su2_records):
            assert np.array_equal(rec.covector, ref.covector)
            assert rec.singularity_class is ref.singularity_class

    def test_kernel_annihilated_by_chart_jacobian(self, su2, su2_records):
        for rec in su2_records:
            chart = lambda cov: np.asarray(su2.exp_chart(cov, rec.covector))
            jac = fd_jacobian(chart, rec.covector)
            sigma_max = np.linalg.svd(jac, compute_uv=False)[0]
            kern = rec.kernel_basis[0]
            residual = np.linalg.norm(jac @ kern) / np.linalg.norm(kern)
            assert residual <= 1e-6 * sigma_max

    def test_active_stratum_function_vanishes(self, su2, su2_records):
        for rec in su2_records:
            idx = su2.stratum_names.index(rec.stratum)
            assert abs(rec.f_values[idx]) <= 1e-8 * max(1.0, rec.s)

    def test_order_matches_kernel_basis(self, su2_records, sl2_records,
                                        grushin_fold_records):
        for rec in su2_records + sl2_records + grushin_fold_records:
            assert rec.order == len(rec.kernel_basis)

    @pytest.mark.parametrize("direction", [(0.0, 0.0, 0.0), (1.0, float("nan"), 0.0)])
    def test_bad_direction_rejected(self, su2, direction):
        with pytest.raises(InvalidInput):
            scan_ray(su2, direction, 10.0)

    def test_wrong_arity_rejected(self, su2, grushin):
        with pytest.raises(InvalidInput):
            scan_ray(su2, (1.0, 0.0), 10.0)
        with pytest.raises(InvalidInput):
            scan_ray(grushin, (1.0, 0.0, 0.5), 10.0)

    @pytest.mark.parametrize("s_max", [0.0, -3.0, float("nan")])
    def test_bad_s_max_rejected(self, su2, s_max):
        with pytest.raises(InvalidInput):
            scan_ray(su2, SU2_RAY, s_max)


class TestClassify:
    def test_su2_alternation(self, su2_records):
        classes = [rec.singularity_class for rec in su2_records]
        assert classes == [SingularityClass.TANGENTIAL, SingularityClass.FOLD,
                           SingularityClass.TANGENTIAL, SingularityClass.FOLD,
                           SingularityClass.TANGENTIAL]

    def test_sl2_classes(self, sl2_records):
        assert sl2_records[0].singularity_class is SingularityClass.TANGENTIAL
        assert sl2_records[1].singularity_class is SingularityClass.FOLD

    def test_classify_matches_scan(self, su2, su2_records):
        for rec in su2_records:
            assert classify(su2, rec) is rec.singularity_class

    def test_su2_planar_second_stratum_undetermined(self, su2):
        # the fold certificate for the second stratum needs a vertical component
        records = scan_ray(su2, (1.0, 0.0, 0.0), 20.0)
        by_stratum = {rec.stratum: rec.singularity_class for rec in records}
        assert by_stratum["C0"] is SingularityClass.UNDETERMINED
        assert by_stratum["C1"] is SingularityClass.TANGENTIAL

    def test_order_zero_is_not_singular(self, su2, su2_records):
        synthetic = replace(su2_records[0], order=0)
        assert classify(su2, synthetic) is SingularityClass.NOT_SINGULAR

    def test_higher_order_is_undetermined(self, su2, su2_records):
        rec = su2_records[1]
        synthetic = replace(rec, order=2,
                            kernel_basis=(rec.kernel_basis[0],
                                          np.array([0.0, 0.0, 1.0])))
        assert classify(su2, synthetic) is SingularityClass.UNDETERMINED

    def test_kernel_sign_flip_does_not_change_class(self, su2, su2_records):
        for rec in su2_records:
            flipped = replace(rec, kernel_basis=(-rec.kernel_basis[0],))
            assert classify(su2, flipped) is rec.singularity_class

    def test_gradient_sign_flip_does_not_change_class(self, su2, su2_records):
        flipped = replace(
            su2, conj_grad=lambda cov, st: -np.asarray(su2.conj_grad(cov, st)))
        for rec in su2_records:
            assert classify(flipped, rec) is rec.singularity_class

    def test_gradient_rescale_does_not_change_class(self, su2, su2_records):
        scaled = replace(
            su2, conj_grad=lambda cov, st: 37.0 * np.asarray(su2.conj_grad(cov, st)))
        for rec in su2_records:
            assert classify(scaled, rec) is rec.singularity_class


class TestSecondOrderTransversality:
    def test_positive_at_su2_tangential_points(self, su2, su2_records):
        for rec in su2_records:
            if rec.singularity_class is not SingularityClass.TANGENTIAL:
                continue
            value = second_order_transversality(su2, rec)
            assert value > 1e-3
            # closed-form chart geometry gives exactly 1/2 on this stratum
            assert value == pytest.approx(0.5, rel=1e-6)

    def test_positive_at_sl2_tangential_point(self, sl2, sl2_records):
        value = second_order_transversality(sl2, sl2_records[0])
        assert value > 1e-3

    def test_kernel_sign_flip_stability(self, su2, su2_records):
        rec = su2_records[0]
        value = second_order_transversality(su2, rec)
        flipped = second_order_transversality(
            su2, replace(rec, kernel_basis=(-rec.kernel_basis[0],)))
        assert flipped == pytest.approx(value, rel=1e-4)

    def test_zero_at_full_rank_point(self, su2):
        d = _unit(SU2_RAY)
        regular = ConjugateRecord(
            s=3.0, covector=3.0 * d, stratum="C1", order=1,
            kernel_basis=(np.array([0.0, 1.0, 0.0]),),
            f_values=(1.0, 1.0),
            singularity_class=SingularityClass.UNDETERMINED)
        assert second_order_transversality(su2, regular) == 0.0


class TestFoldWitness:
    DELTA = 1e-3

    def _check_witness(self, adapter, record, witness):
        assert witness.image_distance <= 1e-9
        assert witness.separation >= self.DELTA / 4.0
        cov = record.covector
        assert np.linalg.norm(witness.covector_a - cov) <= self.DELTA
        assert np.linalg.norm(witness.covector_b - cov) <= self.DELTA
        # recompute endpoint coincidence directly from the chart
        pa = np.asarray(adapter.exp_chart(witness.covector_a, cov), float)
        pb = np.asarray(adapter.exp_chart(witness.covector_b, cov), float)
        assert np.linalg.norm(pa - pb) <= 1e-9

    def test_su2_fold_witness(self, su2, su2_records):
        for rec in su2_records:
            if rec.singularity_class is not SingularityClass.FOLD:
                continue
            self._check_witness(su2, rec, fold_witness(su2, rec, self.DELTA))

    def test_sl2_fold_witness(self, sl2, sl2_records):
        rec = sl2_records[1]
        self._check_witness(sl2, rec, fold_witness(sl2, rec, self.DELTA))

    def test_grushin_fold_witness(self, grushin, grushin_fold_records):
        for rec in grushin_fold_records:
            self._check_witness(grushin, rec,
                                fold_witness(grushin, rec, self.DELTA))

    def test_rejects_non_fold_record(self, su2, su2_records):
        with pytest.raises(InvalidInput):
            fold_witness(su2, su2_records[0], self.DELTA)

    @pytest.mark.parametrize("delta", [0.0, -1e-3])
    def test_rejects_bad_delta(self, su2, su2_records, delta):
        with pytest.raises(InvalidInput):
            fold_witness(su2, su2_records[1], delta)

    def test_no_witness_at_regular_point(self, su2, su2_records):
        # a regular covector dressed up as a fold: the chart is injective
        # there, so the two-preimage search must fail rather than fabricate
        d = _unit(SU2_RAY)
        fake = replace(su2_records[1], covector=3.0 * d, s=3.0)
        with pytest.raises(WitnessNotFound):
            fold_witness(su2, fake, self.DELTA)


class TestRegularityIsomorphism:
    def test_su2_records(self, su2, su2_records):
        for rec in su2_records:
            assert regularity_isomorphism_check(su2, rec) is True

    def test_sl2_records(self, sl2, sl2_records):
        for rec in sl2_records:
            assert regularity_isomorphism_check(sl2, rec) is True

    def test_grushin_records(self, grushin, grushin_fold_records):
        for rec in grushin_fold_records:
            assert regularity_isomorphism_check(grushin, rec) is True

    def test_rejects_higher_order_record(self, su2, su2_records):
        with pytest.raises(InvalidInput):
            regularity_isomorphism_check(su2, replace(su2_records[0], order=2))

    def test_rejects_adapter_without_jacobi_hooks(self, su2, su2_records):
        stripped = replace(su2, kernel_jacobi_p0=None)
        with pytest.raises(InvalidInput):
            regularity_isomorphism_check(stripped, su2_records[0])
