import math
import warnings

import numpy as np
import pytest

from sqdiscord.qmat import tensor, validate_density
from sqdiscord.sud_basis import (
    BlockCorrelationSpec,
    DiagCorrelationSpec,
    build_block_state,
    build_diag_state,
)
from sqdiscord.sqd import (
    classical_correlation_search,
    classical_correlation_special,
    classical_state_correlations,
    correlation_difference_D,
    distribution_experiment,
    measured_mutual_information,
    mutual_information,
    pure_state_correlations,
    sqd_upper_bound_block,
    sqd_upper_bound_diag,
    theta_bar_max,
    theta_diag,
    _tau_vector,
    _xlog2x,
)
from sqdiscord.weakmeas import (
    Orientation,
    ZVector,
    build_special_family,
    entropic_H,
    orientation_from_z,
    z_from_orientation,
)


def random_admissible_c(rng, scale=0.999):
    c = rng.uniform(-1, 1, size=3)
    return c * rng.uniform(0, scale) / np.sum(np.abs(c))


def closed_form_mi(c, d):
    return float(np.sum(_xlog2x(_tau_vector(*c))) / d**2)


class TestMutualInformation:
    def test_product_state(self):
        rho = validate_density(tensor(np.eye(2) / 2, np.diag([0.7, 0.3])))
        assert abs(mutual_information(rho)) < 1e-12

    def test_pure_state_twice_schmidt_entropy(self):
        a = np.array([0.8, 0.6])
        psi = np.zeros(4, dtype=complex)
        psi[0], psi[3] = a
        rho = validate_density(np.outer(psi, psi.conj()))
        e = -sum(w * math.log2(w) for w in a**2)
        assert abs(mutual_information(rho) - 2 * e) < 1e-12

    def test_diag_family_closed_form(self):
        rng = np.random.default_rng(25)
        for d in (2, 3, 4):
            for _ in range(20):
                c = random_admissible_c(rng)
                rho = build_diag_state(DiagCorrelationSpec.diag3(d, *c))
                assert abs(mutual_information(rho) - closed_form_mi(c, d)) < 1e-10


class TestMeasuredMutualInformation:
    def test_zero_strength(self):
        rho = build_diag_state(DiagCorrelationSpec.diag3(3, 0.2, 0.35, 0.1))
        fam = build_special_family(Orientation(1.0, 0.0, 0.0, 0.0), 0.0, 3)
        assert abs(measured_mutual_information(rho, fam)) < 1e-12

    def test_entropy_prefactor(self):
        # eigen route gives (2/d^2) H(theta), not (2/d) H(theta)
        rng = np.random.default_rng(27)
        for d in (2, 3, 5):
            c = random_admissible_c(rng)
            rho = build_diag_state(DiagCorrelationSpec.diag3(d, *c))
            o = Orientation.normalized(*rng.normal(size=4))
            theta = theta_diag(c, z_from_orientation(o), 0.8)
            mi = measured_mutual_information(rho, build_special_family(o, 0.8, d))
            h = entropic_H(theta)
            assert abs(mi - (2 / d**2) * h) < 1e-10
            if d > 2 and h > 1e-6:
                assert abs(mi - (2 / d) * h) > (1 - 2 / d) * h / 2

    def test_bell_state(self):
        rho = build_diag_state(DiagCorrelationSpec.diag3(2, -1.0, -1.0, -1.0))
        for x in (0.3, 1.0, 4.0):
            fam = build_special_family(Orientation(1.0, 0.0, 0.0, 0.0), x, 2)
            assert abs(
                measured_mutual_information(rho, fam) - entropic_H(math.tanh(x)) / 2
            ) < 1e-12


class TestTheta:
    def test_axis_aligned(self):
        assert abs(theta_diag((0.1, 0.2, 0.7), ZVector(0, 0, 1), 2.0) - 0.7 * math.tanh(2.0)) < 1e-15

    def test_zero_strength(self):
        assert theta_diag((0.5, 0.5, 0.5), ZVector(1, 0, 0), 0.0) == 0.0

    def test_max_over_axes(self):
        rng = np.random.default_rng(29)
        c = (0.2, -0.6, 0.1)
        best = max(
            theta_diag(c, ZVector(*(v / np.linalg.norm(v))), 1.0)
            for v in rng.normal(size=(500, 3))
        )
        assert best <= 0.6 * math.tanh(1.0) + 1e-12
        assert theta_diag(c, ZVector(0, 1, 0), 1.0) == pytest.approx(0.6 * math.tanh(1.0))


class TestThetaBarMax:
    def test_diagonal(self):
        val, z = theta_bar_max(np.diag([0.2, -0.6, 0.1]), 1.0)
        assert abs(val - 0.6 * math.tanh(1.0)) < 1e-12
        assert abs(abs(z.z2) - 1.0) < 1e-12

    def test_identity(self):
        val, _ = theta_bar_max(np.eye(3), 0.7)
        assert abs(val - math.tanh(0.7)) < 1e-12

    def test_dominates_row_norms(self):
        rng = np.random.default_rng(33)
        for _ in range(50):
            t = rng.normal(size=(3, 3))
            val, z = theta_bar_max(t, 1.2)
            t_bar = max(np.linalg.norm(t, axis=1)) * math.tanh(1.2)
            assert val >= t_bar - 1e-12
            # argmax attains the value
            za = z.as_array()
            attained = np.linalg.norm(za @ t) * math.tanh(1.2)
            assert abs(attained - val) < 1e-12


class TestClassicalCorrelationSpecial:
    def test_zero_strength(self):
        spec = DiagCorrelationSpec.diag3(2, -0.5, -0.5, -0.5)
        val, _ = classical_correlation_special(spec, 0.0)
        assert abs(val) < 1e-12

    def test_werner_closed_form(self):
        c = 0.5
        spec = DiagCorrelationSpec.diag3(2, -c, -c, -c)
        for x in (0.5, 1.0, 3.0):
            val, _ = classical_correlation_special(spec, x)
            assert abs(val - entropic_H(c * math.tanh(x)) / 2) < 1e-12

    def test_block_diag_matches_diag(self):
        t = np.diag([0.2, 0.35, 0.1])
        v1, z1 = classical_correlation_special(BlockCorrelationSpec(d=3, T=t), 0.8)
        v2, z2 = classical_correlation_special(DiagCorrelationSpec.diag3(3, 0.2, 0.35, 0.1), 0.8)
        assert abs(v1 - v2) < 1e-12
        assert np.allclose(np.abs(z1.as_array()), np.abs(z2.as_array()))

    def test_cross_validation_block(self):
        rng = np.random.default_rng(35)
        t = rng.uniform(-0.2, 0.2, size=(3, 3))
        # check=True raises if the closed form disagrees with the eigen route
        classical_correlation_special(BlockCorrelationSpec(d=3, T=t), 1.1, check=True)

    def test_tie_break_lowest_index(self):
        spec = DiagCorrelationSpec.diag3(2, 0.4, -0.4, 0.1)
        _, z = classical_correlation_special(spec, 1.0, check=False)
        assert z.as_array()[0] == 1.0


class TestClassicalCorrelationSearch:
    def test_product_state(self):
        rho = validate_density(tensor(np.diag([0.6, 0.4]), np.diag([0.7, 0.3])))
        val, _ = classical_correlation_search(rho, 1.0, restarts=1, lattice_points=50)
        assert abs(val) < 1e-9

    def test_matches_analytic_d2(self):
        rng = np.random.default_rng(37)
        for _ in range(5):
            c = random_admissible_c(rng)
            spec = DiagCorrelationSpec.diag3(2, *c)
            rho = build_diag_state(spec)
            analytic, _ = classical_correlation_special(spec, 1.0, check=False)
            found, _ = classical_correlation_search(rho, 1.0, restarts=2, seed=1)
            assert found >= analytic - 1e-9
            assert abs(found - analytic) < 1e-6

    def test_never_exceeds_mutual_information(self):
        # empirical check, reported rather than asserted as an invariant
        rng = np.random.default_rng(39)
        violations = []
        for _ in range(3):
            c = random_admissible_c(rng)
            rho = build_diag_state(DiagCorrelationSpec.diag3(2, *c))
            mi = mutual_information(rho)
            found, _ = classical_correlation_search(rho, 0.8, restarts=1, lattice_points=300)
            if found > mi + 1e-9:
                violations.append((tuple(c), found, mi))
        if violations:
            warnings.warn(f"measured correlation exceeded mutual information: {violations}")

    def test_deterministic(self):
        rho = build_diag_state(DiagCorrelationSpec.diag3(2, 0.2, 0.35, 0.1))
        a, _ = classical_correlation_search(rho, 1.0, restarts=2, seed=5)
        b, _ = classical_correlation_search(rho, 1.0, restarts=2, seed=5)
        assert a == b


class TestDiagBound:
    def test_zero_strength_equals_mutual_information(self):
        spec = DiagCorrelationSpec.diag3(3, 0.2, 0.35, 0.1)
        rep = sqd_upper_bound_diag(spec, 0.0)
        assert abs(rep.sqd_upper_bound - rep.mutual_info) < 1e-12

    def test_werner_closed_form(self):
        c, x = 0.5, 1.0
        rep = sqd_upper_bound_diag(DiagCorrelationSpec.diag3(2, -c, -c, -c), x)
        expected = (
            3 * (1 - c) * math.log2(1 - c)
            + (1 + 3 * c) * math.log2(1 + 3 * c)
            - 2 * entropic_H(c * math.tanh(x))
        ) / 4
        assert abs(rep.sqd_upper_bound - expected) < 1e-12

    def test_report_invariants(self):
        rep = sqd_upper_bound_diag(DiagCorrelationSpec.diag3(3, 0.2, 0.35, 0.1), 1.0)
        assert 0 <= rep.classical_corr_special <= rep.mutual_info + 1e-9
        assert abs(rep.sqd_upper_bound - (rep.mutual_info - rep.classical_corr_special)) < 1e-12

    def test_monotone_in_strength(self):
        spec = DiagCorrelationSpec.diag3(2, -0.4, -0.4, -0.4)
        bounds = [sqd_upper_bound_diag(spec, x).sqd_upper_bound for x in np.linspace(0, 5, 21)]
        assert np.all(np.diff(bounds) <= 1e-12)

    def test_even_in_x(self):
        spec = DiagCorrelationSpec.diag3(2, 0.2, 0.35, 0.1)
        a = sqd_upper_bound_diag(spec, 1.3).sqd_upper_bound
        b = sqd_upper_bound_diag(spec, -1.3).sqd_upper_bound
        assert abs(a - b) < 1e-14

    def test_d2_scaling(self):
        vals = [
            d**2 * sqd_upper_bound_diag(DiagCorrelationSpec.diag3(d, 0.2, 0.35, 0.1), 1.0).sqd_upper_bound
            for d in (2, 3, 5, 8)
        ]
        assert max(vals) - min(vals) < 1e-10

    def test_bound_consistency_with_eigen_route(self):
        rng = np.random.default_rng(41)
        for d in (2, 3):
            c = random_admissible_c(rng)
            spec = DiagCorrelationSpec.diag3(d, *c)
            rep = sqd_upper_bound_diag(spec, 1.1)
            rho = build_diag_state(spec)
            o = orientation_from_z(rep.argmax_z.as_array())
            numeric = measured_mutual_information(rho, build_special_family(o, 1.1, d))
            assert abs(rep.mutual_info - numeric - rep.sqd_upper_bound) < 1e-9


class TestBlockBound:
    def test_diag_T_consistency(self):
        t = np.diag([0.2, 0.35, 0.1])
        a = sqd_upper_bound_block(BlockCorrelationSpec(d=3, T=t), 0.9)
        b = sqd_upper_bound_diag(DiagCorrelationSpec.diag3(3, 0.2, 0.35, 0.1), 0.9)
        assert abs(a.sqd_upper_bound - b.sqd_upper_bound) < 1e-12

    def test_zero_strength(self):
        rep = sqd_upper_bound_block(BlockCorrelationSpec(d=2, T=np.diag([0.3, 0.1, 0.2])), 0.0)
        assert abs(rep.sqd_upper_bound - rep.mutual_info) < 1e-12

    def test_sigma_max_tightens_row_norm_bound(self):
        rng = np.random.default_rng(43)
        built = 0
        while built < 10:
            t = rng.uniform(-0.2, 0.2, size=(3, 3))
            spec = BlockCorrelationSpec(d=3, T=t)
            try:
                rep = sqd_upper_bound_block(spec, 1.0)
            except Exception:
                continue
            built += 1
            t_bar = max(np.linalg.norm(t, axis=1)) * math.tanh(1.0)
            rowmax_bound = rep.mutual_info - (2 / 9) * entropic_H(t_bar)
            assert rep.sqd_upper_bound <= rowmax_bound + 1e-12


class TestDifferenceStatistic:
    def test_zero_strength_nonpositive(self):
        assert correlation_difference_D((0.2, 0.3, 0.1), 0.0, 3) <= 0

    def test_zero_coefficients(self):
        assert correlation_difference_D((0.0, 0.0, 0.0), 1.0, 2) == 0.0

    def test_frozen_oracle_value(self):
        # eigen oracle: 2 * measured MI at the argmax axis minus mutual info
        assert correlation_difference_D((0.3, 0.3, 0.3), 0.5, 3) == pytest.approx(
            -0.11474797663668168, abs=1e-12
        )

    def test_nondecreasing_in_strength(self):
        vals = [correlation_difference_D((0.3, 0.2, 0.1), x, 3) for x in np.linspace(0, 4, 17)]
        assert np.all(np.diff(vals) >= -1e-14)

    def test_inadmissible(self):
        with pytest.raises(ValueError):
            correlation_difference_D((0.9, 0.9, 0.9), 1.0, 2)


class TestDistributionExperiment:
    def test_small_grid_runs(self):
        res = distribution_experiment(3, 0.5, 0.5)
        assert res.samples > 0
        assert 0.0 <= res.fraction_nonneg <= 1.0
        assert 0.0 <= res.fraction_nonneg_printed <= 1.0

    def test_deterministic(self):
        a = distribution_experiment(3, 0.5, 0.1)
        b = distribution_experiment(3, 0.5, 0.1)
        assert a == b

    def test_monotone_in_strength(self):
        fr = [distribution_experiment(3, x, 0.05).fraction_nonneg for x in (0.25, 0.5, 1.0, 30.0)]
        assert all(a <= b for a, b in zip(fr, fr[1:]))

    def test_random_sampler_seeded(self):
        a = distribution_experiment(3, 0.5, 0.1, sampler="random", seed=2, n_random=5000)
        b = distribution_experiment(3, 0.5, 0.1, sampler="random", seed=2, n_random=5000)
        assert a == b

    def test_bad_args(self):
        with pytest.raises(ValueError):
            distribution_experiment(3, 0.5, 0.0)
        with pytest.raises(ValueError):
            distribution_experiment(3, 0.5, 0.1, sampler="random")


class TestExtremalStates:
    def test_bell(self):
        out = pure_state_correlations([1 / math.sqrt(2), 1 / math.sqrt(2)])
        assert out.mutual_info == pytest.approx(2.0)
        assert out.classical_corr == pytest.approx(1.0)
        assert out.discord == pytest.approx(1.0)

    def test_product(self):
        out = pure_state_correlations([1.0, 0.0])
        assert (out.mutual_info, out.classical_corr, out.discord) == (0.0, 0.0, 0.0)

    def test_uniform_schmidt(self):
        d = 3
        out = pure_state_correlations([1 / math.sqrt(d)] * d)
        assert out.mutual_info == pytest.approx(2 * math.log2(d))

    def test_finite_x_reported_alongside(self):
        out = pure_state_correlations([1 / math.sqrt(2), 1 / math.sqrt(2)], x=1.0,
                                      restarts=1)
        assert out.numeric_classical_corr is not None
        assert out.numeric_discord == pytest.approx(
            out.mutual_info - out.numeric_classical_corr
        )

    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            pure_state_correlations([1.0, 1.0])

    def test_classical_uniform(self):
        p = np.full((3, 3), 1 / 9)
        out = classical_state_correlations(p)
        assert abs(out.mutual_info) < 1e-12
        assert out.discord == 0.0

    def test_classical_perfectly_correlated(self):
        d = 3
        out = classical_state_correlations(np.eye(d) / d)
        assert out.mutual_info == pytest.approx(math.log2(d))

    def test_classical_product_distribution(self):
        r = np.array([0.2, 0.8])
        s = np.array([0.6, 0.4])
        out = classical_state_correlations(np.outer(r, s))
        assert abs(out.mutual_info) < 1e-12

    def test_classical_rejects_invalid(self):
        with pytest.raises(ValueError):
            classical_state_correlations(np.full((2, 2), 0.5))
