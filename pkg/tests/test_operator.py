import numpy as np
import pytest

from heunc import (
    DegreeTooLow,
    EigenShift,
    HeunParams,
    TruncatedSeries,
    apply,
    apply_shifted_chain,
    build_operator,
    eigen_shift_residual,
    shift_params,
    taylor_coeffs,
    to_mu_nu,
)
from heunc.operator import magnitude, shifted_operator
from heunc.series import derivative_n, taylor_magnitudes
from heunc.verify import chain_eigenvalue, verify_chain, verify_high_order_ode


class TestBuild:
    def test_trivial(self):
        op = build_operator(HeunParams(0, 0, 0, 0, 0))
        assert list(op.p2) == [0, -1, 1]
        assert list(op.p1) == [-1, 2, 0]
        assert list(op.p0) == [0, 0]

    def test_substitution(self):
        op = build_operator(HeunParams(1, 0, 0, -2, 0.5))
        assert list(op.p1) == [-1, 1, 1]
        assert list(op.p0) == [0, -1]

    def test_values_at_endpoints(self, param_sets):
        for p in param_sets:
            op = build_operator(p)
            mn = to_mu_nu(p)
            assert op.p1[0] == -(p.beta + 1)
            assert op.p0[0] == -mn.mu
            assert sum(op.p0) == pytest.approx(mn.nu, abs=1e-14)
            assert op.source_params == p


class TestApply:
    def test_solves_ode(self, param_sets):
        for p in param_sets:
            h = taylor_coeffs(p, 40)
            r = apply(build_operator(p), h)
            assert r.valid_degree == 38
            assert np.max(np.abs(r.trusted)) < 1e-12 * np.max(np.abs(h.trusted))

    def test_constant_trivial(self):
        s = TruncatedSeries.polynomial([1], valid_degree=4)
        assert np.all(apply(build_operator(HeunParams(0, 0, 0, 0, 0)), s).trusted == 0)

    def test_constant_gives_p0(self, param_sets):
        s = TruncatedSeries.polynomial([1], valid_degree=4)
        for p in param_sets[:5]:
            out = apply(build_operator(p), s).trusted
            assert np.array_equal(out[:2], build_operator(p).p0) and out[2] == 0

    def test_degree_guard(self):
        with pytest.raises(DegreeTooLow):
            apply(build_operator(HeunParams(0, 0, 0, 0, 0)), TruncatedSeries.polynomial([1, 2]))


class TestChain:
    def test_single_link(self, param_sets):
        p = param_sets[0]
        s = taylor_coeffs(p, 12)
        one = apply_shifted_chain(p, 1, 1, s)
        assert np.array_equal(one.trusted, apply(build_operator(shift_params(p, 1)), s).trusted)

    def test_order_highest_first(self, param_sets):
        p = param_sets[1]
        s = taylor_coeffs(p, 12)
        expected = apply(shifted_operator(p, 1), apply(shifted_operator(p, 2), s))
        assert np.array_equal(apply_shifted_chain(p, 1, 2, s).trusted, expected.trusted)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_pochhammer_eigenvalue(self, param_sets, n):
        for p in param_sets[:5]:
            assert verify_chain(p, n).passed

    def test_eigenvalue_ratio_form(self):
        from heunc import pochhammer
        from math import factorial

        p = HeunParams(1.5 - 0.5j, 0.2, 0.7j, -0.4, 1)
        for n in range(1, 5):
            c = p.delta / p.alpha + (p.beta + p.gamma) / 2 + 1
            ratio_form = (-p.alpha) ** n * factorial(n) * pochhammer(c, n)
            assert chain_eigenvalue(p, n) == pytest.approx(ratio_form, rel=1e-13)

    def test_outer_operator_annihilates(self, param_sets):
        for p in param_sets[:5]:
            assert verify_high_order_ode(p, 2).passed

    def test_two_routes_agree(self, param_sets):
        # D_0 of the chain equals the chain eigenvalue times D_0 H
        for p in param_sets:
            h = taylor_coeffs(p, 25)
            hm = taylor_magnitudes(p, 25)
            via_chain = apply(build_operator(p), apply_shifted_chain(p, 1, 2, derivative_n(h, 2)))
            via_eigen = apply(build_operator(p), h).scale(chain_eigenvalue(p, 2))
            bound = derivative_n(hm, 2)
            for k in (2, 1):
                bound = apply(magnitude(shifted_operator(p, k)), bound)
            bound = apply(magnitude(build_operator(p)), bound)
            v = via_chain.valid_degree
            diff = np.abs(via_chain.trusted - via_eigen.trusted[: v + 1])
            assert np.all(diff <= 1e-10 * bound.trusted)

    def test_guards(self, param_sets):
        s = taylor_coeffs(param_sets[0], 3)
        with pytest.raises(ValueError):
            apply_shifted_chain(param_sets[0], 0, 1, s)
        with pytest.raises(DegreeTooLow):
            apply_shifted_chain(param_sets[0], 1, 2, s)


class TestEigenShift:
    def test_zero_shift_is_ode_residual(self, param_sets):
        assert eigen_shift_residual(param_sets[0], 0, 20) < 1e-13

    def test_complex_shift(self, param_sets):
        for p in param_sets[:5]:
            assert eigen_shift_residual(p, EigenShift(1 + 2j), 30) < 1e-10
            assert eigen_shift_residual(p, -(1 + 2j), 30) < 1e-10

    def test_minimum_order(self, param_sets):
        with pytest.raises(ValueError):
            eigen_shift_residual(param_sets[0], 1, 3)
