import math
import warnings
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sincsum.expansion import FamilySpec
from sincsum.gseries import (
    FORBIDDEN_ABC,
    TABLE1,
    U_MINUS,
    U_PLUS,
    ExtrapolationWarning,
    GValue,
    abc_coefficients,
    addition_identity_check,
    delta_pairing,
    eta3,
    eta3_product_form,
    eta4,
    g4_from_etas,
    g_abel_extrapolate,
    g_abel_oracle,
    g_closed,
    generating_gt,
    is_hermitian_unitary,
    quartic_neg_eta,
    table1_classify,
)
from sincsum.harness import sample_in_domain

angle = st.floats(-math.pi, math.pi)
angles4 = st.tuples(angle, angle, angle, angle)
PI3 = math.pi / 3


def _signs_from_etas(ep, em):
    return (1 if ep > 0 else -1, 1 if em > 0 else -1)


class TestEta3:
    def test_examples(self):
        assert eta3(math.pi / 2, math.pi / 2, math.pi / 2) == pytest.approx(-1.0, abs=1e-15)
        assert eta3(0, 0, 0) == 4.0
        assert eta3(*[math.pi / 6] * 3) > 0

    @settings(max_examples=300)
    @given(angle, angle, angle)
    def test_product_form(self, a, b, c):
        assert eta3(a, b, c) == pytest.approx(eta3_product_form(a, b, c), abs=1e-12)

    @settings(max_examples=300)
    @given(st.integers(0, 2 ** 32 - 1))
    def test_positive_inside_domain(self, seed):
        th = sample_in_domain(np.random.default_rng(seed), 3, margin=1e-3)
        assert eta3(*th) > 0


class TestEta4:
    def test_u_matrices_exact(self):
        assert all(abs(v) == Fraction(1, 2) for row in U_PLUS + U_MINUS for v in row)
        assert is_hermitian_unitary(U_PLUS)
        assert is_hermitian_unitary(U_MINUS)

    def test_pi_over_three(self):
        ep, em = eta4([PI3] * 4)
        assert ep == pytest.approx(0.25, abs=1e-14)
        assert em == pytest.approx(-2.0, abs=1e-14)

    @settings(max_examples=200)
    @given(angle, angle, angle)
    def test_theta4_zero(self, a, b, c):
        ep, em = eta4([a, b, c, 0.0])
        e3 = eta3(a, b, c)
        assert ep == pytest.approx(e3, abs=1e-12)
        assert em == pytest.approx(e3, abs=1e-12)

    @settings(max_examples=200)
    @given(angles4, st.integers(0, 3))
    def test_sign_flip_swaps(self, th, i):
        flipped = list(th)
        flipped[i] = -flipped[i]
        ep, em = eta4(th)
        fp, fm = eta4(flipped)
        assert fp == pytest.approx(em, abs=1e-12)
        assert fm == pytest.approx(ep, abs=1e-12)

    @settings(max_examples=200)
    @given(st.integers(0, 2 ** 32 - 1))
    def test_positive_inside_domain(self, seed):
        th = sample_in_domain(np.random.default_rng(seed), 4, margin=1e-3)
        ep, em = eta4(th)
        assert ep > 0 and em > 0


class TestABC:
    @settings(max_examples=300)
    @given(angles4)
    def test_relations(self, th):
        a, b, c = abc_coefficients(th)
        ep, em = eta4(th)
        assert abs(b + ep + em) <= 1e-10
        assert abs(b * b - 4 * a * c - (ep - em) ** 2) <= 1e-9
        assert b >= a + c - 1e-12

    @pytest.mark.parametrize("seed", range(5))
    def test_quartic_oracle(self, seed):
        rng = np.random.default_rng(seed)
        th = rng.uniform(-math.pi, math.pi, 4)
        a, b, c = abc_coefficients(th)
        for w in rng.uniform(-math.pi + 1e-3, math.pi - 1e-3, 20):
            t = math.tan(w / 2)
            lhs = a * t ** 4 + b * t ** 2 + c
            rhs = (1 + t * t) ** 2 * quartic_neg_eta(th, w)
            assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-10)

    def test_array_input(self):
        th = np.random.default_rng(3).uniform(-3, 3, (50, 4))
        a, b, c = abc_coefficients(th)
        for i in (0, 17, 49):
            assert (a[i], b[i], c[i]) == pytest.approx(abc_coefficients(th[i]))


class TestTable1:
    def test_interior(self):
        row = table1_classify([0.3, -0.4, 0.5, 0.2])
        assert row.eta_signs == (1, 1)
        assert row.tag == "0"

    def test_pi_over_three(self):
        row = table1_classify([PI3] * 4)
        assert row.abc_signs == (1, 1, -1)
        assert row.eta_signs == (1, -1)
        assert row.tag == "S2"

    def test_boundary(self):
        # theta_4 = 0 and theta_1 + theta_2 + theta_3 = pi puts eta on 0
        assert table1_classify([1.0, 1.0, math.pi - 2.0, 0.0]).boundary

    def test_forbidden_row_absent_from_table(self):
        assert FORBIDDEN_ABC not in TABLE1
        assert len(TABLE1) == 7

    def test_sweep(self):
        rng = np.random.default_rng(2024)
        th = rng.uniform(-math.pi, math.pi, (100_000, 4))
        a, b, c = abc_coefficients(th)
        assert not np.any((a > 0) & (b < 0) & (c > 0))

    @settings(max_examples=500)
    @given(angles4)
    def test_classification_consistent(self, th):
        row = table1_classify(th)
        assert row.consistent

    def test_row_order_is_not_significant(self):
        # flipping theta_3 keeps A, B, C and swaps the etas
        th = [0.4, 1.9, 2.2, 1.1]
        r1 = table1_classify(th)
        r2 = table1_classify([0.4, 1.9, -2.2, 1.1])
        assert r1.abc_signs == r2.abc_signs
        assert r1.eta_signs == r2.eta_signs[::-1]


class TestGClosed:
    def test_small_n_are_deltas(self):
        g1 = g_closed(0.5, [0.4])
        assert (g1.kind, g1.support_x, g1.weight) == ("delta", -1.0, 2.0)
        g2 = g_closed(0.5, [0.4, 1.1])
        assert g2.kind == "delta"
        assert g2.support_x == pytest.approx(-math.cos(1.1))
        with pytest.raises(ValueError):
            g1.as_float()

    def test_g3(self):
        assert g_closed(0.5, [0.5, 0.6, 0.7]).kind == "zero"
        assert g_closed(0.5, [math.pi / 2] * 3).as_float() == pytest.approx(2 / math.pi, rel=1e-14)
        assert g_closed(0.5, [1.0, 1.0, math.pi - 2.0]).kind == "boundary"

    def test_g4_reduces_to_g3(self):
        rng = np.random.default_rng(5)
        done = 0
        while done < 20:
            th = rng.uniform(0, math.pi, 3)
            e = eta3(*th)
            if e > -0.05:
                continue
            g3 = g_closed(0.5, th).as_float()
            g4 = g_closed(0.5, list(th) + [1e-6]).as_float()
            assert g4 == pytest.approx(g3, rel=1e-4)
            done += 1

    def test_mixed_sign_cases_use_negative_arguments(self):
        # (+,-) and (-,+) evaluate 2F1(1/2,1/2;1;z) at z < 0
        z = -2.0 / 0.25
        val = g4_from_etas(0.25, -2.0)
        ref = 2 / math.pi / math.sqrt(0.25) * float(mpmath.hyp2f1(0.5, 0.5, 1, z))
        assert val == pytest.approx(ref, rel=1e-13)
        assert g4_from_etas(-2.0, 0.25) == pytest.approx(val, rel=1e-13)

    @settings(max_examples=200)
    @given(st.floats(-50, -1e-3), st.floats(-50, -1e-3))
    def test_minus_minus_swap_invariance(self, ep, em):
        assert g4_from_etas(ep, em) == pytest.approx(g4_from_etas(em, ep), rel=1e-9)

    @settings(max_examples=200, deadline=None)
    @given(angles4, st.integers(0, 3))
    def test_sign_flip_invariance(self, th, i):
        g = g_closed(0.5, th)
        flipped = list(th)
        flipped[i] = -flipped[i]
        h = g_closed(0.5, flipped)
        if g.kind == "boundary" or h.kind == "boundary":
            return
        assert h.kind == g.kind
        assert h.as_float() == pytest.approx(g.as_float(), rel=1e-9)

    @settings(max_examples=100)
    @given(st.integers(0, 2 ** 32 - 1), st.sampled_from([3, 4]))
    def test_zero_inside_domain(self, seed, n):
        th = sample_in_domain(np.random.default_rng(seed), n)
        assert g_closed(0.5, th).kind == "zero"

    def test_gvalue_constructors(self):
        assert GValue.zero().as_float() == 0.0
        assert GValue.finite(1.5).as_float() == 1.5
        assert GValue.boundary().kind == "boundary"


class TestAbel:
    @pytest.mark.parametrize("theta", [0.3, 1.2, 2.8])
    @pytest.mark.parametrize("t", [0.5, 0.9, 0.99])
    def test_legendre_generating_function(self, theta, t):
        val = g_abel_oracle(0.5, [theta], t)
        assert val == pytest.approx(float(generating_gt(t, -math.cos(theta))), abs=1e-9)

    def test_interior_small(self):
        assert abs(g_abel_oracle(0.5, [0.5, 0.6, 0.7], 0.99)) <= 0.05

    def test_g3_extrapolation(self):
        est = g_abel_extrapolate(0.5, [math.pi / 2] * 3)
        assert est.estimate == pytest.approx(2 / math.pi, abs=1e-3)

    @pytest.mark.parametrize("gamma", [0.5, 1.0, 1.5])
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_vanishing_on_domain(self, gamma, n):
        rng = np.random.default_rng(10 * n + int(2 * gamma))
        for _ in range(3):
            th = sample_in_domain(rng, n)
            assert abs(g_abel_extrapolate(gamma, th).estimate) <= 1e-3

    def test_jacobi_pair_spec(self):
        spec = FamilySpec.jacobi([(0.3, -0.2), (-0.2, 0.3)], [0.5, -0.9])
        assert abs(g_abel_extrapolate(spec.gamma, spec).estimate) <= 1e-3

    def test_table2_minus_minus(self):
        rng = np.random.default_rng(8)
        while True:
            th = rng.uniform(-math.pi, math.pi, 4)
            ep, em = eta4(th)
            if ep < -0.05 and em < -0.05:
                break
        closed = g_closed(0.5, th).as_float()
        assert g_abel_extrapolate(0.5, th).estimate == pytest.approx(closed, rel=1e-2)

    def test_other_gamma_routes_to_abel(self):
        g = g_closed(1.0, [0.4, 0.5, 0.6])
        assert g.kind == "finite" and abs(g.value) <= 1e-3

    def test_bad_grid(self):
        with pytest.raises(ValueError):
            g_abel_extrapolate(0.5, [1.0] * 3, t_grid=[0.9, 0.8, 0.95])
        with pytest.raises(ValueError):
            g_abel_oracle(0.5, [1.0], 1.0)

    def test_warns_on_spread(self):
        with pytest.warns(ExtrapolationWarning):
            g_abel_extrapolate(0.5, [math.pi / 2] * 3, t_grid=[0.1, 0.2, 0.3], tol=1e-9)


class TestDeltaPairing:
    @pytest.mark.parametrize("t", [-0.999, -0.9, -0.5, 0.5, 0.9])
    def test_normalization(self, t):
        assert delta_pairing(lambda x: 1.0, t) == pytest.approx(2.0, abs=1e-9)

    @pytest.mark.parametrize("phi", [lambda x: x, lambda x: x * x, math.cos],
                             ids=["x", "x2", "cos"])
    def test_limit(self, phi):
        assert delta_pairing(phi, -0.999) == pytest.approx(2 * phi(-1.0), abs=1e-2)

    def test_converges_as_t_decreases(self):
        errs = [abs(delta_pairing(lambda x: x * x, t) - 2.0) for t in (-0.9, -0.99, -0.999)]
        assert errs[0] > errs[1] > errs[2]

    @pytest.mark.parametrize("y", [0.3, -0.6])
    def test_two_factors(self, y):
        assert delta_pairing(math.cos, -0.999, y=y) == pytest.approx(2 * math.cos(-y), abs=1e-2)


class TestAddition:
    def test_degree_zero(self):
        assert addition_identity_check(0, 0.5, 0.3, 0.9) <= 1e-15

    def test_examples(self):
        assert addition_identity_check(3, 0.5, 0.7, 1.1) <= 1e-9
        assert addition_identity_check(2, 1.5, 0.7, 1.1) <= 1e-8

    @pytest.mark.parametrize("gamma", [0.25, 0.5, 1.0, 1.5])
    def test_range(self, gamma):
        for n in range(7):
            assert addition_identity_check(n, gamma, 0.4, 2.0) <= 1e-8
