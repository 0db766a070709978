import math

import numpy as np
import pytest
from scipy.special import gammaln

from hsverify import quadrature as quad
from hsverify.errors import InvalidWeight, UnsupportedPairing, UnsupportedSpace
from hsverify.multiindex import enumerate_degree, enumerate_up_to
from hsverify.spaces import (
    OperatorKind,
    SourceSpace,
    SpaceKind,
    TargetSpace,
    basis_constant_sq,
    check_pairing,
    closed_form_exponent,
    coefficient_ratio,
    collapsed_coefficient,
    gamma_ratio_deviation,
    is_exact_theorem,
    log_collapsed_coefficients,
    target_beta,
)

from helpers import BALL_CONFIGS, monomial_norm_oracle, source

COMP = OperatorKind.composition()
ALL_SOURCES = [
    source(kind, n, a)
    for kind in ("bergman_ball", "bergman_polydisk")
    for n in (1, 2)
    for a in (0.0, 1.5)
] + [source("hardy_ball", 2), source("hardy_polydisk", 2)]
BALL_SOURCES = [source(*cfg) for cfg in BALL_CONFIGS]


class TestValidation:
    def test_bergman_needs_alpha(self):
        with pytest.raises(InvalidWeight):
            SourceSpace(SpaceKind.BERGMAN_BALL, 2)
        with pytest.raises(InvalidWeight):
            SourceSpace(SpaceKind.BERGMAN_BALL, 2, -1.0)

    def test_hardy_takes_no_alpha(self):
        with pytest.raises(InvalidWeight):
            SourceSpace(SpaceKind.HARDY_BALL, 2, 0.0)

    def test_negative_order(self):
        with pytest.raises(ValueError):
            OperatorKind.radial(-1)

    def test_target_weight(self):
        with pytest.raises(InvalidWeight):
            TargetSpace(1, -1.0)

    def test_pairings(self):
        with pytest.raises(UnsupportedPairing):
            check_pairing(source("bergman_polydisk", 2, 0), OperatorKind.radial(1))
        with pytest.raises(UnsupportedPairing):
            check_pairing(source("bergman_ball", 2, 0), OperatorKind.one_var_derivative())
        with pytest.raises(UnsupportedPairing):
            check_pairing(source("hardy_ball", 2), OperatorKind.one_var_derivative())
        check_pairing(source("bergman_ball", 1, 0.5), OperatorKind.one_var_derivative())


class TestTargetBeta:
    @pytest.mark.parametrize(
        "src, beta",
        [
            (source("bergman_polydisk", 2, 0), 2.0),
            (source("hardy_ball", 2), 0.0),
            (source("bergman_ball", 1, 0), 0.0),
            (source("hardy_polydisk", 3), 1.0),
            (source("bergman_ball", 3, 1.5), 3.5),
            (source("bergman_polydisk", 3, 1.5), 8.5),
        ],
    )
    def test_values(self, src, beta):
        assert target_beta(src) == beta

    @pytest.mark.parametrize("alpha", [-0.5, 0.0, 0.7, 4.0])
    def test_one_dimensional_ball_keeps_alpha(self, alpha):
        assert target_beta(source("bergman_ball", 1, alpha)) == alpha

    @pytest.mark.parametrize("kind", ["hardy_ball", "hardy_polydisk"])
    def test_hardy_n1_rejected(self, kind):
        with pytest.raises(InvalidWeight):
            target_beta(source(kind, 1))


class TestBasisConstants:
    def test_examples(self):
        assert basis_constant_sq(source("hardy_ball", 2), (1, 1)) == pytest.approx(6, rel=1e-14)
        assert basis_constant_sq(source("bergman_polydisk", 1, 0), (2,)) == pytest.approx(3, rel=1e-14)

    @pytest.mark.parametrize("src", ALL_SOURCES, ids=str)
    def test_constant_has_unit_norm(self, src):
        assert basis_constant_sq(src, (0,) * src.n) == pytest.approx(1, rel=1e-15)

    @pytest.mark.parametrize("n", [2, 3])
    def test_hardy_ball_integer_oracle(self, n):
        src = source("hardy_ball", n)
        for J in enumerate_up_to(n, 8):
            exact = math.factorial(n - 1 + sum(J)) / (
                math.factorial(n - 1) * math.prod(math.factorial(j) for j in J)
            )
            assert basis_constant_sq(src, J) == pytest.approx(exact, rel=1e-13)


@pytest.mark.parametrize("src", ALL_SOURCES, ids=str)
def test_orthonormality_audit(src):
    for J in enumerate_up_to(src.n, 6):
        norm = monomial_norm_oracle(src, J)
        assert basis_constant_sq(src, J) * norm == pytest.approx(1, rel=1e-10)


def test_distinct_monomials_orthogonal_on_disk():
    rule = quad.build_disk_rule(1.5, 16, 32)
    z = rule.points()
    for a in range(6):
        for b in range(6):
            if a != b:
                assert abs(np.sum(rule.weights() * z**a * np.conj(z) ** b)) < 1e-14


class TestCollapsedCoefficients:
    def test_examples(self):
        src = source("bergman_ball", 1, 0)
        for k in range(30):
            assert collapsed_coefficient(src, COMP, k) == pytest.approx(k + 1, rel=1e-13)
        assert collapsed_coefficient(src, OperatorKind.radial(1), 0) == 0.0
        assert collapsed_coefficient(source("hardy_ball", 3), OperatorKind.radial(1), 0) == 0.0
        assert collapsed_coefficient(source("hardy_ball", 2), COMP, 3) == pytest.approx(4, rel=1e-14)

    def test_polydisk_has_no_collapse(self):
        with pytest.raises(UnsupportedSpace):
            collapsed_coefficient(source("bergman_polydisk", 2, 0), COMP, 3)

    @pytest.mark.parametrize("alpha", [0.0, 1.5])
    def test_one_var_derivative_closed_form(self, alpha):
        src = source("bergman_ball", 1, alpha)
        op = OperatorKind.one_var_derivative()
        for k in range(20):
            # e_{k+1}' = sqrt(b_{k+1}) (k+1) z^k with b_j = Gamma(j+alpha+2)/(j! Gamma(alpha+2))
            b = math.exp(gammaln(k + alpha + 3) - gammaln(k + 2) - gammaln(alpha + 2))
            assert collapsed_coefficient(src, op, k) == pytest.approx(b * (k + 1) ** 2, rel=1e-12)
        if alpha == 0.0:
            assert collapsed_coefficient(src, op, 3) == pytest.approx(4 * 4 * 5, rel=1e-13)

    @pytest.mark.parametrize("src", BALL_SOURCES, ids=str)
    @pytest.mark.parametrize("op", [COMP, OperatorKind.radial(0.5), OperatorKind.radial(1), OperatorKind.radial(2)], ids=str)
    def test_collapse_consistency(self, src, op, rng):
        n = src.n
        for _ in range(3):
            x = rng.uniform(0, 1, n)
            for k in range(13):
                extra = float(k) ** (2 * op.t) if op.t is not None else 1.0
                if op.t is not None and k == 0:
                    extra = 0.0
                lhs = math.fsum(
                    basis_constant_sq(src, J) * extra * math.prod(xi**j for xi, j in zip(x, J))
                    for J in enumerate_degree(n, k)
                )
                rhs = collapsed_coefficient(src, op, k) * x.sum() ** k
                assert lhs == pytest.approx(rhs, rel=1e-11, abs=0)

    @pytest.mark.parametrize(
        "src", [source("bergman_ball", n, a) for n in (1, 3) for a in (0.0, 1.5)] + [source("hardy_ball", 2)], ids=str
    )
    def test_ratio_recurrence(self, src):
        ops = [COMP, OperatorKind.radial(1.5)]
        if src.n == 1 and src.kind is SpaceKind.BERGMAN_BALL:
            ops.append(OperatorKind.one_var_derivative())
        ks = np.arange(1, 200)
        for op in ops:
            logc = log_collapsed_coefficients(src, op, np.arange(201))
            np.testing.assert_allclose(coefficient_ratio(src, op, ks), np.exp(np.diff(logc))[1:], rtol=1e-12)


@pytest.mark.parametrize("src", BALL_SOURCES, ids=str)
def test_exact_generating_function(src):
    p = closed_form_exponent(src, COMP)
    ks = np.arange(4000)
    c = np.exp(log_collapsed_coefficients(src, COMP, ks))
    for x in np.arange(10) / 10:
        total = math.fsum(c * x**ks) * (1 - x) ** p
        assert total == pytest.approx(1.0, rel=1e-10)


@pytest.mark.parametrize("x", [0.5, 1.0, 2.7])
def test_gamma_ratio_asymptotic(x):
    assert gamma_ratio_deviation(1e6, x) <= 1e-3
    # the deviation actually shrinks like x(x-1)/(2k)
    assert gamma_ratio_deviation(1e6, x) == pytest.approx(abs(x * (x - 1)) / 2e6, rel=1e-3, abs=1e-12)


class TestExponents:
    @pytest.mark.parametrize("n, alpha", [(1, 0.0), (2, 1.5), (3, 0.5)])
    def test_ball_bergman(self, n, alpha):
        src = source("bergman_ball", n, alpha)
        assert closed_form_exponent(src, COMP) == n + alpha + 1
        for t in (0, 0.5, 1, 2):
            assert closed_form_exponent(src, OperatorKind.radial(t)) == n + alpha + 2 * t + 1
        assert closed_form_exponent(src, OperatorKind.radial(1)) == n + alpha + 3

    @pytest.mark.parametrize("n", [2, 3])
    def test_ball_hardy(self, n):
        src = source("hardy_ball", n)
        assert closed_form_exponent(src, COMP) == n
        assert closed_form_exponent(src, OperatorKind.radial(1)) == n + 2
        assert closed_form_exponent(src, OperatorKind.radial(2.5)) == n + 5

    def test_polydisk_per_factor(self):
        assert closed_form_exponent(source("hardy_polydisk", 2), COMP) == 1
        assert closed_form_exponent(source("bergman_polydisk", 3, 1.5), COMP) == 3.5

    @pytest.mark.parametrize("alpha", [0.0, 1.5])
    def test_disk(self, alpha):
        src = source("bergman_ball", 1, alpha)
        assert closed_form_exponent(src, COMP) == alpha + 2
        assert closed_form_exponent(src, OperatorKind.one_var_derivative()) == alpha + 4

    def test_unsupported(self):
        with pytest.raises(UnsupportedPairing):
            closed_form_exponent(source("hardy_polydisk", 2), OperatorKind.radial(1))


def test_is_exact_theorem():
    assert is_exact_theorem(source("hardy_ball", 2), COMP)
    assert is_exact_theorem(source("bergman_polydisk", 2, 0), COMP)
    assert not is_exact_theorem(source("bergman_ball", 2, 0), OperatorKind.radial(1))
    assert not is_exact_theorem(source("bergman_ball", 1, 0), OperatorKind.one_var_derivative())
