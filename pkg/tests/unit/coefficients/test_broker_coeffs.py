"""
ブローカー係数システムのテスト
"""

import numpy as np
import pytest

from brokersim.coefficients import (
    broker_control,
    broker_value,
    build_P_matrices,
    compute_vB_price,
    existence_diagnostic,
    reduced_system,
    solve_broker_riccati,
)
from brokersim.coefficients.broker import REDUCED_INDEX
from brokersim.numerics import Direction, rk4_integrate
from brokersim.utils.exceptions import (
    AdmissibilityError,
    ExistenceViolationError,
    IntegrationBlowupError,
)
from tests.helpers import ParamsBuilder, assert_symmetric


class TestBrokerVariance:
    """V^B のテスト"""

    def test_steady_state(self, default_params, default_grid):
        """ρ=0 の既定パラメータでは 0 = 1 - 10V - V^2 の正の根に収束する"""
        vB = compute_vB_price(default_params, default_grid)
        steady = (-10.0 + np.sqrt(104.0)) / 2.0
        assert abs(steady - 0.09902) < 1e-5
        assert abs(vB.terminal - steady) / steady < 1e-3

    def test_correlation_reduces_variance(self, default_grid):
        """価格とシグナルが相関すると分散は小さくなる"""
        correlated = ParamsBuilder().with_value("rho", 0.5).build()
        base = compute_vB_price(ParamsBuilder().build(), default_grid)
        assert compute_vB_price(correlated, default_grid).terminal < base.terminal


class TestPMatrices:
    """P 行列のテスト"""

    def test_p9_identity(self, trader_coeffs, broker_coeffs, default_params):
        """P9 = 2 P8^T P7 + P2^T"""
        for t in (0.0, 0.5, 0.999):
            P = build_P_matrices(t, trader_coeffs, broker_coeffs.vB, default_params)
            expected = 2.0 * np.outer(P.P8, P.P7) + P.P2.T
            assert np.max(np.abs(P.P9 - expected)) < 1e-14

    def test_normaliser(self, trader_coeffs, broker_coeffs, default_params):
        """s = sqrt(a - f2^2 b)"""
        P = build_P_matrices(0.3, trader_coeffs, broker_coeffs.vB, default_params)
        f2 = trader_coeffs.f2(0.3)
        expected = np.sqrt(default_params.broker_cost - f2**2 * default_params.trader_cost)
        assert P.s == pytest.approx(expected)

    def test_belief_can_break_admissibility(self, trader_coeffs, broker_coeffs, default_params):
        """c f2 が大きすぎると a - (c f2)^2 b <= 0 で AdmissibilityError"""
        with pytest.raises(AdmissibilityError):
            build_P_matrices(0.0, trader_coeffs, broker_coeffs.vB, default_params, c_belief=1e4)

    def test_reduced_matrices_match_full_block(self, trader_coeffs, broker_coeffs, default_params):
        """縮約系の U, B は4x4系の該当ブロックから得られる"""
        t = 0.4
        P = build_P_matrices(t, trader_coeffs, broker_coeffs.vB, default_params)
        U, V, B = reduced_system(t, trader_coeffs, broker_coeffs.vB, default_params)
        idx = np.ix_(REDUCED_INDEX, REDUCED_INDEX)
        assert np.allclose(U, 4.0 * np.outer(P.P8, P.P8)[idx], rtol=1e-12, atol=0.0)
        assert np.allclose(B, (np.outer(P.P7, P.P7) + P.P5)[idx], rtol=1e-10, atol=1e-14)
        assert np.allclose(V, P.P9[idx], rtol=1e-10, atol=1e-14)


class TestBrokerRiccati:
    """G2 / G0 のテスト"""

    def test_symmetric(self, broker_coeffs):
        assert_symmetric(np.asarray(broker_coeffs.G2.values))

    def test_terminal_condition(self, broker_coeffs, default_params):
        """G2(T) は (1,1) 成分だけが -(β0 + β1 V^B_T)"""
        terminal = np.zeros((4, 4))
        terminal[0, 0] = -(default_params.beta0_b + default_params.beta1_b * broker_coeffs.vB.terminal)
        assert np.allclose(broker_coeffs.G2.terminal, terminal, atol=1e-15)
        assert broker_coeffs.G0.terminal == 0.0

    def test_reduced_system_agrees(self, broker_coeffs):
        """縮約2x2系と4x4系の共通成分が一致する"""
        assert broker_coeffs.reduction_gap < 1e-8
        block = np.asarray(broker_coeffs.G2.values)[:, REDUCED_INDEX][:, :, REDUCED_INDEX]
        assert np.array_equal(block, broker_coeffs.reduced.values)

    def test_vector_coefficient_stays_zero(self, broker_coeffs, trader_coeffs, default_params):
        """線形項 G1 のODEはゼロから積分するとゼロのまま"""
        G2 = broker_coeffs.G2

        def rhs(t, g1):
            P = build_P_matrices(t, trader_coeffs, broker_coeffs.vB, default_params)
            drift = P.P9 + 4.0 * np.outer(P.P8, P.P8) @ G2(t)
            return -(g1 @ drift)

        g1 = rk4_integrate(rhs, np.zeros(4), broker_coeffs.grid, Direction.BACKWARD, name="G1")
        assert np.max(np.abs(g1.values)) < 1e-14

    def test_blowup_becomes_existence_violation(
        self, mocker, trader_coeffs, broker_coeffs, default_params, default_grid
    ):
        mocker.patch(
            "brokersim.coefficients.broker.rk4_integrate",
            side_effect=IntegrationBlowupError("blowup", t=0.25),
        )
        with pytest.raises(ExistenceViolationError) as exc_info:
            solve_broker_riccati(default_params, trader_coeffs, broker_coeffs.vB, default_grid)
        assert exc_info.value.t == 0.25

    def test_belief_override(self, trader_coeffs, broker_coeffs, default_params, default_grid):
        """c_belief の上書きは終端条件を変えずにフィードバック係数を変える"""
        solved = solve_broker_riccati(
            default_params, trader_coeffs, broker_coeffs.vB, default_grid, c_belief=0.0
        )
        assert solved.c_belief == 0.0
        assert np.array_equal(solved.G2.terminal, broker_coeffs.G2.terminal)
        assert not np.allclose(solved.feedback.values, broker_coeffs.feedback.values)

    def test_tables_for_csv(self, broker_coeffs):
        """CSV用テーブルは上三角10成分、G0、V^B、固有値"""
        names = [table.name for table in broker_coeffs.tables()]
        assert names[:4] == ["G2_11", "G2_12", "G2_13", "G2_14"]
        assert len([n for n in names if n.startswith("G2_")]) == 10
        assert names[-3:] == ["G0", "vB", "lambda"]


class TestExistenceDiagnostic:
    """L + L^T の固有値診断のテスト"""

    def test_default_parameters(self, broker_coeffs):
        """既定パラメータでは3つが厳密に負、4つ目はゼロ"""
        diagnostic = broker_coeffs.eigen_diag
        eigenvalues = np.asarray(diagnostic.eigenvalues.values)
        assert diagnostic.flagged_count == 0
        assert np.all(eigenvalues[:, :3] < -1e-6)
        assert np.all(np.abs(eigenvalues[:, 3]) < 1e-8)
        assert np.all(np.abs(diagnostic.determinants) < 1e-8)

    def test_sorted_by_magnitude(self, broker_coeffs):
        magnitudes = np.abs(np.asarray(broker_coeffs.eigen_diag.eigenvalues.values))
        assert np.all(np.diff(magnitudes, axis=1) <= 0.0)

    def test_recompute(self, broker_coeffs, trader_coeffs, default_params):
        """単独で呼んでも同じ結果"""
        diagnostic = existence_diagnostic(
            default_params, trader_coeffs, broker_coeffs.vB, broker_coeffs.grid
        )
        assert np.allclose(diagnostic.eigenvalues.values, broker_coeffs.eigen_diag.eigenvalues.values)


class TestBrokerControl:
    """ν* のテスト"""

    def test_components_sum(self, broker_coeffs, rng):
        """座標ごとの寄与の合計が ν*"""
        for t in (0.0, 0.25, 0.8):
            state = rng.normal(size=4)
            rate = broker_control(t, state, broker_coeffs)
            assert abs(sum(rate.components) - rate.total) < 1e-12 * max(1.0, abs(rate.total))

    def test_matches_feedback_formula(self, broker_coeffs, trader_coeffs, default_params):
        """ν* = (P7 + 2 P8 G2) ỹ / s"""
        t = 0.5
        state = np.array([1.0, 0.2, -30.0, 0.5])
        P = build_P_matrices(t, trader_coeffs, broker_coeffs.vB, default_params)
        expected = float((P.P7 + 2.0 * P.P8 @ broker_coeffs.G2(t)) @ state / P.s)
        assert broker_control(t, state, broker_coeffs).total == pytest.approx(expected, rel=1e-10)

    def test_vectorised(self, broker_coeffs):
        """先頭軸が座標の配列を渡すとパス方向にベクトル化される"""
        states = np.zeros((4, 5))
        states[0] = np.arange(5)
        rate = broker_control(0.1, states, broker_coeffs)
        assert rate.total.shape == (5,)
        assert rate.total[0] == 0.0

    def test_value_at_terminal(self, broker_coeffs):
        """t=T の価値関数は x + q s + G2_11(T) q^2"""
        state = np.array([2.0, 0.3, 5.0, 1.0])
        value = broker_value(1.0, 1.0, 100.0, state, broker_coeffs)
        assert value == pytest.approx(1.0 + 200.0 + 4.0 * broker_coeffs.G2.terminal[0, 0])
