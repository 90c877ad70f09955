"""
RK4積分とスカラーRiccatiソルバーのテスト
"""

import numpy as np
import pytest

from brokersim.models import TimeGrid
from brokersim.numerics import Direction, rk4_integrate, solve_scalar_riccati
from brokersim.utils.exceptions import IntegrationBlowupError, NumericalError


def _riccati_from_zero(q: float, l: float, c: float, t: np.ndarray) -> np.ndarray:  # noqa: E741
    """y' = c + l y + q y^2, y(0) = 0 の解析解"""
    d = np.sqrt(l**2 - 4.0 * q * c)
    decay = np.exp(-d * t)
    return 2.0 * c * (1.0 - decay) / ((d - l) + (d + l) * decay)


class TestRK4Integrate:
    """rk4_integrateのテスト"""

    def test_exponential(self):
        """y' = y の前進積分が e に一致する"""
        grid = TimeGrid(horizon=1.0, steps=1000)
        table = rk4_integrate(lambda t, y: y, 1.0, grid)
        assert abs(table.terminal - np.e) < 1e-10
        assert table.initial == 1.0

    def test_backward_direction(self):
        """後退積分では終端値から t=0 へ進む"""
        grid = TimeGrid(horizon=1.0, steps=1000)
        table = rk4_integrate(lambda t, y: y, np.e, grid, Direction.BACKWARD)
        assert table.terminal == np.e
        assert abs(table.initial - 1.0) < 1e-10

    def test_backward_then_forward_round_trip(self):
        """後退積分の y(0) から前進積分すると y(T) に戻る"""
        grid = TimeGrid(horizon=1.0, steps=1000)

        def field(t, y):
            return np.sin(3.0 * t) - 0.5 * y

        backward = rk4_integrate(field, 2.0, grid, Direction.BACKWARD)
        forward = rk4_integrate(field, backward.initial, grid, Direction.FORWARD)
        assert abs(forward.terminal - 2.0) < 1e-8

    def test_fourth_order_convergence(self):
        """刻み幅を半分にすると誤差がおよそ 1/16 になる"""
        errors = []
        for steps in (20, 40):
            grid = TimeGrid(horizon=1.0, steps=steps)
            table = rk4_integrate(lambda t, y: y, 1.0, grid)
            errors.append(np.max(np.abs(table.values - np.exp(grid.times))))
        assert 12.0 <= errors[0] / errors[1] <= 20.0

    def test_matrix_state_with_hook(self):
        """行列値の状態と step_hook が使える"""
        grid = TimeGrid(horizon=1.0, steps=50)
        calls = []

        def hook(y):
            calls.append(1)
            return 0.5 * (y + y.T)

        table = rk4_integrate(lambda t, y: -y, np.eye(2), grid, step_hook=hook)
        assert table.value_shape == (2, 2)
        assert len(calls) == grid.steps
        assert abs(table.terminal[0, 0] - np.exp(-1.0)) < 1e-8

    def test_blowup_raises_with_time(self):
        """有限時間で発散する解は IntegrationBlowupError を送出する"""
        grid = TimeGrid(horizon=2.0, steps=1000)
        with pytest.raises(IntegrationBlowupError) as excinfo:
            rk4_integrate(lambda t, y: y * y, 1.0, grid, name="explodes")
        assert isinstance(excinfo.value, NumericalError)
        assert excinfo.value.t is not None
        assert excinfo.value.t > 0.9
        assert excinfo.value.details == "explodes"

    def test_non_finite_boundary(self):
        """境界値が有限でない場合はすぐにエラー"""
        grid = TimeGrid(steps=10)
        with pytest.raises(IntegrationBlowupError):
            rk4_integrate(lambda t, y: y, np.nan, grid)


class TestScalarRiccati:
    """solve_scalar_riccatiのテスト"""

    def test_steady_state(self):
        """定数係数の前進Riccatiは定常解に収束する"""
        b, theta, p = 60.0, 10.0, 1e-6
        grid = TimeGrid(horizon=1.0, steps=1000)
        table = solve_scalar_riccati(q=-p, l=-2.0 * theta, c=b**2, boundary=0.0, grid=grid)
        expected = (-theta + np.sqrt(theta**2 + p * b**2)) / p
        assert abs(expected - 179.99838) < 1e-3
        assert abs(table.terminal - expected) / expected < 1e-3

    def test_linear_limit(self):
        """q = 0 なら線形ODEの解析解と一致する"""
        grid = TimeGrid(horizon=1.0, steps=1000)
        table = solve_scalar_riccati(q=0.0, l=-2.0, c=1.0, boundary=0.0, grid=grid)
        expected = 0.5 * (1.0 - np.exp(-2.0 * grid.times))
        assert np.max(np.abs(table.values - expected)) < 1e-8

    def test_matches_analytic_solution(self, rng):
        """ランダムな定数係数で解析解と一致する"""
        grid = TimeGrid(horizon=1.0, steps=1000)
        for _ in range(10):
            q = -rng.uniform(0.1, 2.0)
            l = -rng.uniform(1.0, 5.0)  # noqa: E741
            c = rng.uniform(0.1, 2.0)
            table = solve_scalar_riccati(q=q, l=l, c=c, boundary=0.0, grid=grid)
            expected = _riccati_from_zero(q, l, c, grid.times)
            assert np.max(np.abs(table.values - expected)) < 1e-8

    def test_backward_sign_convention(self):
        """後退方向は 0 = y' + c + l y + q y^2"""
        grid = TimeGrid(horizon=1.0, steps=1000)
        # y' = -1 → y(t) = T - t
        table = solve_scalar_riccati(q=0.0, l=0.0, c=1.0, boundary=0.0, grid=grid, direction="backward")
        assert np.allclose(table.values, 1.0 - grid.times, atol=1e-12)
