"""
カスタム例外クラス
シミュレーターで使用する例外を定義
"""

from typing import Any


class ErrorMessages:
    """共通エラーメッセージ定数"""

    CONFIG_LOAD_FAILED = "設定ファイルの読み込みに失敗しました"
    CONFIG_NOT_FOUND = "設定ファイルが見つかりません: {path}"
    CONFIG_INVALID = "設定値が不正です"
    UNKNOWN_CONFIG_KEY = "不明な設定キーです: {key}"
    INTEGRATION_BLOWUP = "数値積分が発散しました (t={t})"
    TABLE_OUT_OF_RANGE = "テーブル {name} の評価時刻が範囲外です: t={t}"
    NEGATIVE_G2 = "g2 が負でない点があります (t={t})"
    NEGATIVE_Z = "{name} が負の値を取りました (t={t})"
    ADMISSIBILITY = "許容条件 {condition} が満たされません (t={t})"
    EXISTENCE_VIOLATION = "ブローカーのRiccati方程式の解が存在しません (t={t})"
    FILTER_DEGENERATE = "フィルタ係数が退化しています: {quantity} (t={t})"
    SIMULATION_BLOWUP = "シミュレーションの状態が有限値ではありません (step={step})"
    ZERO_NOTIONAL = "取引総額がゼロのため指標を計算できません"


class BrokerSimError(Exception):
    """シミュレーターの基本例外クラス"""

    def __init__(
        self,
        message: str,
        details: str | None = None,
        error_code: str | None = None,
        context: dict[str, Any] | None = None,
    ):
        super().__init__(message)
        self.message = message
        self.details = details
        self.error_code = error_code
        self.context = context or {}

    def __str__(self) -> str:
        result = self.message
        if self.details:
            result += f": {self.details}"
        return result


class ConfigError(BrokerSimError):
    """設定関連のエラー"""

    def __init__(self, message: str, config_path: str | None = None, **kwargs: Any):
        details = kwargs.pop("details", None) or config_path
        super().__init__(
            message=message,
            details=details,
            error_code="CONFIG_ERROR",
            context={"config_path": config_path} if config_path else None,
        )


class TableRangeError(BrokerSimError, ValueError):
    """係数テーブルの範囲外評価"""

    def __init__(self, name: str, t: float):
        super().__init__(
            message=ErrorMessages.TABLE_OUT_OF_RANGE.format(name=name, t=t),
            error_code="TABLE_RANGE_ERROR",
            context={"name": name, "t": t},
        )


class NumericalError(BrokerSimError):
    """数値計算関連のエラーの基底クラス"""

    error_code = "NUMERICAL_ERROR"

    def __init__(self, message: str, t: float | None = None, **kwargs: Any):
        context = dict(kwargs.pop("context", None) or {})
        if t is not None:
            context["t"] = t
        super().__init__(
            message=message,
            details=kwargs.pop("details", None),
            error_code=type(self).error_code,
            context=context,
        )

    @property
    def t(self) -> float | None:
        """エラーが発生した時刻"""
        return self.context.get("t")


class IntegrationBlowupError(NumericalError):
    """RK4積分で非有限値が発生"""

    error_code = "INTEGRATION_BLOWUP"


class ModelInconsistencyError(NumericalError):
    """解かれた係数が符号条件を満たさない"""

    error_code = "MODEL_INCONSISTENCY"


class AdmissibilityError(NumericalError):
    """1 + b f3 > 0 または a - f2^2 b > 0 の違反"""

    error_code = "ADMISSIBILITY_ERROR"


class ExistenceViolationError(NumericalError):
    """ブローカーのRiccati方程式が有限時間で発散"""

    error_code = "EXISTENCE_VIOLATION"


class FilterDegeneracyError(NumericalError):
    """フィルタ係数の退化、またはフィルタ更新の非有限値"""

    error_code = "FILTER_DEGENERACY"


class SimulationBlowupError(NumericalError):
    """シミュレーション状態の非有限値"""

    error_code = "SIMULATION_BLOWUP"

    def __init__(self, step: int, t: float | None = None, **kwargs: Any):
        super().__init__(
            ErrorMessages.SIMULATION_BLOWUP.format(step=step),
            t=t,
            context={"step": step},
            **kwargs,
        )

    @property
    def step(self) -> int:
        """発散したステップ番号"""
        return int(self.context["step"])


class UndefinedMetricError(NumericalError):
    """指標が定義できない（取引総額ゼロなど）"""

    error_code = "UNDEFINED_METRIC"
