"""
設定管理モジュール
"""

from pathlib import Path
import re
from typing import Any

from pydantic import ValidationError

from .models import RunConfig
from .utils.exceptions import ConfigError, ErrorMessages
from .utils.file_utils import safe_read_toml, safe_read_yaml
from .utils.logger import configure_logging_level, get_logger

logger = get_logger("brokersim.config_manager")

SUPPORTED_SUFFIXES = (".toml", ".yaml", ".yml")


def format_validation_error(error: ValidationError) -> str:
    """pydanticの検証エラーを 'field.path: message' の行に整形"""
    lines = []
    for item in error.errors():
        field_path = ".".join(str(loc) for loc in item["loc"])
        lines.append(f"{field_path}: {item['msg']}")
    return "; ".join(lines)


class ConfigManager:
    """実行設定ファイルの読み込みと検証"""

    def __init__(self, config_path: Path | None = None):
        """
        初期化

        Args:
            config_path: 設定ファイル（TOMLまたはYAML）。Noneの場合はデフォルト設定

        Raises:
            ConfigError: ファイルが読めない、または検証に失敗した場合
        """
        self.config_path = config_path
        self._raw = self._load_raw()
        self.config = self._validate(self._raw)

    def _load_raw(self) -> dict[str, Any]:
        if self.config_path is None:
            logger.debug("設定ファイルの指定がないためデフォルト設定を使用します")
            return {}

        path = self.config_path
        if not path.exists():
            raise ConfigError(ErrorMessages.CONFIG_NOT_FOUND.format(path=path), str(path))
        if path.suffix not in SUPPORTED_SUFFIXES:
            raise ConfigError(
                ErrorMessages.CONFIG_LOAD_FAILED,
                str(path),
                details=f"unsupported config format: {path.suffix}",
            )

        logger.info(f"設定ファイルを読み込みます: {path}")
        try:
            data = safe_read_toml(path) if path.suffix == ".toml" else safe_read_yaml(path)
        except Exception as e:
            raise ConfigError(
                ErrorMessages.CONFIG_LOAD_FAILED, str(path), details=self._describe_parse_error(e)
            ) from e

        if data is None:
            raise ConfigError(ErrorMessages.CONFIG_LOAD_FAILED, str(path))
        if not isinstance(data, dict):
            raise ConfigError(
                ErrorMessages.CONFIG_INVALID, str(path), details="top level must be a table"
            )
        return data

    def _describe_parse_error(self, error: Exception) -> str:
        """パースエラーに行番号と該当行を添える"""
        message = str(error)
        line_match = re.search(r"at line (\d+)", message, re.IGNORECASE)
        if not line_match or self.config_path is None:
            return message
        line_num = int(line_match.group(1))
        try:
            lines = self.config_path.read_text(encoding="utf-8").splitlines()
        except OSError:
            return message
        if 1 <= line_num <= len(lines):
            return f"{message} (line {line_num}: {lines[line_num - 1].strip()})"
        return message

    def _validate(self, raw: dict[str, Any]) -> RunConfig:
        try:
            config = RunConfig(**raw)
        except ValidationError as e:
            details = format_validation_error(e)
            logger.error(f"設定のバリデーションエラー: {details}")
            raise ConfigError(
                ErrorMessages.CONFIG_INVALID,
                str(self.config_path) if self.config_path else None,
                details=details,
            ) from e
        configure_logging_level(config.debug.enabled)
        return config

    def get_config(self) -> RunConfig:
        """検証済みの設定"""
        return self.config

    def update_config(self, updates: dict[str, Any]) -> RunConfig:
        """
        設定をドット記法で更新して再検証する

        Args:
            updates: 例 {'model.c_belief': 0.5, 'experiment.paths': 100}

        Returns:
            更新後の設定

        Raises:
            ConfigError: 更新後の設定が不正な場合
        """
        if not updates:
            return self.config

        data = self.config.model_dump(mode="json")
        for key_path, value in updates.items():
            keys = key_path.split(".")
            target = data
            for key in keys[:-1]:
                if not isinstance(target.get(key), dict):
                    raise ConfigError(ErrorMessages.UNKNOWN_CONFIG_KEY.format(key=key_path))
                target = target[key]
            target[keys[-1]] = value

        self.config = self._validate(data)
        logger.info(f"設定を更新しました: {updates}")
        return self.config
