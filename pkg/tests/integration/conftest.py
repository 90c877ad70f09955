"""
Integration test fixtures
"""

from pathlib import Path

import pytest

from brokersim.brokersim import run_cli


@pytest.fixture(scope="function")
def run_command(small_config_file):
    """
    小さな設定ファイルで CLI コマンドを実行する

    Returns:
        (コマンド, 追加引数) → (終了コード, 出力ディレクトリ) の関数
    """
    output_dir = small_config_file.parent / "results"

    def _run(command: str, *extra: str) -> tuple[int, Path]:
        code = run_cli([command, "--config", str(small_config_file), *extra])
        return code, output_dir

    return _run
