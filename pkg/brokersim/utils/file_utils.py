"""
ファイル操作ユーティリティ
"""

from collections.abc import Iterable, Sequence
import csv
import io
import json
from pathlib import Path
from typing import Any

try:
    import tomllib
except ImportError:
    tomllib = None  # type: ignore[assignment]

try:
    import yaml
except ImportError:
    yaml = None  # type: ignore[assignment]


def safe_read_yaml(file_path: Path) -> Any | None:
    """
    YAMLファイルを安全に読み込む

    Args:
        file_path: YAMLファイルのパス

    Returns:
        パースされたYAMLデータ。失敗時はNone
    """
    if yaml is None:
        return None
    try:
        if not file_path.exists():
            return None
        with open(file_path, encoding="utf-8") as f:
            return yaml.safe_load(f)
    except (OSError, yaml.YAMLError):
        return None


def safe_read_toml(file_path: Path) -> Any | None:
    """
    TOMLファイルを安全に読み込む

    Args:
        file_path: TOMLファイルのパス

    Returns:
        パースされたTOMLデータ。失敗時はNone

    Raises:
        tomllib.TOMLDecodeError: TOMLパースエラーが発生した場合（詳細なエラー情報を含む）
    """
    if tomllib is None:
        return None
    try:
        if not file_path.exists():
            return None
        with open(file_path, "rb") as f:
            return tomllib.load(f)
    except OSError:
        return None


def format_float(value: Any) -> str:
    """
    浮動小数点数を完全な倍精度（17有効桁）で文字列化

    Args:
        value: 数値（int/floatおよびnumpyスカラー）

    Returns:
        文字列表現
    """
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def render_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """
    CSV文字列を生成

    Args:
        header: ヘッダー行
        rows: データ行

    Returns:
        CSV形式の文字列（改行は\\n）
    """
    output = io.StringIO()
    writer = csv.writer(output, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_float(v) for v in row])
    return output.getvalue()


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    """
    CSVファイルを書き出す（親ディレクトリは自動作成）

    Args:
        path: 出力先のパス
        header: ヘッダー行
        rows: データ行

    Returns:
        書き出したパス
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_csv(header, rows), encoding="utf-8")
    return path


def read_csv(path: Path) -> tuple[list[str], list[list[str]]]:
    """
    CSVファイルを読み込む

    Args:
        path: CSVファイルのパス

    Returns:
        (ヘッダー, データ行) のタプル
    """
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        rows = list(reader)
    if not rows:
        return [], []
    return rows[0], rows[1:]


def write_json(path: Path, content: Any) -> Path:
    """
    JSONファイルを書き出す

    Args:
        path: 出力先のパス
        content: JSONシリアライズ可能なオブジェクト

    Returns:
        書き出したパス
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(content, indent=2, ensure_ascii=False), encoding="utf-8")
    return path
