#!/usr/bin/env python3
"""
requirements.txt / requirements-test.txt を pyproject.toml から生成する
"""

from pathlib import Path
import tomllib

PROJECT_ROOT = Path(__file__).parent.parent
HEADER = "# このファイルはpyproject.tomlから自動生成されます\n# 手動で編集しないでください\n\n"


def _package_name(requirement: str) -> str:
    for separator in (">=", "==", "<", ";", "["):
        requirement = requirement.split(separator)[0]
    return requirement.strip()


def collect(data: dict, group: str | None) -> list[str]:
    """ランタイム依存（group=None）または依存関係グループの文字列エントリを重複なく集める"""
    if group is None:
        entries = data.get("project", {}).get("dependencies", [])
    else:
        entries = data.get("dependency-groups", {}).get(group, [])

    seen: set[str] = set()
    result = []
    for entry in entries:
        # include-group は展開しない
        if not isinstance(entry, str):
            continue
        name = _package_name(entry)
        if name not in seen:
            seen.add(name)
            result.append(entry)
    return result


def main():
    with open(PROJECT_ROOT / "pyproject.toml", "rb") as f:
        data = tomllib.load(f)

    for group, filename in ((None, "requirements.txt"), ("test", "requirements-test.txt")):
        lines = collect(data, group)
        (PROJECT_ROOT / filename).write_text(HEADER + "".join(f"{line}\n" for line in lines), encoding="utf-8")
        print(f"✓ {filename} を生成しました ({len(lines)} 件)")


if __name__ == "__main__":
    main()
