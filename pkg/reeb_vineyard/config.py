"""許容誤差などの設定を環境変数から読み込むモジュール"""

import math
import os
from typing import Optional

from dotenv import load_dotenv

from .errors import ConfigurationError

# 環境変数の読み込み
load_dotenv()

DEFAULT_TOLERANCE = 1e-9
DEFAULT_VERIFY_FACTOR = 10.0


def _read_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = float(raw)
    except ValueError as exc:
        raise ConfigurationError(f"{name} is not a number: {raw!r}") from exc
    if not math.isfinite(value) or value < 0:
        raise ConfigurationError(f"{name} must be a finite non-negative number")
    return value


def get_tolerance() -> float:
    """値比較に使う絶対許容誤差を返す

    Returns:
        float: 環境変数 REEB_TOL の値。未設定なら 1e-9。
    """
    return _read_float("REEB_TOL", DEFAULT_TOLERANCE)


def get_verify_factor() -> float:
    """実現（realize）の検証で許容誤差に掛ける倍率を返す"""
    return _read_float("REEB_VERIFY_FACTOR", DEFAULT_VERIFY_FACTOR)


def resolve_tolerance(tol: Optional[float] = None) -> float:
    """明示された許容誤差、なければ環境設定の値を返す

    Args:
        tol (float, optional): 呼び出し側が指定した許容誤差。デフォルトは None。

    Returns:
        float: 使用する許容誤差
    """
    if tol is None:
        return get_tolerance()
    if not math.isfinite(tol) or tol < 0:
        raise ConfigurationError("tolerance must be a finite non-negative number")
    return float(tol)
