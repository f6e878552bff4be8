"""パッケージ共通の例外クラス"""

from typing import TYPE_CHECKING, Optional

if TYPE_CHECKING:
    from .reeb_graph import ValidationReport


class ReebVineyardError(Exception):
    """このパッケージが送出する例外の基底クラス"""


class ConfigurationError(ReebVineyardError, ValueError):
    """環境変数などの設定値が不正"""


class InvalidGraphError(ReebVineyardError, ValueError):
    """Reeb グラフの検証に失敗した"""

    def __init__(self, report: "ValidationReport") -> None:
        self.report = report
        super().__init__("invalid Reeb graph: " + "; ".join(report.violations))


class UnknownVertexError(ReebVineyardError, KeyError):
    """存在しない頂点 ID が指定された"""

    def __init__(self, vertex: str) -> None:
        self.vertex = vertex
        super().__init__(f"unknown vertex {vertex}")

    def __str__(self) -> str:
        return f"unknown vertex {self.vertex}"


class ParameterError(ReebVineyardError, ValueError):
    """ε, τ, t などのパラメータが定義域外"""


class NotADownForkError(ReebVineyardError, ValueError):
    """下向き分岐ではない頂点が指定された"""


class DiagramError(ReebVineyardError, ValueError):
    """パーシステンス図の点や種別が不正"""


class FileFormatError(ReebVineyardError, ValueError):
    """入力ファイルの書式エラー（行番号付き）"""

    def __init__(self, line: int, message: str) -> None:
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}")


class NotAdmissibleError(ReebVineyardError):
    """ヴィンヤードのステップを輸送写像で説明できない"""

    def __init__(self, step: int, message: str = "no admissible (epsilon, tau)") -> None:
        self.step = step
        super().__init__(f"step {step}: {message}")


class DiagramMismatchError(ReebVineyardError):
    """実現したグラフの図が期待した図と一致しない"""

    def __init__(self, step: Optional[int], message: str) -> None:
        self.step = step
        super().__init__(message if step is None else f"step {step}: {message}")


class PersistenceDivergenceError(ReebVineyardError):
    """組合せ的ペアリングと行列簡約の結果が食い違った"""
