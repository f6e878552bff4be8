"""reeb_vineyard モジュール

Reeb グラフの ε 平滑化・τ 切り詰め、拡張パーシステンス図とその輸送、
種別を保つボトルネック距離、ヴィンヤードの実現を扱う実装
"""

# 相対インポートでモジュールを公開
from .errors import (
    ConfigurationError,
    DiagramError,
    DiagramMismatchError,
    FileFormatError,
    InvalidGraphError,
    NotADownForkError,
    NotAdmissibleError,
    ParameterError,
    PersistenceDivergenceError,
    ReebVineyardError,
    UnknownVertexError,
)
from .file_formats import (
    format_value,
    parse_diagram,
    parse_graph,
    parse_vineyard,
    serialize_diagram,
    serialize_graph,
    serialize_vineyard,
)
from .persistence import (
    ExtendedDiagram,
    PairKind,
    PersistencePair,
    diagram_equal,
    ext1_partner,
    ext1_partners,
    extended_diagram,
    extended_diagram_oracle,
    total_persistence,
)
from .reeb_graph import (
    BandPartition,
    ReebGraph,
    ValidationReport,
    VertexClass,
    VertexTag,
    band_components,
    band_inclusion,
    betti,
    canonical_order,
    classify,
    genericity,
    isomorphic,
    relabel_canonical,
    suppress_regular,
    validate,
)
from .smoothing import (
    TransportParams,
    genericity_guard,
    level_point_count,
    predict_critical_values,
    reach_table,
    smooth,
    truncate,
    truncated_smooth,
    vertex_correspondence,
)
from .transport import (
    BottleneckResult,
    Matching,
    ShiftVector,
    bottleneck,
    shift_bound,
    shift_diagram,
    shift_vectors,
    transport,
    transport_point,
)
from .vineyard import (
    PathSample,
    Realization,
    Vineyard,
    interpolate,
    interpolate_diagram,
    is_admissible,
    realize,
    recover_params,
    sample_path,
)

__all__ = [
    "BandPartition",
    "BottleneckResult",
    "ConfigurationError",
    "DiagramError",
    "DiagramMismatchError",
    "ExtendedDiagram",
    "FileFormatError",
    "InvalidGraphError",
    "Matching",
    "NotADownForkError",
    "NotAdmissibleError",
    "PairKind",
    "ParameterError",
    "PathSample",
    "PersistenceDivergenceError",
    "PersistencePair",
    "Realization",
    "ReebGraph",
    "ReebVineyardError",
    "ShiftVector",
    "TransportParams",
    "UnknownVertexError",
    "ValidationReport",
    "VertexClass",
    "VertexTag",
    "Vineyard",
    "band_components",
    "band_inclusion",
    "betti",
    "bottleneck",
    "canonical_order",
    "classify",
    "diagram_equal",
    "ext1_partner",
    "ext1_partners",
    "extended_diagram",
    "extended_diagram_oracle",
    "format_value",
    "genericity",
    "genericity_guard",
    "interpolate",
    "interpolate_diagram",
    "is_admissible",
    "isomorphic",
    "level_point_count",
    "parse_diagram",
    "parse_graph",
    "parse_vineyard",
    "predict_critical_values",
    "reach_table",
    "realize",
    "recover_params",
    "relabel_canonical",
    "sample_path",
    "serialize_diagram",
    "serialize_graph",
    "serialize_vineyard",
    "shift_bound",
    "shift_diagram",
    "shift_vectors",
    "smooth",
    "suppress_regular",
    "total_persistence",
    "transport",
    "transport_point",
    "truncate",
    "truncated_smooth",
    "validate",
    "vertex_correspondence",
]
