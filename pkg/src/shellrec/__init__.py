"""Reconstruct surface triangulations from their intersection matrices."""

__version__ = "0.1.0"

from .complex_core import (  # noqa: E402
    SurfaceReport,
    Triangulation,
    canonical_code,
    euler_characteristic,
    is_isomorphic,
    validate_surface,
    vertex_star,
)
from .intersection import (  # noqa: E402
    IntersectionMatrix,
    find_intersection_preserving_maps,
    intersection_matrix,
    is_induced,
    same_intersection_matrix,
)
from .shells import (  # noqa: E402
    Disk,
    MOBIUS5,
    MOBIUS6,
    Shell,
    ShellClass,
    classify_shell,
    is_shell,
    realize_shell_class,
    repetition_pattern,
    shell_around_vertex,
    structural_vertex_list,
)
from .reconstruct import ExtendResult, extend_map, reconstruct_from_matrix, verify_theorem2  # noqa: E402
from .corpus import (  # noqa: E402
    EnumerationConfig,
    catalog,
    enumerate_closed,
    exceptional_scan,
    exceptional_self_map,
    theorem1_scan,
)
