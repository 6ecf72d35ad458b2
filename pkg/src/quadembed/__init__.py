"""Nonorientable quadrangular embeddings of nearly complete bipartite graphs.

The library models general rotation systems (rotation.py), nearly complete
bipartite graphs and their certification (ncbg.py), the diamond sum surgery
(diamond.py), the construction pipelines built on odd pairings
(constructions.py), Ringel's printed rotations with signature completion
(ringel.py), and index-2 current graphs with derived embeddings
(current.py).  The quadembed CLI ties them together.
"""

from quadembed.rotation import (
    FaceWalk,
    InvalidRotationSystem,
    RotationSystem,
    SurfaceClass,
    euler_characteristic,
    is_orientable,
    is_quadrangular,
    normalize_at,
    odd_separated,
    separation_counts,
    surface_of,
    trace_faces,
    vertex_flip,
)

__version__ = "0.1.0"

__all__ = [
    "FaceWalk",
    "InvalidRotationSystem",
    "RotationSystem",
    "SurfaceClass",
    "euler_characteristic",
    "is_orientable",
    "is_quadrangular",
    "normalize_at",
    "odd_separated",
    "separation_counts",
    "surface_of",
    "trace_faces",
    "vertex_flip",
    "__version__",
]
