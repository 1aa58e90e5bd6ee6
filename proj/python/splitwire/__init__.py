"""Split sub-conductor extraction from power-line LiDAR point clouds.

The heavy lifting lives in the compiled extension; this package just
re-exports it.
"""

from ._core import (
    SplitwireError,
    __version__,
    dpc_bruteforce,
    dpc_cluster,
    extract,
    fit_parabola,
    generate,
    label_accuracy,
    local_density,
    read_ply,
    read_xyz,
    relative_coordinates,
    write_labels_csv,
    write_xyz,
)

__all__ = [
    "SplitwireError",
    "__version__",
    "dpc_bruteforce",
    "dpc_cluster",
    "extract",
    "fit_parabola",
    "generate",
    "label_accuracy",
    "local_density",
    "read_ply",
    "read_xyz",
    "relative_coordinates",
    "write_labels_csv",
    "write_xyz",
]
