"""Workbench for the rectilinear Steiner tree to (n^2 - 1)-puzzle reduction."""

from .puzzle import (
    Cell,
    Configuration,
    IllegalMove,
    Move,
    MoveSequence,
    PuzzleError,
    apply_move,
    apply_sequence,
    bfs_optimal,
    canonical_configuration,
    is_reachable,
    non_similar_cells,
)
from .reduction import (
    PuzzleInstance,
    ReductionError,
    Window,
    build_base_sequence,
    build_instance,
    build_witness,
    extract_tree,
    gadget_moves,
    roundtrip_check,
    verify_witness,
)
from .steiner import (
    SteinerError,
    SteinerInstance,
    SteinerTree,
    euler_tour,
    exact_steiner,
    hanan_grid,
    subdivide_to_unit,
    validate_tree,
)

__version__ = "0.1.0"
