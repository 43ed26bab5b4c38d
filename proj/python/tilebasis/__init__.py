"""Structured Riesz bases of exponentials on multi-tiles.

Thin wrapper over the compiled ``_tilebasis`` module.  Exact rationals come
back as strings; ``fraction`` converts them.
"""

from fractions import Fraction

from ._tilebasis import (  # noqa: F401
    HypothesisError,
    MultiTile,
    NotAMultiTile,
    Pattern,
    PatternSet,
    RieszBounds,
    ShiftVector,
    SingularFiber,
    TileFileError,
    __version__,
    annihilator_gap,
    det_gap,
    epsilon_for_k,
    factorial_odd,
    fiber_matrix,
    interval_ktile,
    kronecker_certificate,
    lacunary,
    lower_bound_from_det,
    pattern_cells,
    pattern_set,
    read_tiles,
    riesz_bounds,
    round_trip,
    run_cli,
    search,
    split_two_tile,
    two_tile_test,
    verify_certificate,
    verify_k_tile,
)


def fraction(text):
    """Canonical rational string to Fraction."""
    return Fraction(text)


def measures(patterns):
    """Cell measures of a PatternSet as Fractions."""
    return [Fraction(m) for m in patterns.measures()]
