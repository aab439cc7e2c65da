"""Exact concordance invariants for knots presented by Seifert forms."""

__version__ = "0.1.0"

from .seifert import (  # noqa: E402
    FIGURE_EIGHT,
    T27,
    GenusOneBanded,
    Mirror,
    Sum,
    Torus2q,
    Unknot,
    alexander,
    build_J,
    build_K,
    iterated_sum,
    mirror,
    seifert_matrix,
)
from .signatures import knot_signature, signature_profile, tl_signature  # noqa: E402

__all__ = [
    "FIGURE_EIGHT", "T27", "GenusOneBanded", "Mirror", "Sum", "Torus2q", "Unknot",
    "alexander", "build_J", "build_K", "iterated_sum", "mirror", "seifert_matrix",
    "knot_signature", "signature_profile", "tl_signature", "clear_caches",
]


def clear_caches() -> None:
    """Drop memoised results (used when a test patches a building block)."""
    from . import branched_cover, cyclotomic, polynomials, seifert, signatures

    for mod in (seifert, signatures, branched_cover, cyclotomic, polynomials):
        for obj in vars(mod).values():
            if hasattr(obj, "cache_clear"):
                obj.cache_clear()
