"""Multi-frequency Calderon-Zygmund decomposition and variational operators."""

import json

from ._core import (
    D,
    ParseError,
    be_ratio,
    calV,
    check,
    cz_good_part,
    gram,
    jump_cover,
    read_signal,
    rm_block,
    symbol_variation,
    tilde_variation,
    variation,
)
from ._core import cz_decompose_json as _cz_decompose_json


def cz_decompose(samples, x0, dx, xi, lam):
    """Decomposition summary (intervals and diagnostics) as a dict."""
    return json.loads(_cz_decompose_json(samples, x0, dx, list(xi), lam))


__all__ = [
    "D",
    "ParseError",
    "be_ratio",
    "calV",
    "check",
    "cz_decompose",
    "cz_good_part",
    "gram",
    "jump_cover",
    "read_signal",
    "rm_block",
    "symbol_variation",
    "tilde_variation",
    "variation",
]
