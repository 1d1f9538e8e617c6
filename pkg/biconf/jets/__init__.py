"""Order-3 truncated Taylor jets: the derivative engine behind every tensor."""

from biconf.jets.jet import Jet, jet_lift, jet_partial
from biconf.jets.linalg import einsum, inv, max_abs
from biconf.jets.multiindex import JET_ORDER, jet_size, multi_index_table

__all__ = [
    "JET_ORDER",
    "Jet",
    "einsum",
    "inv",
    "jet_lift",
    "jet_partial",
    "jet_size",
    "max_abs",
    "multi_index_table",
]
