"""Christoffel symbols and covariant derivatives of jet-valued tensors."""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from biconf.core.errors import ValenceMismatch
from biconf.geometry.metric import MetricEval
from biconf.jets import Jet, einsum

_LETTERS = "abcdefgh"


@dataclass(frozen=True, eq=False)
class ConnectionEval:
    """Gamma^a_bc as an order-2 jet; ``d_gamma[a, b, c, e] = d_e Gamma^a_bc``."""

    gamma_jet: Jet

    @property
    def gamma(self) -> np.ndarray:
        return self.gamma_jet.value

    @cached_property
    def d_gamma(self) -> np.ndarray:
        return self.gamma_jet.derivatives(1)

    @cached_property
    def d2_gamma(self) -> np.ndarray:
        return self.gamma_jet.derivatives(2)


def christoffel_jet(g: Jet, ginv: Jet) -> Jet:
    """Gamma^a_bc = 1/2 g^ad (d_b g_dc + d_c g_db - d_d g_bc)."""
    dg = g.grad()
    lowered = einsum("dcb->dbc", dg) + dg - einsum("bcd->dbc", dg)
    return 0.5 * einsum("ad,dbc->abc", ginv, lowered)


def christoffel(m: MetricEval) -> ConnectionEval:
    return ConnectionEval(christoffel_jet(m.g_jet, m.ginv_jet))


def covd(field: Jet, valence: str, gamma: Jet) -> Jet:
    """Covariant derivative with the derivative index placed first.

    ``valence`` has one letter per tensor index: ``u`` (up) or ``d`` (down).
    Works for any symmetric connection ``gamma`` (Levi-Civita or not).
    """
    if len(valence) != field.ndim or set(valence) - {"u", "d"}:
        raise ValenceMismatch(f"valence {valence!r} does not fit a rank-{field.ndim} field")
    letters = _LETTERS[: field.ndim]
    result = einsum(f"{letters}x->x{letters}", field.grad())
    for i, kind in enumerate(valence):
        replaced = letters[:i] + "y" + letters[i + 1 :]
        if kind == "u":
            result = result + einsum(f"{letters[i]}xy,{replaced}->x{letters}", gamma, field)
        else:
            result = result - einsum(f"yx{letters[i]},{replaced}->x{letters}", gamma, field)
    return result
