"""Lie derivatives along jet-valued vector fields."""

from biconf.core.errors import ValenceMismatch
from biconf.jets import Jet, einsum

_LETTERS = "abcdefgh"


def lie_derivative(field: Jet, valence: str, xi: Jet) -> Jet:
    """L_xi T from coordinate partials only.

    ``valence`` has one letter per tensor index, ``u`` (up) or ``d`` (down).
    The result is one jet order below the lower of ``field`` and ``xi``.
    """
    if len(valence) != field.ndim or set(valence) - {"u", "d"}:
        raise ValenceMismatch(f"valence {valence!r} does not fit a rank-{field.ndim} field")
    if xi.ndim != 1:
        raise ValenceMismatch(f"xi must be a vector field, got shape {xi.shape}")
    letters = _LETTERS[: field.ndim]
    dxi = xi.grad()  # [a, c] = d_c xi^a
    result = einsum(f"x,{letters}x->{letters}", xi, field.grad())
    for i, kind in enumerate(valence):
        replaced = letters[:i] + "y" + letters[i + 1 :]
        if kind == "u":
            result = result - einsum(f"{letters[i]}y,{replaced}->{letters}", dxi, field)
        else:
            result = result + einsum(f"y{letters[i]},{replaced}->{letters}", dxi, field)
    return result


def lie_derivative_connection(gamma: Jet, xi: Jet) -> Jet:
    """Non-tensorial Lie derivative of connection coefficients Gamma^a_bc.

    L_xi G^a_bc = xi^d d_d G^a_bc - G^d_bc d_d xi^a + G^a_dc d_b xi^d
                  + G^a_bd d_c xi^d + d_b d_c xi^a
    """
    dxi = xi.grad()
    d2xi = dxi.grad()  # [a, b, c] = d_c d_b xi^a
    return (
        einsum("d,abcd->abc", xi, gamma.grad())
        - einsum("dbc,ad->abc", gamma, dxi)
        + einsum("adc,db->abc", gamma, dxi)
        + einsum("abd,dc->abc", gamma, dxi)
        + d2xi
    )
