"""Upper bounds on the dimension of the bi-conformal symmetry algebra."""

from biconf.analysis.reports import DimensionBound
from biconf.core.errors import OutOfRange

BOUND_NOTE = (
    "two bounds are in circulation: the stated count p(p+1)/2 + (n-p)(n-p+1)/2 and "
    "the count its derivation arrives at, (p+1)(p+2)/2 + (n-p+1)(n-p+2)/2; "
    "both are reported and neither is preferred"
)


def dimension_bound(n: int, p: int) -> DimensionBound:
    """Both bound formulas for rank ``p`` in dimension ``n``.

    ``finite`` is false when either leaf has rank 1 or 2, where the algebra
    can be infinite dimensional.
    """
    if not 1 <= p <= n - 1:
        raise OutOfRange(f"rank p={p} must satisfy 1 <= p <= n-1 for n={n}")
    q = n - p
    return DimensionBound(
        n=n,
        p=p,
        n_statement=p * (p + 1) // 2 + q * (q + 1) // 2,
        n_proof=(p + 1) * (p + 2) // 2 + (q + 1) * (q + 2) // 2,
        finite=p not in (1, 2) and q not in (1, 2),
        note=BOUND_NOTE,
    )
