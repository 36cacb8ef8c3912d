"""Universal visibility bounds from optimal asymmetric cloning."""

from fractions import Fraction

from src.measurements import Visibility
from src.utils.errors import InvalidInputError


def clone_bound_fraction(d: int, m: int, n: int) -> Fraction:
    """n (d + m) / (m (d + n)) as an exact rational."""
    if d < 2:
        raise InvalidInputError(f"need d >= 2, got d={d}")
    if not 1 <= n <= m:
        raise InvalidInputError(f"need 1 <= n <= m, got m={m}, n={n}")
    return Fraction(n * (d + m), m * (d + n))


def clone_bound(d: int, m: int, n: int) -> Visibility:
    """Every m-setting assemblage on dimension d is n-copy jointly measurable below this visibility."""
    return Visibility(eta=float(clone_bound_fraction(d, m, n)))


def jm_clone_bound(d: int, m: int) -> Visibility:
    """Single-copy case: (m + d) / (m (1 + d)), a floor for the joint measurability visibility."""
    return clone_bound(d, m, 1)
