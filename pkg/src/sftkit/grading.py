"""Index, degree and parity evaluators.

Conley-Zehnder indices are always inputs here; nothing is computed from a
linearised flow.  Parity is kept separate from the (possibly fractional)
degree and is never derived from it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

from .errors import RangeError, ValidationError
from .superpoly import as_scalar


@dataclass(frozen=True)
class OrbitGradingData:
    cz: int
    multiplicity: int = 1
    return_map_neg_eigen_mult: int = 0
    n: int = 2

    def __post_init__(self):
        if self.multiplicity < 1:
            raise ValidationError("multiplicity must be positive")
        if self.return_map_neg_eigen_mult < 0:
            raise ValidationError("eigenvalue multiplicity must be nonnegative")

    def consistent_with(self, det_sign_of_I_minus_A: int) -> bool:
        return self.cz % 2 == parity_from_return_map(self.n, det_sign_of_I_minus_A)


def moduli_dim(cz_plus: Sequence[int], cz_minus: Sequence[int], g: int, r: int, c1_of_A: int, n: int) -> int:
    """Expected dimension of curves with the given positive and negative ends."""
    s = len(cz_plus) + len(cz_minus)
    return sum(cz_plus) - sum(cz_minus) + (n - 3) * (2 - 2 * g - s) + 2 * c1_of_A + 2 * r


def moduli_dim_morse(morse_indices: Sequence[int], g: int, r: int, c1_of_A: int, n: int) -> int:
    """Cotangent-bundle variant: Morse indices in place of CZ, no negative ends."""
    return moduli_dim(morse_indices, (), g, r, c1_of_A, n)


def degrees_pq(cz: int, n: int) -> Tuple[int, int]:
    return -cz + (n - 3), cz + (n - 3)


def bott_degrees(k: int, delta_deg: int, c1_A0, l: int) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
    """(deg p_{k,i}, deg q_{k,i}, deg t_i, deg tau_i) for a class of degree ``delta_deg``.

    tau_i comes from the class one degree up that pushes forward to Delta_i.
    For l > 1 the values are the fractional degrees with c = c1(A0)/l.
    """
    if k <= 0:
        raise RangeError("multiplicity k must be positive")
    if l <= 0:
        raise RangeError("l must be positive")
    c = as_scalar(c1_A0) / l
    d = Fraction(delta_deg)
    return d - 2 - 2 * c * k, d - 2 + 2 * c * k, d - 2, d - 1


def fractional_degree(cz_g: int, maslov_correction_2m: int, l: int) -> Fraction:
    if l <= 0:
        raise RangeError("l must be positive")
    return Fraction(cz_g) - Fraction(maslov_correction_2m, l)


def parity_from_return_map(n: int, det_sign_of_I_minus_A: int) -> int:
    """CZ mod 2 from (-1)^CZ = (-1)^(n-1) sign det(I - A)."""
    if det_sign_of_I_minus_A not in (1, -1):
        raise ValidationError("det(I - A) must be nonzero; pass its sign")
    sign = (-1) ** (n - 1) * det_sign_of_I_minus_A
    return 0 if sign == 1 else 1


def is_bad_even_multiple(data: OrbitGradingData, multiple: int) -> bool:
    """Even multiples of an orbit with an odd count of return-map eigenvalues in (-1, 0) are bad."""
    if multiple < 1:
        raise RangeError("multiple must be positive")
    return multiple % 2 == 0 and data.return_map_neg_eigen_mult % 2 == 1
