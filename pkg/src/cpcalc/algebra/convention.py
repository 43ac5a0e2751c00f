"""Weight conventions for the abbreviated q-weighted sums."""
from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass

__all__ = ["Convention", "ConventionError", "DEFAULT_CONVENTION"]


class ConventionError(ValueError):
    def __init__(self, message: str, matrix: list | None = None):
        super().__init__(message)
        self.matrix = matrix or []


@dataclass(frozen=True)
class Convention:
    """q-power laws, each meaning ``q^(exponent * index)``.

    The first three fields are decided by ``resolve_convention``; the rest
    are fixed readings of the term recipes, each checked by a covariance
    test in the test suite.
    """

    sum_left: int = -2  # sum_j q^(sum_left*j) x_ij x_jk, also inside Y
    sum_right: int = 0  # trace relation sum_i q^(sum_right*i) x_ii = 1
    delta: int = 2  # delta_ij q^(delta*j) terms
    invariant_form: int = -2  # H = sum q^(invariant_form*j) x_ij dx_ji
    twist: int = 2  # weight on the inner index of the K-tensor
    crossing: int = 2  # weight on the inner index of the a8 term
    middle: str = "Rm"  # middle R factor of the a4/b4 terms: "Rm" or "R"
    implied_factor: int = -2  # sum_j q^(sum_left*j) x_ij x_jk = q^implied_factor x_ik

    def as_dict(self) -> dict:
        return asdict(self)

    def fingerprint(self) -> str:
        blob = json.dumps(self.as_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    @classmethod
    def from_dict(cls, d: dict) -> "Convention":
        return cls(**d)


DEFAULT_CONVENTION = Convention()
