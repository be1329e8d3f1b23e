"""Cubic phases x^2 t + y t^2 and (ax+by) t^2 + (cx+dy)^2 t.

The general form reduces to the canonical one under the linear change
(X, Y) = (cx + dy, ax + by).
"""
from dataclasses import dataclass

import numpy as np

from .errors import SingularMatrix

DET_TOL = 1e-12


@dataclass(frozen=True)
class Phase:
    form: str = "canonical"
    coeffs: tuple = None

    def __post_init__(self):
        if self.form == "canonical":
            if self.coeffs is not None:
                raise ValueError("canonical phase takes no coefficients")
        elif self.form == "general":
            if self.coeffs is None or len(self.coeffs) != 4:
                raise ValueError("general phase needs coefficients (a, b, c, d)")
            object.__setattr__(self, "coeffs", tuple(float(v) for v in self.coeffs))
            if abs(self.det) < DET_TOL:
                raise SingularMatrix(f"ad - bc = {self.det:g} for coefficients {self.coeffs}")
        else:
            raise ValueError(f"unknown phase form {self.form!r}")

    @classmethod
    def canonical(cls):
        return cls("canonical")

    @classmethod
    def general(cls, a, b, c, d):
        return cls("general", (a, b, c, d))

    @property
    def is_canonical(self):
        return self.form == "canonical"

    @property
    def det(self):
        a, b, c, d = self.coeffs
        return a * d - b * c

    def coefficients(self, x, y):
        """Return (lin, quad) with S(x, y, t) = lin * t + quad * t**2."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if self.is_canonical:
            return x * x, y + 0.0 * x
        a, b, c, d = self.coeffs
        X = c * x + d * y
        return X * X, a * x + b * y


def eval_phase(phase, x, y, t):
    """S(x, y, t) for either form; broadcasts over array inputs."""
    if phase.is_canonical:
        return x * x * t + y * t * t
    a, b, c, d = phase.coeffs
    return (a * x + b * y) * t * t + (c * x + d * y) ** 2 * t


@dataclass(frozen=True)
class LinearChange:
    matrix: np.ndarray
    inverse: np.ndarray

    def __call__(self, x, y):
        m = self.matrix
        return m[0, 0] * x + m[0, 1] * y, m[1, 0] * x + m[1, 1] * y

    def invert(self, X, Y):
        m = self.inverse
        return m[0, 0] * X + m[0, 1] * Y, m[1, 0] * X + m[1, 1] * Y


def reduce_general(phase):
    """Map a nonsingular general phase to the canonical one.

    Returns ``(change, Phase.canonical())`` such that
    ``eval_phase(phase, x, y, t) == eval_phase(canonical, *change(x, y), t)``.
    """
    if phase.is_canonical:
        raise ValueError("phase is already canonical")
    a, b, c, d = phase.coeffs
    det = a * d - b * c
    if abs(det) < DET_TOL:
        raise SingularMatrix(f"ad - bc = {det:g}")
    matrix = np.array([[c, d], [a, b]], dtype=float)
    # inverse of [[c, d], [a, b]], whose determinant is cb - da = -det
    inverse = np.array([[b, -d], [-a, c]], dtype=float) / (-det)
    return LinearChange(matrix, inverse), Phase.canonical()
