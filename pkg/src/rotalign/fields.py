"""Linear 2D vector fields on axis-symmetric domains.

A field is v(x) = A*x for a real 2x2 coefficient matrix A, supported on
a domain that is symmetric under reflection in both coordinate axes
(a centered square or disk) and zero outside it.

Every such field splits uniquely over the four canonical flows

    saddle    a(x) = x1*e1 - x2*e2
    saddle45  b(x) = x2*e1 + x1*e2
    source    c(x) = x1*e1 + x2*e2
    vortex    d(x) = x2*e1 - x1*e2

Under a total rotation (positions and vectors rotated together) the
saddle pair (a, b) rotates by twice the angle while the source/vortex
pair (c, d) is invariant.  That split is what makes rotation detection
by correlation work, so it gets its own value type.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .multivector import Multivector2

__all__ = [
    "SymmetricDomain",
    "LinearField",
    "Decomposition",
    "SampledField",
    "DomainMismatchError",
    "eval_field",
    "decompose",
    "recompose",
    "total_rotate",
    "outer_rotate",
    "inner_rotate",
    "sample",
    "saddle",
    "saddle45",
    "source",
    "vortex",
    "double_winding",
    "write_samples_csv",
]


class DomainMismatchError(ValueError):
    """Raised when an operation mixes fields over different domains."""


@dataclass(frozen=True)
class SymmetricDomain:
    """A centered square (kind='square', size=half side) or disk (kind='disk', size=radius)."""

    kind: str
    size: float

    def __post_init__(self):
        if self.kind not in ("square", "disk"):
            raise ValueError(f"unknown domain kind {self.kind!r}")
        if not (math.isfinite(self.size) and self.size > 0.0):
            raise ValueError(f"domain size must be finite and positive, got {self.size!r}")

    @staticmethod
    def square(half_side: float) -> "SymmetricDomain":
        return SymmetricDomain("square", float(half_side))

    @staticmethod
    def disk(radius: float) -> "SymmetricDomain":
        return SymmetricDomain("disk", float(radius))

    @property
    def bounding_half_side(self) -> float:
        return self.size

    def contains(self, x1: float, x2: float) -> bool:
        if self.kind == "square":
            return abs(x1) <= self.size and abs(x2) <= self.size
        return x1 * x1 + x2 * x2 <= self.size * self.size

    def contains_grid(self, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
        if self.kind == "square":
            return (np.abs(x1) <= self.size) & (np.abs(x2) <= self.size)
        return x1 * x1 + x2 * x2 <= self.size * self.size

    def to_json_dict(self) -> dict:
        key = "l" if self.kind == "square" else "r"
        return {"kind": self.kind, key: self.size}

    @staticmethod
    def from_json_dict(d: dict) -> "SymmetricDomain":
        kind = d["kind"]
        size = d.get("l") if kind == "square" else d.get("r")
        if size is None:
            size = d.get("size")
        return SymmetricDomain(kind, float(size))


UNIT_SQUARE = SymmetricDomain.square(1.0)
UNIT_DISK = SymmetricDomain.disk(1.0)


@dataclass(frozen=True)
class LinearField:
    """v(x) = (a11*x1 + a12*x2)*e1 + (a21*x1 + a22*x2)*e2, zero outside domain."""

    a11: float
    a12: float
    a21: float
    a22: float
    domain: SymmetricDomain = UNIT_SQUARE

    def coefficients(self) -> tuple:
        return (self.a11, self.a12, self.a21, self.a22)

    def matrix(self) -> np.ndarray:
        return np.array([[self.a11, self.a12], [self.a21, self.a22]], dtype=float)

    def is_zero(self) -> bool:
        return self.a11 == 0.0 and self.a12 == 0.0 and self.a21 == 0.0 and self.a22 == 0.0

    def to_json_dict(self) -> dict:
        return {"a11": self.a11, "a12": self.a12, "a21": self.a21, "a22": self.a22,
                "domain": self.domain.to_json_dict()}

    @staticmethod
    def from_json_dict(d: dict) -> "LinearField":
        dom = SymmetricDomain.from_json_dict(d["domain"]) if "domain" in d else UNIT_SQUARE
        return LinearField(float(d["a11"]), float(d["a12"]),
                           float(d["a21"]), float(d["a22"]), dom)


@dataclass(frozen=True)
class Decomposition:
    """Coordinates of a linear field in the (saddle, saddle45, source, vortex) basis."""

    a: float
    b: float
    c: float
    d: float

    def saddle_energy(self) -> float:
        """Squared coefficient length of the rotation-sensitive pair."""
        return self.a * self.a + self.b * self.b

    def invariant_energy(self) -> float:
        """Squared coefficient length of the rotation-invariant pair."""
        return self.c * self.c + self.d * self.d


def saddle(domain: SymmetricDomain = UNIT_SQUARE) -> LinearField:
    return LinearField(1.0, 0.0, 0.0, -1.0, domain)


def saddle45(domain: SymmetricDomain = UNIT_SQUARE) -> LinearField:
    return LinearField(0.0, 1.0, 1.0, 0.0, domain)


def source(domain: SymmetricDomain = UNIT_SQUARE) -> LinearField:
    return LinearField(1.0, 0.0, 0.0, 1.0, domain)


def vortex(domain: SymmetricDomain = UNIT_SQUARE) -> LinearField:
    return LinearField(0.0, 1.0, -1.0, 0.0, domain)


def eval_field(field: LinearField, x: tuple) -> Multivector2:
    """Evaluate the field at x = (x1, x2); zero vector outside the domain."""
    x1, x2 = x
    if not field.domain.contains(x1, x2):
        return Multivector2.vector(0.0, 0.0)
    return Multivector2.vector(field.a11 * x1 + field.a12 * x2,
                               field.a21 * x1 + field.a22 * x2)


def decompose(field: LinearField) -> Decomposition:
    """Coordinates in the canonical basis.

    Matching coefficients of a*saddle + b*saddle45 + c*source + d*vortex
    against the matrix entries gives a11 = a+c, a12 = b+d, a21 = b-d,
    a22 = -a+c, and this is the inverse of that linear map.
    """
    return Decomposition(
        0.5 * (field.a11 - field.a22),
        0.5 * (field.a12 + field.a21),
        0.5 * (field.a11 + field.a22),
        0.5 * (field.a12 - field.a21),
    )


def recompose(dec: Decomposition, domain: SymmetricDomain = UNIT_SQUARE) -> LinearField:
    """Inverse of decompose: build the field a*saddle + b*saddle45 + c*source + d*vortex."""
    return LinearField(dec.a + dec.c, dec.b + dec.d,
                       dec.b - dec.d, -dec.a + dec.c, domain)


def total_rotate(field: LinearField, alpha: float) -> LinearField:
    """Rotate positions and vectors together: u(x) = R(alpha) v(R(-alpha) x).

    In matrix form A' = R(alpha) A R(alpha)^T.  The domain is unchanged
    (it is rotation-symmetric only for disks, but reflection symmetry in
    both axes is all the correlation identities need, and the square is
    re-used as the support of the rotated field by convention).
    """
    c = math.cos(alpha)
    s = math.sin(alpha)
    a11, a12, a21, a22 = field.coefficients()
    r11 = c * a11 - s * a21
    r12 = c * a12 - s * a22
    r21 = s * a11 + c * a21
    r22 = s * a12 + c * a22
    return LinearField(
        r11 * c - r12 * s,
        r11 * s + r12 * c,
        r21 * c - r22 * s,
        r21 * s + r22 * c,
        field.domain,
    )


def outer_rotate(field: LinearField, alpha: float) -> LinearField:
    """Rotate vectors only: u(x) = R(alpha) v(x), i.e. A' = R(alpha) A."""
    c = math.cos(alpha)
    s = math.sin(alpha)
    a11, a12, a21, a22 = field.coefficients()
    return LinearField(c * a11 - s * a21, c * a12 - s * a22,
                       s * a11 + c * a21, s * a12 + c * a22, field.domain)


def inner_rotate(field: LinearField, alpha: float) -> LinearField:
    """Rotate positions only: u(x) = v(R(-alpha) x), i.e. A' = A R(alpha)^T."""
    c = math.cos(alpha)
    s = math.sin(alpha)
    a11, a12, a21, a22 = field.coefficients()
    return LinearField(a11 * c - a12 * s, a11 * s + a12 * c,
                       a21 * c - a22 * s, a21 * s + a22 * c, field.domain)


@dataclass(frozen=True)
class SampledField:
    """Cell-center samples of a field over its domain's bounding square.

    values[iy, ix] holds (v1, v2) at (centers[ix], centers[iy]); the
    row-major flattening therefore walks x1 fastest.  Cells whose center
    falls outside the domain are masked out and hold the zero vector.
    """

    n: int
    domain: SymmetricDomain
    values: np.ndarray  # shape (n, n, 2)
    mask: np.ndarray    # shape (n, n), bool

    @property
    def cell_area(self) -> float:
        h = 2.0 * self.domain.bounding_half_side / self.n
        return h * h

    def centers(self) -> np.ndarray:
        length = self.domain.bounding_half_side
        h = 2.0 * length / self.n
        return -length + (np.arange(self.n) + 0.5) * h

    def compatible_with(self, other: "SampledField") -> bool:
        return (self.n == other.n and self.domain == other.domain
                and bool(np.array_equal(self.mask, other.mask)))


FieldLike = Union[LinearField, Callable]


def sample(field: FieldLike, n: int, domain: SymmetricDomain | None = None) -> SampledField:
    """Sample a LinearField or an analytic closure on an n x n cell-center grid.

    Closures are called as f(x1, x2) -> (v1, v2); array arguments are
    tried first so numpy-written closures evaluate in one call, with a
    per-cell fallback for plain scalar closures.
    """
    if n < 2:
        raise ValueError(f"grid resolution must be at least 2, got {n}")
    if isinstance(field, LinearField):
        if domain is not None and domain != field.domain:
            raise DomainMismatchError("explicit domain disagrees with the field's own")
        domain = field.domain
    elif domain is None:
        raise ValueError("sampling a closure needs an explicit domain")

    length = domain.bounding_half_side
    h = 2.0 * length / n
    centers = -length + (np.arange(n) + 0.5) * h
    x1, x2 = np.meshgrid(centers, centers, indexing="xy")
    mask = domain.contains_grid(x1, x2)

    values = np.zeros((n, n, 2), dtype=float)
    if isinstance(field, LinearField):
        values[:, :, 0] = field.a11 * x1 + field.a12 * x2
        values[:, :, 1] = field.a21 * x1 + field.a22 * x2
    else:
        try:
            v1, v2 = field(x1, x2)
            values[:, :, 0] = np.broadcast_to(v1, (n, n))
            values[:, :, 1] = np.broadcast_to(v2, (n, n))
        except (TypeError, ValueError):
            for iy in range(n):
                for ix in range(n):
                    v1, v2 = field(centers[ix], centers[iy])
                    values[iy, ix, 0] = v1
                    values[iy, ix, 1] = v2
    values[~mask] = 0.0
    return SampledField(n, domain, values, mask)


def double_winding(alpha: float = 0.0) -> Callable:
    """The unit-disk flow whose vectors wind twice per revolution.

    In polar coordinates the value at angle phi is the unit vector at
    angle 2*phi - alpha.  With alpha = 0 this is the classic pattern on
    which correlation-based alignment always reports the negated offset,
    so the naive rotate-back iteration diverges; its totally rotated
    copy by alpha is the same family with the alpha term above.
    """

    def f(x1, x2):
        theta = 2.0 * np.arctan2(x2, x1) - alpha
        return np.cos(theta), np.sin(theta)

    return f


def write_samples_csv(sampled: SampledField, path: str) -> None:
    """Write `x1,x2,v1,v2,inside` rows, row-major with x1 fastest."""
    centers = sampled.centers()
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["x1", "x2", "v1", "v2", "inside"])
        for iy in range(sampled.n):
            for ix in range(sampled.n):
                writer.writerow([
                    repr(float(centers[ix])),
                    repr(float(centers[iy])),
                    repr(float(sampled.values[iy, ix, 0])),
                    repr(float(sampled.values[iy, ix, 1])),
                    int(sampled.mask[iy, ix]),
                ])
