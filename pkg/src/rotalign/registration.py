"""Iterative detection of the total-rotation offset between two linear fields.

The correlation of a field's totally rotated copy (by angle t) against
the original is

    exp(-2*t*e12) * n1 + n2

where n1 and n2 are the squared L2 norms of the saddle part and the
invariant (source/vortex) part.  Its argument phi always lies between
-2*t and 0, with the opposite sign of t, so rotating the copy by phi
shrinks the offset and the fixed-point iteration

    phi <- arg(correlate(u, v));  u <- total_rotate(u, phi)

drives the offset to zero whenever both n1 and n2 are nonzero.  Two
degenerate families need special handling inside the loop:

* n1 = 0 (pure source/vortex): phi is identically zero.  The field is
  rotation invariant, so any answer is correct; a quarter-turn kick is
  applied once so the loop can prove that to itself.
* n2 = 0 (pure saddle pair): phi = -2t exactly, so the iteration
  reflects the offset instead of shrinking it.  The accumulator
  returning to zero after two steps reveals this case; the true offset
  is then half the last reading.  If the kicked start lands exactly on
  phi = -pi/2 the offset was a multiple of a quarter turn and is pinned
  to pi/2.

Loop equality tests ("accumulator is zero", "phi is -pi/2") are taken
up to ``zero_tol`` because correlation arguments are floating point.
The loop runs on ``abs(phi) > eps``; a plain ``phi > eps`` would stop
on the first negative reading, which is the common case.

Linear fields are closed under total rotation, so the loop updates the
copy exactly (the saddle coefficient pair rotates by 2*phi) instead of
resampling.  ``detect_sampled`` is the grid-backed variant; it
re-interpolates the copy each step and is therefore approximate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional

import numpy as np

from .correlation import correlate_linear, correlate_sampled, field_norms, second_moment
from .fields import (
    Decomposition,
    DomainMismatchError,
    LinearField,
    SampledField,
    decompose,
    recompose,
    total_rotate,
)
from .multivector import wrap_angle

__all__ = [
    "DetectionStatus",
    "DetectorConfig",
    "DetectionResult",
    "TraceEntry",
    "DegenerateZeroFieldError",
    "phi_of_alpha",
    "detect",
    "detect_sampled",
    "oracle_detect",
    "detect_known_pattern",
]

_QUARTER_PI = 0.25 * math.pi
_HALF_PI = 0.5 * math.pi


class DegenerateZeroFieldError(ValueError):
    """Raised when detection is asked to align an identically zero field."""


class DetectionStatus(Enum):
    CONVERGED = "converged"
    MAX_ITER_EXCEEDED = "max_iter_exceeded"
    DEGENERATE_ZERO_FIELD = "degenerate_zero_field"


class TraceEntry(NamedTuple):
    """One loop iteration: reading, raw accumulator after it, branch taken."""

    iteration: int
    phi: float
    alpha_after: float
    branch: Optional[str]


@dataclass(frozen=True)
class DetectorConfig:
    """Stopping accuracy eps, iteration cap, and branch equality tolerance."""

    eps: float = 1e-6
    max_iter: int = 10000
    zero_tol: float = 1e-9

    def __post_init__(self):
        if not self.eps > 0.0:
            raise ValueError(f"eps must be positive, got {self.eps!r}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be at least 1, got {self.max_iter!r}")
        if not 0.0 <= self.zero_tol < self.eps:
            raise ValueError("zero_tol must be nonnegative and below eps")


@dataclass(frozen=True)
class DetectionResult:
    """Outcome of a detection run.

    ``alpha`` is the misalignment estimate: the angle by which the
    pattern was totally rotated away from the field, wrapped to
    (-pi, pi] and meaningful modulo pi.  It is the negated sum of all
    rotations the loop applied to the pattern.  The trace keeps the raw
    per-iteration readings and the loop's own accumulator (which the
    special-case branches overwrite), unwrapped for debuggability.
    """

    alpha: float
    iterations: int
    trace: tuple
    status: DetectionStatus
    corrected: object  # LinearField or SampledField

    def converged(self) -> bool:
        return self.status is DetectionStatus.CONVERGED


def phi_of_alpha(v: LinearField, alpha: float) -> float:
    """Closed-form correlation argument for the copy rotated by alpha.

    Equals atan2(-sin(2*alpha)*n1, cos(2*alpha)*n1 + n2) with (n1, n2)
    the saddle/invariant squared norms of v.
    """
    n1, n2 = field_norms(v)
    if n1 + n2 == 0.0:
        raise DegenerateZeroFieldError("phi is undefined for the zero field")
    return math.atan2(-math.sin(2.0 * alpha) * n1,
                      math.cos(2.0 * alpha) * n1 + n2)


def detect(v: LinearField, u: LinearField, cfg: DetectorConfig = DetectorConfig(),
           record_trace: bool = True) -> DetectionResult:
    """Recover the total-rotation offset of pattern u against field v.

    The loop runs in decomposition coordinates: the correlation of two
    linear fields over a shared domain has scalar part
    I_A * (au*av + bu*bv + cu*cv + du*dv) and bivector part
    I_A * ((au*bv - bu*av) - (cu*dv - du*cv)), and a total rotation by
    phi turns the (au, bu) pair by 2*phi while fixing (cu, du).  This is
    exactly equivalent to conjugating the coefficient matrix but much
    cheaper per step.
    """
    if v.is_zero():
        raise DegenerateZeroFieldError("cannot align against the zero field")
    if u.domain != v.domain:
        raise DomainMismatchError("detect needs both fields on the same domain")

    moment = second_moment(v.domain)
    dv = decompose(v)
    du = decompose(u)
    av, bv, cv, d_v = dv.a, dv.b, dv.c, dv.d
    au, bu, cu, d_u = du.a, du.b, du.c, du.d

    eps = cfg.eps
    zero_tol = cfg.zero_tol
    max_iter = cfg.max_iter
    atan2 = math.atan2
    cos = math.cos
    sin = math.sin

    phi = math.pi
    alpha_acc = 0.0   # the loop's own accumulator; branches overwrite it
    applied = 0.0     # sum of rotations actually applied to u
    iteration = 0
    exception = False
    trace = [] if record_trace else None
    status = None

    while abs(phi) > eps:
        if iteration == max_iter:
            status = DetectionStatus.MAX_ITER_EXCEEDED
            break
        iteration += 1

        cor_s = moment * (au * av + bu * bv + cu * cv + d_u * d_v)
        cor_b = moment * ((au * bv - bu * av) - (cu * d_v - d_u * cv))
        # atan2(0, 0) == 0: a vanishing correlation reads as angle zero,
        # which hands the degenerate-start cases to the first branch.
        phi = atan2(cor_b, cor_s)
        alpha_acc += phi

        branch = None
        if iteration == 1 and abs(alpha_acc) <= zero_tol:
            # Zero first reading: aligned, rotation invariant, or a pure
            # saddle at a quarter turn.  Kick by pi/4 to disambiguate.
            alpha_acc = phi = _QUARTER_PI
            exception = True
            branch = "perturb"
        elif iteration == 2 and not exception and abs(alpha_acc) <= zero_tol:
            # Two readings cancelled: pure saddle, offset is half the last one.
            phi = 0.5 * phi
            alpha_acc = phi
            branch = "halve"
        elif iteration == 2 and exception and abs(phi + _HALF_PI) <= zero_tol:
            # Kicked pure saddle answered with exactly -pi/2: quarter-turn family.
            alpha_acc = _HALF_PI
            phi = _QUARTER_PI
            branch = "lock"

        c2 = cos(2.0 * phi)
        s2 = sin(2.0 * phi)
        au, bu = au * c2 - bu * s2, au * s2 + bu * c2
        applied += phi

        if record_trace:
            trace.append(TraceEntry(iteration, phi, alpha_acc, branch))

    if status is None:
        status = DetectionStatus.CONVERGED

    corrected = recompose(Decomposition(au, bu, cu, d_u), v.domain)
    return DetectionResult(
        alpha=wrap_angle(-applied),
        iterations=iteration,
        trace=tuple(trace) if record_trace else (),
        status=status,
        corrected=corrected,
    )


def _resample_rotated(original: SampledField, theta: float) -> SampledField:
    """Total-rotate a sampled field by theta via bilinear resampling.

    Values are looked up at the back-rotated positions and then rotated
    forward; positions falling outside the sample grid contribute zero.
    Approximate by nature, unlike the linear-field path.
    """
    n = original.n
    length = original.domain.bounding_half_side
    h = 2.0 * length / n
    centers = original.centers()
    x1, x2 = np.meshgrid(centers, centers, indexing="xy")

    c = math.cos(theta)
    s = math.sin(theta)
    p1 = c * x1 + s * x2   # R(-theta) x
    p2 = -s * x1 + c * x2

    fx = (p1 + length) / h - 0.5
    fy = (p2 + length) / h - 0.5
    ix0 = np.floor(fx).astype(int)
    iy0 = np.floor(fy).astype(int)
    tx = fx - ix0
    ty = fy - iy0

    def gather(iy, ix):
        valid = (ix >= 0) & (ix < n) & (iy >= 0) & (iy < n)
        iyc = np.clip(iy, 0, n - 1)
        ixc = np.clip(ix, 0, n - 1)
        vals = original.values[iyc, ixc, :]
        return np.where(valid[..., None], vals, 0.0)

    interp = ((1 - tx)[..., None] * (1 - ty)[..., None] * gather(iy0, ix0)
              + tx[..., None] * (1 - ty)[..., None] * gather(iy0, ix0 + 1)
              + (1 - tx)[..., None] * ty[..., None] * gather(iy0 + 1, ix0)
              + tx[..., None] * ty[..., None] * gather(iy0 + 1, ix0 + 1))

    rotated = np.empty_like(interp)
    rotated[:, :, 0] = c * interp[:, :, 0] - s * interp[:, :, 1]
    rotated[:, :, 1] = s * interp[:, :, 0] + c * interp[:, :, 1]
    rotated[~original.mask] = 0.0
    return SampledField(n, original.domain, rotated, original.mask)


def detect_sampled(v: SampledField, u: SampledField,
                   cfg: DetectorConfig = DetectorConfig()) -> DetectionResult:
    """Grid-backed detection: same loop, quadrature correlation, resampled copy.

    The copy is always re-interpolated from the original samples at the
    accumulated angle, so interpolation error does not compound.
    """
    if not v.compatible_with(u):
        raise DomainMismatchError("detect_sampled needs matching sampled fields")
    if not np.any(v.values):
        raise DegenerateZeroFieldError("cannot align against the zero field")

    phi = math.pi
    alpha_acc = 0.0
    applied = 0.0
    iteration = 0
    exception = False
    trace = []
    status = None
    current = u

    while abs(phi) > cfg.eps:
        if iteration == cfg.max_iter:
            status = DetectionStatus.MAX_ITER_EXCEEDED
            break
        iteration += 1

        cor = correlate_sampled(current, v)
        phi = math.atan2(cor.value.b, cor.value.s)
        alpha_acc += phi

        branch = None
        if iteration == 1 and abs(alpha_acc) <= cfg.zero_tol:
            alpha_acc = phi = _QUARTER_PI
            exception = True
            branch = "perturb"
        elif iteration == 2 and not exception and abs(alpha_acc) <= cfg.zero_tol:
            phi = 0.5 * phi
            alpha_acc = phi
            branch = "halve"
        elif iteration == 2 and exception and abs(phi + _HALF_PI) <= cfg.zero_tol:
            alpha_acc = _HALF_PI
            phi = _QUARTER_PI
            branch = "lock"

        applied += phi
        current = _resample_rotated(u, applied)
        trace.append(TraceEntry(iteration, phi, alpha_acc, branch))

    if status is None:
        status = DetectionStatus.CONVERGED

    return DetectionResult(
        alpha=wrap_angle(-applied),
        iterations=iteration,
        trace=tuple(trace),
        status=status,
        corrected=current,
    )


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def oracle_detect(v: LinearField, u: LinearField, grid: int = 20001) -> float:
    """Brute-force ground truth for the offset, independent of correlation.

    Scans a uniform grid of candidate angles on (-pi/2, pi/2], scoring
    each by the Frobenius distance between v and the candidate's
    back-rotated copy of u (built by matrix conjugation), then refines
    the best cell with golden-section search down to 1e-10.
    """
    v_mat = v.matrix()
    a11, a12, a21, a22 = u.coefficients()

    step = math.pi / grid
    thetas = -0.5 * math.pi + step * np.arange(1, grid + 1)
    c = np.cos(thetas)
    s = np.sin(thetas)
    # A' = R(-theta) A R(-theta)^T
    r11 = c * a11 + s * a21
    r12 = c * a12 + s * a22
    r21 = -s * a11 + c * a21
    r22 = -s * a12 + c * a22
    b11 = r11 * c + r12 * s
    b12 = -r11 * s + r12 * c
    b21 = r21 * c + r22 * s
    b22 = -r21 * s + r22 * c
    dist_sq = ((b11 - v_mat[0, 0]) ** 2 + (b12 - v_mat[0, 1]) ** 2
               + (b21 - v_mat[1, 0]) ** 2 + (b22 - v_mat[1, 1]) ** 2)
    best = int(np.argmin(dist_sq))

    def dist(theta: float) -> float:
        m = total_rotate(u, -theta).matrix() - v_mat
        return float(np.sum(m * m))

    lo = thetas[best] - step
    hi = thetas[best] + step
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1 = dist(x1)
    f2 = dist(x2)
    while hi - lo > 1e-10:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = dist(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = dist(x2)
    return 0.5 * (lo + hi)


def detect_known_pattern(pattern_saddle: LinearField, field: LinearField) -> float:
    """One-shot offset recovery when the pattern's saddle part is known.

    Correlating the rotated field against the pattern's saddle part
    alone yields exp(-2*alpha*e12) times a positive norm (the invariant
    part of the field drops out over the symmetric domain), so the
    offset is minus half the correlation argument.
    """
    dec = decompose(pattern_saddle)
    if dec.saddle_energy() == 0.0:
        raise DegenerateZeroFieldError(
            "known-pattern detection needs a nonzero saddle part")
    if field.domain != pattern_saddle.domain:
        raise DomainMismatchError("pattern and field must share a domain")
    saddle_only = recompose(Decomposition(dec.a, dec.b, 0.0, 0.0),
                            pattern_saddle.domain)
    cor = correlate_linear(field, saddle_only)
    return -0.5 * math.atan2(cor.value.b, cor.value.s)
