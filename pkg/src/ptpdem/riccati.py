"""Shared Riccati engine: phi' = p(x) + q(x) phi + r(x) phi^2 on a symmetric grid.

Riccati equations generically develop poles, and the bounded solutions of the
equations in this package are *separatrices*: they repel neighbouring
trajectories going outward, so naive outward marching loses them at a rate
exp(integral (q + 2 r phi)).  The engine therefore works on the linearized
form.  Substituting phi = -w'/(r w) turns the Riccati equation into the
linear second-order ODE

    w'' = (q + r'/r) w' - p r w,

in which poles of phi are benign zeros of w and the separatrix is simply the
dominant solution direction when integrating *inward* from outside the domain.

Two routes:

* capture (route A): integrate inward from +-(L + pad).  Any generic starting
  condition converges projectively onto the outward-repelling trajectory; the
  result is accepted only if both half-line captures land on the requested
  initial value at x=0 within ``match_tol``.
* shoot (route B): integrate outward from x=0 with w(0)=1, w'(0) = -r(0) ic,
  which honors the initial condition exactly and is stable precisely in the
  cases capture rejects (outward-attracting trajectories).

Poles inside the sampled span -- sign changes of w between recorded nodes,
or a node value exceeding ``pole_cap`` -- raise PoleDetected on either
route (capture treats it as a failed capture and falls through to shoot).

The integrator is a Dormand-Prince 4(5) pair with absolute/relative
tolerances 1e-12/1e-10, maximum step equal to the grid spacing, and
renormalization of (w, w') at every node (the equation is linear, so scale is
gauge).
"""

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, PoleDetected, ValidationError

__all__ = ["RiccatiSolution", "RiccatiCoefficients", "solve_riccati"]

POLE_CAP = 1e8
MATCH_TOL = 1e-7
PAD = 3.0
RK_ATOL = 1e-12
RK_RTOL = 1e-10


@dataclass(frozen=True)
class RiccatiSolution:
    """A superpotential-type field with its solve metadata.

    field_samples : solution at the grid nodes
    mu            : integration constant of the underlying equation (0.0 when
                    the equation has none)
    ic_value      : requested value at x=0 (the artifact's gauge choice)
    residual_norm : max abs residual of the *printed* form of the equation
                    over interior nodes, from 4th-order differences
    route         : "capture" or "shoot" (which integration route produced it)
    """

    field_samples: np.ndarray
    mu: float
    ic_value: float
    residual_norm: float
    route: str = "shoot"


@dataclass(frozen=True)
class RiccatiCoefficients:
    """Callables p, q, r, r_prime of the canonical form; r must not vanish."""

    p: callable
    q: callable
    r: callable
    r_prime: callable


# Dormand-Prince 4(5) tableau.
_DP_C = (0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0)
_DP_A = (
    (),
    (1.0 / 5.0,),
    (3.0 / 40.0, 9.0 / 40.0),
    (44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0),
    (19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0),
    (9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0,
     -5103.0 / 18656.0),
    (35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0,
     11.0 / 84.0),
)
_DP_B5 = (35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0,
          11.0 / 84.0, 0.0)
_DP_B4 = (5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0,
          -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0)


def _phi_at(coeffs, x, w, wp, cap):
    r = coeffs.r(x)
    denominator = r * w
    if denominator == 0.0 or not np.isfinite(denominator):
        return np.inf
    phi = -wp / denominator
    return phi if np.isfinite(phi) and abs(phi) <= cap else np.inf


def _record_along(coeffs, x_start, w, wp, record_xs, h_max, atol, rtol, cap,
                  track_sign_from_start=False):
    """Integrate from x_start through record_xs in order, sampling phi.

    One continuous adaptive march: the step size carries across the record
    targets (steps are merely clipped to land on them), and (w, w') is
    renormalized at every target -- the equation is linear, so scale is
    gauge and the stage derivative rescales with the state.

    The stage abscissae of one step depend only on (x, h), so the four
    coefficient fields are evaluated once per attempted step as 7-vectors
    instead of scalar-by-scalar inside the stage loop.

    Poles of phi are zeros of w, which the linear integration crosses
    smoothly; they are detected as sign changes of w between consecutive
    recorded nodes (or |phi| > cap at a node) and raise PoleDetected.  With
    ``track_sign_from_start`` false, tracking begins at the first recorded
    node, so zeros before entering the recorded span (e.g. in a capture pad
    outside the domain) are not poles.
    """
    c_offsets = np.asarray(_DP_C)

    def stage_fields(x, h):
        xs = x + c_offsets * h
        r = np.asarray(coeffs.r(xs), dtype=float)
        damp = np.asarray(coeffs.q(xs), dtype=float) \
            + np.asarray(coeffs.r_prime(xs), dtype=float) / r
        spring = np.asarray(coeffs.p(xs), dtype=float) * r
        return damp.tolist(), spring.tolist()

    out = np.empty(len(record_xs))
    n_targets = len(record_xs)
    idx = 0
    x = float(x_start)
    w = float(w)
    wp = float(wp)
    direction = 1.0 if record_xs[-1] >= x_start else -1.0
    span = max(abs(record_xs[-1] - x_start), h_max)
    h = direction * h_max
    k = [None] * 7
    last_sign = (1.0 if w > 0 else -1.0) if track_sign_from_start else None
    last_sign_x = x
    while idx < n_targets:
        target = float(record_xs[idx])
        if (target - x) * direction <= 0.0:
            # already at (or past by rounding) the target: record and advance
            x = target
            sample = _phi_at(coeffs, x, w, wp, cap)
            if not np.isfinite(sample):
                raise PoleDetected(
                    f"|phi| exceeded {cap:g} at x = {x:.6g}", x=x)
            sign = 1.0 if w > 0 else (-1.0 if w < 0 else 0.0)
            if last_sign is not None and sign * last_sign < 0.0:
                raise PoleDetected(
                    "pole of phi (zero of the linearized solution) between "
                    f"x = {last_sign_x:.6g} and x = {x:.6g}", x=x)
            if sign != 0.0:
                last_sign = sign
                last_sign_x = x
            out[idx] = sample
            big = max(abs(w), abs(wp))
            if not (big > 0.0 and np.isfinite(big)):
                raise NumericalError("linearized Riccati state degenerated")
            w /= big
            wp /= big
            if k[0] is not None:
                k[0] = (k[0][0] / big, k[0][1] / big)
            idx += 1
            continue
        h_try = h
        clipped = False
        if (x + h_try - target) * direction >= 0.0:
            h_try = target - x
            clipped = True
        damp, spring = stage_fields(x, h_try)
        if k[0] is None:  # fresh start: stage 0 sits at x itself
            k[0] = (wp, damp[0] * wp - spring[0] * w)
        for i in range(1, 7):
            aw = w
            awp = wp
            for j, a in enumerate(_DP_A[i]):
                aw += h_try * a * k[j][0]
                awp += h_try * a * k[j][1]
            k[i] = (awp, damp[i] * awp - spring[i] * aw)
        w5 = w
        wp5 = wp
        ew = 0.0
        ewp = 0.0
        for i in range(7):
            w5 += h_try * _DP_B5[i] * k[i][0]
            wp5 += h_try * _DP_B5[i] * k[i][1]
            ew += h_try * (_DP_B5[i] - _DP_B4[i]) * k[i][0]
            ewp += h_try * (_DP_B5[i] - _DP_B4[i]) * k[i][1]
        scale_w = atol + rtol * max(abs(w), abs(w5))
        scale_wp = atol + rtol * max(abs(wp), abs(wp5))
        err = max(abs(ew) / scale_w, abs(ewp) / scale_wp)
        if err <= 1.0:
            x = target if clipped else x + h_try
            w, wp = w5, wp5
            if not (np.isfinite(w) and np.isfinite(wp)):
                raise NumericalError("linearized Riccati integration overflowed")
            k[0] = k[6]  # first-same-as-last
            factor = 5.0 if err == 0.0 else min(5.0, 0.9 * err ** -0.2)
        else:
            factor = max(0.2, 0.9 * err ** -0.2)
        h = direction * min(h_max, abs(h_try) * factor)
        if abs(h) < 1e-14 * span and err > 1.0:
            raise NumericalError("step size underflow in Riccati integration")
    return out


def _coeffs_evaluable(coeffs, lo, hi, n=17):
    xs = np.linspace(lo, hi, n)
    try:
        for x in xs:
            vals = (coeffs.p(x), coeffs.q(x), coeffs.r(x), coeffs.r_prime(x))
            if not all(np.isfinite(v) for v in vals):
                return False
            if vals[2] == 0.0:
                return False
    except (ArithmeticError, ValueError):
        return False
    return True


def _capture_start(coeffs, x):
    """Starting phi for inward capture: the root of the RHS quadratic whose
    linearization decays in the marching direction, else the vertex."""
    p = coeffs.p(x)
    q = coeffs.q(x)
    r = coeffs.r(x)
    disc = q * q - 4.0 * r * p
    if disc >= 0.0:
        root = np.sqrt(disc)
        # inward marching direction is -sign(x); perturbations decay along it
        # when sign(q + 2 r phi) == sign(x), i.e. pick +root on the right
        # half-line and -root on the left.
        sign = 1.0 if x > 0 else -1.0
        return (-q + sign * root) / (2.0 * r)
    return -q / (2.0 * r)


def _capture_half(coeffs, grid, side, pad, h_max, atol, rtol, cap):
    """Inward capture on one half-line; returns phi at nodes ordered 0 -> +-L."""
    x = grid.nodes()
    mid = grid.mid
    if side > 0:
        half_nodes = x[mid:]       # 0 ... L ascending
        outer = grid.L
        start = outer + pad
        if pad > 0 and not _coeffs_evaluable(coeffs, outer, start):
            start = outer
        record = half_nodes[::-1]  # march L+pad -> 0
    else:
        half_nodes = x[: mid + 1]  # -L ... 0 ascending
        outer = -grid.L
        start = outer - pad
        if pad > 0 and not _coeffs_evaluable(coeffs, start, outer):
            start = outer
        record = half_nodes        # march -L-pad -> 0
    phi0 = _capture_start(coeffs, start)
    w = 1.0
    wp = -coeffs.r(start) * phi0 * w
    sampled = _record_along(coeffs, start, w, wp, record, h_max, atol, rtol, cap)
    if side > 0:
        sampled = sampled[::-1]    # back to ascending in x
    return sampled


def _shoot_half(coeffs, grid, side, ic, h_max, atol, rtol, cap):
    x = grid.nodes()
    mid = grid.mid
    record = x[mid + 1:] if side > 0 else x[:mid][::-1]
    w = 1.0
    wp = -coeffs.r(0.0) * ic * w
    sampled = _record_along(coeffs, 0.0, w, wp, record, h_max, atol, rtol, cap,
                            track_sign_from_start=True)
    if side > 0:
        return np.concatenate(([ic], sampled))
    return np.concatenate((sampled[::-1], [ic]))


def solve_riccati(coeffs, grid, ic_value, *, pole_cap=POLE_CAP,
                  match_tol=MATCH_TOL, pad=PAD, atol=RK_ATOL, rtol=RK_RTOL):
    """Solve the canonical Riccati equation on the grid.

    Returns (samples, route).  Residual evaluation and packaging into
    RiccatiSolution are left to the caller, which knows the printed form of
    its equation.
    """
    if not np.isfinite(ic_value):
        raise ValidationError("Riccati initial value must be finite")
    h_max = grid.h

    captured = None
    try:
        right = _capture_half(coeffs, grid, +1, pad, h_max, atol, rtol, pole_cap)
        left = _capture_half(coeffs, grid, -1, pad, h_max, atol, rtol, pole_cap)
        if (np.all(np.isfinite(right)) and np.all(np.isfinite(left))
                and abs(right[0] - ic_value) <= match_tol
                and abs(left[-1] - ic_value) <= match_tol):
            mid_val = 0.5 * (right[0] + left[-1])
            captured = np.concatenate((left[:-1], [mid_val], right[1:]))
    except NumericalError:
        captured = None
    if captured is not None:
        return captured, "capture"

    right = _shoot_half(coeffs, grid, +1, ic_value, h_max, atol, rtol, pole_cap)
    left = _shoot_half(coeffs, grid, -1, ic_value, h_max, atol, rtol, pole_cap)
    samples = np.concatenate((left[:-1], right))
    return samples, "shoot"
