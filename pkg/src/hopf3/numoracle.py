"""Floating-point cross check of the symbolic constants.

Integrates the canonical system with an adaptive Dormand-Prince 5(4) pair,
measures the return-map displacement on the half-plane section
{y = 0, x > 0}, and compares sign and leading order against the first
nonvanishing Lyapunov constant through l_k = pi * L_k (so a positive L_k
means an outward spiral with displacement ~ pi * L_k * rho^{2k+1}).

Only systems with lambda > 0 are supported: the transverse direction must
contract for orbits to settle toward the center manifold.  The canonical
Rossler instance (lambda < 0) is outside this oracle's reach; its symbolic
results stand alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError
from .sysmodel import HopfSystem

# Dormand-Prince 5(4) tableau: 5th-order propagation, embedded 4th-order error
_DP_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_DP_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_DP_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200,
          187 / 2100, 1 / 40)


def compile_rhs(system):
    """Float right-hand side of a parameter-free canonical system."""
    if system.is_perturbed():
        raise DomainError("pin all parameters before numeric integration",
                          code="unpinned-parameters")
    lam = float(system.lambda_)
    eqs = []
    for poly in (system.p_rhs, system.q_rhs, system.r_rhs):
        eqs.append([
            (j, k, l, float(jet.constant_term()))
            for (j, k, l), jet in sorted(poly.terms.items())
        ])
    px, qx, rx = eqs

    def rhs(state):
        x, y, z = state
        dx, dy, dz = -y, x, -lam * z
        for j, k, l, c in px:
            dx += c * x ** j * y ** k * z ** l
        for j, k, l, c in qx:
            dy += c * x ** j * y ** k * z ** l
        for j, k, l, c in rx:
            dz += c * x ** j * y ** k * z ** l
        return dx, dy, dz

    return rhs


@dataclass
class OrbitSample:
    times: list
    states: list
    tolerance: float
    error_estimates: list = field(default_factory=list)
    diverged: bool = False


def _step(rhs, y, h):
    k = []
    for stage in range(7):
        acc = list(y)
        a = _DP_A[stage] if stage else ()
        for i, coeff in enumerate(a):
            if coeff:
                acc = [acc_j + h * coeff * k[i][j] for j, acc_j in enumerate(acc)]
        k.append(rhs(tuple(acc)) if stage else rhs(tuple(y)))
    y5 = [y[j] + h * sum(_DP_B5[i] * k[i][j] for i in range(7)) for j in range(3)]
    y4 = [y[j] + h * sum(_DP_B4[i] * k[i][j] for i in range(7)) for j in range(3)]
    err = math.sqrt(sum((a - b) ** 2 for a, b in zip(y5, y4)))
    return tuple(y5), err


def integrate_orbit(system, x0, t_max, tol=1e-10, record=True, box=1e3):
    """Adaptive trajectory from x0 to t_max; every accepted step satisfies the
    embedded-pair error estimate <= tol."""
    if tol <= 0:
        raise DomainError("tolerance must be positive", code="bad-tolerance")
    rhs = compile_rhs(system)
    t, y = 0.0, tuple(float(v) for v in x0)
    h = min(0.1, t_max)
    sample = OrbitSample([t], [y], tol)
    while t < t_max:
        h = min(h, t_max - t)
        y_new, err = _step(rhs, y, h)
        if err <= tol:
            t += h
            y = y_new
            if record:
                sample.times.append(t)
                sample.states.append(y)
                sample.error_estimates.append(err)
            if max(abs(v) for v in y) > box:
                sample.diverged = True
                return sample
        factor = 0.9 * (tol / err) ** 0.2 if err > 0 else 2.0
        h *= min(4.0, max(0.1, factor))
        if h < 1e-14:
            sample.diverged = True
            return sample
    return sample


def _section_crossings(system, start, tol, max_turns, box=1e3):
    """Yield (x, z) at successive upward crossings of {y = 0, x > 0}."""
    rhs = compile_rhs(system)
    t, y = 0.0, tuple(float(v) for v in start)
    h = 0.05
    t_limit = (max_turns + 2) * 2.5 * math.pi + 5.0
    crossings = 0
    while t < t_limit and crossings < max_turns:
        y_new, err = _step(rhs, y, h)
        if err <= tol:
            if y[1] < 0.0 <= y_new[1] and (y[0] > 0 or y_new[0] > 0):
                # refine the crossing time inside [0, h] by bisection with
                # fixed substeps from the accepted step start
                lo, hi = 0.0, h
                state_lo = y
                for _ in range(60):
                    mid = 0.5 * (lo + hi)
                    state_mid = _advance_fixed(rhs, y, mid)
                    if state_mid[1] < 0.0:
                        lo = mid
                    else:
                        hi = mid
                    if hi - lo < 1e-15:
                        break
                state = _advance_fixed(rhs, y, 0.5 * (lo + hi))
                if state[0] > 0:
                    crossings += 1
                    yield (state[0], state[2])
            t += h
            y = y_new
            if max(abs(v) for v in y) > box:
                raise DomainError("orbit escaped the configured box",
                                  code="orbit-escape")
        factor = 0.9 * (tol / err) ** 0.2 if err > 0 else 2.0
        h *= min(4.0, max(0.1, factor))
        if h < 1e-14:
            raise DomainError("step size underflow", code="divergence")


def _advance_fixed(rhs, y, dt, substeps=16):
    """Classical RK4 with fixed substeps; used only to refine one crossing."""
    if dt == 0.0:
        return y
    h = dt / substeps
    state = y
    for _ in range(substeps):
        k1 = rhs(state)
        k2 = rhs(tuple(s + 0.5 * h * k for s, k in zip(state, k1)))
        k3 = rhs(tuple(s + 0.5 * h * k for s, k in zip(state, k2)))
        k4 = rhs(tuple(s + h * k for s, k in zip(state, k3)))
        state = tuple(
            s + h / 6.0 * (a + 2 * b + 2 * c + d)
            for s, a, b, c, d in zip(state, k1, k2, k3, k4)
        )
    return state


def displacement_estimate(system, rho0, settle_turns=20, tol=1e-10,
                          measure_returns=3):
    """Median return-map displacement after transients have settled.

    Starts at (rho0, 0, 0), discards `settle_turns` returns while the orbit
    relaxes toward the center manifold, then reports the median rho-change
    over the next `measure_returns` returns and the settled radii.
    """
    lam = float(system.lambda_)
    if lam <= 0:
        raise DomainError(
            "displacement oracle needs lambda > 0 (contracting z-direction)",
            code="unsupported-direction",
        )
    radii = []
    total = settle_turns + measure_returns + 1
    for x, _z in _section_crossings(system, (rho0, 0.0, 0.0), tol, total):
        radii.append(x)
    if len(radii) < total:
        raise DomainError("orbit produced too few returns", code="too-few-returns")
    tail = radii[settle_turns:]
    deltas = sorted(b - a for a, b in zip(tail, tail[1:]))
    return deltas[len(deltas) // 2], radii


@dataclass
class FocalEstimate:
    rho0_samples: list
    delta_rho: list
    fitted_order: int
    fitted_sign: int
    fit_residual: float
    noise_floor: float

    def conclusive(self):
        return (
            self.fitted_sign != 0
            and self.fit_residual < 0.35
            and all(abs(d) > self.noise_floor for d in self.delta_rho)
        )


def focal_estimate(system, rho0_samples=(0.05, 0.08, 0.12), settle_turns=20,
                   tol=1e-11):
    """Fit |delta rho| ~ C * rho^(2k+1) over a few radii; sign from agreement."""
    deltas = []
    settled = []
    for rho0 in rho0_samples:
        d, radii = displacement_estimate(system, rho0, settle_turns, tol)
        deltas.append(d)
        settled.append(radii[settle_turns])
    noise = 50.0 * tol
    signs = {(-1 if d < 0 else 1) for d in deltas if abs(d) > noise}
    sign = signs.pop() if len(signs) == 1 else 0
    xs = [math.log(r) for r in settled]
    ys = [math.log(abs(d)) if abs(d) > 0 else math.log(noise / 100) for d in deltas]
    n = len(xs)
    mean_x, mean_y = sum(xs) / n, sum(ys) / n
    sxx = sum((x - mean_x) ** 2 for x in xs)
    slope = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys)) / sxx
    odd = max(3, 2 * round((slope - 1) / 2) + 1)
    resid = abs(slope - odd)
    return FocalEstimate(list(rho0_samples), deltas, int(odd), sign, resid, noise)


def sign_check(system, seq, rho0_samples=(0.05, 0.08, 0.12), settle_turns=20,
               tol=1e-11):
    """Verdict on the agreement between the displacement map and the first
    nonvanishing Lyapunov constant: consistent / inconsistent / inconclusive."""
    lam = float(system.lambda_)
    if lam <= 0:
        raise DomainError("sign check needs lambda > 0", code="unsupported-direction")
    first = seq.first_nonzero()
    est = focal_estimate(system, rho0_samples, settle_turns, tol)
    result = {
        "rho0": list(rho0_samples),
        "delta_rho": est.delta_rho,
        "fitted_order": est.fitted_order,
        "fitted_sign": est.fitted_sign,
        "fit_residual": est.fit_residual,
    }
    if first is None:
        at_noise = all(abs(d) <= est.noise_floor for d in est.delta_rho)
        result["verdict"] = "consistent-with-zero" if at_noise else "inconclusive"
        return result
    k, value = first
    l_sign = 1 if value.constant_term() > 0 else -1
    result["expected_order"] = 2 * k + 1
    result["expected_sign"] = l_sign
    if not est.conclusive():
        result["verdict"] = "inconclusive"
    elif est.fitted_sign == l_sign and est.fitted_order == 2 * k + 1:
        result["verdict"] = "consistent"
    else:
        result["verdict"] = "inconsistent"
    return result


def displacement_csv(system, rho0_samples, settle_turns=20, tol=1e-10):
    """CSV rows: rho0, delta_rho, settle_turns, tol."""
    lines = ["rho0,delta_rho,settle_turns,tol"]
    for rho0 in rho0_samples:
        delta, _ = displacement_estimate(system, rho0, settle_turns, tol)
        lines.append(f"{rho0},{delta!r},{settle_turns},{tol}")
    return "\n".join(lines) + "\n"
