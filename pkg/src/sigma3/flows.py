"""Complex-time integration of systems (I) and (II) with integral monitoring."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .dynsys import G_NAMES, compile_field, compile_integrals, make_system

# Dormand-Prince 5(4) tableau
_C = np.array([0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1, 1])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0])
_B4 = np.array([5179 / 57600, 0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4


class FlowError(RuntimeError):
    """Integration stopped: step-size underflow or non-finite state."""

    def __init__(self, reason: str, s_last: float, time_last: complex, state_last: np.ndarray):
        self.reason = reason
        self.s_last = s_last
        self.time_last = time_last
        self.state_last = state_last
        super().__init__(f"{reason} near s={s_last!r} (t={time_last!r})")


class OffCurvePoint(ValueError):
    pass


class CoincidentX(ValueError):
    pass


State4 = np.ndarray  # shape (4,), complex


def as_state(values: Sequence[complex]) -> State4:
    s = np.asarray([complex(v) for v in values], dtype=complex)
    if s.shape != (4,):
        raise ValueError("a state has exactly four components (G2, G4, G5, G7)")
    if not np.all(np.isfinite(s)):
        raise ValueError("state components must be finite")
    return s


@dataclass
class Sample:
    s: float
    time: complex
    state: State4
    i12: complex
    i14: complex


@dataclass
class Trajectory:
    samples: list[Sample]
    meta: dict = field(default_factory=dict)

    @property
    def final(self) -> Sample:
        return self.samples[-1]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        header = ["s", "time_re", "time_im"]
        for g in G_NAMES + ("I12", "I14"):
            header += [f"{g}_re", f"{g}_im"]
        w.writerow(header)
        for sm in self.samples:
            row = [sm.s, sm.time.real, sm.time.imag]
            for z in list(sm.state) + [sm.i12, sm.i14]:
                row += [z.real, z.imag]
            w.writerow([repr(float(x)) for x in row])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "meta": self.meta,
            "samples": [
                {
                    "s": sm.s,
                    "time": cformat(sm.time),
                    "state": [cformat(z) for z in sm.state],
                    "I12": cformat(sm.i12),
                    "I14": cformat(sm.i14),
                }
                for sm in self.samples
            ],
        }


def cformat(z: complex) -> str:
    """Complex number as "re,im" with shortest round-trip doubles."""
    z = complex(z)
    return f"{z.real!r},{z.imag!r}"


def cparse(text: str) -> complex:
    parts = text.split(",")
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) != 2:
        raise ValueError(f"expected 're,im', got {text!r}")
    return complex(float(parts[0]), float(parts[1]))


def _error_norm(err: np.ndarray, y0: np.ndarray, y1: np.ndarray, rtol: float, atol: float) -> float:
    scale = atol + rtol * np.maximum(np.abs(y0), np.abs(y1))
    return float(np.max(np.abs(err) / scale))


def integrate(system: str, init: Sequence[complex], params: Sequence[complex], t_end: complex,
              rel_tol: float = 1e-10, abs_tol: float = 1e-12, max_step: float = 0.05,
              max_steps: int = 200_000) -> Trajectory:
    """Integrate along time(s) = s * t_end, s in [0, 1], with an adaptive 5(4) pair.

    ``max_step`` is measured in s, so the time step is at most ``max_step * |t_end|``.
    Raises :class:`FlowError` on step-size underflow or non-finite states.
    """
    if rel_tol <= 0 or abs_tol <= 0:
        raise ValueError("tolerances must be positive")
    t_end = complex(t_end)
    if not np.isfinite(t_end):
        raise ValueError("t_end must be finite")
    params = [complex(v) for v in params]
    y = as_state(init)
    field_ = compile_field(make_system(system), params)
    integ = compile_integrals(params)

    def record(s, yv):
        i12, i14 = integ(yv)
        return Sample(float(s), s * t_end, yv.copy(), complex(i12), complex(i14))

    meta = {
        "system": system,
        "params": [cformat(v) for v in params],
        "t_end": cformat(t_end),
        "rel_tol": rel_tol,
        "abs_tol": abs_tol,
        "max_step": max_step,
        "method": "Dormand-Prince 5(4)",
    }
    samples = [record(0.0, y)]
    if t_end == 0:
        meta.update(accepted=0, rejected=0, evaluations=0)
        return Trajectory(samples, meta)

    def f(yv):
        return t_end * field_(yv)

    k0 = f(y)
    nfev = 1
    # starting step (Hairer, Norsett & Wanner heuristic)
    sc = abs_tol + rel_tol * np.abs(y)
    d0, d1 = np.max(np.abs(y) / sc), np.max(np.abs(k0) / sc)
    h = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h = min(h, max_step, 1.0)

    s = 0.0
    accepted = rejected = 0
    h_min = 1e-14
    while s < 1.0:
        if accepted + rejected >= max_steps:
            raise FlowError("step budget exhausted", s, s * t_end, y)
        if h < h_min:
            raise FlowError("step-size underflow (probable blow-up)", s, s * t_end, y)
        last = s + h >= 1.0
        if last:
            h = 1.0 - s
        ks = [k0]
        for i in range(1, 7):
            yi = y + h * sum(a * k for a, k in zip(_A[i], ks) if a)
            ks.append(f(yi))
        nfev += 6
        y_new = y + h * sum(b * k for b, k in zip(_B5, ks) if b)
        err = h * sum(e * k for e, k in zip(_E, ks))
        if not np.all(np.isfinite(y_new)) or not np.all(np.isfinite(err)):
            rejected += 1
            h *= 0.2
            continue
        en = _error_norm(err, y, y_new, rel_tol, abs_tol)
        if en <= 1.0:
            s = 1.0 if last else s + h
            y = y_new
            k0 = ks[6]  # first-same-as-last
            accepted += 1
            samples.append(record(s, y))
            factor = 5.0 if en == 0 else min(5.0, max(0.2, 0.9 * en ** -0.2))
        else:
            rejected += 1
            factor = max(0.2, 0.9 * en ** -0.2)
        h = min(h * factor, max_step)
    meta.update(accepted=accepted, rejected=rejected, evaluations=nfev)
    return Trajectory(samples, meta)


def drift_report(traj: Trajectory) -> tuple[float, float]:
    """Max over samples of |I(s) - I(0)| / max(1, |I(0)|), for I12 and I14."""
    if not traj.samples:
        raise ValueError("empty trajectory")
    a, b = traj.samples[0].i12, traj.samples[0].i14
    d12 = max(abs(sm.i12 - a) for sm in traj.samples) / max(1.0, abs(a))
    d14 = max(abs(sm.i14 - b) for sm in traj.samples) / max(1.0, abs(b))
    return float(d12), float(d14)


def initial_from_curve_points(params: Sequence[complex], P1: tuple[complex, complex],
                              P2: tuple[complex, complex], tol: float = 1e-8) -> State4:
    """The u-map of a pair of curve points; ``params`` are y4..y14 (six values)."""
    from .curvering import CurveParams, u_map

    cp = CurveParams.numeric(params)
    (X1, Y1), (X2, Y2) = [(complex(x), complex(y)) for x, y in (P1, P2)]
    for X, Y in ((X1, Y1), (X2, Y2)):
        q = cp.Q_value(X)
        if abs(Y * Y - q) > tol * max(1.0, abs(q)):
            raise OffCurvePoint(f"point ({X}, {Y}) is not on the curve: Y^2 - Q(X) = {Y * Y - q}")
    if abs(X1 - X2) < 1e-12 * max(1.0, abs(X1)):
        raise CoincidentX("points have coincident X coordinates; u5 is undefined")
    return as_state(u_map(X1, Y1, X2, Y2))


def flow_compose(first: str, a: complex, second: str, b: complex, init, params, **kw) -> State4:
    """Flow ``first`` for time a, then ``second`` for time b."""
    mid = integrate(first, init, params, a, **kw).final.state
    return integrate(second, mid, params, b, **kw).final.state


def trajectory_json(traj: Trajectory, config: dict | None = None) -> str:
    obj = {"schema": "sigma3/v1", "kind": "trajectory", **traj.to_json()}
    if config is not None:
        obj["config"] = config
    return json.dumps(obj, indent=2, sort_keys=True)
