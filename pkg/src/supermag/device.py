"""Single-device physics: hysteretic magnet plus field-tuned superconductor.

The device is a superconducting channel next to a small ferromagnet.  The
magnet's moment m_fm is bistable (+1/-1) and flips only when the field from
the control line exceeds the switching field b_sw.  The channel sees the
external field plus the magnet's stray field; it goes resistive when that
total exceeds the critical field b_cr.  All fields here are the
perpendicular components in tesla, already reduced to scalars; resistance
is in ohm.

Each applied-field sample is flip-then-evaluate: first the magnet responds
(threshold comparisons are strict, so landing exactly on a threshold
changes nothing), then the channel resistance follows from the resulting
total field.  Holding the state needs no field at all -- that is the
non-volatility the logic family builds on.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

from .errors import NoOperatingWindowError, ValidationError


@dataclass(frozen=True)
class DeviceParams:
    """Fields and normal-state resistance characterizing one device.

    b_fm      stray field of the ferromagnet at the channel, T
    b_cr      critical field of the superconducting channel, T
    b_sw      switching field of the ferromagnet, T
    r_normal  channel resistance in the normal state, ohm
    """

    b_fm: float
    b_cr: float
    b_sw: float
    r_normal: float

    def __post_init__(self):
        for name in ("b_fm", "b_cr", "b_sw", "r_normal"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ValidationError(f"{name} must be a positive finite number, got {v!r}")


@dataclass(frozen=True)
class DeviceState:
    """Magnet orientation (+1/-1) and the channel resistance it implies."""

    m_fm: int
    r_sc: float


def _resistance(params: DeviceParams, b_total: float) -> float:
    # Strictly above the critical field the channel is normal; at or below
    # it superconducts.
    return params.r_normal if abs(b_total) > params.b_cr else 0.0


def initial_state(params: DeviceParams, m_fm: int = -1, b_ext: float = 0.0) -> DeviceState:
    """Device state for a given magnet orientation under a given field."""
    if m_fm not in (-1, 1):
        raise ValidationError(f"m_fm must be +1 or -1, got {m_fm!r}")
    return DeviceState(m_fm, _resistance(params, b_ext + m_fm * params.b_fm))


def step_field(state: DeviceState, params: DeviceParams, b_ext: float) -> DeviceState:
    """Apply one field sample and return the new state.

    The magnet flips to sign(b_ext) only when |b_ext| strictly exceeds b_sw
    and it is not already aligned; otherwise it keeps its orientation.  The
    channel resistance is then evaluated at b_ext plus the magnet's stray
    field.
    """
    if not (isinstance(b_ext, (int, float)) and math.isfinite(b_ext)):
        raise ValidationError(f"b_ext must be finite, got {b_ext!r}")
    m = state.m_fm
    if abs(b_ext) > params.b_sw:
        want = 1 if b_ext > 0 else -1
        m = want
    b_total = b_ext + m * params.b_fm
    return DeviceState(m, _resistance(params, b_total))


@dataclass(frozen=True)
class SweepSample:
    """One point of a hysteresis sweep."""

    b_ext: float
    m_fm: int
    b_total: float
    r_sc: float


def hysteresis_sweep(
    params: DeviceParams,
    schedule,
    initial_m: int = -1,
) -> list[SweepSample]:
    """Run a field schedule from a given magnet orientation.

    ``schedule`` is any iterable of b_ext values (use :func:`ramp` for the
    usual up-down sweeps).  Returns one sample per schedule point, taken
    after the flip-then-evaluate update.  The curve is path-dependent:
    sweeping up then down does not retrace itself, which is the butterfly
    the measurement shows.
    """
    if initial_m not in (-1, 1):
        raise ValidationError(f"initial_m must be +1 or -1, got {initial_m!r}")
    state = DeviceState(initial_m, 0.0)
    out = []
    for b in schedule:
        state = step_field(state, params, b)
        out.append(SweepSample(float(b), state.m_fm, b + state.m_fm * params.b_fm, state.r_sc))
    if not out:
        raise ValidationError("field schedule is empty")
    return out


def ramp(*stops: float, step: float = 0.05) -> list[float]:
    """Piecewise-linear field schedule through ``stops``, inclusive.

    Each leg is divided into equal increments no larger than ``step``; the
    exact stop values always appear, so threshold crossings land on clean
    numbers.
    """
    if step <= 0:
        raise ValidationError("step must be positive")
    if len(stops) < 2:
        return [float(s) for s in stops]
    out = [float(stops[0])]
    for a, b in zip(stops, stops[1:]):
        n = max(1, math.ceil(abs(b - a) / step - 1e-12))
        out.extend(a + (b - a) * i / n for i in range(1, n + 1))
    return out


def bias_window(params: DeviceParams) -> tuple[float, float]:
    """Range of static bias fields usable for logic, (low, high).

    The bias must be large enough that the channel can be driven normal
    when the magnet assists (b_bias > b_cr - b_fm) and small enough never
    to flip the magnet on its own (b_bias < b_sw).  An empty range means
    the materials cannot provide both states: NoOperatingWindowError.
    """
    lo = params.b_cr - params.b_fm
    hi = params.b_sw
    if not lo < hi:
        raise NoOperatingWindowError(
            f"empty bias window: b_cr - b_fm = {lo:g} T is not below b_sw = {hi:g} T"
        )
    return (lo, hi)


@dataclass(frozen=True)
class OperatingVerdict:
    """Three independent checks of a candidate bias point."""

    on_state_superconducting: bool   # magnet opposing: channel stays at zero resistance
    off_state_resistive: bool        # magnet assisting: channel goes normal
    fm_undisturbed: bool             # bias alone cannot flip the magnet

    @property
    def ok(self) -> bool:
        return (
            self.on_state_superconducting
            and self.off_state_resistive
            and self.fm_undisturbed
        )


def validate_operating_point(params: DeviceParams, b_bias: float) -> OperatingVerdict:
    """Check one static bias field against all three operating conditions."""
    if not (isinstance(b_bias, (int, float)) and math.isfinite(b_bias)):
        raise ValidationError(f"b_bias must be finite, got {b_bias!r}")
    return OperatingVerdict(
        on_state_superconducting=abs(b_bias - params.b_fm) < params.b_cr,
        off_state_resistive=b_bias + params.b_fm > params.b_cr,
        fm_undisturbed=abs(b_bias) < params.b_sw,
    )


def write_sweep_csv(samples, path_or_file) -> None:
    """Write sweep samples as CSV with columns b_ext,m_fm,b_total,r_sc."""
    if hasattr(path_or_file, "write"):
        _write_sweep_rows(samples, path_or_file)
    else:
        with open(path_or_file, "w", newline="") as fh:
            _write_sweep_rows(samples, fh)


def _write_sweep_rows(samples, fh) -> None:
    w = csv.writer(fh)
    w.writerow(["b_ext", "m_fm", "b_total", "r_sc"])
    for s in samples:
        w.writerow([repr(s.b_ext), s.m_fm, repr(s.b_total), repr(s.r_sc)])
