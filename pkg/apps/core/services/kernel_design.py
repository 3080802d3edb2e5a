"""
Hamming-windowed sinc interpolation kernel and the polyphase banks built
from it.

The kernel and its first derivatives are evaluated in closed form (product
rule over sinc x raised cosine); the bank samples them at the half-sample
phase instants of each output block.
"""

# Import future annotations for forward references.
from __future__ import annotations

# Standard library imports
import logging
import math
from collections.abc import Iterator
from functools import lru_cache

# Third-party imports
import numpy as np
from scipy.special import comb

# Domain entities and errors.
from apps.core.entities.experiment import KernelSupport
from apps.core.entities.filters import Kernel, PolyphaseBank
from apps.core.exceptions import ConfigurationError, ShapeMismatchError

logger = logging.getLogger(__name__)

# Window half-width, in input periods, of the literal-support kernel.
LITERAL_SUPPORT_PERIODS = 32

DUMP_HEADER = "# phase order index value"


def make_kernel(
    input_period: float,
    support: KernelSupport | str = KernelSupport.CORRECTED,
    half_window: int = 4,
) -> Kernel:
    """
    Build the interpolation kernel for input period T1.

    The corrected support spans +-k*T1 (+-32*T2 for the 8x chain), which is
    what the 9-sample fit and the 64 non-zero full-rate taps require.
    """
    support = KernelSupport(support)
    periods = half_window if support is KernelSupport.CORRECTED else LITERAL_SUPPORT_PERIODS
    return Kernel(input_period=input_period, half_support=periods * input_period)


# ---------- sinc and window derivatives ----------

@lru_cache(maxsize=None)
def _sinc_series(order: int) -> np.ndarray:
    """Ascending power-series coefficients of d^order/du^order [sin(u)/u]."""
    terms = 30
    coeffs = np.zeros(2 * terms)
    for j in range(terms):
        power = 2 * j - order
        if power >= 0:
            coeffs[power] = (-1) ** j * (
                math.factorial(2 * j) / (math.factorial(power) * math.factorial(2 * j + 1))
            )
    coeffs.setflags(write=False)
    return coeffs


def _sin_derivative(u: np.ndarray, order: int) -> np.ndarray:
    phase = order % 4
    if phase == 0:
        return np.sin(u)
    if phase == 1:
        return np.cos(u)
    if phase == 2:
        return -np.sin(u)
    return -np.cos(u)


def _sinc_derivative(u: np.ndarray, order: int) -> np.ndarray:
    """
    d^order/du^order [sin(u)/u].

    Away from the origin the identity u*g(u) = sin(u) gives the recurrence
    g^(n) = (sin^(n)(u) - n*g^(n-1)) / u; near it the Taylor series is used
    since the recurrence cancels catastrophically.
    """
    out = np.empty_like(u)
    radius = max(1.0, float(order))
    small = np.abs(u) < radius
    if small.any():
        out[small] = np.polynomial.polynomial.polyval(u[small], _sinc_series(order))
    large = ~small
    if large.any():
        v = u[large]
        value = np.sin(v) / v
        for n in range(1, order + 1):
            value = (_sin_derivative(v, n) - n * value) / v
        out[large] = value
    return out


def _window_derivative(kernel: Kernel, t: np.ndarray, order: int) -> np.ndarray:
    omega = math.pi / kernel.half_support
    if order == 0:
        return kernel.window_a + kernel.window_b * np.cos(omega * t)
    # d^n/dt^n cos(w t) = w^n cos^(n)(w t), and cos^(n) = sin^(n+1)
    return kernel.window_b * omega**order * _sin_derivative(omega * t, order + 1)


# ---------- kernel evaluation ----------

def eval_kernel(kernel: Kernel, t: float | np.ndarray, order: int = 0) -> float | np.ndarray:
    """
    Closed-form value of f^(order)(t); exactly zero for |t| >= half support.

    Accepts a scalar or an array of times (seconds) and returns the same shape.
    """
    if isinstance(order, bool) or not isinstance(order, (int, np.integer)):
        raise ConfigurationError(f"derivative order must be an integer, got {order!r}")
    if not 0 <= order <= kernel.max_order:
        raise ConfigurationError(f"derivative order {order} outside 0..{kernel.max_order}")
    times = np.asarray(t, dtype=np.float64)
    if not np.all(np.isfinite(times)):
        raise ConfigurationError("kernel evaluated at a non-finite time")

    flat = np.atleast_1d(times).ravel()
    result = np.zeros_like(flat)
    inside = np.abs(flat) < kernel.half_support
    if inside.any():
        ti = flat[inside]
        rate = math.pi / kernel.input_period
        u = rate * ti
        total = np.zeros_like(ti)
        # Leibniz rule over sinc(t/T1) * window(t)
        for j in range(order + 1):
            sinc_part = rate**j * _sinc_derivative(u, j)
            total += comb(order, j, exact=True) * sinc_part * _window_derivative(kernel, ti, order - j)
        result[inside] = total

    if times.ndim == 0:
        return float(result[0])
    return result.reshape(times.shape)


def derivative_scales(output_period: float, orders: int) -> np.ndarray:
    """(T2/2)^l / l! for l = 0..orders: 1, T2/2, T2^2/8, T2^3/48, ..."""
    return np.array(
        [(output_period / 2.0) ** l / math.factorial(l) for l in range(orders + 1)]
    )


# ---------- polyphase bank ----------

def phase_offsets(input_period: float, upsampling_factor: int) -> np.ndarray:
    """Output instants (2p - (Lup-1)) * T2/2 of one block, relative to its centre sample."""
    t2 = input_period / upsampling_factor
    return (2 * np.arange(upsampling_factor) - (upsampling_factor - 1)) * t2 / 2.0


def reciprocal_derivatives(derivatives: np.ndarray) -> np.ndarray:
    """
    Derivatives of q = 1/D from those of D (last axis is the order).

    From D * q = 1: q_l = -(sum_{m=1..l} C(l,m) D_m q_{l-m}) / D_0.
    """
    d = np.asarray(derivatives, dtype=np.float64)
    q = np.zeros_like(d)
    q[..., 0] = 1.0 / d[..., 0]
    for l in range(1, d.shape[-1]):
        acc = np.zeros_like(d[..., 0])
        for m in range(1, l + 1):
            acc = acc + comb(l, m, exact=True) * d[..., m] * q[..., l - m]
        q[..., l] = -acc / d[..., 0]
    return q


def _normalize_partition_of_unity(raw: np.ndarray) -> np.ndarray:
    """
    Divide the fitted curve by its DC gain D(tau) = sum_i f(tau + i*T1).

    raw[p, l, j] holds unscaled f^(l) samples; the normalised taps follow
    from the Leibniz rule over f * (1/D).
    """
    orders = raw.shape[1] - 1
    inverse = reciprocal_derivatives(raw.sum(axis=2))  # (phases, orders+1)

    normalized = np.zeros_like(raw)
    for l in range(orders + 1):
        for m in range(l + 1):
            normalized[:, l, :] += (
                comb(l, m, exact=True) * raw[:, m, :] * inverse[:, l - m, None]
            )
    return normalized


def build_polyphase_bank(
    kernel: Kernel,
    upsampling_factor: int = 8,
    half_window: int = 4,
    orders: int = 3,
    *,
    output_period: float | None = None,
    normalize_dc: bool = False,
) -> PolyphaseBank:
    """
    Sample the kernel and its derivatives at every phase instant.

    Tap (p, l, i) is f^(l)(tau_p + i*T1) * (T2/2)^l / l! for i = -k..k.
    """
    lup = int(upsampling_factor)
    if lup < 2:
        raise ConfigurationError(f"Lup must be >= 2, got {upsampling_factor}")
    if half_window < 1:
        raise ConfigurationError(f"half window k must be >= 1, got {half_window}")
    if not 0 <= orders <= kernel.max_order:
        raise ConfigurationError(f"orders must be in 0..{kernel.max_order}, got {orders}")
    t2 = kernel.input_period / lup
    if output_period is not None and not math.isclose(output_period, t2, rel_tol=1e-12):
        raise ConfigurationError(
            f"output period {output_period!r} is inconsistent with T2 = T1/Lup = {t2!r}"
        )

    offsets = phase_offsets(kernel.input_period, lup)
    shifts = np.arange(-half_window, half_window + 1) * kernel.input_period
    instants = offsets[:, None] + shifts[None, :]
    raw = np.stack([eval_kernel(kernel, instants, l) for l in range(orders + 1)], axis=1)
    if normalize_dc:
        raw = _normalize_partition_of_unity(raw)
    taps = raw * derivative_scales(t2, orders)[None, :, None]

    bank = PolyphaseBank(
        kernel=kernel,
        upsampling_factor=lup,
        half_window=half_window,
        phase_offsets=offsets,
        taps=taps,
        normalized=normalize_dc,
    )
    logger.debug(
        "built polyphase bank Lup=%d k=%d orders=%d normalized=%s", lup, half_window, orders, normalize_dc
    )
    return bank


def full_rate_filter(kernel: Kernel, upsampling_factor: int, half_window: int, order: int) -> np.ndarray:
    """
    Full-rate filter h_l sampled at the half-sample instants of rate f2.

    Entry j is at offset q = j - Lup*k; for the 8x chain the non-zero part is
    f^(l)(n*T2 + T2/2), n = -32..31. Scaled like the bank.
    """
    lup = int(upsampling_factor)
    t2 = kernel.input_period / lup
    q = np.arange(-lup * half_window, lup * (half_window + 1))
    instants = (q - (lup - 1) / 2.0) * t2
    return eval_kernel(kernel, instants, order) * derivative_scales(t2, order)[order]


def dc_gain_report(bank: PolyphaseBank) -> dict:
    """
    Per-phase DC gain of the interpolator and the residual DC response of
    each differentiator.
    """
    sums = bank.taps.sum(axis=2)
    gains = sums[:, 0]
    report = {
        "normalized": bank.normalized,
        "phase_gain": gains.tolist(),
        "max_gain_deviation": float(np.max(np.abs(gains - 1.0))),
        "total_gain": float(gains.sum()),
        "derivative_dc": sums[:, 1:].tolist(),
        "max_derivative_dc": float(np.max(np.abs(sums[:, 1:]))) if bank.orders else 0.0,
    }
    if report["max_gain_deviation"] > 1e-3:
        logger.info("interpolator DC gain deviates by %.3g from unity", report["max_gain_deviation"])
    return report


# ---------- coefficient dump ----------

def bank_rows(bank: PolyphaseBank) -> Iterator[tuple[int, int, int, float]]:
    """(phase, order, index, value) in phase-major, then order, then index order."""
    lup, n_orders, n_taps = bank.taps.shape
    for p in range(lup):
        for l in range(n_orders):
            for j in range(n_taps):
                yield p, l, j, float(bank.taps[p, l, j])


def format_tap(value: float) -> str:
    # 17 significant digits, enough for an exact float64 round trip
    return f"{value:.16e}"


def dump_bank(bank: PolyphaseBank) -> str:
    """Deterministic, diffable text table of every tap."""
    lines = [DUMP_HEADER]
    lines.extend(f"{p} {l} {j} {format_tap(v)}" for p, l, j, v in bank_rows(bank))
    return "\n".join(lines) + "\n"


def parse_bank_dump(text: str) -> np.ndarray:
    """
    Inverse of dump_bank (also accepts the CSV export); returns the tap
    array of shape (phases, orders + 1, taps).
    """
    entries: list[tuple[int, int, int, float]] = []
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#") or line.startswith("phase"):
            continue
        fields = line.replace(",", " ").split()
        if len(fields) != 4:
            raise ShapeMismatchError(f"line {number}: expected 4 fields, got {len(fields)}")
        p, l, j = (int(f) for f in fields[:3])
        entries.append((p, l, j, float(fields[3])))
    if not entries:
        raise ShapeMismatchError("empty coefficient table")

    shape = tuple(max(e[axis] for e in entries) + 1 for axis in range(3))
    taps = np.full(shape, np.nan)
    for p, l, j, value in entries:
        taps[p, l, j] = value
    if np.isnan(taps).any():
        raise ShapeMismatchError("coefficient table has missing entries")
    return taps
