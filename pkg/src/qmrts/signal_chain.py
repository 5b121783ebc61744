"""Time-domain beat-signal synthesis, range DFT and bin detection.

The beat signal is the dechirped (transmit times conjugate receive) tone:
its frequency is (B/T)*tau, so with the forward DFT exp(-j*2*pi*k*n/Ns)
the echo lands at bin B*tau.  The residual video term -(B/(2T))*tau^2 is
retained so the synthesized chain matches the analytical bin phase rather
than an idealization.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .propagation import path_delays
from .scenario import Scenario


@dataclass(frozen=True)
class BeatCube:
    """Noiseless beat samples per virtual element, shape (Ntx, Nrx, Ns)."""

    samples: np.ndarray
    sample_rate_hz: float
    tx_positions_m: np.ndarray
    rx_positions_m: np.ndarray


@dataclass(frozen=True)
class RangeSpectrum:
    """Per-element range DFT with the detected bin.

    peak_bin is the argmax over bins of the noncoherent power sum across
    elements; peak_values holds each element's complex value at that bin
    (the input consumed by beamforming).
    """

    spectrum: np.ndarray          # (Mtx, Mrx, K) complex
    peak_bin: int
    peak_values: np.ndarray       # (Mtx, Mrx) complex
    tx_positions_m: np.ndarray
    rx_positions_m: np.ndarray
    sample_rate_hz: float
    pad_factor: int = 1


def synthesize_beat(s: Scenario) -> BeatCube:
    """Synthesize the beat tone of every virtual element.

    Sample n of element (ntx, nrx) is

        A * exp{ j*2*pi * [ fc*tau_c + f_rts*tau_rts
                            + (B/T)*tau*t_n - (B/(2T))*tau^2 ] }

    with t_n = n*T/Ns and tau, tau_c the element's delays.  Raises
    ValueError if any element's beat frequency reaches half the sample
    rate.
    """
    c, r = s.chirp, s.rts
    a = s.array
    fs = s.sample_rate_hz

    tau_c = np.empty((a.ntx, a.nrx))
    for i in range(a.ntx):
        for j in range(a.nrx):
            tau_c[i, j] = path_delays(s, i, j).tau_c_s
    tau = tau_c + r.tau_rts_s

    slope = c.b_hz / c.t_s
    fbeat = slope * tau
    if np.max(fbeat) >= fs / 2.0:
        raise ValueError(
            f"Nyquist violation: beat frequency {np.max(fbeat):.6g} Hz >= "
            f"fs/2 = {fs / 2.0:.6g} Hz")

    t = np.arange(c.ns) * (c.t_s / c.ns)
    const = c.fc_hz * tau_c + r.f_rts_hz * r.tau_rts_s - (slope / 2.0) * tau**2
    phase = 2.0 * np.pi * (const[:, :, None] + fbeat[:, :, None] * t[None, None, :])
    samples = r.amplitude * np.exp(1j * phase)
    return BeatCube(samples=samples, sample_rate_hz=fs,
                    tx_positions_m=a.tx_positions_m(),
                    rx_positions_m=a.rx_positions_m())


def range_dft(b: BeatCube, zero_pad: int = 1) -> RangeSpectrum:
    """Per-element forward DFT and noncoherent range detection.

    No window is applied.  zero_pad must be a power of two; the transform
    length is Ns*zero_pad and the expected peak bin is round(B*tau*zero_pad)
    for an unaliased tone.
    """
    if zero_pad < 1 or zero_pad & (zero_pad - 1):
        raise ValueError(f"zero_pad must be a power of two (got {zero_pad})")
    ns = b.samples.shape[-1]
    spec = np.fft.fft(b.samples, n=ns * zero_pad, axis=-1)
    power = np.sum(np.abs(spec) ** 2, axis=(0, 1))
    k = int(np.argmax(power))
    return RangeSpectrum(spectrum=spec, peak_bin=k,
                         peak_values=spec[:, :, k].copy(),
                         tx_positions_m=b.tx_positions_m,
                         rx_positions_m=b.rx_positions_m,
                         sample_rate_hz=b.sample_rate_hz,
                         pad_factor=zero_pad)


def detected_bin_phase(r: RangeSpectrum, ntx: int, nrx: int) -> float:
    """Argument of element (ntx, nrx) at the detected bin, in (-pi, pi]."""
    mtx, mrx = r.peak_values.shape
    if not 0 <= ntx < mtx:
        raise IndexError(f"ntx index {ntx} out of range [0, {mtx})")
    if not 0 <= nrx < mrx:
        raise IndexError(f"nrx index {nrx} out of range [0, {mrx})")
    return float(np.angle(r.peak_values[ntx, nrx]))


def expected_bin_phase(s: Scenario, ntx: int, nrx: int, f_r: float,
                       include_rvp: bool = True) -> float:
    """Analytical detected-bin phase, mod 2*pi.

    2*pi*[fc*tau_c + f_rts*tau_rts + (B*tau - f_R)/2], exact when B*tau
    falls on bin f_R.  With include_rvp the retained residual video term
    -(B/(2T))*tau^2 is added, matching the synthesized chain to machine
    precision for on-bin scenarios; without it the formula is the idealized
    prediction (the two differ by 2*pi*(B/(2T))*tau^2 radians).
    """
    c, r = s.chirp, s.rts
    d = path_delays(s, ntx, nrx)
    cycles = c.fc_hz * d.tau_c_s + r.f_rts_hz * r.tau_rts_s \
        + 0.5 * (c.b_hz * d.tau_s - f_r)
    if include_rvp:
        cycles -= (c.b_hz / (2.0 * c.t_s)) * d.tau_s**2
    return 2.0 * math.pi * (cycles % 1.0)


def bin_phase_frequency_scale(s: Scenario) -> float:
    """Ratio of the detected-bin phase-gradient frequency to fc.

    The DFT bin phase advances with the element delay at the mid-sweep
    frequency fc + B*(Ns-1)/(2*Ns), not at fc, so detected angles exceed
    the start-frequency prediction by about this factor in sin(alpha).
    """
    c = s.chirp
    return 1.0 + c.b_hz * (c.ns - 1) / (2.0 * c.fc_hz * c.ns)


def write_beat_csv(b: BeatCube, path) -> None:
    """Debug dump: columns ntx, nrx, n_or_k, re, im."""
    _write_cube_csv(b.samples, path)


def write_range_csv(r: RangeSpectrum, path) -> None:
    """Debug dump: columns ntx, nrx, n_or_k, re, im."""
    _write_cube_csv(r.spectrum, path)


def _write_cube_csv(cube: np.ndarray, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["ntx", "nrx", "n_or_k", "re", "im"])
        mtx, mrx, n = cube.shape
        for i in range(mtx):
            for j in range(mrx):
                col = cube[i, j]
                for k in range(n):
                    w.writerow([i, j, k, f"{col[k].real:.9g}", f"{col[k].imag:.9g}"])
