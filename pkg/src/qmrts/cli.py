"""Command-line front end: validate, simulate, sweep, compare.

Exit codes: 0 success (or pass-with-warnings), 1 config/validation
failure, 2 runtime or model-tolerance failure, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .beamformer import (beamform, select_subset, unit_phasor_spectrum,
                         write_angle_csv)
from .closed_form import (AMBIGUITY_GAP_DB, closed_form_phase,
                          closed_form_spectrum, peak_separation_db,
                          predicted_peak, write_closed_form_csv)
from .experiment import AntennaSubset, emit_results, load_sweep_spec, run_sweep
from .propagation import far_field_distance
from .scenario import (AngleGrid, ConfigError, Scenario, ValidationError,
                       load_scenario_file)
from .signal_chain import range_dft, synthesize_beat, write_range_csv

# Pairwise detected-angle agreement gate for the exact model levels [deg].
COMPARE_TOLERANCE_DEG = 0.02


def _load(args) -> Scenario:
    path = Path(args.config)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    s = load_scenario_file(path)
    if args.grid_step_deg is not None:
        grid = AngleGrid.from_degrees(math.degrees(s.grid.min_rad),
                                      math.degrees(s.grid.max_rad),
                                      args.grid_step_deg)
        s = replace(s, grid=grid)
        s.validate()
    return s


def _apply_subset(rspec, s, label):
    if label is None:
        return rspec, s
    sub = AntennaSubset.from_label(label, s.array.ntx, s.array.nrx)
    array = replace(s.array, ntx=len(sub.tx_keep), nrx=len(sub.rx_keep))
    return select_subset(rspec, sub.tx_keep, sub.rx_keep), replace(s, array=array)


def cmd_validate(args) -> int:
    path = Path(args.config)
    if not path.is_file():
        print(f"fail: config file not found: {path}", file=sys.stderr)
        return 1
    try:
        s = load_scenario_file(path)
    except (ConfigError, ValidationError) as exc:
        print(f"fail: {exc}", file=sys.stderr)
        return 1
    warnings = s.validate()
    fs = s.sample_rate_hz
    fb = s.max_beat_frequency_hz()
    print(f"scenario: {path}")
    print(f"  wavelength        {s.wavelength_m * 1e3:.6g} mm")
    print(f"  sample rate       {fs:.6g} Hz")
    print(f"  max beat freq     {fb:.6g} Hz (Nyquist margin {fs / 2 - fb:.6g} Hz)")
    print(f"  far-field bound   {far_field_distance(s):.6g} m (rc_m = {s.rts.rc_m:.6g} m)")
    print(f"  displacement      {s.rts.rc_m * (math.sin(s.rts.theta_tx_rad) - math.sin(s.rts.theta_rx_rad)):.6g} m")
    for msg in warnings:
        print(f"  warning: {msg}")
    print("status: warn" if warnings else "status: pass")
    return 0


def cmd_simulate(args) -> int:
    s = _load(args)
    for msg in s.validate():
        print(f"warning: {msg}")
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    cube = synthesize_beat(s)
    rspec = range_dft(cube, zero_pad=args.zero_pad)
    rsub, ssub = _apply_subset(rspec, s, args.subset)
    asp = beamform(rsub, ssub)

    full_deg = math.degrees(asp.peak_angle_rad)
    cf_deg = math.degrees(predicted_peak(ssub, args.mode))
    phi_a = closed_form_phase(ssub)

    write_range_csv(rspec, out / "range_spectrum.csv")
    write_angle_csv(asp, out / "angle_spectrum.csv")
    write_closed_form_csv(closed_form_spectrum(ssub, args.mode),
                          out / "closed_form_spectrum.csv")

    lines = [
        f"detected_bin = {rspec.peak_bin}",
        f"bin_width_hz = {rspec.sample_rate_hz / rspec.spectrum.shape[-1]:.9g}",
        f"detected_angle_fullchain_deg = {full_deg:.6f}",
        f"detected_angle_closedform_{args.mode}_deg = {cf_deg:.6f}",
        f"spectrum_phase_rad = {phi_a:.9f}",
    ]
    (out / "summary.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    for line in lines:
        print(line)
    print(f"wrote {out / 'range_spectrum.csv'}")
    print(f"wrote {out / 'angle_spectrum.csv'}")
    print(f"wrote {out / 'closed_form_spectrum.csv'}")
    return 0


def cmd_sweep(args) -> int:
    path = Path(args.config)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    spec = load_sweep_spec(path.read_text(encoding="utf-8"))
    if args.no_range_compensation:
        spec = replace(spec, range_compensation=False)
    rows = run_sweep(spec)
    emit_results(rows, args.out_csv)
    print(f"wrote {args.out_csv} ({len(rows)} rows)")
    for sub in spec.subsets:
        own = [r for r in rows if r.subset == sub.label]
        worst = max(own, key=lambda r: abs(r.deviation_deg))
        print(f"  {sub.label}: max |deviation| = {abs(worst.deviation_deg):.6f} deg "
              f"at d_rts = {worst.d_rts_m:.6g} m")
    return 0


def cmd_compare(args) -> int:
    s = _load(args)
    for msg in s.validate():
        print(f"warning: {msg}")
    rspec = range_dft(synthesize_beat(s))
    rsub, ssub = _apply_subset(rspec, s, args.subset)

    full = math.degrees(beamform(rsub, ssub).peak_angle_rad)
    ideal = math.degrees(beamform(unit_phasor_spectrum(ssub), ssub).peak_angle_rad)
    dirich = math.degrees(predicted_peak(ssub, "dirichlet"))
    sinc = math.degrees(predicted_peak(ssub, "sinc"))

    print(f"full chain          {full:+.6f} deg")
    print(f"steering double sum {ideal:+.6f} deg")
    print(f"closed form (dirichlet) {dirich:+.6f} deg")
    print(f"closed form (sinc)      {sinc:+.6f} deg  [small-angle approximation]")

    gap = peak_separation_db(ssub)
    if gap < AMBIGUITY_GAP_DB:
        print(f"warning: grating-lobe risk, top-2 peak gap = {gap:.2f} dB "
              f"(< {AMBIGUITY_GAP_DB:.0f} dB)")

    exact = {"full chain": full, "double sum": ideal, "dirichlet": dirich}
    names = list(exact)
    worst = 0.0
    for i, na in enumerate(names):
        for nb in names[i + 1:]:
            diff = abs(exact[na] - exact[nb])
            worst = max(worst, diff)
            print(f"  |{na} - {nb}| = {diff:.6f} deg")
    print(f"  |dirichlet - sinc| = {abs(dirich - sinc):.6f} deg  [not gated]")
    if worst > COMPARE_TOLERANCE_DEG:
        print(f"tolerance exceeded: {worst:.6f} deg > {COMPARE_TOLERANCE_DEG} deg",
              file=sys.stderr)
        return 2
    print(f"agreement within {COMPARE_TOLERANCE_DEG} deg")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qmrts",
        description="Quasi-monostatic radar target simulator angle model")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add_common(sp):
        sp.add_argument("config", help="scenario config file")
        sp.add_argument("--grid-step-deg", type=float, default=None,
                        help="override the beamforming grid step")
        sp.add_argument("--subset", default=None, metavar="NxM",
                        help="antenna selection, e.g. 1x4")

    v = sub.add_parser("validate", help="check a config and print derived values")
    v.add_argument("config")
    v.set_defaults(func=cmd_validate)

    sim = sub.add_parser("simulate", help="single-shot simulation to CSV files")
    add_common(sim)
    sim.add_argument("out_dir", help="output directory")
    sim.add_argument("--zero-pad", type=int, default=1,
                     help="power-of-two DFT zero-padding factor")
    sim.add_argument("--mode", choices=("sinc", "dirichlet"), default="sinc",
                     help="closed-form kernel variant")
    sim.set_defaults(func=cmd_simulate)

    sw = sub.add_parser("sweep", help="displacement sweep to CSV")
    sw.add_argument("config", help="config file with a [sweep] section")
    sw.add_argument("out_csv", help="output CSV path")
    sw.add_argument("--no-range-compensation", action="store_true",
                    help="ignore the moved transmitter's extra path length")
    sw.set_defaults(func=cmd_sweep)

    cmp_ = sub.add_parser("compare", help="detected angle at all model levels")
    add_common(cmp_)
    cmp_.set_defaults(func=cmd_compare)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
