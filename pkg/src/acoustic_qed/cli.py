"""Command-line entry point.

User-facing frequencies are cyclic (GHz/MHz/Hz); conversion to rad/s happens
in ``config`` and here only.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import shutil
import sys
import tempfile
import time
from pathlib import Path

from . import __version__
from .bessel import bessel_j
from .config import ConfigError, load_config
from .drive_design import MaterialParams, acoustic_wave_requirements, format_report
from .effective import dispersive_couplings, evolve_effective, optimal_drive_amplitude, secular_coupling
from .integrate import IntegrationError
from .lindblad import evolve
from .presets import DRIVE_RATIO
from .quantum_core import build_space, initial_state, qubit_register_state
from .spectrum import sideband_comb, write_comb_csv
from .sweep import SweepError, run_sweep

TWO_PI = 2 * math.pi
EXIT_CONFIG = 2
EXIT_INTEGRATION = 3
MODEL_ALIASES = {"full": "full", "effective": "effective_timedep", "secular": "effective_secular"}


def _staged_output(outdir: Path):
    outdir.mkdir(parents=True, exist_ok=True)
    return Path(tempfile.mkdtemp(prefix=".staging-", dir=outdir))


def _commit(staging: Path, outdir: Path, manifest: dict) -> list[str]:
    """Move staged files into place, then write the manifest last."""
    names = sorted(p.name for p in staging.iterdir())
    manifest["outputs"] = [str(outdir / n) for n in names] + [str(outdir / "manifest.json")]
    with (staging / "manifest.json").open("w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
    for n in names + ["manifest.json"]:
        os.replace(staging / n, outdir / n)
    staging.rmdir()
    return manifest["outputs"]


def _manifest(subcommand, cfg, started, stats):
    return {
        "subcommand": subcommand,
        "config": cfg.raw,
        "wall_clock_s": time.perf_counter() - started,
        "integrator": stats,
        "code_version": __version__,
    }


def _model(args, cfg):
    return MODEL_ALIASES[args.model] if args.model else cfg.model


def cmd_simulate(args) -> int:
    started = time.perf_counter()
    cfg = load_config(args.config)
    drive = cfg.drive()
    model = _model(args, cfg)
    spec = cfg.system
    if model == "full":
        rho0 = initial_state(build_space(spec), cfg.excited_qubits)
        traj = evolve(spec, drive, rho0, cfg.t_end, cfg.sample_count, cfg.tolerances)
    else:
        rho0 = qubit_register_state(spec.n_qubits, cfg.excited_qubits)
        mode = "timedep" if model == "effective_timedep" else "secular"
        traj = evolve_effective(
            dispersive_couplings(spec), drive, rho0, cfg.t_end, cfg.sample_count, mode, cfg.tolerances
        )
    outdir = Path(args.out)
    staging = _staged_output(outdir)
    try:
        n = spec.n_qubits
        header = ["time_ns"] + [f"qubit{q + 1}" for q in range(n)]
        if traj.cavity_population is not None:
            header.append("cavity")
        header += ["trace", "purity", "min_eigenvalue"]
        with (staging / "trajectory.csv").open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            for k, t in enumerate(traj.times):
                row = [t * 1e9] + list(traj.qubit_populations[:, k])
                if traj.cavity_population is not None:
                    row.append(traj.cavity_population[k])
                row += [traj.trace[k], traj.purity[k], traj.min_eigenvalue[k]]
                w.writerow([repr(float(v)) for v in row])
        manifest = _manifest("simulate", cfg, started, traj.stats)
        manifest["model"] = model
        _commit(staging, outdir, manifest)
    finally:
        shutil.rmtree(staging, ignore_errors=True)
    print(f"wrote {outdir / 'trajectory.csv'}")
    return 0


def cmd_sweep(args) -> int:
    started = time.perf_counter()
    cfg = load_config(args.config)
    sweep_cfg = cfg.sweep_config(_model(args, cfg))
    pmap = run_sweep(sweep_cfg, workers=args.workers)
    outdir = Path(args.out)
    staging = _staged_output(outdir)
    try:
        pmap.write_csv(staging)
        stats = [
            {"M_GHz": s["drive_frequency"] / TWO_PI / 1e9, "method": s["method"], "nfev": s["nfev"]}
            for s in pmap.stats
        ]
        manifest = _manifest("sweep", cfg, started, stats)
        manifest.update(model=sweep_cfg.model, config_hash=pmap.config_hash)
        _commit(staging, outdir, manifest)
    finally:
        shutil.rmtree(staging, ignore_errors=True)
    print(f"wrote {pmap.n_qubits} population maps to {outdir}")
    return 0


def effective_report(cfg, orders=(1, 2, 3)) -> dict:
    """J matrix (cyclic MHz) and |G^N| at N M = delta_ij for every qubit pair."""
    couplings = dispersive_couplings(cfg.system)
    n = couplings.n_qubits
    table = []
    for i in range(n):
        for j in range(i + 1, n):
            det = couplings.effective_detuning(i, j)
            for N in orders:
                M = abs(det) / N
                if M == 0:
                    continue
                pair = (i, j) if det > 0 else (j, i)
                G = secular_coupling(couplings.J[i, j], cfg.drive(M), pair, N)
                table.append(
                    {
                        "pair": [i + 1, j + 1],
                        "order": N,
                        "M_GHz": M / TWO_PI / 1e9,
                        "G_MHz": abs(G.G) / TWO_PI / 1e6,
                        "G_over_J": abs(G.G) / couplings.J[i, j],
                        "transfer_time_ns": G.rabi_half_period * 1e9 if G.G else None,
                    }
                )
    return {"J_MHz": (couplings.J / TWO_PI / 1e6).tolist(), "secular": table}


def cmd_effective(args) -> int:
    cfg = load_config(args.config)
    report = effective_report(cfg, tuple(args.orders))
    print("J_ij / 2pi [MHz]")
    for row in report["J_MHz"]:
        print("  " + "  ".join(f"{v:9.4f}" for v in row))
    print("pair  N   M/2pi [GHz]  |G|/2pi [MHz]  |G|/J_ij   pi/(2|G|) [ns]")
    for r in report["secular"]:
        tt = f"{r['transfer_time_ns']:.4g}" if r["transfer_time_ns"] else "inf"
        print(
            f"{r['pair'][0]}-{r['pair'][1]}  {r['order']:<3d} {r['M_GHz']:11.4f}  "
            f"{r['G_MHz']:13.4f}  {r['G_over_J']:8.5f}   {tt}"
        )
    if args.out:
        started = time.perf_counter()
        outdir = Path(args.out)
        staging = _staged_output(outdir)
        try:
            (staging / "effective.json").write_text(json.dumps(report, indent=2))
            _commit(staging, outdir, _manifest("effective", cfg, started, {}))
        finally:
            shutil.rmtree(staging, ignore_errors=True)
    return 0


def cmd_spectrum(args) -> int:
    M = TWO_PI * args.m_ghz * 1e9
    comb = sideband_comb(args.ratio * M, M, args.n_max)
    print("    n   offset [GHz]    weight")
    for n, off, w in zip(comb.orders, comb.offsets, comb.weights):
        if w > 1e-6:
            print(f"{n:5d}  {off / TWO_PI / 1e9:12.4f}  {w:.6f}")
    if args.out:
        outdir = Path(args.out)
        staging = _staged_output(outdir)
        try:
            write_comb_csv(comb, staging / "spectrum.csv")
            os.replace(staging / "spectrum.csv", outdir / "spectrum.csv")
        finally:
            shutil.rmtree(staging, ignore_errors=True)
    return 0


def cmd_drive_design(args) -> int:
    material = MaterialParams(args.deformation_potential, args.sound_speed, args.unit)
    M = TWO_PI * args.m_ghz * 1e9
    req = acoustic_wave_requirements(material, M, args.ratio)
    print(format_report(req, M, args.ratio))
    record = {"M_GHz": args.m_ghz, "target_ratio": args.ratio, **req.as_dict()}
    print(json.dumps(record, sort_keys=True))
    if args.out:
        outdir = Path(args.out)
        staging = _staged_output(outdir)
        try:
            (staging / "drive_design.json").write_text(json.dumps(record, indent=2, sort_keys=True))
            os.replace(staging / "drive_design.json", outdir / "drive_design.json")
        finally:
            shutil.rmtree(staging, ignore_errors=True)
    return 0


def cmd_optimize(args) -> int:
    print("N   D/M      |J_N(2D/M)|")
    for N in range(1, args.max_order + 1):
        r = optimal_drive_amplitude(N)
        print(f"{N:<3d} {r:.4f}   {abs(bessel_j(N, 2 * r)):.6f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="acoustic-qed",
        description="Acoustically controlled cavity-mediated qubit coupling: simulation and analysis.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, config_required=True, out_required=False):
        sp.add_argument("--config", required=config_required, help="run configuration (JSON)")
        sp.add_argument("--out", required=out_required, help="output directory")
        sp.add_argument("--seed", type=int, default=None, help="reserved; no stochastic paths")

    sp = sub.add_parser("simulate", help="single evolution -> trajectory.csv")
    common(sp, out_required=True)
    sp.add_argument("--model", choices=sorted(MODEL_ALIASES))
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("sweep", help="population maps over the drive frequency")
    common(sp, out_required=True)
    sp.add_argument("--model", choices=sorted(MODEL_ALIASES))
    sp.add_argument("--workers", type=int, default=None)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("effective", help="dispersive couplings and secular G^N table")
    common(sp)
    sp.add_argument("--orders", type=int, nargs="+", default=[1, 2, 3])
    sp.set_defaults(func=cmd_effective)

    sp = sub.add_parser("spectrum", help="sideband comb of one modulated qubit")
    common(sp, config_required=False)
    sp.add_argument("--m-ghz", type=float, default=5.0)
    sp.add_argument("--ratio", type=float, default=DRIVE_RATIO, help="D/M")
    sp.add_argument("--n-max", type=int, default=None)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("drive-design", help="acoustic wave needed for a target D/M")
    common(sp, config_required=False)
    sp.add_argument("--m-ghz", type=float, default=5.0)
    sp.add_argument("--ratio", type=float, default=DRIVE_RATIO)
    sp.add_argument("--deformation-potential", type=float, default=1e15, help="per unit strain")
    sp.add_argument("--unit", choices=["angular", "cyclic"], default="angular")
    sp.add_argument("--sound-speed", type=float, default=7e3, help="m/s")
    sp.set_defaults(func=cmd_drive_design)

    sp = sub.add_parser("optimize", help="optimal D/M for sideband orders 1..N")
    common(sp, config_required=False)
    sp.add_argument("--max-order", type=int, default=3)
    sp.set_defaults(func=cmd_optimize)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (IntegrationError, SweepError) as exc:
        print(f"integration failure: {exc}", file=sys.stderr)
        return EXIT_INTEGRATION
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
