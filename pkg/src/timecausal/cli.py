"""Command-line front end.

Subcommands: ``tables``, ``kernel``, ``process`` and ``synth``.  Exit codes:
0 ok, 2 configuration error, 3 I/O error, 4 numeric precondition violated.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path
from typing import List, Optional


from . import synth as synthmod
from .errors import (ContinuityError, DomainError, JetError, NumericError, ParameterError,
                     StateError, WarmupError)
from .features import C_E_QUARTER, C_TWO_THIRDS, FEATURES
from .kernels import kernel_derivative_samples, limit_self_similarity_residual
from .pipeline import PipelineConfig, StreamProcessor
from .pnm import read_pgm, to_display, write_pfm, write_pgm
from .scales import limit_time_constants, logarithmic_time_constants, uniform_time_constants
from .tables import HEADERS, to_csv

EXIT_OK, EXIT_CONFIG, EXIT_IO, EXIT_NUMERIC = 0, 2, 3, 4

log = logging.getLogger("timecausal")


class ConfigError(ValueError):
    pass


def _floats(text: str) -> tuple:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise ConfigError(f"expected comma separated numbers, got {text!r}") from None


def _blend(text: str) -> float:
    named = {"2/3": C_TWO_THIRDS, "e/4": C_E_QUARTER}
    if text in named:
        return named[text]
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"--C must be 2/3, e/4 or a number, got {text!r}") from None


def _velocity(text: str):
    v = _floats(text)
    if len(v) != 2:
        raise ConfigError("--velocity needs two values vx,vy")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="timecausal", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="cmd", required=True)

    t = sub.add_parser("tables", help="print a table as CSV")
    t.add_argument("which", choices=sorted(HEADERS))

    k = sub.add_parser("kernel", help="sample a temporal kernel as CSV")
    k.add_argument("--dist", choices=("uniform", "log", "limit"), default="log")
    k.add_argument("--tau", type=float, default=1.0)
    k.add_argument("--c", type=float, default=math.sqrt(2))
    k.add_argument("--K", type=int, default=7)
    k.add_argument("--limit-eps", type=float, default=1e-10)
    k.add_argument("--n", type=int, default=0, help="derivative order")
    k.add_argument("--dt", type=float)
    k.add_argument("--T", type=float)
    k.add_argument("--out", help="output file (default stdout)")

    pr = sub.add_parser("process", help="compute features over a PGM frame sequence")
    pr.add_argument("inputs", nargs="+", help="PGM files or directories (sorted by name)")
    pr.add_argument("--out-dir", required=True)
    pr.add_argument("--format", choices=("pgm", "pfm"), default="pfm")
    pr.add_argument("--fps", type=float, default=25.0)
    pr.add_argument("--tau-seconds", type=_floats, default=(0.1,))
    pr.add_argument("--sigma-x", type=_floats, default=(2.0,))
    pr.add_argument("--pixels-per-unit", type=float, default=1.0,
                    help="pixels per unit of --sigma-x (1 means sigma in pixels)")
    pr.add_argument("--dist", choices=("uniform", "log"), default="log")
    pr.add_argument("--c", type=float, default=2.0)
    pr.add_argument("--K", type=int, default=7)
    pr.add_argument("--limit-eps", type=float, help="use the truncated limit cascade")
    pr.add_argument("--norm", choices=("var", "lp"), default="lp")
    pr.add_argument("--gamma-s", type=float, default=1.0)
    pr.add_argument("--gamma-t", type=float, default=1.0)
    pr.add_argument("--features", default="q2", help="comma list from: " + ",".join(FEATURES))
    pr.add_argument("--C", type=_blend, default=C_TWO_THIRDS)
    pr.add_argument("--kappa", type=float, default=1.0)
    pr.add_argument("--velocity", type=_velocity, default=(0.0, 0.0))
    pr.add_argument("--log-intensity", action="store_true")
    pr.add_argument("--smoothing", choices=("separable", "gamma_third"), default="separable")

    sy = sub.add_parser("synth", help="write a synthetic PGM sequence")
    sy.add_argument("kind", choices=sorted(synthmod.GENERATORS))
    sy.add_argument("--out-dir", required=True)
    sy.add_argument("--frames", type=int, default=48)
    sy.add_argument("--width", type=int, default=64)
    sy.add_argument("--height", type=int, default=64)
    sy.add_argument("--sigma", type=float, default=3.0, help="blob standard deviation")
    sy.add_argument("--velocity", type=_velocity, default=(0.5, 0.0))
    sy.add_argument("--period", type=float, default=8.0)
    sy.add_argument("--onset", type=int, default=8)
    sy.add_argument("--bits", type=int, choices=(8, 16), default=16)
    return p


# ---------------------------------------------------------------------------

def cmd_tables(args, out) -> int:
    out.write(to_csv(args.which))
    return EXIT_OK


def cmd_kernel(args, out) -> int:
    if args.dist == "uniform":
        dist = uniform_time_constants(args.tau, args.K)
    elif args.dist == "log":
        dist = logarithmic_time_constants(args.tau, args.c, args.K)
    else:
        dist = limit_time_constants(args.tau, args.c, args.limit_eps)
    k = kernel_derivative_samples(dist, args.n, args.dt, args.T)
    lines = [f"# tau={args.tau!r}", f"# dist={args.dist}"]
    if args.dist != "uniform":
        lines.append(f"# c={args.c!r}")
    lines += [f"# K={dist.K}", f"# n={args.n}", f"# dt={k.dt!r}"]
    if args.dist == "limit":
        res = limit_self_similarity_residual(args.tau, args.c, args.limit_eps, k.dt, k.t[-1])
        lines.append(f"# self_similarity_residual={res:.3e}")
    lines.append("t,value")
    lines += [f"{float(t)!r},{float(v)!r}" for t, v in zip(k.t, k.values)]
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        out.write(text)
    return EXIT_OK


def _input_files(inputs: List[str]) -> List[Path]:
    files: List[Path] = []
    for item in inputs:
        p = Path(item)
        if p.is_dir():
            files += sorted(q for q in p.iterdir() if q.suffix.lower() == ".pgm")
        elif p.exists():
            files.append(p)
        else:
            raise FileNotFoundError(f"no such input: {item}")
    if not files:
        raise FileNotFoundError("no PGM frames found")
    return files


def cmd_process(args, out) -> int:
    feats = tuple(f.strip() for f in args.features.split(",") if f.strip())
    cfg = PipelineConfig(fps=args.fps, tau_seconds=args.tau_seconds, sigma_x=args.sigma_x,
                         pixels_per_unit=args.pixels_per_unit, dist=args.dist, c=args.c, K=args.K,
                         limit_eps=args.limit_eps, norm=args.norm, gamma_s=args.gamma_s,
                         gamma_t=args.gamma_t, features=feats, C=args.C, kappa=args.kappa,
                         velocity=tuple(args.velocity), log_intensity=args.log_intensity,
                         smoothing=args.smoothing)
    proc = StreamProcessor(cfg)
    files = _input_files(args.inputs)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = 0

    def frames():
        for path in files:
            yield read_pgm(path)

    def sink(idx, res):
        nonlocal written
        for (name, i, j), img in sorted(res.items()):
            stem = out_dir / f"{name}_s{i}_t{j}_{idx:05d}"
            if args.format == "pfm":
                write_pfm(stem.with_suffix(".pfm"), img)
            else:
                write_pgm(stem.with_suffix(".pgm"), to_display(img))
            written += 1

    proc.process(frames(), sink)
    manifest = {
        "frames_in": proc.frame_index,
        "outputs_written": written,
        "warmup_frames": proc.warmup,
        "high_water_slices": proc.high_water,
        "fps": cfg.fps,
        "tau_seconds": ",".join(map(repr, cfg.tau_seconds)),
        "tau_frames": ",".join(repr(ch.tau) for i, _, ch in proc.channels if i == 0),
        "sigma_x": ",".join(map(repr, cfg.sigma_x)),
        "s_pixels": ",".join(map(repr, proc.scales_s)),
        "dist": "limit" if cfg.limit_eps is not None else cfg.dist,
        "c": cfg.c, "K": proc.channels[0][2].cascade.K, "limit_eps": cfg.limit_eps,
        "norm": cfg.norm, "gamma_s": cfg.gamma_s, "gamma_t": cfg.gamma_t,
        "features": ",".join(feats), "C": cfg.C, "kappa": cfg.kappa,
        "velocity": ",".join(map(repr, cfg.velocity)), "log_intensity": cfg.log_intensity,
        "smoothing": cfg.smoothing, "format": args.format,
    }
    manifest.update(proc.normalization_factors())
    (out_dir / "manifest.txt").write_text("".join(f"{k}={v}\n" for k, v in manifest.items()))
    log.info("processed %d frames, wrote %d images", proc.frame_index, written)
    return EXIT_OK


def cmd_synth(args, out) -> int:
    size = (args.height, args.width)
    kind = args.kind
    if kind == "blob":
        seq = synthmod.blob(args.frames, size, sigma=args.sigma)
    elif kind == "flicker":
        seq = synthmod.flicker(args.frames, size, period=args.period)
    elif kind == "translate":
        start = (args.width / 4, args.height / 2)
        seq = synthmod.translate(args.frames, size, start, tuple(args.velocity), args.sigma)
    else:
        seq = synthmod.step(args.frames, size, onset=args.onset)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    maxval = 65535 if args.bits == 16 else 255
    for t, frame in enumerate(seq.frames):
        write_pgm(out_dir / f"frame_{t:05d}.pgm", frame * maxval, maxval)
    lines = [f"kind={kind}", f"frames={args.frames}", f"maxval={maxval}"]
    for key, val in seq.truth.items():
        if key == "centers":
            lines += [f"center_{t:05d}={x!r},{y!r}" for t, (x, y) in enumerate(val)]
        elif key != "kind":
            lines.append(f"{key}={val}")
    (out_dir / "truth.txt").write_text("\n".join(lines) + "\n")
    return EXIT_OK


COMMANDS = {"tables": cmd_tables, "kernel": cmd_kernel, "process": cmd_process, "synth": cmd_synth}


def main(argv: Optional[List[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_CONFIG
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.cmd](args, out)
    except (ContinuityError, DomainError, NumericError, WarmupError) as e:
        log.error("numeric precondition violated: %s", e)
        return EXIT_NUMERIC
    except (ParameterError, ConfigError, JetError) as e:
        log.error("configuration error: %s", e)
        return EXIT_CONFIG
    except (OSError, StateError) as e:
        # FormatError is an OSError; StateError here means a frame size changed mid-stream
        log.error("input/output error: %s", e)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
