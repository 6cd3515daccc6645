"""Command-line front end.

Exit status: 0 on success, 1 on usage errors, 2 on runtime/domain errors. On
failure the last line written to stderr is the error name.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import asdict, fields
from pathlib import Path

import numpy as np

from . import analysis, imageio
from .cipher import CipherMode, decrypt_with_key, default_mode, encrypt_with_key
from .errors import ChaosCipherError, OrbitDiverged
from .keys import ALLOWED_BITS, ChaoticKey, derive_config, generate_key
from .keystream import keystream_for_config, normalize_state
from .maps import Hyper3DParams, MapId, Mem2DParams, bifurcation_sweep, lyapunov_spectrum, orbit

KEY_ENV = "CHAOSCIPHER_KEY"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits 2 by default; usage errors are 1 here
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\nUsageError\n")
        raise SystemExit(1)


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _resolve_key(args) -> ChaoticKey:
    if args.key is not None and args.key_file is not None:
        raise UsageError("give only one of --key and --key-file")
    if args.key is not None:
        text = args.key
    elif args.key_file is not None:
        try:
            text = Path(args.key_file).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read key file: {exc}") from exc
    elif os.environ.get(KEY_ENV):
        text = os.environ[KEY_ENV]
    else:
        raise UsageError(f"no key given (use --key, --key-file or ${KEY_ENV})")
    try:
        return ChaoticKey.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _mode_for(args, img) -> CipherMode:
    return CipherMode(args.mode) if args.mode else default_mode(img)


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _emit_report(report: analysis.AnalysisReport, args) -> None:
    fmt = args.format
    if fmt == "csv":
        text = report.to_csv()
    elif fmt == "text":
        text = report.to_text()
    else:
        text = report.to_json()
    _emit(text, args.output)


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}") from None
    return lo, hi


def _map_params(args):
    if MapId(args.map) is MapId.HYPER3D:
        base = Hyper3DParams()
        given = {f.name: getattr(args, f.name) for f in fields(base) if getattr(args, f.name) is not None}
        return Hyper3DParams(**{**asdict(base), **given})
    return Mem2DParams(args.k if args.k is not None else Mem2DParams().k)


def _seed_state(args):
    return None if args.seed_state is None else tuple(args.seed_state)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_keygen(args) -> int:
    key = generate_key(args.bits)
    sys.stdout.write(key.hex + "\n")
    return 0


def _run_cipher(args, encrypting: bool) -> int:
    key = _resolve_key(args)
    start = time.perf_counter()
    img = imageio.load(args.input)
    mode = _mode_for(args, img)
    if args.dump_keystream:
        ks = keystream_for_config(derive_config(key, mode.map_id), img.size)
        Path(args.dump_keystream).write_bytes(ks.to_bytes())
    fn = encrypt_with_key if encrypting else decrypt_with_key
    out = fn(img, key, mode)
    imageio.save(out, args.output)
    summary = {
        "channels": img.channels,
        "elapsed_s": round(time.perf_counter() - start, 6),
        "height": img.height,
        "mode": mode.value,
        "operation": "encrypt" if encrypting else "decrypt",
        "width": img.width,
    }
    sys.stdout.write(json.dumps(summary, sort_keys=True) + "\n")
    return 0


def cmd_encrypt(args) -> int:
    return _run_cipher(args, True)


def cmd_decrypt(args) -> int:
    return _run_cipher(args, False)


_PAIR_METRICS = {
    "mse": analysis.mse,
    "ssim": analysis.ssim,
    "psnr": analysis.psnr,
    "npcr": analysis.npcr,
    "uaci": analysis.uaci,
}
METRICS = ("entropy", "correlation", "adjacency", "histogram", *_PAIR_METRICS)


def cmd_analyze(args) -> int:
    metric = args.metric
    needed = 2 if metric in _PAIR_METRICS or metric == "correlation" else 1
    if len(args.paths) != needed:
        raise UsageError(f"{metric} takes {needed} image path(s), got {len(args.paths)}")
    images = [imageio.load(p) for p in args.paths]
    meta = {"inputs": [str(p) for p in args.paths]}

    if metric == "entropy":
        report = analysis.AnalysisReport(metric, {"entropy": analysis.entropy(images[0])}, metadata=meta)
    elif metric == "histogram":
        counts = analysis.histogram(images[0], per_channel=args.per_channel)
        counts = np.atleast_2d(counts)
        rows = [{"value": v, **{f"ch{c}": int(counts[c, v]) for c in range(len(counts))}} for v in range(256)]
        report = analysis.AnalysisReport(metric, rows=rows, metadata=meta)
    elif metric == "adjacency":
        directions = [args.direction] if args.direction else [d.value for d in analysis.Direction]
        scalars = {
            d: analysis.adjacent_pixel_correlation(images[0], d, args.samples, args.seed) for d in directions
        }
        meta.update(n_samples=args.samples, rng_seed=args.seed)
        report = analysis.AnalysisReport(metric, scalars, metadata=meta)
    elif metric == "correlation":
        per_channel = analysis.channel_correlations(*images)
        report = analysis.AnalysisReport(metric, per_channel=per_channel, metadata=meta)
    else:
        value = _PAIR_METRICS[metric](*images)
        report = analysis.AnalysisReport(metric, {metric: value}, metadata=meta)
    _emit_report(report, args)
    return 0


def cmd_lyapunov(args) -> int:
    params = _map_params(args)
    try:
        spectrum = lyapunov_spectrum(args.map, params, _seed_state(args), args.burn_in, args.n, args.renorm)
    except OrbitDiverged as exc:
        raise OrbitDiverged(exc.iteration, exc.state, f"{exc} with {params}") from exc
    if args.format == "csv":
        _emit(spectrum.to_csv(), args.output)
    else:
        doc = json.loads(spectrum.to_json())
        doc.update(map=args.map, params=asdict(params), burn_in=args.burn_in)
        _emit(json.dumps(doc, sort_keys=True), args.output)
    return 0


def cmd_bifurcate(args) -> int:
    sweep = bifurcation_sweep(
        args.map,
        _map_params(args),
        args.param,
        args.range,
        args.steps,
        _seed_state(args),
        args.burn_in,
        args.samples,
        args.component,
    )
    _emit(sweep.to_json() if args.format == "json" else sweep.to_csv(), args.output)
    return 0


def cmd_autocorr(args) -> int:
    orb = orbit(args.map, _map_params(args), _seed_state(args), args.burn_in, args.n)
    components = [args.component] if args.component else list(orb.columns)
    rows = []
    for name in components:
        seq = orb.component(name)
        if not args.raw:
            seq = normalize_state(seq)
        for lag, rho in analysis.sequence_autocorrelation(seq, args.max_lag):
            rows.append({"component": name, "lag": lag, "rho": rho})
    meta = {"map": args.map, "n": args.n, "burn_in": args.burn_in, "normalized": not args.raw}
    _emit_report(analysis.AnalysisReport("autocorrelation", rows=rows, metadata=meta), args)
    return 0


def cmd_noise_test(args) -> int:
    key = _resolve_key(args)
    img = imageio.load(args.input)
    report = analysis.noise_robustness_experiment(img, key, _mode_for(args, img), args.variances, args.seed)
    _emit_report(report, args)
    return 0


def cmd_keysens(args) -> int:
    key = _resolve_key(args)
    img = imageio.load(args.input)
    report = analysis.key_sensitivity_experiment(
        img, key, _mode_for(args, img), args.perturbation, args.coefficient
    )
    _emit_report(report, args)
    return 0


def cmd_differential(args) -> int:
    key = _resolve_key(args)
    img = imageio.load(args.input)
    report = analysis.differential_experiment(
        img, key, _mode_for(args, img), args.variant, args.position, args.seed
    )
    _emit_report(report, args)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_key_args(p) -> None:
    p.add_argument("--key", help=f"hex key (otherwise --key-file or ${KEY_ENV})")
    p.add_argument("--key-file", help="file containing the hex key")


def _add_mode(p) -> None:
    p.add_argument("--mode", choices=[m.value for m in CipherMode], help="default: 3d for gray, 2d for colour")


def _add_output(p, formats=("json", "csv", "text")) -> None:
    p.add_argument("--format", choices=formats, default=formats[0])
    p.add_argument("--output", "-o", help="write to file instead of stdout")


def _add_map_args(p) -> None:
    p.add_argument("--map", choices=[m.value for m in MapId], required=True)
    for name in ("a1", "a2", "a3", "b1", "b2", "c"):
        p.add_argument(f"--{name}", type=float, help="3D map coefficient")
    p.add_argument("--k", type=float, help="2D map coefficient")
    p.add_argument("--seed-state", type=_float_list, help="initial state, comma-separated")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="chaoscipher", description="Chaos-keystream image cipher and analysis toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("keygen", help="print a fresh random key")
    p.add_argument("--bits", type=int, choices=ALLOWED_BITS, default=256)
    p.set_defaults(func=cmd_keygen)

    for name, func in (("encrypt", cmd_encrypt), ("decrypt", cmd_decrypt)):
        p = sub.add_parser(name, help=f"{name} a PGM/PPM image")
        p.add_argument("input")
        p.add_argument("output")
        _add_key_args(p)
        _add_mode(p)
        p.add_argument("--dump-keystream", metavar="PATH", help="debug: write raw keystream bytes")
        p.set_defaults(func=func)

    p = sub.add_parser("analyze", help="compute a metric on one or two images")
    p.add_argument("metric", choices=METRICS)
    p.add_argument("paths", nargs="+")
    p.add_argument("--direction", choices=[d.value for d in analysis.Direction])
    p.add_argument("--samples", type=int, default=5000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--per-channel", action="store_true")
    _add_output(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("lyapunov", help="Lyapunov spectrum of a map")
    _add_map_args(p)
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--burn-in", type=int, default=1000)
    p.add_argument("--renorm", type=int, default=1)
    _add_output(p, ("json", "csv"))
    p.set_defaults(func=cmd_lyapunov)

    p = sub.add_parser("bifurcate", help="bifurcation sweep over one parameter")
    _add_map_args(p)
    p.add_argument("--param", required=True)
    p.add_argument("--range", type=_range, required=True, help="LO:HI")
    p.add_argument("--steps", type=int, default=400)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--burn-in", type=int, default=2000)
    p.add_argument("--component", default="x")
    _add_output(p, ("csv", "json"))
    p.set_defaults(func=cmd_bifurcate)

    p = sub.add_parser("autocorr", help="lagged autocorrelation of map sequences")
    _add_map_args(p)
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--burn-in", type=int, default=1000)
    p.add_argument("--max-lag", type=int, default=100)
    p.add_argument("--component")
    p.add_argument("--raw", action="store_true", help="use raw states instead of normalized sequences")
    _add_output(p)
    p.set_defaults(func=cmd_autocorr)

    p = sub.add_parser("noise-test", help="Gaussian noise robustness experiment")
    p.add_argument("input")
    _add_key_args(p)
    _add_mode(p)
    p.add_argument("--variances", type=_float_list, default=[10.0, 100.0, 1000.0])
    p.add_argument("--seed", type=int, default=0)
    _add_output(p)
    p.set_defaults(func=cmd_noise_test)

    p = sub.add_parser("keysens", help="key sensitivity experiment")
    p.add_argument("input")
    _add_key_args(p)
    _add_mode(p)
    p.add_argument("--perturbation", type=float, default=0.01)
    p.add_argument("--coefficient", help="map coefficient to shift (default a1 for 3d, k for 2d)")
    _add_output(p)
    p.set_defaults(func=cmd_keysens)

    p = sub.add_parser("differential", help="NPCR/UACI differential experiment")
    p.add_argument("input")
    _add_key_args(p)
    _add_mode(p)
    p.add_argument("--variant", choices=("key", "pixel", "decrypted"), default="key")
    p.add_argument("--position", type=int)
    p.add_argument("--seed", type=int, default=0)
    _add_output(p)
    p.set_defaults(func=cmd_differential)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"chaoscipher {args.command}: {exc}\nUsageError\n")
        return 1
    except ChaosCipherError as exc:
        sys.stderr.write(f"chaoscipher {args.command}: {exc}\n{type(exc).__name__}\n")
        return 2
    except (ValueError, TypeError) as exc:
        sys.stderr.write(f"chaoscipher {args.command}: {exc}\nUsageError\n")
        return 1
