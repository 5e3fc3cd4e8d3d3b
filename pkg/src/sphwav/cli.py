"""Command-line front end: analyze, synthesize, denoise, plot, kernels, bench.

Exit codes: 0 success, 1 bad flags, 2 I/O failure, 3 file-format error,
4 parameter-invariant violation.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .bench import fit_scaling, run_bench
from .denoise import denoise_pipeline, snr_db
from .errors import FormatError, ParameterError
from .grid import SamplingScheme, make_grid
from .mapio import read_map, write_map
from .mollweide import RenderOptions, render_mollweide, write_image
from .sht import sh_analysis
from .tiling import KernelFamily, TilingParams, admissibility_residual, build_kernels
from .transform import (
    TransformConfig,
    WaveletDecomposition,
    kernels_for,
    wav_analysis_pixel,
    wav_synthesis_pixel,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_FORMAT = 3
EXIT_PARAMETER = 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # bad flags exit with code 1, not argparse's 2
        raise _UsageError(message)


def _families():
    return {f.value: f for f in KernelFamily}


def _add_transform_flags(p, include_multires=True):
    p.add_argument("--lambda", dest="lam", type=float, required=True,
                   help="dilation between consecutive wavelet scales (> 1)")
    p.add_argument("--jmin", dest="j0", type=int, default=0,
                   help="lowest wavelet scale (default 0)")
    p.add_argument("--family", choices=sorted(_families()), default="sd",
                   help="kernel family (default sd)")
    if include_multires:
        p.add_argument("--multires", action=argparse.BooleanOptionalAction,
                       default=True,
                       help="reconstruct each scale at its own band-limit")


def build_parser() -> _Parser:
    parser = _Parser(prog="sphwav",
                     description="Exact axisymmetric wavelet analysis on the sphere")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="decompose a real map into wavelet-coefficient maps")
    p.add_argument("--in", dest="input", required=True, help="input S2WM real map")
    _add_transform_flags(p)
    p.add_argument("--out-prefix", required=True,
                   help="output prefix; writes <prefix>_scal.s2wm and <prefix>_wav_<j>.s2wm")

    p = sub.add_parser("synthesize", help="reconstruct a map from wavelet-coefficient files")
    p.add_argument("--in-prefix", required=True, help="prefix used by analyze")
    _add_transform_flags(p, include_multires=False)
    p.add_argument("--bandlimit", type=int, required=True, help="band-limit of the original map")
    p.add_argument("--out", required=True, help="output S2WM map")
    p.add_argument("--reference", help="optional reference map; reports worst coefficient error")

    p = sub.add_parser("denoise", help="hard-threshold wavelet denoising of a real map")
    p.add_argument("--in", dest="input", required=True, help="noisy S2WM real map")
    p.add_argument("--sigma", type=float, required=True,
                   help="harmonic noise standard deviation (>= 0)")
    p.add_argument("--factor", type=float, default=3.0,
                   help="threshold multiplier (default 3)")
    _add_transform_flags(p)
    p.add_argument("--out", required=True, help="output S2WM map")
    p.add_argument("--reference", help="optional clean map; reports input and output SNR")

    p = sub.add_parser("plot", help="render a real map as a Mollweide PPM")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True, help="output PPM path")
    p.add_argument("--width", type=int, default=400)
    p.add_argument("--colormap", choices=["grayscale", "diverging"], default="grayscale")

    p = sub.add_parser("kernels", help="dump scaling/wavelet kernel tables as TSV")
    p.add_argument("--bandlimit", type=int, required=True)
    _add_transform_flags(p, include_multires=False)
    p.add_argument("--out", required=True, help="output TSV path")

    p = sub.add_parser("bench", help="accuracy/timing trials over L = 4 .. 2^N")
    p.add_argument("--lmax-exp", type=int, required=True,
                   help="largest exponent N; runs L = 2^i for i = 2..N")
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--family", choices=sorted(_families()), default="sd")
    p.add_argument("--lambda", dest="lam", type=float, default=2.0)
    p.add_argument("--jmin", dest="j0", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", required=True, help="output JSON report path")

    return parser


def _config_from(args, L: int, multires=None) -> TransformConfig:
    return TransformConfig(
        L=L,
        lam=args.lam,
        j0=args.j0,
        family=_families()[args.family],
        scheme=SamplingScheme.GL,
        multires=bool(multires) if multires is not None else True,
    )


def _read_real_map(path):
    smap = read_map(path)
    if not smap.is_real:
        raise FormatError(f"{path}: expected a real map, found a complex one")
    return smap


def _scale_paths(prefix: str, j0: int, J: int):
    return f"{prefix}_scal.s2wm", {j: f"{prefix}_wav_{j}.s2wm" for j in range(j0, J + 1)}


def _cmd_analyze(args) -> int:
    smap = _read_real_map(args.input)
    config = _config_from(args, smap.grid.L, args.multires)
    kernels = kernels_for(config)
    decomp = wav_analysis_pixel(smap, config)

    scal_path, wav_paths = _scale_paths(args.out_prefix, config.j0, kernels.params.J)
    write_map(scal_path, decomp.scaling)
    for j, wmap in zip(kernels.scales, decomp.wavelets):
        write_map(wav_paths[j], wmap)

    print(f"J={kernels.params.J} scales={config.j0}..{kernels.params.J} "
          f"family={config.family.value} lambda={config.lam} multires={config.multires}")
    g = decomp.scaling.grid
    print(f"scaling: bandlimit={g.L} samples={g.n_theta}x{g.n_phi} -> {scal_path}")
    for j, wmap in zip(kernels.scales, decomp.wavelets):
        g = wmap.grid
        print(f"scale j={j}: bandlimit={g.L} samples={g.n_theta}x{g.n_phi} -> {wav_paths[j]}")
    return EXIT_OK


def _cmd_synthesize(args) -> int:
    L = args.bandlimit
    config_full = _config_from(args, L, multires=False)
    kernels = kernels_for(config_full)
    scal_path, wav_paths = _scale_paths(args.in_prefix, config_full.j0, kernels.params.J)

    scaling = _read_real_map(scal_path)
    wavelets = [_read_real_map(wav_paths[j]) for j in kernels.scales]

    observed = [scaling.grid.L] + [w.grid.L for w in wavelets]
    full = [L] * (kernels.params.n_scales + 1)
    multi = [kernels.scaling_bandlimit, *kernels.scale_bandlimits]
    if observed == full:
        multires = False
    elif observed == multi:
        multires = True
    else:
        raise ParameterError(
            f"coefficient files carry band-limits {observed}, but the given flags imply "
            f"{full} (full resolution) or {multi} (multiresolution); "
            "check --lambda/--jmin/--family/--bandlimit"
        )

    config = _config_from(args, L, multires)
    decomp = WaveletDecomposition(config, scaling, tuple(wavelets))
    recovered = wav_synthesis_pixel(decomp)
    write_map(args.out, recovered)
    print(f"reconstructed bandlimit={L} multires={multires} -> {args.out}")

    if args.reference:
        ref = read_map(args.reference)
        eps = float(np.max(np.abs(sh_analysis(ref).coeffs - sh_analysis(recovered).coeffs)))
        print(f"eps={eps:.3e}")
    return EXIT_OK


def _cmd_denoise(args) -> int:
    if args.sigma < 0.0:
        raise _UsageError(f"--sigma must be >= 0, got {args.sigma}")
    noisy = _read_real_map(args.input)
    config = _config_from(args, noisy.grid.L, args.multires)
    denoised = denoise_pipeline(noisy, args.sigma, config, factor=args.factor)
    write_map(args.out, denoised)
    print(f"denoised bandlimit={config.L} sigma={args.sigma} factor={args.factor} -> {args.out}")

    if args.reference:
        ref_flm = sh_analysis(read_map(args.reference))
        print(f"snr_in_db={snr_db(ref_flm, sh_analysis(noisy)):.4f}")
        print(f"snr_out_db={snr_db(ref_flm, sh_analysis(denoised)):.4f}")
    return EXIT_OK


def _cmd_plot(args) -> int:
    smap = read_map(args.input)
    if not smap.is_real:
        raise FormatError(f"{args.input}: cannot render a complex map")
    opts = RenderOptions(width=args.width, colormap=args.colormap)
    write_image(args.out, render_mollweide(smap, opts))
    print(f"rendered {opts.width}x{opts.height} -> {args.out}")
    return EXIT_OK


def _cmd_kernels(args) -> int:
    params = TilingParams(args.bandlimit, args.lam, args.j0)
    kernels = build_kernels(params, _families()[args.family])
    residual = admissibility_residual(kernels)
    lines = ["# " + "\t".join(["ell", "scaling"] + [f"wavelet_j{j}" for j in kernels.scales])]
    for ell in range(params.L):
        row = [str(ell), f"{kernels.phi[ell]:.16e}"]
        row += [f"{kernels.psi[i, ell]:.16e}" for i in range(len(kernels.psi))]
        lines.append("\t".join(row))
    lines.append(f"# identity residual = {residual:.6e}")
    with open(args.out, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"wrote {params.L} rows, residual={residual:.3e} -> {args.out}")
    return EXIT_OK


def _cmd_bench(args) -> int:
    if args.lmax_exp < 2:
        raise _UsageError(f"--lmax-exp must be >= 2, got {args.lmax_exp}")
    if args.reps < 1:
        raise _UsageError(f"--reps must be >= 1, got {args.reps}")
    L_values = [2**i for i in range(2, args.lmax_exp + 1)]
    records = run_bench(
        L_values,
        lam=args.lam,
        j0=args.j0,
        family=_families()[args.family],
        reps=args.reps,
        seed=args.seed,
    )
    report = {
        "family": args.family,
        "lambda": args.lam,
        "jmin": args.j0,
        "records": [r.as_dict() for r in records],
    }
    fit_Ls = [r.L for r in records if r.L >= 64]
    if len(fit_Ls) >= 3:
        report["slope_full"] = fit_scaling(records, timing="full")
        report["slope_multi"] = fit_scaling(records, timing="multi")
    with open(args.report, "w") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
    for r in records:
        print(f"L={r.L} eps_full={r.eps_full:.3e} eps_multi={r.eps_multi:.3e} "
              f"t_full_ms={r.t_full_ms:.2f} t_multi_ms={r.t_multi_ms:.2f}")
    if "slope_full" in report:
        print(f"slope_full={report['slope_full']:.3f} slope_multi={report['slope_multi']:.3f}")
    return EXIT_OK


_COMMANDS = {
    "analyze": _cmd_analyze,
    "synthesize": _cmd_synthesize,
    "denoise": _cmd_denoise,
    "plot": _cmd_plot,
    "kernels": _cmd_kernels,
    "bench": _cmd_bench,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMETER
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
