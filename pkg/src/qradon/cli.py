"""Command-line front end: transforms, experiment drivers, verification, benchmarks.

Exit codes: 0 success, 1 pipeline failure (message names the failing module),
2 usage error.  Every run prints a strict key=value report to stdout and can
mirror it to ``--report``; ``--figures DIR`` additionally renders matplotlib
views of the outputs next to the delimited files.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import denoise as dn
from . import figures, qsim
from .bench import TRANSFORMS, BenchResult, bench
from .errors import InfiniteSnrError, QradonError
from .grid import Image, NoiseSpec, add_gaussian_noise, load_image, normalize, save_image, snr
from .pdrt import pdrt_fft, pdrt_naive, pdrt_inverse_prime
from .qrt import QrtTable, qrt_direct, qrt_fft, qrt_inverse
from .report import RunReport
from .sidrt import detect_line, sidrt
from .qsim import algorithm1_amplitudes, dump_state, run_algorithm1

__all__ = ["run", "main"]


def _parse_threshold(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity"):
        return math.inf
    value = float(text)
    if value < 0:
        raise ValueError(f"threshold must be >= 0 or inf, got {text!r}")
    return value


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qradon",
        description="Discrete Radon transforms (periodic, reversible, interpolated), "
        "statevector verification, denoising, and line detection.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out=True):
        if out:
            p.add_argument("--out", help="output path (.csv or .pgm)")
        p.add_argument("--report", help="also write the key=value report here")
        p.add_argument("--figures", help="directory for matplotlib renderings")

    p = sub.add_parser("pdrt", help="periodic transform of an image")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--method", choices=("naive", "fft"), default="fft")
    common(p)

    p = sub.add_parser("qrt", help="reversible (sign-alternating) transform")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--method", choices=("naive", "fft", "sim"), default="fft",
                   help="naive=direct sums, fft=slice path, sim=statevector circuit")
    common(p)

    p = sub.add_parser("iqrt", help="invert a reversible-transform table")
    p.add_argument("--in", dest="infile", required=True, help="table CSV")
    common(p)

    p = sub.add_parser("sidrt", help="interpolation transform of an image")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--normalize", action="store_true", help="L2-normalize the input first")
    common(p)

    p = sub.add_parser("simulate", help="run the transform circuit on the statevector")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--state-dump", dest="state_dump", help="CSV dump of the final state")
    common(p)

    p = sub.add_parser("denoise", help="threshold denoising via qrt, pdrt, or dwt")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--method", choices=("qrt", "pdrt", "dwt"), default="qrt")
    p.add_argument("--threshold", type=_parse_threshold, default=math.inf,
                   help="hard threshold; accepts 'inf' (default)")
    p.add_argument("--sigma", type=float, help="add seeded Gaussian noise to the input first")
    p.add_argument("--epsilon", type=float, default=1.0, help="noise level multiplier (default 1)")
    p.add_argument("--seed", type=int, default=0, help="noise seed (default 0)")
    p.add_argument("--clean", help="clean reference for SNR metrics")
    common(p)

    p = sub.add_parser("detect", help="line detection through the interpolation transform")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--epsilon", type=float, help="estimator precision for the perturbed run")
    p.add_argument("--seed", type=int, default=0, help="perturbation seed (default 0)")
    common(p)

    p = sub.add_parser("bench", help="wall-clock scaling of the transforms")
    p.add_argument("--transforms", default="pdrt_naive,pdrt_fft",
                   help=f"comma list from {sorted(TRANSFORMS)}")
    p.add_argument("--sizes", default="32,64,128,256", help="comma list, strictly increasing")
    p.add_argument("--repeats", type=int, default=5, help="runs per size, median kept (>= 5)")
    p.add_argument("--seed", type=int, default=0, help="test image seed (default 0)")
    common(p)

    p = sub.add_parser("check", help="cross-verification suite")
    p.add_argument("--n", type=int, default=8, help="image side for the checks (default 8)")
    p.add_argument("--seed", type=int, default=0, help="random image seed (default 0)")
    p.add_argument("--trials", type=int, default=3, help="random images per check (default 3)")
    common(p, out=False)
    return parser


def _module_of(exc: Exception, default: str) -> str:
    """Name the failing module: the deepest package frame that raised."""
    best = None
    tb = exc.__traceback__
    while tb is not None:
        mod = tb.tb_frame.f_globals.get("__name__", "")
        if mod.startswith("qradon.") and not mod.endswith(".cli"):
            best = mod
        tb = tb.tb_next
    return best.split(".")[-1] if best else default


_ERROR_MODULE_DEFAULTS = {
    "pdrt": "pdrt", "qrt": "qrt", "iqrt": "qrt", "sidrt": "sidrt",
    "simulate": "qsim", "denoise": "denoise", "detect": "sidrt",
    "bench": "cli", "check": "cli",
}


def run(argv=None) -> tuple[int, RunReport | None]:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), None
    report = RunReport(command=args.command)
    t0 = time.perf_counter()
    try:
        _HANDLERS[args.command](args, report)
    except (QradonError, ValueError, OSError) as exc:
        name = _module_of(exc, _ERROR_MODULE_DEFAULTS[args.command])
        print(f"error: {name}: {exc}", file=sys.stderr)
        return 1, report
    report.add_timing("total_s", time.perf_counter() - t0)
    text = report.to_text()
    sys.stdout.write(text)
    if args.report:
        Path(args.report).write_text(text)
    return 0, report


def main(argv=None) -> int:
    code, _ = run(argv)
    return code


# ---------------------------------------------------------------------------
# Handlers
# ---------------------------------------------------------------------------


def _figure_dir(args) -> Path | None:
    if not args.figures:
        return None
    path = Path(args.figures)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _timed(report: RunReport, stage: str, fn, *fn_args, **fn_kwargs):
    t0 = time.perf_counter()
    result = fn(*fn_args, **fn_kwargs)
    report.add_timing(f"{stage}_s", time.perf_counter() - t0)
    return result


def _save_table_with_rendering(table, out: str, report: RunReport) -> None:
    table.save(out)
    report.artifacts["table"] = out
    values = np.asarray(table.values, dtype=float)
    if values.shape[0] == values.shape[1]:
        pgm = str(Path(out).with_suffix(".pgm"))
        save_image(Image(values.shape[0], values), pgm)
        report.artifacts["rendering"] = pgm


def _cmd_pdrt(args, report: RunReport) -> None:
    image = _timed(report, "load", load_image, args.infile)
    report.parameters.update(method=args.method, n=image.n, infile=args.infile)
    fn = pdrt_naive if args.method == "naive" else pdrt_fft
    table = _timed(report, "transform", fn, image)
    report.metrics["total_mass"] = float(math.sqrt(image.n) * table.values[0].sum())
    if args.out:
        table.save(args.out)
        report.artifacts["table"] = args.out
    figdir = _figure_dir(args)
    if figdir:
        path = figures.save_table_heatmap(
            table.values, figdir / "pdrt.png", title=f"periodic transform (n={image.n})",
            xlabel="intercept l", ylabel="slope index k")
        report.artifacts["figure"] = str(path)


def _cmd_qrt(args, report: RunReport) -> None:
    image = _timed(report, "load", load_image, args.infile)
    report.parameters.update(method=args.method, n=image.n, infile=args.infile)
    if args.method == "naive":
        table = _timed(report, "transform", qrt_direct, image)
    elif args.method == "fft":
        table = _timed(report, "transform", qrt_fft, image)
    else:
        state = _timed(report, "transform", run_algorithm1, normalize(image))
        table = QrtTable(image.n, algorithm1_amplitudes(state).real * image.norm())
    report.metrics["energy"] = float(np.sum(table.values**2))
    report.metrics["even_slope_energy"] = table.even_slope_energy()
    if args.out:
        _save_table_with_rendering(table, args.out, report)
    figdir = _figure_dir(args)
    if figdir:
        path = figures.save_table_heatmap(
            table.values, figdir / "qrt.png",
            title=f"reversible transform (n={image.n})", xlabel="slope index k",
            ylabel="intercept l")
        report.artifacts["figure"] = str(path)


def _cmd_iqrt(args, report: RunReport) -> None:
    table = _timed(report, "load", QrtTable.load, args.infile)
    report.parameters.update(n=table.n, infile=args.infile)
    image = _timed(report, "inverse", qrt_inverse, table)
    report.metrics["energy"] = float(np.sum(image.data**2))
    if args.out:
        save_image(image, args.out)
        report.artifacts["image"] = args.out
    figdir = _figure_dir(args)
    if figdir:
        path = figures.save_image_grid([("reconstruction", image.data)], figdir / "iqrt.png")
        report.artifacts["figure"] = str(path)


def _cmd_sidrt(args, report: RunReport) -> None:
    image = _timed(report, "load", load_image, args.infile)
    report.parameters.update(n=image.n, infile=args.infile, normalize=args.normalize)
    table = _timed(report, "transform", sidrt, image, args.normalize)
    report.metrics["max_value"] = float(table.values.max())
    if args.out:
        _save_table_with_rendering(table, args.out, report)
    figdir = _figure_dir(args)
    if figdir:
        path = figures.save_table_heatmap(
            table.values.T, figdir / "sidrt.png",
            title=f"interpolation transform (N={image.n})", xlabel="angle index theta",
            ylabel="intercept l")
        report.artifacts["figure"] = str(path)


def _cmd_simulate(args, report: RunReport) -> None:
    image = _timed(report, "load", load_image, args.infile)
    report.parameters.update(n=image.n, infile=args.infile)
    state = _timed(report, "circuit", run_algorithm1, normalize(image))
    report.metrics["state_norm"] = state.norm()
    report.metrics["num_qubits"] = state.num_qubits
    table = QrtTable(image.n, algorithm1_amplitudes(state).real)
    report.metrics["even_slope_energy"] = table.even_slope_energy()
    if args.out:
        _save_table_with_rendering(table, args.out, report)
    if args.state_dump:
        dump_state(state, args.state_dump)
        report.artifacts["state_dump"] = args.state_dump
    figdir = _figure_dir(args)
    if figdir:
        path = figures.save_table_heatmap(
            table.values, figdir / "simulate.png",
            title=f"circuit output amplitudes (n={image.n})",
            xlabel="slope index k", ylabel="intercept l")
        report.artifacts["figure"] = str(path)


def _cmd_denoise(args, report: RunReport) -> None:
    loaded = _timed(report, "load", load_image, args.infile)
    report.parameters.update(method=args.method, infile=args.infile,
                             threshold=args.threshold, n=loaded.n)
    clean: Image | None = None
    if args.sigma is not None:
        clean = loaded
        spec = NoiseSpec(sigma=args.sigma, epsilon=args.epsilon, seed=args.seed)
        noisy = add_gaussian_noise(clean, spec)
        report.parameters.update(sigma=args.sigma, epsilon=args.epsilon)
        report.seeds["noise"] = args.seed
    else:
        noisy = loaded
        if args.clean:
            clean = load_image(args.clean)
            report.parameters["clean"] = args.clean
    probability = None
    if args.method == "qrt":
        denoised, probability = _timed(report, "denoise", dn.qrt_denoise, noisy)
    elif args.method == "pdrt":
        denoised = _timed(report, "denoise", dn.pdrt_denoise, noisy, args.threshold, noisy.n)
    else:
        denoised = _timed(report, "denoise", dn.dwt_denoise_2d, noisy, args.threshold)
    rep = dn.DenoiseReport(method=args.method, threshold=args.threshold,
                           success_probability=probability,
                           seeds=dict(report.seeds))
    if clean is not None:
        rep.snr_before = _snr_or_inf(noisy, clean)
        rep.snr_after = _snr_or_inf(denoised, clean)
        report.metrics["snr_before"] = rep.snr_before
        report.metrics["snr_after"] = rep.snr_after
        report.metrics["snr_gain"] = rep.snr_after - rep.snr_before
    if probability is not None:
        report.metrics["success_probability"] = probability
    if args.out:
        save_image(denoised, args.out)
        report.artifacts["image"] = args.out
        rep_path = str(Path(args.out).with_suffix(".denoise.txt"))
        Path(rep_path).write_text(rep.to_text())
        report.artifacts["denoise_report"] = rep_path
    figdir = _figure_dir(args)
    if figdir:
        panels = []
        if clean is not None:
            panels.append(("clean", clean.data))
        panels.append(("noisy input", noisy.data))
        panels.append((f"denoised ({args.method})", denoised.data))
        path = figures.save_image_grid(panels, figdir / "denoise.png")
        report.artifacts["figure"] = str(path)


def _snr_or_inf(h: Image, f: Image) -> float:
    try:
        return snr(h, f)
    except InfiniteSnrError:
        return math.inf


def _cmd_detect(args, report: RunReport) -> None:
    image = _timed(report, "load", load_image, args.infile)
    report.parameters.update(n=image.n, infile=args.infile)
    if args.epsilon is not None:
        report.parameters["epsilon"] = args.epsilon
        report.seeds["perturbation"] = args.seed
    det = _timed(report, "detect", detect_line, image, args.epsilon, args.seed)
    report.metrics.update(theta=det.theta, l=det.l, slope=det.slope,
                          intercept=det.intercept, score=det.score)
    if args.out:
        Path(args.out).write_text(det.to_record() + "\n")
        report.artifacts["detection"] = args.out
    figdir = _figure_dir(args)
    if figdir:
        path = figures.save_detection_overlay(image.data, det, figdir / "detect.png")
        report.artifacts["figure"] = str(path)


def _cmd_bench(args, report: RunReport) -> None:
    names = [t.strip() for t in args.transforms.split(",") if t.strip()]
    sizes = [int(s) for s in args.sizes.split(",")]
    report.parameters.update(transforms=",".join(names),
                             sizes=",".join(str(s) for s in sizes),
                             repeats=args.repeats)
    report.seeds["images"] = args.seed
    results: list[BenchResult] = []
    for name in names:
        res = _timed(report, name, bench, name, sizes, args.repeats, args.seed)
        results.append(res)
        report.metrics[f"slope.{name}"] = res.slope
        for n, sec in zip(res.sizes, res.median_seconds):
            report.metrics[f"time.{name}.{n}"] = sec
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("transform,n,median_s\n")
            for res in results:
                for n, sec in zip(res.sizes, res.median_seconds):
                    fh.write(f"{res.transform},{n},{sec:.17g}\n")
        report.artifacts["timings"] = args.out
    figdir = _figure_dir(args)
    if figdir:
        path = figures.save_bench_loglog(results, figdir / "bench.png")
        report.artifacts["figure"] = str(path)


def _cmd_check(args, report: RunReport) -> None:
    """Cross-verification: transform agreement, round trips, slice identities."""
    from .errors import ConsistencyError

    n, seed, trials = args.n, args.seed, args.trials
    if n < 2 or n & (n - 1) or n > 16:
        raise ValueError(f"--n must be a power of two in [2, 16], got {n}")
    report.parameters.update(n=n, trials=trials)
    report.seeds["images"] = seed
    rng = np.random.default_rng(seed)
    errs: dict[str, float] = {}
    for _ in range(trials):
        image = Image(n, rng.uniform(0.0, 1.0, size=(n, n)))
        qn = normalize(image)
        direct = qrt_direct(qn)
        fft = qrt_fft(qn)
        amps = algorithm1_amplitudes(run_algorithm1(qn))
        _track(errs, "qrt_direct_vs_fft", np.abs(direct.values - fft.values).max())
        _track(errs, "qrt_direct_vs_sim", np.abs(direct.values - amps).max())
        _track(errs, "qrt_even_slope", np.abs(direct.values[:, 0::2]).max())
        _track(errs, "qrt_round_trip",
               np.abs(qrt_inverse(direct).data - qn.amplitudes).max())
        _track(errs, "pdrt_naive_vs_fft",
               np.abs(pdrt_naive(image).values - pdrt_fft(image).values).max())
    prime = 7
    pim = Image(prime, rng.uniform(0.0, 1.0, size=(prime, prime)))
    _track(errs, "pdrt_inverse_prime",
           np.abs(pdrt_inverse_prime(pdrt_fft(pim), prime).data - pim.data).max())
    for k in (2, 3, 4):
        direct_gate = qsim.mul_direct(k)
        rec_gate = qsim.mul_recursive(k)
        direct_gate.validate()
        rec_gate.validate()
        _track(errs, "mul_recursive_vs_direct",
               float(np.abs(rec_gate.perm - direct_gate.perm).max()))
    failures = []
    for name, err in sorted(errs.items()):
        report.metrics[f"{name}_max_err"] = err
        if err > 1e-9:
            failures.append(name)
    if failures:
        raise ConsistencyError(f"cross-checks failed: {', '.join(failures)}")


def _track(errs: dict, name: str, value: float) -> None:
    errs[name] = max(errs.get(name, 0.0), float(value))


_HANDLERS = {
    "pdrt": _cmd_pdrt,
    "qrt": _cmd_qrt,
    "iqrt": _cmd_iqrt,
    "sidrt": _cmd_sidrt,
    "simulate": _cmd_simulate,
    "denoise": _cmd_denoise,
    "detect": _cmd_detect,
    "bench": _cmd_bench,
    "check": _cmd_check,
}


if __name__ == "__main__":
    sys.exit(main())
