"""Command-line front end.

Subcommands: generate, basis, measure, reconstruct, metrics, classify,
reproduce, pipeline.  All numeric output is printed with %.17g so reruns
with the same config and seed are byte-identical.  Exit codes: 2 for
configuration/parameter problems, 3 for numeric singularity or condition
failures, 4 for I/O problems.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import os
import sys
import time

import numpy as np

from . import __version__, basis, metrics, patterns, recon, sim
from .errors import (
    ConditionError,
    FieldFormatError,
    ParameterError,
    SIBucketError,
    SingularSetError,
)
from .grid import Field, read_field, write_field

EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4

_FMT = "%.17g"

_FAMILY_CLI = {
    "pixel": "pixel",
    "two-pixel": "two_pixel",
    "harmonic": "harmonic",
    "pseudo-random": "pseudo_random",
}
_FAMILY_TO_CLI = {v: k for k, v in _FAMILY_CLI.items()}


def _fmt(x: float) -> str:
    return _FMT % x


# ---------------------------------------------------------------------------
# pattern directory I/O
# ---------------------------------------------------------------------------


def build_pattern_set(
    family: str,
    L: int,
    h: float = 1.0,
    A: float = 1.0,
    t1: float = 0.5,
    kappa: float = 2.0,
    seed: int = 0,
    n_bar: float = 1.0,
) -> patterns.PatternSet:
    if family == "pixel":
        return patterns.pixel_masks(L, h, n_bar=n_bar)
    if family == "two_pixel":
        return patterns.two_pixel_masks(L, h, n_bar=n_bar)
    if family == "harmonic":
        return patterns.harmonic_masks(L, A, n_bar=n_bar)
    if family == "pseudo_random":
        return patterns.pseudo_random_masks(L, t1, kappa, seed, n_bar=n_bar)
    raise ParameterError(f"unknown family {family!r}")


def write_pattern_dir(p: patterns.PatternSet, out_dir: str) -> None:
    os.makedirs(out_dir, exist_ok=True)
    for m, mask in enumerate(p.masks):
        write_field(os.path.join(out_dir, f"mask_{m:03d}.sif"), mask)
    lines = [
        f"family = {_FAMILY_TO_CLI.get(p.family, p.family)}",
        f"M = {p.M}",
        f"n_bar = {_fmt(p.n_bar)}",
    ]
    for key, val in sorted(p.params.items()):
        if isinstance(val, float):
            lines.append(f"{key} = {_fmt(val)}")
        else:
            lines.append(f"{key} = {val}")
    with open(os.path.join(out_dir, "manifest.txt"), "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_key_values(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ParameterError(f"{path}: malformed line {line!r}")
            key, val = line.split("=", 1)
            out[key.strip()] = val.strip()
    return out


def load_pattern_dir(pattern_dir: str) -> patterns.PatternSet:
    manifest_path = os.path.join(pattern_dir, "manifest.txt")
    if not os.path.isdir(pattern_dir) or not os.path.exists(manifest_path):
        raise FileNotFoundError(f"pattern directory {pattern_dir} is missing")
    meta = read_key_values(manifest_path)
    M = int(meta["M"])
    masks = tuple(
        read_field(os.path.join(pattern_dir, f"mask_{m:03d}.sif")) for m in range(M)
    )
    family = _FAMILY_CLI.get(meta.get("family", "custom"), "custom")
    params: dict[str, object] = {}
    for key, val in meta.items():
        if key in ("family", "M", "n_bar"):
            continue
        try:
            params[key] = int(val)
        except ValueError:
            try:
                params[key] = float(val)
            except ValueError:
                params[key] = val
    return patterns.PatternSet(masks, float(meta["n_bar"]), family, params)


def load_object(spec: str, p: patterns.PatternSet) -> sim.ObjectSpec:
    if spec.startswith("builtin:"):
        return sim.builtin_object(spec.split(":", 1)[1], p)
    f = read_field(spec)
    if f.grid != p.grid:
        raise ParameterError("object grid does not match the pattern grid")
    return sim.ObjectSpec(f, os.path.basename(spec))


def _write_matrix_csv(path: str, mat: np.ndarray) -> None:
    with open(path, "w") as fh:
        for row in mat:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _read_matrix_csv(path: str) -> np.ndarray:
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                rows.append([float(v) for v in line.split(",")])
    return np.array(rows)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_generate(args) -> int:
    family = _FAMILY_CLI[args.family]
    p = build_pattern_set(
        family,
        args.L,
        h=args.h,
        A=args.A,
        t1=args.t1,
        kappa=args.kappa,
        seed=args.seed,
        n_bar=args.nbar,
    )
    report = patterns.validate(p)
    write_pattern_dir(p, args.out)
    print(f"wrote {p.M} masks to {args.out} (family {args.family})")
    if not report.bounds_ok or report.gram_rank < p.M:
        print(
            f"validation failed: bounds_ok={report.bounds_ok} "
            f"rank={report.gram_rank}/{p.M}",
            file=sys.stderr,
        )
        return EXIT_CONFIG
    return 0


def cmd_basis(args) -> int:
    p = load_pattern_dir(args.patterns)
    bb = basis.biorthogonal(p)
    os.makedirs(args.out, exist_ok=True)
    _write_matrix_csv(os.path.join(args.out, "Q.csv"), bb.Q)
    _write_matrix_csv(os.path.join(args.out, "Q2.csv"), bb.Q2)
    for m in range(bb.M):
        write_field(os.path.join(args.out, f"V_{m:03d}.sif"), bb.V[m])
        write_field(os.path.join(args.out, f"U_{m:03d}.sif"), bb.U[m])
    holds1, _, residual = basis.check_condition1(p, bundle=bb)
    holds2, max_dev = basis.check_condition2(bb)
    with open(os.path.join(args.out, "conditions.txt"), "w") as fh:
        fh.write(f"condition1_holds = {holds1}\n")
        fh.write(f"condition1_residual = {_fmt(residual)}\n")
        fh.write(f"condition2_holds = {holds2}\n")
        fh.write(f"condition2_max_dev = {_fmt(max_dev)}\n")
    print(f"wrote basis ({bb.M} vectors) to {args.out}")
    return 0


def cmd_measure(args) -> int:
    p = load_pattern_dir(args.patterns)
    if args.nbar is not None:
        p = p.with_n_bar(args.nbar)
    obj = load_object(args.object, p)
    records = sim.run_trials(obj, p, args.trials, args.seed)
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["trial", "m", "x_m", "a_bar_m", "a_m"])
        for k, rec in enumerate(records):
            for m in range(rec.M):
                writer.writerow(
                    [k, m, _fmt(rec.x[m]), _fmt(rec.a_bar[m]), int(rec.a[m])]
                )
    print(f"wrote {args.trials} trials x {p.M} coefficients to {args.out}")
    return 0


def _read_measurement_csv(path: str) -> np.ndarray:
    """(trials, M) count matrix from a measure CSV."""
    cells: dict[tuple[int, int], float] = {}
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            cells[(int(row["trial"]), int(row["m"]))] = float(row["a_m"])
    if not cells:
        raise ParameterError(f"{path}: no measurement rows")
    trials = max(k for k, _ in cells) + 1
    M = max(m for _, m in cells) + 1
    out = np.zeros((trials, M))
    for (k, m), v in cells.items():
        out[k, m] = v
    return out


def cmd_reconstruct(args) -> int:
    counts = _read_measurement_csv(args.measurements)
    M = counts.shape[1]
    u_fields = [
        read_field(os.path.join(args.basis, f"U_{m:03d}.sif")) for m in range(M)
    ]
    umat = np.stack([f.values for f in u_fields])
    grid = u_fields[0].grid
    os.makedirs(args.out, exist_ok=True)
    recons = counts @ umat
    for k in range(counts.shape[0]):
        write_field(os.path.join(args.out, f"recon_trial_{k:04d}.sif"),
                    Field(grid, recons[k]))
    write_field(os.path.join(args.out, "recon_mean.sif"),
                Field(grid, recons.mean(axis=0)))
    print(f"wrote {counts.shape[0]} reconstructions to {args.out}")
    return 0


def cmd_metrics(args) -> int:
    p = load_pattern_dir(args.patterns)
    if args.nbar is not None:
        p = p.with_n_bar(args.nbar)
    obj = load_object(args.object, p)
    report = metrics.compute_report(
        obj, p, p.n_bar, trials=args.trials, seed=args.seed
    )
    os.makedirs(args.out, exist_ok=True)
    scalars: list[tuple[str, float, str]] = [
        ("resolution_measurement", report.resolution_measurement, "kernel-width"),
        ("snr_flat_sq", report.snr_flat_sq, "flat-snr"),
        ("form_factor_flat_sq", report.form_factor_flat_sq, "flat-form-factor"),
        ("t_tilde", report.t_tilde, "mask-average"),
        ("iqc_flat_sq", report.iqc_flat_sq, "flat-iqc"),
        ("iqc_dose_sq", report.iqc_dose_sq, "dose-iqc"),
        ("snr_flat_in_sq", report.snr_flat_in_sq, "measurement-flat-snr"),
    ]
    if report.resolution_uniform is not None:
        scalars.append(("resolution_uniform", report.resolution_uniform, "psf-width"))
    if report.mc is not None:
        scalars.append(("snr_flat_sq_mc", report.mc.flat_sq, "mc"))
        scalars.append(("snr_flat_sq_mc_stderr", report.mc.flat_sq_stderr, "mc"))
        scalars.append(("mc_trials", float(report.mc.trials), "mc"))
    scalars.append(
        ("snr_excluded_cells", float(report.snr_map.excluded_cells), "sentinel")
    )
    with open(os.path.join(args.out, "scalars.csv"), "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["name", "value", "source"])
        for name, value, source in scalars:
            writer.writerow([name, _fmt(value), source])
    write_field(os.path.join(args.out, "resolution_map.sif"), report.resolution_map)
    write_field(os.path.join(args.out, "f_map.sif"), report.f_map)
    write_field(os.path.join(args.out, "snr_map.sif"), report.snr_map.field)
    write_field(os.path.join(args.out, "iqc_map.sif"), report.iqc_map.field)
    if report.mc is not None:
        write_field(os.path.join(args.out, "snr_map_mc.sif"), report.mc.snr_map.field)
    print(f"wrote metrics to {args.out}")
    return 0


def cmd_classify(args) -> int:
    if args.matrix:
        rm = recon.ReconMatrix(_read_matrix_csv(args.matrix))
    else:
        p = load_pattern_dir(args.patterns)
        rm = recon.recon_matrix(basis.biorthogonal(p))
    labeled = recon.classify(rm, tol=args.tol)
    print(f"class {labeled.class_label}: {labeled.evidence}")
    print("note: class gates are heuristic (order I -> II -> III)")
    return 0


# ---------------------------------------------------------------------------
# reproduce
# ---------------------------------------------------------------------------


class _Table:
    def __init__(self):
        self.rows: list[tuple[str, str, str, float, bool]] = []

    def compare(self, name: str, computed: float, expected: float, tol: float,
                relative: bool = True) -> None:
        if relative and expected != 0.0:
            err = abs(computed - expected) / abs(expected)
        else:
            err = abs(computed - expected)
        self.rows.append((name, _fmt(computed), _fmt(expected), err, err <= tol))

    def check_label(self, name: str, computed: str, expected: str) -> None:
        ok = computed == expected
        self.rows.append((name, computed, expected, 0.0 if ok else 1.0, ok))

    def write(self, path: str) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["quantity", "computed", "expected", "rel_err", "pass"])
            for name, comp, exp, err, ok in self.rows:
                writer.writerow([name, comp, exp, _fmt(err), ok])

    def print(self) -> None:
        for name, comp, exp, err, ok in self.rows:
            status = "PASS" if ok else "FAIL"
            print(f"{status}  {name}: computed {comp}, expected {exp}")

    @property
    def all_pass(self) -> bool:
        return all(ok for *_, ok in self.rows)


def _reproduce_pixel(table: _Table) -> None:
    n_bar = 1.0e4
    p = patterns.pixel_masks(5, 1.0, n_bar=n_bar)
    bb = basis.biorthogonal(p)
    res_map, _ = metrics.resolution_map(bb)
    table.compare("resolution_map_max_dev", float(np.abs(res_map.values - 1.0).max()),
                  0.0, 1e-12, relative=False)
    flat = metrics.snr_flat(p, bb, n_bar)
    N_bar = p.M * n_bar
    table.compare("snr_flat_sq", flat.snr_flat_sq, N_bar / 625.0, 1e-9)
    table.compare("iqc_flat_sq", flat.form_factor_flat_sq, 1.0 / 25.0, 1e-9)
    obj = sim.builtin_object("flat", p)
    iqc_res = metrics.iqc(obj, p, bb, n_bar)
    table.compare("iqc_dose_sq", iqc_res.iqc_dose_sq, 1.0, 1e-9)
    table.compare("resolution_measurement",
                  metrics.resolution_measurement(p, bb), 1.0, 1e-9)
    table.compare("snr_flat_in_sq", metrics.snr_flat_measurement(p, n_bar),
                  flat.snr_flat_sq, 1e-9)


def _reproduce_two_pixel(table: _Table) -> None:
    p = patterns.two_pixel_masks(5)
    bb = basis.biorthogonal(p)
    M = p.M
    s_norm_sq = float((bb.s_matrix[0] ** 2).mean())
    table.compare("s_norm_sq", s_norm_sq, M * M / 4.0, 1e-9)
    flat = metrics.snr_flat(p, bb, 1.0)
    table.compare("iqc_flat_sq", flat.form_factor_flat_sq, 2.0 / M**2, 1e-9)
    obj = sim.builtin_object("flat", p)
    iqc_res = metrics.iqc(obj, p, bb, 1.0)
    table.compare("iqc_dose_sq", iqc_res.iqc_dose_sq, 1.0 / M, 1e-9)


def _reproduce_harmonic(table: _Table) -> None:
    p = patterns.harmonic_masks(3, 1.0)
    bb = basis.biorthogonal(p)
    f_map = metrics.f_sum_map(bb)
    table.compare("f_sum_max_dev", float(np.abs(f_map.values - 9.0).max()), 0.0,
                  1e-9, relative=False)
    res = metrics.resolution_uniform(bb)
    table.compare("resolution_sq", res * res, p.grid.area / 9.0, 1e-9)
    flat = metrics.snr_flat(p, bb, 1.0)
    table.compare("iqc_flat_sq", flat.form_factor_flat_sq, 3.0 / 324.0, 1e-9)


def _reproduce_pseudo_random(table: _Table) -> None:
    p = patterns.pseudo_random_masks(4, t1=0.5, kappa=2.0, seed=7)
    bb = basis.biorthogonal(p)
    M = p.M
    fmat = p.mask_matrix / 0.5 - 1.0
    fgram = (fmat[1:] @ fmat[1:].T) / p.grid.n_cells
    residual = float(np.abs(fgram - np.eye(M - 1) / 4.0).max())
    table.compare("fluctuation_gram_residual", residual, 0.0, 1e-12, relative=False)
    flat = metrics.snr_flat(p, bb, 1.0)
    table.compare("iqc_flat_sq", flat.form_factor_flat_sq,
                  0.5 / (1.0 + 2.0 * 4.0 * (M - 1)), 1e-9)
    res = metrics.resolution_uniform(bb)
    table.compare("resolution_sq", res * res, p.grid.area / M, 1e-6)


def _reproduce_classes(table: _Table) -> None:
    cases = [
        ("rotation", np.array([[1.0, 1.0], [-1.0, 1.0]]), "I"),
        ("convolution", np.array([[1.0, 0.0], [0.5, 0.5]]), "II"),
        ("deconvolution", np.array([[1.0, 0.0], [-1.0, 2.0]]), "III"),
    ]
    for name, mat, expected in cases:
        labeled = recon.classify(recon.ReconMatrix(mat))
        table.check_label(f"class_{name}", labeled.class_label, expected)


_SCENARIOS = {
    "pixel": _reproduce_pixel,
    "two-pixel": _reproduce_two_pixel,
    "harmonic": _reproduce_harmonic,
    "pseudo-random": _reproduce_pseudo_random,
    "classes": _reproduce_classes,
}


def cmd_reproduce(args) -> int:
    os.makedirs(args.out, exist_ok=True)
    table = _Table()
    try:
        _SCENARIOS[args.scenario](table)
    finally:
        table.write(os.path.join(args.out, f"reproduce_{args.scenario}.csv"))
        table.print()
    return 0 if table.all_pass else 1


# ---------------------------------------------------------------------------
# pipeline
# ---------------------------------------------------------------------------


def _sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def cmd_pipeline(args) -> int:
    cfg = read_key_values(args.config)
    required = ("family", "L", "out")
    for key in required:
        if key not in cfg:
            raise ParameterError(f"config missing required key {key!r}")
    out_dir = cfg["out"]
    family = _FAMILY_CLI.get(cfg["family"])
    if family is None:
        raise ParameterError(f"unknown family {cfg['family']!r}")
    n_bar = float(cfg.get("nbar", "1"))
    trials = int(cfg.get("trials", "100"))
    seed = int(cfg.get("seed", "0"))
    obj_spec = cfg.get("object", "builtin:flat")

    timings: list[tuple[str, float]] = []

    def stage(name):
        start = time.perf_counter()

        def done():
            timings.append((name, time.perf_counter() - start))

        return done

    done = stage("generate")
    p = build_pattern_set(
        family,
        int(cfg["L"]),
        h=float(cfg.get("h", "1")),
        A=float(cfg.get("A", "1")),
        t1=float(cfg.get("t1", "0.5")),
        kappa=float(cfg.get("kappa", "2")),
        seed=seed,
        n_bar=n_bar,
    )
    pattern_dir = os.path.join(out_dir, "patterns")
    write_pattern_dir(p, pattern_dir)
    done()

    done = stage("basis")
    bb = basis.biorthogonal(p)
    basis_args = argparse.Namespace(patterns=pattern_dir,
                                    out=os.path.join(out_dir, "basis"))
    cmd_basis(basis_args)
    done()

    done = stage("measure")
    obj = load_object(obj_spec, p)
    # noiseless pre-pass: projection of the object itself
    noiseless = recon.reconstruct_noiseless(sim.bucket_means(obj, p), bb)
    write_field(os.path.join(out_dir, "recon_noiseless.sif"), noiseless)
    measure_csv = os.path.join(out_dir, "measurements.csv")
    cmd_measure(argparse.Namespace(patterns=pattern_dir, object=obj_spec,
                                   nbar=n_bar, trials=trials, seed=seed,
                                   out=measure_csv))
    done()

    done = stage("reconstruct")
    cmd_reconstruct(argparse.Namespace(measurements=measure_csv,
                                       basis=os.path.join(out_dir, "basis"),
                                       out=os.path.join(out_dir, "recon")))
    done()

    done = stage("metrics")
    # the Monte-Carlo SNR needs >= 100 trials to mean anything; skip it
    # (trials=0) for quick runs rather than failing the whole pipeline
    mc_trials = trials if trials >= 100 else 0
    cmd_metrics(argparse.Namespace(patterns=pattern_dir, object=obj_spec,
                                   nbar=n_bar, trials=mc_trials, seed=seed,
                                   out=os.path.join(out_dir, "metrics")))
    done()

    manifest_lines = [f"version = {__version__}"]
    for key in sorted(cfg):
        manifest_lines.append(f"config.{key} = {cfg[key]}")
    for name, dt in timings:
        manifest_lines.append(f"timing.{name}_s = {_fmt(dt)}")
    for root, _dirs, files in sorted(os.walk(out_dir)):
        for fname in sorted(files):
            if fname == "run_manifest.txt":
                continue
            path = os.path.join(root, fname)
            rel = os.path.relpath(path, out_dir)
            manifest_lines.append(f"sha256.{rel} = {_sha256(path)}")
    manifest_path = os.path.join(out_dir, "run_manifest.txt")
    tmp_path = manifest_path + ".tmp"
    with open(tmp_path, "w") as fh:
        fh.write("\n".join(manifest_lines) + "\n")
    os.replace(tmp_path, manifest_path)
    print(f"pipeline complete: {out_dir}")
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sibucket",
        description="Structured-illumination bucket-detector imaging simulator",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="build a mask family")
    g.add_argument("--family", required=True, choices=sorted(_FAMILY_CLI))
    g.add_argument("--L", required=True, type=int)
    g.add_argument("--h", type=float, default=1.0)
    g.add_argument("--A", type=float, default=1.0)
    g.add_argument("--t1", type=float, default=0.5)
    g.add_argument("--kappa", type=float, default=2.0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--nbar", type=float, default=1.0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_generate)

    b = sub.add_parser("basis", help="orthonormal + biorthogonal bases")
    b.add_argument("--patterns", required=True)
    b.add_argument("--out", required=True)
    b.set_defaults(func=cmd_basis)

    m = sub.add_parser("measure", help="simulate bucket measurements")
    m.add_argument("--patterns", required=True)
    m.add_argument("--object", required=True,
                   help="field file or builtin:flat / builtin:pixel-step")
    m.add_argument("--nbar", type=float, default=None)
    m.add_argument("--trials", type=int, default=1)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--out", required=True)
    m.set_defaults(func=cmd_measure)

    r = sub.add_parser("reconstruct", help="project measurements back")
    r.add_argument("--measurements", required=True)
    r.add_argument("--basis", required=True)
    r.add_argument("--out", required=True)
    r.set_defaults(func=cmd_reconstruct)

    me = sub.add_parser("metrics", help="resolution / SNR / IQC report")
    me.add_argument("--patterns", required=True)
    me.add_argument("--object", required=True)
    me.add_argument("--nbar", type=float, default=None)
    me.add_argument("--trials", type=int, default=0)
    me.add_argument("--seed", type=int, default=0)
    me.add_argument("--out", required=True)
    me.set_defaults(func=cmd_metrics)

    c = sub.add_parser("classify", help="reconstruction-matrix class")
    c.add_argument("--patterns")
    c.add_argument("--matrix", help="CSV matrix instead of a pattern directory")
    c.add_argument("--tol", type=float, default=1e-8)
    c.set_defaults(func=cmd_classify)

    rep = sub.add_parser("reproduce", help="canonical closed-form scenarios")
    rep.add_argument("--scenario", required=True, choices=sorted(_SCENARIOS))
    rep.add_argument("--out", required=True)
    rep.set_defaults(func=cmd_reproduce)

    pl = sub.add_parser("pipeline", help="generate -> ... -> metrics")
    pl.add_argument("--config", required=True)
    pl.set_defaults(func=cmd_pipeline)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "classify" and not (args.patterns or args.matrix):
        parser.error("classify needs --patterns or --matrix")
    try:
        return args.func(args)
    except (ParameterError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SingularSetError, ConditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (OSError, FieldFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except SIBucketError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
