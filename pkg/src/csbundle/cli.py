"""Command-line verification pipelines.

Subcommands::

    verify-genus1   curvature integral, three Chern numbers, covering degree, final degree
    cocycle-check   slab quadrature of the cocycle against its closed form
    goldman         twisted cohomology dimensions and cup-product pairings
    sample-reps     write a JSON dataset of flat representations
    plot-data       CSV/SVG data for curvature, plaquette phases and the pillowcase

Exit codes: 0 all checks pass, 1 a check failed, 2 configuration/usage
error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import itertools
import json
import logging
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import __version__, chern, prequantum, quotient, repvar, twisted
from .report import VerificationReport

log = logging.getLogger("csbundle")

EXIT_OK, EXIT_CHECK, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3

COMMANDS = ("verify-genus1", "cocycle-check", "goldman", "sample-reps", "plot-data")

DEFAULT_SAMPLES = {
    "verify-genus1": 100,
    "cocycle-check": 20,
    "goldman": 10,
    "sample-reps": 100,
    "plot-data": 200,
}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    seed: int | None = 0
    grid: int = 8
    slab_grid: tuple[int, int, int] = (32, 8, 8)
    genus: int = 1
    samples: int | None = None
    tol: float | None = None
    out: str | None = None
    input: str | None = None
    format: str = "json"
    orientation: int = 1
    cocycle_range: int = 3
    holonomy_levels: int = 2
    verbose: int = 0

    def validate(self) -> "RunConfig":
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown subcommand {self.command!r}")
        if self.seed is None:
            raise ConfigError("a seed is required (determinism contract)")
        if self.genus < 1:
            raise ConfigError(f"genus must be >= 1, got {self.genus}")
        if self.grid < 1:
            raise ConfigError("grid must be positive")
        if len(self.slab_grid) != 3 or min(self.slab_grid) < 1:
            raise ConfigError("slab grid needs three positive sizes")
        if self.tol is not None and not self.tol > 0:
            raise ConfigError("tolerances must be positive")
        if self.samples is not None and self.samples < 1:
            raise ConfigError("samples must be >= 1")
        if self.format not in ("json", "csv"):
            raise ConfigError("format must be json or csv")
        if self.orientation not in (1, -1):
            raise ConfigError("orientation must be + or -")
        if self.cocycle_range < 0:
            raise ConfigError("cocycle range must be >= 0")
        return self

    @property
    def n_samples(self) -> int:
        return self.samples if self.samples is not None else DEFAULT_SAMPLES[self.command]

    def tolerance(self, default: float) -> float:
        return self.tol if self.tol is not None else default

    def provenance(self) -> dict:
        d = asdict(self)
        d["slab_grid"] = list(self.slab_grid)
        d["samples"] = self.n_samples
        for k in ("out", "input", "format", "verbose"):
            d.pop(k)
        d["version"] = __version__
        d["numpy"] = np.__version__
        return d


# ---------------------------------------------------------------- config parsing


def _parse_orientation(s) -> int:
    s = str(s).strip()
    if s in ("+", "+1", "1"):
        return 1
    if s in ("-", "-1"):
        return -1
    raise ConfigError(f"orientation must be + or -, got {s!r}")


def _parse_slab(s) -> tuple[int, int, int]:
    parts = [int(p) for p in str(s).replace("x", ",").split(",") if p.strip()]
    if len(parts) == 1:
        parts *= 3
    if len(parts) != 3:
        raise ConfigError(f"slab grid must be N or Nt,Nx,Ny; got {s!r}")
    return tuple(parts)


_CONVERTERS = {
    "seed": int,
    "grid": int,
    "slab_grid": _parse_slab,
    "genus": int,
    "samples": int,
    "tol": float,
    "out": str,
    "input": str,
    "format": str,
    "orientation": _parse_orientation,
    "cocycle_range": int,
    "holonomy_levels": int,
    "verbose": int,
}


def read_config_file(path) -> dict:
    """``key = value`` lines; ``#`` starts a comment."""
    values = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _CONVERTERS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            values[key] = _CONVERTERS[key](val)
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key}: {exc}") from exc
    return values


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value file; flags override it")
    common.add_argument("--seed", type=int)
    common.add_argument("--grid", type=int, help="lattice / quadrature grid N")
    common.add_argument("--slab-grid", dest="slab_grid", type=_parse_slab,
                        help="slab grid Nt,Nx,Ny (or a single N)")
    common.add_argument("--genus", type=int)
    common.add_argument("--samples", type=int)
    common.add_argument("--tol", type=float, help="override the comparison tolerances")
    common.add_argument("--out", help="output path")
    common.add_argument("--input", help="report or dataset consumed by plot-data")
    common.add_argument("--format", choices=("json", "csv"))
    common.add_argument("--orientation", type=_parse_orientation, help="+ or -")
    common.add_argument("--cocycle-range", dest="cocycle_range", type=int)
    common.add_argument("--holonomy-levels", dest="holonomy_levels", type=int)
    common.add_argument("-v", "--verbose", action="count")

    parser = argparse.ArgumentParser(prog="csbundle", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def config_from_args(argv=None) -> RunConfig:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code == 0:  # --help
            raise
        raise ConfigError("invalid command line") from exc
    values = read_config_file(ns.config) if ns.config else {}
    for key in _CONVERTERS:
        v = getattr(ns, key, None)
        if v is not None:
            values[key] = v
    try:
        return RunConfig(command=ns.command, **values).validate()
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


# ---------------------------------------------------------------- subcommands


def _rng(cfg: RunConfig, stream: int = 0) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(stream,)))


def cmd_verify_genus1(cfg: RunConfig) -> VerificationReport:
    rep = VerificationReport(cfg.command, cfg.provenance())
    o = cfg.orientation
    if o == -1:
        rep.notes.append("orientation reversed: every signed value and the final degree flip sign")
    sampler = lambda a, b: prequantum.curvature_density((a, b))  # noqa: E731
    transport = prequantum.parallel_transport
    n = cfg.grid

    rep.check("curvature_integral", o * -4j * np.pi,
              chern.curvature_integral(sampler, n, o), cfg.tolerance(1e-9), "PAPER")

    res = chern.timed("chern_weil", n, chern.chern_weil, sampler, n, o)
    rep.timings.append(res.to_dict())
    cw = rep.check("chern_weil", 2 * o, res.value, cfg.tolerance(1e-9), "PAPER")

    upstairs = None
    start = time.perf_counter()
    try:
        value = chern.lattice_chern(transport, n, o)
        rep.check("lattice_chern", 2 * o, value, None, "DERIVED")
        upstairs = value
        admissible = True
    except chern.AdmissibilityError as exc:
        value, admissible = float("nan"), False
        rep.fail("lattice_chern", 2 * o, exc, "DERIVED")
    rep.timings.append(chern.ChernResult("lattice_chern", n, float(value), admissible,
                                         (time.perf_counter() - start) * 1e3).to_dict())

    res = chern.timed("holonomy_degree", 2**cfg.holonomy_levels, chern.holonomy_degree,
                      transport, cfg.holonomy_levels, o)
    rep.timings.append(res.to_dict())
    rep.check("holonomy_degree", 2 * o, res.value, cfg.tolerance(1e-6), "DERIVED")

    try:
        cov = quotient.covering_degree(cfg.n_samples, _rng(cfg))
        rep.check("covering_degree", 2, cov, None, "PAPER")
    except (quotient.InconsistentCount, RuntimeError) as exc:
        cov = None
        rep.fail("covering_degree", 2, exc, "PAPER")

    if upstairs is None and cw.passed:
        upstairs = int(round(cw.computed))
    if upstairs is not None and cov is not None:
        try:
            rep.check("degree_from_covering", o, chern.degree_from_covering(upstairs, cov),
                      None, "PAPER")
        except chern.NonIntegralDegree as exc:
            rep.fail("degree_from_covering", o, exc, "PAPER")
    else:
        rep.fail("degree_from_covering", o, RuntimeError("upstream check failed"), "PAPER")

    half = prequantum.LinePath.rectangle(0, 0, 0.5, 0.5, o)
    cell = prequantum.LinePath.rectangle(0, 0, 1, 1, o)
    rep.check("transport_half_cell", -1.0 + 0j, prequantum.parallel_transport(half),
              cfg.tolerance(1e-10), "DERIVED")
    rep.check("transport_unit_cell", 1.0 + 0j, prequantum.parallel_transport(cell),
              cfg.tolerance(1e-10), "DERIVED")
    return rep


def cmd_cocycle_check(cfg: RunConfig) -> VerificationReport:
    rep = VerificationReport(cfg.command, cfg.provenance())
    rng = _rng(cfg)
    r = cfg.cocycle_range
    points = [prequantum.TorusModuliPoint(*rng.uniform(-1, 1, 2)) for _ in range(cfg.n_samples)]
    worst, worst_mod = 0.0, 0.0
    for m, n in itertools.product(range(-r, r + 1), repeat=2):
        c = prequantum.GaugeCharacter(m, n)
        for p in points:
            num = prequantum.cocycle_numeric(p, c, cfg.slab_grid)
            worst = max(worst, abs(num - prequantum.cocycle_exact(p, c)))
            worst_mod = max(worst_mod, abs(abs(num) - 1))
    rep.check("numeric_vs_exact_max_error", 0.0, worst, cfg.tolerance(1e-6), "DERIVED",
              f"|m|,|n| <= {r}, {len(points)} points, slab grid {list(cfg.slab_grid)}")
    rep.check("numeric_unit_modulus", 0.0, worst_mod, cfg.tolerance(1e-9), "TRIVIAL")

    trivial = max(abs(prequantum.cocycle_exact(p, prequantum.GaugeCharacter(0, 0)) - 1)
                  for p in points)
    rep.check("trivial_character", 0.0, trivial, 0.0, "TRIVIAL")

    battery = 0.0
    for _ in range(100):
        p = prequantum.TorusModuliPoint(*rng.uniform(-1, 1, 2))
        c1 = prequantum.GaugeCharacter(*rng.integers(-10, 11, 2))
        c2 = prequantum.GaugeCharacter(*rng.integers(-10, 11, 2))
        lhs = prequantum.cocycle_exact(p, c1) * prequantum.cocycle_exact(
            prequantum.gauge_action(p, c1), c2)
        rhs = prequantum.cocycle_exact(p, c1.then(c2))
        battery = max(battery, abs(lhs - rhs))
    rep.check("cocycle_identity", 0.0, battery, 1e-12, "TRIVIAL")
    return rep


def cmd_goldman(cfg: RunConfig):
    """Returns ``(report, pairing_matrix or None)``."""
    rep = VerificationReport(cfg.command, cfg.provenance())
    rng = _rng(cfg)
    g = cfg.genus
    target = -4j * np.pi
    tol = cfg.tolerance(1e-8)

    rho1 = repvar.sample_commuting_pair(rng)
    tc1 = twisted.build_twisted_complex(rho1)
    ta, tb = twisted.torus_tangents(tc1)
    rep.check("genus1_goldman", target, twisted.goldman_form(tc1, ta, tb), tol, "PAPER")
    dim1, _ = twisted.cohomology_dimension(tc1)
    rep.check("genus1_dim_H1", 2, dim1, None, "DERIVED")

    matrix = None
    if g == 1:
        basis = twisted.cohomology_basis(tc1)
        matrix = twisted.pairing_matrix(tc1, basis)
        return rep, matrix

    tcp = twisted.build_twisted_complex(repvar.pullback(rho1, g))
    pa, pb = twisted.torus_tangents(tcp)
    rep.check(f"genus{g}_pullback_goldman", target, twisted.goldman_form(tcp, pa, pb), tol,
              "DERIVED")

    for k in range(cfg.n_samples):
        rho = repvar.sample_flat(g, rng)
        name = f"sample{k}"
        if not repvar.is_irreducible(rho):
            rep.skip(name, "reducible sample")
            continue
        tc = twisted.build_twisted_complex(rho)
        try:
            dim, gap = twisted.cohomology_dimension(tc)
            basis = twisted.cohomology_basis(tc)
        except twisted.RankAmbiguity as exc:
            rep.skip(name, f"RankAmbiguity: {exc}")
            continue
        rep.check(f"{name}_dim_H1", 6 * g - 6, dim, None, "DERIVED",
                  f"singular-value gap {gap:.3e}")
        m = twisted.pairing_matrix(tc, basis)
        rep.check(f"{name}_antisymmetry", 0.0, float(np.abs(m + m.T).max()), 1e-9, "TRIVIAL")
        sv = np.linalg.svd(m, compute_uv=False)
        rep.check(f"{name}_nondegenerate", True, bool(sv[-1] / sv[0] > 1e-6), None, "DERIVED",
                  f"normalised smallest singular value {sv[-1] / sv[0]:.3e}")
        if matrix is None:
            matrix = m
    return rep, matrix


def cmd_sample_reps(cfg: RunConfig):
    """Returns ``(report, dataset_text)``."""
    rep = VerificationReport(cfg.command, cfg.provenance())
    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.n_samples)
    reps = []
    worst = 0.0
    for k, ss in enumerate(seeds):
        rho = repvar.sample_flat(cfg.genus, np.random.default_rng(ss))
        d = repvar.relator_defect(rho)
        worst = max(worst, d)
        reps.append((rho, {"index": k, "spawn_key": list(ss.spawn_key), "defect": d}))
    text = repvar.dump_dataset(reps, {"seed": cfg.seed, "genus": cfg.genus,
                                      "samples": cfg.n_samples, "version": __version__})
    rep.check("max_relator_defect", 0.0, worst, cfg.tolerance(1e-9), "DERIVED")
    _, _, loaded = repvar.load_dataset(text)
    again = repvar.dump_dataset(loaded, {"seed": cfg.seed, "genus": cfg.genus,
                                         "samples": cfg.n_samples, "version": __version__})
    rep.check("roundtrip_identical", True, again == text, None, "TRIVIAL")
    return rep, text


def _svg_heatmap(values: np.ndarray, title: str, cell: int = 24) -> str:
    n0, n1 = values.shape
    lo, hi = float(values.min()), float(values.max())
    span = hi - lo if hi > lo else 1.0
    rects = []
    for i in range(n0):
        for j in range(n1):
            level = int(255 * (values[i, j] - lo) / span)
            # row j=0 at the bottom
            rects.append(
                f'<rect x="{i * cell}" y="{(n1 - 1 - j) * cell}" width="{cell}" height="{cell}" '
                f'fill="rgb({level},{64},{255 - level})"/>'
            )
    w, h = n0 * cell, n1 * cell + 20
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}">'
            f'<text x="2" y="{h - 5}" font-size="12">{title} [{lo:.6g}, {hi:.6g}]</text>'
            + "".join(rects) + "</svg>\n")


def _svg_scatter(xy: np.ndarray, title: str, size: int = 300) -> str:
    pts = []
    for x, y in xy:
        cx = (x + 1) / 2 * (size - 20) + 10
        cy = (1 - (y + 1) / 2) * (size - 20) + 10
        pts.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="2" fill="black"/>')
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size + 20}">'
            f'<text x="2" y="{size + 15}" font-size="12">{title}</text>'
            + "".join(pts) + "</svg>\n")


def cmd_plot_data(cfg: RunConfig):
    """Returns ``(report, {filename: text})``."""
    if not cfg.input:
        raise ConfigError("plot-data needs --input (a report or a dataset)")
    try:
        text = Path(cfg.input).read_text()
    except OSError as exc:
        raise OSError(f"cannot read {cfg.input}: {exc}") from exc
    if not text.strip():
        raise ConfigError(f"{cfg.input} is empty")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{cfg.input} is not JSON: {exc}") from exc

    grid = cfg.grid
    if isinstance(doc, dict) and "provenance" in doc:
        grid = int(doc["provenance"].get("grid", grid))
    rep = VerificationReport(cfg.command, cfg.provenance())
    files: dict[str, str] = {}

    centres = (np.arange(grid) + 0.5) / grid
    curv = np.array([[prequantum.curvature_density((a, b)).imag for b in centres]
                     for a in centres])
    files["curvature.csv"] = _grid_csv(curv, ["i", "j", "a", "b", "curvature_im"])
    files["curvature.svg"] = _svg_heatmap(curv, "Im curvature")
    rep.check("curvature_constant", 0.0, float(curv.max() - curv.min()), 0.0, "TRIVIAL")

    try:
        phases = chern.plaquette_phases(prequantum.parallel_transport, grid)
        files["plaquette_phases.csv"] = _grid_csv(phases, ["i", "j", "a", "b", "phase"])
        files["plaquette_phases.svg"] = _svg_heatmap(phases, "plaquette phase")
        rep.check("plaquette_phase_sum", -4 * np.pi, float(phases.sum()),
                  cfg.tolerance(1e-9), "DERIVED")
    except chern.AdmissibilityError as exc:
        rep.fail("plaquette_phase_sum", -4 * np.pi, exc, "DERIVED")

    rows = []
    if isinstance(doc, dict) and doc.get("genus") == 1 and "representations" in doc:
        _, _, loaded = repvar.load_dataset(text)
        worst = 0.0
        for rho, _ in loaded:
            u, v, ab = repvar.trace_coordinates(rho, [[(0, 1)], [(1, 1)], [(0, 1), (1, 1)]])
            u, v = u / 2, v / 2
            # a, b up to the Weyl sign, read off along the common axis
            axis = twisted.torus_direction(rho)
            a, b = (np.arctan2(h.vec @ axis, h.w) / (2 * np.pi) % 1.0 for h in rho.holonomies)
            rows.append((a, b, u, v, u * v - ab / 2))
            worst = max(worst, float(np.abs(quotient.quotient_map((a, b)).as_array()
                                            - rows[-1][2:]).max()))
        rep.check("pillowcase_trace_consistency", 0.0, worst, cfg.tolerance(1e-10), "DERIVED")
    else:
        rng = _rng(cfg)
        for _ in range(cfg.n_samples):
            a, b = rng.uniform(0, 1, 2)
            q = quotient.quotient_map((a, b))
            rows.append((a, b, q.u, q.v, q.w))
    arr = np.array(rows)
    files["pillowcase.csv"] = "a,b,u,v,w\n" + "".join(
        ",".join(repr(float(x)) for x in row) + "\n" for row in arr)
    files["pillowcase.svg"] = _svg_scatter(arr[:, [2, 4]], "pillowcase (u, w)")
    rel = np.abs((1 - arr[:, 2] ** 2) * (1 - arr[:, 3] ** 2) - arr[:, 4] ** 2).max()
    rep.check("pillowcase_relation", 0.0, float(rel), cfg.tolerance(1e-10), "DERIVED")
    return rep, files


def _grid_csv(values: np.ndarray, header) -> str:
    n = values.shape[0]
    lines = [",".join(header)]
    for i in range(n):
        for j in range(values.shape[1]):
            lines.append(f"{i},{j},{(i + 0.5) / n!r},{(j + 0.5) / n!r},{float(values[i, j])!r}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- driver


def _emit_report(rep: VerificationReport, cfg: RunConfig, path: str | None) -> None:
    text = rep.to_json() if cfg.format == "json" else rep.to_csv()
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def run(cfg: RunConfig) -> int:
    if cfg.command == "verify-genus1":
        rep = cmd_verify_genus1(cfg)
        _emit_report(rep, cfg, cfg.out)
    elif cfg.command == "cocycle-check":
        rep = cmd_cocycle_check(cfg)
        _emit_report(rep, cfg, cfg.out)
    elif cfg.command == "goldman":
        rep, matrix = cmd_goldman(cfg)
        _emit_report(rep, cfg, cfg.out)
        if cfg.out and matrix is not None:
            Path(cfg.out).with_suffix(".pairing.csv").write_text(
                twisted.pairing_matrix_csv(matrix))
    elif cfg.command == "sample-reps":
        rep, text = cmd_sample_reps(cfg)
        if cfg.out:
            Path(cfg.out).write_text(text)
        _emit_report(rep, cfg, None)
    else:
        rep, files = cmd_plot_data(cfg)
        outdir = Path(cfg.out or "plot-data")
        outdir.mkdir(parents=True, exist_ok=True)
        for name, body in files.items():
            (outdir / name).write_text(body)
        _emit_report(rep, cfg, None)
    for r in rep.records:
        log.info("%-4s %s", r.status.upper(), r.name)
    return EXIT_OK if rep.passed else EXIT_CHECK


def main(argv=None) -> int:
    try:
        cfg = config_from_args(argv)
    except ConfigError as exc:
        print(f"csbundle: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    logging.basicConfig(level=logging.WARNING - 10 * min(cfg.verbose, 2),
                        format="%(levelname)s %(message)s")
    try:
        return run(cfg)
    except ConfigError as exc:
        print(f"csbundle: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"csbundle: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
