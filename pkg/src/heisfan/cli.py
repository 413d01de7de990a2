"""Command-line front end.

Eight subcommands drive the library's enumeration, construction, and
verification workflows and write CSV/JSON artifacts (plus companion figures
unless ``--no-figures``):

  spectrum        joint spectrum table with multiplicities and labels
  fan             one row per label with per-copy |alpha| and 2n+1
  htype-spectrum  weighted-sum spectrum on a higher-dimensional quotient
  eigen-eval      sample one eigenfunction on a grid and self-check it
  ql-converge     ladder diagnostics with declared convergence predictions
  ql-invariance   flow-invariance defect table for one ladder element
  disintegrate    cone-cell masses of a mixture ladder
  split           energy-ratio splitting of one eigenvalue's label space

Exit status: 0 on success, 2 on a validation error, 3 when a declared
verification (prediction, residual bound, or quadrature certificate) fails.
Runs are configured by flags layered over an optional INI file (flags win),
and every artifact records the fully resolved configuration.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import os
import re
import sys

import numpy as np

from . import config as config_mod
from . import quantum_limits as ql
from . import reporting
from .config import ConfigError, ExperimentConfig
from .cones import cone_masses, limit_histogram, refinement_check, split_by_energy_ratio
from .eigenfunctions import (
    MixtureAtom,
    MixtureComponent,
    QuotientEigenfunction,
    evaluation_grid,
    line_sequence,
    localized_state,
    prescribed_limit_sequence,
    single_mode,
    write_grid_csv,
    write_grid_manifest,
)
from .modes import FourierMode, LandauMode
from .pairing import QuadratureError
from .spectrum import (
    Fourier,
    Landau,
    fan_points,
    htype_spectrum,
    product_spectrum,
)

OK, VALIDATION_ERROR, VERIFICATION_FAILURE = 0, 2, 3

RESIDUAL_TOL = 1e-8
ORTHOGONALITY_TOL = 1e-10


# ---- config resolution ----


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="INI file with a [run] section")
    sub.add_argument("--out", help="output directory, or a .csv/.json path")
    sub.add_argument("--threads", type=int, help="worker threads (default: cores)")
    sub.add_argument("--seed", type=int, help="seed for sampled self-checks")
    sub.add_argument("--resolution", type=int, help="grid resolution override")
    sub.add_argument(
        "--no-figures",
        action="store_true",
        help="skip companion figure files",
    )


_FLAG_FIELDS = {
    "m": "m",
    "lam": "cutoff",
    "depth": "depth",
    "tau": "tau",
    "copies": "copies",
    "levels": "levels",
    "ratios": "ratios",
    "shifts": "shifts",
    "mixture": "mixture",
    "preset": "preset",
    "state": "state",
    "k": "k_spec",
    "axes": "axes",
    "fixed": "fixed",
    "center": "center",
    "width": "width",
    "d": "d",
    "beta": "beta",
    "lambda_pair": "lambda_pair",
    "flow": "flow",
    "times": "times",
    "resolution": "resolution",
    "out": "out_dir",
    "threads": "threads",
    "seed": "seed",
    "label_budget": "label_budget",
}


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    """Layer CLI flags over the config file (flags win), then validate."""
    if getattr(args, "config", None):
        cfg = config_mod.load_file(args.config)
    else:
        cfg = ExperimentConfig()
    updates = {"command": args.command}
    for attr, field in _FLAG_FIELDS.items():
        value = getattr(args, attr, None)
        if value is not None:
            updates[field] = value
    if getattr(args, "no_figures", False):
        updates["figures"] = False
    cfg = dataclasses.replace(cfg, **updates)
    if cfg.threads == 0:
        env = os.environ.get("HEISFAN_THREADS", "").strip()
        if env:
            try:
                cfg = dataclasses.replace(cfg, threads=int(env))
            except ValueError as exc:
                raise ConfigError(f"bad HEISFAN_THREADS value {env!r}") from exc
    cfg.validate()
    return cfg


def _worker_count(cfg: ExperimentConfig) -> int:
    return cfg.threads if cfg.threads > 0 else (os.cpu_count() or 1)


def artifact_paths(cfg: ExperimentConfig, stem: str) -> dict[str, str]:
    """Output paths; ``--out`` may be a directory or a .csv/.json file path."""
    out = cfg.out_dir
    root, ext = os.path.splitext(out)
    if ext.lower() in (".csv", ".json"):
        directory = os.path.dirname(out) or "."
        base = os.path.basename(root)
        os.makedirs(directory, exist_ok=True)
        paths = {
            "csv": os.path.join(directory, base + ".csv"),
            "json": os.path.join(directory, base + ".json"),
            "png": os.path.join(directory, base + ".png"),
        }
        paths[ext.lower().lstrip(".")] = out
        return paths
    os.makedirs(out, exist_ok=True)
    return {
        "csv": os.path.join(out, stem + ".csv"),
        "json": os.path.join(out, stem + ".json"),
        "png": os.path.join(out, stem + ".png"),
    }


def _header(cfg: ExperimentConfig) -> list[str]:
    return config_mod.header_lines(cfg)


def _header_dict(cfg: ExperimentConfig) -> dict:
    out = {}
    for line in config_mod.header_lines(cfg):
        key, _, value = line.partition(" = ")
        out[key] = value
    return out


# ---- state and mixture grammars ----

_LANDAU_RE = re.compile(r"^L\((-?\d+),(-?\d+)(?:,(\d+))?\)$")
_FOURIER_RE = re.compile(r"^F\((-?\d+),(-?\d+)\)$")


def parse_state(text: str) -> QuotientEigenfunction:
    """One mode per copy: 'L(n,alpha[,sector])|F(k,l)|C' and so on."""
    modes = []
    for part in text.replace(" ", "").split("|"):
        if part == "C":
            modes.append(FourierMode(0, 0))
            continue
        match = _LANDAU_RE.match(part)
        if match:
            n, alpha = int(match.group(1)), int(match.group(2))
            sector = int(match.group(3) or 0)
            modes.append(LandauMode(n, alpha, sector))
            continue
        match = _FOURIER_RE.match(part)
        if match:
            modes.append(FourierMode(int(match.group(1)), int(match.group(2))))
            continue
        raise ConfigError(f"bad mode {part!r}; use L(n,alpha[,sector]), F(k,l), or C")
    return single_mode(*modes)


def parse_mixture(text: str, m: int) -> tuple[MixtureComponent, ...]:
    """Components 'weight:copies:levels:ratios[:shifts]' separated by ';'.

    Copies are one-based; each component carries a single atom.
    """
    components = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        fields = chunk.split(":")
        if len(fields) not in (4, 5):
            raise ConfigError(f"bad mixture component {chunk!r}")
        weight = float(fields[0])
        copies = tuple(int(v) - 1 for v in fields[1].split(","))
        levels = tuple(int(v) for v in fields[2].split(","))
        ratios = tuple(int(v) for v in fields[3].split(","))
        shifts = (
            tuple(int(v) for v in fields[4].split(",")) if len(fields) == 5 else None
        )
        if any(not 0 <= j < m for j in copies):
            raise ConfigError(f"mixture copies {fields[1]!r} outside 1..{m}")
        components.append(
            MixtureComponent(
                weight, copies, levels, (MixtureAtom(1.0, ratios, None, shifts),)
            )
        )
    if not components:
        raise ConfigError("empty mixture")
    return tuple(components)


# ---- ladder presets ----


def _diagonal_components() -> tuple[MixtureComponent, ...]:
    """Equal-eigenvalue two-frequency superposition on both copies of m=2:
    frequency vectors t*(1,1) and (t+1, t-1) share lambda and differ along
    the antidiagonal, so the (1/2,1/2) flow is a symmetry and the (1,0) flow
    is not."""
    return (
        MixtureComponent(
            1.0,
            (0, 1),
            (0, 0),
            (
                MixtureAtom(0.5, (1, 1), None, (0, 0)),
                MixtureAtom(0.5, (1, 1), None, (1, -1)),
            ),
        ),
    )


def _cone_mixture_components() -> tuple[MixtureComponent, ...]:
    """Two-component mixture on both copies of m=2 whose limiting cone
    directions are (1/2,1/2) (levels 0,0) and (1/4,3/4) (levels 0,1) with
    masses 0.36 and 0.64."""
    return (
        MixtureComponent(0.36, (0, 1), (0, 0), (MixtureAtom(1.0, (1, 1)),)),
        MixtureComponent(0.64, (0, 1), (0, 1), (MixtureAtom(1.0, (1, 1)),)),
    )


def _preset_m(cfg: ExperimentConfig, preset: str) -> int:
    if preset in ("diagonal", "cone-mixture"):
        if cfg.m not in (1, 2):
            raise ConfigError(f"preset {preset!r} needs m=2")
        return 2
    return cfg.m


def ladder_builder(cfg: ExperimentConfig):
    """Return (m, builder, sequence name) for the configured preset."""
    preset = cfg.preset or "localized"
    m = _preset_m(cfg, preset)
    if preset == "localized":
        copies = cfg.copy_indices() or (0,)
        if len(copies) != 1:
            raise ConfigError("preset localized uses exactly one copy")
        levels = cfg.level_list() or (0,)
        center = cfg.center_point()

        def build(k: int) -> QuotientEigenfunction:
            return line_sequence(
                m, copies, levels, (1,), k, (center,), cfg.width
            )

        return m, build, f"localized(copy={copies[0] + 1},level={levels[0]})"
    if preset == "line":
        copies = cfg.copy_indices(default_all=True)
        levels = cfg.level_list() or tuple(0 for _ in copies)
        ratios = cfg.ratio_list() or tuple(1 for _ in copies)
        center = cfg.center_point()
        centers = tuple(center for _ in copies)

        def build(k: int) -> QuotientEigenfunction:
            return line_sequence(m, copies, levels, ratios, k, centers, cfg.width)

        return m, build, f"line(ratios={','.join(map(str, ratios))})"
    if preset == "diagonal":
        components = _diagonal_components()

        def build(k: int) -> QuotientEigenfunction:
            return prescribed_limit_sequence(2, components, k, cfg.width)

        return 2, build, "diagonal"
    if preset == "cone-mixture":
        components = _cone_mixture_components()

        def build(k: int) -> QuotientEigenfunction:
            return prescribed_limit_sequence(2, components, k, cfg.width)

        return 2, build, "cone-mixture(0.36,0.64)"
    if preset == "mixture":
        if not cfg.mixture.strip():
            raise ConfigError("preset mixture needs --mixture components")
        components = parse_mixture(cfg.mixture, cfg.m)

        def build(k: int) -> QuotientEigenfunction:
            return prescribed_limit_sequence(cfg.m, components, k, cfg.width)

        return cfg.m, build, "mixture"
    raise ConfigError(f"unknown preset {preset!r}")


def preset_predictions(cfg: ExperimentConfig, m: int) -> list[ql.Prediction]:
    preset = cfg.preset or "localized"
    if preset == "localized":
        copy = (cfg.copy_indices() or (0,))[0]
        return [
            ql.BallMass(copy, cfg.center_point(), 0.4, 0.1),
            ql.UniformMarginal(f"z_{copy + 1}", 1e-10),
        ]
    if preset == "line":
        copies = cfg.copy_indices(default_all=True)
        return [ql.UniformMarginal(f"z_{j + 1}", 1e-10) for j in copies]
    if preset == "diagonal":
        return [
            ql.FlowInvariance((0.5, 0.5), (math.pi / 4, math.pi / 2, math.pi), 1e-8),
            ql.TransverseDefect((1.0, 0.0), math.pi, 0.01),
            ql.DifferenceLine(0, 1, 1e-8),
        ]
    return []


def preset_defect_probes(cfg: ExperimentConfig) -> list[tuple[tuple[float, ...], float]]:
    if (cfg.preset or "localized") == "diagonal":
        return [((0.5, 0.5), math.pi), ((1.0, 0.0), math.pi)]
    return []


# ---- subcommand bodies ----


def cmd_spectrum(cfg: ExperimentConfig) -> int:
    table = product_spectrum(cfg.m, cfg.cutoff, cfg.label_budget)
    paths = artifact_paths(cfg, "spectrum")
    reporting.write_spectrum_csv(table, paths["csv"], _header(cfg))
    body = {
        "m": table.m,
        "cutoff": table.cutoff,
        "entries": [
            {
                "eigenvalue": e.eigenvalue,
                "multiplicity": e.multiplicity,
                "labels": [str(lbl) for lbl in e.labels],
            }
            for e in table.entries
        ],
    }
    reporting.write_json(paths["json"], body, _header_dict(cfg))
    if cfg.figures:
        reporting.render_spectrum(table, paths["png"])
    print(f"{len(table.entries)} eigenvalues up to {cfg.cutoff:g} -> {paths['csv']}")
    return OK


def cmd_fan(cfg: ExperimentConfig) -> int:
    points = fan_points(cfg.m, cfg.cutoff, cfg.label_budget)
    paths = artifact_paths(cfg, "fan")
    reporting.write_fan_csv(points, cfg.m, paths["csv"], _header(cfg))
    if cfg.figures:
        reporting.render_fan(points, cfg.m, paths["png"])
    print(f"{len(points)} labels up to {cfg.cutoff:g} -> {paths['csv']}")
    return OK


def cmd_htype(cfg: ExperimentConfig) -> int:
    beta = cfg.beta_list()
    if len(beta) != cfg.d:
        raise ConfigError(f"beta needs {cfg.d} weights, got {len(beta)}")
    entries = htype_spectrum(cfg.d, beta, cfg.cutoff)
    paths = artifact_paths(cfg, "htype")
    reporting.write_htype_csv(entries, paths["csv"], _header(cfg))
    if cfg.figures:
        reporting.render_htype(entries, paths["png"])
    print(f"{len(entries)} eigenvalues up to {cfg.cutoff:g} -> {paths['csv']}")
    return OK


def cmd_eigen_eval(cfg: ExperimentConfig) -> int:
    if cfg.preset == "localized":
        levels = cfg.level_list() or (0,)
        ratios = cfg.ratio_list() or (3,)
        phi = localized_state(levels[0], ratios[0], cfg.center_point(), cfg.width)
    elif cfg.state.strip():
        phi = parse_state(cfg.state)
    else:
        raise ConfigError("eigen-eval needs --state or --preset localized")
    axes = cfg.axis_list() or ("x_1", "y_1")
    grid = evaluation_grid(phi, list(axes), cfg.resolution, cfg.fixed_map())

    rng = np.random.default_rng(cfg.seed)
    pts = rng.uniform(0.0, 1.0, size=(64, phi.m, 3))
    pts[..., :2] *= math.sqrt(2 * math.pi)
    pts[..., 2] *= 2 * math.pi
    values = phi.evaluate(pts)
    residual = phi.minus_delta(pts) - phi.eigenvalue * values
    scale = float(np.max(np.abs(values)))
    max_residual = float(np.max(np.abs(residual))) / max(scale, 1e-300)

    paths = artifact_paths(cfg, "grid")
    write_grid_csv(grid, paths["csv"], _header(cfg))
    write_grid_manifest(
        grid,
        paths["json"],
        {"config": _header_dict(cfg), "max_relative_residual": max_residual},
    )
    if cfg.figures:
        reporting.render_grid(grid, paths["png"])
    print(
        f"eigenvalue {phi.eigenvalue:.17g}, max relative residual {max_residual:.3e}"
        f" -> {paths['csv']}"
    )
    if max_residual > RESIDUAL_TOL:
        print(
            f"residual {max_residual:.3e} exceeds {RESIDUAL_TOL:g}", file=sys.stderr
        )
        return VERIFICATION_FAILURE
    return OK


def cmd_ql_converge(cfg: ExperimentConfig) -> int:
    m, build, name = ladder_builder(cfg)
    cfg = dataclasses.replace(cfg, m=m)
    ks = cfg.k_list() if cfg.k_spec.strip() else tuple(range(3, 11))
    predictions = preset_predictions(cfg, m)
    report = ql.convergence_report(
        name,
        build,
        ks,
        predictions,
        defect_probes=preset_defect_probes(cfg),
        threads=_worker_count(cfg),
    )
    paths = artifact_paths(cfg, "ql_converge")
    report.to_json(paths["json"], {"config": _header_dict(cfg)})
    rows = []
    for test_name, row in sorted(report.pairings.items()):
        for k in sorted(row, key=int):
            rows.append((test_name, k, reporting.fmt(row[k])))
    reporting.write_table(
        paths["csv"], ["test", "k", "pairing"], rows, _header(cfg)
    )
    if cfg.figures:
        reporting.render_pairings(report, paths["png"])
        if report.defects:
            root, _ = os.path.splitext(paths["png"])
            reporting.render_defects(report, root + "_defects.png")
    for vname, verdict in sorted(report.verdicts.items()):
        status = "pass" if verdict["passed"] else "FAIL"
        print(f"{status}: {vname}")
    print(f"report -> {paths['json']}")
    if not report.all_passed:
        failed = [v for v, r in report.verdicts.items() if not r["passed"]]
        print(f"failed predictions: {', '.join(sorted(failed))}", file=sys.stderr)
        return VERIFICATION_FAILURE
    return OK


def cmd_ql_invariance(cfg: ExperimentConfig) -> int:
    if not cfg.preset:
        cfg = dataclasses.replace(cfg, preset="diagonal")
    m, build, name = ladder_builder(cfg)
    cfg = dataclasses.replace(cfg, m=m)
    ks = cfg.k_list() if cfg.k_spec.strip() else (3,)
    phi = build(ks[-1])
    directions: list[tuple[str, tuple[float, ...]]] = []
    if cfg.flow.strip():
        directions.append(("flow", cfg.flow_weights()))
    else:
        directions.append(("flow", tuple([1.0 / m] * m)))
    transverse: tuple[float, ...] | None = None
    if m > 1:
        transverse = tuple([1.0] + [0.0] * (m - 1))
        directions.append(("transverse", transverse))
    times = cfg.time_list()
    rows = []
    table: dict[str, dict[str, float]] = {}
    for role, weights in directions:
        label = ",".join(f"{w:g}" for w in weights)
        for t in times:
            defect = ql.invariance_defect(phi, weights, t)
            rows.append((role, label, reporting.fmt(t), reporting.fmt(defect)))
            table.setdefault(f"{role}({label})", {})[reporting.fmt(t)] = defect

    paths = artifact_paths(cfg, "ql_invariance")
    reporting.write_table(
        paths["csv"], ["role", "weights", "t", "defect"], rows, _header(cfg)
    )
    body = {"sequence": name, "k": ks[-1], "defects": table}
    reporting.write_json(paths["json"], body, _header_dict(cfg))
    if cfg.figures:
        indexed = {
            key: {str(i): v for i, v in enumerate(vals.values())}
            for key, vals in table.items()
        }
        report = ql.EmpiricalReport(name, [ks[-1]], {}, indexed, [], {})
        reporting.render_defects(report, paths["png"])

    failures = []
    for key, perts in table.items():
        if key.startswith("flow("):
            worst = max(perts.values())
            print(f"flow defect max {worst:.3e} ({key})")
            if worst > 1e-8:
                failures.append(f"{key} defect {worst:.3e} > 1e-08")
        else:
            best = min(perts.values())
            print(f"transverse defect min {best:.3e} ({key})")
            if best < 0.01:
                failures.append(f"{key} defect {best:.3e} < 0.01")
    print(f"table -> {paths['csv']}")
    if failures:
        for item in failures:
            print(item, file=sys.stderr)
        return VERIFICATION_FAILURE
    return OK


def cmd_disintegrate(cfg: ExperimentConfig) -> int:
    if not cfg.preset and not cfg.mixture.strip():
        cfg = dataclasses.replace(cfg, preset="cone-mixture")
    elif cfg.mixture.strip() and not cfg.preset:
        cfg = dataclasses.replace(cfg, preset="mixture")
    m, build, name = ladder_builder(cfg)
    cfg = dataclasses.replace(cfg, m=m)
    ks = cfg.k_list() if cfg.k_spec.strip() else (1, 2, 3)
    threads = _worker_count(cfg)
    if threads > 1 and len(ks) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            phis = list(pool.map(build, ks))
    else:
        phis = [build(k) for k in ks]
    copies = cfg.copy_indices()
    if not copies:
        copies = tuple(sorted({j for phi in phis for j in _active_copies(phi)}))
    if not copies:
        raise ConfigError("no active copies to disintegrate over")

    def defect_fn(piece: QuotientEigenfunction, center: tuple[float, ...]) -> float:
        weights = _direction_from_center(center, m, copies)
        return ql.invariance_defect(piece, weights, math.pi)

    final = phis[-1]
    report = cone_masses(final, copies, cfg.depth, defect_fn)
    histogram = limit_histogram(phis, copies, cfg.depth)
    refinement = (
        refinement_check(final, copies, cfg.depth - 1) if cfg.depth >= 1 else 0.0
    )

    paths = artifact_paths(cfg, "disintegration")
    rows = []
    for cell in report.cells:
        bounds = ";".join(f"[{reporting.fmt(b[0])},{reporting.fmt(b[1])}]" for b in cell.simplex_bounds)
        rows.append(
            (str(cell.index), bounds, reporting.fmt(cell.mass), reporting.fmt(cell.defect))
        )
    reporting.write_table(
        paths["csv"],
        ["index", "simplex_bounds", "mass", "defect"],
        rows,
        _header(cfg),
    )
    report.to_json(
        paths["json"],
        {
            "config": _header_dict(cfg),
            "sequence": name,
            "k": ks[-1],
            "refinement_discrepancy": refinement,
            "ladder": histogram,
        },
    )
    if cfg.figures:
        reporting.render_cone_masses(report, paths["png"])
        root, _ = os.path.splitext(paths["png"])
        reporting.render_histogram_table(histogram, root + "_ladder.png")
    print(
        f"{len(report.cells)} occupied cells at depth {cfg.depth}, total mass "
        f"{report.total_mass:.17g} -> {paths['json']}"
    )
    if abs(report.total_mass - final.norm_squared()) > 1e-8:
        print("cell masses do not add up to the squared norm", file=sys.stderr)
        return VERIFICATION_FAILURE
    return OK


def _active_copies(phi: QuotientEigenfunction) -> frozenset[int]:
    for _, modes in phi.terms:
        return frozenset(
            j for j, mode in enumerate(modes) if isinstance(mode, LandauMode)
        )
    return frozenset()


def _direction_from_center(
    center: tuple[float, ...], m: int, copies: tuple[int, ...]
) -> tuple[float, ...]:
    weights = [0.0] * m
    for value, j in zip(center, copies):
        weights[j] = value
    total = sum(weights)
    if total <= 0:
        return tuple([1.0 / m] * m)
    return tuple(w / total for w in weights)


def _labels_at_pair(m: int, key: tuple[int, int]):
    margin = 0.5
    cutoff = key[0] + 2 * math.pi * key[1] + margin
    table = product_spectrum(m, cutoff)
    for entry in table.entries:
        if entry.labels and entry.labels[0].key == key:
            return entry.labels
    return ()


def cmd_split(cfg: ExperimentConfig) -> int:
    key = cfg.eigenvalue_pair()
    labels = _labels_at_pair(cfg.m, key)
    if not labels:
        raise ConfigError(
            f"{cfg.lambda_pair!r} is not in the joint spectrum for m={cfg.m}"
        )
    weight = 1.0 / math.sqrt(len(labels))
    terms = []
    for label in labels:
        modes = tuple(
            LandauMode(b.n, b.alpha, 0) if isinstance(b, Landau) else FourierMode(b.k, b.l)
            for b in label.branches
        )
        terms.append((weight, modes))
    phi = QuotientEigenfunction(cfg.m, tuple(terms))
    pieces = split_by_energy_ratio(phi, cfg.tau)

    ordered = sorted(pieces.items(), key=lambda kv: (len(kv[0]), sorted(kv[0])))
    listing = []
    for copies, piece in ordered:
        mass = sum(piece.label_masses().values())
        listing.append(
            {
                "copies": sorted(j + 1 for j in copies),
                "copies_label": "{" + ",".join(str(j + 1) for j in sorted(copies)) + "}",
                "mass": mass,
                "labels": sorted(str(lbl) for lbl in piece.label_masses()),
            }
        )
    worst = 0.0
    for i in range(len(ordered)):
        for j in range(i + 1, len(ordered)):
            worst = max(worst, abs(ordered[i][1].inner(ordered[j][1])))

    paths = artifact_paths(cfg, "split")
    rows = (
        (
            p["copies_label"],
            reporting.fmt(p["mass"]),
            ";".join(p["labels"]),
        )
        for p in listing
    )
    reporting.write_table(paths["csv"], ["copies", "mass", "labels"], rows, _header(cfg))
    body = {
        "eigenvalue": phi.eigenvalue,
        "eigenvalue_pair": list(key),
        "tau": cfg.tau,
        "pieces": listing,
        "max_cross_inner": worst,
    }
    reporting.write_json(paths["json"], body, _header_dict(cfg))
    if cfg.figures:
        reporting.render_split(listing, paths["png"])
    for p in listing:
        print(f"piece {p['copies_label']}: mass {p['mass']:.17g}")
    print(f"max cross inner product {worst:.3e} -> {paths['json']}")
    if worst > ORTHOGONALITY_TOL:
        print("split pieces are not orthogonal", file=sys.stderr)
        return VERIFICATION_FAILURE
    total = sum(p["mass"] for p in listing)
    if abs(total - 1.0) > 1e-10:
        print(f"piece masses sum to {total}, expected 1", file=sys.stderr)
        return VERIFICATION_FAILURE
    return OK


# ---- parser ----


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heisfan",
        description="Joint spectra, eigenfunctions, and quantum-limit diagnostics "
        "on products of compact Heisenberg quotients.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("spectrum", help="joint spectrum with multiplicities")
    sub.add_argument("--m", type=int)
    sub.add_argument("--lambda", dest="lam", type=float)
    sub.add_argument("--label-budget", dest="label_budget", type=int)
    _add_common(sub)

    sub = subs.add_parser("fan", help="per-label fan records of the joint spectrum")
    sub.add_argument("--m", type=int)
    sub.add_argument("--lambda", dest="lam", type=float)
    sub.add_argument("--label-budget", dest="label_budget", type=int)
    _add_common(sub)

    sub = subs.add_parser("htype-spectrum", help="weighted-sum spectrum, single center")
    sub.add_argument("--d", type=int)
    sub.add_argument("--beta")
    sub.add_argument("--lambda", dest="lam", type=float)
    _add_common(sub)

    sub = subs.add_parser("eigen-eval", help="sample one eigenfunction on a grid")
    sub.add_argument("--state", help="modes per copy, e.g. 'L(0,2)|F(1,0)'")
    sub.add_argument("--preset", choices=["localized"])
    sub.add_argument("--levels")
    sub.add_argument("--ratios", help="hosts the frequency for preset localized")
    sub.add_argument("--center")
    sub.add_argument("--width", type=float)
    sub.add_argument("--axes", help="up to three of x_j,y_j,z_j")
    sub.add_argument("--fixed", help="fixed coordinates, e.g. 'z_1=0.5'")
    _add_common(sub)

    sub = subs.add_parser("ql-converge", help="ladder diagnostics with predictions")
    sub.add_argument(
        "--preset", choices=["localized", "line", "diagonal", "cone-mixture", "mixture"]
    )
    sub.add_argument("--m", type=int)
    sub.add_argument("--k", help="ladder, e.g. '3..10' or '2,4,8'")
    sub.add_argument("--copies")
    sub.add_argument("--levels")
    sub.add_argument("--ratios")
    sub.add_argument("--mixture")
    sub.add_argument("--center")
    sub.add_argument("--width", type=float)
    _add_common(sub)

    sub = subs.add_parser("ql-invariance", help="flow defects for one ladder element")
    sub.add_argument(
        "--preset", choices=["localized", "line", "diagonal", "cone-mixture", "mixture"]
    )
    sub.add_argument("--m", type=int)
    sub.add_argument("--k", help="ladder; the last element is used")
    sub.add_argument("--flow", help="flow weights, e.g. '0.5,0.5'")
    sub.add_argument("--times", help="flow times, e.g. '0.785,1.571,3.142'")
    sub.add_argument("--mixture")
    sub.add_argument("--width", type=float)
    _add_common(sub)

    sub = subs.add_parser("disintegrate", help="cone-cell masses of a mixture ladder")
    sub.add_argument(
        "--preset", choices=["localized", "line", "diagonal", "cone-mixture", "mixture"]
    )
    sub.add_argument("--m", type=int)
    sub.add_argument("--k")
    sub.add_argument("--depth", type=int)
    sub.add_argument("--copies", help="one-based copies spanning the cone simplex")
    sub.add_argument("--mixture")
    sub.add_argument("--width", type=float)
    _add_common(sub)

    sub = subs.add_parser("split", help="energy-ratio splitting at one eigenvalue")
    sub.add_argument("--m", type=int)
    sub.add_argument(
        "--lambda-pair", dest="lambda_pair", help="exact eigenvalue, e.g. '1+2pi'"
    )
    sub.add_argument("--tau", type=float)
    _add_common(sub)

    return parser


_COMMANDS = {
    "spectrum": cmd_spectrum,
    "fan": cmd_fan,
    "htype-spectrum": cmd_htype,
    "eigen-eval": cmd_eigen_eval,
    "ql-converge": cmd_ql_converge,
    "ql-invariance": cmd_ql_invariance,
    "disintegrate": cmd_disintegrate,
    "split": cmd_split,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "split":
        if not (getattr(args, "lambda_pair", None) or getattr(args, "config", None)):
            print("split needs --lambda-pair or --config", file=sys.stderr)
            return VALIDATION_ERROR
        # an eigenvalue with both an integer and a 2 pi part needs m >= 2
        if args.m is None and args.config is None:
            args.m = 2
    try:
        cfg = resolve_config(args)
        return _COMMANDS[args.command](cfg)
    except QuadratureError as exc:
        print(f"quadrature did not certify: {exc}", file=sys.stderr)
        return VERIFICATION_FAILURE
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return VALIDATION_ERROR


if __name__ == "__main__":
    sys.exit(main())
