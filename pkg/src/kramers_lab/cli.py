"""
Config-driven runs, sweeps and report emission.

A run reads a TOML config, assembles one Hamiltonian, runs the requested
checks in dependency order (commutation, degeneracy, semigroup) and writes
``report.json`` plus ``clusters.csv``. Exit codes: 0 all requested checks
pass (expected failures included), 1 a check was violated, 2 configuration
or build error.
"""

from __future__ import annotations

import argparse
import copy
import csv
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from . import __version__
from .fock import (
    DEFAULT_DIM_CAP,
    DimensionCapError,
    build_modes,
    enumerate_basis,
    read_kpoints,
)
from .operators import (
    GridSpec,
    build_field_operators,
    build_HN_toy,
    build_HP,
    build_HPF_grid,
    export_triplets,
)
from .semigroup import (
    SEMIGROUP_TOL,
    ExpNegT,
    IndicatorBelow,
    ResolventShift,
    expm_crosscheck,
    jreal_generalization_check,
    semigroup_law_residual,
    theta_function_commutes,
    vacuum_expectation_check,
)
from .spectral import ConvergenceError, cluster, diagonalize, kramers_report
from .symmetry import (
    MEMBERSHIP_TOL,
    Involution,
    algebra_closure_test,
    check_commutes,
    reality_residual,
    symmetry_breaking_probe,
    theta_for,
)

SCHEMA_VERSION = 1
CHECKS = ("kramers", "semigroup", "jreal", "algebra", "negative_control")
HAMILTONIANS = ("fixed_momentum", "grid", "nspin")
SWEEP_AXES = ("e", "P_z", "N_max")
NEGATIVE_CONTROL_MIN = 1e-2


class ConfigError(ValueError):
    """Invalid or unparseable run configuration."""


@dataclass
class RunConfig:
    kpoints: list
    N_max: int
    P: tuple = (0.0, 0.0, 0.0)
    e: float = 0.0
    g_spin: float | str = "half-e"
    hamiltonian: str = "fixed_momentum"
    polarizations: tuple = (1, 2)
    mode_count: int | None = None
    grid: dict | None = None
    N_spins: int = 1
    checks: tuple = ("kramers",)
    gap: float = 1e-8
    t_values: tuple = (0.1, 1.0, 10.0)
    seed: int = 0
    dim_cap: int = DEFAULT_DIM_CAP

    def __post_init__(self):
        self.validate()

    def validate(self):
        def finite(name, x):
            try:
                ok = all(math.isfinite(float(v)) for v in np.ravel(x))
            except (TypeError, ValueError):
                ok = False
            if not ok:
                raise ConfigError(f"{name} must be finite numbers, got {x!r}")

        if not isinstance(self.N_max, (int, np.integer)) or self.N_max < 0:
            raise ConfigError(f"N_max must be a non-negative integer, got {self.N_max!r}")
        finite("P", self.P)
        if len(self.P) != 3:
            raise ConfigError(f"P must have 3 components, got {self.P!r}")
        finite("e", self.e)
        if self.g_spin != "half-e":
            finite("g_spin", self.g_spin)
        if not (isinstance(self.gap, (int, float)) and self.gap > 0 and math.isfinite(self.gap)):
            raise ConfigError(f"gap must be a positive finite number, got {self.gap!r}")
        finite("t_values", self.t_values)
        if any(t < 0 for t in self.t_values):
            raise ConfigError("t_values must be non-negative")
        if self.hamiltonian not in HAMILTONIANS:
            raise ConfigError(f"hamiltonian must be one of {HAMILTONIANS}, got {self.hamiltonian!r}")
        bad = set(self.checks) - set(CHECKS)
        if bad:
            raise ConfigError(f"unknown checks {sorted(bad)}; allowed {CHECKS}")
        if not self.kpoints:
            raise ConfigError("no k-points given")
        for row in self.kpoints:
            if len(row) != 4:
                raise ConfigError(f"k-point rows are (kx, ky, kz, weight), got {row!r}")
            finite("k-point", row)
        if self.N_spins < 1:
            raise ConfigError("N_spins must be >= 1")
        if self.hamiltonian == "grid":
            if not self.grid:
                raise ConfigError("hamiltonian = 'grid' needs a [grid] table")
            if int(self.grid.get("half_width", 0)) < 1 or not float(self.grid.get("spacing", 0)) > 0:
                raise ConfigError("grid needs half_width >= 1 and spacing > 0")

    @property
    def g_value(self) -> float:
        return self.e / 2.0 if self.g_spin == "half-e" else float(self.g_spin)

    @classmethod
    def from_dict(cls, d: dict, base_dir: Path | None = None) -> "RunConfig":
        d = dict(d)
        modes = d.pop("modes", {})
        if not isinstance(modes, dict):
            raise ConfigError("[modes] must be a table")
        extra = set(modes) - {"kpoints", "file", "polarizations", "count"}
        if extra:
            raise ConfigError(f"unknown [modes] keys {sorted(extra)}")
        if "file" in modes:
            path = Path(modes["file"])
            if base_dir is not None and not path.is_absolute():
                path = base_dir / path
            try:
                kp = [list(map(float, k)) + [float(w)] for k, w in read_kpoints(path)]
            except (OSError, ValueError) as exc:
                raise ConfigError(f"cannot read k-points from {path}: {exc}") from exc
        else:
            kp = modes.get("kpoints", [])
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        try:
            return cls(
                kpoints=[list(map(float, r)) for r in kp],
                polarizations=tuple(modes.get("polarizations", (1, 2))),
                mode_count=modes.get("count"),
                **{k: (tuple(v) if isinstance(v, list) and k != "kpoints" else v)
                   for k, v in d.items()},
            )
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        path = Path(path)
        try:
            data = tomllib.loads(path.read_text())
        except (OSError, tomllib.TOMLDecodeError) as exc:
            raise ConfigError(f"cannot parse {path}: {exc}") from exc
        return cls.from_dict(data, base_dir=path.parent)

    def to_dict(self) -> dict:
        return {
            "hamiltonian": self.hamiltonian,
            "modes": {"kpoints": [list(r) for r in self.kpoints],
                      "polarizations": list(self.polarizations),
                      "count": self.mode_count},
            "N_max": int(self.N_max),
            "P": [float(p) for p in self.P],
            "e": float(self.e),
            "g_spin": self.g_spin,
            "grid": self.grid,
            "N_spins": int(self.N_spins),
            "checks": list(self.checks),
            "gap": float(self.gap),
            "t_values": [float(t) for t in self.t_values],
            "seed": int(self.seed),
            "dim_cap": int(self.dim_cap),
        }

    def replace(self, **kw) -> "RunConfig":
        new = copy.deepcopy(self)
        for k, v in kw.items():
            setattr(new, k, v)
        new.validate()
        return new


@dataclass
class ReportRecord:
    data: dict
    clusters: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.data["passed"])

    def to_json(self) -> str:
        return json.dumps(self.data, indent=2, sort_keys=True)


# ---------------------------------------------------------------------------
# assembly
# ---------------------------------------------------------------------------


def _potential(grid: GridSpec, potential):
    if potential is None or potential == "zero":
        return np.zeros(grid.size)
    if potential == "quadratic":
        return grid.points**2
    if potential == "linear":
        return grid.points.copy()
    if isinstance(potential, str):
        raise ConfigError(f"unknown potential {potential!r} (zero | quadratic | linear | table)")
    return np.asarray(potential, dtype=float)


def assemble(cfg: RunConfig):
    """Build ``(basis, fields, H, theta, grid)`` for a config."""
    modes = build_modes([(r[:3], r[3]) for r in cfg.kpoints], cfg.polarizations)
    if cfg.mode_count is not None:
        modes = modes.take(int(cfg.mode_count))
    basis = enumerate_basis(len(modes), int(cfg.N_max), cfg.dim_cap)
    fields = build_field_operators(basis, modes)
    grid = None
    if cfg.hamiltonian == "fixed_momentum":
        if 2 * basis.dim > cfg.dim_cap:
            raise DimensionCapError(f"dim {2 * basis.dim} exceeds cap {cfg.dim_cap}")
        H = build_HP(basis, modes, cfg.P, cfg.e, cfg.g_value, fields=fields)
        theta = theta_for(H)
    elif cfg.hamiltonian == "grid":
        grid = GridSpec.symmetric(int(cfg.grid["half_width"]), float(cfg.grid["spacing"]))
        if 2 * grid.size * basis.dim > cfg.dim_cap:
            raise DimensionCapError(f"dim {2 * grid.size * basis.dim} exceeds cap {cfg.dim_cap}")
        V = _potential(grid, cfg.grid.get("potential", "zero"))
        H = build_HPF_grid(basis, modes, grid, V, cfg.e, cfg.g_value, fields=fields)
        theta = theta_for(H, grid_size=grid.size)
    else:
        H = build_HN_toy(basis, modes, cfg.N_spins, cfg.e, cfg.g_value, fields=fields,
                         dim_cap=cfg.dim_cap)
        theta = theta_for(H, spin_factors=cfg.N_spins)
    return basis, fields, H, theta, grid


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------


def _entry(status, measured, threshold, **extra):
    d = {"status": status, "measured": float(measured), "threshold": float(threshold)}
    d.update(extra)
    return d


def _algebra_checks(fields, rng) -> dict:
    D = fields.dim
    j = Involution.conjugation(D)
    relations = {}
    for m, (a, ad) in enumerate(zip(fields.a, fields.adag)):
        relations[f"j a_{m} = a_{m} j"] = reality_residual(a, j)
        relations[f"j adag_{m} = adag_{m} j"] = reality_residual(ad, j)
    for alpha, name in enumerate("xyz"):
        relations[f"j A0_{name} = A0_{name} j"] = reality_residual(fields.A0[alpha], j)
        relations[f"j B0_{name} = -B0_{name} j"] = reality_residual(1j * fields.B0[alpha], j)
        relations[f"j Pf_{name} = Pf_{name} j"] = reality_residual(fields.Pf[alpha], j)
    relations["j Hf = Hf j"] = reality_residual(fields.Hf, j)
    members = list(fields.a) + list(fields.adag) + list(fields.A0) + list(fields.Pf) + \
        [fields.Hf] + [1j * b for b in fields.B0]
    closures = []
    for _ in range(10):
        i, k = rng.integers(len(members), size=2)
        alpha, beta = rng.uniform(-3, 3, size=2)
        res = algebra_closure_test(members[i], members[k], alpha, beta, j)
        closures.append({"pair": [int(i), int(k)], "alpha": float(alpha), "beta": float(beta),
                         "combination_residual": res.combination_residual,
                         "product_residual": res.product_residual, "passed": res.passed})
    worst_rel = max(relations.values())
    worst_clo = max(max(c["combination_residual"], c["product_residual"]) for c in closures)
    status = "pass" if worst_rel == 0.0 and worst_clo <= MEMBERSHIP_TOL else "fail"
    return {
        "relations": {k: float(v) for k, v in relations.items()},
        "closure": closures,
        **_entry(status, max(worst_rel, worst_clo), MEMBERSHIP_TOL),
    }


def _ground_cluster_threshold(vals, gap):
    cl = cluster(vals, gap)
    if len(cl) == 1:
        return vals[-1] + 1.0, cl[0].multiplicity
    return 0.5 * (cl[0].mean + cl[1].mean), cl[0].multiplicity


def _semigroup_checks(cfg, basis, H, theta, spec, rng) -> dict:
    lam, V = spec.eigenvalues, spec.eigenvectors
    cached = (lam, V)
    thr, gmult = _ground_cluster_threshold(lam, cfg.gap)
    family = [ExpNegT(1.0), ResolventShift(1.0 - lam[0]), IndicatorBelow(thr)]
    family += [ExpNegT(float(t)) for t in cfg.t_values if t != 1.0]
    comm = []
    for f in family:
        r = theta_function_commutes(H, theta, f, cached)
        comm.append({**f.describe(), "residual": r, "threshold": SEMIGROUP_TOL,
                     "passed": r <= SEMIGROUP_TOL})
    # ground projection trace equals the cluster multiplicity
    P0 = (V * (lam < thr)) @ V.conj().T
    trace = float(np.trace(P0).real)
    s, t = 0.3, 0.7
    law = semigroup_law_residual(H, s, t, cached)
    cross = expm_crosscheck(H, 1.0, cached)
    out = {"theta_commutation": comm,
           "ground_projection": {"trace": trace, "multiplicity": gmult,
                                 "passed": abs(trace - gmult) <= 1e-10},
           "semigroup_law": {"s": s, "t": t, "residual": law, "threshold": SEMIGROUP_TOL,
                             "passed": law <= SEMIGROUP_TOL},
           "expm_crosscheck": {"t": 1.0, "residual": cross, "threshold": SEMIGROUP_TOL,
                               "passed": cross <= SEMIGROUP_TOL}}
    ok = (all(c["passed"] for c in comm) and out["ground_projection"]["passed"]
          and law <= SEMIGROUP_TOL and cross <= SEMIGROUP_TOL)
    if cfg.hamiltonian == "fixed_momentum":
        hs = []
        for t in cfg.t_values:
            r = vacuum_expectation_check(H, basis, float(t), seed=int(rng.integers(2**31)),
                                      spectrum=cached)
            hs.append({"t": r.t, "offdiag": r.offdiag, "diag_gap": r.diag_gap, "a_t": r.a_t,
                       "max_spinor_gap": r.max_spinor_gap, "threshold": 1e-12,
                       "spinor_threshold": SEMIGROUP_TOL, "passed": r.passed()})
        out["vacuum_expectation"] = hs
        ok = ok and all(h["passed"] for h in hs)
    worst = max([c["residual"] for c in comm] + [law])
    out.update(_entry("pass" if ok else "fail", worst, SEMIGROUP_TOL))
    return out


def _jreal_checks(cfg, basis, H, theta, spec, rng) -> dict:
    D = basis.dim
    lam = spec.eigenvalues
    cached = (lam, spec.eigenvectors)
    phis = {"vacuum": basis.vacuum().real}
    if D >= 3:
        v = np.zeros(D)
        v[0] = v[2] = 1 / np.sqrt(2)
        phis["(|0>+|2>)/sqrt2"] = v
    r = rng.standard_normal(D)
    phis["random_real"] = r / np.linalg.norm(r)
    thr, _ = _ground_cluster_threshold(lam, cfg.gap)
    family = [ExpNegT(1.0), ResolventShift(1.0 - lam[0]), IndicatorBelow(thr)]
    rows = []
    for name, phi in phis.items():
        for f in family:
            res = jreal_generalization_check(H, theta, f, phi, seed=int(rng.integers(2**31)),
                                             spectrum=cached)
            rows.append({"phi": name, **res.f, "gap_up": res.gap_up, "gap_down": res.gap_down,
                         "threshold": SEMIGROUP_TOL, "passed": res.passed()})
    worst = max(max(x["gap_up"], x["gap_down"]) for x in rows)
    return {"cases": rows, **_entry("pass" if worst <= SEMIGROUP_TOL else "fail",
                                    worst, SEMIGROUP_TOL)}


def run(cfg: RunConfig, out_dir=None) -> ReportRecord:
    """Build, check and (optionally) write ``report.json`` and ``clusters.csv``."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(cfg.seed)
    basis, fields, H, theta, grid = assemble(cfg)
    comm = check_commutes(H, theta)
    report = {
        "schema_version": SCHEMA_VERSION,
        "artifact_version": __version__,
        "seed": int(cfg.seed),
        "config": cfg.to_dict(),
        "dimensions": {"modes": basis.mode_count, "fock": basis.dim, "total": H.dim,
                       "grid": None if grid is None else grid.size},
        "operator": H.stats(),
        "theta_sign": int(theta.sign),
        "commutation": _entry("pass" if comm <= MEMBERSHIP_TOL else "fail", comm, MEMBERSHIP_TOL),
        "checks": {},
    }
    checks = report["checks"]
    clusters = []
    spec = None
    needs_spectrum = {"kramers", "semigroup", "jreal"} & set(cfg.checks)
    if needs_spectrum:
        spec = diagonalize(H)
        clusters = cluster(spec.eigenvalues, cfg.gap)

    if "kramers" in cfg.checks:
        rep = kramers_report(H, theta, cfg.gap, spectrum=spec)
        clusters = rep.clusters
        if rep.asserted:
            status = "pass" if rep.passed else "fail"
        elif theta.sign == 1 and comm <= MEMBERSHIP_TOL:
            status = "not_applicable"
        else:
            status = "withheld"
        checks["kramers"] = {"report": rep.to_dict(),
                             **_entry(status, rep.max_partner_residual, rep.partner_tol)}

    symmetric = comm <= MEMBERSHIP_TOL
    if "semigroup" in cfg.checks:
        if symmetric:
            checks["semigroup"] = _semigroup_checks(cfg, basis, H, theta, spec, rng)
        else:
            checks["semigroup"] = _entry("withheld", comm, MEMBERSHIP_TOL)
    if "jreal" in cfg.checks:
        if symmetric and cfg.hamiltonian == "fixed_momentum":
            checks["jreal"] = _jreal_checks(cfg, basis, H, theta, spec, rng)
        else:
            checks["jreal"] = _entry("not_applicable", comm, MEMBERSHIP_TOL)
    if "algebra" in cfg.checks:
        checks["algebra"] = _algebra_checks(fields, rng)
    if "negative_control" in cfg.checks:
        probe = symmetry_breaking_probe(H)
        pres = check_commutes(probe, theta)
        prep = kramers_report(probe, theta, cfg.gap)
        ok = pres > NEGATIVE_CONTROL_MIN and not prep.asserted
        checks["negative_control"] = {
            "probe": "H + sigma_3 (x) 1",
            "expected": "commutation fails, Kramers assertion withheld",
            "kramers_asserted": prep.asserted,
            "odd_clusters": sum(c.multiplicity % 2 for c in prep.clusters),
            **_entry("expected_failure" if ok else "fail", pres, NEGATIVE_CONTROL_MIN),
        }

    bad = {"fail", "withheld"}
    report["passed"] = all(c["status"] not in bad for c in checks.values())
    report["wall_time"] = time.perf_counter() - t0
    record = ReportRecord(_jsonable(report), clusters)
    if out_dir is not None:
        write_outputs(record, out_dir)
    return record


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (np.floating, float)):
        v = float(x)
        return v if math.isfinite(v) else str(v)
    return x


def write_clusters_csv(clusters, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["mean", "multiplicity", "spread"])
        for c in clusters:
            w.writerow([repr(c.mean), c.multiplicity, repr(c.spread)])


def write_outputs(record: ReportRecord, out_dir):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(record.to_json() + "\n")
    write_clusters_csv(record.clusters, out / "clusters.csv")


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------


def _point_config(base: RunConfig, axis: str, value) -> RunConfig:
    if axis == "e":
        return base.replace(e=float(value))
    if axis == "P_z":
        P = list(base.P)
        P[2] = float(value)
        return base.replace(P=tuple(P))
    if axis == "N_max":
        if float(value) != int(value):
            raise ConfigError(f"N_max sweep values must be integers, got {value!r}")
        return base.replace(N_max=int(value))
    raise ConfigError(f"sweep axis must be one of {SWEEP_AXES}, got {axis!r}")


def _sweep_point(args):
    base, axis, i, value, out = args
    point_dir = Path(out) / f"point_{i:03d}"
    entry = {"index": i, "axis": axis, "value": value, "dir": point_dir.name}
    try:
        cfg = _point_config(base, axis, value)
        rec = run(cfg, point_dir)
    except (ValueError, ConvergenceError, ArithmeticError) as exc:
        entry.update(status="error", error=f"{type(exc).__name__}: {exc}", passed=False)
        return entry, None
    kr = rec.data["checks"].get("kramers", {}).get("report")
    entry.update(status="ok", passed=rec.passed)
    summary = {
        "means": [c.mean for c in rec.clusters[:6]],
        "mults": [c.multiplicity for c in rec.clusters[:6]],
        "max_pairing": kr["max_pairing"] if kr else float("nan"),
    }
    return entry, summary


def sweep(base: RunConfig, axis: str, values, out_dir, workers: int = 1) -> list[dict]:
    """One run per value under ``out_dir/point_NNN``; writes manifest and summary.

    Per-point failures are recorded in the manifest and never abort the sweep.
    """
    if axis not in SWEEP_AXES:
        raise ConfigError(f"sweep axis must be one of {SWEEP_AXES}, got {axis!r}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    tasks = [(base, axis, i, v, str(out)) for i, v in enumerate(values)]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_sweep_point, tasks))
    else:
        results = [_sweep_point(t) for t in tasks]
    manifest = [r[0] for r in results]
    (out / "manifest.json").write_text(json.dumps(
        {"schema_version": SCHEMA_VERSION, "axis": axis, "points": _jsonable(manifest)},
        indent=2, sort_keys=True) + "\n")
    with open(out / "summary.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([axis] + [f"mean_{i}" for i in range(6)] + [f"mult_{i}" for i in range(6)]
                   + ["max_pairing"])
        for entry, s in results:
            if s is None:
                continue
            means = s["means"] + [""] * (6 - len(s["means"]))
            mults = s["mults"] + [""] * (6 - len(s["mults"]))
            w.writerow([entry["value"]] + [repr(m) if m != "" else "" for m in means]
                       + mults + [repr(s["max_pairing"])])
    return manifest


# ---------------------------------------------------------------------------
# command line
# ---------------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kramers-lab", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_ in [
        ("build", "assemble the Hamiltonian and print dimensions and operator stats"),
        ("spectrum", "diagonalize and write clusters.csv"),
        ("kramers", "run the checks listed in the config"),
        ("semigroup", "run the functional-calculus and vacuum-expectation checks"),
    ]:
        sp_ = sub.add_parser(name, help=help_)
        sp_.add_argument("config")
        sp_.add_argument("--out", default=None, help="output directory")
    sw = sub.add_parser("sweep", help="run one config along a parameter axis")
    sw.add_argument("config")
    sw.add_argument("--axis", required=True, choices=SWEEP_AXES)
    sw.add_argument("--values", default="", help="comma-separated values")
    sw.add_argument("--out", required=True)
    sw.add_argument("--workers", type=int, default=1)
    ex = sub.add_parser("export-matrix", help="write the Hamiltonian as sparse triplet text")
    ex.add_argument("config")
    ex.add_argument("--out", required=True, help="output file")
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = RunConfig.from_file(args.config)
        if args.command == "build":
            basis, _, H, theta, _ = assemble(cfg)
            info = {"fock_dim": basis.dim, "theta_sign": theta.sign,
                    "commutator_residual": check_commutes(H, theta), **H.stats()}
            print(json.dumps(_jsonable(info), indent=2, sort_keys=True))
            return 0
        if args.command == "spectrum":
            _, _, H, _, _ = assemble(cfg)
            spec = diagonalize(H)
            cl = cluster(spec.eigenvalues, cfg.gap)
            out = Path(args.out or ".")
            out.mkdir(parents=True, exist_ok=True)
            write_clusters_csv(cl, out / "clusters.csv")
            for c in cl:
                print(f"{c.mean:.12g}\t{c.multiplicity}\t{c.spread:.3g}")
            return 0
        if args.command == "export-matrix":
            _, _, H, _, _ = assemble(cfg)
            n = export_triplets(H, args.out)
            print(f"wrote {n} entries (dim {H.dim}) to {args.out}")
            return 0
        if args.command == "sweep":
            values = [float(v) for v in args.values.split(",") if v.strip()]
            manifest = sweep(cfg, args.axis, values, args.out, args.workers)
            for m in manifest:
                print(f"{m['axis']}={m['value']}: {m['status']} passed={m['passed']}")
            return 0 if all(m["passed"] for m in manifest) else 1
        if args.command == "semigroup":
            cfg = cfg.replace(checks=("semigroup", "jreal"))
        rec = run(cfg, args.out)
        for name, c in rec.data["checks"].items():
            print(f"{name:18s} {c['status']:16s} measured={c['measured']:.3e} "
                  f"threshold={c['threshold']:.1e}")
        if args.out is None:
            print(rec.to_json())
        return 0 if rec.passed else 1
    except (ConfigError, DimensionCapError, ConvergenceError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
