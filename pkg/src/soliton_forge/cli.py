"""Command-line front end: ``soliton-forge <command> [options]``.

Exit codes: 0 all checks pass, 1 a check failed, 2 configuration error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from . import classify, invariants, linearize
from .errors import (EigenFailure, NoBracket, NoConvergence, RootBracketFailure,
                     StepUnderflow, ToleranceNotMet)
from .hirota import SolitonParams, Spectrum, build_solution
from .numeric import GridSpec

EXIT_OK, EXIT_CHECK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3
NUMERIC_ERRORS = (EigenFailure, NoConvergence, ToleranceNotMet, RootBracketFailure,
                  StepUnderflow, NoBracket)


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    mu: list[float] | None = None
    a: list[float] | None = None
    q: float | None = None
    p: float | None = None
    grid_points: int = 2001
    half_width: float | None = None
    tol: float = 1e-8
    seed: int = 0
    n_points: int = 201
    trials: int = 20
    n_components: int = 3

    @classmethod
    def from_dict(cls, d: dict) -> RunConfig:
        known = {f.name for f in fields(cls)}
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown config keys: {sorted(extra)}")
        return cls(**d)

    @property
    def spectrum(self) -> Spectrum:
        if self.mu is None:
            raise ConfigError("config needs 'mu'")
        return Spectrum(tuple(self.mu))

    @property
    def params(self) -> SolitonParams:
        if self.a is None:
            raise ConfigError("config needs 'a'")
        return SolitonParams(tuple(self.a))

    def grid(self) -> GridSpec:
        L = self.half_width or build_solution(self.spectrum, self.params).half_width()
        return GridSpec(L, self.grid_points)


def load_config(args) -> RunConfig:
    d = {}
    if args.config:
        try:
            d = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        if not isinstance(d, dict):
            raise ConfigError("config must be a JSON object")
    for key in ("seed", "grid_points", "half_width", "tol", "q", "p", "n_points"):
        v = getattr(args, key, None)
        if v is not None:
            d[key] = v
    if getattr(args, "mu", None):
        d["mu"] = args.mu
    if getattr(args, "a", None):
        d["a"] = args.a
    cfg = RunConfig.from_dict(d)
    if cfg.mu is not None:
        cfg.spectrum  # validate early
    if cfg.a is not None and cfg.mu is not None:
        if len(cfg.a) != len(cfg.mu):
            raise ConfigError("'a' and 'mu' must have the same length")
        cfg.params
    return cfg


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=float)


def _write_csv(path: Path, header: list[str], cols: np.ndarray):
    np.savetxt(path, cols, delimiter=",", header=",".join(header), comments="", fmt="%.17g")


def _emit(args, payload: dict, table: list[str] | None = None):
    if args.json or not table:
        print(_dump(payload))
    else:
        print("\n".join(table))


# -- checks --------------------------------------------------------------------------

def _check(name, value, expected, tol):
    ok = bool(np.isfinite(value) and abs(value - expected) <= tol)
    return {"name": name, "value": float(value), "expected": float(expected),
            "tolerance": float(tol), "pass": ok}


def run_checks(spectrum: Spectrum, params: SolitonParams, grid: GridSpec, tol: float) -> list[dict]:
    rep = build_solution(spectrum, params)
    mu = np.asarray(spectrum.mu)
    eta = np.asarray(spectrum.eta)
    x = grid.points()
    out = [_check("residual", float(np.abs(invariants.residual(rep, x)).max()), 0.0,
                  tol * (1 + np.abs(mu).max()))]
    for k in range(1, rep.n + 1):
        out.append(_check(f"motion_{k}", invariants.motion_report(rep, k, grid).relative, 0.0, tol))
    masses = [invariants.mass(rep, i) for i in range(rep.n)]
    for i in range(rep.n):
        out.append(_check(f"mass_{i + 1}_quadrature", invariants.mass(rep, i, "quadrature"),
                          masses[i], 1e-6))
    distinct = len(set(spectrum.mu)) == rep.n
    nonzero = all(v != 0.0 for v in params.a)
    if distinct and nonzero:
        for i in range(rep.n):
            out.append(_check(f"mass_{i + 1}", masses[i], 2 * eta[i], tol))
        out.append(_check("lieb_thirring_gap", invariants.lieb_thirring_gap(rep), 0.0, 1e-6))
    if rep.n == 3:
        e = invariants.energy(rep)
        weighted = float(mu @ np.asarray(masses))
        out.append(_check("kinetic", e.kinetic, -weighted / 3, 1e-6))
        out.append(_check("quartic", e.quartic, -2 * weighted / 3, 1e-6))
        out.append(_check("energy", e.total, weighted / 3, 1e-6))
    return out


def _sweep_item(args):
    mu, a, tol = args
    spectrum = Spectrum(tuple(mu))
    grid = GridSpec(build_solution(spectrum, SolitonParams(tuple(a))).half_width(), 2001)
    return run_checks(spectrum, SolitonParams(tuple(a)), grid, tol)


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("SOLITON_FORGE_THREADS", "1")))
    except ValueError:
        return 1


# -- commands ------------------------------------------------------------------------

def cmd_build(cfg: RunConfig, args) -> int:
    rep = build_solution(cfg.spectrum, cfg.params)
    grid = cfg.grid()
    x = grid.points()
    u, du, _ = rep.profiles(x)
    V = 2.0 * np.sum(u * u, axis=0)
    n = rep.n
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    header = ["x"] + [f"u{i + 1}" for i in range(n)] + [f"du{i + 1}" for i in range(n)] + ["V"]
    _write_csv(out / "profile.csv", header, np.column_stack([x, u.T, du.T, V]))
    meta = {
        "mu": list(cfg.mu), "a": list(cfg.a), "seed": cfg.seed,
        "grid": {"half_width": grid.half_width, "n_points": grid.n_points},
        "masses": [invariants.mass(rep, i) for i in range(n)],
        "max_residual": float(np.abs(invariants.residual(rep, x)).max()),
    }
    if any(cfg.a):
        e = invariants.energy(rep)
        meta["energy"] = {"kinetic": e.kinetic, "quartic": e.quartic, "total": e.total}
    (out / "profile.json").write_text(_dump(meta) + "\n")
    _emit(args, meta, [f"wrote {out / 'profile.csv'}", f"max residual {meta['max_residual']:.3e}"])
    return EXIT_OK


def _table(checks):
    rows = [f"{'check':<24}{'value':>14}{'expected':>14}{'tol':>10}  ok"]
    for c in checks:
        rows.append(f"{c['name']:<24}{c['value']:>14.6g}{c['expected']:>14.6g}"
                    f"{c['tolerance']:>10.1e}  {'PASS' if c['pass'] else 'FAIL'}")
    return rows


def cmd_verify(cfg: RunConfig, args) -> int:
    checks = run_checks(cfg.spectrum, cfg.params, cfg.grid(), cfg.tol)
    ok = all(c["pass"] for c in checks)
    _emit(args, {"checks": checks, "pass": ok}, _table(checks))
    return EXIT_OK if ok else EXIT_CHECK


def cmd_kernel(cfg: RunConfig, args) -> int:
    rep = build_solution(cfg.spectrum, cfg.params)
    rep_grid = cfg.grid()
    report = linearize.kernel_dimension(rep, rep_grid)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    d = report.as_dict()
    (out / "kernel.json").write_text(_dump(d) + "\n")
    w = np.asarray(report.eigenvalues_near_zero)
    _write_csv(out / "kernel_eigenvalues.csv", ["index", "eigenvalue"],
               np.column_stack([np.arange(len(w)), w]))
    _emit(args, d, [f"kernel dimension {report.discrete_kernel_dim} (N={rep.n})",
                    f"threshold {report.threshold:.3e}, gap ratio {report.gap_ratio:.3e}"])
    return EXIT_OK if report.discrete_kernel_dim == rep.n else EXIT_CHECK


def cmd_branches(cfg: RunConfig, args) -> int:
    if cfg.q is None:
        raise ConfigError("branches needs 'q'")
    sp = cfg.spectrum
    bounds = classify.p_bounds(sp, cfg.q)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    payload = {"mu": list(cfg.mu), "q": cfg.q, "bounds": asdict(bounds)}
    if cfg.p is None:
        for k, branch in enumerate(classify.trace_branch(sp, cfg.q, cfg.n_points), start=1):
            cols = np.array([[b.X, b.Y, b.Z, b.p] for b in branch])
            _write_csv(out / f"branch_{k}.csv", ["X", "Y", "Z", "p"], cols)
        payload["branches"] = [f"branch_{k}.csv" for k in range(1, 5)]
        _emit(args, payload, [f"p bounds ({bounds.p_low:.12g}, {bounds.p_high:.12g})"
                              f"{' wrapping through infinity' if bounds.wraps else ''}",
                              f"wrote 4 branch files to {out}"])
        return EXIT_OK
    pre = classify.count_preimages(sp, cfg.q, cfg.p)
    payload.update(p=cfg.p, admissible=bounds.contains(cfg.p), count=pre.count,
                   triples=[list(t) for t in pre.triples],
                   mirror_triples=[list(t) for t in pre.mirror_triples])
    (out / "preimages.json").write_text(_dump(payload) + "\n")
    _emit(args, payload, [f"{pre.count} preimages (plus {len(pre.mirror_triples)} mirrored)"]
          + [" ".join(f"{v:.12g}" for v in t) for t in pre.triples])
    return EXIT_OK


def cmd_normalized(cfg: RunConfig, args) -> int:
    res = classify.normalized_solutions(cfg.spectrum)
    if isinstance(res, classify.Unique):
        payload = {"kind": "unique", "a": list(res.params.a)}
    elif isinstance(res, classify.Family):
        payload = {"kind": "family", "a": "(A, +-A, B) with A, B != 0"}
    else:
        payload = {"kind": "none"}
    payload["mu"] = list(cfg.mu)
    _emit(args, payload, [f"{payload['kind']}"])
    return EXIT_OK


def cmd_sweep(cfg: RunConfig, args) -> int:
    rng = np.random.default_rng(cfg.seed)
    n = cfg.n_components
    items = []
    for _ in range(cfg.trials):
        mu = np.sort(-rng.uniform(0.2, 3.0, n))
        a = rng.uniform(0.2, 5.0, n) * rng.choice([-1.0, 1.0], n)
        items.append((mu.tolist(), a.tolist(), cfg.tol))
    workers = worker_count()
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_sweep_item, items))
    else:
        results = [_sweep_item(it) for it in items]
    records = [{"mu": mu, "a": a, "checks": r, "pass": all(c["pass"] for c in r)}
               for (mu, a, _), r in zip(items, results)]
    ok = all(r["pass"] for r in records)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    payload = {"seed": cfg.seed, "trials": cfg.trials, "n_components": n, "pass": ok, "records": records}
    (out / "sweep.json").write_text(_dump(payload) + "\n")
    failed = sum(not r["pass"] for r in records)
    _emit(args, {"seed": cfg.seed, "trials": cfg.trials, "failed": failed, "pass": ok},
          [f"{cfg.trials - failed}/{cfg.trials} instances pass (seed {cfg.seed})"])
    return EXIT_OK if ok else EXIT_CHECK


COMMANDS = {
    "build": cmd_build, "verify": cmd_verify, "kernel": cmd_kernel,
    "branches": cmd_branches, "normalized": cmd_normalized, "sweep": cmd_sweep,
}


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="soliton-forge", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--seed", type=int)
        p.add_argument("--grid-points", dest="grid_points", type=int)
        p.add_argument("--half-width", dest="half_width", type=float)
        p.add_argument("--tol", type=float)
        p.add_argument("--json", action="store_true", help="machine-readable output only")
        p.add_argument("--mu", type=float, nargs="+")
        p.add_argument("--a", type=float, nargs="+")
        if name == "branches":
            p.add_argument("--q", type=float)
            p.add_argument("--p", type=float)
            p.add_argument("--n-points", dest="n_points", type=int)
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        cfg = load_config(args)
        return COMMANDS[args.command](cfg, args)
    except NUMERIC_ERRORS as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ConfigError, ValueError, TypeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
