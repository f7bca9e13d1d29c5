"""Command-line pipeline: config ingestion, identity audits, root solving,
spectrum checks and vector export.

Config files are TOML or JSON with sections [chain], [[site]], [boundary],
[profile], [solver], [run]; unknown keys are rejected.  All outputs embed the
chain hash and tool version, and rerunning with the same seed reproduces
byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

import click
import numpy as np

from . import __version__
from .bethe import BetheRootSet, lambda_full, solve_bethe
from .identities import IDENTITIES, identity_params
from .oracle import exact_spectrum, match_spectrum, verify_eigenpair
from .reps import (BoundarySpec, ChainSpec, MATRICES, ONE_DIMENSIONAL,
                   Profile, SiteSpec, VECTOR)
from .scalars import EXACT, FLOAT
from .tensor import ORTHOGONAL, SYMPLECTIC
from .vectors import (bethe_vector_composite, bethe_vector_trace,
                      closed_form_example)

EXIT_OK = 0
EXIT_IDENTITY = 2
EXIT_NO_ROOTS = 3
EXIT_DEGENERATE = 4
EXIT_CONFIG = 64

_ALLOWED = {
    "chain": {"sign", "n", "rho"},
    "site": {"weight", "shift", "realization", "matrices"},
    "boundary": {"weight", "realization", "matrices"},
    "profile": None,   # m plus m1..m_{n-1}, validated dynamically
    "solver": {"strategy", "starts", "count", "box", "tol", "seed",
               "rho_from", "steps"},
    "run": {"mode", "seed", "dim_cap"},
}


class ConfigError(Exception):
    pass


def _load_raw(path: str) -> dict:
    text = Path(path).read_bytes()
    if path.endswith(".json"):
        return json.loads(text)
    try:
        import tomllib
    except ModuleNotFoundError:
        import tomli as tomllib
    try:
        return tomllib.loads(text.decode())
    except tomllib.TOMLDecodeError:
        try:
            return json.loads(text)
        except json.JSONDecodeError:
            raise ConfigError(f"{path}: neither valid TOML nor JSON")


def _check_keys(section: str, data: dict):
    allowed = _ALLOWED[section]
    if allowed is None:
        return
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(f"unknown keys in [{section}]: {sorted(unknown)}")


def _scalar_in(value, mode: str, where: str):
    if isinstance(value, bool):
        raise ConfigError(f"{where}: boolean is not a scalar")
    if isinstance(value, int):
        return Fraction(value) if mode == EXACT else float(value)
    if isinstance(value, str):
        try:
            return Fraction(value) if mode == EXACT else float(Fraction(value))
        except ValueError:
            raise ConfigError(f"{where}: cannot parse rational {value!r}")
    if isinstance(value, float):
        if mode == EXACT:
            raise ConfigError(f"{where}: floats are not exact; use 'p/q'")
        return value
    raise ConfigError(f"{where}: unsupported scalar {value!r}")


def chain_from_config(cfg: dict) -> ChainSpec:
    for key in cfg:
        if key not in ("chain", "site", "boundary", "profile", "solver",
                       "run"):
            raise ConfigError(f"unknown section [{key}]")
    if "chain" not in cfg:
        raise ConfigError("missing [chain] section")
    _check_keys("chain", cfg["chain"])
    run = cfg.get("run", {})
    _check_keys("run", run)
    mode = run.get("mode", "exact")
    if mode not in (EXACT, FLOAT):
        raise ConfigError(f"run.mode must be 'exact' or 'float', not {mode!r}")
    sign = cfg["chain"].get("sign")
    if sign not in (ORTHOGONAL, SYMPLECTIC):
        raise ConfigError("chain.sign must be 'orthogonal' or 'symplectic'")
    try:
        n = int(cfg["chain"]["n"])
    except (KeyError, TypeError, ValueError):
        raise ConfigError("chain.n must be a positive integer")
    rho = _scalar_in(cfg["chain"].get("rho", 0), mode, "chain.rho")
    sites = []
    for i, s in enumerate(cfg.get("site", [])):
        _check_keys("site", s)
        weight = tuple(int(w) for w in s.get("weight",
                                             [1] + [0] * (2 * n - 1)))
        shift = _scalar_in(s.get("shift", 0), mode, f"site[{i}].shift")
        realization = s.get("realization", VECTOR)
        mats = s.get("matrices")
        if realization == MATRICES and mats is None:
            raise ConfigError(f"site[{i}]: matrices realization needs "
                              f"'matrices'")
        mats_t = _matrices_in(mats) if mats is not None else None
        sites.append(SiteSpec(weight, shift, realization, mats_t))
    bnd_cfg = cfg.get("boundary", {})
    _check_keys("boundary", bnd_cfg)
    b_real = bnd_cfg.get("realization", ONE_DIMENSIONAL)
    b_weight = tuple(int(w) for w in bnd_cfg.get(
        "weight", ([1] + [0] * (n - 1)) if b_real == VECTOR else [0] * n))
    b_mats = bnd_cfg.get("matrices")
    boundary = BoundarySpec(b_weight, b_real,
                            _matrices_in(b_mats) if b_mats else None)
    prof_cfg = dict(cfg.get("profile", {}))
    m = int(prof_cfg.pop("m", 0))
    levels = []
    for k in range(1, n):
        levels.append(int(prof_cfg.pop(f"m{k}", 0)))
    if prof_cfg:
        raise ConfigError(f"unknown keys in [profile]: {sorted(prof_cfg)}")
    dim_cap = int(run.get("dim_cap", 4096))
    try:
        return ChainSpec(sign, n, rho, tuple(sites), boundary,
                         Profile(m, tuple(levels)), mode, dim_cap)
    except ValueError as exc:
        raise ConfigError(str(exc))


def _matrices_in(mats):
    return tuple(tuple(tuple(tuple(x for x in row) for row in m)
                       for m in line) for line in mats)


def chain_hash(cfg: dict) -> str:
    payload = {k: cfg.get(k) for k in ("chain", "site", "boundary", "profile")}
    blob = json.dumps(payload, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _meta(cfg: dict) -> dict:
    return {"chain_hash": chain_hash(cfg), "tool_version": __version__}


def _c(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _roots_to_json(sols) -> list:
    out = []
    for s in sols:
        out.append({
            "top": [_c(u) for u in s.top],
            "levels": [[_c(u) for u in lvl] for lvl in s.levels],
            "residual_max": s.residual_max,
        })
    return out


def _roots_from_json(data, entry: int = None):
    sets = []
    for rec in data["roots"]:
        top = tuple(complex(a, b) for a, b in rec["top"])
        levels = tuple(tuple(complex(a, b) for a, b in lvl)
                       for lvl in rec["levels"])
        sets.append(BetheRootSet(top, levels, rec.get("residual_max", 0.0)))
    return sets if entry is None else [sets[entry]]


def _write_json(path: Path, payload: dict):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n",
                    encoding="utf-8", newline="\n")


def _thread_cap() -> int:
    try:
        return max(1, int(os.environ.get("TYCHAIN_THREADS", "1")))
    except ValueError:
        return 1


@click.group()
def main():
    """Open-boundary chain pipeline: audits, roots, spectra and vectors."""


@main.command()
@click.argument("config", type=click.Path(exists=True))
@click.option("--ids", default="all", help="comma-separated identity ids")
@click.option("--points", default=3, show_default=True,
              help="parameter tuples per identity")
@click.option("--seed", default=2024, show_default=True)
def axioms(config, ids, points, seed):
    """Check the algebraic identity suite on the configured chain."""
    try:
        cfg = _load_raw(config)
        chain_ = chain_from_config(cfg)
    except (ConfigError, OSError) as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    names = sorted(IDENTITIES) if ids == "all" else \
        [s.strip() for s in ids.split(",") if s.strip()]
    bad = [nm for nm in names if nm not in IDENTITIES]
    if bad:
        click.echo(f"config error: unknown identity ids {bad}", err=True)
        sys.exit(EXIT_CONFIG)
    failures = []
    for name in names:
        try:
            runs = identity_params(name, chain_, seed, count=points)
        except Exception as exc:
            click.echo(f"{name}: ERROR {exc}")
            failures.append(name)
            continue
        ok = all(rep.holds for (_, rep) in runs)
        shown = []
        for (params, rep) in runs:
            tup = {k: str(v) if not isinstance(v, tuple)
                   else [str(x) for x in v] for k, v in params.items()}
            shown.append(tup)
        status = "exact" if ok and chain_.mode == EXACT else \
            ("ok" if ok else "FAILED")
        click.echo(f"{name}: {status}  params={json.dumps(shown, sort_keys=True)}")
        if not ok:
            failures.append(name)
    if failures:
        click.echo(f"identity failures: {failures}", err=True)
        sys.exit(EXIT_IDENTITY)
    sys.exit(EXIT_OK)


@main.command()
@click.argument("config", type=click.Path(exists=True))
@click.option("--out", default="out", show_default=True,
              type=click.Path(file_okay=False))
def solve(config, out):
    """Solve the Bethe equations and verify every returned root set."""
    try:
        cfg = _load_raw(config)
        chain_ = chain_from_config(cfg)
    except (ConfigError, OSError) as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    solver_cfg = dict(cfg.get("solver", {}))
    _check_keys("solver", solver_cfg)
    strategy = {"kind": solver_cfg.get("strategy", "multistart"),
                "count": int(solver_cfg.get("starts",
                                            solver_cfg.get("count", 64))),
                "seed": int(solver_cfg.get("seed",
                                           cfg.get("run", {}).get("seed",
                                                                  1234))),
                "tol": float(solver_cfg.get("tol", 1e-12))}
    if "box" in solver_cfg:
        strategy["box"] = tuple(float(x) for x in solver_cfg["box"])
    if strategy["kind"] == "continuation":
        strategy["rho_from"] = float(solver_cfg.get("rho_from", 0.0))
        strategy["steps"] = int(solver_cfg.get("steps", 8))
    sols = solve_bethe(chain_, strategy)
    outdir = Path(out)
    fchain = chain_.with_mode(FLOAT)
    verified = []
    records = []
    from concurrent.futures import ThreadPoolExecutor

    def check(s):
        if s.m == 0 and not any(s.levels):
            return s, True, 0.0, None
        try:
            psi = bethe_vector_composite(fchain, s)
        except Exception as exc:
            return s, False, np.inf, f"vector failed: {exc}"
        if psi.is_zero:
            return s, False, np.inf, "zero vector"
        ok, worst, _ = verify_eigenpair(fchain, psi, s,
                                        [2.31, -3.17, 1.57, 4.2, -1.89],
                                        tol=1e-8)
        return s, ok, worst, None

    with ThreadPoolExecutor(max_workers=_thread_cap()) as pool:
        results = list(pool.map(check, sols))
    for s, ok, worst, note in results:
        rec = {"top": [_c(u) for u in s.top],
               "levels": [[_c(u) for u in lvl] for lvl in s.levels],
               "residual_max": s.residual_max,
               "eigen_residual": None if worst is np.inf else worst,
               "verified": bool(ok)}
        if note:
            rec["note"] = note
        records.append(rec)
        if ok:
            verified.append(s)
    payload = {"meta": _meta(cfg), "roots": records,
               "strategy": {k: (list(v) if isinstance(v, tuple) else v)
                            for k, v in strategy.items()}}
    _write_json(outdir / "roots.json", payload)
    report = [f"# Root solve report",
              f"",
              f"chain hash: {_meta(cfg)['chain_hash']}",
              f"profile: m={chain_.profile.m} levels={list(chain_.profile.levels)}",
              f"root sets found: {len(sols)}",
              f"root sets verified: {len(verified)}",
              ""]
    for rec in records:
        report.append(f"- top={rec['top']} levels={rec['levels']} "
                      f"residual={rec['residual_max']:.3e} "
                      f"verified={rec['verified']}")
    (outdir / "report.md").write_text("\n".join(report) + "\n",
                                      encoding="utf-8", newline="\n")
    trivial = chain_.profile.m == 0 and not any(chain_.profile.levels)
    if trivial or verified:
        sys.exit(EXIT_OK)
    sys.exit(EXIT_NO_ROOTS)


@main.command()
@click.argument("config", type=click.Path(exists=True))
@click.option("--v", "v_list", default="2.31,3.07,-4.75,1.62",
              show_default=True, help="comma-separated sample points")
@click.option("--match", "match_file", type=click.Path(exists=True),
              default=None, help="roots.json to match against the spectrum")
@click.option("--out", default="out", show_default=True,
              type=click.Path(file_okay=False))
def spectrum(config, v_list, match_file, out):
    """Dense-diagonalization spectrum report, with optional root matching."""
    try:
        cfg = _load_raw(config)
        chain_ = chain_from_config(cfg)
        samples = [float(Fraction(s)) for s in v_list.split(",")]
    except (ConfigError, OSError, ValueError) as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    report = exact_spectrum(chain_, samples)
    candidates = [(BetheRootSet((), tuple(() for _ in chain_.profile.levels)),
                   None)]
    if match_file:
        data = json.loads(Path(match_file).read_text())
        candidates += [(s, None) for s in _roots_from_json(data)]
    report = match_spectrum(report, candidates)
    payload = {
        "meta": _meta(cfg),
        "samples": [_c(v) for v in report.samples],
        "eigenvalues": [[_c(z) for z in row] for row in report.eigenvalues],
        "matches": [{"candidate": i, "eigen_index": m[1], "deviation": m[2]}
                    for i, m in enumerate(report.matches)],
        "coverage": report.coverage,
    }
    outdir = Path(out)
    _write_json(outdir / "spectrum.json", payload)
    click.echo(f"dim={report.dim} coverage={report.coverage:.4f}")
    # plot data: eigenvalue curves on a pole-avoiding grid
    fchain = chain_.with_mode(FLOAT)
    poles = [complex(p) for p in fchain.pole_set()]
    grid = []
    x = -5.0
    while len(grid) < 200:
        if all(abs(x - p) > 1e-2 and abs(2 * x + complex(fchain.rho_scalar))
               > 1e-2 for p in poles):
            grid.append(x)
        x += 0.05
    lines = ["v,re,im"]
    for v in grid:
        lam = complex(lambda_full(fchain, candidates[0][0], complex(v)))
        lines.append(f"{v!r},{lam.real!r},{lam.imag!r}")
    plotdir = outdir / "plotdata"
    plotdir.mkdir(parents=True, exist_ok=True)
    (plotdir / "vacuum_eigenvalue.csv").write_text("\n".join(lines) + "\n",
                                                   encoding="utf-8",
                                                   newline="\n")
    sys.exit(EXIT_OK)


@main.command()
@click.argument("config", type=click.Path(exists=True))
@click.option("--roots", "roots_file", type=click.Path(exists=True),
              default=None, help="roots.json with the excitation parameters")
@click.option("--entry", default=0, show_default=True,
              help="which root set in the file")
@click.option("--method", type=click.Choice(["trace", "composite",
                                             "example"]),
              default="trace", show_default=True)
@click.option("--out", "out_file", default="vector.json", show_default=True)
def vector(config, roots_file, entry, method, out_file):
    """Construct a Bethe vector and export it as JSON."""
    try:
        cfg = _load_raw(config)
        chain_ = chain_from_config(cfg)
    except (ConfigError, OSError) as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    if roots_file:
        data = json.loads(Path(roots_file).read_text())
        roots = _roots_from_json(data, entry)[0]
    else:
        roots = BetheRootSet((), tuple(() for _ in chain_.profile.levels))
    if method == "trace":
        bv = bethe_vector_trace(chain_, roots)
    elif method == "composite":
        bv = bethe_vector_composite(chain_, roots)
    else:
        lv = sum(len(l) for l in roots.levels)
        which = "product" if lv == 0 else (
            "single-nested" if roots.m == 1 else "double-nested")
        bv = closed_form_example(which, chain_, roots)
    vec = bv.vector
    if vec.mode == EXACT:
        entries = [[_fr(vec.data.entry(i, 0).re), _fr(vec.data.entry(i, 0).im)]
                   for i in range(vec.registry.total_dim)]
    else:
        entries = [_c(z) for z in np.asarray(vec.data).reshape(-1)]
    payload = {
        "meta": _meta(cfg),
        "basis": {"factors": [[f.label, f.dim, f.kind]
                              for f in vec.registry.factors],
                  "ordering": "row-major composite over the listed factors"},
        "construction": bv.construction,
        "is_zero": bv.is_zero,
        "entries": entries,
    }
    _write_json(Path(out_file), payload)
    if bv.is_zero:
        click.echo("warning: zero vector (degenerate profile or parameters)",
                   err=True)
        sys.exit(EXIT_DEGENERATE)
    sys.exit(EXIT_OK)


def _fr(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


if __name__ == "__main__":
    main()
