"""Batch front-end: ingestion, factorization, costing, layout, verification.

Each command resolves its parameters from an optional flat key=value config
file plus command-line flags (flags win), embeds the resolved configuration
and an input content hash into its report, and emits JSON (full precision),
csv, or an aligned table (4 significant digits).  Exit codes: 0 ok, 1
domain error, 2 usage error.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import pathlib
import sys

import click
import numpy as np

from . import costs, factorizations, qdrift, surface, tensors, thc, verify

SCHEMA_VERSION = 1


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """Resolved invocation: one command, one input, one output."""

    command: str
    method: str | None = None
    input: str | None = None
    output: str | None = None
    fmt: str = "json"
    params: dict = dataclasses.field(default_factory=dict)

    def resolved(self) -> dict:
        out = {
            "command": self.command,
            "method": self.method,
            "input": self.input,
            "output": self.output,
            "format": self.fmt,
        }
        out.update({k: v for k, v in sorted(self.params.items())})
        return out


def _fail(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _read_config_file(path: str | None) -> dict:
    """Flat key = value lines; blank lines and # comments ignored."""
    if path is None:
        return {}
    out = {}
    for lineno, line in enumerate(
        pathlib.Path(path).read_text().splitlines(), start=1
    ):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            _fail(f"{path}:{lineno}: expected key = value")
        key, value = body.split("=", 1)
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def _merge(file_values: dict, flag_values: dict) -> dict:
    merged = dict(file_values)
    merged.update({k: v for k, v in flag_values.items() if v is not None})
    return merged


def _get(merged: dict, key: str, cast, default=None, required=False):
    if key in merged and merged[key] is not None:
        value = merged[key]
        try:
            return cast(value) if isinstance(value, str) else value
        except ValueError:
            _fail(f"parameter {key}: cannot parse {value!r}")
    if required:
        _fail(f"missing required parameter {key}")
    return default


def _hash_bytes(payload: bytes) -> str:
    return hashlib.sha256(payload).hexdigest()


def _hash_file(path: str) -> str:
    return _hash_bytes(pathlib.Path(path).read_bytes())


def _hash_config(resolved: dict) -> str:
    return _hash_bytes(
        json.dumps(resolved, sort_keys=True, separators=(",", ":")).encode()
    )


def _fmt_cell(value) -> str:
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if value == 0.0 or (1e-3 <= abs(value) < 1e5 and value == int(value)):
            return str(int(value))
        return f"{value:.4g}"
    return str(value)


def _render_table(header: list[str], rows: list[list]) -> str:
    cells = [header] + [[_fmt_cell(v) for v in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = []
    for i, row in enumerate(cells):
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def _render_csv(header: list[str], rows: list[list]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def _emit(payload: dict, fmt: str, output: str | None,
          header: list[str] | None = None, rows: list[list] | None = None):
    if fmt == "json":
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    elif fmt == "csv":
        text = _render_csv(header, rows)
    elif fmt == "table":
        text = _render_table(header, rows)
    else:
        _fail(f"unknown format {fmt!r}")
    if output:
        pathlib.Path(output).write_text(text)
        click.echo(f"wrote {output}")
    else:
        click.echo(text, nl=False)


@click.group()
def main():
    """Resource estimation toolkit for simulating chemistry Hamiltonians."""


@main.command()
@click.argument("fcidump", type=click.Path(exists=True, dir_okay=False),
                required=False)
@click.option("--method", type=click.Choice(["sparse", "sf", "df", "thc"]),
              default=None)
@click.option("--threshold", type=float, default=None)
@click.option("--target-l", "target_l", type=int, default=None)
@click.option("--tolerance", type=float, default=None)
@click.option("--rank", type=int, default=None)
@click.option("--starts", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--config", "config_path",
              type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--output", "-o", type=click.Path(), default=None)
def factorize(fcidump, method, threshold, target_l, tolerance, rank, starts,
              seed, config_path, output):
    """Factor an FCIDUMP into a serialized representation with its norms."""
    merged = _merge(_read_config_file(config_path), {
        "input": fcidump, "method": method, "threshold": threshold,
        "target_l": target_l, "tolerance": tolerance, "rank": rank,
        "starts": starts, "seed": seed, "output": output,
    })
    path = _get(merged, "input", str, required=True)
    method = _get(merged, "method", str, required=True)
    out_path = _get(merged, "output", str, default=f"{method}.json")

    try:
        data = tensors.load_fcidump(path)
    except (ValueError, OSError) as exc:
        _fail(str(exc))
    kin = tensors.compute_T(data)

    params: dict = {}
    try:
        if method == "sparse":
            thr = _get(merged, "threshold", float, required=True)
            rep, report = factorizations.sparse_truncate(data, kin.Tprime, thr)
            params = {"threshold": thr}
            echo = {"d": rep.d}
        elif method == "sf":
            tl = _get(merged, "target_l", int)
            tol = _get(merged, "tolerance", float)
            rep = factorizations.single_factorize(data, target_L=tl,
                                                  tolerance=tol)
            report = factorizations.lambda_report(rep, data)
            params = {"target_l": tl, "tolerance": tol}
            echo = {"L": rep.L}
        elif method == "df":
            thr = _get(merged, "threshold", float, required=True)
            tl = _get(merged, "target_l", int)
            sf = factorizations.single_factorize(data, target_L=tl)
            rep = factorizations.double_factorize(sf, thr)
            report = factorizations.lambda_report(rep, data)
            params = {"threshold": thr, "target_l": tl}
            echo = {"L": rep.L, "Xi_total": rep.Xi_total}
        else:
            rk = _get(merged, "rank", int)
            if rk is None:
                _fail("method thc needs --rank")
            n_starts = _get(merged, "starts", int, default=20)
            seed_val = _get(merged, "seed", int, default=0)
            fit = thc.thc_fit(
                data.V, rk,
                thc.FitConfig(n_starts=n_starts, seed=seed_val),
            )
            rep = fit.rep
            report = factorizations.lambda_report(rep, data)
            params = {"rank": rk, "starts": n_starts, "seed": seed_val,
                      "objective": fit.objective, "restart": fit.restart}
            echo = {"M": rep.M}
    except ValueError as exc:
        _fail(str(exc))

    config = RunConfig("factorize", method=method, input=path,
                       output=out_path, params=params)
    payload = {
        "schema": SCHEMA_VERSION,
        "config": config.resolved(),
        "input_hash": _hash_file(path),
        "rep": factorizations.rep_to_dict(rep),
        "lambda": report.to_dict(),
    }
    payload.update(echo)
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    pathlib.Path(out_path).write_text(text)
    summary = " ".join(f"{k}={v}" for k, v in echo.items())
    click.echo(f"{method}: {summary} lambda={report.total:.6g} -> {out_path}")


_LCU_COSTERS = {
    "sparse": costs.cost_sparse,
    "sf": costs.cost_sf,
    "df": costs.cost_df,
    "thc": costs.cost_thc,
}

_REPORT_COLUMNS = ["method", "lambda", "toffoli_per_step", "iterations",
                   "toffoli_total", "logical_qubits"]


def _report_row(report: costs.CostReport) -> list:
    return [
        report.method,
        report.inputs.get("lambda", report.inputs.get("lam")),
        report.toffoli_per_step,
        report.iterations,
        report.toffoli_total,
        report.logical_qubits,
    ]


def _params_from_rep(rep, lam: float, merged: dict) -> costs.CostParams:
    base = {
        "N": 2 * rep.n_spatial,
        "lam": lam,
        "eps_pea": _get(merged, "eps_pea", float, default=0.001),
        "b_r": _get(merged, "br", int, default=7),
        "aleph": _get(merged, "aleph", int),
        "aleph1": _get(merged, "aleph1", int),
        "aleph2": _get(merged, "aleph2", int),
        "beth": _get(merged, "beth", int),
    }
    if isinstance(rep, factorizations.SparseRep):
        return costs.CostParams(d=rep.d, **base)
    if isinstance(rep, factorizations.SFRep):
        return costs.CostParams(L=rep.L, **base)
    if isinstance(rep, factorizations.DFRep):
        return costs.CostParams(L=rep.L, Xi_total=rep.Xi_total, **base)
    return costs.CostParams(M=rep.M, **base)


def _method_key(rep) -> str:
    return {
        factorizations.SparseRep: "sparse",
        factorizations.SFRep: "sf",
        factorizations.DFRep: "df",
        factorizations.THCRep: "thc",
    }[type(rep)]


@main.command()
@click.option("--method",
              type=click.Choice(["sparse", "sf", "df", "thc", "qdrift", "all"]),
              default=None)
@click.option("--N", "n_qubits", type=int, default=None)
@click.option("--M", "rank_m", type=int, default=None)
@click.option("--L", "rank_l", type=int, default=None)
@click.option("--d", "coeff_count", type=int, default=None)
@click.option("--xi-total", type=int, default=None)
@click.option("--xi-max", type=int, default=None)
@click.option("--lambda", "lam", type=float, default=None)
@click.option("--eps-pea", type=float, default=None)
@click.option("--eps", type=float, default=None)
@click.option("--aleph", type=int, default=None)
@click.option("--aleph1", type=int, default=None)
@click.option("--aleph2", type=int, default=None)
@click.option("--beth", type=int, default=None)
@click.option("--br", type=int, default=None)
@click.option("--mode",
              type=click.Choice(["rms", "confidence", "hodges_lehmann"]),
              default=None)
@click.option("--from-reps", "from_reps",
              type=click.Path(exists=True, file_okay=False), default=None)
@click.option("--config", "config_path",
              type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "table"]),
              default=None)
@click.option("--output", "-o", type=click.Path(), default=None)
def cost(method, n_qubits, rank_m, rank_l, coeff_count, xi_total, xi_max, lam,
         eps_pea, eps, aleph, aleph1, aleph2, beth, br, mode, from_reps,
         config_path, fmt, output):
    """Toffoli and logical-qubit estimate for a factored Hamiltonian."""
    merged = _merge(_read_config_file(config_path), {
        "method": method, "n": n_qubits, "m": rank_m, "l": rank_l,
        "d": coeff_count, "xi_total": xi_total, "xi_max": xi_max,
        "lambda": lam, "eps_pea": eps_pea, "eps": eps, "aleph": aleph,
        "aleph1": aleph1, "aleph2": aleph2, "beth": beth, "br": br,
        "mode": mode, "from_reps": from_reps, "format": fmt, "output": output,
    })
    method = _get(merged, "method", str, required=True)
    fmt = _get(merged, "format", str, default="json")
    output = _get(merged, "output", str)
    from_reps = _get(merged, "from_reps", str)

    reports: list[costs.CostReport] = []
    input_hash = None
    input_name = None
    try:
        if from_reps is not None:
            rep_dir = pathlib.Path(from_reps)
            files = sorted(rep_dir.glob("*.json"))
            if not files:
                _fail(f"no representation files in {from_reps}")
            hasher = hashlib.sha256()
            for f in files:
                payload = json.loads(f.read_text())
                rep_dict = payload.get("rep", payload)
                lam_total = payload.get("lambda", {}).get("total")
                rep = factorizations.rep_from_dict(rep_dict)
                if lam_total is None:
                    _fail(f"{f.name}: no lambda recorded; refactorize first")
                key = _method_key(rep)
                if method not in ("all", key):
                    continue
                hasher.update(f.read_bytes())
                reports.append(
                    _LCU_COSTERS[key](_params_from_rep(rep, lam_total, merged))
                )
            input_hash = hasher.hexdigest()
            input_name = from_reps
            if not reports:
                _fail(f"no {method} representation found in {from_reps}")
        elif method == "qdrift":
            lam_val = _get(merged, "lambda", float, required=True)
            eps_val = _get(merged, "eps", float, default=0.0016)
            mode_val = _get(merged, "mode", str, default="rms")
            n_val = _get(merged, "n", int)
            reports.append(qdrift.cost_qdrift(lam_val, eps_val, N=n_val,
                                              mode=mode_val))
        elif method in _LCU_COSTERS:
            base = {
                "N": _get(merged, "n", int, required=True),
                "lam": _get(merged, "lambda", float, required=True),
                "eps_pea": _get(merged, "eps_pea", float, default=0.001),
                "b_r": _get(merged, "br", int, default=7),
                "aleph": _get(merged, "aleph", int),
                "aleph1": _get(merged, "aleph1", int),
                "aleph2": _get(merged, "aleph2", int),
                "beth": _get(merged, "beth", int),
            }
            if method == "sparse":
                base["d"] = _get(merged, "d", int, required=True)
            elif method == "sf":
                base["L"] = _get(merged, "l", int, required=True)
            elif method == "df":
                base["L"] = _get(merged, "l", int, required=True)
                base["Xi_total"] = _get(merged, "xi_total", int, required=True)
                base["Xi_max"] = _get(merged, "xi_max", int)
            else:
                base["M"] = _get(merged, "m", int, required=True)
            reports.append(_LCU_COSTERS[method](costs.CostParams(**base)))
        else:
            _fail("method all needs --from-reps")
    except ValueError as exc:
        _fail(str(exc))

    params = {k: v for k, v in merged.items()
              if k not in ("method", "format", "output", "from_reps")}
    config = RunConfig("cost", method=method, input=input_name, output=output,
                       fmt=fmt, params=params)
    resolved = config.resolved()
    payload = {
        "schema": SCHEMA_VERSION,
        "config": resolved,
        "input_hash": input_hash or _hash_config(resolved),
        "reports": [r.to_dict() for r in reports],
    }
    rows = [_report_row(r) for r in reports]
    _emit(payload, fmt, output, header=_REPORT_COLUMNS, rows=rows)


@main.command()
@click.option("--toffoli", type=float, default=None)
@click.option("--tiles", type=float, default=None)
@click.option("--logical-qubits", type=float, default=None)
@click.option("--p", "phys_error", type=float, default=None)
@click.option("--cycle-time", type=float, default=None)
@click.option("--reaction-time", type=float, default=None)
@click.option("--budget", type=float, default=None)
@click.option("--factories", type=int, default=None)
@click.option("--factory-rate", type=float, default=None)
@click.option("--config", "config_path",
              type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "table"]),
              default=None)
@click.option("--output", "-o", type=click.Path(), default=None)
def layout(toffoli, tiles, logical_qubits, phys_error, cycle_time,
           reaction_time, budget, factories, factory_rate, config_path, fmt,
           output):
    """Physical qubits and wall-clock time for a Toffoli workload."""
    merged = _merge(_read_config_file(config_path), {
        "toffoli": toffoli, "tiles": tiles, "logical_qubits": logical_qubits,
        "p": phys_error, "cycle_time": cycle_time,
        "reaction_time": reaction_time, "budget": budget,
        "factories": factories, "factory_rate": factory_rate,
        "format": fmt, "output": output,
    })
    fmt = _get(merged, "format", str, default="json")
    output = _get(merged, "output", str)
    count = _get(merged, "toffoli", float, required=True)
    tiles_val = _get(merged, "tiles", float)
    lq = _get(merged, "logical_qubits", float)

    kwargs = {}
    for key, field in (("p", "phys_error_rate"), ("cycle_time", "cycle_time"),
                       ("reaction_time", "reaction_time"),
                       ("budget", "total_error_budget"),
                       ("factories", "factory_count"),
                       ("factory_rate", "factory_rate_per_factory")):
        value = _get(merged, key, float if key != "factories" else int)
        if value is not None:
            kwargs[field] = value
    try:
        assumptions = surface.PhysicalAssumptions(**kwargs)
        if tiles_val is not None:
            estimate = surface.layout_estimate(
                assumptions=assumptions, tiles=tiles_val, toffoli=count)
        elif lq is not None:
            report = costs.CostReport(
                method="external", toffoli_per_step=1, iterations=count,
                logical_qubits=int(lq))
            estimate = surface.layout_estimate(report, assumptions=assumptions)
        else:
            _fail("need --tiles or --logical-qubits")
    except ValueError as exc:
        _fail(str(exc))

    params = {k: v for k, v in merged.items() if k not in ("format", "output")}
    config = RunConfig("layout", output=output, fmt=fmt, params=params)
    resolved = config.resolved()
    payload = {
        "schema": SCHEMA_VERSION,
        "config": resolved,
        "input_hash": _hash_config(resolved),
        "estimate": estimate.to_dict(),
    }
    est = estimate.to_dict()
    header = list(est.keys())
    _emit(payload, fmt, output, header=header, rows=[list(est.values())])


def _suite_spectrum(seed: int, inject: bool) -> list[dict]:
    checks = []
    for i, n in enumerate((2, 3)):
        data = tensors.random_instance(n, seed=seed + i)
        kin = tensors.compute_T(data)
        sf = factorizations.single_factorize(data)
        rng = np.random.default_rng(seed + 100 + i)
        chi = rng.normal(size=(n, n * n))
        chi /= np.linalg.norm(chi, axis=0)
        zeta = rng.normal(size=(n * n, n * n))
        reps = [
            factorizations.sparse_truncate(data, kin.Tprime, 0.0)[0],
            sf,
            factorizations.double_factorize(sf, 0.0),
            factorizations.THCRep(chi=chi, zeta=0.5 * (zeta + zeta.T)),
        ]
        for rep in reps:
            result = verify.lambda_bounds_spectrum(rep, data)
            ok = result["ok"]
            note = ""
            if inject and not checks:
                # Corrupt the measured spectral radius so the bound must fail.
                ok = (result["max_abs_shifted"] + result["lambda"]
                      <= result["lambda"] + verify.LAMBDA_BOUND_ATOL)
                note = " (injected: spectral radius inflated)"
            checks.append({
                "name": f"spectrum {result['method']} n={n}{note}",
                "ok": bool(ok),
                "detail": f"margin={result['margin']:.3e}",
            })
    return checks


def _suite_contiguous(inject: bool) -> list[dict]:
    checks = []
    for n in range(2, 9):
        count, correct = verify.simulate_contiguous_schedule(n)
        expected = n * n + n - 1 + (1 if inject else 0)
        note = " (injected: target off by one)" if inject else ""
        checks.append({
            "name": f"contiguous n={n}{note}",
            "ok": bool(correct and count == expected),
            "detail": f"toffoli={count} expected={expected}",
        })
    return checks


def _suite_reconstruction(seed: int, inject: bool) -> list[dict]:
    checks = []
    data = tensors.random_instance(3, seed=seed)
    target = data.V.copy()
    if inject:
        target[0, 0, 0, 0] += 1.0
    kin = tensors.compute_T(data)

    sparse_rep, _ = factorizations.sparse_truncate(data, kin.Tprime, 0.0)
    err = np.max(np.abs(sparse_rep.dense() - target))
    note = " (injected: reference perturbed)" if inject else ""
    checks.append({"name": f"reconstruction sparse{note}",
                   "ok": bool(err <= 1e-10), "detail": f"max_abs={err:.3e}"})

    sf = factorizations.single_factorize(data)
    err = np.max(np.abs(sf.reconstruct() - target))
    checks.append({"name": f"reconstruction sf{note}",
                   "ok": bool(err <= 1e-8), "detail": f"max_abs={err:.3e}"})

    df = factorizations.double_factorize(sf, 0.0)
    err = np.max(np.abs(df.reconstruct() - target))
    checks.append({"name": f"reconstruction df{note}",
                   "ok": bool(err <= 1e-8), "detail": f"max_abs={err:.3e}"})
    return checks


@main.command("verify")
@click.option("--suite", "suites", multiple=True,
              type=click.Choice(["spectrum", "contiguous", "reconstruction"]))
@click.option("--all", "run_all", is_flag=True, default=False)
@click.option("--seed", type=int, default=0)
@click.option("--inject-failure", is_flag=True, default=False)
def verify_cmd(suites, run_all, seed, inject_failure):
    """Run oracle suites; exits 1 if any check fails."""
    selected = list(suites)
    if run_all:
        selected = ["spectrum", "contiguous", "reconstruction"]
    if not selected:
        _fail("choose --suite or --all")
    checks: list[dict] = []
    for name in selected:
        if name == "spectrum":
            checks.extend(_suite_spectrum(seed, inject_failure))
        elif name == "contiguous":
            checks.extend(_suite_contiguous(inject_failure))
        else:
            checks.extend(_suite_reconstruction(seed, inject_failure))
    failed = 0
    for check in checks:
        status = "pass" if check["ok"] else "FAIL"
        click.echo(f"[{status}] {check['name']}: {check['detail']}")
        failed += 0 if check["ok"] else 1
    click.echo(f"{len(checks) - failed}/{len(checks)} checks passed")
    if failed:
        sys.exit(1)


if __name__ == "__main__":
    main()
