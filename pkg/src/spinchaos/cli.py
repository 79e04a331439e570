"""Batch command line interface.

Subcommands:
  run <config>       execute an experiment, write CSV + JSON + manifest
  validate <config>  parse and validate the config, touch nothing
  fixtures           list built-in hypergraphs (--write DIR dumps them)

Configs are strict JSON: unknown keys anywhere fail validation. A run is
a pure function of (config, seed): rerunning the same config writes
byte-identical result CSV and JSON (the manifest records wall time and
is exempt). Exit codes: 2 validation, 3 capacity, 4 numerical breakdown.

SPINCHAOS_THREADS sets the worker count for replica loops; results are
merged by replica index so the thread count never changes output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np
import scipy

from . import __version__, chaos, fixtures, randgraph
from . import disorder as dis
from .errors import SpinchaosError, ValidationError
from .hypergraph import Hypergraph
from .hypergraph import load as load_graph
from .hypergraph import save as save_graph

EXPERIMENTS = ("chaos-curve", "bound-check", "lower-bound-check",
               "growth-stats", "hypertree-trend", "coefficient-audit",
               "counterexamples", "levy-chaos")

UPPER_TAGS = ("general-ball", "poly-growth", "exp-growth", "diluted", "levy")
LOWER_TAGS = ("lower-discrete", "lower-gaussian")


def _expect(block: dict, where: str, required: tuple[str, ...], optional: tuple[str, ...] = ()):
    if not isinstance(block, dict):
        raise ValidationError(f"{where} must be an object, got {type(block).__name__}")
    unknown = sorted(set(block) - set(required) - set(optional))
    if unknown:
        raise ValidationError(f"unknown keys in {where}: {unknown}")
    missing = sorted(set(required) - set(block))
    if missing:
        raise ValidationError(f"missing keys in {where}: {missing}")


def _positive_int(val, where: str) -> int:
    if not isinstance(val, int) or isinstance(val, bool) or val < 1:
        raise ValidationError(f"{where} must be a positive integer, got {val!r}")
    return val


def _number(val, where: str) -> float:
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ValidationError(f"{where} must be a number, got {val!r}")
    return float(val)


def _parse_alphas(block, where: str) -> dict[int, float]:
    if not isinstance(block, dict) or not block:
        raise ValidationError(f"{where} must be a nonempty object of arity -> alpha")
    out = {}
    for k, v in block.items():
        try:
            p = int(k)
        except (TypeError, ValueError):
            raise ValidationError(f"{where} arity key {k!r} is not an integer")
        out[p] = _number(v, f"{where}[{k}]")
    return out


def _parse_graph(block, where: str):
    _expect(block, where, (), ("fixture", "file", "diluted"))
    if len(block) != 1:
        raise ValidationError(f"{where} must have exactly one of fixture/file/diluted")
    if "fixture" in block:
        return fixtures.get_fixture(block["fixture"])
    if "file" in block:
        path = Path(block["file"])
        if not path.exists():
            raise ValidationError(f"{where}.file does not exist: {path}")
        return load_graph(path)
    sub = block["diluted"]
    _expect(sub, f"{where}.diluted", ("n", "alphas"))
    return randgraph.diluted_spec(_positive_int(sub["n"], f"{where}.diluted.n"),
                                  _parse_alphas(sub["alphas"], f"{where}.diluted.alphas"))


def _parse_disorder(block, where: str) -> dis.DisorderModel:
    _expect(block, where, ("kind",), ("kappa", "alpha"))
    kind = block["kind"]
    kwargs = {}
    if "kappa" in block:
        kwargs["kappa"] = _number(block["kappa"], f"{where}.kappa")
    if "alpha" in block:
        kwargs["alpha"] = _number(block["alpha"], f"{where}.alpha")
    return dis.DisorderModel(kind, **kwargs)


def _parse_beta(val, where: str):
    if val == "infinity":
        return None
    b = _number(val, where)
    if b < 0:
        raise ValidationError(f"{where} must be >= 0 or 'infinity', got {val}")
    return b


def load_config(path) -> dict:
    path = Path(path)
    if not path.exists():
        raise ValidationError(f"config file not found: {path}")
    try:
        cfg = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config is not valid JSON: {exc}") from exc
    _expect(cfg, "config", ("experiment", "seed", "output"),
            ("model", "curve", "growth", "trend", "audit", "suite", "levy"))
    if cfg["experiment"] not in EXPERIMENTS:
        raise ValidationError(f"experiment must be one of {EXPERIMENTS}, "
                              f"got {cfg['experiment']!r}")
    _positive_int(cfg["seed"], "seed")
    if not isinstance(cfg["output"], str) or not cfg["output"]:
        raise ValidationError("output must be a nonempty directory path")
    _validate_sections(cfg)
    return cfg


def _validate_sections(cfg: dict):
    exp = cfg["experiment"]
    needs = {
        "chaos-curve": ("model", "curve"),
        "bound-check": ("model", "curve"),
        "lower-bound-check": ("model", "curve"),
        "growth-stats": ("growth",),
        "hypertree-trend": ("trend",),
        "coefficient-audit": ("model", "audit"),
        "counterexamples": ("suite",),
        "levy-chaos": ("levy",),
    }[exp]
    for section in needs:
        if section not in cfg:
            raise ValidationError(f"experiment {exp} needs section {section!r}")
    extras = sorted(set(cfg) - {"experiment", "seed", "output"} - set(needs))
    if extras:
        raise ValidationError(f"experiment {exp} does not accept sections {extras}")

    curve_kinds = ("chaos-curve", "bound-check", "lower-bound-check")
    if exp in curve_kinds + ("coefficient-audit",):
        _expect(cfg["model"], "model", ("graph", "disorder", "beta"), ("perturbation",))
        _parse_graph(cfg["model"]["graph"], "model.graph")
        _parse_disorder(cfg["model"]["disorder"], "model.disorder")
        _parse_beta(cfg["model"]["beta"], "model.beta")
    if exp in curve_kinds:
        if "perturbation" not in cfg["model"]:
            raise ValidationError(f"{exp} needs model.perturbation")
        if cfg["model"]["perturbation"] not in chaos.PERTURBATION_KINDS:
            raise ValidationError(f"model.perturbation must be one of "
                                  f"{chaos.PERTURBATION_KINDS}")
        c = cfg["curve"]
        _expect(c, "curve", ("t_grid", "replicas"),
                ("mode", "mcmc_sweeps", "mcmc_burn_in", "bounds", "bound_params"))
        if not isinstance(c["t_grid"], list) or not c["t_grid"]:
            raise ValidationError("curve.t_grid must be a nonempty list")
        for t in c["t_grid"]:
            _number(t, "curve.t_grid entry")
        _positive_int(c["replicas"], "curve.replicas")
        if c.get("mode", "exact") not in ("exact", "mcmc"):
            raise ValidationError("curve.mode must be exact or mcmc")
        tags = c.get("bounds", [])
        for tag in tags:
            if tag not in UPPER_TAGS + LOWER_TAGS:
                raise ValidationError(f"unknown bound tag {tag!r}")
        if exp == "bound-check":
            if not tags or any(tag not in UPPER_TAGS for tag in tags):
                raise ValidationError("bound-check needs curve.bounds with "
                                      f"tags from {UPPER_TAGS}")
        if exp == "lower-bound-check":
            if not tags or any(tag not in LOWER_TAGS for tag in tags):
                raise ValidationError("lower-bound-check needs curve.bounds "
                                      f"with tags from {LOWER_TAGS}")
    if exp == "coefficient-audit":
        a = cfg["audit"]
        _expect(a, "audit", ("i", "j", "degree_cap", "order"), ("tol", "sign_tol"))
        if isinstance(_parse_graph(cfg["model"]["graph"], "model.graph"),
                      randgraph.DilutedSpec):
            raise ValidationError("coefficient-audit needs a fixed graph")
        if _parse_beta(cfg["model"]["beta"], "model.beta") is None:
            raise ValidationError("coefficient-audit needs finite beta")
    if exp == "growth-stats":
        gblock = cfg["growth"]
        _expect(gblock, "growth", ("n", "alphas", "depth", "replicas"))
        _positive_int(gblock["n"], "growth.n")
        _positive_int(gblock["replicas"], "growth.replicas")
        _parse_alphas(gblock["alphas"], "growth.alphas")
        if not isinstance(gblock["depth"], int) or gblock["depth"] < 0:
            raise ValidationError("growth.depth must be an int >= 0")
    if exp == "hypertree-trend":
        tblock = cfg["trend"]
        _expect(tblock, "trend", ("alphas", "n_values", "eps", "replicas"))
        _parse_alphas(tblock["alphas"], "trend.alphas")
        if not isinstance(tblock["n_values"], list) or len(tblock["n_values"]) < 2:
            raise ValidationError("trend.n_values must list at least two sizes")
        _number(tblock["eps"], "trend.eps")
        _positive_int(tblock["replicas"], "trend.replicas")
    if exp == "counterexamples":
        _expect(cfg["suite"], "suite", (), ("draws", "order"))
    if exp == "levy-chaos":
        lblock = cfg["levy"]
        _expect(lblock, "levy", ("alpha", "beta", "n_values", "replicas"), ("t",))
        _number(lblock["alpha"], "levy.alpha")
        _number(lblock["beta"], "levy.beta")
        _positive_int(lblock["replicas"], "levy.replicas")
        if not isinstance(lblock["n_values"], list) or not lblock["n_values"]:
            raise ValidationError("levy.n_values must be a nonempty list")


def _threads() -> int:
    raw = os.environ.get("SPINCHAOS_THREADS", "1")
    try:
        val = int(raw)
    except ValueError:
        raise ValidationError(f"SPINCHAOS_THREADS must be an integer, got {raw!r}")
    if val < 1:
        raise ValidationError(f"SPINCHAOS_THREADS must be >= 1, got {val}")
    return val


def _fmt(val) -> str:
    if val is None:
        return ""
    if isinstance(val, (bool, np.bool_)):
        return "true" if val else "false"
    if isinstance(val, (float, np.floating)):
        return repr(float(val))
    if isinstance(val, np.integer):
        return str(int(val))
    return str(val)


def _write_csv(path: Path, columns: list[str], rows: list[dict]):
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_fmt(row.get(c)) for c in columns))
    _atomic_write(path, "\n".join(lines) + "\n")


def _atomic_write(path: Path, text: str):
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def _write_json(path: Path, payload: dict):
    _atomic_write(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _run_chaos_curve(cfg: dict):
    model_cfg = cfg["model"]
    graph_source = _parse_graph(model_cfg["graph"], "model.graph")
    model = _parse_disorder(model_cfg["disorder"], "model.disorder")
    beta = _parse_beta(model_cfg["beta"], "model.beta")
    c = cfg["curve"]
    curve = chaos.chaos_curve(
        graph_source, model, beta, model_cfg["perturbation"],
        [float(t) for t in c["t_grid"]], c["replicas"], cfg["seed"],
        mode=c.get("mode", "exact"), mcmc_sweeps=c.get("mcmc_sweeps", 20000),
        mcmc_burn_in=c.get("mcmc_burn_in", 2000), threads=_threads())

    rows = []
    for ti, t in enumerate(curve.t_grid):
        rows.append({"t": t, "estimate": float(curve.estimates[ti]),
                     "se": float(curve.ses[ti]), "bound_tag": None,
                     "bound_value": None, "margin": None})
    checks = []
    tags = list(c.get("bounds", []))
    upper = [tag for tag in tags if tag in UPPER_TAGS]
    if upper:
        checks.extend(chaos.theorem_bound_check(curve, graph_source, tags=upper,
                                                params=c.get("bound_params", {})))
    if "lower-discrete" in tags:
        n_edges = _edge_count(graph_source)
        checks.append(chaos.lower_bound_discrete(curve, n_edges))
    if "lower-gaussian" in tags:
        if model.kind != "identity":
            raise ValidationError("lower-gaussian needs identity disorder")
        checks.append(chaos.lower_bound_gaussian(curve, beta, _edge_count(graph_source)))
    flat_checks = []
    for ch in checks:
        flat_checks.extend(ch if isinstance(ch, list) else [ch])
    for ch in flat_checks:
        rows.append({"t": ch.t, "estimate": ch.estimate, "se": ch.se,
                     "bound_tag": ch.tag, "bound_value": ch.bound, "margin": ch.margin})
    mono = chaos.monotonicity_check(curve)
    payload = {
        "curve": {"t_grid": list(curve.t_grid), "estimates": curve.estimates,
                  "ses": curve.ses, "meta": curve.meta},
        "bounds": [{"tag": ch.tag, "t": ch.t, "estimate": ch.estimate, "se": ch.se,
                    "bound": ch.bound, "margin": ch.margin, "ok": ch.ok,
                    "extra": ch.extra} for ch in flat_checks],
        "monotonicity": mono,
    }
    columns = ["t", "estimate", "se", "bound_tag", "bound_value", "margin"]
    return columns, rows, payload, tags


def _edge_count(graph_source) -> int:
    if isinstance(graph_source, Hypergraph):
        return graph_source.n_edges
    raise ValidationError("this bound needs a fixed graph")


def _run_growth(cfg: dict):
    gblock = cfg["growth"]
    spec = randgraph.diluted_spec(gblock["n"], _parse_alphas(gblock["alphas"], "growth.alphas"))
    stats = randgraph.growth_stats(spec, gblock["depth"], gblock["replicas"], cfg["seed"])
    rows = randgraph.growth_stats_rows(stats)
    payload = {
        "lambda": spec.growth_rate, "lambda_prime": spec.growth_rate_prime,
        "cycle_prob": stats.cycle_prob, "cycle_prob_se": stats.cycle_prob_se,
        "rows": rows,
    }
    columns = ["t", "mean_I", "se_I", "mean_I2", "se_I2", "mean_B",
               "bound_lambda_t", "bound_second_moment"]
    return columns, rows, payload, []


def _run_trend(cfg: dict):
    tblock = cfg["trend"]
    rows = randgraph.hypertree_trend(
        _parse_alphas(tblock["alphas"], "trend.alphas"), tblock["n_values"],
        float(tblock["eps"]), tblock["replicas"], cfg["seed"])
    decreasing = all(b["cycle_prob"] <= a["cycle_prob"] for a, b in zip(rows, rows[1:]))
    payload = {"rows": rows, "decreasing": decreasing}
    return ["n", "depth", "cycle_prob", "se"], rows, payload, []


def _run_audit(cfg: dict):
    model_cfg = cfg["model"]
    graph = _parse_graph(model_cfg["graph"], "model.graph")
    model = _parse_disorder(model_cfg["disorder"], "model.disorder")
    beta = _parse_beta(model_cfg["beta"], "model.beta")
    a = cfg["audit"]
    report = chaos.coefficient_audit(graph, model, beta, a["i"], a["j"],
                                     a["degree_cap"], a["order"],
                                     tol=a.get("tol", 1e-6),
                                     sign_tol=a.get("sign_tol", 1e-8))
    rows = []
    for r in report.rows:
        rows.append({
            "n": ";".join(f"{eid}:{d}" for eid, d in r.n.degrees) or "0",
            "value": r.value, "forced_zero": r.forced_zero,
            "in_support": r.in_support, "path_ij": r.path_ij,
            "support_size": r.support_size,
        })
    payload = {
        "i": report.i, "j": report.j, "beta": report.beta,
        "degree_cap": report.degree_cap, "order": report.order,
        "hypertree_radius": report.hypertree_radius,
        "e_phi_sq": report.e_phi_sq,
        "sign_violations": list(report.sign_violations),
        "path_violations": list(report.path_violations),
        "hypertree_violations": list(report.hypertree_violations),
        "rows": rows,
    }
    columns = ["n", "value", "forced_zero", "in_support", "path_ij", "support_size"]
    return columns, rows, payload, []


def _run_suite(cfg: dict):
    sblock = cfg["suite"]
    result = chaos.counterexample_suite(cfg["seed"], draws=sblock.get("draws", 100),
                                        order=sblock.get("order", 16))
    rows = [
        {"item": "remark", "metric": "tanh_identity_max_err",
         "value": result["remark"]["tanh_identity_max_err"]},
        {"item": "remark", "metric": "unforced_index_coeff",
         "value": result["remark"]["unforced_index_coeff"]},
    ]
    for entry in result["two_lobe"]:
        k = entry["k"]
        rows.append({"item": f"two_lobe_k{k}", "metric": "decoupling_max_err",
                     "value": entry["decoupling_max_err"]})
        rows.append({"item": f"two_lobe_k{k}", "metric": "tanh_product_max_err",
                     "value": entry["tanh_product_max_err"]})
        for beta in (0.5, 1.0):
            coeff = entry[f"coeff_beta_{beta}"]
            rows.append({"item": f"two_lobe_k{k}", "metric": f"coeff_beta_{beta}",
                         "value": coeff["value"]})
            rows.append({"item": f"two_lobe_k{k}",
                         "metric": f"coeff_factorized_beta_{beta}",
                         "value": coeff["factorized"]})
    return ["item", "metric", "value"], rows, result, []


def _run_levy(cfg: dict):
    lblock = cfg["levy"]
    result = chaos.levy_chaos(lblock["n_values"], float(lblock["alpha"]),
                              float(lblock["beta"]), lblock.get("t"),
                              lblock["replicas"], cfg["seed"])
    rows = [{"n": p.n, "estimate": p.estimate, "se": p.se} for p in result["points"]]
    payload = {k: v for k, v in result.items() if k != "points"}
    payload["points"] = rows
    return ["n", "estimate", "se"], rows, payload, []


RUNNERS = {
    "chaos-curve": _run_chaos_curve,
    "bound-check": _run_chaos_curve,
    "lower-bound-check": _run_chaos_curve,
    "growth-stats": _run_growth,
    "hypertree-trend": _run_trend,
    "coefficient-audit": _run_audit,
    "counterexamples": _run_suite,
    "levy-chaos": _run_levy,
}


def run_experiment(cfg: dict) -> dict:
    t0 = time.monotonic()
    columns, rows, payload, bound_tags = RUNNERS[cfg["experiment"]](cfg)
    outdir = Path(cfg["output"])
    outdir.mkdir(parents=True, exist_ok=True)
    csv_path = outdir / "results.csv"
    json_path = outdir / "results.json"
    _write_csv(csv_path, columns, rows)
    _write_json(json_path, _jsonable({"config": cfg, "seed": cfg["seed"],
                                      "results": payload}))
    manifest = {
        "experiment": cfg["experiment"],
        "seed": cfg["seed"],
        "config": cfg,
        "bound_tags": bound_tags,
        "outputs": [csv_path.name, json_path.name],
        "versions": {"spinchaos": __version__, "numpy": np.__version__,
                     "scipy": scipy.__version__,
                     "python": ".".join(map(str, sys.version_info[:3]))},
        "threads": _threads(),
        "wall_time_s": time.monotonic() - t0,
    }
    _write_json(outdir / "manifest.json", _jsonable(manifest))
    return manifest


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="spinchaos",
                                     description="disorder chaos experiments")
    sub = parser.add_subparsers(dest="cmd", required=True)
    p_run = sub.add_parser("run", help="run an experiment from a config file")
    p_run.add_argument("config")
    p_val = sub.add_parser("validate", help="validate a config file")
    p_val.add_argument("config")
    p_fix = sub.add_parser("fixtures", help="list built-in hypergraphs")
    p_fix.add_argument("--write", metavar="DIR", default=None,
                       help="also write each fixture to DIR in text format")
    args = parser.parse_args(argv)

    try:
        if args.cmd == "validate":
            cfg = load_config(args.config)
            print(f"ok: {cfg['experiment']}")
            return 0
        if args.cmd == "fixtures":
            for name, (graph, desc) in fixtures.catalog().items():
                print(f"{name}: N={graph.n} edges={graph.n_edges} :: {desc}")
                if args.write:
                    outdir = Path(args.write)
                    outdir.mkdir(parents=True, exist_ok=True)
                    save_graph(graph, outdir / f"{name}.hg")
            return 0
        cfg = load_config(args.config)
        manifest = run_experiment(cfg)
        print(f"done: {cfg['experiment']} -> {cfg['output']} "
              f"({manifest['wall_time_s']:.1f}s)")
        return 0
    except SpinchaosError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
