"""Declarative scenario runner and report emitter.

A scenario is a JSON file naming one command and its inputs:

    {"name": "demo", "command": "verify", "theorem": "T2_2dot",
     "functions": {"f": "x^2", "h": "t"}, "m": 1.0,
     "points": {"x": 0.0, "y": 1.0}, "seed": 0}

Commands: certify, falsify, verify, reduce, sweep.  Reports go to stdout as
text (or JSON with --format machine) and optionally to a file; sweeps can
additionally emit CSV.  Exit codes: 0 all pass / nothing found as expected,
1 inequality failure or counterexample found, 2 usage or schema error,
3 numeric indeterminate.

Machine-format reports are byte-reproducible for identical scenario, seed
and tool version: floats are printed with 17 significant digits and wall
time is reported only in the text format.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Any

from . import __version__
from .classes import (
    CLASS_TAGS,
    DEFAULT_CERTIFY_N,
    DEFAULT_DEFECT_TOL,
    DEFAULT_FALSIFY_BUDGET,
    certify_sampled,
    class_spec,
    falsify,
)
from .errors import GenConvexError, ScenarioError
from .funcdsl import CATALOG_FAMILIES, catalog, func_from_expr, infer_variable
from .quad import DEFAULT_TOL, h_moments
from .theorems import (
    BACKGROUND_IDS,
    DEFAULT_REPORT_TOL,
    MAIN_IDS,
    REDUCTION_PAIRS,
    Verdict,
    check_reduction,
    verify_background,
    verify_t2_1,
    verify_t2_2,
    verify_t2_2dot,
    verify_t2_3,
)

__all__ = ["main", "run_scenario", "load_scenario", "normalize_scenario"]

COMMANDS = ("certify", "falsify", "verify", "reduce", "sweep")
SWEEP_PARAMS = ("m", "x", "y", "s")
SWEEP_CELL_CAP = 100_000
MOMENTS_ID = "H_MOMENTS"
CSV_FIXED_COLUMNS = ("theorem_id", "lhs", "rhs", "margin", "quad_err", "status")

_H_CLASS_TAGS = ("h_convex", "hm_convex", "phi_h_convex", "phi_hm_convex")
_PHI_CONVEX_NOTE = (
    "phi-convex defect reads the endpoint weights as t and (1-t)"
)

EXIT_OK = 0
EXIT_FOUND = 1
EXIT_USAGE = 2
EXIT_INDETERMINATE = 3


# --------------------------------------------------------------------------
# Deterministic JSON emission (17 significant digits, no NaN)
# --------------------------------------------------------------------------

def format_float(value: float) -> str:
    return "%.17g" % value


def _json_fragment(obj: Any, indent: int, out: list) -> None:
    pad = "  " * indent
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(format_float(obj) if math.isfinite(obj) else "null")
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (key, value) in enumerate(obj.items()):
            out.append(pad + "  " + json.dumps(str(key)) + ": ")
            _json_fragment(value, indent + 1, out)
            out.append(",\n" if i + 1 < len(obj) else "\n")
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        out.append("[\n")
        for i, value in enumerate(obj):
            out.append(pad + "  ")
            _json_fragment(value, indent + 1, out)
            out.append(",\n" if i + 1 < len(obj) else "\n")
        out.append(pad + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dump_machine(obj: Any) -> str:
    out: list[str] = []
    _json_fragment(obj, 0, out)
    out.append("\n")
    return "".join(out)


# --------------------------------------------------------------------------
# Scenario loading and validation
# --------------------------------------------------------------------------

def load_scenario(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ScenarioError("scenario must be a JSON object")
    return raw


def _expect(cond: bool, message: str, field: str = "") -> None:
    if not cond:
        raise ScenarioError(message, field)


def _as_float(value, field: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"field {field} must be a number", field)
    value = float(value)
    if not math.isfinite(value):
        raise ScenarioError(f"field {field} must be finite", field)
    return value


def _as_int(value, field: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioError(f"field {field} must be an integer", field)
    return value


def _normalize_function(value, field: str, default_domain) -> dict:
    """Canonicalize a function binding: DSL string or catalog reference."""
    if isinstance(value, str):
        value = {"expr": value}
    if not isinstance(value, dict):
        raise ScenarioError(f"field {field} must be a string or object", field)
    domain = value.get("domain", default_domain)
    if (
        not isinstance(domain, (list, tuple))
        or len(domain) != 2
    ):
        raise ScenarioError(f"field {field}.domain must be [lo, hi]", f"{field}.domain")
    domain = [_as_float(domain[0], f"{field}.domain"), _as_float(domain[1], f"{field}.domain")]
    _expect(domain[0] <= domain[1], f"field {field}.domain is reversed", f"{field}.domain")
    if "expr" in value:
        text = value["expr"]
        _expect(isinstance(text, str), f"field {field}.expr must be a string", f"{field}.expr")
        variable = value.get("variable")
        if variable is None:
            try:
                variable = infer_variable(text)
            except GenConvexError as exc:
                raise ScenarioError(f"field {field}.expr: {exc}", f"{field}.expr") from None
        _expect(isinstance(variable, str), f"field {field}.variable must be a string",
                f"{field}.variable")
        try:
            func_from_expr(text, variable, (domain[0], domain[1]))
        except GenConvexError as exc:
            raise ScenarioError(f"field {field}.expr does not parse: {exc}", f"{field}.expr") from None
        return {"expr": text, "variable": variable, "domain": domain}
    if "family" in value:
        family = value["family"]
        _expect(isinstance(family, str) and family in CATALOG_FAMILIES,
                f"field {field}.family must be one of {', '.join(CATALOG_FAMILIES)}",
                f"{field}.family")
        params = value.get("params", [])
        _expect(isinstance(params, (list, tuple)), f"field {field}.params must be a list",
                f"{field}.params")
        params = [_as_float(p, f"{field}.params") for p in params]
        try:
            catalog(family, params, (domain[0], domain[1]))
        except GenConvexError as exc:
            raise ScenarioError(f"field {field}: {exc}", field) from None
        return {"family": family, "params": params, "domain": domain}
    raise ScenarioError(f"field {field} needs either 'expr' or 'family'", field)


def _build_function(spec: dict):
    if "expr" in spec:
        return func_from_expr(spec["expr"], spec["variable"], tuple(spec["domain"]))
    return catalog(spec["family"], spec["params"], tuple(spec["domain"]))


_THEOREM_NEEDS = {
    "HC": ("f",),
    "T1_9": ("f", "h"),
    "T1_11": ("f", "h"),
    "T1_13": ("f", "h"),
    "T1_14": ("f", "g", "h"),
    "T2_1": ("f", "h"),
    "T2_2dot": ("f", "h"),
    "T2_2": ("f", "h"),
    "T2_3": ("f", "g", "h"),
    MOMENTS_ID: ("h",),
}


def normalize_scenario(raw: dict) -> dict:
    """Validate a raw scenario object and fill every default.

    The result is the canonical scenario echo embedded in reports; running
    it again reproduces the same report bytes.
    """
    _expect("command" in raw, "missing field: command", "command")
    command = raw["command"]
    _expect(command in COMMANDS,
            f"field command must be one of {', '.join(COMMANDS)}", "command")
    _expect("name" in raw, "missing field: name", "name")
    name = raw["name"]
    _expect(isinstance(name, str) and name != "", "field name must be a nonempty string", "name")

    domain = raw.get("domain", [0.0, 1.0])
    _expect(isinstance(domain, (list, tuple)) and len(domain) == 2,
            "field domain must be [lo, hi]", "domain")
    domain = [_as_float(domain[0], "domain"), _as_float(domain[1], "domain")]
    _expect(domain[0] < domain[1], "field domain must be a nonempty interval", "domain")

    tol_raw = raw.get("tolerances", {})
    _expect(isinstance(tol_raw, dict), "field tolerances must be an object", "tolerances")
    tolerances = {
        "quad": _as_float(tol_raw.get("quad", DEFAULT_TOL), "tolerances.quad"),
        "report": _as_float(tol_raw.get("report", DEFAULT_REPORT_TOL), "tolerances.report"),
        "counterexample": _as_float(
            tol_raw.get("counterexample", DEFAULT_DEFECT_TOL), "tolerances.counterexample"
        ),
    }
    for key, value in tolerances.items():
        _expect(value > 0.0, f"field tolerances.{key} must be positive", f"tolerances.{key}")

    points_raw = raw.get("points", {})
    _expect(isinstance(points_raw, dict), "field points must be an object", "points")
    x = points_raw.get("x", points_raw.get("a", raw.get("x", raw.get("a", domain[0]))))
    y = points_raw.get("y", points_raw.get("b", raw.get("y", raw.get("b", domain[1]))))
    points = {"x": _as_float(x, "points.x"), "y": _as_float(y, "points.y")}

    m = _as_float(raw.get("m", 1.0), "m")
    _expect(0.0 < m <= 1.0, "field m must lie in (0, 1]", "m")

    seed = _as_int(raw.get("seed", 0), "seed")
    budget = _as_int(raw.get("budget", DEFAULT_FALSIFY_BUDGET), "budget")
    _expect(budget >= 1, "field budget must be >= 1", "budget")
    n = _as_int(raw.get("n", DEFAULT_CERTIFY_N), "n")
    _expect(n >= 1, "field n must be >= 1", "n")

    functions_raw = raw.get("functions", {})
    _expect(isinstance(functions_raw, dict), "field functions must be an object", "functions")
    for key in functions_raw:
        _expect(key in ("f", "g", "h", "phi"),
                f"unknown function role '{key}'", f"functions.{key}")
    functions: dict[str, Any] = {}
    for role in ("f", "g", "h", "phi"):
        if role in functions_raw:
            default = [0.0, 1.0] if role == "h" else domain
            functions[role] = _normalize_function(functions_raw[role], f"functions.{role}", default)

    scenario = {
        "name": name,
        "command": command,
        "domain": domain,
        "functions": functions,
        "m": m,
        "points": points,
        "tolerances": tolerances,
        "seed": seed,
        "budget": budget,
        "n": n,
    }

    if command in ("verify", "sweep"):
        _expect("theorem" in raw, "missing field: theorem", "theorem")
        theorem = raw["theorem"]
        valid = MAIN_IDS + BACKGROUND_IDS + ((MOMENTS_ID,) if command == "sweep" else ())
        _expect(theorem in valid,
                f"field theorem must be one of {', '.join(valid)}", "theorem")
        for role in _THEOREM_NEEDS[theorem]:
            _expect(role in functions, f"missing field: functions.{role}", f"functions.{role}")
        scenario["theorem"] = theorem

    if command in ("certify", "falsify"):
        _expect("class" in raw, "missing field: class", "class")
        tag = raw["class"]
        _expect(tag in CLASS_TAGS,
                f"field class must be one of {', '.join(CLASS_TAGS)}", "class")
        _expect("f" in functions, "missing field: functions.f", "functions.f")
        if tag in _H_CLASS_TAGS:
            _expect("h" in functions, "missing field: functions.h", "functions.h")
        scenario["class"] = tag

    if command == "reduce":
        _expect("pair" in raw, "missing field: pair", "pair")
        pair = raw["pair"]
        _expect(pair in REDUCTION_PAIRS,
                f"field pair must be one of {', '.join(REDUCTION_PAIRS)}", "pair")
        probes_raw = raw.get("probes")
        _expect(isinstance(probes_raw, list) and probes_raw,
                "field probes must be a nonempty list", "probes")
        probes = []
        for i, probe in enumerate(probes_raw):
            _expect(isinstance(probe, dict), f"probe {i} must be an object", f"probes[{i}]")
            entry: dict[str, Any] = {}
            for role in ("f", "g", "h", "phi"):
                if role in probe:
                    entry[role] = _normalize_function(
                        probe[role], f"probes[{i}].{role}", domain if role != "h" else [0.0, 1.0]
                    )
            _expect("f" in entry, f"probe {i} needs 'f'", f"probes[{i}].f")
            _expect("h" in entry, f"probe {i} needs 'h'", f"probes[{i}].h")
            if pair == "T2_3_vs_T1_14":
                _expect("g" in entry, f"probe {i} needs 'g'", f"probes[{i}].g")
            entry["m"] = _as_float(probe.get("m", 1.0), f"probes[{i}].m")
            entry["x"] = _as_float(probe.get("x", domain[0]), f"probes[{i}].x")
            entry["y"] = _as_float(probe.get("y", domain[1]), f"probes[{i}].y")
            probes.append(entry)
        scenario["pair"] = pair
        scenario["probes"] = probes

    if command == "sweep":
        axes_raw = raw.get("axes")
        _expect(isinstance(axes_raw, list) and axes_raw,
                "field axes must be a nonempty list", "axes")
        axes = []
        total = 1
        for i, axis in enumerate(axes_raw):
            _expect(isinstance(axis, dict), f"axis {i} must be an object", f"axes[{i}]")
            param = axis.get("param")
            _expect(param in SWEEP_PARAMS,
                    f"axis {i} param must be one of {', '.join(SWEEP_PARAMS)}",
                    f"axes[{i}].param")
            if "values" in axis:
                values = axis["values"]
                _expect(isinstance(values, list) and values,
                        f"axis {i} values must be a nonempty list", f"axes[{i}].values")
                values = [_as_float(v, f"axes[{i}].values") for v in values]
            else:
                start = _as_float(axis.get("start", 0.0), f"axes[{i}].start")
                stop = _as_float(axis.get("stop", 0.0), f"axes[{i}].stop")
                step = _as_float(axis.get("step", 0.0), f"axes[{i}].step")
                _expect(step > 0.0 and stop >= start,
                        f"axis {i} range needs step > 0 and stop >= start", f"axes[{i}]")
                count = int(math.floor((stop - start) / step + 1e-9)) + 1
                values = [start + k * step for k in range(count)]
            total *= len(values)
            axes.append({"param": param, "values": values})
        _expect(total <= SWEEP_CELL_CAP,
                f"sweep grid has {total} cells, cap is {SWEEP_CELL_CAP}", "axes")
        if any(axis["param"] == "s" for axis in axes):
            _expect("h" in functions and "family" in functions["h"]
                    and len(functions["h"].get("params", [])) >= 1,
                    "sweeping 's' needs functions.h as a catalog family with a parameter",
                    "axes")
        scenario["axes"] = axes

    return scenario


# --------------------------------------------------------------------------
# Command execution
# --------------------------------------------------------------------------

def _verdict_item(verdict: Verdict) -> dict:
    item = {
        "kind": "verdict",
        "theorem_id": verdict.theorem_id,
        "lhs": verdict.lhs,
        "rhs": verdict.rhs,
        "margin": verdict.margin,
        "quad_err": verdict.quad_err,
        "status": verdict.status,
        "inputs": dict(verdict.inputs),
        "notes": list(verdict.notes),
    }
    if verdict.mean is not None:
        item["mean"] = verdict.mean
        item["margin_lower"] = verdict.margin_lower
        item["margin_upper"] = verdict.margin_upper
    return item


def _run_verify(scenario: dict, theorem: str) -> dict:
    functions = {role: _build_function(spec) for role, spec in scenario["functions"].items()}
    tol = scenario["tolerances"]
    x, y = scenario["points"]["x"], scenario["points"]["y"]
    m = scenario["m"]
    kwargs = dict(quad_tol=tol["quad"], report_tol=tol["report"])
    f = functions.get("f")
    g = functions.get("g")
    h = functions.get("h")
    phi = functions.get("phi")
    if theorem == "T2_1":
        verdict = verify_t2_1(f, h, m, phi, x, y, **kwargs)
    elif theorem == "T2_2dot":
        verdict = verify_t2_2dot(f, h, m, phi, x, y, **kwargs)
    elif theorem == "T2_2":
        verdict = verify_t2_2(f, h, m, phi, x, y, **kwargs)
    elif theorem == "T2_3":
        verdict = verify_t2_3(f, g, h, m, phi, x, y, **kwargs)
    else:
        verdict = verify_background(theorem, f, h=h, g=g, m=m, phi=phi, a=x, b=y, **kwargs)
    return _verdict_item(verdict)


def _run_moments(scenario: dict) -> dict:
    h = _build_function(scenario["functions"]["h"])
    m1, m2, mx = h_moments(h, scenario["tolerances"]["quad"])
    return {
        "kind": "h_moments",
        "h": h.label,
        "m1": {"value": m1.value, "abs_err": m1.abs_err, "indeterminate": m1.indeterminate},
        "m2": {"value": m2.value, "abs_err": m2.abs_err, "indeterminate": m2.indeterminate},
        "mx": {"value": mx.value, "abs_err": mx.abs_err, "indeterminate": mx.indeterminate},
    }


def _class_spec_from(scenario: dict, functions: dict):
    tag = scenario["class"]
    kwargs: dict[str, Any] = {"bound": scenario["domain"][1]}
    if tag in _H_CLASS_TAGS:
        kwargs["h"] = functions["h"]
    if tag in ("m_convex", "hm_convex", "phi_hm_convex"):
        kwargs["m"] = scenario["m"]
    if tag.startswith("phi") and "phi" in functions:
        kwargs["phi"] = functions["phi"]
    return class_spec(tag, **kwargs)


def _run_certify(scenario: dict) -> dict:
    functions = {role: _build_function(spec) for role, spec in scenario["functions"].items()}
    spec = _class_spec_from(scenario, functions)
    report = certify_sampled(
        functions["f"], spec,
        n=scenario["n"], seed=scenario["seed"],
        tol=scenario["tolerances"]["counterexample"],
    )
    return {
        "kind": "certification",
        "class": scenario["class"],
        "min_defect": report.min_defect,
        "argmin": list(report.argmin),
        "samples_ok": report.samples_ok,
        "samples_skipped": report.samples_skipped,
        "certified": report.certified,
        "note": report.note,
    }


def _run_falsify(scenario: dict) -> dict:
    functions = {role: _build_function(spec) for role, spec in scenario["functions"].items()}
    spec = _class_spec_from(scenario, functions)
    stats: dict[str, int] = {}
    witness = falsify(
        functions["f"], spec,
        budget=scenario["budget"], seed=scenario["seed"],
        tol=scenario["tolerances"]["counterexample"],
        stats_out=stats,
    )
    item = {
        "kind": "counterexample",
        "class": scenario["class"],
        "found": witness is not None,
        "probes_ok": stats.get("probes_ok", 0),
        "probes_skipped": stats.get("probes_skipped", 0),
    }
    if witness is not None:
        item.update(
            x=witness.x, y=witness.y, t=witness.t,
            defect=witness.defect, lhs=witness.lhs, rhs=witness.rhs,
        )
    return item


def _run_reduce(scenario: dict) -> dict:
    probes = []
    for entry in scenario["probes"]:
        probe = {role: _build_function(entry[role])
                 for role in ("f", "g", "h", "phi") if role in entry}
        probe["m"] = entry["m"]
        probe["x"] = entry["x"]
        probe["y"] = entry["y"]
        probes.append(probe)
    tol = scenario["tolerances"]
    report = check_reduction(scenario["pair"], probes,
                             quad_tol=tol["quad"], report_tol=tol["report"])
    return {
        "kind": "reduction",
        "pair": report.pair,
        "probes": report.probes,
        "max_dev_lhs": report.max_dev_lhs,
        "max_dev_rhs": report.max_dev_rhs,
        "max_allowance": report.max_allowance,
        "passed": report.passed,
        "indeterminate": report.indeterminate,
    }


def _apply_axis(scenario: dict, param: str, value: float) -> dict:
    cell = json.loads(json.dumps(scenario))  # deep copy of plain data
    if param == "m":
        cell["m"] = value
    elif param == "x":
        cell["points"]["x"] = value
    elif param == "y":
        cell["points"]["y"] = value
    else:  # "s": first parameter of the h family
        cell["functions"]["h"]["params"][0] = value
    return cell


def _run_sweep(scenario: dict, jobs: int) -> list[dict]:
    axes = scenario["axes"]
    params = [axis["param"] for axis in axes]
    grid = list(itertools.product(*(axis["values"] for axis in axes)))

    def run_cell(args):
        index, combo = args
        cell = scenario
        for param, value in zip(params, combo):
            cell = _apply_axis(cell, param, value)
        try:
            if scenario["theorem"] == MOMENTS_ID:
                result = _run_moments(cell)
            else:
                result = _run_verify(cell, scenario["theorem"])
        except GenConvexError as exc:
            result = {"kind": "error", "error": f"{type(exc).__name__}: {exc}"}
        return {
            "kind": "cell",
            "cell_index": index,
            "axes": {param: value for param, value in zip(params, combo)},
            "result": result,
        }

    tasks = list(enumerate(grid))
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            cells = list(pool.map(run_cell, tasks))
    else:
        cells = [run_cell(task) for task in tasks]
    cells.sort(key=lambda c: c["cell_index"])  # declared row-major order
    return cells


def _cell_csv_rows(name: str, cell: dict, params: list[str]) -> list[list[str]]:
    axis_values = [format_float(cell["axes"][p]) for p in params]
    prefix = [name, str(cell["cell_index"])] + axis_values
    result = cell["result"]
    if result["kind"] == "verdict":
        return [prefix + [
            result["theorem_id"],
            format_float(result["lhs"]),
            format_float(result["rhs"]),
            format_float(result["margin"]),
            format_float(result["quad_err"]),
            result["status"],
        ]]
    if result["kind"] == "h_moments":
        rows = []
        for key in ("m1", "m2", "mx"):
            moment = result[key]
            status = "indeterminate" if moment["indeterminate"] else "pass"
            value = format_float(moment["value"])
            rows.append(prefix + [
                f"h_{key}", value, value, format_float(0.0),
                format_float(moment["abs_err"]), status,
            ])
        return rows
    return [prefix + ["error", "nan", "nan", "nan", "nan", "error"]]


def write_sweep_csv(report: dict, path: str) -> None:
    scenario = report["scenario"]
    params = [axis["param"] for axis in scenario["axes"]]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["scenario", "cell_index", *params, *CSV_FIXED_COLUMNS])
        for cell in report["items"]:
            for row in _cell_csv_rows(scenario["name"], cell, params):
                writer.writerow(row)


# --------------------------------------------------------------------------
# Report assembly
# --------------------------------------------------------------------------

def _exit_status(items: list[dict]) -> int:
    failed = False
    indeterminate = False
    usage = False
    for item in items:
        kind = item["kind"]
        if kind == "verdict":
            failed |= item["status"] == "fail"
            indeterminate |= item["status"] == "indeterminate"
        elif kind == "counterexample":
            failed |= item["found"]
        elif kind == "certification":
            failed |= not item["certified"]
        elif kind == "reduction":
            indeterminate |= item["indeterminate"]
            failed |= not item["passed"] and not item["indeterminate"]
        elif kind == "h_moments":
            indeterminate |= any(item[k]["indeterminate"] for k in ("m1", "m2", "mx"))
        elif kind == "cell":
            inner = _exit_status([item["result"]])
            failed |= inner == EXIT_FOUND
            indeterminate |= inner == EXIT_INDETERMINATE
            usage |= inner == EXIT_USAGE
        elif kind == "error":
            usage = True
    if usage:
        return EXIT_USAGE
    if failed:
        return EXIT_FOUND
    if indeterminate:
        return EXIT_INDETERMINATE
    return EXIT_OK


def run_scenario(scenario: dict, jobs: int = 1) -> dict:
    """Execute a normalized scenario and return the machine report object."""
    command = scenario["command"]
    notes = []
    if scenario.get("class") == "phi_convex":
        notes.append(_PHI_CONVEX_NOTE)
    if command == "verify":
        items = [_run_verify(scenario, scenario["theorem"])]
    elif command == "certify":
        items = [_run_certify(scenario)]
    elif command == "falsify":
        items = [_run_falsify(scenario)]
    elif command == "reduce":
        items = [_run_reduce(scenario)]
    else:
        items = _run_sweep(scenario, jobs)
    return {
        "tool": "genconvex",
        "version": __version__,
        "scenario": scenario,
        "notes": notes,
        "items": items,
        "exit_status": _exit_status(items),
    }


def _render_item_text(item: dict, lines: list[str]) -> None:
    kind = item["kind"]
    if kind == "verdict":
        lines.append(
            f"  [{item['status'].upper():13s}] {item['theorem_id']}: "
            f"lhs={format_float(item['lhs'])} rhs={format_float(item['rhs'])} "
            f"margin={format_float(item['margin'])} quad_err={format_float(item['quad_err'])}"
        )
        if "mean" in item:
            lines.append(
                f"                  mean={format_float(item['mean'])} "
                f"margin_lower={format_float(item['margin_lower'])} "
                f"margin_upper={format_float(item['margin_upper'])}"
            )
        for note in item["notes"]:
            lines.append(f"                  note: {note}")
    elif kind == "counterexample":
        if item["found"]:
            lines.append(
                f"  [FOUND        ] counterexample for class {item['class']}: "
                f"(x, y, t)=({format_float(item['x'])}, {format_float(item['y'])}, "
                f"{format_float(item['t'])}) defect={format_float(item['defect'])}"
            )
        else:
            lines.append(
                f"  [NONE         ] no counterexample for class {item['class']} "
                f"({item['probes_ok']} probes, {item['probes_skipped']} skipped)"
            )
    elif kind == "certification":
        tagline = "CERTIFIED" if item["certified"] else "NOT CERTIFIED"
        argmin = ", ".join(format_float(v) for v in item["argmin"])
        lines.append(
            f"  [{tagline:13s}] class {item['class']}: min_defect="
            f"{format_float(item['min_defect'])} at ({argmin}); "
            f"{item['samples_ok']} probes, {item['samples_skipped']} skipped"
        )
        lines.append(f"                  note: {item['note']}")
    elif kind == "reduction":
        status = "AGREE" if item["passed"] else "DISAGREE"
        lines.append(
            f"  [{status:13s}] {item['pair']} over {item['probes']} probes: "
            f"max|dLHS|={format_float(item['max_dev_lhs'])} "
            f"max|dRHS|={format_float(item['max_dev_rhs'])} "
            f"allowance={format_float(item['max_allowance'])}"
        )
    elif kind == "h_moments":
        lines.append(
            f"  [MOMENTS      ] h={item['h']}: m1={format_float(item['m1']['value'])} "
            f"m2={format_float(item['m2']['value'])} mx={format_float(item['mx']['value'])}"
        )
    elif kind == "cell":
        axes = ", ".join(f"{k}={format_float(v)}" for k, v in item["axes"].items())
        lines.append(f"  cell {item['cell_index']} ({axes}):")
        _render_item_text(item["result"], lines)
    elif kind == "error":
        lines.append(f"  [ERROR        ] {item['error']}")


def render_text(report: dict, wall_time: float) -> str:
    scenario = report["scenario"]
    lines = [
        f"genconvex {report['version']} — scenario '{scenario['name']}' "
        f"({scenario['command']})",
    ]
    for note in report["notes"]:
        lines.append(f"  note: {note}")
    for item in report["items"]:
        _render_item_text(item, lines)
    lines.append(
        f"exit status {report['exit_status']} — wall time {wall_time:.3f}s"
    )
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# Entry point
# --------------------------------------------------------------------------

def _add_common_options(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("scenario", help="path to the scenario JSON file")
    sub.add_argument("--out", help="also write the machine-format report to this file")
    sub.add_argument("--format", choices=("text", "machine"), default="text",
                     help="stdout format (default text)")
    sub.add_argument("--jobs", type=int, default=None,
                     help="parallel sweep cells (default $GENCONVEX_JOBS or 1)")
    sub.add_argument("--seed", type=int, default=None, help="override scenario seed")
    sub.add_argument("--tol-quad", type=float, default=None,
                     help="override quadrature tolerance")
    sub.add_argument("--tol-report", type=float, default=None,
                     help="override report tolerance")


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="genconvex",
        description="Generalized-convexity certification and inequality verification.",
    )
    parser.add_argument("--version", action="version", version=f"genconvex {__version__}")
    subs = parser.add_subparsers(dest="subcommand", required=True)
    run_p = subs.add_parser("run", help="execute the command a scenario file declares")
    _add_common_options(run_p)
    sweep_p = subs.add_parser("sweep", help="run a scenario as a parameter sweep")
    _add_common_options(sweep_p)
    sweep_p.add_argument("--csv", help="write one CSV row per sweep cell to this file")
    falsify_p = subs.add_parser("falsify", help="run a scenario as a counterexample search")
    _add_common_options(falsify_p)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    started = time.monotonic()
    try:
        raw = load_scenario(args.scenario)
        if args.subcommand == "sweep":
            raw = {**raw, "command": "sweep"}
        elif args.subcommand == "falsify":
            raw = {**raw, "command": "falsify"}
        if args.seed is not None:
            raw = {**raw, "seed": args.seed}
        if args.tol_quad is not None or args.tol_report is not None:
            tolerances = dict(raw.get("tolerances", {}))
            if args.tol_quad is not None:
                tolerances["quad"] = args.tol_quad
            if args.tol_report is not None:
                tolerances["report"] = args.tol_report
            raw = {**raw, "tolerances": tolerances}
        scenario = normalize_scenario(raw)
        jobs = args.jobs
        if jobs is None:
            jobs = int(os.environ.get("GENCONVEX_JOBS", "1"))
        if jobs < 1:
            raise ScenarioError("jobs must be >= 1")
        report = run_scenario(scenario, jobs=jobs)
    except ScenarioError as exc:
        print(f"genconvex: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GenConvexError as exc:
        print(f"genconvex: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE

    machine = dump_machine(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(machine)
    if getattr(args, "csv", None):
        if scenario["command"] != "sweep":
            print("genconvex: error: --csv needs a sweep scenario", file=sys.stderr)
            return EXIT_USAGE
        write_sweep_csv(report, args.csv)
    if args.format == "machine":
        sys.stdout.write(machine)
    else:
        sys.stdout.write(render_text(report, time.monotonic() - started))
    return report["exit_status"]


if __name__ == "__main__":
    sys.exit(main())
