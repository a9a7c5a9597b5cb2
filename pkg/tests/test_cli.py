#!/usr/bin/env python3
"""Command-line regressions: exit codes, JSON results, files on disk and run telemetry."""

from __future__ import annotations

import json
import os
import subprocess
import sys
import tempfile
from pathlib import Path


ROOT = Path(__file__).resolve().parents[1]
LAUNCHER = ROOT / "bin/orthoscalar"
HOME = Path(tempfile.mkdtemp(prefix="orthoscalar-cli-"))


def require(condition: bool, message: str) -> None:
    if not condition:
        raise AssertionError(message)


def run_cli(*args: str) -> tuple[int, dict]:
    env = dict(os.environ, ORTHOSCALAR_HOME=str(HOME), PYTHON=sys.executable)
    proc = subprocess.run(
        ["bash", str(LAUNCHER), *args],
        cwd=ROOT,
        env=env,
        text=True,
        capture_output=True,
        check=False,
    )
    try:
        document = json.loads(proc.stdout) if proc.stdout.strip() else {}
    except json.JSONDecodeError as exc:
        raise AssertionError(f"{args}: stdout is not JSON: {proc.stdout[:200]} {proc.stderr[:200]}") from exc
    return proc.returncode, document


def test_roots_commands() -> None:
    code, result = run_cli("roots", "--graph", "D~4", "--classify", "1,1,1,1,2")
    require(code == 0 and result["ok"], f"classify failed: {result}")
    require((result["class"], result["q"], result["L"]) == ("Imaginary", 0, 0), f"classify result {result}")

    code, result = run_cli("roots", "--graph", "D~4", "--bound", "delta")
    require(code == 0 and result["count"] == 25 and len(result["rows"]) == 25, f"enumeration {result.get('count')}")
    require(result["classes"]["Imaginary"] == 1, f"classes {result['classes']}")

    code, result = run_cli("roots", "--graph", "X9")
    require(code == 2 and result["error"] == "UnknownGraph", f"unknown graph: {code} {result}")
    require(result["status"] == "error" and result["diagnostics"], "errors carry diagnostics")

    code, result = run_cli("roots", "--graph", "D~4", "--classify", "1,1,x,1,2")
    require(code == 2 and result["error"] == "InvalidInput", f"bad vector: {code} {result}")


def test_reduce_and_graphs() -> None:
    code, result = run_cli("reduce", "--graph", "D~4", "--vector", "1,1,1,1,1")
    require(code == 0 and result["path"] == ["even"], f"reduce {result}")
    require(result["terminal"] == [0, 0, 0, 0, 1] and result["replay_ok"], f"terminal {result}")

    code, result = run_cli("reduce", "--graph", "D~4", "--vector", "1,1,1,1,2")
    require(code == 2 and result["error"] == "NotSingular", f"delta does not reduce: {result}")

    code, result = run_cli("graphs", "--max-n", "5")
    names = {row["name"]: row for row in result["rows"]}
    require(code == 0 and names["D~4"]["delta"] == [1, 1, 1, 1, 2], "graphs lists delta")
    require(names["E7~"]["free_parameters"] == 9 and names["A3"]["delta"] is None, "graphs rows")


def test_construct_verify_functor_decompose() -> None:
    rep = HOME / "work" / "e6.json"
    code, result = run_cli("construct", "--family", "E6~", "--seed", "7", "-o", str(rep))
    require(code == 0 and rep.exists(), f"construct failed: {result}")
    require(result["defect"] <= 1e-9 and result["schur"], f"construct result {result}")
    first = rep.read_bytes()
    run_cli("construct", "--family", "E6~", "--seed", "7", "-o", str(rep))
    require(rep.read_bytes() == first, "same seed gives the same file")

    code, result = run_cli("verify", str(rep), "--tol", "1e-9")
    require(code == 0 and result["orthoscalar"] and result["schur"], f"verify {result}")
    require(result["character_matches"], "stored character matches the matrices")

    code, result = run_cli("construct", "--family", "A~4", "--params", '{"moduli":[1,1,1,1],"phase":1.0}')
    values = result.get("character", {}).values()
    require(code == 0 and all(abs(value - 2.0) <= 1e-12 for value in values), f"cycle character {result}")

    code, result = run_cli("construct", "--family", "E7~")
    require(code == 2 and not result["ok"], f"missing params and seed: {code}")

    d4 = HOME / "work" / "d4.json"
    params = '{"x0":1,"x1":2,"y0":2,"phi1":0.785398,"phi2":0.785398,"theta":1.047198}'
    code, result = run_cli("construct", "--family", "D~4", "--params", params, "-o", str(d4))
    require(code == 0, f"D~4 construct {result}")
    code, result = run_cli("functor", str(d4), "--parity", "even", "--k", "2", "--roundtrip")
    require(code == 0 and result["roundtrip"]["equivalent"], f"functor roundtrip {result}")
    require([step["parity"] for step in result["steps"]] == ["even", "odd"], "alternating steps")

    code, result = run_cli("decompose", str(d4), "--output-dir", str(HOME / "work" / "pieces"))
    require(code == 0 and result["count"] == 1, f"Schur rep has one summand: {result}")
    require(Path(result["summands"][0]["file"]).exists(), "summand file written")

    code, result = run_cli("construct", "--graph", "D~4", "--vector", "1,1,1,1,1", "-o", str(HOME / "work" / "root.json"))
    require(code == 0 and result["dims"]["c1"] == 1 and result["schur"], f"real-root construct {result}")


def test_internal_errors_are_not_input_errors() -> None:
    os.environ["ORTHOSCALAR_HOME"] = str(HOME)
    sys.path.insert(0, str(ROOT / "tools" / "orthoscalar"))
    import orthoscalar_ops

    def broken_dispatch(args):
        raise ValueError("rtol too small")

    original = orthoscalar_ops.dispatch
    orthoscalar_ops.dispatch = broken_dispatch
    try:
        result, _ = orthoscalar_ops.run(["graphs"])
    finally:
        orthoscalar_ops.dispatch = original
    require(result["exit_code"] == 1 and result["error"] == "NumericalFailure", f"internal ValueError: {result}")
    require(result["exception"] == "ValueError" and not result["ok"], f"failure names the exception: {result}")

    result, _ = orthoscalar_ops.run(["roots", "--graph", "D~4", "--classify", "1,x,1,1,2"])
    require(result["exit_code"] == 2 and result["error"] == "InvalidInput", f"bad vector stays an input error: {result}")
    code, result = run_cli("construct", "--family", "E8~", "--params", '{"phi1": 0.5}')
    require(code == 2 and result["error"] == "InvalidInput", f"missing E8~ inputs: {code} {result}")
    code, result = run_cli("construct", "--family", "E8~", "--seed", "11")
    require(code == 0 and result["schur"] and result["defect"] <= 1e-9, f"E8~ construct: {code} {result}")


def test_table_config_and_log() -> None:
    env = dict(os.environ, ORTHOSCALAR_HOME=str(HOME), PYTHON=sys.executable)
    proc = subprocess.run(
        ["bash", str(LAUNCHER), "roots", "--graph", "A2", "--format", "table"],
        cwd=ROOT,
        env=env,
        text=True,
        capture_output=True,
        check=False,
    )
    require(proc.returncode == 0 and "vector" in proc.stdout and "count: 3" in proc.stdout, proc.stdout)

    code, result = run_cli("config", "set", "cli.seed=5")
    require(code == 0 and result["config"]["cli"]["seed"] == 5, f"config set {result}")
    code, result = run_cli("config", "set", "cli.missing=1")
    require(code == 2, "unknown setting is an input error")

    code, result = run_cli("log", "stats")
    require(code == 0 and result["total_events"] > 0, f"telemetry stats {result}")
    require(result["commands"].get("roots", 0) >= 3, f"roots runs {result['commands']}")
    require(result["errors"].get("UnknownGraph", 0) >= 1, f"errors {result['errors']}")
    require("roots" in result["mean_duration_ms"], "durations per command")
    code, result = run_cli("log", "recent", "--command", "construct", "--limit", "2")
    require(code == 0 and 0 < len(result["rows"]) <= 2, f"recent {result}")
    require(all(row["command"] == "construct" for row in result["rows"]), "recent filters by command")
    code, result = run_cli("log", "clear")
    code, result = run_cli("log", "stats")
    require(result["total_events"] == 0, "log clear empties the run log")


def main() -> int:
    test_roots_commands()
    test_reduce_and_graphs()
    test_construct_verify_functor_decompose()
    test_internal_errors_are_not_input_errors()
    test_table_config_and_log()
    print("cli tests passed")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
