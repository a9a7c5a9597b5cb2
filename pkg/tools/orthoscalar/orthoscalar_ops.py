#!/usr/bin/env python3
"""
orthoscalar - roots, reflection functors and delta families of separated quivers.
Every command prints one JSON result; the exit code says whether it worked.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Any

import numpy as np

ROOT_DIR = Path(__file__).resolve().parents[2]
LIB_DIR = ROOT_DIR / "lib"
if str(LIB_DIR) not in sys.path:
    sys.path.insert(0, str(LIB_DIR))

from orthoscalar.catalog import build_catalog_quiver, catalog_names  # noqa: E402
from orthoscalar.config import get_setting, load_config, set_setting, tolerance  # noqa: E402
from orthoscalar.errors import InvalidInput, NumericalFailure, OrthoscalarError  # noqa: E402
from orthoscalar.families import (  # noqa: E402
    FAMILY_PARAMETERS,
    ParameterPoint,
    construct_family,
    count_free_parameters,
    count_normal_form_parameters,
    family_name,
    sample_parameter_point,
    solve_family_constraint,
)
from orthoscalar.functors import construct_real_root_rep, functor_trajectory  # noqa: E402
from orthoscalar.hilbert import (  # noqa: E402
    Character,
    Representation,
    is_schur,
    orthoscalarity_report,
    split_decomposition,
    unitary_equivalent,
)
from orthoscalar.roots import (  # noqa: E402
    RootTag,
    classify_vector,
    enumerate_positive_roots,
    faithful_reduction_path,
    graph_kind,
    opposite,
    replay_path,
    singular_reduction_path,
)
from orthoscalar.serialization import (  # noqa: E402
    command_result,
    parse_vector,
    read_json,
    representation_from_dict,
    representation_to_dict,
    write_json,
)
from orthoscalar.telemetry import clear_runs, record_run_event, recent_runs, summarize_runs  # noqa: E402


def _seed(args: argparse.Namespace) -> int:
    seed = getattr(args, "seed", None)
    return int(get_setting("cli", "seed") if seed is None else seed)


def _load_params(text: str) -> dict[str, Any]:
    """Inline JSON or a path to a JSON file."""
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"--params is not valid JSON: {exc}") from exc
    else:
        data = read_json(stripped.lstrip("@"))
    if not isinstance(data, dict):
        raise InvalidInput("parameters must be a JSON object")
    return data


def _summary(T: Representation, character: Character | None = None) -> dict[str, Any]:
    report = orthoscalarity_report(T)
    return {
        "graph": T.quiver.name,
        "dims": dict(T.dims),
        "character": (character or report.character).to_dict(),
        "defect": report.defect,
        "schur": is_schur(T) if T.total_dim else False,
    }


def _load_rep(path: str) -> tuple[Representation, Character]:
    T, character = representation_from_dict(read_json(path))
    if character is None:
        character = orthoscalarity_report(T).character
    return T, character


# roots

def cmd_roots(graph: str, bound: str | None = None, classify: str | None = None) -> dict[str, Any]:
    q = build_catalog_quiver(graph).quiver
    if classify:
        vec = parse_vector(classify, q)
        root_class = classify_vector(q, vec)
        return command_result("roots", {"graph": q.name, "vector": list(vec), **root_class.to_dict()})

    limits = parse_vector(bound, q) if bound else None
    rows = [
        {"vector": list(vec), **root_class.to_dict()}
        for vec, root_class in enumerate_positive_roots(q, limits)
    ]
    counts: dict[str, int] = {}
    for row in rows:
        counts[row["class"]] = counts.get(row["class"], 0) + 1
    return command_result(
        "roots",
        {"graph": q.name, "vertices": list(q.vertices), "count": len(rows), "classes": counts, "rows": rows},
    )


def cmd_reduce(graph: str, vector: str, faithful: bool = False) -> dict[str, Any]:
    q = build_catalog_quiver(graph).quiver
    vec = parse_vector(vector, q)
    root_class = classify_vector(q, vec)
    use_faithful = faithful or root_class.tag is RootTag.REAL_REGULAR
    path = faithful_reduction_path(q, vec) if use_faithful else singular_reduction_path(q, vec)
    return command_result(
        "reduce",
        {
            "graph": q.name,
            "vector": list(vec),
            "class": root_class.tag.value,
            "kind": "faithful" if use_faithful else "singular",
            "path": list(path.steps),
            "terminal": list(path.terminal),
            "replay_ok": replay_path(q, path) == vec,
        },
    )


def cmd_graphs(max_n: int = 8) -> dict[str, Any]:
    rows = []
    for name in catalog_names(max_n):
        entry = build_catalog_quiver(name)
        q = entry.quiver
        rows.append(
            {
                "name": name,
                "kind": graph_kind(q),
                "vertices": list(q.vertices),
                "odd": list(q.odd_vertices),
                "delta": list(entry.delta) if entry.delta else None,
                "free_parameters": count_free_parameters(name) if entry.extended else None,
                "normal_form_parameters": count_normal_form_parameters(name) if entry.extended else None,
            }
        )
    return command_result("graphs", {"count": len(rows), "rows": rows})


# representations

def _family_point(name: str, params: dict[str, Any] | None, seed: int | None) -> ParameterPoint:
    if params is not None:
        if "params" in params and isinstance(params["params"], dict):
            params = params["params"]
        family_entry = FAMILY_PARAMETERS.get(name)
        if family_entry and any(key not in params for key in family_entry["dependent"]):
            return solve_family_constraint(name, params)
        return ParameterPoint(name, params)
    if seed is None:
        raise InvalidInput("construct needs --params or --seed")
    return sample_parameter_point(name, np.random.default_rng(seed))


def cmd_construct(
    family: str | None = None,
    params: str | None = None,
    seed: int | None = None,
    output: str | None = None,
    graph: str | None = None,
    vector: str | None = None,
    chi: float | None = None,
    tol: float | None = None,
) -> dict[str, Any]:
    if graph and vector:
        q = build_catalog_quiver(graph).quiver
        T, character = construct_real_root_rep(q, parse_vector(vector, q), chi, tol)
        extra: dict[str, Any] = {"vector": list(T.dim_vector)}
    elif family:
        name = family_name(family)
        point = _family_point(name, _load_params(params) if params else None, seed)
        T = construct_family(point, tol)
        character = orthoscalarity_report(T).character
        extra = {"family": name, "parameters": point.to_dict()["params"], "seed": seed}
    else:
        raise InvalidInput("construct needs --family, or --graph with --vector")

    payload = {**_summary(T, character), **extra}
    payload["orthoscalar"] = payload["defect"] <= tolerance("orthoscalar", tol)
    if output:
        document = representation_to_dict(T, character)
        if "parameters" in extra:
            document["parameters"] = {"family": extra["family"], "params": extra["parameters"]}
        payload["file"] = str(write_json(output, document))
    return command_result("construct", payload)


def cmd_verify(path: str, tol: float | None = None) -> dict[str, Any]:
    T, character = representation_from_dict(read_json(path))
    report = orthoscalarity_report(T)
    threshold = tolerance("orthoscalar", tol)
    payload: dict[str, Any] = {
        "graph": T.quiver.name,
        "dims": dict(T.dims),
        "orthoscalar": report.defect <= threshold,
        "schur": is_schur(T) if T.total_dim else False,
        "defect": report.defect,
        "character": report.character.on_support(),
        "residuals": report.residuals,
    }
    if character is not None:
        scale = max([1.0] + [abs(value) for value in report.scalar_targets.values()])
        payload["character_matches"] = all(
            abs(character[v] - value) <= threshold * scale for v, value in report.scalar_targets.items()
        )
    return command_result("verify", payload)


def cmd_functor(
    path: str,
    parity: str,
    k: int = 1,
    output: str | None = None,
    roundtrip: bool = False,
    tol: float | None = None,
    seed: int = 0,
) -> dict[str, Any]:
    if k < 1:
        raise InvalidInput(f"--k must be positive, got {k}")
    T, character = _load_rep(path)
    parities = [parity if n % 2 == 0 else opposite(parity) for n in range(k)]
    result, new_character, steps = functor_trajectory(T, character, parities, tol)
    payload = {**_summary(result, new_character), "steps": [step.to_dict() for step in steps]}
    if roundtrip:
        back, _, _ = functor_trajectory(result, new_character, list(reversed(parities)), tol)
        check = unitary_equivalent(T, back, seed=seed)
        payload["roundtrip"] = {"equivalent": check.equivalent, "diagnostic": check.diagnostic}
    if output:
        payload["file"] = str(write_json(output, representation_to_dict(result, new_character)))
    return command_result("functor", payload)


def cmd_decompose(path: str, output_dir: str | None = None, tol: float | None = None, seed: int = 0) -> dict[str, Any]:
    T, _ = representation_from_dict(read_json(path))
    summands = split_decomposition(T, tol, seed)
    rows = []
    for index, piece in enumerate(summands, start=1):
        row = _summary(piece)
        if output_dir:
            row["file"] = str(write_json(Path(output_dir) / f"summand_{index}.json", representation_to_dict(piece)))
        rows.append(row)
    return command_result("decompose", {"graph": T.quiver.name, "count": len(rows), "summands": rows})


# housekeeping

def cmd_log(action: str, limit: int = 20, only: str | None = None) -> dict[str, Any]:
    if action == "stats":
        return command_result("log", summarize_runs())
    if action == "recent":
        return command_result("log", {"rows": recent_runs(limit, only)})
    clear_runs()
    return command_result("log", {"cleared": True})


def cmd_config(action: str, assignment: str | None = None) -> dict[str, Any]:
    if action == "set":
        if not assignment or "=" not in assignment:
            raise InvalidInput("config set takes section.key=value")
        key, _, value = assignment.partition("=")
        return command_result("config", {"config": set_setting(key.strip(), value.strip())})
    return command_result("config", {"config": load_config()})


# output

def render_table(result: dict[str, Any]) -> str:
    """Rows as aligned columns, everything else as key: value lines."""
    lines = []
    for key, value in result.items():
        if key in ("rows", "summands"):
            continue
        lines.append(f"{key}: {json.dumps(value, default=str) if isinstance(value, (dict, list)) else value}")
    rows = result.get("rows") or result.get("summands") or []
    if rows:
        columns = list(dict.fromkeys(column for row in rows for column in row))
        cells = [[json.dumps(row.get(column), default=str) if isinstance(row.get(column), (dict, list)) else str(row.get(column, "")) for column in columns] for row in rows]
        widths = [max(len(column), *(len(line[n]) for line in cells)) for n, column in enumerate(columns)]
        lines.append("")
        lines.append("  ".join(column.ljust(width) for column, width in zip(columns, widths)))
        for line in cells:
            lines.append("  ".join(cell.ljust(width) for cell, width in zip(line, widths)))
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS, help="Tolerance override")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="Random seed")
    common.add_argument("--format", choices=["json", "table"], default=argparse.SUPPRESS, help="Output format")

    parser = argparse.ArgumentParser(prog="orthoscalar", description="Orthoscalar quiver representations", parents=[common])
    subparsers = parser.add_subparsers(dest="command", help="Commands")

    p = subparsers.add_parser("roots", help="Enumerate or classify roots", parents=[common])
    p.add_argument("--graph", required=True, help="Catalog name, e.g. D~4 or E6~")
    p.add_argument("--bound", help="Search box, comma-separated or 'delta'")
    p.add_argument("--classify", help="Classify one vector")

    p = subparsers.add_parser("construct", help="Build a representation", parents=[common])
    p.add_argument("--family", help="Extended graph whose delta family to use")
    p.add_argument("--params", help="Parameter JSON, inline or a file path")
    p.add_argument("--graph", help="Graph for a real-root construction")
    p.add_argument("--vector", help="Real root for --graph")
    p.add_argument("--chi", type=float, help="Seed character for real-root constructions")
    p.add_argument("-o", "--output", help="Write the representation JSON here")

    p = subparsers.add_parser("verify", help="Check orthoscalarity and the Schur property", parents=[common])
    p.add_argument("file", help="Representation JSON")

    p = subparsers.add_parser("functor", help="Apply alternating reflection functors", parents=[common])
    p.add_argument("file", help="Representation JSON")
    p.add_argument("--parity", choices=["even", "odd"], required=True)
    p.add_argument("--k", type=int, default=1, help="Number of alternating functors")
    p.add_argument("--roundtrip", action="store_true", help="Apply the reverse chain and compare with the input")
    p.add_argument("-o", "--output", help="Write the result JSON here")

    p = subparsers.add_parser("decompose", help="Split into Schur summands", parents=[common])
    p.add_argument("file", help="Representation JSON")
    p.add_argument("--output-dir", help="Write each summand here")

    p = subparsers.add_parser("reduce", help="Reflection path of a real root", parents=[common])
    p.add_argument("--graph", required=True)
    p.add_argument("--vector", required=True)
    p.add_argument("--faithful", action="store_true", help="Reduce a faithful root to one with a zero coordinate")

    p = subparsers.add_parser("graphs", help="List catalog graphs", parents=[common])
    p.add_argument("--max-n", type=int, default=8)

    p = subparsers.add_parser("log", help="Run telemetry", parents=[common])
    p.add_argument("action", choices=["stats", "recent", "clear"])
    p.add_argument("--limit", type=int, default=20)
    p.add_argument("--command", dest="only", default=None, help="Only events of this command")

    p = subparsers.add_parser("config", help="Show or change settings", parents=[common])
    p.add_argument("action", choices=["show", "set"])
    p.add_argument("assignment", nargs="?", help="section.key=value")
    return parser


def dispatch(args: argparse.Namespace) -> dict[str, Any]:
    tol = getattr(args, "tol", None)
    seed = getattr(args, "seed", None)
    if args.command == "roots":
        return cmd_roots(args.graph, args.bound, args.classify)
    if args.command == "construct":
        return cmd_construct(args.family, args.params, seed, args.output, args.graph, args.vector, args.chi, tol)
    if args.command == "verify":
        return cmd_verify(args.file, tol)
    if args.command == "functor":
        return cmd_functor(args.file, args.parity, args.k, args.output, args.roundtrip, tol, _seed(args))
    if args.command == "decompose":
        return cmd_decompose(args.file, args.output_dir, tol, _seed(args))
    if args.command == "reduce":
        return cmd_reduce(args.graph, args.vector, args.faithful)
    if args.command == "graphs":
        return cmd_graphs(args.max_n)
    if args.command == "log":
        return cmd_log(args.action, args.limit, args.only)
    if args.command == "config":
        return cmd_config(args.action, args.assignment)
    raise InvalidInput(f"unknown command {args.command!r}")


def run(argv: list[str] | None = None) -> tuple[dict[str, Any], str]:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        sys.exit(0)

    started = time.perf_counter()
    try:
        result = dispatch(args)
    except OrthoscalarError as exc:
        result = command_result(args.command, exc.payload(), [str(exc)], "error", exc.exit_code)
    except (ValueError, np.linalg.LinAlgError) as exc:
        # anything not raised as an OrthoscalarError came from inside a computation
        failure = NumericalFailure(str(exc), {"exception": type(exc).__name__})
        result = command_result(args.command, failure.payload(), [str(exc)], "error", failure.exit_code)

    if args.command != "log":
        record_run_event(
            "command",
            args.command,
            graph=result.get("graph"),
            family=result.get("family"),
            seed=getattr(args, "seed", None),
            ok=result["ok"],
            exit_code=result["exit_code"],
            duration_ms=round((time.perf_counter() - started) * 1000, 3),
            defect=result.get("defect"),
            error=result.get("error"),
        )
    return result, getattr(args, "format", None) or get_setting("cli", "format")


def main(argv: list[str] | None = None) -> None:
    result, output_format = run(argv)
    if output_format == "table":
        print(render_table(result))
    else:
        print(json.dumps(result, indent=2, default=str))
    sys.exit(result["exit_code"])


if __name__ == "__main__":
    main()
