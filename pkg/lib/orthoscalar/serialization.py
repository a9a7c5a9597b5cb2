"""JSON documents for quivers, dimension vectors, representations and command results."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from .catalog import Quiver, build_catalog_quiver, require_valid
from .errors import InvalidInput, InvalidRepresentation
from .hilbert import Character, Representation
from .roots import GVector, delta_of


def matrix_to_list(matrix: np.ndarray) -> list[list[list[float]]]:
    """Complex matrix as rows of [re, im] pairs."""
    return [[[float(value.real), float(value.imag)] for value in row] for row in np.asarray(matrix, dtype=complex)]


def matrix_from_list(data: Any, shape: tuple[int, int]) -> np.ndarray:
    if shape[0] == 0 or shape[1] == 0:
        return np.zeros(shape, dtype=complex)
    try:
        array = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvalidRepresentation(f"matrix entries must be [re, im] pairs: {exc}") from exc
    if array.shape != (shape[0], shape[1], 2):
        raise InvalidRepresentation(f"matrix of shape {array.shape[:2]} where {shape} was expected", {"shape": list(shape)})
    return array[..., 0] + 1j * array[..., 1]


def quiver_to_dict(q: Quiver) -> dict[str, Any]:
    return q.to_dict()


def quiver_from_dict(data: Mapping[str, Any] | str) -> Quiver:
    """A catalog name or a full quiver document."""
    if isinstance(data, str):
        return build_catalog_quiver(data).quiver
    if "vertices" not in data:
        return build_catalog_quiver(str(data.get("name", ""))).quiver
    return require_valid(Quiver.from_dict(data))


def parse_vector(text: str, q: Quiver | None = None) -> GVector:
    """`1,1,1,1,2` -> (1, 1, 1, 1, 2); `delta` expands through the catalog when `q` is extended."""
    cleaned = text.strip()
    if q is not None and cleaned.lower() in ("delta", "δ"):
        return delta_of(q)
    try:
        return tuple(int(part) for part in cleaned.replace(";", ",").split(",") if part.strip())
    except ValueError as exc:
        raise InvalidInput(f"not an integer vector: '{text}'") from exc


def representation_to_dict(T: Representation, character: Character | None = None) -> dict[str, Any]:
    q = T.quiver
    document: dict[str, Any] = {
        "kind": "representation",
        "graph": q.name,
        "quiver": quiver_to_dict(q),
        "dims": {v: T.dims[v] for v in q.vertices},
        "blocks": [
            {"tail": tail, "head": head, "matrix": matrix_to_list(T.blocks[(tail, head)])}
            for tail, head in q.arrows
        ],
    }
    if character is not None:
        document["character"] = character.to_dict()
        document["character_support"] = sorted(character.support)
    return document


def representation_from_dict(data: Mapping[str, Any]) -> tuple[Representation, Character | None]:
    if not isinstance(data, Mapping) or "dims" not in data:
        raise InvalidRepresentation("representation document needs 'dims'")
    q = quiver_from_dict(data.get("quiver") or str(data.get("graph", "")))
    dims = {str(v): int(size) for v, size in dict(data["dims"]).items()}
    blocks: dict[tuple[str, str], np.ndarray] = {}
    for item in data.get("blocks", []):
        try:
            tail, head = str(item["tail"]), str(item["head"])
        except (KeyError, TypeError) as exc:
            raise InvalidRepresentation(f"malformed block entry: {exc}") from exc
        if tail not in dims or head not in dims:
            raise InvalidRepresentation(f"block {tail}->{head} names an unknown vertex", {"graph": q.name})
        blocks[(tail, head)] = matrix_from_list(item.get("matrix", []), (dims[head], dims[tail]))
    T = Representation(q, dims, blocks)
    character = None
    if "character" in data:
        support = data.get("character_support")
        character = Character.from_values(q, data["character"], T.support if support is None else set(support))
    return T, character


def read_json(path: str | Path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise InvalidInput(f"no such file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path} is not valid JSON: {exc}") from exc


def write_json(path: str | Path, document: Any) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(json.dumps(document, indent=2, default=str) + "\n")
    return target


def command_result(
    command: str,
    payload: Mapping[str, Any] | None = None,
    diagnostics: list[str] | None = None,
    status: str = "ok",
    exit_code: int | None = None,
) -> dict[str, Any]:
    """Envelope shared by every command: ok, status, command, the payload, diagnostics, exit_code."""
    result: dict[str, Any] = {"ok": status == "ok", "status": status, "command": command}
    result.update(payload or {})
    result["diagnostics"] = list(diagnostics or [])
    if status != "ok" and not result["diagnostics"]:
        result["diagnostics"].append(str(result.get("message", status)))
    result["exit_code"] = (0 if status == "ok" else 1) if exit_code is None else exit_code
    return result
