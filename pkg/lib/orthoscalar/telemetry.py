"""Local run log for orthoscalar commands.

Each CLI invocation appends one JSON line to ``$ORTHOSCALAR_HOME/telemetry/runs.jsonl``
with the command, graph or family, exit code, duration and orthoscalarity defect.
"""

from __future__ import annotations

import json
from collections import Counter, defaultdict
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from .config import ORTHOSCALAR_HOME, get_setting


def get_telemetry_dir() -> Path:
    path = ORTHOSCALAR_HOME / "telemetry"
    path.mkdir(parents=True, exist_ok=True)
    return path


def get_run_log_path() -> Path:
    return get_telemetry_dir() / "runs.jsonl"


def record_run_event(event_type: str, command: str, **payload: Any) -> None:
    """Append one command event; empty payload fields are dropped."""
    if not get_setting("telemetry", "enabled"):
        return
    event = {
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "event_type": event_type,
        "command": command,
    }
    event.update({key: value for key, value in payload.items() if value not in (None, "", [], {})})

    with open(get_run_log_path(), "a", encoding="utf-8") as handle:
        handle.write(json.dumps(event, ensure_ascii=False, default=str) + "\n")


def iter_run_events(command: str | None = None) -> list[dict[str, Any]]:
    path = get_run_log_path()
    if not path.exists():
        return []

    events: list[dict[str, Any]] = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if not line:
                continue
            try:
                event = json.loads(line)
            except json.JSONDecodeError:
                continue
            if command is None or event.get("command") == command:
                events.append(event)
    return events


def summarize_runs() -> dict[str, Any]:
    """Counts per command, graph and error, mean durations and the worst defect seen."""
    events = iter_run_events()
    by_command = Counter()
    by_type = Counter()
    by_graph = Counter()
    by_error = Counter()
    durations: dict[str, list[float]] = defaultdict(list)
    worst_defect: float | None = None

    for event in events:
        command = event.get("command", "unknown")
        by_command[command] += 1
        by_type[event.get("event_type", "unknown")] += 1
        target = event.get("graph") or event.get("family")
        if target:
            by_graph[target] += 1
        if event.get("error"):
            by_error[event["error"]] += 1
        if isinstance(event.get("duration_ms"), (int, float)):
            durations[command].append(float(event["duration_ms"]))
        if isinstance(event.get("defect"), (int, float)):
            worst_defect = max(worst_defect or 0.0, float(event["defect"]))

    return {
        "total_events": len(events),
        "commands": dict(by_command.most_common()),
        "event_types": dict(by_type.most_common()),
        "graphs": dict(by_graph.most_common()),
        "errors": dict(by_error.most_common()),
        "mean_duration_ms": {
            command: round(sum(values) / len(values), 3) for command, values in sorted(durations.items())
        },
        "worst_defect": worst_defect,
        "last_event": events[-1] if events else None,
    }


def recent_runs(limit: int = 20, command: str | None = None) -> list[dict[str, Any]]:
    return iter_run_events(command)[-limit:]


def clear_runs() -> None:
    path = get_run_log_path()
    if path.exists():
        path.unlink()
