"""Parametric families of indecomposable orthoscalar representations in dimension delta."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from ..catalog import build_catalog_quiver, canonical_name, parse_graph_name
from ..config import get_setting, tolerance
from ..errors import (
    CompletionInfeasible,
    ConstraintViolated,
    DegenerateParameters,
    InvalidInput,
    NoSolution,
    RecurrenceNegative,
    UnknownFamily,
    UnknownGraph,
)
from ..hilbert import Representation
from .completion import (
    LAYOUTS,
    BasisMatrix,
    complete_from_basis,
    complete_layout,
    extract_basis,
    solve_completion_quadratic,
)
from .cycle import construct_A_family, cycle_holonomy
from .dseries import chain_moduli, construct_D_family
from .exceptional import (
    E6_NAMES,
    E7_NAMES,
    E8_NAMES,
    complete_E6,
    complete_E7,
    complete_E8,
    constraint_residuals,
    construct_E6_basis,
    construct_E7_basis,
    construct_E8_basis,
    e6_character_relation,
    solve_e6,
    solve_e7,
    solve_e8,
    solve_phase_triangle,
)


# free inputs, solved dependents and the real relations removed from the raw count
FAMILY_PARAMETERS: dict[str, dict[str, Any]] = {
    "E6~": {
        "names": E6_NAMES,
        "free": ("phi1", "phi2", "phi3", "psi1", "psi2", "psi3", "psi4"),
        "dependent": ("theta2", "theta3"),
        "relations": {"row orthogonality": 2, "removable phase theta1": 1},
        "solve": solve_e6,
    },
    "E7~": {
        "names": E7_NAMES,
        "free": ("phi1", "phi2", "phi3", "psi1", "psi2", "psi3", "psi4", "psi5"),
        "dependent": ("phi4", "theta1", "theta2"),
        "relations": {"row orthogonality": 2, "c1 column lengths": 1},
        "solve": solve_e7,
    },
    "E8~": {
        "names": E8_NAMES,
        "free": ("phi1", "phi2", "phi5", "psi1", "psi2", "psi3", "psi4", "psi5"),
        "dependent": ("phi3", "phi4", "psi6", "phi6", "theta1", "theta2"),
        "relations": {"row orthogonality": 2, "c1 column lengths": 2, "b2 spectra": 2},
        "solve": solve_e8,
    },
}

_RECOVERABLE = (NoSolution, CompletionInfeasible, ConstraintViolated, DegenerateParameters, RecurrenceNegative)


def family_name(family: str) -> str:
    """Canonical extended name (`E~6` -> `E6~`); finite or unknown names raise UnknownFamily."""
    try:
        kind, size, extended = parse_graph_name(family)
    except UnknownGraph as exc:
        raise UnknownFamily(f"unknown family '{family}'", {"family": family}) from exc
    if not extended:
        raise UnknownFamily(f"'{family}' is not an extended Dynkin graph", {"family": family})
    name = canonical_name(kind, size, extended)
    build_catalog_quiver(name)
    return name


def _size(family: str) -> int:
    return parse_graph_name(family)[1]


@dataclass(frozen=True)
class ParameterPoint:
    family: str
    params: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", family_name(self.family))

    @property
    def angles(self) -> dict[str, float]:
        return {k: float(v) for k, v in self.params.items() if k.startswith(("phi", "psi"))}

    @property
    def phases(self) -> dict[str, float]:
        return {k: float(v) for k, v in self.params.items() if k.startswith("theta") or k == "phase"}

    @property
    def moduli(self) -> dict[str, float]:
        values = {k: float(v) for k, v in self.params.items() if k[:1] in ("x", "y") and k[1:].isdigit()}
        for k, v in enumerate(self.params.get("moduli", []), start=1):
            values[f"t{k}"] = float(v)
        return values

    @property
    def scale(self) -> float:
        return float(self.params.get("scale", 1.0))

    def to_dict(self) -> dict[str, Any]:
        params = {k: ([float(x) for x in v] if isinstance(v, (list, tuple)) else float(v)) for k, v in self.params.items()}
        return {"family": self.family, "params": params}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> ParameterPoint:
        if not isinstance(data, Mapping) or "family" not in data:
            raise InvalidInput("parameter point needs a 'family'")
        params = data.get("params", {})
        if not isinstance(params, Mapping):
            raise InvalidInput("'params' must be an object")
        return cls(str(data["family"]), dict(params))


def count_free_parameters(family: str) -> int:
    """Real parameters the delta family depends on: one per vertex plus one."""
    name = family_name(family)
    return len(build_catalog_quiver(name).quiver.vertices) + 1


def count_normal_form_parameters(family: str) -> int:
    """Raw parameters of the constructor minus the real relations tying them together."""
    name = family_name(family)
    if name.startswith("A~"):
        return _size(name) + 1
    if name.startswith("D~"):
        # x_0 .. x_{n-3}, y_0, phi1, phi2, theta
        return (_size(name) - 2) + 4
    entry = FAMILY_PARAMETERS[name]
    raw = len(entry["names"]) + 1
    return raw - sum(entry["relations"].values())


def solve_family_constraint(family: str, free_params: Mapping[str, Any], tol: float | None = None) -> ParameterPoint:
    """Fill in the dependent parameters of `family` and check every relation."""
    name = family_name(family)
    if name not in FAMILY_PARAMETERS:
        return ParameterPoint(name, dict(free_params))
    entry = FAMILY_PARAMETERS[name]
    extra = {k: v for k, v in free_params.items() if k == "scale"}
    params = entry["solve"]({k: v for k, v in free_params.items() if k != "scale"})
    residuals = constraint_residuals(name, params)
    worst = max(residuals.values())
    if worst > tolerance("constraint", tol):
        raise NoSolution(f"{name} relations left a residual of {worst:.3e}", {"residual_min": worst, "residuals": residuals})
    return ParameterPoint(name, {**params, **extra})


def construct_family(point: ParameterPoint, tol: float | None = None, allow_degenerate: bool = False) -> Representation:
    """Representation of the family member named by `point`."""
    name = point.family
    params = point.params
    try:
        if name.startswith("A~"):
            moduli = list(params["moduli"])
            return construct_A_family(_size(name), moduli[:-1], moduli[-1] if moduli else 0.0, float(params.get("phase", 0.0)))
        if name.startswith("D~"):
            n = _size(name)
            x = [params[f"x{k}"] for k in range(n - 2)]
            return construct_D_family(
                n, x, params["y0"], params["phi1"], params["phi2"], params.get("theta", 0.0), allow_degenerate
            )
    except KeyError as exc:
        raise InvalidInput(f"{name} parameters missing {exc.args[0]!r}") from exc
    scale = point.scale
    if name == "E6~":
        return complete_E6(construct_E6_basis(params, tol), scale)
    if name == "E7~":
        return complete_E7(construct_E7_basis(params, tol), scale)
    if name == "E8~":
        return complete_E8(construct_E8_basis(params, tol), scale)
    raise UnknownFamily(f"no constructor for {name}", {"family": name})


def _draw(family: str, rng: np.random.Generator, margin: float) -> dict[str, Any]:
    def angle() -> float:
        return float(rng.uniform(margin, np.pi / 2 - margin))

    if family.startswith("A~"):
        return {"moduli": [float(v) for v in rng.uniform(0.5, 2.0, _size(family))], "phase": float(rng.uniform(0, 2 * np.pi))}
    if family.startswith("D~"):
        n = _size(family)
        params: dict[str, Any] = {f"x{k}": float(rng.uniform(0.5, 2.0)) for k in range(n - 2)}
        params["y0"] = float(rng.uniform(0.5, 2.0))
        params.update(phi1=angle(), phi2=angle(), theta=float(rng.uniform(margin, 2 * np.pi - margin)))
        return params
    params = {k: angle() for k in FAMILY_PARAMETERS[family]["free"]}
    params["scale"] = float(rng.uniform(0.5, 2.0))
    return params


def sample_parameter_point(
    family: str,
    rng: np.random.Generator,
    max_attempts: int | None = None,
) -> ParameterPoint:
    """A generic point, angles kept `sampling.margin` away from 0 and pi/2, that constructs cleanly."""
    name = family_name(family)
    margin = float(get_setting("sampling", "margin"))
    attempts = int(max_attempts or get_setting("sampling", "max_attempts"))
    last: Exception | None = None
    for _ in range(attempts):
        draw = _draw(name, rng, margin)
        try:
            if name.startswith("D~"):
                x0, y0 = draw["x0"], draw["y0"]
                if abs(x0 * x0 - y0 * y0) < margin:
                    continue
                chain_moduli([draw[f"x{k}"] for k in range(_size(name) - 2)], y0)
            point = solve_family_constraint(name, draw)
            construct_family(point)
            return point
        except _RECOVERABLE as exc:
            last = exc
    raise NoSolution(
        f"no admissible {name} point in {attempts} draws",
        {"family": name, "last_error": getattr(last, "code", None)},
    )


__all__ = [
    "FAMILY_PARAMETERS",
    "LAYOUTS",
    "BasisMatrix",
    "ParameterPoint",
    "chain_moduli",
    "complete_E6",
    "complete_E7",
    "complete_E8",
    "complete_from_basis",
    "complete_layout",
    "constraint_residuals",
    "construct_A_family",
    "construct_D_family",
    "construct_E6_basis",
    "construct_E7_basis",
    "construct_E8_basis",
    "construct_family",
    "count_free_parameters",
    "count_normal_form_parameters",
    "cycle_holonomy",
    "e6_character_relation",
    "extract_basis",
    "family_name",
    "sample_parameter_point",
    "solve_completion_quadratic",
    "solve_family_constraint",
    "solve_phase_triangle",
]
