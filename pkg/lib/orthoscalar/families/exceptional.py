"""Bases and constraint solving for the E6~, E7~ and E8~ families."""

from __future__ import annotations

from typing import Mapping

import numpy as np

from ..config import tolerance
from ..errors import CompletionInfeasible, ConstraintViolated, DegenerateParameters, InvalidInput, NoSolution
from ..hilbert import Character, Representation
from .completion import CENTER, LAYOUTS, BasisMatrix, complete_layout, solve_completion_quadratic


E6_NAMES = ("phi1", "phi2", "phi3", "psi1", "psi2", "psi3", "psi4", "theta1", "theta2", "theta3")
E7_NAMES = ("phi1", "phi2", "phi3", "phi4", "psi1", "psi2", "psi3", "psi4", "psi5", "theta1", "theta2")
E8_NAMES = (
    "phi1", "phi2", "phi3", "phi4", "phi5", "phi6",
    "psi1", "psi2", "psi3", "psi4", "psi5", "psi6",
    "theta1", "theta2",
)


def _require(params: Mapping[str, float], names: tuple[str, ...], family: str) -> dict[str, float]:
    missing = [name for name in names if name not in params]
    if missing:
        raise InvalidInput(f"{family} parameters missing: {', '.join(missing)}")
    return {name: float(params[name]) for name in names}


def solve_phase_triangle(p: float, q: float, r: float) -> tuple[float, float]:
    """(alpha, beta) with p + q e^{i alpha} + r e^{i beta} = 0 for signed reals p, q, r.

    The magnitude problem is solved with alpha in [0, pi]; a sign differing
    from that of p turns into a half-turn of the matching phase.
    """
    sign = -1.0 if p < 0 else 1.0
    shift_q = np.pi if sign * q < 0 else 0.0
    shift_r = np.pi if sign * r < 0 else 0.0
    alpha, beta = _magnitude_triangle(abs(p), abs(q), abs(r))
    return float((alpha + shift_q) % (2 * np.pi)), float((beta + shift_r) % (2 * np.pi))


def _magnitude_triangle(p: float, q: float, r: float) -> tuple[float, float]:
    longest = max(p, q, r)
    gap = longest - (p + q + r - longest)
    if gap > 1e-12 * max(1.0, longest):
        raise NoSolution(
            "phase relation violates the triangle inequality",
            {"residual_min": float(gap), "magnitudes": [p, q, r]},
        )
    tiny = 1e-15 * max(1.0, longest)
    if p <= tiny or q <= tiny:
        alpha = 0.0
    else:
        alpha = float(np.arccos(np.clip((r * r - p * p - q * q) / (2 * p * q), -1.0, 1.0)))
    partial = p + q * np.exp(1j * alpha)
    beta = float(np.angle(-partial)) % (2 * np.pi) if r > tiny else 0.0
    return alpha, beta


# E6~

def e6_basis_matrix(p: Mapping[str, float]) -> np.ndarray:
    s, c = np.sin, np.cos
    f1, f2, f3 = p["phi1"], p["phi2"], p["phi3"]
    g1, g2, g3, g4 = p["psi1"], p["psi2"], p["psi3"], p["psi4"]
    t1, t2, t3 = np.exp(1j * p["theta1"]), np.exp(1j * p["theta2"]), np.exp(1j * p["theta3"])
    return np.array(
        [
            [s(g1), 0, 0, s(f1) * c(g1), 0, c(f1) * c(g1)],
            [0, c(f2) * c(g2), s(f2) * c(g2), 0, s(g2), 0],
            [
                0,
                s(g3) * c(f3) * c(g4) * t2,
                s(g3) * s(f3) * c(g4) * t3,
                -c(f1) * c(g3) * t1,
                s(g3) * s(g4),
                s(f1) * c(g3) * t1,
            ],
        ],
        dtype=complex,
    )


def e6_relation_terms(p: Mapping[str, float]) -> tuple[float, float, float]:
    s, c = np.sin, np.cos
    a = s(p["psi2"]) * s(p["psi3"]) * s(p["psi4"])
    b = c(p["phi2"]) * c(p["phi3"]) * c(p["psi2"]) * s(p["psi3"]) * c(p["psi4"])
    d = s(p["phi2"]) * s(p["phi3"]) * c(p["psi2"]) * s(p["psi3"]) * c(p["psi4"])
    return float(a), float(b), float(d)


def solve_e6(free: Mapping[str, float]) -> dict[str, float]:
    """theta2 and theta3 from the orthogonality of the second and third rows; theta1 is a gauge phase."""
    params = {name: float(value) for name, value in free.items()}
    params.setdefault("theta1", 0.0)
    _require(params, E6_NAMES[:7], "E6~")
    a, b, d = e6_relation_terms(params)
    params["theta2"], params["theta3"] = solve_phase_triangle(a, b, d)
    return params


def construct_E6_basis(params: Mapping[str, float], tol: float | None = None) -> BasisMatrix:
    p = _require(params, E6_NAMES, "E6~")
    if abs(np.sin(p["phi2"]) * np.sin(p["psi2"])) <= 1e-12:
        raise DegenerateParameters("phi2 * psi2 must be nonzero", {"phi2": p["phi2"], "psi2": p["psi2"]})
    basis = BasisMatrix("E6~", e6_basis_matrix(p), p)
    residual = basis.row_residual()
    if residual > tolerance("constraint", tol):
        raise ConstraintViolated(f"basis rows are not orthonormal (residual {residual:.3e})", {"residual": residual})
    return basis


def complete_E6(basis: BasisMatrix, scale: float = 1.0) -> Representation:
    """Each leaf block w solves w^* w = chi I - K^* K for the 3x2 block K next to z."""
    q = basis.quiver
    blocks = {}
    for vertex, K in basis.column_blocks().items():
        leaf = vertex[0] + "1"
        gram = K.conj().T @ K
        s = float((gram[1, 1] - gram[0, 0]).real)
        t = float(abs(gram[0, 1]) ** 2)
        if t > 1e-24:
            w1, _ = solve_completion_quadratic(s, t)
            w = np.array([[w1, -gram[0, 1] / w1]], dtype=complex)
        elif s > 0:
            w = np.array([[np.sqrt(s), 0.0]], dtype=complex)
        elif s < 0:
            w = np.array([[0.0, np.sqrt(-s)]], dtype=complex)
        else:
            raise CompletionInfeasible(f"leaf {leaf} would carry a zero map", {"vertex": leaf})
        blocks[(vertex, CENTER)] = K
        blocks[(vertex, leaf)] = w
    dims = {"a1": 1, "a2": 2, "b1": 1, "b2": 2, "c1": 1, "c2": 2, "z": 3}
    T = Representation(q, dims, blocks)
    return T.scaled(float(np.sqrt(scale))) if scale != 1.0 else T


def e6_character_relation(chi: Character | Mapping[str, float]) -> float:
    """chi_a1 + chi_b1 + chi_c1 + 3 chi_z - 2 (chi_a2 + chi_b2 + chi_c2)."""
    value = chi.values if isinstance(chi, Character) else chi
    return float(
        value["a1"] + value["b1"] + value["c1"] + 3 * value["z"]
        - 2 * (value["a2"] + value["b2"] + value["c2"])
    )


# E7~

def e7_basis_matrix(p: Mapping[str, float]) -> np.ndarray:
    s, c = np.sin, np.cos
    f1, f2, f3, f4 = p["phi1"], p["phi2"], p["phi3"], p["phi4"]
    g1, g2, g3, g4, g5 = p["psi1"], p["psi2"], p["psi3"], p["psi4"], p["psi5"]
    t1, t2 = np.exp(1j * p["theta1"]), np.exp(1j * p["theta2"])
    return np.array(
        [
            [c(f1) * c(g1), 0, 0, s(f1) * c(g1), 0, 0, 0, s(g1)],
            [s(f1) * c(g2), c(f2) * s(g2), 0, -c(f1) * c(g2), 0, s(f2) * s(g2), 0, 0],
            [0, s(f2) * c(g4), c(f3) * c(g3) * s(g4), 0, s(f3) * c(g3) * s(g4), -c(f2) * c(g4), s(g3) * s(g4), 0],
            [0, 0, s(f4) * s(g5), 0, c(f4) * s(g5) * t1, 0, c(g5) * t2, 0],
        ],
        dtype=complex,
    )


def solve_e7(free: Mapping[str, float]) -> dict[str, float]:
    """phi4 from the equal column lengths at c1, then theta1 and theta2 from the last row relation."""
    params = {name: float(value) for name, value in free.items()}
    _require(params, ("phi1", "phi2", "phi3", "psi1", "psi2", "psi3", "psi4", "psi5"), "E7~")
    s, c = np.sin, np.cos
    f1, f3 = params["phi1"], params["phi3"]
    g1, g2, g3, g4, g5 = (params[f"psi{k}"] for k in range(1, 6))

    first = s(f1) ** 2 * c(g1) ** 2 + c(f1) ** 2 * c(g2) ** 2
    known = s(f3) ** 2 * c(g3) ** 2 * s(g4) ** 2
    if abs(s(g5)) <= 1e-15:
        raise NoSolution("psi5 = 0 leaves no room for the c1 column lengths", {"residual_min": abs(first - known)})
    cos_sq = (first - known) / s(g5) ** 2
    if not 0.0 <= cos_sq <= 1.0:
        raise NoSolution("c1 column lengths cannot be equalized", {"residual_min": float(min(abs(cos_sq), abs(cos_sq - 1)))})
    params["phi4"] = float(np.arccos(np.sqrt(cos_sq)))

    f4 = params["phi4"]
    P = c(f3) * s(f4) * c(g3) * s(g4) * s(g5)
    Q = s(f3) * c(f4) * c(g3) * s(g4) * s(g5)
    R = s(g3) * s(g4) * c(g5)
    params["theta1"], params["theta2"] = solve_phase_triangle(P, Q, R)
    return params


def construct_E7_basis(params: Mapping[str, float], tol: float | None = None) -> BasisMatrix:
    p = _require(params, E7_NAMES, "E7~")
    basis = BasisMatrix("E7~", e7_basis_matrix(p), p)
    tol = tolerance("constraint", tol)
    residual = basis.row_residual()
    if residual > tol:
        raise ConstraintViolated(f"basis rows are not orthonormal (residual {residual:.3e})", {"residual": residual})
    c1 = basis.column_blocks()["c1"]
    lengths = np.sum(np.abs(c1) ** 2, axis=0)
    spread = float(lengths.max() - lengths.min())
    if spread > tol:
        raise ConstraintViolated(f"c1 columns differ in length by {spread:.3e}", {"residual": spread})
    return basis


def complete_E7(basis: BasisMatrix, scale: float = 1.0, tol: float | None = None) -> Representation:
    return complete_layout(basis, scale, tol)


# E8~

_E8_ENTRIES = (
    (0, 0, lambda s, c, p: s(p["psi1"])),
    (0, 5, lambda s, c, p: c(p["phi1"]) * c(p["psi1"])),
    (0, 8, lambda s, c, p: s(p["phi1"]) * c(p["psi1"])),
    (1, 1, lambda s, c, p: s(p["phi2"]) * s(p["psi2"])),
    (1, 5, lambda s, c, p: s(p["phi1"]) * c(p["psi2"])),
    (1, 8, lambda s, c, p: -c(p["phi1"]) * c(p["psi2"])),
    (1, 9, lambda s, c, p: c(p["phi2"]) * s(p["psi2"])),
    (2, 1, lambda s, c, p: c(p["phi2"]) * s(p["psi3"])),
    (2, 2, lambda s, c, p: s(p["phi3"]) * c(p["psi3"])),
    (2, 6, lambda s, c, p: c(p["phi3"]) * c(p["psi3"])),
    (2, 9, lambda s, c, p: -s(p["phi2"]) * s(p["psi3"])),
    (3, 2, lambda s, c, p: c(p["phi3"]) * s(p["psi4"])),
    (3, 3, lambda s, c, p: s(p["phi4"]) * c(p["psi4"])),
    (3, 6, lambda s, c, p: -s(p["phi3"]) * s(p["psi4"])),
    (3, 10, lambda s, c, p: -c(p["phi4"]) * c(p["psi4"])),
    (4, 3, lambda s, c, p: c(p["phi4"]) * c(p["psi4"]) * c(p["psi5"])),
    (4, 4, lambda s, c, p: c(p["phi5"]) * s(p["psi5"])),
    (4, 7, lambda s, c, p: s(p["phi5"]) * s(p["psi5"])),
    (4, 10, lambda s, c, p: s(p["phi4"]) * c(p["psi4"]) * c(p["psi5"])),
    (4, 11, lambda s, c, p: s(p["psi4"]) * c(p["psi5"])),
    (5, 4, lambda s, c, p: c(p["phi6"]) * c(p["psi6"])),
    (5, 7, lambda s, c, p: s(p["phi6"]) * c(p["psi6"]) * np.exp(1j * p["theta1"])),
    (5, 11, lambda s, c, p: -s(p["psi6"]) * np.exp(1j * p["theta2"])),
)


def e8_basis_matrix(p: Mapping[str, float]) -> np.ndarray:
    """6x12 band [a5 | c1 | b2]; the bottom row has no entry in the a5 column next to a_{12,9}."""
    matrix = np.zeros((6, 12), dtype=complex)
    for row, column, entry in _E8_ENTRIES:
        matrix[row, column] = entry(np.sin, np.cos, p)
    return matrix


def _b2_upper_gram(p: Mapping[str, float]) -> tuple[float, float, float]:
    """(g11, g22, g12) of the b2 columns met by the first three rows."""
    s, c = np.sin, np.cos
    f1, f2 = p["phi1"], p["phi2"]
    g1, g2, g3 = p["psi1"], p["psi2"], p["psi3"]
    return (
        float(s(f1) ** 2 * c(g1) ** 2 + c(f1) ** 2 * c(g2) ** 2),
        float(c(f2) ** 2 * s(g2) ** 2 + s(f2) ** 2 * s(g3) ** 2),
        float(-c(f1) * c(g2) * c(f2) * s(g2)),
    )


def _b2_lower_angles(p: Mapping[str, float], trace: float, det: float) -> tuple[float, float]:
    """(phi4, psi6) giving the lower b2 Gram block the trace and determinant of the upper one.

    With u = sin^2 phi4 the lower block is [[base - slope u, b], [b, fixed + sin^2 psi6]]
    with b^2 = cross u; the trace fixes sin^2 psi6 and the determinant leaves a
    quadratic in u.
    """
    s, c = np.sin, np.cos
    g4, g5 = p["psi4"], p["psi5"]
    base = c(g4) ** 2
    slope = base * s(g5) ** 2
    cross = s(g4) ** 2 * base * c(g5) ** 4
    fixed = s(g4) ** 2 * c(g5) ** 2
    a, b, k = slope ** 2, cross - slope * (2 * base - trace), det - base * (trace - base)
    if a <= 1e-15:
        raise NoSolution("phi4 is undetermined when sin psi5 cos psi4 = 0", {"residual_min": 0.0})
    disc = b * b - 4 * a * k
    if disc < 0:
        raise NoSolution("b2 Gram blocks cannot share a spectrum", {"residual_min": float(-disc)})
    root = -(b + np.copysign(np.sqrt(disc), b)) / 2
    candidates = sorted({float(root / a), float(k / root)}) if root else [0.0]
    overshoot = []
    for u in candidates:
        sin_sq = trace - (base - slope * u) - fixed
        if 0.0 <= u <= 1.0 and 0.0 <= sin_sq < 1.0:
            return float(np.arcsin(np.sqrt(u))), float(np.arcsin(np.sqrt(sin_sq)))
        overshoot.append(max(-u, u - 1.0, -sin_sq, sin_sq - 1.0, 0.0))
    raise NoSolution("b2 spectra need phi4 or psi6 outside [0, pi/2]", {"residual_min": float(min(overshoot))})


def solve_e8(free: Mapping[str, float]) -> dict[str, float]:
    """phi3 from the c1 column lengths, (phi4, psi6) from the equal b2 spectra, phi6, then the phases."""
    params = {name: float(value) for name, value in free.items()}
    _require(params, ("phi1", "phi2", "phi5", "psi1", "psi2", "psi3", "psi4", "psi5"), "E8~")
    s, c = np.sin, np.cos
    f1, f5 = params["phi1"], params["phi5"]
    g1, g2, g3, g4, g5 = (params[f"psi{k}"] for k in range(1, 6))

    target = c(f1) ** 2 * c(g1) ** 2 + s(f1) ** 2 * c(g2) ** 2
    denominator = c(g3) ** 2 - s(g4) ** 2
    if abs(denominator) <= 1e-15:
        raise NoSolution("phi3 is undetermined when cos psi3 = sin psi4", {"residual_min": 0.0})
    cos_sq = (target - s(g4) ** 2) / denominator
    if not 0.0 <= cos_sq <= 1.0:
        raise NoSolution("second c1 column cannot match the first", {"residual_min": float(min(abs(cos_sq), abs(cos_sq - 1)))})
    params["phi3"] = float(np.arccos(np.sqrt(cos_sq)))

    g11, g22, g12 = _b2_upper_gram(params)
    params["phi4"], params["psi6"] = _b2_lower_angles(params, g11 + g22, g11 * g22 - g12 * g12)

    g6 = params["psi6"]
    sin_sq = (target - s(f5) ** 2 * s(g5) ** 2) / c(g6) ** 2
    if not 0.0 <= sin_sq <= 1.0:
        raise NoSolution("third c1 column cannot match the first", {"residual_min": float(min(abs(sin_sq), abs(sin_sq - 1)))})
    params["phi6"] = float(np.arcsin(np.sqrt(sin_sq)))

    f6 = params["phi6"]
    p_term = c(f5) * c(f6) * s(g5) * c(g6)
    q_term = s(f5) * s(f6) * s(g5) * c(g6)
    r_term = s(g4) * c(g5) * s(g6)
    params["theta1"], params["theta2"] = solve_phase_triangle(p_term, q_term, -r_term)
    return params


def _b2_spectral_gap(basis: BasisMatrix) -> float:
    """Largest mismatch between the eigenvalue pairs of the two 2x2 Gram blocks at b2."""
    band = basis.column_blocks()["b2"]
    gram = band.conj().T @ band
    upper = np.linalg.eigvalsh(gram[:2, :2])
    lower = np.linalg.eigvalsh(gram[2:, 2:])
    return float(max(np.abs(upper - lower).max(), np.abs(gram[:2, 2:]).max()))


def construct_E8_basis(params: Mapping[str, float], tol: float | None = None) -> BasisMatrix:
    p = _require(params, E8_NAMES, "E8~")
    basis = BasisMatrix("E8~", e8_basis_matrix(p), p)
    tol = tolerance("constraint", tol)
    residual = basis.row_residual()
    if residual > tol:
        raise ConstraintViolated(f"basis rows are not orthonormal (residual {residual:.3e})", {"residual": residual})
    c1 = basis.column_blocks()["c1"]
    gram = c1.conj().T @ c1
    spread = float(np.linalg.norm(gram - np.trace(gram).real / 3 * np.eye(3), 2))
    if spread > tol:
        raise ConstraintViolated(f"c1 columns are not of equal length (residual {spread:.3e})", {"residual": spread})
    gap = _b2_spectral_gap(basis)
    if gap > tol:
        raise ConstraintViolated(f"b2 Gram blocks have different spectra (residual {gap:.3e})", {"residual": gap})
    return basis


def complete_E8(basis: BasisMatrix, scale: float = 1.0, tol: float | None = None) -> Representation:
    return complete_layout(basis, scale, tol)


def constraint_residuals(family: str, params: Mapping[str, float]) -> dict[str, float]:
    """Named residuals of every relation a parameter point of `family` has to satisfy."""
    if family == "E6~":
        a, b, d = e6_relation_terms(params)
        relation = a + b * np.exp(1j * params["theta2"]) + d * np.exp(1j * params["theta3"])
        return {"rows": BasisMatrix(family, e6_basis_matrix(params)).row_residual(), "relation": float(abs(relation))}
    if family == "E7~":
        basis = BasisMatrix(family, e7_basis_matrix(params))
        lengths = np.sum(np.abs(basis.column_blocks()["c1"]) ** 2, axis=0)
        return {"rows": basis.row_residual(), "c1_columns": float(lengths.max() - lengths.min())}
    if family == "E8~":
        basis = BasisMatrix(family, e8_basis_matrix(params))
        lengths = np.sum(np.abs(basis.column_blocks()["c1"]) ** 2, axis=0)
        return {
            "rows": basis.row_residual(),
            "c1_columns": float(lengths.max() - lengths.min()),
            "b2_spectra": _b2_spectral_gap(basis),
        }
    raise InvalidInput(f"no constraint residuals for {family}")


__all__ = [
    "LAYOUTS",
    "complete_E6",
    "complete_E7",
    "complete_E8",
    "constraint_residuals",
    "construct_E6_basis",
    "construct_E7_basis",
    "construct_E8_basis",
    "e6_character_relation",
    "solve_e6",
    "solve_e7",
    "solve_e8",
    "solve_phase_triangle",
]
