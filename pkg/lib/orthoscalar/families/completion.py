"""Recovering a delta-dimensional representation from its central band.

The basis D is the row band at the central vertex z, normalized so that
D D^* = I. Every arm is then filled in outward from z: at each vertex the
Gram contribution G of the block already known forces the character to be
lambda_max(G), and the block towards the next vertex must realize
chi I - G. Its rank has to match the next dimension, and at a leaf G
itself has to be scalar.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

import numpy as np
from scipy.linalg import eigh

from ..catalog import EVEN, Quiver, build_catalog_quiver
from ..config import tolerance
from ..errors import CompletionInfeasible, InvalidRepresentation
from ..hilbert import Representation, orthoscalarity_report


CENTER = "z"

# basis column order and the arms walked outward from z
LAYOUTS: dict[str, dict[str, Any]] = {
    "E6~": {
        "columns": ("a2", "b2", "c2"),
        "arms": (("z", "a2", "a1"), ("z", "b2", "b1"), ("z", "c2", "c1")),
    },
    "E7~": {
        "columns": ("a3", "c1", "b3"),
        "arms": (("z", "a3", "a2", "a1"), ("z", "b3", "b2", "b1"), ("z", "c1")),
    },
    "E8~": {
        "columns": ("a5", "c1", "b2"),
        "arms": (("z", "a5", "a4", "a3", "a2", "a1"), ("z", "b2", "b1"), ("z", "c1")),
    },
}


@dataclass(frozen=True, eq=False)
class BasisMatrix:
    family: str
    D: np.ndarray
    params: dict[str, float] = field(default_factory=dict)

    @property
    def quiver(self) -> Quiver:
        return build_catalog_quiver(self.family).quiver

    def column_blocks(self) -> dict[str, np.ndarray]:
        entry = build_catalog_quiver(self.family)
        dims = entry.delta_map()
        blocks: dict[str, np.ndarray] = {}
        offset = 0
        for vertex in LAYOUTS[self.family]["columns"]:
            blocks[vertex] = self.D[:, offset:offset + dims[vertex]]
            offset += dims[vertex]
        return blocks

    def row_residual(self) -> float:
        rows = self.D.shape[0]
        return float(np.linalg.norm(self.D @ self.D.conj().T - np.eye(rows), 2))

    def to_dict(self) -> dict[str, Any]:
        return {
            "family": self.family,
            "D": [[[float(v.real), float(v.imag)] for v in row] for row in self.D],
            "params": dict(self.params),
        }


def solve_completion_quadratic(s: float, t: float) -> tuple[float, float]:
    """Roots of z^2 - s z - t = 0 as (b01, |b02|); t > 0 gives one root of each sign."""
    if t <= 0:
        raise CompletionInfeasible(f"quadratic needs t > 0, got {t:.6g}", {"s": s, "t": t})
    positive = (s + np.sqrt(s * s + 4.0 * t)) / 2.0
    negative = -t / positive
    return float(np.sqrt(positive)), float(np.sqrt(-negative))


def _arm_step(
    gram: np.ndarray,
    next_dim: int | None,
    vertex: str,
    tol: float,
) -> tuple[float, np.ndarray, np.ndarray]:
    """Character at `vertex` and the eigenpairs (mu, U) of chi I - G kept for the next block."""
    values, vectors = eigh((gram + gram.conj().T) / 2)
    chi = float(values[-1])
    rest = chi - values[::-1]
    basis = vectors[:, ::-1]
    scale = max(1.0, abs(chi))
    if next_dim is None:
        if float(rest.max(initial=0.0)) > tol * scale:
            raise CompletionInfeasible(
                f"leaf {vertex} has a non-scalar Gram matrix (spread {float(rest.max()):.3e})",
                {"vertex": vertex},
            )
        return chi, np.zeros(0), np.zeros((gram.shape[0], 0))

    order = np.argsort(rest)[::-1]
    kept, dropped = order[:next_dim], order[next_dim:]
    mu = rest[kept]
    if mu.size and float(mu.min()) <= tol * scale:
        raise CompletionInfeasible(f"arm collapses after {vertex}", {"vertex": vertex})
    if dropped.size and float(np.abs(rest[dropped]).max()) > tol * scale:
        raise CompletionInfeasible(
            f"top eigenvalue at {vertex} is not of the required multiplicity",
            {"vertex": vertex, "spread": float(np.abs(rest[dropped]).max())},
        )
    return chi, mu, basis[:, kept]


def complete_from_basis(
    q: Quiver,
    D: np.ndarray,
    columns: Sequence[str],
    arms: Sequence[Sequence[str]],
    dims: Mapping[str, int],
    scale: float = 1.0,
    tol: float | None = None,
) -> Representation:
    """Arm-by-arm completion from the normalized central band."""
    tol = tolerance("orthoscalar", tol)
    D = np.asarray(D, dtype=complex)
    blocks: dict[tuple[str, str], np.ndarray] = {}
    offset = 0
    for vertex in columns:
        blocks[(vertex, CENTER)] = D[:, offset:offset + dims[vertex]]
        offset += dims[vertex]
    if offset != D.shape[1] or D.shape[0] != dims[CENTER]:
        raise InvalidRepresentation(f"basis shape {D.shape} does not fit {q.name}", {"graph": q.name})

    for arm in arms:
        for position in range(1, len(arm)):
            previous, vertex = arm[position - 1], arm[position]
            following = arm[position + 1] if position + 1 < len(arm) else None
            if q.parity_of(vertex) == EVEN:
                inward = blocks[(vertex, previous)]
                gram = inward.conj().T @ inward
            else:
                inward = blocks[(previous, vertex)]
                gram = inward @ inward.conj().T
            _, mu, vectors = _arm_step(gram, dims[following] if following else None, vertex, tol)
            if following is None:
                continue
            root = np.sqrt(mu)
            if q.parity_of(vertex) == EVEN:
                blocks[(vertex, following)] = (vectors * root).conj().T
            else:
                blocks[(following, vertex)] = vectors * root

    T = Representation(q, dict(dims), blocks)
    if scale != 1.0:
        T = T.scaled(float(np.sqrt(scale)))
    return T


def complete_layout(basis: BasisMatrix, scale: float = 1.0, tol: float | None = None) -> Representation:
    entry = build_catalog_quiver(basis.family)
    layout = LAYOUTS[basis.family]
    return complete_from_basis(
        entry.quiver,
        basis.D,
        layout["columns"],
        layout["arms"],
        entry.delta_map(),
        scale,
        tol,
    )


def extract_basis(T: Representation) -> tuple[BasisMatrix, float]:
    """Normalized central band of a completed representation and the scale it was divided by."""
    family = T.quiver.name
    if family not in LAYOUTS:
        raise InvalidRepresentation(f"no basis layout for {family}", {"graph": family})
    chi_z = orthoscalarity_report(T).scalar_targets.get(CENTER, 0.0)
    if chi_z <= 0:
        raise InvalidRepresentation("central character must be positive", {"graph": family})
    band = np.hstack([T.blocks[(vertex, CENTER)] for vertex in LAYOUTS[family]["columns"]])
    return BasisMatrix(family, band / np.sqrt(chi_z)), chi_z
