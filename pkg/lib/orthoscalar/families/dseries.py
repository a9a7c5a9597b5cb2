"""D~(n): the [A|B] family with diagonal chain maps.

The chain c1 .. cm (m = n - 3) carries X_i = diag(x_i, y_i) between c_i and
c_{i+1}. The leaves a1, a2 hang off c1 through the columns of A and the
leaves b1, b2 off cm through the columns of B, where

    A = [[x0 cos phi1,  x0 sin phi1],      B = [[x cos phi2,        x sin phi2      ],
         [y0 sin phi1, -y0 cos phi1]]           [y sin phi2 e^{it}, -y cos phi2 e^{it}]]

with x = x_m, y = y_m. A A^* = diag(x0^2, y0^2) and B B^* = diag(x^2, y^2),
so every chain vertex is scalar once x_i^2 + x_{i+1}^2 = y_i^2 + y_{i+1}^2.
When cm is even (n odd) the b leaves are odd and carry the adjoints of
the columns of B.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..catalog import ODD, build_catalog_quiver
from ..config import tolerance
from ..errors import DegenerateParameters, InvalidSize, NonPositiveModulus, RecurrenceNegative
from ..hilbert import Representation


def chain_moduli(x: Sequence[float], y0: float) -> list[float]:
    """y_0 .. y_m from y_{i+1}^2 = x_{i+1}^2 + (-1)^i (x_0^2 - y_0^2)."""
    x = [float(value) for value in x]
    gap = x[0] ** 2 - float(y0) ** 2
    ys = [float(y0)]
    for i in range(len(x) - 1):
        square = x[i + 1] ** 2 + (-1) ** i * gap
        if square <= 0:
            raise RecurrenceNegative(
                f"y_{i + 1}^2 = {square:.6g} is not positive",
                {"index": i + 1, "value": float(square)},
            )
        ys.append(float(np.sqrt(square)))
    return ys


def _leaf_matrix(x: float, y: float, phi: float, phase: float = 0.0) -> np.ndarray:
    twist = np.exp(1j * phase)
    return np.array(
        [
            [x * np.cos(phi), x * np.sin(phi)],
            [y * np.sin(phi) * twist, -y * np.cos(phi) * twist],
        ],
        dtype=complex,
    )


def construct_D_family(
    n: int,
    x: Sequence[float],
    y0: float,
    phi1: float,
    phi2: float,
    theta: float,
    allow_degenerate: bool = False,
) -> Representation:
    """δ-dimensional representation of D~(n) from x_0 .. x_{n-3}, y_0, two angles and a phase."""
    if n < 4:
        raise InvalidSize(f"D~(n) needs n >= 4, got {n}", {"graph": f"D~{n}"})
    m = n - 3
    xs = [float(value) for value in x]
    if len(xs) != m + 1:
        raise InvalidSize(f"D~{n} takes x_0 .. x_{m}, got {len(xs)} values", {"graph": f"D~{n}"})
    bad = [f"x{k}" for k, value in enumerate(xs) if not value > 0]
    if not float(y0) > 0:
        bad.append("y0")
    if bad:
        raise NonPositiveModulus("chain moduli must be positive", {"parameters": bad})
    scale = max(xs[0] ** 2, float(y0) ** 2)
    if abs(xs[0] ** 2 - float(y0) ** 2) <= tolerance("constraint") * scale and not allow_degenerate:
        raise DegenerateParameters(
            "x0 = y0 forces x_i = y_i along the whole chain",
            {"x0": xs[0], "y0": float(y0)},
        )
    ys = chain_moduli(xs, y0)

    entry = build_catalog_quiver("D~", n)
    q = entry.quiver
    chain = [f"c{k}" for k in range(1, m + 1)]
    blocks: dict[tuple[str, str], np.ndarray] = {}

    A = _leaf_matrix(xs[0], ys[0], phi1)
    for k, leaf in enumerate(("a1", "a2")):
        blocks[(leaf, "c1")] = A[:, k:k + 1]

    for i in range(1, m):
        X = np.diag([xs[i], ys[i]]).astype(complex)
        here, there = chain[i - 1], chain[i]
        arrow = (there, here) if q.parity_of(here) == ODD else (here, there)
        blocks[arrow] = X

    B = _leaf_matrix(xs[m], ys[m], phi2, theta)
    last = chain[-1]
    for k, leaf in enumerate(("b1", "b2")):
        if q.parity_of(last) == ODD:
            blocks[(leaf, last)] = B[:, k:k + 1]
        else:
            blocks[(last, leaf)] = B[:, k:k + 1].conj().T

    return Representation(q, entry.delta_map(), blocks)
