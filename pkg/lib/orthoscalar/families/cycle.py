"""A~(n): the cycle family of one-dimensional representations."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..catalog import build_catalog_quiver
from ..errors import InvalidSize, NonPositiveModulus
from ..hilbert import Representation


def _cycle_edges(n: int) -> list[tuple[str, str]]:
    return [(f"a{k}", f"a{k % n + 1}") for k in range(1, n + 1)]


def construct_A_family(
    n: int,
    moduli: Sequence[float],
    modulus_n: float,
    phase: float,
) -> Representation:
    """Edge k carries moduli[k-1] for k < n; the closing edge a_n - a_1 carries modulus_n e^{i phase}.

    Every space is one-dimensional, so each Gram sum is a scalar and the
    representation is orthoscalar for any choice of nonzero entries.
    """
    if n < 4 or n % 2:
        raise InvalidSize(f"A~(n) needs an even n >= 4, got {n}", {"graph": f"A~{n}"})
    values = [float(m) for m in moduli]
    if len(values) != n - 1:
        raise InvalidSize(f"A~{n} takes {n - 1} moduli before the closing edge, got {len(values)}", {"graph": f"A~{n}"})
    bad = [k + 1 for k, m in enumerate(values + [float(modulus_n)]) if not m > 0]
    if bad:
        raise NonPositiveModulus("cycle moduli must be positive", {"edges": bad})

    q = build_catalog_quiver("A~", n).quiver
    entries = values + [float(modulus_n) * np.exp(1j * float(phase))]
    blocks = {}
    for (u, v), entry in zip(_cycle_edges(n), entries):
        blocks[q.arrow_between(u, v)] = np.array([[entry]], dtype=complex)
    return Representation(q, {v: 1 for v in q.vertices}, blocks)


def cycle_holonomy(T: Representation) -> complex:
    """Product of the edge entries walking a1 -> a2 -> ... -> a1, conjugating edges walked against an arrow.

    A change of basis by unit phases u_v multiplies every entry by u_head
    conj(u_tail), and the walk telescopes, so this is a unitary invariant.
    """
    q = T.quiver
    if any(size != 1 for size in T.dims.values()):
        raise InvalidSize("holonomy is defined on the all-ones dimension vector", {"graph": q.name})
    n = len(q.vertices)
    product = complex(1.0)
    for u, v in _cycle_edges(n):
        arrow = q.arrow_between(u, v)
        if arrow is None:
            raise InvalidSize(f"{q.name} has no edge {u}-{v}", {"graph": q.name})
        entry = complex(T.blocks[arrow][0, 0])
        product *= entry if arrow == (v, u) else entry.conjugate()
    return product
