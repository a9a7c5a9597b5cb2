"""Coxeter reflection functors on orthoscalar representations and the real-root constructor."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping, Sequence

import numpy as np
from scipy.linalg import qr

from .catalog import EVEN, PARITIES, Quiver, support_subquiver
from .config import get_setting, tolerance
from .errors import (
    CharacterNonpositive,
    FunctorNotApplicable,
    InvalidInput,
    NonPositiveCharacter,
    NotApplicable,
    NotOrthoscalar,
    NotRealRoot,
    OrthoscalarError,
    PathFailure,
)
from .hilbert import Character, Representation, orthoscalarity_report, simple_rep
from .roots import (
    GVector,
    RootTag,
    as_gvector,
    classify_vector,
    coxeter_sweep,
    faithful_reduction_path,
    opposite,
    singular_reduction_path,
)


@dataclass(frozen=True)
class FunctorStep:
    parity: str
    input_character: Character
    output_character: Character
    input_dims: GVector
    output_dims: GVector
    defect: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "parity": self.parity,
            "input_dims": list(self.input_dims),
            "output_dims": list(self.output_dims),
            "input_character": self.input_character.to_dict(),
            "output_character": self.output_character.to_dict(),
            "defect": self.defect,
        }


def _check_parity(parity: str) -> str:
    if parity not in PARITIES:
        raise InvalidInput(f"parity must be 'even' or 'odd', got {parity!r}")
    return parity


def predict_character(q: Quiver, chi: Character, dims: Mapping[str, int], parity: str) -> Character:
    """Reflected vertices keep their value; support vertices of the other parity get sum(neighbors) - own."""
    _check_parity(parity)
    values = dict(chi.values)
    for v in q.vertices_of(opposite(parity)):
        if dims[v] > 0:
            values[v] = sum(chi[u] for u in q.neighbors[v]) - chi[v]
    new_dims = dict(zip(q.vertices, coxeter_sweep(q, parity, [dims[v] for v in q.vertices])))
    support = {v for v, size in new_dims.items() if size > 0}
    return Character(values, frozenset(support))


def _complement(columns: np.ndarray, rank: int) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of the column span, first nonzero entries real positive."""
    rows = columns.shape[0]
    if rows == 0:
        return np.zeros((0, 0), dtype=complex)
    if columns.shape[1] == 0:
        return np.eye(rows, dtype=complex)
    unitary, _ = qr(columns, mode="full")
    basis = np.array(unitary[:, rank:], dtype=complex)
    for k in range(basis.shape[1]):
        column = basis[:, k]
        lead = np.flatnonzero(np.abs(column) > 1e-12)
        if lead.size:
            pivot = column[lead[0]]
            basis[:, k] = column * (abs(pivot) / pivot)
    return basis


def _image_rank(band: np.ndarray, expected: int, scale: float) -> int:
    if band.size == 0:
        return 0
    singular = np.linalg.svd(band, compute_uv=False)
    rank = int((singular > 1e-9 * max(1.0, scale)).sum())
    if rank != expected:
        raise FunctorNotApplicable(
            f"band has rank {rank}, expected {expected}; the representation has a simple summand at the reflected vertex"
        )
    return rank


def _reflect(T: Representation, chi: Character, parity: str, tol: float) -> tuple[Representation, Character, FunctorStep]:
    q = T.quiver
    _check_parity(parity)
    report = orthoscalarity_report(T)
    scale = max([1.0] + [abs(value) for value in report.scalar_targets.values()])
    if report.defect > tol * scale:
        raise NotOrthoscalar(f"input defect {report.defect:.3e} exceeds tolerance", {"graph": q.name})

    values = {v: float(chi[v]) for v in q.vertices}
    values.update(report.scalar_targets)
    current = Character(values, T.support)

    old_dims = T.dim_vector
    new_vector = coxeter_sweep(q, parity, old_dims)
    if any(size < 0 for size in new_vector):
        negative = [v for v, size in zip(q.vertices, new_vector) if size < 0]
        raise FunctorNotApplicable("reflected dimension would be negative", {"vertices": negative, "parity": parity})
    new_dims = dict(zip(q.vertices, new_vector))

    reflected = q.vertices_of(parity)
    for v in reflected:
        if new_dims[v] > 0 and current[v] <= 0:
            raise CharacterNonpositive(
                f"character {current[v]:.6g} at {v} with new dimension {new_dims[v]}",
                {"vertex": v, "parity": parity},
            )
    predicted = predict_character(q, current, T.dims, parity)
    for v in q.vertices_of(opposite(parity)):
        if T.dims[v] > 0 and predicted[v] < -tol * scale:
            raise CharacterNonpositive(
                f"new character {predicted[v]:.6g} at support vertex {v} is negative",
                {"vertex": v, "parity": parity},
            )

    blocks: dict[tuple[str, str], np.ndarray] = {}
    for v in reflected:
        neighbors = q.neighbors[v]
        factor = np.sqrt(current[v]) if new_dims[v] > 0 else 0.0
        if parity == EVEN:
            band = T.column_band(v)
            rank = _image_rank(band, T.dims[v], scale)
            kernel = _complement(band, rank)
            offset = 0
            for i in neighbors:
                blocks[(v, i)] = factor * kernel[offset:offset + T.dims[i], :]
                offset += T.dims[i]
        else:
            band = T.row_band(v).conj().T
            rank = _image_rank(band, T.dims[v], scale)
            kernel = _complement(band, rank)
            offset = 0
            for j in neighbors:
                blocks[(j, v)] = factor * kernel[offset:offset + T.dims[j], :].conj().T
                offset += T.dims[j]

    result = Representation(q, new_dims, blocks)
    out_report = orthoscalarity_report(result)
    out_scale = max([1.0] + [abs(value) for value in out_report.scalar_targets.values()])
    if out_report.defect > tol * out_scale:
        raise NotOrthoscalar(f"functor output defect {out_report.defect:.3e}", {"parity": parity})
    for v, value in out_report.scalar_targets.items():
        if abs(value - predicted[v]) > tol * out_scale:
            raise NotOrthoscalar(
                f"character at {v} is {value:.12g}, expected {predicted[v]:.12g}",
                {"parity": parity},
            )

    step = FunctorStep(parity, current, predicted, old_dims, result.dim_vector, out_report.defect)
    return result, predicted, step


def apply_reflection_functor(
    T: Representation,
    chi: Character,
    parity: str,
    tol: float | None = None,
) -> tuple[Representation, Character]:
    """Even functor reflects even vertices through the complement of each column band; odd uses row-band kernels."""
    result, character, _ = _reflect(T, chi, parity, tolerance("orthoscalar", tol))
    return result, character


def functor_trajectory(
    T: Representation,
    chi: Character,
    parities: Sequence[str],
    tol: float | None = None,
) -> tuple[Representation, Character, list[FunctorStep]]:
    tol = tolerance("orthoscalar", tol)
    steps: list[FunctorStep] = []
    for index, parity in enumerate(parities):
        try:
            T, chi, step = _reflect(T, chi, parity, tol)
        except OrthoscalarError as exc:
            exc.context.setdefault("step", index)
            raise
        steps.append(step)
    return T, chi, steps


def functor_chain(
    T: Representation,
    chi: Character,
    start_parity: str,
    k: int,
    tol: float | None = None,
) -> tuple[Representation, Character]:
    """k alternating functors, the first one applied having `start_parity`."""
    if k < 1:
        raise InvalidInput(f"k must be positive, got {k}")
    parities = [start_parity if n % 2 == 0 else opposite(start_parity) for n in range(k)]
    result, character, _ = functor_trajectory(T, chi, parities, tol)
    return result, character


def _seed_values(q: Quiver, chi_seed: Mapping[str, float] | float | None) -> dict[str, float]:
    if chi_seed is None:
        chi_seed = float(get_setting("characters", "off_support_default"))
    if isinstance(chi_seed, Mapping):
        values = {v: float(chi_seed.get(v, get_setting("characters", "off_support_default"))) for v in q.vertices}
    else:
        values = {v: float(chi_seed) for v in q.vertices}
    bad = sorted(v for v, value in values.items() if value <= 0)
    if bad:
        raise NonPositiveCharacter("seed characters must be positive", {"vertices": bad})
    return values


def _embed(q: Quiver, T: Representation, chi: Character, seeds: Mapping[str, float]) -> tuple[Representation, Character]:
    """Extend a representation of an induced subquiver by zero spaces."""
    dims = {v: T.dims.get(v, 0) for v in q.vertices}
    blocks = {arrow: block for arrow, block in T.blocks.items()}
    values = {v: (chi[v] if v in chi.values else seeds[v]) for v in q.vertices}
    return Representation(q, dims, blocks), Character(values, chi.support)


def construct_real_root_rep(
    q: Quiver,
    d: Mapping[str, int] | Sequence[int],
    chi_seed: Mapping[str, float] | float | None = None,
    tol: float | None = None,
) -> tuple[Representation, Character]:
    """Orthoscalar Schur representation of dimension d, built from a simple representation by functors."""
    vec = as_gvector(q, d)
    root_class = classify_vector(q, vec)
    if not root_class.is_real:
        raise NotRealRoot(f"{list(vec)} is {root_class.tag.value}", {"vector": list(vec), "graph": q.name})
    seeds = _seed_values(q, chi_seed)

    if root_class.tag is RootTag.REAL_SINGULAR:
        path = singular_reduction_path(q, vec)
        g = q.vertices[path.terminal.index(1)]
        start, start_chi = simple_rep(q, g, {v: seeds[v] for v in q.vertices if v != g})
        T, chi, _ = functor_trajectory(start, start_chi, list(reversed(path.steps)), tol)
        return T, chi

    support = [v for v, size in zip(q.vertices, vec) if size > 0]
    if len(support) < len(q.vertices):
        sub = support_subquiver(q, support)
        sub_vec = [size for size in vec if size > 0]
        inner, inner_chi = construct_real_root_rep(sub, sub_vec, {v: seeds[v] for v in support}, tol)
        return _embed(q, inner, inner_chi, seeds)

    try:
        path = faithful_reduction_path(q, vec)
    except NotApplicable as exc:
        raise PathFailure(f"no reduction of {list(vec)} to a non-faithful root: {exc.detail}", {"graph": q.name}) from exc
    base, base_chi = construct_real_root_rep(q, path.terminal, seeds, tol)
    T, chi, _ = functor_trajectory(base, base_chi, list(reversed(path.steps)), tol)
    return T, chi
