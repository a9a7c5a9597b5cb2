"""Representations as complex block matrices, orthoscalarity, morphism spaces and splitting."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Mapping

import numpy as np
from scipy.linalg import block_diag, eigh, polar, qr, svd

from .catalog import ODD, Quiver, require_valid
from .config import get_setting, tolerance
from .errors import (
    InvalidRepresentation,
    NonPositiveCharacter,
    NotOrthoscalar,
    NumericalFailure,
    ZeroRepresentation,
)
from .roots import GVector


Arrow = tuple[str, str]


class Category(str, Enum):
    REP_Q = "RepQ"
    REP_QH = "RepQH"


@dataclass(frozen=True)
class Character:
    values: dict[str, float]
    support: frozenset[str]

    def __getitem__(self, vertex: str) -> float:
        return self.values[vertex]

    def on_support(self) -> dict[str, float]:
        return {v: value for v, value in self.values.items() if v in self.support}

    def to_dict(self) -> dict[str, float]:
        return {v: float(value) for v, value in self.values.items()}

    @classmethod
    def from_values(
        cls,
        q: Quiver,
        values: Mapping[str, float],
        support: set[str] | frozenset[str] | None = None,
        default: float | None = None,
    ) -> Character:
        fill = float(get_setting("characters", "off_support_default") if default is None else default)
        full = {v: float(values.get(v, fill)) for v in q.vertices}
        return cls(full, frozenset(values) if support is None else frozenset(support))


@dataclass(frozen=True, eq=False)
class Representation:
    """One complex block per arrow; T_{ij}: T(j) -> T(i) has shape dims[head] x dims[tail]."""

    quiver: Quiver
    dims: dict[str, int]
    blocks: dict[Arrow, np.ndarray] = field(default_factory=dict)

    def __post_init__(self) -> None:
        q = require_valid(self.quiver)
        if set(self.dims) != set(q.vertices):
            raise InvalidRepresentation("dims must name every vertex exactly once", {"graph": q.name})
        dims = {}
        for v in q.vertices:
            value = self.dims[v]
            if int(value) != value or value < 0:
                raise InvalidRepresentation(f"dimension at {v} must be a nonnegative integer", {"value": value})
            dims[v] = int(value)

        unknown = set(self.blocks) - q.arrow_set
        if unknown:
            raise InvalidRepresentation(f"blocks on non-arrows {sorted(unknown)}", {"graph": q.name})
        blocks: dict[Arrow, np.ndarray] = {}
        for tail, head in q.arrows:
            shape = (dims[head], dims[tail])
            if (tail, head) in self.blocks:
                block = np.array(self.blocks[(tail, head)], dtype=complex)
                if block.size == 0 and 0 in shape:
                    block = block.reshape(shape)
                if block.shape != shape:
                    raise InvalidRepresentation(
                        f"block {tail}->{head} has shape {block.shape}, expected {shape}",
                        {"graph": q.name},
                    )
            else:
                block = np.zeros(shape, dtype=complex)
            block.setflags(write=False)
            blocks[(tail, head)] = block
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "blocks", blocks)

    def block(self, tail: str, head: str) -> np.ndarray:
        return self.blocks[(tail, head)]

    @property
    def dim_vector(self) -> GVector:
        return tuple(self.dims[v] for v in self.quiver.vertices)

    @property
    def support(self) -> frozenset[str]:
        return frozenset(v for v, value in self.dims.items() if value > 0)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def is_faithful(self) -> bool:
        return all(value > 0 for value in self.dims.values())

    def row_band(self, i: str) -> np.ndarray:
        """[T_{i,j1} | T_{i,j2} | ...] over the even neighbors of odd vertex i."""
        q = self.quiver
        parts = [self.blocks[(j, i)] for j in q.neighbors[i]]
        if not parts:
            return np.zeros((self.dims[i], 0), dtype=complex)
        return np.hstack(parts)

    def column_band(self, j: str) -> np.ndarray:
        """T_{i1,j} stacked over T_{i2,j} ... over the odd neighbors of even vertex j."""
        q = self.quiver
        parts = [self.blocks[(j, i)] for i in q.neighbors[j]]
        if not parts:
            return np.zeros((0, self.dims[j]), dtype=complex)
        return np.vstack(parts)

    def scaled(self, factor: float) -> Representation:
        return Representation(self.quiver, self.dims, {a: factor * b for a, b in self.blocks.items()})


@dataclass(frozen=True, eq=False)
class Morphism:
    """Block-diagonal pair: A on odd vertices, B on even vertices."""

    A: dict[str, np.ndarray]
    B: dict[str, np.ndarray]

    def at(self, vertex: str) -> np.ndarray:
        return self.A[vertex] if vertex in self.A else self.B[vertex]

    def adjoint(self) -> Morphism:
        return Morphism(
            {v: m.conj().T for v, m in self.A.items()},
            {v: m.conj().T for v, m in self.B.items()},
        )

    def combine(self, other: Morphism, a: complex = 1.0, b: complex = 1.0) -> Morphism:
        return Morphism(
            {v: a * self.A[v] + b * other.A[v] for v in self.A},
            {v: a * self.B[v] + b * other.B[v] for v in self.B},
        )


@dataclass(frozen=True)
class OrthoReport:
    character: Character
    defect: float
    scalar_targets: dict[str, float]
    residuals: dict[str, float]

    def to_dict(self) -> dict[str, Any]:
        return {
            "defect": self.defect,
            "character": self.character.to_dict(),
            "scalar_targets": self.scalar_targets,
            "residuals": self.residuals,
        }


@dataclass(frozen=True)
class EquivalenceResult:
    equivalent: bool
    witness: Morphism | None = None
    diagnostic: str = ""

    def __bool__(self) -> bool:
        return self.equivalent


def assemble_block_matrix(T: Representation) -> np.ndarray:
    q = T.quiver
    row_offsets: dict[str, int] = {}
    total = 0
    for i in q.odd_vertices:
        row_offsets[i] = total
        total += T.dims[i]
    col_offsets: dict[str, int] = {}
    width = 0
    for j in q.even_vertices:
        col_offsets[j] = width
        width += T.dims[j]
    matrix = np.zeros((total, width), dtype=complex)
    for (j, i), block in T.blocks.items():
        r, c = row_offsets[i], col_offsets[j]
        matrix[r:r + T.dims[i], c:c + T.dims[j]] = block
    return matrix


def split_block_matrix(q: Quiver, dims: Mapping[str, int], matrix: np.ndarray) -> Representation:
    """Inverse of assemble_block_matrix on the arrow positions of `q`."""
    rows = {i: sum(dims[u] for u in q.odd_vertices[:k]) for k, i in enumerate(q.odd_vertices)}
    cols = {j: sum(dims[u] for u in q.even_vertices[:k]) for k, j in enumerate(q.even_vertices)}
    matrix = np.asarray(matrix, dtype=complex)
    blocks = {
        (j, i): matrix[rows[i]:rows[i] + dims[i], cols[j]:cols[j] + dims[j]]
        for j, i in q.arrows
    }
    return Representation(q, dict(dims), blocks)


def gram_at(T: Representation, vertex: str) -> np.ndarray:
    if T.quiver.parity_of(vertex) == ODD:
        band = T.row_band(vertex)
        return band @ band.conj().T
    band = T.column_band(vertex)
    return band.conj().T @ band


def orthoscalarity_report(T: Representation) -> OrthoReport:
    targets: dict[str, float] = {}
    residuals: dict[str, float] = {}
    for vertex in T.quiver.vertices:
        size = T.dims[vertex]
        if size == 0:
            continue
        gram = gram_at(T, vertex)
        chi = float(np.trace(gram).real) / size
        targets[vertex] = chi
        residuals[vertex] = float(np.linalg.norm(gram - chi * np.eye(size), 2))
    defect = max(residuals.values(), default=0.0)
    character = Character.from_values(T.quiver, targets, support=T.support)
    return OrthoReport(character, defect, targets, residuals)


def is_orthoscalar(T: Representation, tol: float | None = None) -> tuple[bool, Character]:
    report = orthoscalarity_report(T)
    return report.defect <= tolerance("orthoscalar", tol), report.character


def simple_rep(
    q: Quiver,
    g: str,
    off_support_char: Mapping[str, float] | float | None = None,
) -> tuple[Representation, Character]:
    if g not in q.index:
        raise InvalidRepresentation(f"unknown vertex '{g}'", {"graph": q.name})
    if off_support_char is None:
        off_support_char = float(get_setting("characters", "off_support_default"))
    if isinstance(off_support_char, Mapping):
        values = {v: float(off_support_char[v]) for v in q.vertices if v != g}
    else:
        values = {v: float(off_support_char) for v in q.vertices if v != g}
    bad = sorted(v for v, value in values.items() if value <= 0)
    if bad:
        raise NonPositiveCharacter("off-support character values must be positive", {"vertices": bad})
    values[g] = 0.0
    dims = {v: int(v == g) for v in q.vertices}
    return Representation(q, dims), Character.from_values(q, values, support={g})


def direct_sum(T: Representation, S: Representation) -> Representation:
    if T.quiver != S.quiver:
        raise InvalidRepresentation("direct sum needs a common quiver")
    dims = {v: T.dims[v] + S.dims[v] for v in T.quiver.vertices}
    blocks = {arrow: block_diag(T.blocks[arrow], S.blocks[arrow]) for arrow in T.quiver.arrows}
    return Representation(T.quiver, dims, blocks)


def conjugate(T: Representation, U: Morphism) -> Representation:
    """The representation U_i T_{ij} U_j^* that U intertwines T with."""
    blocks = {(j, i): U.A[i] @ block @ U.B[j].conj().T for (j, i), block in T.blocks.items()}
    return Representation(T.quiver, T.dims, blocks)


def random_unitary(size: int, rng: np.random.Generator) -> np.ndarray:
    if size == 0:
        return np.zeros((0, 0), dtype=complex)
    z = (rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size))) / np.sqrt(2.0)
    unitary, upper = qr(z)
    phases = np.diag(upper) / np.abs(np.diag(upper))
    return unitary * phases


def random_unitary_pair(q: Quiver, dims: Mapping[str, int], rng: np.random.Generator) -> Morphism:
    return Morphism(
        {i: random_unitary(dims[i], rng) for i in q.odd_vertices},
        {j: random_unitary(dims[j], rng) for j in q.even_vertices},
    )


def _nullspace(system: np.ndarray, tol: float) -> np.ndarray:
    rows, cols = system.shape
    if cols == 0:
        return np.zeros((0, 0), dtype=complex)
    if rows == 0 or not np.any(system):
        return np.eye(cols, dtype=complex)
    _, singular, vh = svd(system, full_matrices=True)
    cutoff = tol * singular[0] * max(rows, cols)
    rank = int((singular > cutoff).sum())
    return vh[rank:].conj().T


def _slots(T: Representation, S: Representation) -> tuple[dict[str, tuple[int, int]], int]:
    offsets: dict[str, tuple[int, int]] = {}
    total = 0
    for v in T.quiver.block_order:
        size = S.dims[v] * T.dims[v]
        offsets[v] = (total, size)
        total += size
    return offsets, total


def _intertwining_system(T: Representation, S: Representation, category: Category) -> tuple[np.ndarray, dict]:
    """Column-major vec of A_i T_ij - S_ij B_j (and B_j T_ij^* - S_ij^* A_i for RepQH)."""
    q = T.quiver
    slots, total = _slots(T, S)
    equations: list[np.ndarray] = []
    for j, i in q.arrows:
        t_block, s_block = T.blocks[(j, i)], S.blocks[(j, i)]
        a_start, a_size = slots[i]
        b_start, b_size = slots[j]

        forward = np.zeros((S.dims[i] * T.dims[j], total), dtype=complex)
        forward[:, a_start:a_start + a_size] = np.kron(t_block.T, np.eye(S.dims[i]))
        forward[:, b_start:b_start + b_size] -= np.kron(np.eye(T.dims[j]), s_block)
        equations.append(forward)

        if category is Category.REP_QH:
            backward = np.zeros((S.dims[j] * T.dims[i], total), dtype=complex)
            backward[:, b_start:b_start + b_size] = np.kron(t_block.conj(), np.eye(S.dims[j]))
            backward[:, a_start:a_start + a_size] -= np.kron(np.eye(T.dims[i]), s_block.conj().T)
            equations.append(backward)
    system = np.vstack(equations) if equations else np.zeros((0, total), dtype=complex)
    return system, slots


def _unpack(T: Representation, S: Representation, vector: np.ndarray, slots: dict) -> Morphism:
    q = T.quiver
    parts: dict[str, np.ndarray] = {}
    for v, (start, size) in slots.items():
        parts[v] = vector[start:start + size].reshape((S.dims[v], T.dims[v]), order="F")
    return Morphism({i: parts[i] for i in q.odd_vertices}, {j: parts[j] for j in q.even_vertices})


def morphism_space_basis(
    T: Representation,
    S: Representation,
    category: Category | str = Category.REP_Q,
    tol: float | None = None,
) -> list[Morphism]:
    if T.quiver != S.quiver:
        raise InvalidRepresentation("morphisms need a common quiver")
    category = Category(category)
    system, slots = _intertwining_system(T, S, category)
    kernel = _nullspace(system, tolerance("rank", tol))
    return [_unpack(T, S, kernel[:, k], slots) for k in range(kernel.shape[1])]


def morphism_space_dim(
    T: Representation,
    S: Representation,
    category: Category | str = Category.REP_Q,
    tol: float | None = None,
) -> int:
    return len(morphism_space_basis(T, S, category, tol))


def morphism_residual(
    T: Representation,
    S: Representation,
    C: Morphism,
    category: Category | str = Category.REP_Q,
) -> float:
    residual = 0.0
    for (j, i), block in T.blocks.items():
        gap = C.A[i] @ block - S.blocks[(j, i)] @ C.B[j]
        residual = max(residual, float(np.linalg.norm(gap))) if gap.size else residual
    if Category(category) is Category.REP_QH:
        residual = max(residual, adjoint_closure_residual(T, S, C))
    return residual


def adjoint_closure_residual(T: Representation, S: Representation, C: Morphism) -> float:
    residual = 0.0
    for (j, i), block in T.blocks.items():
        gap = C.B[j] @ block.conj().T - S.blocks[(j, i)].conj().T @ C.A[i]
        if gap.size:
            residual = max(residual, float(np.linalg.norm(gap)))
    return residual


def is_schur(T: Representation, tol: float | None = None) -> bool:
    if T.total_dim == 0:
        raise ZeroRepresentation("the zero representation has no Schur property", {"graph": T.quiver.name})
    return morphism_space_dim(T, T, Category.REP_Q, tol) == 1


def linear_combination(elements: list[Morphism], coefficients) -> Morphism:
    first = elements[0]
    return Morphism(
        {v: sum(c * e.A[v] for c, e in zip(coefficients, elements)) for v in first.A},
        {v: sum(c * e.B[v] for c, e in zip(coefficients, elements)) for v in first.B},
    )


def hermitian_parts(elements: list[Morphism]) -> list[Morphism]:
    """C + C* and i(C - C*) for every C; they span the self-adjoint part of a *-closed space."""
    parts: list[Morphism] = []
    for element in elements:
        star = element.adjoint()
        parts.append(element.combine(star, 1.0, 1.0))
        parts.append(element.combine(star, 1j, -1j))
    return parts


def _characters_close(left: Character, right: Character, tol: float) -> bool:
    for v in left.support:
        if abs(left[v] - right[v]) > tol * max(1.0, abs(left[v])):
            return False
    return True


def unitary_equivalent(
    T: Representation,
    S: Representation,
    tol: float | None = None,
    seed: int = 0,
    attempts: int = 8,
) -> EquivalenceResult:
    """Look for unitary (U, V) with U T = S V through the polar part of an invertible RepQH morphism."""
    tol = tolerance("equivalence", tol)
    if T.quiver != S.quiver:
        return EquivalenceResult(False, diagnostic="different quivers")
    if T.dims != S.dims:
        return EquivalenceResult(False, diagnostic="dimension vectors differ")
    if T.total_dim == 0:
        empty = {v: np.zeros((0, 0), dtype=complex) for v in T.quiver.vertices}
        return EquivalenceResult(True, witness=Morphism(
            {i: empty[i] for i in T.quiver.odd_vertices},
            {j: empty[j] for j in T.quiver.even_vertices},
        ))

    left, right = orthoscalarity_report(T), orthoscalarity_report(S)
    if left.defect <= tol and right.defect <= tol and not _characters_close(left.character, right.character, tol):
        return EquivalenceResult(False, diagnostic="characters differ")

    basis = morphism_space_basis(T, S, Category.REP_QH)
    if not basis:
        return EquivalenceResult(False, diagnostic="no morphisms in the Hilbert category")

    rng = np.random.default_rng(seed)
    scale = max((float(np.linalg.norm(b)) for b in T.blocks.values() if b.size), default=1.0)
    diagnostic = "morphism space has no invertible element within tolerance"
    for _ in range(attempts):
        coefficients = rng.standard_normal(len(basis)) + 1j * rng.standard_normal(len(basis))
        candidate = linear_combination(basis, coefficients)
        blocks = {v: candidate.at(v) for v in T.quiver.vertices if T.dims[v] > 0}
        spectra = {v: svd(m, compute_uv=False) for v, m in blocks.items()}
        largest = max(values[0] for values in spectra.values())
        if any(values[-1] <= tol * largest for values in spectra.values()):
            continue
        unitary = {v: polar(m)[0] for v, m in blocks.items()}
        unitary.update({v: np.zeros((0, 0), dtype=complex) for v in T.quiver.vertices if T.dims[v] == 0})
        witness = Morphism(
            {i: unitary[i] for i in T.quiver.odd_vertices},
            {j: unitary[j] for j in T.quiver.even_vertices},
        )
        if morphism_residual(T, S, witness) <= tol * max(1.0, scale):
            return EquivalenceResult(True, witness=witness)
        diagnostic = "polar witness fails the intertwining check"
    return EquivalenceResult(False, diagnostic=diagnostic)


def _compress(T: Representation, frames: Mapping[str, np.ndarray]) -> Representation:
    dims = {v: frames[v].shape[1] for v in T.quiver.vertices}
    blocks = {(j, i): frames[i].conj().T @ block @ frames[j] for (j, i), block in T.blocks.items()}
    return Representation(T.quiver, dims, blocks)


def split_decomposition(
    T: Representation,
    tol: float | None = None,
    seed: int = 0,
    attempts: int = 6,
) -> list[Representation]:
    """Split along a spectral projection of a self-adjoint endomorphism until every piece is Schur."""
    ok, _ = is_orthoscalar(T, tol)
    if not ok:
        raise NotOrthoscalar("decomposition needs an orthoscalar representation", {"graph": T.quiver.name})
    if is_schur(T, tol):
        return [T]

    hermitian = hermitian_parts(morphism_space_basis(T, T, Category.REP_QH))

    rng = np.random.default_rng(seed)
    cluster = tolerance("cluster")
    support = [v for v in T.quiver.vertices if T.dims[v] > 0]
    for _ in range(attempts):
        weights = rng.standard_normal(len(hermitian))
        spectra: dict[str, tuple[np.ndarray, np.ndarray]] = {}
        for v in support:
            matrix = sum(w * h.at(v) for w, h in zip(weights, hermitian))
            matrix = (matrix + matrix.conj().T) / 2
            spectra[v] = eigh(matrix)
        eigenvalues = np.sort(np.concatenate([values for values, _ in spectra.values()]))
        gaps = np.diff(eigenvalues)
        if gaps.size == 0:
            break
        position = int(np.argmax(gaps))
        spread = max(1.0, float(eigenvalues[-1] - eigenvalues[0]))
        if gaps[position] <= cluster * spread:
            continue
        threshold = (eigenvalues[position] + eigenvalues[position + 1]) / 2
        upper: dict[str, np.ndarray] = {}
        lower: dict[str, np.ndarray] = {}
        for v in T.quiver.vertices:
            if v not in spectra:
                upper[v] = lower[v] = np.zeros((0, 0), dtype=complex)
                continue
            values, vectors = spectra[v]
            upper[v] = vectors[:, values > threshold]
            lower[v] = vectors[:, values <= threshold]
        pieces = [_compress(T, upper), _compress(T, lower)]
        summands: list[Representation] = []
        for piece in pieces:
            summands.extend(split_decomposition(piece, tol, seed, attempts))
        return summands
    raise NumericalFailure("no spectral gap above the clustering tolerance", {"graph": T.quiver.name})
