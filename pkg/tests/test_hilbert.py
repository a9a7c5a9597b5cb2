#!/usr/bin/env python3
"""Representations: block layout, orthoscalarity, morphism spaces, equivalence and splitting."""

from __future__ import annotations

import os
import sys
import tempfile
from pathlib import Path

import numpy as np


ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "lib"))
os.environ.setdefault("ORTHOSCALAR_HOME", tempfile.mkdtemp(prefix="orthoscalar-test-"))

from orthoscalar.catalog import build_catalog_quiver  # noqa: E402
from orthoscalar.errors import (  # noqa: E402
    InvalidRepresentation,
    NonPositiveCharacter,
    NotOrthoscalar,
    NumericalFailure,
    ZeroRepresentation,
)
from orthoscalar.families import construct_A_family, construct_D_family  # noqa: E402
from orthoscalar.hilbert import (  # noqa: E402
    Category,
    Representation,
    adjoint_closure_residual,
    assemble_block_matrix,
    conjugate,
    direct_sum,
    hermitian_parts,
    is_orthoscalar,
    is_schur,
    morphism_residual,
    morphism_space_basis,
    morphism_space_dim,
    orthoscalarity_report,
    random_unitary_pair,
    simple_rep,
    split_block_matrix,
    split_decomposition,
    unitary_equivalent,
)


def require(condition: bool, message: str) -> None:
    if not condition:
        raise AssertionError(message)


def expect_error(error_type: type[Exception], func, *args) -> Exception:
    try:
        func(*args)
    except error_type as exc:
        return exc
    raise AssertionError(f"expected {error_type.__name__} from {func.__name__}")


def d4_sample(theta: float = np.pi / 3) -> Representation:
    return construct_D_family(4, [1.0, 2.0], 2.0, np.pi / 4, np.pi / 4, theta)


def skewed_d4() -> Representation:
    q = build_catalog_quiver("D~4").quiver
    dims = {"a1": 1, "a2": 1, "b1": 1, "b2": 1, "c1": 2}
    leaves = {"a1": [[1], [0]], "a2": [[1], [1]], "b1": [[0], [1]], "b2": [[0], [1]]}
    return Representation(q, dims, {(leaf, "c1"): np.array(block) for leaf, block in leaves.items()})


def test_representation_validation() -> None:
    q = build_catalog_quiver("D~4").quiver
    dims = {"a1": 1, "a2": 1, "b1": 1, "b2": 1, "c1": 2}
    expect_error(InvalidRepresentation, Representation, q, dims, {("a1", "c1"): np.ones((1, 2))})
    expect_error(InvalidRepresentation, Representation, q, dims, {("c1", "a1"): np.ones((1, 2))})
    expect_error(InvalidRepresentation, Representation, q, {"a1": 1}, {})
    expect_error(InvalidRepresentation, Representation, q, {**dims, "c1": -1}, {})
    zero = Representation(q, {v: 0 for v in q.vertices})
    require(assemble_block_matrix(zero).shape == (0, 0), "empty representation assembles to 0x0")
    require(zero.support == frozenset(), "empty support")
    require(not zero.is_faithful() and d4_sample().is_faithful(), "faithful means every dimension is positive")


def test_block_matrix_layout() -> None:
    T = d4_sample()
    matrix = assemble_block_matrix(T)
    require(matrix.shape == (2, 4), f"D~4 delta block matrix has shape {matrix.shape}")
    require(np.allclose(matrix[:, 0:1], T.block("a1", "c1")), "first column band is a1")
    rebuilt = split_block_matrix(T.quiver, T.dims, matrix)
    require(all(np.array_equal(rebuilt.blocks[a], T.blocks[a]) for a in T.quiver.arrows), "split inverts assemble")
    simple, _ = simple_rep(T.quiver, "a1")
    require(assemble_block_matrix(simple).shape == (0, 1), "simple at an even vertex is one empty column")


def test_orthoscalarity_examples() -> None:
    cycle = construct_A_family(4, [1, 1, 1], 1, 0.7)
    report = orthoscalarity_report(cycle)
    require(report.defect <= 1e-12, f"cycle defect {report.defect}")
    require(all(abs(value - 2.0) <= 1e-12 for value in report.scalar_targets.values()), f"{report.scalar_targets}")

    skewed = skewed_d4()
    report = orthoscalarity_report(skewed)
    gram = skewed.row_band("c1") @ skewed.row_band("c1").conj().T
    require(np.allclose(gram, [[2, 1], [1, 3]]), f"row Gram {gram}")
    require(report.defect > 0.5, f"skewed defect {report.defect}")

    ok_cycle, chi = is_orthoscalar(cycle, 1e-9)
    ok_skewed, _ = is_orthoscalar(skewed, 1e-9)
    require(ok_cycle and not ok_skewed, "is_orthoscalar verdicts")
    require(abs(chi["a3"] - 2.0) <= 1e-12, "character value")


def test_simple_representation() -> None:
    q = build_catalog_quiver("D~4").quiver
    simple, chi = simple_rep(q, "c1", 1.0)
    require(simple.dim_vector == (0, 0, 0, 0, 1), f"dims {simple.dim_vector}")
    require(chi.to_dict() == {"a1": 1.0, "a2": 1.0, "b1": 1.0, "b2": 1.0, "c1": 0.0}, f"{chi}")
    require(orthoscalarity_report(simple).defect == 0.0, "simple rep is orthoscalar")
    require(is_schur(simple), "simple rep is Schur")
    expect_error(NonPositiveCharacter, simple_rep, q, "c1", {"a1": 0.0, "a2": 1, "b1": 1, "b2": 1})
    expect_error(ZeroRepresentation, is_schur, Representation(q, {v: 0 for v in q.vertices}))


def test_morphism_space_dimensions() -> None:
    q = build_catalog_quiver("E6~").quiver
    first, _ = simple_rep(q, "z")
    second, _ = simple_rep(q, "a1")
    require(morphism_space_dim(first, first, Category.REP_Q) == 1, "End of a simple rep")
    require(morphism_space_dim(first, second, Category.REP_Q) == 0, "Hom between different simples")

    T = d4_sample()
    require(is_schur(T), "D~4 family member is Schur")
    doubled = direct_sum(T, T)
    require(morphism_space_dim(doubled, doubled, Category.REP_Q) == 4, "End(T + T) is 2x2 matrices")
    require(morphism_space_dim(doubled, doubled, Category.REP_QH) == 4, "same in the Hilbert category")
    require(not is_schur(doubled), "T + T is not Schur")


def test_unitary_equivalence() -> None:
    rng = np.random.default_rng(5)
    T = d4_sample()
    moved = conjugate(T, random_unitary_pair(T.quiver, T.dims, rng))
    result = unitary_equivalent(T, moved)
    require(result.equivalent, f"conjugate not recognized: {result.diagnostic}")
    require(morphism_residual(T, moved, result.witness, Category.REP_QH) <= 1e-8, "witness intertwines")

    near = construct_A_family(4, [1, 1, 1], 1, 0.4)
    far = construct_A_family(4, [1, 1, 1], 1, 1.1)
    require(not unitary_equivalent(near, far), "different holonomy")
    scaled = construct_A_family(4, [2, 1, 1], 1, 0.4)
    verdict = unitary_equivalent(near, scaled)
    require(not verdict and verdict.diagnostic == "characters differ", f"{verdict.diagnostic}")
    require(not unitary_equivalent(d4_sample(np.pi / 3), d4_sample(np.pi / 6)), "theta is a modulus")


def test_split_decomposition() -> None:
    T = d4_sample()
    require(len(split_decomposition(T)) == 1, "Schur rep stays whole")

    near = construct_A_family(4, [1, 1, 1], 1, 0.4)
    far = construct_A_family(4, [1, 1, 1], 1, 1.1)
    pieces = split_decomposition(direct_sum(near, far), seed=3)
    require(len(pieces) == 2, f"{len(pieces)} summands")
    for piece in pieces:
        require(is_orthoscalar(piece)[0], "summands are orthoscalar")
        require(unitary_equivalent(piece, near).equivalent or unitary_equivalent(piece, far).equivalent, "summand matches an input")

    pieces = split_decomposition(direct_sum(T, T))
    require(len(pieces) == 2 and all(unitary_equivalent(piece, T).equivalent for piece in pieces), "T + T splits into T, T")

    q = build_catalog_quiver("D~4").quiver
    simple, _ = simple_rep(q, "c1")
    pieces = split_decomposition(direct_sum(simple, simple))
    require(len(pieces) == 2 and all(piece.dim_vector == simple.dim_vector for piece in pieces), "two copies of a simple")
    expect_error(NotOrthoscalar, split_decomposition, skewed_d4())


def test_split_uses_the_given_tolerance() -> None:
    cycle = construct_A_family(4, [1, 1, 1], 1, 0.4)
    require(len(split_decomposition(cycle, 1e-9)) == 1, "Schur cycle stays whole at the default tolerance")
    # a rank cutoff this loose makes every endomorphism equation vanish
    require(not is_schur(cycle, 0.5), "loose tolerance hides the Schur property")
    expect_error(NumericalFailure, split_decomposition, cycle, 0.5)


def test_unitary_intertwiners_respect_adjoints() -> None:
    rng = np.random.default_rng(17)
    for T in (d4_sample(), construct_A_family(6, [1, 2, 1, 0.5, 1], 1.5, 0.9)):
        for _ in range(5):
            U = random_unitary_pair(T.quiver, T.dims, rng)
            moved = conjugate(T, U)
            require(morphism_residual(T, moved, U) <= 1e-12, "unitary pair intertwines")
            require(adjoint_closure_residual(T, moved, U) <= 1e-12, "adjoint relation for a unitary morphism")
            require(unitary_equivalent(T, moved, seed=int(rng.integers(1000))).equivalent, "conjugates are equivalent")
            require(morphism_space_dim(T, moved, Category.REP_Q) >= 1, "conjugates have morphisms")


def test_self_adjoint_endomorphisms_respect_adjoints() -> None:
    T = d4_sample()
    for rep in (direct_sum(T, T), direct_sum(T, d4_sample(np.pi / 6))):
        for element in hermitian_parts(morphism_space_basis(rep, rep, Category.REP_Q)):
            require(morphism_residual(rep, rep, element) <= 1e-10, "self-adjoint part stays an endomorphism")
            require(adjoint_closure_residual(rep, rep, element) <= 1e-10, "self-adjoint endomorphism commutes with T*")


def test_equal_lengths_pin_down_diagonal_rescaling() -> None:
    rng = np.random.default_rng(23)
    for _ in range(20):
        Z = rng.uniform(0.1, 2.0, (3, 4))
        scale = rng.uniform(0.5, 3.0)
        W = (scale * np.eye(3)) @ Z @ np.linalg.inv(scale * np.eye(4))
        require(np.allclose(W, Z, atol=1e-10), "scalar rescaling")

        Z = np.diag(rng.uniform(0.5, 2.0, 3))
        a = rng.uniform(0.5, 2.0, 3)
        b = a * np.abs(np.diag(Z)) / np.linalg.norm(Z, axis=1)
        W = np.diag(a) @ Z @ np.diag(1 / b)
        require(np.allclose(np.linalg.norm(W, axis=1), np.linalg.norm(Z, axis=1)), "row lengths match")
        require(np.allclose(np.linalg.norm(W, axis=0), np.linalg.norm(Z, axis=0)), "column lengths match")
        require(np.allclose(W, Z, atol=1e-10), "diagonal rescaling that keeps lengths is trivial")


def test_schur_agrees_with_splitting() -> None:
    T = d4_sample()
    cycle = construct_A_family(4, [1, 1, 1], 1, 0.4)
    for rep in (T, cycle, direct_sum(T, T), direct_sum(cycle, construct_A_family(4, [1, 1, 1], 1, 1.1))):
        require(is_schur(rep) == (len(split_decomposition(rep)) == 1), "Schur iff one summand")


def main() -> int:
    test_representation_validation()
    test_block_matrix_layout()
    test_orthoscalarity_examples()
    test_simple_representation()
    test_morphism_space_dimensions()
    test_unitary_equivalence()
    test_split_decomposition()
    test_split_uses_the_given_tolerance()
    test_unitary_intertwiners_respect_adjoints()
    test_self_adjoint_endomorphisms_respect_adjoints()
    test_equal_lengths_pin_down_diagonal_rescaling()
    test_schur_agrees_with_splitting()
    print("hilbert representation tests passed")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
