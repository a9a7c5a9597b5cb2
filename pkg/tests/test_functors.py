#!/usr/bin/env python3
"""Reflection functors: dimension and character bookkeeping, involution, real-root construction."""

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
    CharacterNonpositive,
    FunctorNotApplicable,
    NotRealRoot,
    PathFailure,
)
from orthoscalar.families import construct_A_family, construct_D_family  # noqa: E402
from orthoscalar.functors import (  # noqa: E402
    apply_reflection_functor,
    construct_real_root_rep,
    functor_chain,
    functor_trajectory,
    predict_character,
)
from orthoscalar.hilbert import (  # noqa: E402
    Character,
    is_orthoscalar,
    is_schur,
    orthoscalarity_report,
    simple_rep,
    unitary_equivalent,
)
from orthoscalar.roots import RootTag, coxeter_sweep, enumerate_positive_roots  # noqa: E402


def require(condition: bool, message: str) -> None:
    if not condition:
        raise AssertionError(message)


def expect_error(error_type: type[Exception], func, *args) -> Exception:
    try:
        func(*args)
    except error_type as exc:
        return exc
    raise AssertionError(f"expected {error_type.__name__} from {func.__name__}")


def with_character(T):
    ok, chi = is_orthoscalar(T)
    require(ok, "input is orthoscalar")
    return T, chi


def build_with_retries(q, vec, rng, attempts: int = 30):
    """Seed characters are free; some choices hit a nonpositive character along the chain."""
    seeds: dict[str, float] | float = 1.0
    for _ in range(attempts):
        try:
            return construct_real_root_rep(q, vec, seeds)
        except CharacterNonpositive:
            seeds = {v: float(rng.uniform(0.5, 3.0)) for v in q.vertices}
    raise AssertionError(f"{q.name}: no seed reached {vec}")


def test_even_functor_on_a_simple() -> None:
    q = build_catalog_quiver("D~4").quiver
    simple, chi = simple_rep(q, "c1")
    T, new_chi = apply_reflection_functor(simple, chi, "even")
    require(T.dim_vector == (1, 1, 1, 1, 1), f"dims {T.dim_vector}")
    require(new_chi["c1"] == 4.0 and all(new_chi[v] == 1.0 for v in ("a1", "a2", "b1", "b2")), f"{new_chi}")
    require(all(np.isclose(abs(block[0, 0]), 1.0) for block in T.blocks.values()), "unit scalar blocks")
    require(np.allclose(T.row_band("c1") @ T.row_band("c1").conj().T, [[4.0]]), "Gram sum at c1")
    require(is_schur(T), "one-step image of a simple is Schur")


def test_functor_is_an_involution() -> None:
    T, chi = with_character(construct_D_family(4, [1.0, 2.0], 2.0, np.pi / 4, np.pi / 4, np.pi / 3))
    for parity in ("even", "odd"):
        once, once_chi = apply_reflection_functor(T, chi, parity)
        require(once.dim_vector == T.dim_vector, f"delta is fixed by the {parity} functor")
        twice, _ = apply_reflection_functor(once, once_chi, parity)
        require(unitary_equivalent(T, twice).equivalent, f"{parity} functor twice is the identity")

    cycle, cycle_chi = with_character(construct_A_family(6, [1, 2, 1, 0.5, 1], 1.5, 0.9))
    once, once_chi = apply_reflection_functor(cycle, cycle_chi, "odd")
    twice, _ = apply_reflection_functor(once, once_chi, "odd")
    require(unitary_equivalent(cycle, twice).equivalent, "involution on a cycle")


def test_character_bookkeeping() -> None:
    T, chi = with_character(construct_D_family(5, [1.0, 2.0, 2.0], 2.0, 0.5, 0.9, 0.4))
    for parity in ("even", "odd"):
        out, out_chi = apply_reflection_functor(T, chi, parity)
        expected = predict_character(T.quiver, chi, T.dims, parity)
        report = orthoscalarity_report(out)
        require(report.defect <= 1e-9, f"{parity}: output defect {report.defect}")
        for v, value in report.scalar_targets.items():
            require(abs(value - expected[v]) <= 1e-9 * max(1.0, value), f"{parity}: character at {v}")
            require(abs(out_chi[v] - value) <= 1e-9 * max(1.0, value), f"{parity}: returned character at {v}")
        require(is_schur(out) == is_schur(T), f"{parity}: Schur property preserved")


def test_functor_errors() -> None:
    q = build_catalog_quiver("D~4").quiver
    simple, chi = simple_rep(q, "c1")
    expect_error(FunctorNotApplicable, apply_reflection_functor, simple, chi, "odd")
    zero_leaves = Character({v: 0.0 for v in q.vertices}, frozenset({"c1"}))
    expect_error(CharacterNonpositive, apply_reflection_functor, simple, zero_leaves, "even")
    expect_error(ValueError, apply_reflection_functor, simple, chi, "sideways")
    expect_error(ValueError, functor_chain, simple, chi, "even", 0)


def test_chain_dimensions_follow_the_sweeps() -> None:
    q = build_catalog_quiver("D~4").quiver
    simple, chi = simple_rep(q, "c1")
    T, _ = functor_chain(simple, chi, "even", 2)
    expected = coxeter_sweep(q, "odd", coxeter_sweep(q, "even", simple.dim_vector))
    require(T.dim_vector == expected == (1, 1, 1, 1, 3), f"dims {T.dim_vector}")
    single, _ = functor_chain(simple, chi, "even", 1)
    require(single.dim_vector == (1, 1, 1, 1, 1), "k=1 is one application")

    parities = ["even", "odd", "even"]
    _, _, steps = functor_trajectory(simple, chi, parities)
    vec = simple.dim_vector
    for step, parity in zip(steps, parities):
        require(step.input_dims == vec, "steps chain together")
        vec = coxeter_sweep(q, parity, vec)
        require(step.output_dims == vec, f"{parity} step dims {step.output_dims}")
        require(step.to_dict()["parity"] == parity, "step record")


def test_two_step_chain_reverses() -> None:
    T, chi = with_character(construct_D_family(4, [1.0, 2.0], 2.0, np.pi / 5, np.pi / 3, 1.1))
    forward, forward_chi = functor_chain(T, chi, "even", 2)
    back, _ = functor_chain(forward, forward_chi, "odd", 2)
    require(unitary_equivalent(T, back).equivalent, "reverse chain undoes the forward chain")


def test_real_root_examples() -> None:
    q = build_catalog_quiver("D~4").quiver
    T, chi = construct_real_root_rep(q, (0, 0, 0, 0, 1))
    require(T.dim_vector == (0, 0, 0, 0, 1) and chi["c1"] == 0.0, "e_z is the simple itself")
    T, _ = construct_real_root_rep(q, (1, 1, 1, 1, 1))
    require(T.dim_vector == (1, 1, 1, 1, 1) and is_schur(T), "one step from the simple")
    expect_error(NotRealRoot, construct_real_root_rep, q, (1, 1, 1, 1, 2))
    expect_error(NotRealRoot, construct_real_root_rep, q, (2, 0, 0, 0, 0))


def test_every_singular_root_is_realized() -> None:
    rng = np.random.default_rng(29)
    for name, multiple in (("D~4", 2), ("E6~", 1)):
        entry = build_catalog_quiver(name)
        q = entry.quiver
        bound = tuple(multiple * value for value in entry.delta)
        for vec, root_class in enumerate_positive_roots(q, bound):
            if root_class.tag is not RootTag.REAL_SINGULAR:
                continue
            T, _ = build_with_retries(q, vec, rng)
            require(T.dim_vector == vec, f"{name}: built {T.dim_vector} for {vec}")
            require(is_orthoscalar(T)[0], f"{name}: {vec} is orthoscalar")
            require(is_schur(T), f"{name}: {vec} is Schur")


def test_regular_real_roots() -> None:
    rng = np.random.default_rng(31)
    q = build_catalog_quiver("D~4").quiver
    T, _ = build_with_retries(q, (1, 1, 0, 0, 1), rng)
    require(T.dim_vector == (1, 1, 0, 0, 1) and is_schur(T), "non-faithful regular root via its support")
    expect_error(PathFailure, construct_real_root_rep, q, (2, 2, 1, 1, 3))

    entry = build_catalog_quiver("D~5")
    for vec, root_class in enumerate_positive_roots(entry.quiver, entry.delta):
        if root_class.tag is not RootTag.REAL_REGULAR or not all(vec):
            continue
        T, _ = build_with_retries(entry.quiver, vec, rng)
        require(T.dim_vector == vec, f"D~5: built {T.dim_vector} for {vec}")
        require(is_orthoscalar(T)[0] and is_schur(T), f"D~5: {vec} is orthoscalar and Schur")


def main() -> int:
    test_even_functor_on_a_simple()
    test_functor_is_an_involution()
    test_character_bookkeeping()
    test_functor_errors()
    test_chain_dimensions_follow_the_sweeps()
    test_two_step_chain_reverses()
    test_real_root_examples()
    test_every_singular_root_is_realized()
    test_regular_real_roots()
    print("reflection functor tests passed")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
