"""Exact integer arithmetic on G-vectors: Tits form, reflections, roots and reduction paths."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from .catalog import EVEN, ODD, PARITIES, Quiver, lookup_entry
from .config import get_setting
from .errors import (
    BoundTooLarge,
    IndexMismatch,
    InvalidBound,
    InvalidInput,
    NoDelta,
    NoPathFound,
    NotApplicable,
    NotPositive,
    NotSingular,
)


GVector = tuple[int, ...]

FINITE = "finite"
EXTENDED = "extended"
OTHER = "other"


class RootTag(str, Enum):
    NOT_ROOT = "NotRoot"
    REAL_SINGULAR = "RealSingular"
    REAL_REGULAR = "RealRegular"
    IMAGINARY = "Imaginary"


@dataclass(frozen=True)
class RootClass:
    tag: RootTag
    q_value: int
    l_value: int | None = None

    @property
    def is_real(self) -> bool:
        return self.tag in (RootTag.REAL_SINGULAR, RootTag.REAL_REGULAR)

    def to_dict(self) -> dict[str, Any]:
        return {"class": self.tag.value, "q": self.q_value, "L": self.l_value}


@dataclass(frozen=True)
class ReflectionPath:
    """Steps in the order they were applied to the input; replay runs them backwards from `terminal`."""

    steps: tuple[str, ...]
    terminal: GVector
    source: GVector = field(default=(), compare=False)

    def __len__(self) -> int:
        return len(self.steps)

    def to_dict(self) -> dict[str, Any]:
        return {"steps": list(self.steps), "terminal": list(self.terminal)}


def opposite(parity: str) -> str:
    return ODD if parity == EVEN else EVEN


def as_gvector(q: Quiver, x: Mapping[str, int] | Sequence[int] | np.ndarray) -> GVector:
    """Normalize a mapping or a display-ordered sequence into a GVector of exact ints."""
    if isinstance(x, Mapping):
        if set(x) != set(q.vertices):
            missing = sorted(set(q.vertices) - set(x))
            extra = sorted(set(x) - set(q.vertices))
            raise IndexMismatch("vector keys do not match the quiver vertices", {"missing": missing, "extra": extra})
        values = [x[v] for v in q.vertices]
    else:
        values = list(x)
        if len(values) != len(q.vertices):
            raise IndexMismatch(
                f"vector has {len(values)} entries, {q.name} has {len(q.vertices)} vertices",
                {"graph": q.name},
            )
    out: list[int] = []
    for value in values:
        if int(value) != value:
            raise IndexMismatch(f"non-integer entry {value!r}", {"graph": q.name})
        out.append(int(value))
    return tuple(out)


def tits_form(q: Quiver, x: Mapping[str, int] | Sequence[int]) -> int:
    vec = as_gvector(q, x)
    index = q.index
    squares = sum(value * value for value in vec)
    products = sum(vec[index[tail]] * vec[index[head]] for tail, head in q.arrows)
    return squares - products


def simple_reflection(q: Quiver, k: str, x: Mapping[str, int] | Sequence[int]) -> GVector:
    if k not in q.index:
        raise IndexMismatch(f"unknown vertex '{k}'", {"graph": q.name})
    vec = list(as_gvector(q, x))
    index = q.index
    pos = index[k]
    vec[pos] = -vec[pos] + sum(vec[index[u]] for u in q.neighbors[k])
    return tuple(vec)


def coxeter_sweep(q: Quiver, parity: str, x: Mapping[str, int] | Sequence[int]) -> GVector:
    """All simple reflections of one parity; they commute, so the sweep is an involution."""
    if parity not in PARITIES:
        raise InvalidInput(f"parity must be 'even' or 'odd', got {parity!r}")
    vec = as_gvector(q, x)
    for vertex in q.vertices_of(parity):
        vec = simple_reflection(q, vertex, vec)
    return vec


def coxeter_transform(q: Quiver, x: Mapping[str, int] | Sequence[int], t: int) -> GVector:
    """c^t(x): c is the odd sweep followed by the even sweep, c^-1 the reverse."""
    vec = as_gvector(q, x)
    first, second = (ODD, EVEN) if t >= 0 else (EVEN, ODD)
    for _ in range(abs(t)):
        vec = coxeter_sweep(q, second, coxeter_sweep(q, first, vec))
    return vec


def coxeter_orbit(q: Quiver, x: Mapping[str, int] | Sequence[int], steps: int) -> list[GVector]:
    """c^0(x), c^1(x), ..., c^steps(x); negative `steps` walks with c^-1."""
    orbit = [as_gvector(q, x)]
    direction = 1 if steps >= 0 else -1
    for _ in range(abs(steps)):
        orbit.append(coxeter_transform(q, orbit[-1], direction))
    return orbit


def graph_kind(q: Quiver) -> str:
    """Catalog-backed when possible; otherwise decided by definiteness of the symmetrized Tits form."""
    entry = lookup_entry(q)
    if entry is not None:
        return EXTENDED if entry.extended else FINITE
    size = len(q.vertices)
    if size == 0:
        return OTHER
    cartan = 2 * np.eye(size)
    index = q.index
    for tail, head in q.arrows:
        cartan[index[tail], index[head]] -= 1
        cartan[index[head], index[tail]] -= 1
    return FINITE if float(np.linalg.eigvalsh(cartan).min()) > 1e-9 else OTHER


def delta_of(q: Quiver) -> GVector:
    entry = lookup_entry(q)
    if entry is None or entry.delta is None:
        raise NoDelta(f"{q.name} is not an extended Dynkin catalog graph", {"graph": q.name})
    return entry.delta


def linear_form_L(q: Quiver, x: Mapping[str, int] | Sequence[int]) -> int:
    delta = delta_of(q)
    vec = as_gvector(q, x)
    total = 0
    for weight, value, parity in zip(delta, vec, q.parities):
        total += weight * value if parity == ODD else -weight * value
    return total


def is_positive(x: Iterable[int]) -> bool:
    values = list(x)
    return all(value >= 0 for value in values) and any(value > 0 for value in values)


def is_simple_root(x: Iterable[int]) -> bool:
    values = list(x)
    return sorted(values) == [0] * (len(values) - 1) + [1]


def simple_root(q: Quiver, g: str) -> GVector:
    if g not in q.index:
        raise IndexMismatch(f"unknown vertex '{g}'", {"graph": q.name})
    return tuple(1 if v == g else 0 for v in q.vertices)


def classify_vector(q: Quiver, x: Mapping[str, int] | Sequence[int]) -> RootClass:
    vec = as_gvector(q, x)
    if not is_positive(vec):
        raise NotPositive("vector must be nonzero with nonnegative entries", {"vector": list(vec)})
    value = tits_form(q, vec)
    kind = graph_kind(q)
    l_value = linear_form_L(q, vec) if kind == EXTENDED else None
    if value not in (0, 1):
        return RootClass(RootTag.NOT_ROOT, value, l_value)
    if value == 0:
        return RootClass(RootTag.IMAGINARY, value, l_value)
    if kind == FINITE:
        return RootClass(RootTag.REAL_SINGULAR, value, None)
    if kind == OTHER:
        raise NoDelta(f"cannot separate singular from regular roots on {q.name}", {"graph": q.name})
    tag = RootTag.REAL_SINGULAR if l_value != 0 else RootTag.REAL_REGULAR
    return RootClass(tag, value, l_value)


def default_bound(q: Quiver) -> GVector:
    entry = lookup_entry(q)
    if entry is not None and entry.delta is not None:
        multiple = int(get_setting("enumeration", "extended_multiple"))
        return tuple(multiple * value for value in entry.delta)
    return tuple([int(get_setting("enumeration", "finite_bound"))] * len(q.vertices))


def enumerate_positive_roots(
    q: Quiver,
    bound: Mapping[str, int] | Sequence[int] | None = None,
    max_volume: int | None = None,
) -> list[tuple[GVector, RootClass]]:
    """All positive x <= bound with q(x) in {0, 1}, classified, in lexicographic order."""
    limits = default_bound(q) if bound is None else as_gvector(q, bound)
    if any(value < 1 for value in limits):
        raise InvalidBound("bound entries must all be >= 1", {"bound": list(limits)})

    cap = int(max_volume if max_volume is not None else get_setting("enumeration", "max_volume"))
    volume = 1
    for value in limits:
        volume *= value + 1
    if volume > cap:
        raise BoundTooLarge(f"search box has {volume} points, cap is {cap}", {"bound": list(limits)})

    shape = tuple(value + 1 for value in limits)
    points = np.indices(shape, dtype=np.int64).reshape(len(shape), -1).T
    values = (points * points).sum(axis=1)
    index = q.index
    for tail, head in q.arrows:
        values -= points[:, index[tail]] * points[:, index[head]]
    mask = ((values == 0) | (values == 1)) & (points.sum(axis=1) > 0)

    found: list[tuple[GVector, RootClass]] = []
    for row in points[mask]:
        vec = tuple(int(value) for value in row)
        found.append((vec, classify_vector(q, vec)))
    return found


def apply_step(q: Quiver, step: str, x: GVector) -> GVector:
    if step in PARITIES:
        return coxeter_sweep(q, step, x)
    if step.startswith("s:"):
        return simple_reflection(q, step[2:], x)
    raise InvalidInput(f"unknown reflection step {step!r}")


def replay_path(q: Quiver, path: ReflectionPath) -> GVector:
    vec = as_gvector(q, path.terminal)
    for step in reversed(path.steps):
        vec = apply_step(q, step, vec)
    return vec


def _lockstep(q: Quiver, start: GVector, order: tuple[str, str], done, max_steps: int) -> list[str] | None:
    """Both alternations advanced together; the first to finish wins, ties to `order[0]`."""
    branches = {parity: [start, [], parity, True] for parity in order}
    for _ in range(max_steps + 1):
        for parity in order:
            vec, steps, _, alive = branches[parity]
            if alive and done(vec):
                return steps
        for parity in order:
            branch = branches[parity]
            vec, steps, next_parity, alive = branch
            if not alive:
                continue
            moved = coxeter_sweep(q, next_parity, vec)
            if any(value < 0 for value in moved):
                branch[3] = False
                continue
            branch[0] = moved
            branch[1] = steps + [next_parity]
            branch[2] = opposite(next_parity)
        if not any(branch[3] for branch in branches.values()):
            return None
    return None


def singular_reduction_path(
    q: Quiver,
    d: Mapping[str, int] | Sequence[int],
    max_steps: int | None = None,
) -> ReflectionPath:
    vec = as_gvector(q, d)
    root_class = classify_vector(q, vec)
    if root_class.tag is not RootTag.REAL_SINGULAR:
        raise NotSingular(f"{list(vec)} is {root_class.tag.value}", {"vector": list(vec), "graph": q.name})
    limit = int(max_steps if max_steps is not None else get_setting("reduction", "max_steps"))
    steps = _lockstep(q, vec, (EVEN, ODD), is_simple_root, limit)
    if steps is None:
        raise NoPathFound(f"no alternating path from {list(vec)} to a simple root", {"graph": q.name})
    terminal = vec
    for step in steps:
        terminal = apply_step(q, step, terminal)
    return ReflectionPath(tuple(steps), terminal, vec)


def _marked_parity(q: Quiver, vec: GVector) -> str:
    """Descent direction on D~: sweep the side of the first chain vertex carrying 1."""
    index = q.index
    chain = [v for v in q.vertices if v.startswith("c")]
    for position, vertex in enumerate(chain):
        if vec[index[vertex]] == 1:
            if position == 0:
                return q.parity_of("a1")
            return q.parity_of(chain[position - 1])
    return EVEN


def faithful_reduction_path(
    q: Quiver,
    d: Mapping[str, int] | Sequence[int],
    max_steps: int | None = None,
) -> ReflectionPath:
    """Alternating sweeps taking a faithful real root below delta to a root with a zero coordinate."""
    vec = as_gvector(q, d)
    entry = lookup_entry(q)
    if entry is None or entry.delta is None:
        raise NotApplicable(f"{q.name} is not an extended Dynkin graph", {"graph": q.name})
    delta = entry.delta
    if not all(value > 0 for value in vec):
        raise NotApplicable("root is not faithful", {"vector": list(vec)})
    if any(value > bound for value, bound in zip(vec, delta)) or vec == delta:
        raise NotApplicable("root is not strictly below delta", {"vector": list(vec), "delta": list(delta)})
    if tits_form(q, vec) != 1:
        raise NotApplicable("vector is not a real root", {"vector": list(vec)})

    preferred = _marked_parity(q, vec) if q.name.startswith("D~") else EVEN
    limit = int(max_steps if max_steps is not None else get_setting("reduction", "max_steps"))

    def has_zero(candidate: GVector) -> bool:
        return any(value == 0 for value in candidate)

    steps = _lockstep(q, vec, (preferred, opposite(preferred)), has_zero, limit)
    if steps is None:
        raise NoPathFound(f"no alternating path from {list(vec)} to a non-faithful root", {"graph": q.name})
    terminal = vec
    for step in steps:
        terminal = apply_step(q, step, terminal)
    return ReflectionPath(tuple(steps), terminal, vec)
