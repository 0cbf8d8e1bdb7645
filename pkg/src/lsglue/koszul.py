"""Linearized coefficients, Koszul elements, differentials, and homotopy solvers.

Coefficients live in the quotient of the parameter polynomial ring by the
square of the ideal at a base point â: every element is determined by a
constant ``c0`` and a linear part ``c`` against (a - â), and products of two
linear parts vanish.  A degree-p Koszul element assigns such a coefficient to
each strictly increasing p-tuple of wedge slots e^{i_1} ∧ ... ∧ e^{i_p}.

The differential is interior multiplication against the components
η^i = N_i·(a - â) (rows of a normal matrix evaluated at some chart's
weights).  Because every η^i has zero constant term, images of the
differential never carry constant terms; that fact is what makes constant
defects genuine obstructions for the homotopy solvers below.

Rebasing is the translation substitution a ↦ a - (b - â): coefficients keep
(c0, c) verbatim while the base moves, which is a chain isomorphism (it is
NOT a Taylor re-expansion).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Mapping

from .errors import (
    BaseMismatch,
    ConstantObstruction,
    DegreeZero,
    DimensionMismatch,
    Inconsistent,
    LsglueError,
    Obstructed,
)
from .linalg import Matrix, Vector, solve_general, solve_square
from .scalars import ZERO, rat, rat_str, rational_from_string


@dataclass(frozen=True)
class LinearizedElement:
    """c0 + c·(a - base), taken modulo quadratic terms in (a - base)."""

    base: Vector
    c0: object  # Rational
    c: Vector

    def __post_init__(self):
        if self.c.dim != self.base.dim:
            raise DimensionMismatch(
                f"linear part dim {self.c.dim} vs base dim {self.base.dim}"
            )

    @classmethod
    def constant(cls, base: Vector, value) -> "LinearizedElement":
        return cls(base=base, c0=rat(value), c=Vector.zeros(base.dim))

    @classmethod
    def linear(cls, base: Vector, c: Vector) -> "LinearizedElement":
        return cls(base=base, c0=ZERO, c=c)

    @classmethod
    def zero(cls, base: Vector) -> "LinearizedElement":
        return cls(base=base, c0=ZERO, c=Vector.zeros(base.dim))

    @property
    def n(self) -> int:
        return self.base.dim

    def is_zero(self) -> bool:
        return self.c0 == 0 and self.c.is_zero()

    def __add__(self, other: "LinearizedElement") -> "LinearizedElement":
        _same_base(self, other)
        return LinearizedElement(self.base, self.c0 + other.c0, self.c + other.c)

    def __sub__(self, other: "LinearizedElement") -> "LinearizedElement":
        _same_base(self, other)
        return LinearizedElement(self.base, self.c0 - other.c0, self.c - other.c)

    def __neg__(self) -> "LinearizedElement":
        return LinearizedElement(self.base, -self.c0, -self.c)

    def scale(self, s) -> "LinearizedElement":
        s = rat(s)
        return LinearizedElement(self.base, s * self.c0, self.c.scale(s))

    def rebased(self, new_base: Vector) -> "LinearizedElement":
        if new_base.dim != self.base.dim:
            raise DimensionMismatch("translation target has wrong dimension")
        return LinearizedElement(new_base, self.c0, self.c)


def _same_base(u: LinearizedElement, v: LinearizedElement) -> None:
    if u.base != v.base:
        raise BaseMismatch("linearized elements have different base points")


def ring_mul(u: LinearizedElement, v: LinearizedElement) -> LinearizedElement:
    """Product in the truncated ring: the linear×linear cross term vanishes."""
    _same_base(u, v)
    return LinearizedElement(
        base=u.base,
        c0=u.c0 * v.c0,
        c=v.c.scale(u.c0) + u.c.scale(v.c0),
    )


@dataclass(frozen=True)
class KoszulElement:
    """Degree-p element: coefficients on strictly increasing p-tuples of the
    wedge slots 1..n; absent tuples are zero.  All coefficients share ``base``."""

    n: int
    degree: int
    base: Vector
    coeffs: Mapping

    @classmethod
    def build(cls, n: int, degree: int, base: Vector, coeffs: Mapping) -> "KoszulElement":
        """Validate and normalize (exact zero coefficients are dropped).

        Degrees above n are allowed only for the zero element (the exterior
        power is the zero module there, and no index tuple can exist).
        """
        if degree < 0:
            raise LsglueError(f"degree {degree} is negative")
        if base.dim != n:
            raise DimensionMismatch(f"base dim {base.dim} for rank-{n} element")
        cleaned = {}
        for idx, coeff in coeffs.items():
            idx = tuple(idx)
            if len(idx) != degree:
                raise LsglueError(f"index tuple {idx} has length != degree {degree}")
            if any(not 1 <= i <= n for i in idx):
                raise LsglueError(f"index tuple {idx} outside 1..{n}")
            if any(a >= b for a, b in zip(idx, idx[1:])):
                raise LsglueError(f"index tuple {idx} is not strictly increasing")
            if coeff.base != base:
                raise BaseMismatch("coefficient base differs from element base")
            if not coeff.is_zero():
                cleaned[idx] = coeff
        return cls(n=n, degree=degree, base=base, coeffs=cleaned)

    @classmethod
    def zero(cls, n: int, degree: int, base: Vector) -> "KoszulElement":
        return cls.build(n, degree, base, {})

    @classmethod
    def from_constants(cls, degree: int, base: Vector, values: Mapping) -> "KoszulElement":
        """Element with constant coefficients: ``values`` maps index tuples to scalars."""
        n = base.dim
        return cls.build(
            n,
            degree,
            base,
            {idx: LinearizedElement.constant(base, v) for idx, v in values.items()},
        )

    def coefficient(self, idx) -> LinearizedElement:
        return self.coeffs.get(tuple(idx), LinearizedElement.zero(self.base))

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "KoszulElement") -> "KoszulElement":
        self._compatible(other)
        merged = dict(self.coeffs)
        for idx, coeff in other.coeffs.items():
            merged[idx] = merged[idx] + coeff if idx in merged else coeff
        return KoszulElement.build(self.n, self.degree, self.base, merged)

    def __sub__(self, other: "KoszulElement") -> "KoszulElement":
        return self + other.scale(-1)

    def scale(self, s) -> "KoszulElement":
        return KoszulElement.build(
            self.n,
            self.degree,
            self.base,
            {idx: coeff.scale(s) for idx, coeff in self.coeffs.items()},
        )

    def constant_parts(self) -> dict:
        return {idx: coeff.c0 for idx, coeff in self.coeffs.items()}

    def _compatible(self, other: "KoszulElement") -> None:
        if self.n != other.n or self.degree != other.degree:
            raise DimensionMismatch("Koszul elements of different rank or degree")
        if self.base != other.base:
            raise BaseMismatch("Koszul elements have different base points")


@dataclass(frozen=True)
class LinearizedDifferential:
    """Interior multiplication data: component i is η^i = N_i·(a - base)."""

    base: Vector
    nmat: Matrix

    def __post_init__(self):
        if not self.nmat.is_square or self.nmat.nrows != self.base.dim:
            raise DimensionMismatch("differential matrix must be n x n at an n-dim base")

    @property
    def n(self) -> int:
        return self.base.dim

    def component(self, i: int) -> LinearizedElement:
        """η^i for slot i in 1..n."""
        return LinearizedElement.linear(self.base, self.nmat.row(i - 1))

    def rebased(self, new_base: Vector) -> "LinearizedDifferential":
        if new_base.dim != self.base.dim:
            raise DimensionMismatch("translation target has wrong dimension")
        return LinearizedDifferential(base=new_base, nmat=self.nmat)


def koszul_diff(xi: KoszulElement, eta: LinearizedDifferential) -> KoszulElement:
    """Interior multiplication: each wedge slot i_j is contracted against
    η^{i_j} with sign (-1)^j, extended linearly over the coefficients."""
    if xi.degree < 1:
        raise DegreeZero("differential is undefined in degree 0")
    if xi.base != eta.base:
        raise BaseMismatch("element and differential have different base points")
    if xi.n != eta.n:
        raise DimensionMismatch("element and differential have different rank")
    acc: dict = {}
    for idx, coeff in xi.coeffs.items():
        for j, slot in enumerate(idx):
            term = ring_mul(coeff, eta.component(slot))
            if j % 2:
                term = -term
            key = idx[:j] + idx[j + 1 :]
            acc[key] = acc[key] + term if key in acc else term
    return KoszulElement.build(xi.n, xi.degree - 1, xi.base, acc)


def translate(xi: KoszulElement, new_base: Vector) -> KoszulElement:
    """Rebase to ``new_base``: every coefficient keeps (c0, c) verbatim, with
    c·(a - old) rewritten as c·(a - new).  Inverse to translating back."""
    if new_base.dim != xi.n:
        raise DimensionMismatch(f"new base dim {new_base.dim} for rank-{xi.n} element")
    return KoszulElement.build(
        xi.n,
        xi.degree,
        new_base,
        {idx: coeff.rebased(new_base) for idx, coeff in xi.coeffs.items()},
    )


def restrict_differential(system, cell, base: Vector) -> LinearizedDifferential:
    """Differential at ``base`` with N re-evaluated on the cell's indices only."""
    indices = getattr(cell, "indices", cell)
    restricted = system.restricted(indices)
    return LinearizedDifferential(base=base, nmat=restricted.nmat)


def solve_homotopy_deg1(target: KoszulElement, eta: LinearizedDifferential) -> KoszulElement:
    """Find q of degree 1 with constant coefficients β and ι(q) = target.

    Since ι(Σ β_i e^i) = Σ β_i η^i has linear part Nᵀβ and no constant part,
    the solve is Nᵀβ = (linear part of target); a nonzero constant part of the
    target is unreachable and raises :class:`ConstantObstruction`.
    """
    if target.degree != 0:
        raise LsglueError(f"degree-1 homotopy target must have degree 0, got {target.degree}")
    if target.base != eta.base:
        raise BaseMismatch("target and differential have different base points")
    coeff = target.coefficient(())
    if coeff.c0 != 0:
        raise ConstantObstruction(
            f"target has constant term {rat_str(coeff.c0)}; not in the image of the differential"
        )
    beta = solve_square(eta.nmat.transpose(), coeff.c)
    return KoszulElement.from_constants(
        1, eta.base, {(i + 1,): beta[i] for i in range(eta.n)}
    )


def solve_homotopy_deg2(target: KoszulElement, eta: LinearizedDifferential) -> KoszulElement:
    """Find r of degree 2 with constant coefficients and ι(r) = target.

    ι(e^p ∧ e^q) = η^p e^q - η^q e^p, so matching the linear part of every
    slot of the target gives n² equations in the C(n,2) unknowns r_{pq};
    they are dispatched to the general solver (never Singular: underdetermined
    systems pick the deterministic particular solution).  Constant parts of
    the target raise :class:`ConstantObstruction`; an inconsistent system
    raises :class:`Obstructed` with the exact residual.
    """
    if target.degree != 1:
        raise LsglueError(f"degree-2 homotopy target must have degree 1, got {target.degree}")
    if target.base != eta.base:
        raise BaseMismatch("target and differential have different base points")
    n = eta.n
    for idx, coeff in target.coeffs.items():
        if coeff.c0 != 0:
            raise ConstantObstruction(
                f"target slot e^{idx[0]} has constant term {rat_str(coeff.c0)};"
                " not in the image of the differential"
            )
    pairs = list(combinations(range(1, n + 1), 2))
    columns = {pq: k for k, pq in enumerate(pairs)}
    rows = []
    rhs = []
    nmat = eta.nmat
    for m in range(1, n + 1):
        linear = target.coefficient((m,)).c
        for l in range(n):
            row = [ZERO] * len(pairs)
            for p in range(1, m):
                row[columns[(p, m)]] = nmat.entry(p - 1, l)
            for q in range(m + 1, n + 1):
                row[columns[(m, q)]] = -nmat.entry(q - 1, l)
            rows.append(tuple(row))
            rhs.append(linear[l])
    system = Matrix(tuple(rows), len(pairs))
    try:
        solution = solve_general(system, Vector(tuple(rhs)))
    except Inconsistent as err:
        raise Obstructed(
            "no degree-2 witness: slot equations are inconsistent",
            residual=err.residual,
        ) from None
    values = {pq: solution.particular[k] for pq, k in columns.items()}
    return KoszulElement.from_constants(2, eta.base, values)


def koszul_to_json(element: KoszulElement) -> dict:
    """Serialize as a map from index tuples (e.g. ``"[1,2]"``) to coefficients."""
    doc = {}
    for idx in sorted(element.coeffs):
        coeff = element.coeffs[idx]
        doc[json.dumps(list(idx), separators=(",", ":"))] = {
            "c0": rat_str(coeff.c0),
            "c": coeff.c.to_strings(),
            "base": coeff.base.to_strings(),
        }
    return doc


def koszul_from_json(doc: dict, n: int, degree: int, base: Vector) -> KoszulElement:
    """Parse the :func:`koszul_to_json` format, enforcing the expected shape."""
    if not isinstance(doc, dict):
        raise LsglueError("Koszul element JSON must be an object")
    coeffs = {}
    for key, record in doc.items():
        try:
            raw = json.loads(key)
        except ValueError:
            raise LsglueError(f"bad index tuple key {key!r}") from None
        if not isinstance(raw, list) or any(not isinstance(i, int) for i in raw):
            raise LsglueError(f"bad index tuple key {key!r}")
        if (
            not isinstance(record, dict)
            or not isinstance(record.get("c0"), str)
            or not isinstance(record.get("c"), list)
            or not isinstance(record.get("base"), list)
        ):
            raise LsglueError(
                f"coefficient at {key} needs string 'c0' and arrays 'c' and 'base'"
            )
        parsed_base = Vector(tuple(rational_from_string(s) for s in record["base"]))
        if parsed_base != base:
            raise LsglueError(
                f"coefficient at {key} is based at {parsed_base.to_strings()},"
                f" expected {base.to_strings()}"
            )
        coeffs[tuple(raw)] = LinearizedElement(
            base=base,
            c0=rational_from_string(record["c0"]),
            c=Vector(tuple(rational_from_string(s) for s in record["c"])),
        )
    return KoszulElement.build(n, degree, base, coeffs)
