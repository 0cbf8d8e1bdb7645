"""Feature maps, exact weighted normal systems, and least-squares solving.

The model is f(x, a) = φ(x)·a with φ a monomial feature map, so the weighted
squared-error gradient in a is affine:  η = ν + N·a  with

    ν_k = -2 Σ_j w_j y_j φ(x_j)_k          N_{kl} = 2 Σ_j w_j φ(x_j)_k φ(x_j)_l.

Both are exactly linear in the weights, which is what lets a normal system be
restricted to any chart by re-evaluating the stored per-point contributions
with zeroed weights.  N is symmetric, and positive semidefinite whenever all
weights are nonnegative; the minimizer solves N·â = -ν.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import DimensionMismatch, IndexOutOfRange, LsglueError, Singular
from .linalg import Matrix, Vector, rank, solve_square
from .scalars import ONE, ZERO, rat


@dataclass(frozen=True)
class FeatureMap:
    """Monomial features: one exponent vector over the ambient coordinates per
    parameter slot."""

    monomials: tuple

    def __post_init__(self):
        if not self.monomials:
            raise LsglueError("feature map needs at least one monomial")
        width = len(self.monomials[0])
        for mono in self.monomials:
            if len(mono) != width:
                raise DimensionMismatch("monomial exponent vectors have mixed lengths")
            if any((not isinstance(e, int)) or e < 0 for e in mono):
                raise LsglueError("monomial exponents must be nonnegative integers")

    @classmethod
    def of(cls, exponents: Iterable[Iterable[int]]) -> "FeatureMap":
        return cls(tuple(tuple(int(e) for e in mono) for mono in exponents))

    @property
    def param_dim(self) -> int:
        return len(self.monomials)

    @property
    def ambient_dim(self) -> int:
        return len(self.monomials[0])

    def evaluate(self, x: Vector) -> Vector:
        if x.dim != self.ambient_dim:
            raise DimensionMismatch(
                f"feature map over {self.ambient_dim} coordinates applied to dim-{x.dim} point"
            )
        values = []
        for mono in self.monomials:
            term = ONE
            for coord, exp in zip(x, mono):
                if exp:
                    term = term * coord**exp
            values.append(term)
        return Vector(tuple(values))


def affine_features(ambient_dim: int) -> FeatureMap:
    """φ(x) = (x_1, ..., x_N, 1); param_dim = ambient_dim + 1."""
    if ambient_dim < 1:
        raise LsglueError("ambient_dim must be >= 1")
    coords = [
        tuple(1 if j == i else 0 for j in range(ambient_dim)) for i in range(ambient_dim)
    ]
    return FeatureMap(tuple(coords) + ((0,) * ambient_dim,))


@dataclass(frozen=True)
class PointContribution:
    """Rank-one ingredient of a normal system: φ(x_j) and y_j for one point."""

    phi: Vector
    y: object  # Rational


@dataclass(frozen=True)
class NormalSystem:
    """The pair (ν, N) evaluated at ``weights``, kept alongside its per-point
    contributions so any reweighting re-evaluates exactly."""

    contributions: tuple
    weights: Vector
    nu: Vector
    nmat: Matrix

    @property
    def param_dim(self) -> int:
        return self.nu.dim

    @property
    def size(self) -> int:
        return len(self.contributions)

    def reweighted(self, weights: Vector) -> "NormalSystem":
        """Re-evaluate ν and N at new weights from the stored contributions."""
        if weights.dim != len(self.contributions):
            raise DimensionMismatch(
                f"{weights.dim} weights for {len(self.contributions)} contributions"
            )
        return _evaluate(self.contributions, weights, self.param_dim)

    def restricted(self, keep) -> "NormalSystem":
        """Zero the weights outside ``keep`` (1-based) and re-evaluate."""
        keep_set = frozenset(keep)
        for i in keep_set:
            if not 1 <= i <= len(self.contributions):
                raise IndexOutOfRange(f"index {i} outside 1..{len(self.contributions)}")
        weights = Vector(
            tuple(
                w if (i + 1) in keep_set else ZERO
                for i, w in enumerate(self.weights.entries)
            )
        )
        return _evaluate(self.contributions, weights, self.param_dim)


def _evaluate(contributions: tuple, weights: Vector, n: int) -> NormalSystem:
    nu = [ZERO] * n
    nmat = [[ZERO] * n for _ in range(n)]
    minus_two = rat(-2)
    two = rat(2)
    for contrib, w in zip(contributions, weights):
        if w == 0:
            continue
        phi = contrib.phi.entries
        wy = minus_two * contrib.y * w
        for k in range(n):
            nu[k] += wy * phi[k]
            wphik = two * w * phi[k]
            row = nmat[k]
            for l in range(n):
                row[l] += wphik * phi[l]
    return NormalSystem(
        contributions=contributions,
        weights=weights,
        nu=Vector(tuple(nu)),
        nmat=Matrix(tuple(tuple(row) for row in nmat), n),
    )


def build_normal_system(data, features: FeatureMap) -> NormalSystem:
    """Evaluate the weighted normal system of ``data`` under ``features``."""
    if data.ambient_dim != features.ambient_dim:
        raise DimensionMismatch(
            f"features over {features.ambient_dim} coordinates vs ambient dim {data.ambient_dim}"
        )
    contributions = tuple(
        PointContribution(phi=features.evaluate(p.x), y=p.y) for p in data.points
    )
    return _evaluate(contributions, data.weights(), features.param_dim)


@dataclass(frozen=True)
class LSSolution:
    """Exact least-squares parameters; ν + N·â = 0 at the solved weights."""

    a_hat: Vector
    chart: str | None = None


def solve_least_squares(system: NormalSystem, chart: str | None = None) -> LSSolution:
    """Solve N·â = -ν exactly; raises :class:`Singular` carrying rank(N) when
    the chart has too few effective points for the parameter dimension."""
    try:
        a_hat = solve_square(system.nmat, -system.nu)
    except Singular:
        raise Singular(
            f"normal matrix is singular on {chart or 'chart'}"
            f" (rank {rank(system.nmat)} < {system.param_dim})",
            rank=rank(system.nmat),
            cell=chart,
        ) from None
    return LSSolution(a_hat=a_hat, chart=chart)


def loss_eval(data, features: FeatureMap, a: Vector):
    """Exact weighted sum of squared residuals Σ w_j (y_j - φ(x_j)·a)²."""
    if a.dim != features.param_dim:
        raise DimensionMismatch(
            f"parameter dim {a.dim} vs feature count {features.param_dim}"
        )
    total = ZERO
    for p in data.points:
        if p.weight == 0:
            continue
        residual = p.y - features.evaluate(p.x).dot(a)
        total += p.weight * residual * residual
    return total


def model_from_json(doc: dict, ambient_dim: int) -> FeatureMap:
    """Parse ``{"features": "affine"}`` or
    ``{"features": "monomials", "exponents": [[1],[0]]}``."""
    if not isinstance(doc, dict) or "features" not in doc:
        raise LsglueError("model JSON must be an object with a 'features' field")
    kind = doc["features"]
    if kind == "affine":
        return affine_features(ambient_dim)
    if kind == "monomials":
        exponents = doc.get("exponents")
        if not isinstance(exponents, list) or not exponents:
            raise LsglueError("monomial model needs a nonempty 'exponents' array")
        features = FeatureMap.of(exponents)
        if features.ambient_dim != ambient_dim:
            raise DimensionMismatch(
                f"model exponents cover {features.ambient_dim} coordinates,"
                f" dataset has {ambient_dim}"
            )
        return features
    raise LsglueError(f"unknown feature kind {kind!r}")
