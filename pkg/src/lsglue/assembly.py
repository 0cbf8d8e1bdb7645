"""Assembling and verifying the total-degree-0 cochain over a cover.

The cochain has three layers, one per overlap depth:

* ``alpha``  -- on each chart, the degree-0 element â·(a - â) encoding that
  chart's least-squares fit to first order;
* ``beta``   -- on each pairwise overlap, a degree-1 element with constant
  coefficients whose differential reproduces the translated discrepancy of
  the two chart fits (computed as N⁻¹δ on the overlap's normal matrix);
* ``r``      -- on each triple overlap, a degree-2 element whose differential
  must reproduce the alternating sum of the three transported betas.

Transport to a smaller cell is translation to the cell's own fit (the
coefficients ride along verbatim) while the differential is re-evaluated at
the cell's weights.  Since differential images never carry constant terms,
the constant part of a triple's alternating beta sum can never be witnessed:
it is reported as the exact obstruction, and a witness r exists only when it
vanishes.  All residuals are exact; floats appear only in advisory metrics.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

from .data import Cover, NerveCell, enumerate_nerve, validate_cover
from .errors import CellMismatch, LsglueError, Obstructed
from .koszul import (
    KoszulElement,
    LinearizedDifferential,
    LinearizedElement,
    koszul_diff,
    koszul_from_json,
    koszul_to_json,
    solve_homotopy_deg1,
    solve_homotopy_deg2,
    translate,
)
from .linalg import Vector
from .model import FeatureMap, LSSolution, build_normal_system, solve_least_squares
from .scalars import rat_float


@dataclass(frozen=True)
class ChartFit:
    """A cell's least-squares solution and its differential at that solution."""

    cell: NerveCell
    solution: LSSolution
    differential: LinearizedDifferential

    @property
    def base(self) -> Vector:
        return self.solution.a_hat


@dataclass(frozen=True)
class TotalCochain:
    """(alpha, beta, r) keyed by nerve cell; an obstructed triple maps to None."""

    alpha: dict
    beta: dict
    r: dict


@dataclass(frozen=True)
class PairCheck:
    """Exact verification data for one pairwise overlap."""

    delta: Vector
    beta_constants: Vector
    residual: KoszulElement

    @property
    def residual_zero(self) -> bool:
        return self.residual.is_zero()


@dataclass(frozen=True)
class TripleCheck:
    """Exact verification data for one triple overlap.

    ``outcome`` is "ok" (witness found), "constant_defect" (nonzero constant
    part, rigorously un-witnessable), or "inconsistent" (slot equations had no
    solution).
    """

    defect_constant: Vector
    witness: KoszulElement | None
    residual: KoszulElement
    outcome: str

    @property
    def residual_zero(self) -> bool:
        return self.residual.is_zero()

    @property
    def obstructed(self) -> bool:
        return self.outcome != "ok"


@dataclass(frozen=True)
class ObstructionReport:
    pairs: dict
    triples: dict

    def all_pairs_zero(self) -> bool:
        return all(check.residual_zero for check in self.pairs.values())

    def any_obstructed(self) -> bool:
        return any(check.obstructed for check in self.triples.values())

    def all_verified(self) -> bool:
        return self.all_pairs_zero() and all(
            check.residual_zero for check in self.triples.values()
        )


@dataclass(frozen=True)
class DiscrepancyMetrics:
    """Float summaries for triage; never consumed by exact computations."""

    max_delta: float
    mean_delta: float
    max_beta: float
    mean_beta: float
    max_defect: float | None
    mean_defect: float | None


def fit_all_cells(cover: Cover, features: FeatureMap, max_degree: int) -> dict:
    """Fit every nerve cell up to ``max_degree``.

    Each cell restricts the base weights to its index intersection, solves the
    normal equations there, and packages the differential at the solution.
    Raises :class:`lsglue.errors.Singular` naming the first degenerate cell.
    """
    validate_cover(cover)
    system = build_normal_system(cover.base, features)
    fits = {}
    for cell in enumerate_nerve(cover, max_degree):
        restricted = system.restricted(cell.indices)
        solution = solve_least_squares(restricted, chart=cell.label)
        differential = LinearizedDifferential(base=solution.a_hat, nmat=restricted.nmat)
        fits[cell] = ChartFit(cell=cell, solution=solution, differential=differential)
    return fits


def canonical_alpha(fit: ChartFit) -> KoszulElement:
    """Degree-0 element â·(a - â): zero constant part, linear part â."""
    base = fit.base
    return KoszulElement.build(
        base.dim,
        0,
        base,
        {(): LinearizedElement.linear(base, base)},
    )


def cech_delta_pair(
    alpha_i: KoszulElement, alpha_j: KoszulElement, pair: ChartFit
) -> KoszulElement:
    """Translate both chart elements to the overlap's base and take j - i.

    For canonical alphas the result is δ·(a - â_pair) with δ = â_j - â_i.
    Callers pass the charts in sorted name order; swapping them negates the
    result.
    """
    return translate(alpha_j, pair.base) - translate(alpha_i, pair.base)


def _cells_by_names(fits: dict) -> dict:
    return {cell.chart_names: cell for cell in fits}


def _sorted_cells(cells) -> list:
    return sorted(cells, key=lambda cell: (cell.degree, cell.chart_names))


def _transported_defect(cell: NerveCell, cochain_beta: dict, fits: dict, by_names: dict):
    """Alternating sum of the face betas, translated to the triple's base."""
    base = fits[cell].base
    total = KoszulElement.zero(base.dim, 1, base)
    for position, face in enumerate(cell.faces()):
        face_cell = by_names.get(face)
        if face_cell is None or face_cell not in cochain_beta:
            raise CellMismatch(
                f"triple {cell.label} needs a beta on face {'|'.join(face)}"
            )
        term = translate(cochain_beta[face_cell], base)
        total = total - term if position % 2 else total + term
    return total


def _defect_constants(defect: KoszulElement) -> Vector:
    return Vector(tuple(defect.coefficient((m,)).c0 for m in range(1, defect.n + 1)))


def build_zero_cocycle(
    cover: Cover, features: FeatureMap, max_degree: int = 2
) -> tuple[TotalCochain, ObstructionReport]:
    """Construct (alpha, beta, r) over the cover's nerve and verify it.

    Pairs always solve exactly (the overlap's normal matrix is invertible
    whenever its fit exists).  On each triple the constant part of the
    transported beta defect is the exact obstruction: when it vanishes, the
    degree-2 witness is solved for the remaining linear part; otherwise the
    triple is recorded as obstructed (never raised).  The returned report is
    the verification of the constructed cochain.
    """
    return assemble_cochain(fit_all_cells(cover, features, max_degree))


def assemble_cochain(fits: dict) -> tuple[TotalCochain, ObstructionReport]:
    """The cell-level cochain construction behind :func:`build_zero_cocycle`."""
    by_names = _cells_by_names(fits)

    alpha = {
        cell: canonical_alpha(fits[cell]) for cell in fits if cell.degree == 0
    }
    beta = {}
    for cell in _sorted_cells(c for c in fits if c.degree == 1):
        name_i, name_j = cell.chart_names
        target = cech_delta_pair(
            alpha[by_names[(name_i,)]], alpha[by_names[(name_j,)]], fits[cell]
        )
        beta[cell] = solve_homotopy_deg1(target, fits[cell].differential)

    r = {}
    for cell in _sorted_cells(c for c in fits if c.degree == 2):
        defect = _transported_defect(cell, beta, fits, by_names)
        if not _defect_constants(defect).is_zero():
            r[cell] = None
            continue
        try:
            r[cell] = solve_homotopy_deg2(defect, fits[cell].differential)
        except Obstructed:
            r[cell] = None

    cochain = TotalCochain(alpha=alpha, beta=beta, r=r)
    return cochain, verify_cocycle(cochain, fits)


def verify_cocycle(cochain: TotalCochain, fits: dict) -> ObstructionReport:
    """Recheck every supplied cocycle equation exactly.

    Pairs: the differential of beta must equal the translated alpha
    discrepancy.  Triples: the differential of r (zero when r is absent) must
    equal the transported beta defect.  Residual elements are exact; a
    cochain cell with no matching fit raises :class:`CellMismatch`.
    """
    by_names = _cells_by_names(fits)
    pairs = {}
    for cell in _sorted_cells(cochain.beta):
        if cell not in fits:
            raise CellMismatch(f"no fit for pair cell {cell.label}")
        name_i, name_j = cell.chart_names
        missing = [
            name
            for name in (name_i, name_j)
            if by_names.get((name,)) not in cochain.alpha
        ]
        if missing:
            raise CellMismatch(f"pair {cell.label} lacks alpha on {missing}")
        target = cech_delta_pair(
            cochain.alpha[by_names[(name_i,)]],
            cochain.alpha[by_names[(name_j,)]],
            fits[cell],
        )
        image = koszul_diff(cochain.beta[cell], fits[cell].differential)
        n = fits[cell].base.dim
        pairs[cell] = PairCheck(
            delta=target.coefficient(()).c,
            beta_constants=Vector(
                tuple(cochain.beta[cell].coefficient((m,)).c0 for m in range(1, n + 1))
            ),
            residual=image - target,
        )

    triples = {}
    for cell in _sorted_cells(cochain.r):
        if cell not in fits:
            raise CellMismatch(f"no fit for triple cell {cell.label}")
        defect = _transported_defect(cell, cochain.beta, fits, by_names)
        constants = _defect_constants(defect)
        witness = cochain.r[cell]
        if witness is None:
            image = KoszulElement.zero(defect.n, 1, defect.base)
            outcome = "constant_defect" if not constants.is_zero() else "inconsistent"
        else:
            image = koszul_diff(witness, fits[cell].differential)
            outcome = "ok"
        triples[cell] = TripleCheck(
            defect_constant=constants,
            witness=witness,
            residual=image - defect,
            outcome=outcome,
        )
    return ObstructionReport(pairs=pairs, triples=triples)


def discrepancy_metrics(report: ObstructionReport) -> DiscrepancyMetrics | None:
    """Float max/mean of the pair and triple discrepancy norms; None when the
    cover has no pairwise overlaps."""
    if not report.pairs:
        return None
    delta_norms = [_l2(check.delta) for check in report.pairs.values()]
    beta_norms = [_l2(check.beta_constants) for check in report.pairs.values()]
    defect_norms = [_l2(check.defect_constant) for check in report.triples.values()]
    return DiscrepancyMetrics(
        max_delta=max(delta_norms),
        mean_delta=sum(delta_norms) / len(delta_norms),
        max_beta=max(beta_norms),
        mean_beta=sum(beta_norms) / len(beta_norms),
        max_defect=max(defect_norms) if defect_norms else None,
        mean_defect=sum(defect_norms) / len(defect_norms) if defect_norms else None,
    )


def _l2(vec: Vector) -> float:
    return sqrt(rat_float(vec.norm_sq()))


def report_to_json(cochain: TotalCochain, fits: dict, report: ObstructionReport) -> dict:
    """Serialize the cochain and its verification; rationals as `p/q` strings,
    float companions advisory only."""
    charts = {}
    for cell in _sorted_cells(cochain.alpha):
        fit = fits[cell]
        charts[cell.label] = {
            "indices": sorted(cell.indices),
            "a_hat": fit.base.to_strings(),
            "a_hat_float": fit.base.to_floats(),
            "alpha": koszul_to_json(cochain.alpha[cell]),
        }
    pairs = {}
    for cell, check in report.pairs.items():
        pairs[cell.label] = {
            "indices": sorted(cell.indices),
            "a_hat": fits[cell].base.to_strings(),
            "a_hat_float": fits[cell].base.to_floats(),
            "delta": check.delta.to_strings(),
            "delta_float": check.delta.to_floats(),
            "beta": koszul_to_json(cochain.beta[cell]),
            "residual_zero": check.residual_zero,
        }
    triples = {}
    for cell, check in report.triples.items():
        triples[cell.label] = {
            "indices": sorted(cell.indices),
            "a_hat": fits[cell].base.to_strings(),
            "a_hat_float": fits[cell].base.to_floats(),
            "defect_constant": check.defect_constant.to_strings(),
            "defect_constant_float": check.defect_constant.to_floats(),
            "r": None if check.witness is None else koszul_to_json(check.witness),
            "obstructed": check.obstructed,
            "residual_zero": check.residual_zero,
        }
    metrics = discrepancy_metrics(report)
    return {
        "charts": charts,
        "pairs": pairs,
        "triples": triples,
        "metrics": None
        if metrics is None
        else {
            "max_delta": metrics.max_delta,
            "mean_delta": metrics.mean_delta,
            "max_beta": metrics.max_beta,
            "mean_beta": metrics.mean_beta,
            "max_defect": metrics.max_defect,
            "mean_defect": metrics.mean_defect,
        },
    }


def cochain_from_json(doc: dict, fits: dict) -> TotalCochain:
    """Parse a report produced by :func:`report_to_json` back into a cochain.

    Cells are resolved by label against ``fits``; unknown labels or elements
    based away from their cell's fit are structural errors
    (:class:`LsglueError`), not verification failures.
    """
    if not isinstance(doc, dict):
        raise LsglueError("cochain JSON must be an object")
    by_label = {cell.label: cell for cell in fits}

    def resolve(label: str, degree: int) -> NerveCell:
        cell = by_label.get(label)
        if cell is None or cell.degree != degree:
            raise LsglueError(f"cochain references unknown degree-{degree} cell {label!r}")
        return cell

    alpha = {}
    for label, record in doc.get("charts", {}).items():
        cell = resolve(label, 0)
        base = fits[cell].base
        alpha[cell] = koszul_from_json(record["alpha"], base.dim, 0, base)
    beta = {}
    for label, record in doc.get("pairs", {}).items():
        cell = resolve(label, 1)
        base = fits[cell].base
        beta[cell] = koszul_from_json(record["beta"], base.dim, 1, base)
    r = {}
    for label, record in doc.get("triples", {}).items():
        cell = resolve(label, 2)
        base = fits[cell].base
        witness = record.get("r")
        r[cell] = (
            None if witness is None else koszul_from_json(witness, base.dim, 2, base)
        )
    return TotalCochain(alpha=alpha, beta=beta, r=r)


def fits_to_json(fits: dict) -> dict:
    """Serialize per-cell least-squares solutions (the `fit` command payload)."""
    cells = {}
    for cell in _sorted_cells(fits):
        fit = fits[cell]
        cells[cell.label] = {
            "degree": cell.degree,
            "indices": sorted(cell.indices),
            "a_hat": fit.base.to_strings(),
            "a_hat_float": fit.base.to_floats(),
        }
    return {"cells": cells}
