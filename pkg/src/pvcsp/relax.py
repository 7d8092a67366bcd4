"""The BLP and AIP relaxations of a VCSP instance, star-point selection,
refinement, and the combined and BLP-only decision procedures.

Both programs share one column indexing (term tuples first, then variable
marginals, each in deterministic order), so the star point computed on the
LP side aligns coordinate-for-coordinate with the integer program.
Tuples outside dom(f) are eliminated from the column set rather than
constrained to zero, and the refinement eliminates further columns.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from . import exactlp, lattice
from .core import Instance, ValuedStructure, validate_instance
from .errors import (
    IndexMisalignment,
    PreconditionViolated,
    SamplerSignatureMismatch,
    PvcspError,
)
from .exactlp import LinearProgram
from .values import MINUS_INF, PLUS_INF, ExtVal, format_value, is_finite

ZERO = Fraction(0)
ONE = Fraction(1)

# column keys: ("lam", term index, tuple) and ("mu", variable, label)
ColKey = tuple


@dataclass
class ProgramIndex:
    """Shared column map for the BLP and AIP of one instance."""

    columns: list[ColKey]
    position: dict[ColKey, int]
    eliminated: list[ColKey]

    @classmethod
    def build(
        cls,
        delta: ValuedStructure,
        instance: Instance,
        keep: Callable[[ColKey], bool],
    ) -> "ProgramIndex":
        columns: list[ColKey] = []
        eliminated: list[ColKey] = []
        for j, term in enumerate(instance.terms):
            arity = delta.signature.arity(term.symbol)
            for t in itertools.product(delta.domain, repeat=arity):
                key = ("lam", j, t)
                (columns if keep(key) else eliminated).append(key)
        for x in instance.variables:
            for a in delta.domain:
                key = ("mu", x, a)
                (columns if keep(key) else eliminated).append(key)
        return cls(columns, {k: i for i, k in enumerate(columns)}, eliminated)


def _constraint_rows(
    delta: ValuedStructure, instance: Instance, index: ProgramIndex
):
    """The Figure-style constraint families over the kept columns:
    marginal equalities (= 0) and per-variable normalisations (= 1)."""
    n = len(index.columns)
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for j, term in enumerate(instance.terms):
        arity = delta.signature.arity(term.symbol)
        for ell in range(arity):
            x = term.args[ell]
            for a in delta.domain:
                row = [ZERO] * n
                touched = False
                for t in itertools.product(delta.domain, repeat=arity):
                    if t[ell] != a:
                        continue
                    pos = index.position.get(("lam", j, t))
                    if pos is not None:
                        row[pos] += ONE
                        touched = True
                mu_pos = index.position.get(("mu", x, a))
                if mu_pos is not None:
                    row[mu_pos] -= ONE
                    touched = True
                if touched:
                    rows.append(row)
                    rhs.append(ZERO)
    for x in instance.variables:
        row = [ZERO] * n
        touched = False
        for a in delta.domain:
            pos = index.position.get(("mu", x, a))
            if pos is not None:
                row[pos] += ONE
                touched = True
        rows.append(row)
        rhs.append(ONE)
        if not touched:
            # every marginal of x eliminated: normalisation 0 = 1, and the
            # all-zero row correctly renders the program infeasible
            pass
    return rows, rhs


def _objective(
    delta: ValuedStructure, instance: Instance, index: ProgramIndex
) -> list[Fraction]:
    obj = [ZERO] * len(index.columns)
    for i, key in enumerate(index.columns):
        if key[0] == "lam":
            _, j, t = key
            cost = delta.cost(instance.terms[j].symbol, t)
            assert is_finite(cost), "eliminated columns carry the infinities"
            obj[i] = cost
    return obj


@dataclass
class BlpProgram:
    lp: LinearProgram
    index: ProgramIndex


@dataclass
class AipProgram:
    rows: list[list[int]]
    rhs: list[int]
    objective: list[Fraction]
    index: ProgramIndex


def _validate(delta: ValuedStructure, instance: Instance) -> None:
    problems = validate_instance(delta, instance)
    if problems:
        raise PvcspError("; ".join(problems))


def build_blp(delta: ValuedStructure, instance: Instance) -> BlpProgram:
    """The basic LP relaxation; infeasibility encodes a +inf value.

    The upper bounds lambda, mu <= 1 are implied by nonnegativity plus the
    normalisation equalities and are not encoded.
    """
    _validate(delta, instance)
    dom = {
        (j, t): True
        for j, term in enumerate(instance.terms)
        for t in delta.dom(term.symbol)
    }
    index = ProgramIndex.build(
        delta, instance, lambda k: k[0] == "mu" or (k[1], k[2]) in dom
    )
    rows, rhs = _constraint_rows(delta, instance, index)
    lp = LinearProgram(
        len(index.columns), rows, rhs, _objective(delta, instance, index)
    )
    return BlpProgram(lp, index)


def build_aip(delta: ValuedStructure, instance: Instance) -> AipProgram:
    """The affine IP relaxation, sharing build_blp's column indexing."""
    blp = build_blp(delta, instance)
    rows = [[int(a) for a in row] for row in blp.lp.rows]
    rhs = [int(b) for b in blp.lp.rhs]
    return AipProgram(rows, rhs, blp.lp.objective, blp.index)


def blp_value(blp: BlpProgram) -> ExtVal:
    res = exactlp.solve_lp(blp.lp)
    if res.status == exactlp.INFEASIBLE:
        return PLUS_INF
    assert res.status == exactlp.OPTIMAL, "BLP region is bounded"
    return res.value


def aip_value(aip: AipProgram) -> ExtVal:
    sol = lattice.solve_integer_system(aip.rows, aip.rhs, len(aip.objective))
    return lattice.evaluate_affine_min(aip.objective, sol)


FEASIBLE_INTERIOR = "feasible-interior"
OPTIMAL_FACE_INTERIOR = "optimal-face-interior"


@dataclass
class StarPoint:
    values: list[Fraction]
    provenance: str
    index: ProgramIndex

    def value_of(self, key: ColKey) -> Fraction:
        pos = self.index.position.get(key)
        return self.values[pos] if pos is not None else ZERO


def _assert_star_invariants(
    blp: BlpProgram, point: list[Fraction], flags: list[bool], u: Fraction
) -> None:
    for row, b in zip(blp.lp.rows, blp.lp.rhs):
        assert sum((a * x for a, x in zip(row, point)), ZERO) == b
    assert all(x >= 0 for x in point)
    cost = sum((c * x for c, x in zip(blp.lp.objective, point)), ZERO)
    assert cost <= u
    for x, f in zip(point, flags):
        assert (x > 0) == f


def select_star_point(blp: BlpProgram, u: Fraction) -> StarPoint:
    """The star point of the refinement definition.

    A relative interior point of the feasibility polytope with cost <= u if
    one exists (directly, or as a strict convex combination with an optimal
    vertex), else a relative interior point of the optimal face.
    """
    res = exactlp.solve_lp(blp.lp)
    if res.status != exactlp.OPTIMAL or not res.value <= u:
        raise PreconditionViolated("select_star_point requires blp value <= u")
    p, flags = exactlp.relative_interior_point_with_flags(blp.lp)
    cost_p = sum((c * x for c, x in zip(blp.lp.objective, p)), ZERO)
    if cost_p <= u:
        _assert_star_invariants(blp, p, flags, u)
        return StarPoint(p, FEASIBLE_INTERIOR, blp.index)
    if res.value < u:
        # cost(p) > u > m: mix towards the optimal vertex just past the
        # cost-u crossing; a strict combination with an interior point stays
        # in the relative interior
        theta_star = (cost_p - u) / (cost_p - res.value)
        theta = (theta_star + 1) / 2
        mixed = [
            (1 - theta) * a + theta * b for a, b in zip(p, res.point)
        ]
        _assert_star_invariants(blp, mixed, flags, u)
        return StarPoint(mixed, FEASIBLE_INTERIOR, blp.index)
    face = exactlp.restrict_to_optimal_face(blp.lp)
    q, face_flags = exactlp.relative_interior_point_with_flags(face)
    face_blp = BlpProgram(face, blp.index)
    _assert_star_invariants(face_blp, q, face_flags, u)
    return StarPoint(q, OPTIMAL_FACE_INTERIOR, blp.index)


def refine_aip(aip: AipProgram, star: StarPoint) -> AipProgram:
    """Eliminate every column whose star coordinate is zero."""
    if star.index.columns != aip.index.columns:
        raise IndexMisalignment("star point indexed against a different program")
    keep = [i for i, v in enumerate(star.values) if v > 0]
    dropped = [aip.index.columns[i] for i, v in enumerate(star.values) if v == 0]
    columns = [aip.index.columns[i] for i in keep]
    index = ProgramIndex(
        columns,
        {k: i for i, k in enumerate(columns)},
        aip.index.eliminated + dropped,
    )
    rows = [[row[i] for i in keep] for row in aip.rows]
    objective = [aip.objective[i] for i in keep]
    return AipProgram(rows, list(aip.rhs), objective, index)


@dataclass
class SolveAnswer:
    verdict: str  # core.YES / core.NO
    blp_value: ExtVal
    star_provenance: Optional[str] = None
    aff_value: Optional[ExtVal] = None
    eliminated: list = field(default_factory=list)
    program_size: tuple[int, int] = (0, 0)

    def trace(self) -> str:
        lines = [
            f"verdict: {self.verdict}",
            f"blp value: {format_value(self.blp_value)}",
            f"columns: {self.program_size[0]}, rows: {self.program_size[1]}",
        ]
        if self.star_provenance is not None:
            lines.append(f"star point: {self.star_provenance}")
        if self.aff_value is not None:
            lines.append(f"refined aff value: {format_value(self.aff_value)}")
        if self.eliminated:
            lines.append(f"eliminated columns: {len(self.eliminated)}")
        return "\n".join(lines)


def combined_solve(delta: ValuedStructure, instance: Instance) -> SolveAnswer:
    """BLP gate, star point, refined AIP gate; YES only if both pass."""
    from .core import NO, YES

    u = instance.threshold
    blp = build_blp(delta, instance)
    size = (len(blp.index.columns), len(blp.lp.rows))
    value = blp_value(blp)
    if not value <= u:
        return SolveAnswer(NO, value, program_size=size)
    star = select_star_point(blp, u)
    aip = build_aip(delta, instance)
    refined = refine_aip(aip, star)
    aff = aip_value(refined)
    verdict = YES if lattice.check_threshold(aff, u) else NO
    return SolveAnswer(
        verdict,
        value,
        star_provenance=star.provenance,
        aff_value=aff,
        eliminated=refined.index.eliminated,
        program_size=size,
    )


def blp_only_solve(delta: ValuedStructure, instance: Instance) -> SolveAnswer:
    """The BLP-only decision procedure: YES iff blp value <= u."""
    from .core import NO, YES

    blp = build_blp(delta, instance)
    value = blp_value(blp)
    verdict = YES if value <= instance.threshold else NO
    return SolveAnswer(
        verdict, value, program_size=(len(blp.index.columns), len(blp.lp.rows))
    )


COMBINED = "combined"
BLP_ONLY = "blp"


def solve_with_sampler(
    sampler: Callable[[int], ValuedStructure],
    instance: Instance,
    algorithm: str = COMBINED,
    gamma2_hint: Optional[ValuedStructure] = None,
) -> SolveAnswer:
    """Run a finite-domain algorithm on the sample for |V| variables.

    The sample's verdict transfers directly to the sampled problem.
    """
    sample = sampler(len(instance.variables))
    if gamma2_hint is not None and sample.signature != gamma2_hint.signature:
        raise SamplerSignatureMismatch("sample signature differs from template")
    problems = validate_instance(sample, instance)
    if problems:
        raise SamplerSignatureMismatch("; ".join(problems))
    if algorithm == COMBINED:
        return combined_solve(sample, instance)
    if algorithm == BLP_ONLY:
        return blp_only_solve(sample, instance)
    raise ValueError(f"unknown algorithm {algorithm!r}")


def pass_through_sampler(
    structure: ValuedStructure,
) -> Callable[[int], ValuedStructure]:
    """Sampler for an already-finite structure: ignores d."""
    return lambda d: structure
