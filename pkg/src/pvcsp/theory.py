"""Fractional homomorphisms, promise fractional polymorphisms, block
symmetry, multiset structures, the constructive lifts between them, and
LP-based witness searches.

Every checker is a full exhaustive enumeration guarded by a hard cap;
exactness over scale.  Measures collapse equal tables by summing weights,
so measure equality is table-wise comparison.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from . import exactlp
from .core import (
    FiniteMeasure,
    OperationTable,
    PromiseTemplate,
    ValuedStructure,
    multisets_of_size,
    tuple_to_multiset,
)
from .errors import DomainMismatch, PreconditionViolated, ResourceGuard
from .values import PLUS_INF, ExtRat, is_finite

DEFAULT_CAP = 10**7

NONE_EXISTS = "none-exists"


@dataclass(frozen=True)
class BlockPartition:
    """Disjoint nonempty index blocks covering range(m) (0-based)."""

    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen: list[int] = []
        for block in self.blocks:
            if not block:
                raise ValueError("empty block")
            seen.extend(block)
        m = len(seen)
        if sorted(seen) != list(range(m)):
            raise ValueError("blocks must partition range(m) exactly")

    @classmethod
    def from_sizes(cls, sizes: Sequence[int]) -> "BlockPartition":
        blocks = []
        start = 0
        for s in sizes:
            blocks.append(tuple(range(start, start + s)))
            start += s
        return cls(tuple(blocks))

    @property
    def arity(self) -> int:
        return sum(len(b) for b in self.blocks)

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)


@dataclass(frozen=True)
class PromiseFpol:
    """A pair (input projection weights, output operation measure)."""

    input_weights: tuple[Fraction, ...]
    output: FiniteMeasure

    def __post_init__(self):
        if any(w < 0 for w in self.input_weights):
            raise ValueError("input weights must be nonnegative")
        if sum(self.input_weights) != 1:
            raise ValueError("input weights must sum to 1")
        for g, _ in self.output:
            if g.arity != len(self.input_weights):
                raise ValueError("output arity differs from input weight count")

    @property
    def arity(self) -> int:
        return len(self.input_weights)

    @classmethod
    def uniform_input(cls, output: FiniteMeasure) -> "PromiseFpol":
        gs = output.support()
        m = gs[0].arity
        return cls(tuple([Fraction(1, m)] * m), output)


FractionalHomomorphism = FiniteMeasure  # arity-1 operation tables


def _expected_cost(
    structure: ValuedStructure,
    symbol: str,
    images: list[tuple[tuple[str, ...], Fraction]],
) -> ExtRat:
    """Sum of weight * cost over image tuples; +inf if any summand is."""
    total: ExtRat = Fraction(0)
    for args, w in images:
        cost = structure.cost(symbol, args)
        total = total + (cost if cost is PLUS_INF else w * cost)
    return total


def check_fractional_homomorphism(
    chi: FractionalHomomorphism,
    delta: ValuedStructure,
    gamma: ValuedStructure,
) -> tuple[bool, Optional[tuple[str, tuple[str, ...]]]]:
    """Expected Gamma-cost of each image tuple at most the Delta-cost,
    for every symbol and tuple; returns the first violator if any."""
    if delta.signature != gamma.signature:
        raise DomainMismatch("structures must share a signature")
    for h in chi.support():
        if h.arity != 1:
            raise DomainMismatch("fractional homomorphism maps are unary")
        if h.in_domain != delta.domain or h.out_domain != gamma.domain:
            raise DomainMismatch("map domains do not match the structures")
    for symbol, arity in delta.signature.symbols:
        for a in itertools.product(delta.domain, repeat=arity):
            lhs = _expected_cost(
                gamma,
                symbol,
                [
                    (tuple(h.apply((x,)) for x in a), w)
                    for h, w in chi
                ],
            )
            if not lhs <= delta.cost(symbol, a):
                return False, (symbol, a)
    return True, None


def check_promise_fpol(
    omega: PromiseFpol,
    template: PromiseTemplate,
    cap: int = DEFAULT_CAP,
) -> tuple[bool, Optional[tuple[str, tuple]]]:
    """Full enumeration of the polymorphism inequality over all m-tuples of
    argument tuples; first violator reported."""
    delta, gamma = template.delta, template.gamma
    m = omega.arity
    for g, _ in omega.output:
        if g.in_domain != delta.domain or g.out_domain != gamma.domain:
            raise DomainMismatch("operation domains do not match the template")
    work = sum(
        len(delta.domain) ** (arity * m) for _, arity in delta.signature.symbols
    ) * max(1, len(omega.output.support()))
    if work > cap:
        raise ResourceGuard(f"{work} inequality evaluations exceed cap {cap}")
    for symbol, arity in delta.signature.symbols:
        for tuples in itertools.product(
            itertools.product(delta.domain, repeat=arity), repeat=m
        ):
            images = []
            for g, w in omega.output:
                out = tuple(
                    g.apply(tuple(tuples[i][pos] for i in range(m)))
                    for pos in range(arity)
                )
                images.append((out, w))
            lhs = _expected_cost(gamma, symbol, images)
            rhs: ExtRat = Fraction(0)
            for i in range(m):
                w = omega.input_weights[i]
                if w == 0:
                    continue
                cost = delta.cost(symbol, tuples[i])
                rhs = rhs + (cost if cost is PLUS_INF else w * cost)
            if not lhs <= rhs:
                return False, (symbol, tuples)
    return True, None


def check_block_symmetry(g: OperationTable, partition: BlockPartition) -> bool:
    """Invariance under within-block transpositions (they generate the
    block-wise symmetric group)."""
    if partition.arity != g.arity:
        raise DomainMismatch("partition arity differs from operation arity")
    table = g.as_dict()
    for block in partition.blocks:
        for i, j in itertools.combinations(block, 2):
            for args in itertools.product(g.in_domain, repeat=g.arity):
                swapped = list(args)
                swapped[i], swapped[j] = swapped[j], swapped[i]
                if table[args] != table[tuple(swapped)]:
                    return False
    return True


def symmetrize_input_weights(
    omega: PromiseFpol, partition: BlockPartition
) -> PromiseFpol:
    """Replace the input weights by the uniform ones; valid whenever the
    polymorphism is block-symmetric with block sums |B_j|/m."""
    m = omega.arity
    if partition.arity != m:
        raise PreconditionViolated("partition arity differs from omega arity")
    for g in omega.output.support():
        if not check_block_symmetry(g, partition):
            raise PreconditionViolated("support table is not block-symmetric")
    for block in partition.blocks:
        if sum(omega.input_weights[i] for i in block) != Fraction(len(block), m):
            raise PreconditionViolated(
                "input weight block sums must equal |B|/m"
            )
    return PromiseFpol(tuple([Fraction(1, m)] * m), omega.output)


def block_multiset_domain(
    domain: Sequence[str], partition: BlockPartition
) -> list[tuple[tuple[str, ...], ...]]:
    """Elements of the multiset structure: one multiset per block, in the
    deterministic product order."""
    per_block = [multisets_of_size(domain, len(b)) for b in partition.blocks]
    return list(itertools.product(*per_block))


def render_multiset_element(element: tuple[tuple[str, ...], ...]) -> str:
    return "|".join(",".join(ms) for ms in element)


def _distinct_permutations(ms: tuple[str, ...]):
    seen = set()
    for p in itertools.permutations(ms):
        if p not in seen:
            seen.add(p)
            yield p


def _arrangements(element, partition: BlockPartition, canonical: bool):
    """Tuples in D^m whose block restrictions realise the given multisets.

    With canonical=True only the sorted-within-block arrangement is produced
    (sound for the first argument of the cost minimum, by simultaneous
    block-preserving permutation of all arguments).
    """
    m = partition.arity
    per_block = []
    for ms in element:
        if canonical:
            per_block.append([ms])
        else:
            per_block.append(list(_distinct_permutations(ms)))
    for combo in itertools.product(*per_block):
        t = [""] * m
        for block, arranged in zip(partition.blocks, combo):
            for pos, val in zip(block, arranged):
                t[pos] = val
        yield tuple(t)


def block_multiset_structure(
    delta: ValuedStructure,
    partition: BlockPartition,
    cap: int = DEFAULT_CAP,
) -> ValuedStructure:
    """The k-block multiset structure: costs are minimum averaged alignments
    of the base costs.  A single block of size m gives the symmetric power
    structure; blocks of sizes L+1, L give the bimultiset structure."""
    m = partition.arity
    elements = block_multiset_domain(delta.domain, partition)
    labels = [render_multiset_element(e) for e in elements]
    if len(set(labels)) != len(labels):
        raise DomainMismatch("multiset labels collide; relabel the domain")
    work = sum(
        len(elements) ** arity for _, arity in delta.signature.symbols
    )
    if work > cap:
        raise ResourceGuard(f"multiset domain of {len(elements)} exceeds cap")
    by_label = dict(zip(labels, elements))
    tables = {}
    inv_m = Fraction(1, m)
    for symbol, arity in delta.signature.symbols:
        table = {}
        base = delta.table(symbol)
        for arg_labels in itertools.product(labels, repeat=arity):
            args = [by_label[lab] for lab in arg_labels]
            best: ExtRat = PLUS_INF
            first = list(_arrangements(args[0], partition, canonical=True))
            rest = [
                list(_arrangements(e, partition, canonical=False))
                for e in args[1:]
            ]
            for combo in itertools.product(first, *rest):
                total: ExtRat = Fraction(0)
                for i in range(m):
                    total = total + base[tuple(t[i] for t in combo)]
                    if total is PLUS_INF:
                        break
                if total < best:
                    best = total
            table[arg_labels] = best if best is PLUS_INF else inv_m * best
        tables[symbol] = table
    return ValuedStructure(delta.signature, labels, tables)


def _place_canonical(element, partition: BlockPartition) -> tuple[str, ...]:
    """The canonical arrangement of a multiset element as a tuple in D^m."""
    t = [""] * partition.arity
    for block, ms in zip(partition.blocks, element):
        for pos, val in zip(block, ms):
            t[pos] = val
    return tuple(t)


def lift_fpol_to_frachom(
    omega: PromiseFpol,
    partition: BlockPartition,
    template: PromiseTemplate,
) -> FractionalHomomorphism:
    """Turn a block-symmetric polymorphism into a fractional homomorphism
    from the multiset structure to Gamma: each operation collapses to the
    induced map on multiset tuples; weights accumulate on collapse."""
    delta, gamma = template.delta, template.gamma
    for g in omega.output.support():
        if not check_block_symmetry(g, partition):
            raise PreconditionViolated("support table is not block-symmetric")
    elements = block_multiset_domain(delta.domain, partition)
    labels = tuple(render_multiset_element(e) for e in elements)
    pairs = []
    for g, w in omega.output:
        mapping = {
            (lab,): g.apply(_place_canonical(e, partition))
            for lab, e in zip(labels, elements)
        }
        lifted = OperationTable.from_map(labels, gamma.domain, 1, mapping)
        pairs.append((lifted, w))
    return FiniteMeasure.from_pairs(pairs)


def fpol_from_frachom(
    chi: FractionalHomomorphism,
    partition: BlockPartition,
    base_domain: Sequence[str],
) -> PromiseFpol:
    """The converse lift: compose each multiset-level map with the
    tuple-to-multisets projection; input weights uniform."""
    base_domain = tuple(base_domain)
    m = partition.arity
    elements = block_multiset_domain(base_domain, partition)
    labels = tuple(render_multiset_element(e) for e in elements)
    label_of: dict[tuple, str] = {}
    for lab, e in zip(labels, elements):
        label_of[e] = lab
    pairs = []
    for h, w in chi:
        if h.in_domain != labels:
            raise DomainMismatch(
                "chi's input domain is not the block-multiset domain"
            )
        mapping = {}
        for a in itertools.product(base_domain, repeat=m):
            element = tuple(
                tuple_to_multiset([a[i] for i in block], base_domain)
                for block in partition.blocks
            )
            mapping[a] = h.apply((label_of[element],))
        g = OperationTable.from_map(base_domain, h.out_domain, m, mapping)
        pairs.append((g, w))
    output = FiniteMeasure.from_pairs(pairs)
    return PromiseFpol(tuple([Fraction(1, m)] * m), output)


def compose_sampling_fpol(
    chi: FractionalHomomorphism, omega: PromiseFpol
) -> PromiseFpol:
    """Compose a sample-to-Gamma1 homomorphism with a (Gamma1, Gamma2)
    polymorphism: the product measure on {g o h}, collapsed."""
    m = omega.arity
    pairs = []
    for h, wh in chi:
        for g, wg in omega.output:
            if h.out_domain != g.in_domain:
                raise DomainMismatch("chi codomain differs from omega domain")
            mapping = {
                args: g.apply(tuple(h.apply((x,)) for x in args))
                for args in itertools.product(h.in_domain, repeat=m)
            }
            composed = OperationTable.from_map(
                h.in_domain, g.out_domain, m, mapping
            )
            pairs.append((composed, wh * wg))
    output = FiniteMeasure.from_pairs(pairs)
    return PromiseFpol(tuple([Fraction(1, m)] * m), output)


def _all_operations(
    in_domain: tuple[str, ...], out_domain: tuple[str, ...], arity: int, cap: int
) -> list[OperationTable]:
    points = list(itertools.product(in_domain, repeat=arity))
    count = len(out_domain) ** len(points)
    if count > cap:
        raise ResourceGuard(f"{count} operation tables exceed cap {cap}")
    ops = []
    for outputs in itertools.product(out_domain, repeat=len(points)):
        ops.append(
            OperationTable.from_map(
                in_domain, out_domain, arity, dict(zip(points, outputs))
            )
        )
    return ops


def _block_symmetric_operations(
    in_domain, out_domain, partition: BlockPartition, cap: int
) -> list[OperationTable]:
    """Only the multiset-respecting tables: one free value per block-multiset
    tuple, expanded to a full table."""
    elements = block_multiset_domain(in_domain, partition)
    count = len(out_domain) ** len(elements)
    if count > cap:
        raise ResourceGuard(f"{count} block-symmetric tables exceed cap {cap}")
    m = partition.arity
    keys = []
    for a in itertools.product(in_domain, repeat=m):
        keys.append(
            tuple(
                tuple_to_multiset([a[i] for i in block], in_domain)
                for block in partition.blocks
            )
        )
    ops = []
    for outputs in itertools.product(out_domain, repeat=len(elements)):
        value = dict(zip(elements, outputs))
        mapping = {
            a: value[key]
            for a, key in zip(itertools.product(in_domain, repeat=m), keys)
        }
        ops.append(OperationTable.from_map(in_domain, out_domain, m, mapping))
    return ops


def _feasibility_measure(
    candidates: list[OperationTable],
    rows: list[tuple[list[Fraction], Fraction]],
) -> Union[FiniteMeasure, str]:
    """Solve: weights >= 0, sum = 1, and row . w <= rhs for each row.

    Inequalities get slack columns; the LP is a pure feasibility solve.
    """
    if not candidates:
        return NONE_EXISTS
    # candidates with identical coefficient columns are interchangeable;
    # solve over one representative each
    seen: dict[tuple, int] = {}
    reps: list[int] = []
    for i in range(len(candidates)):
        key = tuple(coeffs[i] for coeffs, _ in rows)
        if key not in seen:
            seen[key] = i
            reps.append(i)
    n = len(reps)
    width = n + len(rows)
    eq_rows = []
    rhs = []
    norm = [Fraction(1)] * n + [Fraction(0)] * len(rows)
    eq_rows.append(norm)
    rhs.append(Fraction(1))
    for k, (coeffs, bound) in enumerate(rows):
        row = [coeffs[i] for i in reps] + [Fraction(0)] * len(rows)
        row[n + k] = Fraction(1)
        eq_rows.append(row)
        rhs.append(bound)
    lp = exactlp.LinearProgram(width, eq_rows, rhs, [Fraction(0)] * width)
    res = exactlp.solve_lp(lp)
    if res.status != exactlp.OPTIMAL:
        return NONE_EXISTS
    pairs = [
        (candidates[reps[i]], res.point[i])
        for i in range(n)
        if res.point[i] > 0
    ]
    return FiniteMeasure.from_pairs(pairs)


def find_frachom_lp(
    delta: ValuedStructure,
    gamma: ValuedStructure,
    cap: int = DEFAULT_CAP,
) -> Union[FractionalHomomorphism, str]:
    """LP feasibility search over all unary maps; a valid measure or a
    correct non-existence verdict."""
    if delta.signature != gamma.signature:
        raise DomainMismatch("structures must share a signature")
    maps = _all_operations(delta.domain, gamma.domain, 1, cap)
    # a map hitting +inf against a finite target can carry no weight
    admissible = []
    for h in maps:
        ok = True
        for symbol, arity in delta.signature.symbols:
            for a in itertools.product(delta.domain, repeat=arity):
                if is_finite(delta.cost(symbol, a)) and (
                    gamma.cost(symbol, tuple(h.apply((x,)) for x in a))
                    is PLUS_INF
                ):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            admissible.append(h)
    rows = []
    for symbol, arity in delta.signature.symbols:
        for a in itertools.product(delta.domain, repeat=arity):
            target = delta.cost(symbol, a)
            if target is PLUS_INF:
                continue
            coeffs = [
                gamma.cost(symbol, tuple(h.apply((x,)) for x in a))
                for h in admissible
            ]
            rows.append((coeffs, target))
    return _feasibility_measure(admissible, rows)


def find_promise_fpol_lp(
    template: PromiseTemplate,
    m: int,
    partition: Optional[BlockPartition] = None,
    cap: int = DEFAULT_CAP,
) -> Union[PromiseFpol, str]:
    """LP feasibility search over m-ary operations (optionally restricted to
    block-symmetric tables); input weights fixed uniform."""
    delta, gamma = template.delta, template.gamma
    if partition is not None:
        if partition.arity != m:
            raise DomainMismatch("partition arity differs from m")
        ops = _block_symmetric_operations(
            delta.domain, gamma.domain, partition, cap
        )
    else:
        ops = _all_operations(delta.domain, gamma.domain, m, cap)
    inv_m = Fraction(1, m)

    admissible = []
    constraints = []  # (symbol, tuples, rhs) with finite rhs
    sym_tuples = []
    for symbol, arity in delta.signature.symbols:
        for tuples in itertools.product(
            itertools.product(delta.domain, repeat=arity), repeat=m
        ):
            rhs: ExtRat = Fraction(0)
            for t in tuples:
                cost = delta.cost(symbol, t)
                rhs = rhs + (cost if cost is PLUS_INF else inv_m * cost)
            sym_tuples.append((symbol, tuples, rhs))
    if len(sym_tuples) * max(1, len(ops)) > cap:
        raise ResourceGuard("polymorphism search exceeds cap")

    def image(g, symbol_arity, tuples):
        return tuple(
            g.apply(tuple(tuples[i][pos] for i in range(m)))
            for pos in range(symbol_arity)
        )

    for g in ops:
        ok = True
        for symbol, tuples, rhs in sym_tuples:
            if rhs is PLUS_INF:
                continue
            arity = delta.signature.arity(symbol)
            if gamma.cost(symbol, image(g, arity, tuples)) is PLUS_INF:
                ok = False
                break
        if ok:
            admissible.append(g)
    rows = []
    for symbol, tuples, rhs in sym_tuples:
        if rhs is PLUS_INF:
            continue
        arity = delta.signature.arity(symbol)
        coeffs = [
            gamma.cost(symbol, image(g, arity, tuples)) for g in admissible
        ]
        rows.append((coeffs, rhs))
    output = _feasibility_measure(admissible, rows)
    if output == NONE_EXISTS:
        return NONE_EXISTS
    return PromiseFpol(tuple([inv_m] * m), output)


THIRD_K = "third-k"
WEIGHT_SUM = "weight-sum"


def wma(
    k: int,
    inputs: Sequence[Fraction],
    normalization: str = THIRD_K,
) -> Fraction:
    """The 2-period weighted centred moving average.

    The outer coordinate ranges carry weight 1 and the centre range weight
    2.  The default normalisation divides by 3k, which is not idempotent;
    the weight-sum variant divides by the actual weight total and is.
    """
    if k < 1 or k % 2 == 0 or len(inputs) != k:
        raise PreconditionViolated("wma needs an odd k and exactly k inputs")
    lo = k // 4
    hi = (3 * k) // 4
    weights = [1] * lo + [2] * (hi - lo) + [1] * (k - hi)
    total = sum(w * x for w, x in zip(weights, inputs))
    if normalization == THIRD_K:
        return Fraction(total, 3 * k) if isinstance(total, int) else total / (3 * k)
    if normalization == WEIGHT_SUM:
        wsum = sum(weights)
        return Fraction(total, wsum) if isinstance(total, int) else total / wsum
    raise ValueError(f"unknown normalization {normalization!r}")


def wma_blocks(k: int) -> BlockPartition:
    """The symmetric blocks of the moving average: outer indices vs centre."""
    lo = k // 4
    hi = (3 * k) // 4
    outer = tuple(range(lo)) + tuple(range(hi, k))
    centre = tuple(range(lo, hi))
    return BlockPartition((outer, centre))
