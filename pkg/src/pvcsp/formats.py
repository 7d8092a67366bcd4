"""Text file formats for structures, instances, and measures.

One self-describing line-oriented family; rationals are rendered "p/q" and
infinity as "inf".  Unlisted tuples of a symbol take the symbol's declared
default, which keeps crisp fixtures small.  parse(print(x)) is the identity.

Structure file:
    domain 0 1
    symbol f 2 default inf
    0 1 : 0
    1 0 : 0

Instance file:
    vars x y z
    term f x y
    threshold 1/2

Measure file (fractional homomorphism or polymorphism):
    measure fpol
    arity 2
    in_domain 0 1
    out_domain 0 1
    input_weights 1/2 1/2
    map 1
    0 0 : 0
    0 1 : 0
    1 0 : 0
    1 1 : 1
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Union

from .core import (
    FiniteMeasure,
    Instance,
    OperationTable,
    Signature,
    Term,
    ValuedStructure,
)
from .errors import FormatError
from .theory import PromiseFpol
from .values import PLUS_INF, format_value, parse_value


def _lines(text: str) -> list[list[str]]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line.split())
    return out


def parse_structure(text: str) -> ValuedStructure:
    domain: list[str] = []
    symbols: list[tuple[str, int]] = []
    tables: dict[str, dict] = {}
    defaults: dict[str, object] = {}
    current: str | None = None
    for tokens in _lines(text):
        head = tokens[0]
        if head == "domain":
            if domain:
                raise FormatError("duplicate domain line")
            domain = tokens[1:]
            if not domain:
                raise FormatError("empty domain")
        elif head == "symbol":
            if len(tokens) != 5 or tokens[3] != "default":
                raise FormatError(
                    f"expected 'symbol NAME ARITY default VALUE': {tokens}"
                )
            name = tokens[1]
            try:
                arity = int(tokens[2])
            except ValueError as exc:
                raise FormatError(f"bad arity {tokens[2]!r}") from exc
            try:
                defaults[name] = parse_value(tokens[4])
            except ValueError as exc:
                raise FormatError(str(exc)) from exc
            symbols.append((name, arity))
            tables[name] = {}
            current = name
        elif ":" in tokens:
            if current is None:
                raise FormatError(f"table entry before any symbol: {tokens}")
            sep = tokens.index(":")
            args = tuple(tokens[:sep])
            value_tokens = tokens[sep + 1 :]
            if len(value_tokens) != 1:
                raise FormatError(f"expected one value: {tokens}")
            arity = dict(symbols)[current]
            if len(args) != arity:
                raise FormatError(
                    f"entry for {current} has {len(args)} labels, arity {arity}"
                )
            for a in args:
                if a not in domain:
                    raise FormatError(f"label {a!r} outside the domain")
            try:
                tables[current][args] = parse_value(value_tokens[0])
            except ValueError as exc:
                raise FormatError(str(exc)) from exc
        else:
            raise FormatError(f"unrecognised line: {' '.join(tokens)}")
    if not domain:
        raise FormatError("structure file has no domain line")
    import itertools

    for name, arity in symbols:
        default = defaults[name]
        for t in itertools.product(domain, repeat=arity):
            tables[name].setdefault(t, default)
    try:
        return ValuedStructure(Signature(tuple(symbols)), domain, tables)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def print_structure(structure: ValuedStructure) -> str:
    lines = ["domain " + " ".join(structure.domain)]
    for name, arity in structure.signature.symbols:
        table = structure.table(name)
        # the most common value becomes the default, rendering fewer lines
        counts: dict[str, int] = {}
        for v in table.values():
            counts[format_value(v)] = counts.get(format_value(v), 0) + 1
        default = max(sorted(counts), key=lambda k: counts[k])
        lines.append(f"symbol {name} {arity} default {default}")
        import itertools

        for t in itertools.product(structure.domain, repeat=arity):
            rendered = format_value(table[t])
            if rendered != default:
                lines.append(" ".join(t) + " : " + rendered)
    return "\n".join(lines) + "\n"


def parse_instance(text: str) -> Instance:
    variables: list[str] = []
    terms: list[Term] = []
    threshold = None
    for tokens in _lines(text):
        head = tokens[0]
        if head == "vars":
            variables = tokens[1:]
        elif head == "term":
            if len(tokens) < 3:
                raise FormatError(f"term needs a symbol and arguments: {tokens}")
            terms.append(Term(tokens[1], tuple(tokens[2:])))
        elif head == "threshold":
            if len(tokens) != 2:
                raise FormatError("threshold needs exactly one value")
            try:
                value = parse_value(tokens[1])
            except ValueError as exc:
                raise FormatError(str(exc)) from exc
            if value is PLUS_INF:
                raise FormatError("threshold must be finite")
            threshold = value
        else:
            raise FormatError(f"unrecognised line: {' '.join(tokens)}")
    if threshold is None:
        raise FormatError("instance file has no threshold")
    try:
        return Instance(tuple(variables), tuple(terms), threshold)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def print_instance(instance: Instance) -> str:
    lines = ["vars " + " ".join(instance.variables)]
    for term in instance.terms:
        lines.append("term " + term.symbol + " " + " ".join(term.args))
    lines.append("threshold " + str(instance.threshold))
    return "\n".join(lines) + "\n"


FRACHOM = "frachom"
FPOL = "fpol"


def parse_measure(text: str) -> Union[FiniteMeasure, PromiseFpol]:
    kind = None
    arity = 1
    in_domain: tuple[str, ...] = ()
    out_domain: tuple[str, ...] = ()
    input_weights: tuple[Fraction, ...] | None = None
    pairs: list[tuple[dict, Fraction]] = []
    for tokens in _lines(text):
        head = tokens[0]
        if head == "measure":
            if len(tokens) != 2 or tokens[1] not in (FRACHOM, FPOL):
                raise FormatError("measure kind must be frachom or fpol")
            kind = tokens[1]
        elif head == "arity":
            arity = int(tokens[1])
        elif head == "in_domain":
            in_domain = tuple(tokens[1:])
        elif head == "out_domain":
            out_domain = tuple(tokens[1:])
        elif head == "input_weights":
            try:
                input_weights = tuple(Fraction(t) for t in tokens[1:])
            except (ValueError, ZeroDivisionError) as exc:
                raise FormatError(str(exc)) from exc
        elif head == "map":
            try:
                weight = Fraction(tokens[1])
            except (ValueError, ZeroDivisionError) as exc:
                raise FormatError(str(exc)) from exc
            pairs.append(({}, weight))
        elif ":" in tokens:
            if not pairs:
                raise FormatError("table entry before any map line")
            sep = tokens.index(":")
            args = tuple(tokens[:sep])
            out = tokens[sep + 1 :]
            if len(args) != arity or len(out) != 1:
                raise FormatError(f"malformed map entry: {' '.join(tokens)}")
            pairs[-1][0][args] = out[0]
        else:
            raise FormatError(f"unrecognised line: {' '.join(tokens)}")
    if kind is None:
        raise FormatError("measure file has no measure line")
    if kind == FRACHOM and arity != 1:
        raise FormatError("a fractional homomorphism has arity 1")
    try:
        weighted = [
            (OperationTable.from_map(in_domain, out_domain, arity, mapping), w)
            for mapping, w in pairs
        ]
        measure = FiniteMeasure(tuple(weighted))
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
    if kind == FRACHOM:
        return measure
    if input_weights is None:
        input_weights = tuple([Fraction(1, arity)] * arity)
    try:
        return PromiseFpol(input_weights, measure)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def print_measure(measure: Union[FiniteMeasure, PromiseFpol]) -> str:
    if isinstance(measure, PromiseFpol):
        kind = FPOL
        output = measure.output
    else:
        kind = FRACHOM
        output = measure
    g0 = output.support()[0]
    lines = [
        f"measure {kind}",
        f"arity {g0.arity}",
        "in_domain " + " ".join(g0.in_domain),
        "out_domain " + " ".join(g0.out_domain),
    ]
    if isinstance(measure, PromiseFpol):
        lines.append(
            "input_weights " + " ".join(str(w) for w in measure.input_weights)
        )
    for g, w in output:
        lines.append(f"map {w}")
        for args, out in g.entries:
            lines.append(" ".join(args) + " : " + out)
    return "\n".join(lines) + "\n"
