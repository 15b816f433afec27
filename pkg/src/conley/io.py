"""Text formats for graded complexes, simplicial filtrations and results.

Both input formats are line oriented; ``#`` starts a comment.  Shared
directives::

    field 3                 # characteristic (default 2)
    poset a b c d           # declare elements (may repeat)
    order a < b < d         # relations; covers are enough
    order a < c

Graded complex files add::

    gen <id> <dim> <grade>
    boundary <id> : <expr>  # e.g.  uw + 2*vu - vw
    delta <row id> <col id> <coeff>
    chain <id> : <expr>     # representative chains, kept as metadata

Filtration files add ``simplex <v0> ... <vk> : <grade>``.  A simplex is
named by concatenating its vertex labels (joined by ``_`` when some label
is longer than one character).  Orientation follows the order in which the
vertices were declared as 0-simplices.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complex import ComplexError, Generator, GradedComplex, ValidationError, validate
from .connect import ConleyComplex
from .field import PrimeField
from .poset import Poset, PosetError, build_poset


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None) -> None:
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


@dataclass
class _Header:
    p: int | None
    elements: list[str]
    relations: list[tuple[str, str]]


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split(None, 1)[0], line


def _header_directive(hdr: _Header, word: str, line: str, lineno: int) -> bool:
    parts = line.split()
    if word == "field":
        if len(parts) != 2 or not parts[1].isdigit():
            raise ParseError("expected 'field <prime>'", lineno)
        hdr.p = int(parts[1])
        return True
    if word == "poset":
        for e in parts[1:]:
            if e in hdr.elements:
                raise ParseError(f"poset element {e!r} declared twice", lineno)
            hdr.elements.append(e)
        return True
    if word == "order":
        chain = parts[1:]
        if len(chain) < 3 or len(chain) % 2 == 0 or any(t != "<" for t in chain[1::2]):
            raise ParseError("expected 'order a < b [< c ...]'", lineno)
        elems = chain[::2]
        for e in elems:
            if e not in hdr.elements:
                raise ParseError(f"undeclared poset element {e!r}", lineno)
        hdr.relations.extend(zip(elems, elems[1:]))
        return True
    return False


def _make_field(hdr: _Header, override: int | None) -> PrimeField:
    p = override if override is not None else (hdr.p if hdr.p is not None else 2)
    try:
        return PrimeField(p)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _make_poset(hdr: _Header) -> Poset:
    try:
        return build_poset(hdr.elements, hdr.relations)
    except PosetError as exc:
        raise ParseError(f"bad poset: {exc}") from None


def parse_expr(expr: str, lineno: int | None = None) -> dict[str, int]:
    """Parse ``a + 2*b - c`` into ``{id: coefficient}`` (integers, unreduced).

    Operators must be separated from terms by whitespace; ``0`` is the empty
    chain.
    """
    tokens = expr.split()
    out: dict[str, int] = {}
    if tokens == ["0"]:
        return out
    sign = 1
    expect_term = True
    for tok in tokens:
        if tok in ("+", "-"):
            if expect_term and (out or sign == -1 or tok == "+"):
                raise ParseError(f"unexpected {tok!r}", lineno)
            sign = -1 if tok == "-" else 1
            expect_term = True
            continue
        if not expect_term:
            raise ParseError(f"missing operator before {tok!r}", lineno)
        coeff, _, gid = tok.rpartition("*")
        if not gid:
            raise ParseError(f"bad term {tok!r}", lineno)
        try:
            c = int(coeff) if coeff else 1
        except ValueError:
            raise ParseError(f"bad coefficient in {tok!r}", lineno) from None
        out[gid] = out.get(gid, 0) + sign * c
        sign = 1
        expect_term = False
    if expect_term and tokens:
        raise ParseError("expression ends with an operator", lineno)
    return out


def parse_complex(text: str, field: int | None = None, *, check: bool = True) -> GradedComplex:
    """Parse a graded complex file.

    ``field`` overrides the file's ``field`` line.  Raises :class:`ParseError`
    on syntax or reference errors and :class:`ValidationError` when the
    result violates an invariant.
    """
    hdr = _Header(None, [], [])
    gens: list[Generator] = []
    gen_line: dict[str, int] = {}
    boundaries: dict[str, dict[str, int]] = {}
    chains: dict[str, dict[str, int]] = {}
    refs: list[tuple[str, int]] = []
    for lineno, word, line in _lines(text):
        if _header_directive(hdr, word, line, lineno):
            continue
        parts = line.split()
        if word == "gen":
            if len(parts) != 4:
                raise ParseError("expected 'gen <id> <dim> <grade>'", lineno)
            _, gid, dim, grade = parts
            if gid in gen_line:
                raise ParseError(f"generator {gid!r} declared twice", lineno)
            try:
                d = int(dim)
            except ValueError:
                raise ParseError(f"bad dimension {dim!r}", lineno) from None
            if grade not in hdr.elements:
                raise ParseError(f"undeclared poset element {grade!r}", lineno)
            gens.append(Generator(gid, d, grade))
            gen_line[gid] = lineno
        elif word in ("boundary", "chain"):
            head, sep, expr = line[len(word):].partition(":")
            gid = head.strip()
            if not sep or not gid or len(gid.split()) != 1:
                raise ParseError(f"expected '{word} <id> : <expr>'", lineno)
            terms = parse_expr(expr, lineno)
            target = boundaries if word == "boundary" else chains
            if gid in target:
                raise ParseError(f"second {word} line for {gid!r}", lineno)
            target[gid] = terms
            refs.append((gid, lineno))
            if word == "boundary":
                refs.extend((t, lineno) for t in terms)
        elif word == "delta":
            if len(parts) != 4:
                raise ParseError("expected 'delta <row> <col> <coeff>'", lineno)
            _, row, col, coeff = parts
            try:
                c = int(coeff)
            except ValueError:
                raise ParseError(f"bad coefficient {coeff!r}", lineno) from None
            col_terms = boundaries.setdefault(col, {})
            col_terms[row] = col_terms.get(row, 0) + c
            refs.extend([(row, lineno), (col, lineno)])
        else:
            raise ParseError(f"unknown directive {word!r}", lineno)
    for gid, lineno in refs:
        if gid not in gen_line:
            raise ParseError(f"undeclared generator {gid!r}", lineno)
    fld = _make_field(hdr, field)
    poset = _make_poset(hdr)
    try:
        cx = GradedComplex.from_boundaries(
            poset, gens, boundaries, fld, meta={"chains": chains}
        )
    except (ComplexError, PosetError) as exc:
        raise ParseError(str(exc)) from None
    if check:
        report = validate(cx)
        if not report.ok:
            raise ValidationError(report)
    return cx


def _simplex_name(vertices: list[str]) -> str:
    if all(len(v) == 1 for v in vertices):
        return "".join(vertices)
    return "_".join(vertices)


def parse_filtration(text: str, field: int | None = None) -> GradedComplex:
    """Parse a simplicial filtration into its graded chain complex."""
    hdr = _Header(None, [], [])
    simplices: list[tuple[tuple[str, ...], str, int]] = []
    for lineno, word, line in _lines(text):
        if _header_directive(hdr, word, line, lineno):
            continue
        if word != "simplex":
            raise ParseError(f"unknown directive {word!r}", lineno)
        head, sep, grade = line[len(word):].partition(":")
        verts = tuple(head.split())
        grade = grade.strip()
        if not sep or not verts or len(grade.split()) != 1:
            raise ParseError("expected 'simplex <v0> ... <vk> : <grade>'", lineno)
        if len(set(verts)) != len(verts):
            raise ParseError("repeated vertex in simplex", lineno)
        if grade not in hdr.elements:
            raise ParseError(f"undeclared poset element {grade!r}", lineno)
        simplices.append((verts, grade, lineno))

    fld = _make_field(hdr, field)
    poset = _make_poset(hdr)
    vertex_rank = {}
    for verts, _, _ in simplices:
        if len(verts) == 1:
            vertex_rank.setdefault(verts[0], len(vertex_rank))
    by_set: dict[frozenset, tuple[str, str, int]] = {}
    for verts, grade, lineno in simplices:
        key = frozenset(verts)
        if key in by_set:
            raise ParseError(f"simplex {_simplex_name(list(verts))} listed twice", lineno)
        by_set[key] = (_simplex_name(list(verts)), grade, lineno)

    gens = []
    boundaries: dict[str, dict[str, int]] = {}
    p = fld.p
    for verts, grade, lineno in simplices:
        name = by_set[frozenset(verts)][0]
        gens.append(Generator(name, len(verts) - 1, grade))
        if len(verts) == 1:
            continue
        missing = [v for v in verts if v not in vertex_rank]
        if missing:
            raise ParseError(f"missing face: vertex {missing[0]!r} of {name}", lineno)
        canon = sorted(verts, key=vertex_rank.__getitem__)
        col = {}
        for i in range(len(canon)):
            facet = frozenset(canon[:i] + canon[i + 1:])
            if facet not in by_set:
                face = _simplex_name(canon[:i] + canon[i + 1:])
                raise ParseError(f"missing face {face} of {name}", lineno)
            fname, fgrade, _ = by_set[facet]
            if not poset.leq(fgrade, grade):
                raise ParseError(
                    f"non-monotone filter: face {fname} has grade {fgrade}, "
                    f"{name} has grade {grade}",
                    lineno,
                )
            col[fname] = 1 if p == 2 else (-1) ** i
        boundaries[name] = col
    cx = GradedComplex.from_boundaries(poset, gens, boundaries, fld)
    report = validate(cx)
    if not report.ok:
        raise ValidationError(report)
    return cx


def parse_any(text: str, field: int | None = None) -> GradedComplex:
    """Dispatch on content: files with ``simplex`` lines are filtrations."""
    for _, word, _ in _lines(text):
        if word == "simplex":
            return parse_filtration(text, field)
        if word in ("gen", "boundary", "delta"):
            break
    return parse_complex(text, field)


def format_expr(chain: dict[str, int]) -> str:
    if not chain:
        return "0"
    return " + ".join(gid if c == 1 else f"{c}*{gid}" for gid, c in chain.items())


def _header_lines(poset: Poset, fld: PrimeField) -> list[str]:
    lines = [f"field {fld.p}"]
    if len(poset):
        lines.append("poset " + " ".join(map(str, poset.elements)))
    lines.extend(f"order {a} < {b}" for a, b in poset.covers())
    return lines


def serialize_result(cc: ConleyComplex, *, chains: bool = True) -> str:
    """Deterministic text form of a Conley complex.

    The output is itself a graded complex file (strict, with the connection
    matrix as ``delta`` triplets), so it parses back with :func:`parse_complex`.
    """
    lines = [
        f"# conley complex: {len(cc.index_gens)} index generators, "
        f"{len(cc.delta)} connection matrix entries"
    ]
    lines += _header_lines(cc.poset, cc.field)
    lines += [f"gen {g.id} {g.dim} {g.grade}" for g in cc.index_gens]
    if chains:
        lines += [f"chain {g.id} : {format_expr(g.chain)}" for g in cc.index_gens]
    lines += [f"delta {r} {c} {v}" for r, c, v in cc.triplets()]
    return "\n".join(lines) + "\n"


def serialize_complex(cx: GradedComplex) -> str:
    """Text form of a graded complex in its canonical order."""
    lines = _header_lines(cx.poset, cx.field)
    lines += [f"gen {g.id} {g.dim} {g.grade}" for g in cx.generators]
    for j, col in enumerate(cx.columns):
        if col:
            lines.append(f"boundary {cx.generators[j].id} : {format_expr(cx.chain_by_id(col))}")
    return "\n".join(lines) + "\n"
