"""Poset-graded chain complexes with a fixed basis.

A complex is an ordered list of generators together with the boundary of
each one, stored column-major: ``columns[j]`` maps row positions to nonzero
coefficients.  Positions follow the canonical global order (poset linear
extension, then dimension, then input order), so every (grade, dim) cell is
a contiguous range of positions.
"""

from __future__ import annotations

from collections.abc import Hashable, Iterable, Mapping
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .field import PrimeField
from .poset import Poset

Chain = dict  # position -> nonzero residue


@dataclass(frozen=True)
class Generator:
    id: str
    dim: int
    grade: Hashable


class ComplexError(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    kind: str  # duplicate-id | order | degree | filtration | d-squared
    row: str | None
    col: str | None
    message: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def __str__(self) -> str:
        return "\n".join(map(str, self.violations)) if self.violations else "valid"


class ValidationError(ComplexError):
    def __init__(self, report: ValidationReport) -> None:
        super().__init__(str(report))
        self.report = report


def add_scaled(target: Chain, source: Chain, c: int, p: int) -> None:
    """``target += c * source`` in place, dropping zeros."""
    get = target.get
    for r, v in source.items():
        x = (get(r, 0) + c * v) % p
        if x:
            target[r] = x
        else:
            del target[r]


def scaled(source: Chain, c: int, p: int) -> Chain:
    c %= p
    if not c:
        return {}
    return {r: v * c % p for r, v in source.items()}


class GradedComplex:
    """A P-graded chain complex over GF(p) in a fixed ordered basis.

    Build one with :meth:`from_boundaries` (which sorts into the canonical
    order) or :meth:`from_ordered` (positions taken as given).  Instances are
    not validated on construction; call :func:`validate`.
    """

    def __init__(
        self,
        poset: Poset,
        generators: Iterable[Generator],
        columns: Iterable[Mapping[int, int]],
        field: PrimeField | None = None,
        meta: dict | None = None,
    ) -> None:
        self.poset = poset
        self.field = field or PrimeField(2)
        p = self.field.p
        self.generators: tuple[Generator, ...] = tuple(generators)
        self.columns: list[Chain] = []
        n = len(self.generators)
        for col in columns:
            c = {}
            for r, v in col.items():
                if not 0 <= r < n:
                    raise ComplexError(f"row position {r} out of range")
                v %= p
                if v:
                    c[r] = v
            self.columns.append(c)
        if len(self.columns) != n:
            raise ComplexError("need exactly one boundary column per generator")
        for g in self.generators:
            poset.position(g.grade)
        self.index = {g.id: j for j, g in enumerate(self.generators)}
        self.meta = dict(meta or {})
        self.cells: dict[tuple, range] = {}
        prev = None
        for j, g in enumerate(self.generators):
            key = (g.grade, g.dim)
            if key != prev and key in self.cells:
                continue  # out-of-order input; validate() reports it
            start = self.cells[key].start if key == prev else j
            self.cells[key] = range(start, j + 1)
            prev = key

    @classmethod
    def from_ordered(cls, poset, generators, columns, field=None, meta=None):
        return cls(poset, generators, columns, field, meta)

    @classmethod
    def from_boundaries(
        cls,
        poset: Poset,
        generators: Iterable[Generator],
        boundaries: Mapping[str, Mapping[str, int]],
        field: PrimeField | None = None,
        meta: dict | None = None,
    ) -> GradedComplex:
        """Sort ``generators`` into canonical order and attach boundaries.

        ``boundaries`` maps a generator id to ``{face id: coefficient}``;
        missing ids have zero boundary.
        """
        gens = list(generators)
        seen = set()
        for g in gens:
            if g.id in seen:
                raise ComplexError(f"duplicate generator id {g.id!r}")
            seen.add(g.id)
        for gid in boundaries:
            if gid not in seen:
                raise ComplexError(f"boundary given for undeclared id {gid!r}")
        order = sorted(
            range(len(gens)),
            key=lambda i: (poset.position(gens[i].grade), gens[i].dim, i),
        )
        ordered = [gens[i] for i in order]
        pos = {g.id: j for j, g in enumerate(ordered)}
        columns = []
        for g in ordered:
            col: dict[int, int] = {}
            for face, coeff in boundaries.get(g.id, {}).items():
                if face not in pos:
                    raise ComplexError(f"undeclared id {face!r} in boundary of {g.id!r}")
                col[pos[face]] = col.get(pos[face], 0) + coeff
            columns.append(col)
        return cls(poset, ordered, columns, field, meta)

    def __len__(self) -> int:
        return len(self.generators)

    def __repr__(self) -> str:
        return (
            f"GradedComplex({len(self)} generators, |P|={len(self.poset)}, "
            f"p={self.field.p})"
        )

    @property
    def p(self) -> int:
        return self.field.p

    def grade(self, j: int):
        return self.generators[j].grade

    def dim(self, j: int) -> int:
        return self.generators[j].dim

    def dims(self) -> list[int]:
        return sorted({g.dim for g in self.generators})

    def cell(self, p, n: int) -> range:
        """Positions of the grade-``p`` generators of dimension ``n``."""
        r = self.cells.get((p, n))
        if r is None:
            return range(0)
        return r

    def cell_ids(self, p, n: int) -> list[str]:
        return [self.generators[j].id for j in self.cell(p, n)]

    def grade_start(self, p) -> int:
        """First position of grade ``p`` (or where it would start)."""
        k = self.poset.position(p)
        for j, g in enumerate(self.generators):
            if self.poset.position(g.grade) >= k:
                return j
        return len(self.generators)

    def boundary(self, chain: Mapping[int, int]) -> Chain:
        """Boundary of a chain given as ``{position: coefficient}``."""
        out: Chain = {}
        for j, c in chain.items():
            add_scaled(out, self.columns[j], c, self.p)
        return out

    def chain_by_id(self, chain: Mapping[int, int]) -> dict[str, int]:
        return {self.generators[j].id: c for j, c in sorted(chain.items())}

    def dense(self) -> np.ndarray:
        n = len(self)
        m = linalg.zeros((n, n), self.p)
        for j, col in enumerate(self.columns):
            for r, v in col.items():
                m[r, j] = v
        return m

    def entries(self):
        """All nonzero ``(row, col, coeff)`` triples, column-major."""
        for j, col in enumerate(self.columns):
            for r in sorted(col):
                yield r, j, col[r]


def canonical_order_key(cx: GradedComplex, j: int) -> tuple:
    g = cx.generators[j]
    return (cx.poset.position(g.grade), g.dim)


def validate(cx: GradedComplex) -> ValidationReport:
    """Check every structural invariant and list the violations found."""
    report = ValidationReport()
    add = report.violations.append
    gens = cx.generators
    seen: dict[str, int] = {}
    for j, g in enumerate(gens):
        if g.id in seen:
            add(Violation("duplicate-id", None, g.id, f"id {g.id!r} used twice"))
        seen[g.id] = j
    for j in range(1, len(gens)):
        if canonical_order_key(cx, j - 1) > canonical_order_key(cx, j):
            add(
                Violation(
                    "order",
                    None,
                    gens[j].id,
                    f"{gens[j].id!r} placed after {gens[j - 1].id!r} "
                    "against the poset/dimension order",
                )
            )
    leq = cx.poset.leq
    for j, col in enumerate(cx.columns):
        gj = gens[j]
        for r in sorted(col):
            gr = gens[r]
            if gr.dim != gj.dim - 1:
                add(
                    Violation(
                        "degree",
                        gr.id,
                        gj.id,
                        f"boundary of {gj.id!r} (dim {gj.dim}) hits {gr.id!r} (dim {gr.dim})",
                    )
                )
            if not leq(gr.grade, gj.grade):
                add(
                    Violation(
                        "filtration",
                        gr.id,
                        gj.id,
                        f"boundary of {gj.id!r} (grade {gj.grade!r}) hits "
                        f"{gr.id!r} (grade {gr.grade!r})",
                    )
                )
    for j in range(len(gens)):
        dd = cx.boundary(cx.columns[j])
        for r in sorted(dd):
            add(
                Violation(
                    "d-squared",
                    gens[r].id,
                    gens[j].id,
                    f"d(d({gens[j].id})) has coefficient {dd[r]} at {gens[r].id!r}",
                )
            )
    return report


def block(cx: GradedComplex, p, q, n: int) -> np.ndarray:
    """Dense twisted differential from grade ``q`` dim ``n`` to grade ``p`` dim ``n-1``."""
    rows = cx.cell(p, n - 1)
    cols = cx.cell(q, n)
    m = linalg.zeros((len(rows), len(cols)), cx.p)
    if not rows or not cols:
        return m
    for jj, j in enumerate(cols):
        for r, v in cx.columns[j].items():
            if r in rows:
                m[r - rows.start, jj] = v
    return m


def relative_homology_dims(cx: GradedComplex) -> dict[tuple, int]:
    """``(p, n) -> dim H_n`` of each diagonal complex, nonzero entries only.

    Plain dense elimination per diagonal block; deliberately independent of
    the reduction module so it can serve as its oracle.
    """
    out = {}
    for p in cx.poset.extension:
        dims = sorted({n for (q, n) in cx.cells if q == p})
        for n in dims:
            size = len(cx.cell(p, n))
            ker = size - linalg.rank(block(cx, p, p, n), cx.p)
            im = linalg.rank(block(cx, p, p, n + 1), cx.p)
            if ker - im:
                out[(p, n)] = ker - im
    return out


def homology_dims(cx: GradedComplex) -> dict[int, int]:
    """Total homology ``n -> dim H_n(C)``, nonzero entries only."""
    by_dim: dict[int, list[int]] = {}
    for j, g in enumerate(cx.generators):
        by_dim.setdefault(g.dim, []).append(j)

    def rank_of(n: int) -> int:
        cols = by_dim.get(n, [])
        rows = by_dim.get(n - 1, [])
        if not cols or not rows:
            return 0
        ri = {r: i for i, r in enumerate(rows)}
        m = linalg.zeros((len(rows), len(cols)), cx.p)
        for jj, j in enumerate(cols):
            for r, v in cx.columns[j].items():
                m[ri[r], jj] = v
        return linalg.rank(m, cx.p)

    out = {}
    for n in sorted(by_dim):
        h = len(by_dim[n]) - rank_of(n) - rank_of(n + 1)
        if h:
            out[n] = h
    return out


def restrict_downset(cx: GradedComplex, p) -> GradedComplex:
    """The subcomplex on generators of grade ``<= p``."""
    keep = [j for j, g in enumerate(cx.generators) if cx.poset.leq(g.grade, p)]
    new = {j: k for k, j in enumerate(keep)}
    cols = []
    for j in keep:
        col = cx.columns[j]
        if any(r not in new for r in col):
            raise ComplexError(f"boundary of {cx.generators[j].id!r} leaves the down-set")
        cols.append({new[r]: v for r, v in col.items()})
    return GradedComplex.from_ordered(
        cx.poset, [cx.generators[j] for j in keep], cols, cx.field
    )
