"""Per-grade column reduction with clearing.

Each grade block of the boundary matrix is reduced left to right, top
dimension first, with whole global columns being added so that every column
keeps representing the boundary of the chain recorded as its label.  The
result classifies every position of every (grade, dim) cell as a homology
representative (H), a cleared boundary (B) or a preboundary (P).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .complex import Chain, ComplexError, GradedComplex, ValidationError, add_scaled, validate

HOMOLOGY, BOUNDARY, PREBOUNDARY = "H", "B", "P"


def pivot(col: Chain) -> int | None:
    """Largest row position with a nonzero coefficient."""
    return max(col) if col else None


@dataclass
class SeparatingBasis:
    """Chains per (grade, dim) cell, each stored with its pivot position.

    ``H[(p, n)]`` and ``B[(p, n)]`` hold ``(pivot, chain)`` pairs;
    ``Pre[(p, n)]`` holds ``(pivot, chain, partner)`` where ``partner`` is the
    pivot of the boundary the preboundary is matched with in ``B[(p, n-1)]``.
    """

    H: dict[tuple, list[tuple[int, Chain]]] = field(default_factory=dict)
    B: dict[tuple, list[tuple[int, Chain]]] = field(default_factory=dict)
    Pre: dict[tuple, list[tuple[int, Chain, int]]] = field(default_factory=dict)

    def cells(self) -> list[tuple]:
        return sorted(set(self.H) | set(self.B) | set(self.Pre), key=repr)

    def matching(self) -> dict[int, int]:
        """Preboundary pivot -> matched boundary pivot."""
        return {w: partner for cell in self.Pre.values() for w, _, partner in cell}


@dataclass
class ReducedState:
    """Transformed boundary matrix plus the bookkeeping of how it was made.

    ``columns[j]`` is the boundary of the chain ``labels[j]`` (both keyed by
    global positions).  ``kind[j]`` is one of ``H``/``B``/``P``.  ``log`` holds
    the step-1 column additions ``(source, target, coefficient)``;
    ``step3_log`` those of the global reduction.
    """

    complex: GradedComplex
    columns: list[Chain | None]
    labels: list[Chain]
    kind: list[str]
    sep: SeparatingBasis
    partner: dict[int, int]
    log: list[tuple[int, int, int]]
    cleared: dict[int, Chain]
    dropped_rows: frozenset = frozenset()
    step3_log: list[tuple[int, int, int]] = field(default_factory=list)
    globally_reduced: bool = False

    @property
    def p(self) -> int:
        return self.complex.p

    def positions(self, kind: str) -> list[int]:
        return [j for j, k in enumerate(self.kind) if k == kind]

    def copy(self) -> ReducedState:
        return ReducedState(
            complex=self.complex,
            columns=[None if c is None else dict(c) for c in self.columns],
            labels=[dict(c) for c in self.labels],
            kind=list(self.kind),
            sep=self.sep,
            partner=dict(self.partner),
            log=list(self.log),
            cleared=self.cleared,
            dropped_rows=self.dropped_rows,
            step3_log=list(self.step3_log),
            globally_reduced=self.globally_reduced,
        )


@dataclass
class _GradeResult:
    columns: dict[int, Chain]
    labels: dict[int, Chain]
    kind: dict[int, str]
    partner: dict[int, int]
    log: list[tuple[int, int, int]]
    cleared: dict[int, Chain]
    H: dict[tuple, list] = field(default_factory=dict)
    B: dict[tuple, list] = field(default_factory=dict)
    Pre: dict[tuple, list] = field(default_factory=dict)


def _reduce_grade(cx: GradedComplex, grade, clearing: bool) -> _GradeResult:
    p = cx.p
    present = [n for (q, n) in cx.cells if q == grade]
    dims = range(max(present), min(present) - 1, -1) if present else range(0)
    positions = [j for n in dims for j in cx.cell(grade, n)]
    cols = {j: dict(cx.columns[j]) for j in positions}
    labels = {j: {j: 1} for j in positions}
    res = _GradeResult(cols, labels, {}, {}, [], {})
    boundaries: list[tuple[int, Chain]] = []  # B of the dimension about to be reduced

    for n in dims:
        cell = cx.cell(grade, n)
        rows = cx.cell(grade, n - 1)
        lo = rows.start if rows else None
        b_at = {rho: b for rho, b in boundaries}
        res.B[(grade, n)] = [(rho, dict(b)) for rho, b in boundaries]

        if clearing:
            for rho, b in boundaries:
                labels[rho] = dict(b)
                cols[rho] = cx.boundary(b)
                res.cleared[rho] = b
                res.kind[rho] = BOUNDARY

        pivot_of: dict[int, int] = {}
        for j in cell:
            if j in res.cleared:
                continue
            col, lab = cols[j], labels[j]
            while True:
                r = max(col) if col and lo is not None else None
                if r is None or r < lo:
                    r = None
                    break
                k = pivot_of.get(r)
                if k is None:
                    break
                c = -col[r] * pow(cols[k][r], -1, p) % p
                add_scaled(col, cols[k], c, p)
                add_scaled(lab, labels[k], c, p)
                res.log.append((k, j, c))
            if j in b_at:
                # only reached without clearing: the column reduced to a relative cycle
                labels[j] = dict(b_at[j])
                cols[j] = cx.boundary(b_at[j])
                res.kind[j] = BOUNDARY
                if r is not None:
                    raise ComplexError("boundary column failed to reduce; is d^2 = 0?")
            elif r is None:
                res.kind[j] = HOMOLOGY
            else:
                pivot_of[r] = j
                res.kind[j] = PREBOUNDARY
                res.partner[j] = r

        res.H[(grade, n)] = [(j, dict(labels[j])) for j in cell if res.kind[j] == HOMOLOGY]
        res.Pre[(grade, n)] = [
            (j, dict(labels[j]), res.partner[j]) for j in cell if res.kind[j] == PREBOUNDARY
        ]
        boundaries = []
        for j, _, r in res.Pre[(grade, n)]:
            b = {i: v for i, v in cols[j].items() if i in rows}
            boundaries.append((r, b))
        boundaries.sort()
    return res


def clearing_reduce(
    cx: GradedComplex,
    *,
    clearing: bool = True,
    parallel: bool = False,
    check: bool = True,
) -> ReducedState:
    """Reduce every grade block of ``cx`` and record a separating basis.

    ``clearing=False`` reduces the columns that clearing would skip as well
    (they end up as relative cycles and are then classified as boundaries),
    which is only useful for cross-checking.  ``parallel=True`` reduces the
    grades on a thread pool; the merge is in extension order, so the result is
    identical to the sequential run.
    """
    if check:
        report = validate(cx)
        if not report.ok:
            raise ValidationError(report)
    grades = list(cx.poset.extension)
    if parallel and len(grades) > 1:
        with ThreadPoolExecutor() as pool:
            results = list(pool.map(lambda g: _reduce_grade(cx, g, clearing), grades))
    else:
        results = [_reduce_grade(cx, g, clearing) for g in grades]

    n = len(cx)
    columns: list[Chain | None] = [None] * n
    labels: list[Chain] = [{}] * n
    kind = [""] * n
    sep = SeparatingBasis()
    partner: dict[int, int] = {}
    log: list[tuple[int, int, int]] = []
    cleared: dict[int, Chain] = {}
    for res in results:
        for j, c in res.columns.items():
            columns[j] = c
            labels[j] = res.labels[j]
            kind[j] = res.kind[j]
        sep.H.update(res.H)
        sep.B.update(res.B)
        sep.Pre.update(res.Pre)
        partner.update(res.partner)
        log.extend(res.log)
        cleared.update(res.cleared)
    return ReducedState(cx, columns, labels, kind, sep, partner, log, cleared)


def conley_index_dims(state: ReducedState) -> dict[tuple, int]:
    """``(p, n) -> |H^p_n|``, nonzero entries only."""
    return {cell: len(h) for cell, h in state.sep.H.items() if h}


def replay_transform(state: ReducedState) -> list[Chain]:
    """Rebuild the basis-change columns from the step-1 log alone.

    Column ``j`` of the result is the chain obtained by replaying the logged
    additions on the identity and then overwriting cleared positions with
    their boundary chains; it must equal ``state.labels[j]``.
    """
    p = state.p
    cx = state.complex
    t: list[Chain] = [{j: 1} for j in range(len(cx))]
    for src, tgt, c in state.log:
        add_scaled(t[tgt], t[src], c, p)
    for j in range(len(cx)):
        if state.kind[j] == BOUNDARY:
            b = next(ch for rho, ch in state.sep.B[(cx.grade(j), cx.dim(j))] if rho == j)
            t[j] = dict(b)
    return t
