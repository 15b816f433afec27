"""Global reduction across grades and extraction of the connection matrix."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .complex import GradedComplex, Generator, add_scaled
from .field import PrimeField
from .poset import Poset
from .reduction import BOUNDARY, HOMOLOGY, PREBOUNDARY, ReducedState, clearing_reduce


@dataclass(frozen=True)
class IndexGenerator:
    """A Conley index generator.

    ``id`` is the id of its pivot generator.  ``chain`` is the final column
    label in the original basis (the image of the generator under the
    contraction's inclusion); ``cycle`` the relative cycle it came from.
    """

    id: str
    grade: object
    dim: int
    pivot: int
    chain: dict[str, int]
    cycle: dict[str, int]


@dataclass
class ConleyComplex:
    poset: Poset
    field: PrimeField
    index_gens: list[IndexGenerator]
    delta: dict[tuple[int, int], int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.index_gens)

    def matrix(self) -> np.ndarray:
        n = len(self.index_gens)
        m = linalg.zeros((n, n), self.field.p)
        for (i, j), v in self.delta.items():
            m[i, j] = v
        return m

    def triplets(self) -> list[tuple[str, str, int]]:
        """``(row id, column id, coefficient)``, column-major."""
        ids = [g.id for g in self.index_gens]
        ordered = sorted(self.delta.items(), key=lambda e: (e[0][1], e[0][0]))
        return [(ids[i], ids[j], v) for (i, j), v in ordered]

    def index_dims(self) -> dict[tuple, int]:
        out: dict[tuple, int] = {}
        for g in self.index_gens:
            out[(g.grade, g.dim)] = out.get((g.grade, g.dim), 0) + 1
        return out

    def as_graded_complex(self) -> GradedComplex:
        """The Conley complex itself, a strict graded complex."""
        gens = [Generator(g.id, g.dim, g.grade) for g in self.index_gens]
        cols: list[dict[int, int]] = [{} for _ in gens]
        for (i, j), v in self.delta.items():
            cols[j][i] = v
        return GradedComplex.from_ordered(self.poset, gens, cols, self.field)

    def violations(self) -> list[str]:
        """Broken Conley-complex invariants (empty when all hold)."""
        out = []
        p = self.field.p
        m = self.matrix()
        if m.size and linalg.matmul(m, m, p=p).any():
            out.append("delta^2 != 0")
        for (i, j), _ in sorted(self.delta.items()):
            gi, gj = self.index_gens[i], self.index_gens[j]
            if gi.grade == gj.grade:
                out.append(f"diagonal block entry at ({gi.id}, {gj.id})")
            elif not self.poset.leq(gi.grade, gj.grade):
                out.append(f"unfiltered entry at ({gi.id}, {gj.id})")
            if gi.dim != gj.dim - 1:
                out.append(f"degree violation at ({gi.id}, {gj.id})")
        return out


def prune(state: ReducedState) -> ReducedState:
    """Drop preboundary rows and boundary columns; does not change the result."""
    out = state.copy()
    drop = frozenset(state.positions(PREBOUNDARY))
    out.dropped_rows = state.dropped_rows | drop
    for j, k in enumerate(out.kind):
        col = out.columns[j]
        if k == BOUNDARY:
            out.columns[j] = None
        elif col is not None:
            for r in drop.intersection(col):
                del col[r]
    return out


def global_reduce(state: ReducedState, order: str = "descending") -> ReducedState:
    """Clear every matched-boundary row from the homology columns.

    Afterwards the row of each pivot ``partner(w)`` is zero outside column
    ``w`` in every homology column.  ``order="descending"`` treats each
    target column once, clearing rows from the bottom up; since a
    preboundary column's lowest entry is its partner row, one pass suffices.
    ``order="forward"``/``"reverse"`` instead sweep over the preboundaries in
    ascending/descending position until nothing is left, which gives the
    same matrix.
    """
    out = state.copy()
    p = out.p
    cols, labels = out.columns, out.labels
    pre_at = {r: w for w, r in out.partner.items()}
    targets = out.positions(HOMOLOGY)
    step = out.step3_log

    def eliminate(c: int, r: int) -> None:
        w = pre_at[r]
        coeff = -cols[c][r] * pow(cols[w][r], -1, p) % p
        add_scaled(cols[c], cols[w], coeff, p)
        add_scaled(labels[c], labels[w], coeff, p)
        step.append((w, c, coeff))

    if order == "descending":
        for c in targets:
            col = cols[c]
            r = max((r for r in col if r in pre_at), default=None)
            while r is not None:
                eliminate(c, r)
                r = max((r for r in col if r in pre_at), default=None)
    elif order in ("forward", "reverse"):
        sweep = sorted(out.partner, reverse=order == "reverse")
        dirty = True
        while dirty:
            dirty = False
            for w in sweep:
                r = out.partner[w]
                for c in targets:
                    if r in cols[c]:
                        eliminate(c, r)
                        dirty = True
    else:
        raise ValueError(f"unknown order {order!r}")
    out.globally_reduced = True
    return out


def extract(state: ReducedState) -> ConleyComplex:
    """Restrict the globally reduced matrix to the homology positions."""
    cx = state.complex
    hpos = state.positions(HOMOLOGY)
    at = {j: i for i, j in enumerate(hpos)}
    cycles = {j: z for cell in state.sep.H.values() for j, z in cell}
    gens = []
    delta = {}
    for i, j in enumerate(hpos):
        g = cx.generators[j]
        gens.append(
            IndexGenerator(
                id=g.id,
                grade=g.grade,
                dim=g.dim,
                pivot=j,
                chain=cx.chain_by_id(state.labels[j]),
                cycle=cx.chain_by_id(cycles[j]),
            )
        )
        for r, v in state.columns[j].items():
            if r in at:
                delta[(at[r], i)] = v
    return ConleyComplex(cx.poset, cx.field, gens, delta)


def compute_connection_matrix(
    cx: GradedComplex,
    *,
    use_prune: bool = True,
    order: str = "descending",
    parallel: bool = False,
) -> ConleyComplex:
    """Conley complex and connection matrix of ``cx``."""
    state = clearing_reduce(cx, parallel=parallel)
    if use_prune:
        state = prune(state)
    return extract(global_reduce(state, order=order))

