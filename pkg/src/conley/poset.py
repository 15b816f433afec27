"""Finite posets with a fixed linear extension."""

from __future__ import annotations

from collections.abc import Hashable, Iterable, Sequence

import numpy as np


class PosetError(ValueError):
    pass


class Poset:
    """A finite partial order stored as a closed boolean relation table.

    ``extension`` is a linear extension computed by Kahn's algorithm, ties
    broken by declaration order, so every downstream ordering is reproducible.
    """

    def __init__(self, elements: Sequence[Hashable], relation: np.ndarray) -> None:
        self.elements: tuple = tuple(elements)
        self._index = {e: i for i, e in enumerate(self.elements)}
        if len(self._index) != len(self.elements):
            raise PosetError("duplicate poset element")
        rel = np.array(relation, dtype=bool)
        n = len(self.elements)
        if rel.shape != (n, n):
            raise PosetError("relation table has the wrong shape")
        if n:
            if not rel.diagonal().all():
                raise PosetError("relation is not reflexive")
            r = rel.astype(np.int64)
            if ((r @ r > 0) & ~rel).any():
                raise PosetError("relation is not transitive")
            both = rel & rel.T
            np.fill_diagonal(both, False)
            if both.any():
                i, j = map(int, np.argwhere(both)[0])
                raise PosetError(
                    f"cycle between {self.elements[i]!r} and {self.elements[j]!r}"
                )
        self._rel = rel
        self._rel.setflags(write=False)
        self.extension: tuple = tuple(self.elements[i] for i in self._kahn())
        self._position = {e: k for k, e in enumerate(self.extension)}

    def _kahn(self) -> list[int]:
        n = len(self.elements)
        strict = self._rel.copy()
        np.fill_diagonal(strict, False)
        indeg = strict.sum(axis=0).tolist()
        done = [False] * n
        order = []
        for _ in range(n):
            i = next(k for k in range(n) if not done[k] and indeg[k] == 0)
            done[i] = True
            order.append(i)
            for j in np.flatnonzero(strict[i]):
                indeg[j] -= 1
        return order

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.extension)

    def __contains__(self, p: object) -> bool:
        try:
            return p in self._index
        except TypeError:
            return False

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poset) or set(other.elements) != set(self.elements):
            return False
        return all(
            self.leq(p, q) == other.leq(p, q) for p in self.elements for q in self.elements
        )

    def __repr__(self) -> str:
        return f"Poset({list(self.extension)!r})"

    def _idx(self, p) -> int:
        try:
            return self._index[p]
        except (KeyError, TypeError):
            raise PosetError(f"unknown poset element {p!r}") from None

    def leq(self, p, q) -> bool:
        return bool(self._rel[self._idx(p), self._idx(q)])

    def less(self, p, q) -> bool:
        return p != q and self.leq(p, q)

    def position(self, p) -> int:
        """Index of ``p`` in the linear extension."""
        self._idx(p)
        return self._position[p]

    def down_set(self, p) -> list:
        """All ``q <= p``, in extension order."""
        return [q for q in self.extension if self.leq(q, p)]

    def covers(self) -> list[tuple]:
        """Pairs ``(p, q)`` with ``q`` covering ``p``, in extension order."""
        out = []
        for p in self.extension:
            for q in self.extension:
                if self.less(p, q) and not any(
                    self.less(p, x) and self.less(x, q) for x in self.extension
                ):
                    out.append((p, q))
        return out

    def chains_between(self, p, q, max_len: int | None = None) -> list[tuple]:
        """Strictly increasing interior chains ``p < x1 < ... < xl < q``.

        Each chain is returned as the tuple ``(x1, ..., xl)``; the empty chain
        is always included.  Chains are ordered lexicographically by extension
        position.
        """
        if not self.less(p, q):
            raise PosetError(f"need {p!r} < {q!r}")
        interior = [x for x in self.extension if self.less(p, x) and self.less(x, q)]
        limit = len(interior) if max_len is None else max_len
        out: list[tuple] = []

        def grow(chain: tuple, start: int) -> None:
            out.append(chain)
            if len(chain) == limit:
                return
            for k in range(start, len(interior)):
                x = interior[k]
                if not chain or self.less(chain[-1], x):
                    grow(chain + (x,), k + 1)

        grow((), 0)
        return out


def build_poset(
    elements: Iterable[Hashable], relations: Iterable[tuple[Hashable, Hashable]] = ()
) -> Poset:
    """Poset generated by ``relations`` (pairs ``(a, b)`` meaning ``a <= b``).

    The relations may be covers or any subset of the order; the
    reflexive-transitive closure is taken.  Raises :class:`PosetError` on an
    unknown label or on a cycle.
    """
    elements = list(elements)
    index = {e: i for i, e in enumerate(elements)}
    if len(index) != len(elements):
        raise PosetError("duplicate poset element")
    n = len(elements)
    rel = np.eye(n, dtype=bool)
    for a, b in relations:
        for x in (a, b):
            if x not in index:
                raise PosetError(f"unknown poset element {x!r}")
        rel[index[a], index[b]] = True
    # Warshall closure
    for k in range(n):
        rel |= np.outer(rel[:, k], rel[k, :])
    return Poset(elements, rel)


def chain_poset(n: int) -> Poset:
    """Total order ``0 < 1 < ... < n-1`` on integer labels."""
    return build_poset(range(n), [(i, i + 1) for i in range(n - 1)])

