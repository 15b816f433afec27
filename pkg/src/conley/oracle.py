"""Independent check of the connection matrix by homological perturbation.

The separating basis from step 1 gives a splitting of every (grade, dim)
cell into homology, boundary and preboundary parts.  In that basis the
boundary matrix is block-structured; from the blocks we build the Morse
contraction (f, g, h), the perturbed differential on the homology part,
and a second formula for the same differential as a sum over zigzag paths
through strictly increasing chains of the poset.

Everything here is dense and recomputed from the original boundary matrix;
only the splitting is shared with the main path.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .complex import GradedComplex
from .reduction import ReducedState

M, B, K = "M", "B", "K"
_KIND = {"H": M, "B": B, "P": K}


class SplitError(ArithmeticError):
    pass


class NilpotencyError(ArithmeticError):
    pass


@dataclass
class SplitBlocks:
    """The boundary matrix written in the splitting basis.

    ``basis`` has the splitting chains as columns (column ``j`` is the chain
    whose pivot is position ``j``), so ``d = basis^-1 D basis``.  ``kind[j]``
    is ``M``, ``B`` or ``K``.
    """

    complex: GradedComplex
    basis: np.ndarray
    basis_inv: np.ndarray
    d: np.ndarray
    kind: list[str]

    @property
    def p(self) -> int:
        return self.complex.p

    def indices(self, grade, dim: int, kind: str) -> list[int]:
        return [j for j in self.complex.cell(grade, dim) if self.kind[j] == kind]

    def morse(self) -> list[int]:
        return [j for j, k in enumerate(self.kind) if k == M]

    def block(self, p, q, target: str, source: str, n: int) -> np.ndarray:
        """``t^{pq}_{target,source}`` in dimension ``n``."""
        rows = self.indices(p, n - 1, target)
        cols = self.indices(q, n, source)
        return self.d[np.ix_(rows, cols)]

    def invariant_failures(self) -> list[str]:
        cx = self.complex
        out = []
        grades = [cx.grade(j) for j in range(len(cx))]
        for i, j in zip(*np.nonzero(self.d)):
            if grades[i] == grades[j] and (self.kind[i], self.kind[j]) != (B, K):
                out.append(
                    f"diagonal block {grades[i]!r} has a {self.kind[i]}{self.kind[j]} entry"
                )
        if self.d.size and linalg.matmul(self.d, self.d, p=self.p).any():
            out.append("d^2 != 0 in the splitting basis")
        return out


def split_blocks(state: ReducedState) -> SplitBlocks:
    """Express the original boundary matrix in the splitting basis of ``state``."""
    cx = state.complex
    p = cx.p
    n = len(cx)
    basis = linalg.zeros((n, n), p)
    kind = [""] * n
    sep = state.sep
    for cell in sep.H.values():
        for j, z in cell:
            _put(basis, j, z)
            kind[j] = M
    for cell in sep.B.values():
        for j, b in cell:
            _put(basis, j, b)
            kind[j] = B
    for cell in sep.Pre.values():
        for j, w, _ in cell:
            _put(basis, j, w)
            kind[j] = K
    if "" in kind:
        raise SplitError("splitting does not cover every position")
    try:
        basis_inv = linalg.inverse(basis, p)
    except linalg.SingularMatrixError:
        raise SplitError("splitting chains are linearly dependent") from None
    d = linalg.matmul(basis_inv, cx.dense(), basis, p=p)
    blocks = SplitBlocks(cx, basis, basis_inv, d, kind)
    failures = blocks.invariant_failures()
    if failures:
        raise SplitError("; ".join(failures))
    for grade in cx.poset.extension:
        for dim in cx.dims():
            t = blocks.block(grade, grade, B, K, dim)
            if t.shape[0] != t.shape[1] or linalg.rank(t, p) != t.shape[0]:
                raise SplitError(f"t^{grade}_BK in dimension {dim} is not invertible")
    return blocks


def _put(mat: np.ndarray, j: int, chain: dict) -> None:
    for i, v in chain.items():
        mat[i, j] = v


def zigzag_dM(blocks: SplitBlocks) -> np.ndarray:
    """Perturbed differential on the Morse part, summed over zigzag paths.

    Block ``(p, q)`` for ``p < q`` is ``t^{pq}_MM`` plus, for every chain
    ``p < x1 < ... < xl < q``, the product
    ``t^{p x1}_MK (-T_x1^-1) t^{x1 x2}_BK ... (-T_xl^-1) t^{xl q}_BM`` with
    ``T_x = t^x_BK``.  Rows and columns are the Morse positions in order.
    """
    cx = blocks.complex
    p = blocks.p
    poset = cx.poset
    morse = blocks.morse()
    at = {j: i for i, j in enumerate(morse)}
    out = linalg.zeros((len(morse), len(morse)), p)
    inv_cache: dict[tuple, np.ndarray] = {}

    def neg_inv(x, n):
        if (x, n) not in inv_cache:
            inv_cache[(x, n)] = -linalg.inverse(blocks.block(x, x, B, K, n), p) % p
        return inv_cache[(x, n)]

    for q in poset.extension:
        for lo in poset.extension:
            if not poset.less(lo, q):
                continue
            for n in cx.dims():
                cols = blocks.indices(q, n, M)
                rows = blocks.indices(lo, n - 1, M)
                if not cols or not rows:
                    continue
                total = blocks.block(lo, q, M, M, n).copy()
                for chain in poset.chains_between(lo, q):
                    if not chain:
                        continue
                    path = [blocks.block(chain[-1], q, B, M, n)]
                    for a, b in zip(chain[::-1], chain[::-1][1:]):
                        path = [blocks.block(b, a, B, K, n), neg_inv(a, n)] + path
                    path = [blocks.block(lo, chain[0], M, K, n), neg_inv(chain[0], n)] + path
                    if any(0 in m.shape for m in path):
                        continue
                    total = (total + linalg.matmul(*path, p=p)) % p
                out[np.ix_([at[r] for r in rows], [at[c] for c in cols])] = total
    return out


@dataclass
class ContractionMaps:
    """Morse contraction data, all in the splitting basis.

    ``f_tilde``/``g_tilde`` are the projection onto and inclusion of the Morse
    part, ``h_tilde`` inverts the diagonal boundary blocks, ``delta`` is the
    off-diagonal part of the differential and ``S`` the perturbation series.
    """

    blocks: SplitBlocks
    f_tilde: np.ndarray
    g_tilde: np.ndarray
    h_tilde: np.ndarray
    delta: np.ndarray
    S: np.ndarray
    f: np.ndarray
    g: np.ndarray
    h: np.ndarray
    dM: np.ndarray
    nilpotency: int

    def in_original_basis(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(f, g, h)`` rewritten against the original generators."""
        z, zi, p = self.blocks.basis, self.blocks.basis_inv, self.blocks.p
        return (
            linalg.matmul(self.f, zi, p=p),
            linalg.matmul(z, self.g, p=p),
            linalg.matmul(z, self.h, zi, p=p),
        )


def build_contraction(blocks: SplitBlocks) -> ContractionMaps:
    cx = blocks.complex
    p = blocks.p
    n = len(cx)
    grades = [cx.grade(j) for j in range(n)]
    same = np.equal.outer(np.array(grades, dtype=object), np.array(grades, dtype=object))
    delta = np.where(same, 0, blocks.d) % p
    delta = delta.astype(blocks.d.dtype)

    h_tilde = linalg.zeros((n, n), p)
    for grade in cx.poset.extension:
        for dim in cx.dims():
            rows = blocks.indices(grade, dim, K)
            cols = blocks.indices(grade, dim - 1, B)
            if rows and cols:
                inv = linalg.inverse(blocks.block(grade, grade, B, K, dim), p)
                h_tilde[np.ix_(rows, cols)] = -inv % p

    morse = blocks.morse()
    f_tilde = linalg.zeros((len(morse), n), p)
    g_tilde = linalg.zeros((n, len(morse)), p)
    for i, j in enumerate(morse):
        f_tilde[i, j] = 1
        g_tilde[j, i] = 1

    hd = linalg.matmul(h_tilde, delta, p=p)
    power = linalg.identity(n, p)
    S = linalg.zeros((n, n), p)
    m = 0
    while power.any():
        if m > len(cx.poset):
            raise NilpotencyError(f"(h delta)^{m} is still nonzero")
        S = (S + linalg.matmul(delta, power, p=p)) % p
        power = linalg.matmul(power, hd, p=p)
        m += 1

    f = (f_tilde + linalg.matmul(f_tilde, S, h_tilde, p=p)) % p
    g = (g_tilde + linalg.matmul(h_tilde, S, g_tilde, p=p)) % p
    h = (h_tilde + linalg.matmul(h_tilde, S, h_tilde, p=p)) % p
    dM = linalg.matmul(f_tilde, S, g_tilde, p=p)
    return ContractionMaps(blocks, f_tilde, g_tilde, h_tilde, delta, S, f, g, h, dM, m)


@dataclass
class ContractionReport:
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __str__(self) -> str:
        return "\n".join(self.failures) if self.failures else "all identities hold"


def _first_nonzero(a: np.ndarray) -> tuple[int, int] | None:
    nz = np.argwhere(a)
    return tuple(int(x) for x in nz[0]) if len(nz) else None


def verify_contraction(maps: ContractionMaps, cx: GradedComplex) -> ContractionReport:
    """Check the contraction identities exactly, in the original basis."""
    p = cx.p
    report = ContractionReport()
    f, g, h = maps.in_original_basis()
    d = cx.dense()
    dM = maps.dM
    nm, n = f.shape
    ids = [gen.id for gen in cx.generators]
    morse = maps.blocks.morse()
    mids = [ids[j] for j in morse]

    def expect_zero(name: str, a: np.ndarray, rows: list[str], cols: list[str]) -> None:
        w = _first_nonzero(a % p)
        if w is not None:
            report.failures.append(f"{name}: nonzero at ({rows[w[0]]}, {cols[w[1]]})")

    expect_zero("fg = 1", linalg.matmul(f, g, p=p) - linalg.identity(nm, p), mids, mids)
    gf = linalg.matmul(g, f, p=p)
    rhs = linalg.identity(n, p) + linalg.matmul(d, h, p=p) + linalg.matmul(h, d, p=p)
    expect_zero("gf = 1 + dh + hd", gf - rhs, ids, ids)
    expect_zero("fh = 0", linalg.matmul(f, h, p=p), mids, ids)
    expect_zero("hg = 0", linalg.matmul(h, g, p=p), ids, mids)
    expect_zero("h^2 = 0", linalg.matmul(h, h, p=p), ids, ids)
    expect_zero("f d = dM f", linalg.matmul(f, d, p=p) - linalg.matmul(dM, f, p=p), mids, ids)
    expect_zero("d g = g dM", linalg.matmul(d, g, p=p) - linalg.matmul(g, dM, p=p), ids, mids)

    poset = cx.poset
    grade = [gen.grade for gen in cx.generators]
    mgrade = [grade[j] for j in morse]
    for name, a, rg, cg, rows, cols in (
        ("f", f, mgrade, grade, mids, ids),
        ("g", g, grade, mgrade, ids, mids),
        ("h", h, grade, grade, ids, ids),
        ("dM", dM, mgrade, mgrade, mids, mids),
    ):
        for i, j in np.argwhere(a % p):
            if not poset.leq(rg[i], cg[j]):
                report.failures.append(f"{name} is not filtered at ({rows[i]}, {cols[j]})")
                break
    for i, j in np.argwhere(dM % p):
        if mgrade[i] == mgrade[j]:
            report.failures.append(f"dM is not strict at ({mids[i]}, {mids[j]})")
            break
    return report
