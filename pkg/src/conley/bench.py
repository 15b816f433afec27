"""Random graded complexes and a timing harness."""

from __future__ import annotations

import csv
import io
import math
import random
import time
from dataclasses import dataclass, replace
from itertools import combinations

import numpy as np

from .complex import Generator, GradedComplex
from .connect import compute_connection_matrix
from .field import PrimeField
from .poset import Poset, build_poset


@dataclass(frozen=True)
class GeneratorConfig:
    """Parameters for :func:`random_complex`.

    ``size`` is the target number of generators.  ``density`` is the share of
    them spent on simplices of positive dimension (0 gives a zero
    differential).  ``mix`` is the number of random filtered elementary
    basis changes per generator applied afterwards.
    """

    seed: int = 0
    n_grades: int = 3
    shape: str = "chain"  # chain | antichain | random
    size: int = 30
    max_dim: int = 2
    density: float = 0.75
    mix: float = 1.0
    characteristic: int = 2

    def __post_init__(self) -> None:
        if self.shape not in ("chain", "antichain", "random"):
            raise ValueError(f"unknown poset shape {self.shape!r}")
        if self.n_grades < 1 or self.size < 0 or self.max_dim < 0:
            raise ValueError("n_grades must be positive, size and max_dim non-negative")
        if not 0 <= self.density <= 1 or self.mix < 0:
            raise ValueError("density must lie in [0, 1] and mix be non-negative")


def random_poset(n: int, shape: str, rng: random.Random) -> Poset:
    elems = [str(i) for i in range(n)]
    if shape == "chain":
        rel = list(zip(elems, elems[1:]))
    elif shape == "antichain":
        rel = []
    else:
        rel = [(a, b) for a, b in combinations(elems, 2) if rng.random() < 0.4]
    return build_poset(elems, rel)


def random_complex(cfg: GeneratorConfig) -> GradedComplex:
    """A valid random graded complex.

    A random simplicial complex (random simplices plus all their faces) gets
    a random monotone grading, and then a random filtered change of basis
    ``D -> T^-1 D T`` hides the simplicial structure.
    """
    rng = random.Random(cfg.seed)
    fld = PrimeField(cfg.characteristic)
    p = fld.p
    poset = random_poset(cfg.n_grades, cfg.shape, rng)
    elems = list(poset.elements)
    upper = {q: [x for x in elems if poset.leq(q, x)] for q in elems}

    n_vertices = cfg.size - round(cfg.density * cfg.size) if cfg.max_dim else cfg.size
    n_vertices = max(n_vertices, min(cfg.size, cfg.max_dim + 1) if cfg.density else 0)
    grade: dict[tuple, str] = {}
    order: list[tuple] = []
    for v in range(n_vertices):
        grade[(v,)] = rng.choice(elems)
        order.append((v,))

    def add_simplex(s: tuple) -> bool:
        faces = [f for k in range(2, len(s) + 1) for f in combinations(s, k) if f not in grade]
        if len(order) + len(faces) > cfg.size:
            return False
        for f in faces:
            bounds = set(elems)
            for facet in combinations(f, len(f) - 1):
                bounds &= set(upper[grade[facet]])
            if not bounds:
                return True  # keep the faces already added, drop the rest
            cands = [x for x in elems if x in bounds]
            minimal = [x for x in cands if not any(poset.less(y, x) for y in cands)]
            grade[f] = rng.choice(minimal if rng.random() < 0.6 else cands)
            order.append(f)
        return True

    attempts = 0
    while len(order) < cfg.size and cfg.max_dim and n_vertices > 1 and attempts < 20 * cfg.size:
        attempts += 1
        k = rng.randint(1, min(cfg.max_dim, n_vertices - 1))
        add_simplex(tuple(sorted(rng.sample(range(n_vertices), k + 1))))

    def name(s: tuple) -> str:
        return "_".join(map(str, s))

    gens = [Generator(name(s), len(s) - 1, grade[s]) for s in order]
    boundaries = {}
    for s in order:
        if len(s) > 1:
            boundaries[name(s)] = {
                name(s[:i] + s[i + 1:]): 1 if p == 2 else (-1) ** i for i in range(len(s))
            }
    cx = GradedComplex.from_boundaries(poset, gens, boundaries, fld)
    cols = [dict(c) for c in cx.columns]
    _mix_basis(cx, cols, round(cfg.mix * len(cx)), rng)
    return GradedComplex.from_ordered(poset, cx.generators, cols, fld)


def _mix_basis(cx: GradedComplex, cols: list[dict], n_ops: int, rng: random.Random) -> None:
    """Apply ``n_ops`` random filtered elementary basis changes in place."""
    p = cx.p
    poset = cx.poset
    rows: dict[int, set[int]] = {}
    for j, col in enumerate(cols):
        for r in col:
            rows.setdefault(r, set()).add(j)
    by_dim: dict[int, list[int]] = {}
    for j, g in enumerate(cx.generators):
        by_dim.setdefault(g.dim, []).append(j)

    def put(col_j: int, r: int, v: int) -> None:
        v %= p
        if v:
            cols[col_j][r] = v
            rows.setdefault(r, set()).add(col_j)
        else:
            cols[col_j].pop(r, None)
            rows.get(r, set()).discard(col_j)

    for _ in range(n_ops):
        beta = rng.randrange(len(cols))
        if p > 2 and rng.random() < 0.2:
            # rescale basis element beta by a unit
            u = rng.randrange(1, p)
            ui = pow(u, -1, p)
            for r, v in list(cols[beta].items()):
                put(beta, r, v * u)
            for j in list(rows.get(beta, ())):
                put(j, beta, cols[j][beta] * ui)
            continue
        g = cx.generators[beta]
        cands = [
            a for a in by_dim[g.dim] if a != beta and poset.leq(cx.generators[a].grade, g.grade)
        ]
        if not cands:
            continue
        alpha = rng.choice(cands)
        c = rng.randrange(1, p)
        # new basis element beta' = beta + c*alpha: column op, then inverse row op
        for r, v in list(cols[alpha].items()):
            put(beta, r, cols[beta].get(r, 0) + c * v)
        for j in list(rows.get(beta, ())):
            put(j, alpha, cols[j].get(alpha, 0) - c * cols[j][beta])


def scaling_run(sizes, cfg: GeneratorConfig, repeats: int = 1) -> list[dict]:
    """Wall time of :func:`compute_connection_matrix` per target size."""
    sizes = list(sizes)
    if any(a > b for a, b in zip(sizes, sizes[1:])):
        raise ValueError("sizes must be non-decreasing")
    rows = []
    for k, size in enumerate(sizes):
        cx = random_complex(replace(cfg, size=size, seed=cfg.seed + k))
        best = math.inf
        for _ in range(repeats):
            t0 = time.perf_counter()
            compute_connection_matrix(cx)
            best = min(best, time.perf_counter() - t0)
        rows.append({"size": size, "generators": len(cx), "seconds": best})
    return rows


def loglog_slope(rows: list[dict]) -> float | None:
    """Least-squares slope of log(seconds) against log(generators)."""
    if len(rows) < 2:
        return None
    x = np.log([r["generators"] for r in rows])
    y = np.log([r["seconds"] for r in rows])
    return float(np.polyfit(x, y, 1)[0])


def to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=["size", "generators", "seconds"], lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({**r, "seconds": f"{r['seconds']:.6f}"})
    return buf.getvalue()


def corpus_configs(count: int, seed: int = 0, max_size: int = 40, max_grades: int = 6):
    """``count`` varied small configurations over characteristics 2, 3 and 5."""
    rng = random.Random(seed)
    for i in range(count):
        yield GeneratorConfig(
            seed=seed * 100_003 + i,
            size=rng.randint(min(8, max_size), max_size),
            n_grades=rng.randint(1, max_grades),
            shape=rng.choice(["chain", "antichain", "random", "random"]),
            max_dim=rng.choice([1, 2, 2, 3]),
            density=rng.choice([0.0, 0.5, 0.6, 0.6, 0.75]),
            mix=rng.choice([0.0, 0.5, 1.0, 3.0]),
            characteristic=(2, 3, 5)[i % 3],
        )
