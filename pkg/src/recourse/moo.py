"""From-scratch NSGA-III over mixed numeric/categorical genotypes.

Genotypes are encoded rows: numeric genes range over the standardized
training interval of their feature, categorical genes are ordinal codes.
All objective vectors are minimized; callers negate fitness-style
objectives before handing them to the engine. Every stochastic choice flows
through one seeded generator, so runs are reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from .data import CATEGORICAL, FeatureMeta

# divisions per objective count, sized so the reference-point count stays
# in a workable band (50..126) as the number of objectives grows
DEFAULT_DIVISIONS = {2: 49, 3: 12, 4: 7, 5: 5, 6: 4, 7: 3}


@dataclass(frozen=True)
class MooConfig:
    """Hyper-parameters of one optimizer run."""

    objective_count: int
    generations: int = 10
    pc: float = 0.6
    pm: float = 0.3
    eta_m: float = 20.0
    divisions: int | None = None
    seed: int = 0

    def resolved_divisions(self) -> int:
        if self.divisions is not None:
            return self.divisions
        if self.objective_count in DEFAULT_DIVISIONS:
            return DEFAULT_DIVISIONS[self.objective_count]
        return max(1, DEFAULT_DIVISIONS[max(DEFAULT_DIVISIONS)] - 1)

    @property
    def reference_point_count(self) -> int:
        p = self.resolved_divisions()
        return comb(self.objective_count + p - 1, p)

    @property
    def population_size(self) -> int:
        h = self.reference_point_count
        return h + (-h) % 4  # smallest multiple of 4 >= h


@dataclass
class Population:
    """Genotypes with their cached objective vectors and front ranks."""

    genotypes: np.ndarray
    objectives: np.ndarray
    ranks: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=int))

    @property
    def size(self) -> int:
        return self.genotypes.shape[0]

    def front(self, rank: int = 0) -> np.ndarray:
        return np.flatnonzero(self.ranks == rank)


def das_dennis_points(n_objectives: int, divisions: int) -> np.ndarray:
    """Uniform simplex lattice weight vectors (Das-Dennis construction)."""
    if n_objectives < 2 or divisions < 1:
        raise ValueError("need at least 2 objectives and 1 division")
    points = []

    def recurse(prefix, remaining, slots):
        if slots == 1:
            points.append(prefix + [remaining])
            return
        for k in range(remaining + 1):
            recurse(prefix + [k], remaining - k, slots - 1)

    recurse([], divisions, n_objectives)
    return np.asarray(points, dtype=float) / divisions


def dominates(a: np.ndarray, b: np.ndarray) -> bool:
    """Pareto dominance for minimization: <= everywhere and < somewhere."""
    return bool(np.all(a <= b) and np.any(a < b))


def fast_nondominated_sort(objectives) -> list[list[int]]:
    """Deb's fast non-dominated sorting; returns fronts as index lists."""
    F = np.asarray(objectives, dtype=float)
    n = F.shape[0]
    dominated_by: list[list[int]] = [[] for _ in range(n)]
    domination_count = np.zeros(n, dtype=int)
    for i in range(n):
        # vectorized pairwise comparison of i against all j > i
        less_eq = np.all(F[i] <= F[i + 1 :], axis=1)
        less = np.any(F[i] < F[i + 1 :], axis=1)
        ge = np.all(F[i] >= F[i + 1 :], axis=1)
        gt = np.any(F[i] > F[i + 1 :], axis=1)
        for off in np.flatnonzero(less_eq & less):
            j = i + 1 + off
            dominated_by[i].append(j)
            domination_count[j] += 1
        for off in np.flatnonzero(ge & gt):
            j = i + 1 + off
            dominated_by[j].append(i)
            domination_count[i] += 1
    fronts = [sorted(np.flatnonzero(domination_count == 0).tolist())]
    while fronts[-1]:
        nxt = []
        for i in fronts[-1]:
            for j in dominated_by[i]:
                domination_count[j] -= 1
                if domination_count[j] == 0:
                    nxt.append(j)
        fronts.append(sorted(nxt))
    return fronts[:-1]


def _achievement_extremes(F: np.ndarray) -> np.ndarray:
    """Index of the extreme point along each objective axis (ASF argmin)."""
    m = F.shape[1]
    extremes = np.empty(m, dtype=int)
    for i in range(m):
        w = np.full(m, 1e-6)
        w[i] = 1.0
        extremes[i] = int(np.argmin((F / w).max(axis=1)))
    return extremes


def _normalize(F: np.ndarray) -> np.ndarray:
    """Ideal-point translation and intercept normalization with fallback."""
    ideal = F.min(axis=0)
    T = F - ideal
    extremes = _achievement_extremes(T)
    intercepts = None
    E = T[extremes]
    if len(set(extremes.tolist())) == F.shape[1]:
        try:
            plane = np.linalg.solve(E, np.ones(F.shape[1]))
            candidate = 1.0 / plane
            if np.all(np.isfinite(candidate)) and np.all(candidate > 1e-12):
                intercepts = candidate
        except np.linalg.LinAlgError:
            intercepts = None
    if intercepts is None:
        intercepts = T.max(axis=0)
    intercepts = np.where(intercepts > 1e-12, intercepts, 1.0)
    return T / intercepts


def _associate(N: np.ndarray, refs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Nearest reference line per normalized point (index, perpendicular distance)."""
    norm_sq = (refs**2).sum(axis=1)
    proj = (N @ refs.T) / norm_sq  # scalar projection coefficient per line
    perp = np.sqrt(
        np.maximum(0.0, (N**2).sum(axis=1, keepdims=True) - proj**2 * norm_sq[None, :])
    )
    idx = perp.argmin(axis=1)
    return idx, perp[np.arange(N.shape[0]), idx]


def normalize_and_niche(
    objectives: np.ndarray,
    fronts: list[list[int]],
    ref_points: np.ndarray,
    pop_size: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """NSGA-III survival selection; returns the selected indices.

    Whole fronts are taken while they fit; the last partial front is filled
    by associating candidates to reference lines after normalization and
    repeatedly serving the reference point with the smallest niche count.
    """
    selected: list[int] = []
    last = 0
    while last < len(fronts) and len(selected) + len(fronts[last]) <= pop_size:
        selected.extend(fronts[last])
        last += 1
    if len(selected) == pop_size or last >= len(fronts):
        return np.asarray(selected[:pop_size], dtype=int)

    partial = list(fronts[last])
    considered = selected + partial
    F = np.asarray(objectives, dtype=float)[considered]
    normalized = _normalize(F)
    assoc, dist = _associate(normalized, ref_points)

    n_selected = len(selected)
    niche_count = np.zeros(ref_points.shape[0], dtype=int)
    for r in assoc[:n_selected]:
        niche_count[r] += 1

    # candidates from the partial front grouped by their reference point
    pending: dict[int, list[int]] = {}
    for pos in range(n_selected, len(considered)):
        pending.setdefault(int(assoc[pos]), []).append(pos)

    active = np.ones(ref_points.shape[0], dtype=bool)
    k = pop_size - n_selected
    chosen: list[int] = []
    while len(chosen) < k:
        candidates = np.flatnonzero(active)
        min_count = niche_count[candidates].min()
        ties = candidates[niche_count[candidates] == min_count]
        j = int(ties[rng.integers(len(ties))]) if len(ties) > 1 else int(ties[0])
        members = pending.get(j, [])
        if not members:
            active[j] = False
            continue
        if niche_count[j] == 0:
            pick = min(members, key=lambda pos: dist[pos])
        else:
            pick = members[rng.integers(len(members))]
        members.remove(pick)
        chosen.append(considered[pick])
        niche_count[j] += 1
    return np.asarray(selected + chosen, dtype=int)


def two_point_crossover(
    a: np.ndarray, b: np.ndarray, pc: float, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """With probability pc, swap the gene segment between two random cuts."""
    child_a, child_b = a.copy(), b.copy()
    m = a.shape[0]
    if m >= 2 and rng.random() < pc:
        i, j = sorted(rng.choice(np.arange(1, m + 1), size=2, replace=False).tolist())
        child_a[i:j], child_b[i:j] = b[i:j].copy(), a[i:j].copy()
    return child_a, child_b


def polynomial_mutation_mixed(
    genotype: np.ndarray,
    pm: float,
    eta_m: float,
    metas: list[FeatureMeta],
    rng: np.random.Generator,
) -> np.ndarray:
    """Mutate an individual with probability pm, each gene at rate 1/m.

    Numeric genes move by bounded polynomial mutation inside the encoded
    training interval; categorical genes resample uniformly among the other
    categories.
    """
    out = genotype.copy()
    m = out.shape[0]
    if rng.random() >= pm:
        return out
    for j, meta in enumerate(metas):
        if rng.random() >= 1.0 / m:
            continue
        if meta.kind == CATEGORICAL:
            k = meta.n_categories
            if k < 2:
                continue
            current = int(round(out[j]))
            shift = int(rng.integers(1, k))
            out[j] = float((current + shift) % k)
            continue
        lo, hi = meta.encoded_bounds()
        if hi <= lo:
            continue
        x = out[j]
        u = rng.random()
        d1 = (x - lo) / (hi - lo)
        d2 = (hi - x) / (hi - lo)
        if u < 0.5:
            dq = (2 * u + (1 - 2 * u) * (1 - d1) ** (eta_m + 1)) ** (1 / (eta_m + 1)) - 1
        else:
            dq = 1 - (2 * (1 - u) + 2 * (u - 0.5) * (1 - d2) ** (eta_m + 1)) ** (1 / (eta_m + 1))
        out[j] = float(np.clip(x + dq * (hi - lo), lo, hi))
    return out


def evolve(
    evaluate,
    init: np.ndarray,
    metas: list[FeatureMeta],
    cfg: MooConfig,
    on_generation=None,
) -> Population:
    """Run the NSGA-III loop and return the final population.

    `evaluate` maps a genotype matrix to an objective matrix with
    `cfg.objective_count` columns (all minimized); it is called once per
    generation on the whole offspring batch.
    """
    rng = np.random.default_rng(cfg.seed)
    refs = das_dennis_points(cfg.objective_count, cfg.resolved_divisions())
    pop_size = cfg.population_size

    genotypes = np.asarray(init, dtype=float).copy()
    objectives = _evaluated(evaluate, genotypes, cfg, generation=0)
    genotypes, objectives, ranks = _survival(genotypes, objectives, refs, pop_size, rng)
    if on_generation is not None:
        on_generation(0, Population(genotypes, objectives, ranks))

    for gen in range(1, cfg.generations + 1):
        children = []
        order = rng.permutation(genotypes.shape[0])
        for i in range(0, len(order) - 1, 2):
            a, b = genotypes[order[i]], genotypes[order[i + 1]]
            ca, cb = two_point_crossover(a, b, cfg.pc, rng)
            children.append(polynomial_mutation_mixed(ca, cfg.pm, cfg.eta_m, metas, rng))
            children.append(polynomial_mutation_mixed(cb, cfg.pm, cfg.eta_m, metas, rng))
        offspring = np.asarray(children)
        off_objectives = _evaluated(evaluate, offspring, cfg, generation=gen)
        genotypes = np.vstack([genotypes, offspring])
        objectives = np.vstack([objectives, off_objectives])
        genotypes, objectives, ranks = _survival(genotypes, objectives, refs, pop_size, rng)
        if on_generation is not None:
            on_generation(gen, Population(genotypes, objectives, ranks))

    return Population(genotypes=genotypes, objectives=objectives, ranks=ranks)


def _evaluated(evaluate, genotypes: np.ndarray, cfg: MooConfig, generation: int) -> np.ndarray:
    try:
        objectives = np.asarray(evaluate(genotypes), dtype=float)
    except Exception as exc:
        raise RuntimeError(f"objective evaluation failed at generation {generation}: {exc}") from exc
    if objectives.shape != (genotypes.shape[0], cfg.objective_count):
        raise RuntimeError(
            f"evaluator returned shape {objectives.shape}, expected "
            f"({genotypes.shape[0]}, {cfg.objective_count}) at generation {generation}"
        )
    if not np.all(np.isfinite(objectives)):
        bad = int(np.argwhere(~np.isfinite(objectives))[0][0])
        raise RuntimeError(
            f"non-finite objective for individual {bad} at generation {generation}"
        )
    return objectives


def _survival(genotypes, objectives, refs, pop_size, rng):
    if genotypes.shape[0] <= pop_size:
        fronts = fast_nondominated_sort(objectives)
        ranks = _ranks_from_fronts(fronts, genotypes.shape[0])
        return genotypes, objectives, ranks
    fronts = fast_nondominated_sort(objectives)
    keep = normalize_and_niche(objectives, fronts, refs, pop_size, rng)
    genotypes, objectives = genotypes[keep], objectives[keep]
    fronts = fast_nondominated_sort(objectives)
    return genotypes, objectives, _ranks_from_fronts(fronts, genotypes.shape[0])


def _ranks_from_fronts(fronts: list[list[int]], n: int) -> np.ndarray:
    ranks = np.zeros(n, dtype=int)
    for r, front in enumerate(fronts):
        for i in front:
            ranks[i] = r
    return ranks
