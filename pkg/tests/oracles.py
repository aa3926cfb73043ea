"""Independent brute-force oracles used to freeze expected values.

Everything here is written as plain loops over definitions, deliberately
avoiding the package's own code paths (and numpy shortcuts where the
definition is simple enough to spell out).
"""

import math
from itertools import combinations


def mean(xs):
    return sum(xs) / len(xs)


def pstd(xs):
    mu = mean(xs)
    return math.sqrt(sum((x - mu) ** 2 for x in xs) / len(xs))


def quantile_linear(xs, q):
    """Linear-interpolation empirical quantile of unsorted data."""
    s = sorted(xs)
    pos = q * (len(s) - 1)
    lo = int(math.floor(pos))
    hi = int(math.ceil(pos))
    if lo == hi:
        return s[lo]
    frac = pos - lo
    return s[lo] * (1 - frac) + s[hi] * frac


def pearson(xs, ys):
    mx, my = mean(xs), mean(ys)
    num = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    den = math.sqrt(sum((x - mx) ** 2 for x in xs) * sum((y - my) ** 2 for y in ys))
    return num / den


def correlation_ratio(cats, values):
    grand = mean(values)
    groups = {}
    for c, v in zip(cats, values):
        groups.setdefault(c, []).append(v)
    ss_between = sum(len(vs) * (mean(vs) - grand) ** 2 for vs in groups.values())
    ss_total = sum((v - grand) ** 2 for v in values)
    return math.sqrt(ss_between / ss_total)


def cramers_v(a, b):
    cats_a = sorted(set(a))
    cats_b = sorted(set(b))
    table = {(x, y): 0 for x in cats_a for y in cats_b}
    for x, y in zip(a, b):
        table[(x, y)] += 1
    n = len(a)
    row = {x: sum(table[(x, y)] for y in cats_b) for x in cats_a}
    col = {y: sum(table[(x, y)] for x in cats_a) for y in cats_b}
    chi2 = 0.0
    for x in cats_a:
        for y in cats_b:
            expected = row[x] * col[y] / n
            chi2 += (table[(x, y)] - expected) ** 2 / expected
    return math.sqrt(chi2 / (n * min(len(cats_a) - 1, len(cats_b) - 1)))


def gower(x, xp, kinds, widths):
    """kinds: 'num'/'cat' per feature; widths: training ranges for numerics."""
    total = 0.0
    for a, b, kind, w in zip(x, xp, kinds, widths):
        if kind == "num":
            total += 1.0 if w == 0 and a != b else (min(1.0, abs(a - b) / w) if w > 0 else 0.0)
        else:
            total += 0.0 if a == b else 1.0
    return total / len(x)


def sparsity(x, xp, tol=1e-9):
    count = 0
    for a, b in zip(x, xp):
        if isinstance(a, str) or isinstance(b, str):
            count += a != b
        else:
            count += abs(a - b) > tol
    return count


def euclidean(a, b):
    return math.sqrt(sum((x - y) ** 2 for x, y in zip(a, b)))


def proximity_ratio(xp, reference):
    """Eq-style outlier ratio by exhaustive search."""
    d_all = [euclidean(xp, a) for a in reference]
    i0 = d_all.index(min(d_all))
    a0 = reference[i0]
    denom = min(euclidean(a0, a) for k, a in enumerate(reference) if k != i0)
    if denom == 0:
        return 0.0 if d_all[i0] == 0 else math.inf
    return d_all[i0] / denom


def nn_distances(rows):
    out = []
    for i, a in enumerate(rows):
        out.append(min(euclidean(a, b) for j, b in enumerate(rows) if j != i))
    return out


def epsilon_graph_clusters(rows, eps, min_size=2):
    """Connected components (size >= min_size) via BFS with <= eps edges."""
    n = len(rows)
    seen = [False] * n
    clusters = []
    for start in range(n):
        if seen[start]:
            continue
        queue = [start]
        seen[start] = True
        comp = []
        while queue:
            i = queue.pop()
            comp.append(i)
            for j in range(n):
                if not seen[j] and euclidean(rows[i], rows[j]) <= eps:
                    seen[j] = True
                    queue.append(j)
        if len(comp) >= min_size:
            clusters.append(sorted(comp))
    return clusters


def connected_by_bfs(query, rows, eps, min_size=2):
    """True when BFS over the eps-graph including the query reaches a member
    of a valid (precomputed, query-free) cluster."""
    clusters = epsilon_graph_clusters(rows, eps, min_size)
    members = {i for c in clusters for i in c}
    points = [list(query)] + [list(r) for r in rows]
    n = len(points)
    seen = [False] * n
    queue = [0]
    seen[0] = True
    while queue:
        i = queue.pop()
        if i > 0 and (i - 1) in members:
            return True
        for j in range(n):
            if not seen[j] and euclidean(points[i], points[j]) <= eps:
                seen[j] = True
                queue.append(j)
    return False


def dominates(a, b):
    return all(x <= y for x, y in zip(a, b)) and any(x < y for x, y in zip(a, b))


def nondominated_fronts(objs):
    """Rank by repeatedly extracting the non-dominated subset."""
    remaining = list(range(len(objs)))
    fronts = []
    while remaining:
        front = [
            i
            for i in remaining
            if not any(dominates(objs[j], objs[i]) for j in remaining if j != i)
        ]
        fronts.append(sorted(front))
        remaining = [i for i in remaining if i not in front]
    return fronts


def simplex_lattice_count(m, p):
    return math.comb(m + p - 1, p)


def hypervolume_2d(points, ref):
    """Dominated-area sweep for 2-D minimization fronts."""
    front = [p for p in points if not any(dominates(q, p) for q in points if q != p)]
    front = sorted(set((p[0], p[1]) for p in front))
    hv = 0.0
    prev_x = None
    best_y = ref[1]
    for x, y in front:
        if x >= ref[0] or y >= ref[1]:
            continue
        if prev_x is None:
            prev_x, best_y = x, y
            continue
        hv += (x - prev_x) * (ref[1] - best_y)
        if y < best_y:
            best_y = y
        prev_x = x
    if prev_x is not None:
        hv += (ref[0] - prev_x) * (ref[1] - best_y)
    return hv


def jaccard(a, b):
    union = a | b
    return len(a & b) / len(union) if union else 1.0


def feature_diversity(sets):
    pairs = list(combinations(sets, 2))
    return 1.0 - sum(jaccard(a, b) for a, b in pairs) / len(pairs)


def value_diversity(dicts, tol=1e-9):
    pairs = list(combinations(dicts, 2))
    total = 0.0
    for a, b in pairs:
        common = set(a) & set(b)
        if not common:
            continue
        equal = 0
        for k in common:
            if isinstance(a[k], str) or isinstance(b[k], str):
                equal += a[k] == b[k]
            else:
                equal += abs(a[k] - b[k]) <= tol
        total += equal / len(common)
    return 1.0 - total / len(pairs)


def least_squares_1d(xs, ys):
    """Closed-form slope/intercept for simple linear regression."""
    mx, my = mean(xs), mean(ys)
    sxx = sum((x - mx) ** 2 for x in xs)
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    slope = sxy / sxx
    return slope, my - slope * mx


def r2(y_true, y_pred):
    my = mean(y_true)
    ss_res = sum((t - p) ** 2 for t, p in zip(y_true, y_pred))
    ss_tot = sum((t - my) ** 2 for t in y_true)
    return 1 - ss_res / ss_tot


def best_gini_split_1d(xs, ys):
    """Brute-force best threshold on one feature by Gini impurity."""

    def gini(labels):
        if not labels:
            return 0.0
        total = len(labels)
        return 1.0 - sum((labels.count(c) / total) ** 2 for c in set(labels))

    candidates = sorted(set(xs))
    best = None
    for lo, hi in zip(candidates, candidates[1:]):
        t = (lo + hi) / 2
        left = [y for x, y in zip(xs, ys) if x <= t]
        right = [y for x, y in zip(xs, ys) if x > t]
        score = (len(left) * gini(left) + len(right) * gini(right)) / len(xs)
        if best is None or score < best[1]:
            best = (t, score)
    return best
