"""Exact combinatorial dimensions of finite hypothesis classes.

Mutual VC, mutual fat-shattering, and mutual Littlestone dimensions, computed
by brute-force enumeration with hard guards, plus dual packing/covering
numbers and a randomized Gilbert--Varshamov style packing construction.

Conventions
-----------
* An empty class has UNDEFINED dimensions (``DimensionResult.value is None``):
  not even the empty subset is shattered, because no hypothesis realizes the
  vacuous labeling.
* All returned witnesses re-verify under the corresponding check:
  ``is_shattered`` for VC, ``is_fat_shattered`` for fat, and
  ``tree_shattered_by`` for Littlestone.
* Fat-shattering takes a supremum over reference functions r: X -> R.  For a
  finite class this supremum is realized on a finite candidate set per point:
  the usable-hypothesis sets change only when r(x) +- eta crosses a defined
  value, so it suffices to test the breakpoints {v - eta, v + eta}, midpoints
  of consecutive breakpoints, and one point beyond each extreme.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from .core import (
    BinaryClass,
    BinaryModel,
    Domain,
    GuardError,
    GVConstructionError,
    RealClass,
    _binarize_matrix,
)

SUBSET_GUARD = 30
LDIM_CLASS_GUARD = 4096
LDIM_DOMAIN_GUARD = 24
PACKING_EXACT_GUARD = 24
COVERING_EXACT_GUARD = 20


@dataclass(frozen=True)
class DimensionResult:
    """A dimension value with its certifying witness.

    ``value`` is None exactly when the dimension is UNDEFINED (empty class).
    The witness shape depends on the dimension: a tuple of domain indices for
    VC, ``(indices, r1)`` or ``(indices, r1, r2)`` with per-point reference
    values for fat-shattering, and a :class:`MistakeTree` for Littlestone.
    """

    value: int | None
    witness: object | None = None

    @property
    def is_undefined(self) -> bool:
        return self.value is None


@dataclass(frozen=True)
class MistakeTree:
    """A complete binary mistake tree of the given depth.

    ``nodes`` lists the individuals in breadth-first order: the node reached
    by following the label path ``zeta`` (a tuple of -1/+1 of length < depth)
    sits at index ``2^len(zeta) - 1 + offset`` where bit i of ``offset`` is 1
    iff ``zeta[i] == +1``.
    """

    depth: int
    nodes: tuple[int, ...]

    def __post_init__(self):
        if len(self.nodes) != 2**self.depth - 1:
            raise ValueError("a depth-m tree has 2^m - 1 nodes")

    def node(self, path: tuple[int, ...]) -> int:
        level = len(path)
        if level >= self.depth:
            raise ValueError("path longer than tree depth")
        offset = 0
        for i, y in enumerate(path):
            if y == 1:
                offset |= 1 << i
        return self.nodes[2**level - 1 + offset]


# ---------------------------------------------------------------------------
# shattering and VC dimension
# ---------------------------------------------------------------------------


def _guard_subset(subset) -> tuple[int, ...]:
    subset = tuple(int(x) for x in subset)
    if len(subset) > SUBSET_GUARD:
        raise GuardError(f"subset of size {len(subset)} exceeds guard {SUBSET_GUARD}")
    return subset


def _realized_codes(matrix: np.ndarray, subset: tuple[int, ...]) -> set[int]:
    """Codes of all total +-1 patterns realized on ``subset`` by matrix rows."""
    sub = matrix[:, subset]
    full = (sub != 0).all(axis=1)
    if not full.any():
        return set()
    bits = (sub[full] + 1) >> 1  # -1 -> 0, +1 -> 1
    weights = 1 << np.arange(len(subset), dtype=np.int64)
    return set((bits.astype(np.int64) @ weights).tolist())


def is_shattered(H: BinaryClass, subset) -> bool:
    """True iff every +-1 labeling of ``subset`` is realized by some member.

    * never matches a required label.  The empty subset is shattered iff the
    class is nonempty.
    """
    subset = _guard_subset(subset)
    if H.is_empty:
        return False
    if not subset:
        return True
    return len(_realized_codes(H.matrix, subset)) == 2 ** len(subset)


def _vc_upper_bound(H: BinaryClass) -> int:
    # shattering k points requires 2^k distinct members
    return min(H.domain.size, max(len(H).bit_length() - 1, 0))


def _search_max_subset(n: int, upper: int, predicate) -> tuple[int, ...] | None:
    """Largest subset satisfying ``predicate``, searching sizes downward.

    Valid because shattering-style predicates are monotone under taking
    subsets.  Returns None only if even the empty subset fails.
    """
    for k in range(min(upper, n), -1, -1):
        for subset in combinations(range(n), k):
            if predicate(subset):
                return subset
    return None


def vc(H: BinaryClass) -> DimensionResult:
    """VC dimension of a partial binary class (UNDEFINED for an empty class)."""
    if H.is_empty:
        return DimensionResult(None)
    cache: dict[tuple, bool] = {}

    def pred(subset):
        if subset not in cache:
            cache[subset] = is_shattered(H, subset)
        return cache[subset]

    witness = _search_max_subset(H.domain.size, _vc_upper_bound(H), pred)
    return DimensionResult(len(witness), witness)


def mutual_vc(S: BinaryClass, B: BinaryClass) -> DimensionResult:
    """Largest size of a subset shattered by both classes simultaneously."""
    if S.domain.size != B.domain.size:
        raise ValueError("classes must share a domain")
    if S.is_empty or B.is_empty:
        return DimensionResult(None)
    caches = ({}, {})

    def pred(subset):
        for cls, cache in zip((S, B), caches):
            if subset not in cache:
                cache[subset] = is_shattered(cls, subset)
            if not cache[subset]:
                return False
        return True

    upper = min(_vc_upper_bound(S), _vc_upper_bound(B))
    witness = _search_max_subset(S.domain.size, upper, pred)
    return DimensionResult(len(witness), witness)


# ---------------------------------------------------------------------------
# fat-shattering
# ---------------------------------------------------------------------------


def reference_candidates(values: np.ndarray, eta: float) -> list[float]:
    """Exact finite candidate set for a reference value at one point.

    ``values`` are the defined hypothesis values at the point.  Candidates are
    the breakpoints {v - eta, v + eta}, midpoints of consecutive breakpoints,
    and one point beyond each extreme.
    """
    vals = np.unique(values)
    if vals.size == 0:
        return []
    bps = np.unique(np.concatenate([vals - eta, vals + eta]))
    cands = [bps[0] - 1.0]
    for i in range(bps.size):
        cands.append(float(bps[i]))
        if i + 1 < bps.size:
            cands.append(float((bps[i] + bps[i + 1]) / 2.0))
    cands.append(bps[-1] + 1.0)
    return cands


def _point_columns(H: RealClass, x: int, eta: float):
    """Deduplicated binarized columns (r, column) with both signs present."""
    col = H.matrix[:, x]
    defined = col[~np.isnan(col)]
    out = []
    seen = set()
    for r in reference_candidates(defined, eta):
        binz = np.zeros(col.shape, dtype=np.int8)
        with np.errstate(invalid="ignore"):
            binz[col > r + eta] = 1
            binz[col < r - eta] = -1
        if not ((binz == 1).any() and (binz == -1).any()):
            continue
        key = binz.tobytes()
        if key not in seen:
            seen.add(key)
            out.append((float(r), binz))
    return out


def _columns_shatter(columns) -> bool:
    """Do the stacked per-point columns realize all +-1 patterns?"""
    k = len(columns)
    matrix = np.stack(columns, axis=1)
    full = (matrix != 0).all(axis=1)
    if not full.any():
        return False
    bits = (matrix[full] + 1) >> 1
    weights = 1 << np.arange(k, dtype=np.int64)
    return len(set((bits.astype(np.int64) @ weights).tolist())) == 2**k


def is_fat_shattered(H: RealClass, subset, eta: float, r) -> bool:
    """Is ``subset`` eta-fat shattered by H w.r.t. the given reference?

    ``r`` gives the reference value per subset point (aligned with ``subset``);
    a full-domain array or a scalar is also accepted.  The margin is strict:
    xi(x) * (h(x) - r(x)) > eta, and h must be defined on the subset.
    """
    subset = _guard_subset(subset)
    if eta < 0:
        raise ValueError("eta must be >= 0")
    if H.is_empty:
        return False
    if not subset:
        return True
    if np.isscalar(r):
        refs = np.full(len(subset), float(r))
    else:
        arr = np.asarray(r, dtype=np.float64)
        if arr.shape == (len(subset),):
            refs = arr
        elif arr.shape == (H.domain.size,):
            refs = arr[list(subset)]
        else:
            raise ValueError("r must align with the subset or the domain")
    cols = _binarize_matrix(H.matrix[:, subset], eta, refs)
    return _columns_shatter([cols[:, i] for i in range(len(subset))])


def _fat_shattered_some_r(H: RealClass, subset, eta: float):
    """Existential reference search; returns (found, per-point r values)."""
    subset = _guard_subset(subset)
    if H.is_empty:
        return False, None
    if not subset:
        return True, ()
    per_point = []
    for x in subset:
        cols = _point_columns(H, x, eta)
        if not cols:
            return False, None
        per_point.append(cols)
    for combo in product(*per_point):
        if _columns_shatter([c for _, c in combo]):
            return True, tuple(r for r, _ in combo)
    return False, None


def _fat_upper_bound(H: RealClass) -> int:
    return min(H.domain.size, max(len(H).bit_length() - 1, 0))


def fat(H: RealClass, eta: float) -> DimensionResult:
    """eta-fat-shattering dimension with the reference supremum made exact."""
    if eta < 0:
        raise ValueError("eta must be >= 0")
    if H.is_empty:
        return DimensionResult(None)
    cache: dict[tuple, tuple] = {}

    def pred(subset):
        if subset not in cache:
            cache[subset] = _fat_shattered_some_r(H, subset, eta)
        return cache[subset][0]

    witness = _search_max_subset(H.domain.size, _fat_upper_bound(H), pred)
    return DimensionResult(len(witness), (witness, cache[witness][1]))


def mutual_fat2(S: RealClass, B: RealClass, eta1: float, eta2: float) -> DimensionResult:
    """Largest subset eta1-fat shattered by S and eta2-fat shattered by B.

    The two reference functions are searched independently, matching the
    definition of the two-margin mutual dimension.
    """
    if S.domain.size != B.domain.size:
        raise ValueError("classes must share a domain")
    if min(eta1, eta2) < 0:
        raise ValueError("margins must be >= 0")
    if S.is_empty or B.is_empty:
        return DimensionResult(None)
    cache_s: dict[tuple, tuple] = {}
    cache_b: dict[tuple, tuple] = {}

    def pred(subset):
        if subset not in cache_s:
            cache_s[subset] = _fat_shattered_some_r(S, subset, eta1)
        if not cache_s[subset][0]:
            return False
        if subset not in cache_b:
            cache_b[subset] = _fat_shattered_some_r(B, subset, eta2)
        return cache_b[subset][0]

    upper = min(_fat_upper_bound(S), _fat_upper_bound(B))
    witness = _search_max_subset(S.domain.size, upper, pred)
    return DimensionResult(
        len(witness), (witness, cache_s[witness][1], cache_b[witness][1])
    )


def mutual_fat(S: RealClass, B: RealClass, eta: float) -> DimensionResult:
    """Largest subset eta-fat shattered by both classes."""
    return mutual_fat2(S, B, eta, eta)


def theta_candidates(B: RealClass, eta: float) -> list[float]:
    """Exact candidate set for a constant reference theta, pooled over points."""
    vals = B.matrix[~np.isnan(B.matrix)]
    return reference_candidates(vals, eta) if vals.size else [0.0]


def sup_theta_mutual_vc(Sbin: BinaryClass, B: RealClass, eta: float) -> DimensionResult:
    """sup over theta of VC(Sbin, B_eta^theta), exact via pooled breakpoints."""
    best = DimensionResult(None)
    for theta in theta_candidates(B, eta):
        from .core import binarize_class

        res = mutual_vc(Sbin, binarize_class(B, eta, theta))
        if res.value is not None and (best.value is None or res.value > best.value):
            best = res
    return best


# ---------------------------------------------------------------------------
# Littlestone dimension
# ---------------------------------------------------------------------------


class _LdimOracle:
    """Memoized Littlestone-dimension computations over version-space bitmasks."""

    def __init__(self, H: BinaryClass):
        if H.is_empty:
            raise ValueError("empty class")
        if len(H) > LDIM_CLASS_GUARD:
            raise GuardError(f"|H| = {len(H)} exceeds Ldim guard {LDIM_CLASS_GUARD}")
        if H.domain.size > LDIM_DOMAIN_GUARD:
            raise GuardError(
                f"domain size {H.domain.size} exceeds Ldim guard {LDIM_DOMAIN_GUARD}"
            )
        self.n = H.domain.size
        self.full = (1 << len(H)) - 1
        self.plus = []
        self.minus = []
        for x in range(self.n):
            col = H.matrix[:, x]
            self.plus.append(_mask_from_bool(col == 1))
            self.minus.append(_mask_from_bool(col == -1))
        self.memo: dict[int, int] = {}

    def ldim(self, mask: int) -> int:
        if mask == 0:
            raise ValueError("ldim of empty version space")
        cached = self.memo.get(mask)
        if cached is not None:
            return cached
        best = 0
        cap = mask.bit_count().bit_length() - 1  # ldim <= log2 |V|
        for x in range(self.n):
            mp = mask & self.plus[x]
            mm = mask & self.minus[x]
            if mp and mm:
                d = 1 + min(self.ldim(mp), self.ldim(mm))
                if d > best:
                    best = d
                    if best >= cap:
                        break
        self.memo[mask] = best
        return best

    def build_tree(self, mask: int, depth: int) -> list[int]:
        """Nodes (BFS) of a depth-``depth`` tree shattered by the version space."""
        nodes: dict[tuple[int, ...], int] = {}

        def rec(m: int, d: int, path: tuple[int, ...]):
            if d == 0:
                return
            for x in range(self.n):
                mp = m & self.plus[x]
                mm = m & self.minus[x]
                if mp and mm and min(self.ldim(mp), self.ldim(mm)) >= d - 1:
                    nodes[path] = x
                    rec(mm, d - 1, path + (-1,))
                    rec(mp, d - 1, path + (1,))
                    return
            raise AssertionError("witness construction failed")

        rec(mask, depth, ())
        return _bfs_nodes(nodes, depth)


def _mask_from_bool(flags: np.ndarray) -> int:
    mask = 0
    for i in np.flatnonzero(flags):
        mask |= 1 << int(i)
    return mask


def _bfs_nodes(nodes: dict[tuple[int, ...], int], depth: int) -> list[int]:
    out = []
    for level in range(depth):
        for offset in range(2**level):
            path = tuple(1 if offset >> i & 1 else -1 for i in range(level))
            out.append(nodes[path])
    return out


def ldim(H: BinaryClass) -> DimensionResult:
    """Littlestone dimension with a mistake-tree witness."""
    if H.is_empty:
        return DimensionResult(None)
    oracle = _LdimOracle(H)
    value = oracle.ldim(oracle.full)
    tree = MistakeTree(value, tuple(oracle.build_tree(oracle.full, value)))
    return DimensionResult(value, tree)


def mutual_ldim(S: BinaryClass, B: BinaryClass) -> DimensionResult:
    """Mutual Littlestone dimension: the joint game where both version spaces survive."""
    if S.domain.size != B.domain.size:
        raise ValueError("classes must share a domain")
    if S.is_empty or B.is_empty:
        return DimensionResult(None)
    os_, ob = _LdimOracle(S), _LdimOracle(B)
    memo: dict[tuple[int, int], int] = {}
    n = S.domain.size

    def rec(ms: int, mb: int) -> int:
        key = (ms, mb)
        cached = memo.get(key)
        if cached is not None:
            return cached
        best = 0
        cap = min(ms.bit_count().bit_length(), mb.bit_count().bit_length()) - 1
        for x in range(n):
            sp, sm = ms & os_.plus[x], ms & os_.minus[x]
            bp, bm = mb & ob.plus[x], mb & ob.minus[x]
            if sp and sm and bp and bm:
                d = 1 + min(rec(sp, bp), rec(sm, bm))
                if d > best:
                    best = d
                    if best >= cap:
                        break
        memo[key] = best
        return best

    value = rec(os_.full, ob.full)
    nodes: dict[tuple[int, ...], int] = {}

    def build(ms: int, mb: int, d: int, path: tuple[int, ...]):
        if d == 0:
            return
        for x in range(n):
            sp, sm = ms & os_.plus[x], ms & os_.minus[x]
            bp, bm = mb & ob.plus[x], mb & ob.minus[x]
            if sp and sm and bp and bm and min(rec(sp, bp), rec(sm, bm)) >= d - 1:
                nodes[path] = x
                build(sm, bm, d - 1, path + (-1,))
                build(sp, bp, d - 1, path + (1,))
                return
        raise AssertionError("witness construction failed")

    build(os_.full, ob.full, value, ())
    tree = MistakeTree(value, tuple(_bfs_nodes(nodes, value)))
    return DimensionResult(value, tree)


def tree_shattered_by(H: BinaryClass, tree: MistakeTree) -> bool:
    """Re-verify a mistake tree: every root-to-leaf labeling is realized."""
    if H.is_empty:
        return tree.depth == 0
    if tree.depth == 0:
        return True
    oracle = _LdimOracle(H)
    for xi in product((-1, 1), repeat=tree.depth):
        mask = oracle.full
        for i in range(tree.depth):
            x = tree.node(xi[:i])
            mask &= oracle.plus[x] if xi[i] == 1 else oracle.minus[x]
            if not mask:
                return False
    return True


# ---------------------------------------------------------------------------
# dual packing and covering numbers
# ---------------------------------------------------------------------------


def _check_mu_x(mu_x, size: int) -> np.ndarray:
    arr = np.asarray(mu_x, dtype=np.float64)
    if arr.shape != (size,):
        raise ValueError("mu_x must be an array over the domain")
    if (arr < 0).any() or abs(arr.sum() - 1.0) > 1e-12:
        raise ValueError("mu_x must be a probability vector")
    return arr


def dual_distances(S: RealClass, B: RealClass, mu_x) -> np.ndarray:
    """Pairwise distances sup_b |E_mu[(s_i - s_j) b]| for total classes."""
    if np.isnan(S.matrix).any() or np.isnan(B.matrix).any():
        raise ValueError("packing/covering requires total classes (no *)")
    mu = _check_mu_x(mu_x, S.domain.size)
    P = (S.matrix * mu[None, :]) @ B.matrix.T  # (mS, mB) of E[s_i b]
    return np.abs(P[:, None, :] - P[None, :, :]).max(axis=2)


def _max_clique(adj: list[int], n: int) -> int:
    """Exact maximum clique size over an adjacency bitmask list."""
    best = 0

    def expand(cand: int, size: int):
        nonlocal best
        if size + cand.bit_count() <= best:
            return
        if cand == 0:
            best = max(best, size)
            return
        while cand:
            if size + cand.bit_count() <= best:
                return
            v = (cand & -cand).bit_length() - 1
            cand &= cand - 1
            expand(cand & adj[v], size + 1)

    expand((1 << n) - 1, 0)
    return best


def packing_number(S: RealClass, B: RealClass, mu_x, eps: float) -> int:
    """Maximum size of a subset of S with pairwise dual distance > eps.

    Exact (max clique) for |S| <= 24; a greedy lower bound beyond.
    """
    if S.is_empty:
        return 0
    D = dual_distances(S, B, mu_x)
    n = D.shape[0]
    edges = D > eps
    if n <= PACKING_EXACT_GUARD:
        adj = [_mask_from_bool(edges[i]) & ~(1 << i) for i in range(n)]
        return _max_clique(adj, n)
    chosen: list[int] = []
    for i in range(n):
        if all(edges[i, j] for j in chosen):
            chosen.append(i)
    return len(chosen)


def covering_upper(S: RealClass, B: RealClass, mu_x, eps: float) -> int:
    """Greedy set-cover upper bound on the dual covering number."""
    if S.is_empty:
        return 0
    D = dual_distances(S, B, mu_x)
    covers = D <= eps
    n = D.shape[0]
    uncovered = np.ones(n, dtype=bool)
    count = 0
    while uncovered.any():
        gains = (covers & uncovered[None, :]).sum(axis=1)
        i = int(np.argmax(gains))
        if gains[i] == 0:
            raise AssertionError("every point covers itself")
        uncovered &= ~covers[i]
        count += 1
    return count


def covering_number_exact(S: RealClass, B: RealClass, mu_x, eps: float) -> int:
    """Exact dual covering number by exhaustive search; guarded to |S| <= 20."""
    if S.is_empty:
        return 0
    n = len(S)
    if n > COVERING_EXACT_GUARD:
        raise GuardError(f"|S| = {n} exceeds exact-covering guard {COVERING_EXACT_GUARD}")
    D = dual_distances(S, B, mu_x)
    cover_masks = [_mask_from_bool(D[i] <= eps) for i in range(n)]
    everything = (1 << n) - 1
    for size in range(1, n + 1):
        for combo in combinations(range(n), size):
            acc = 0
            for i in combo:
                acc |= cover_masks[i]
            if acc == everything:
                return size
    return n


# ---------------------------------------------------------------------------
# Gilbert--Varshamov style packing
# ---------------------------------------------------------------------------


def gv_packing(
    n: int,
    eps: float,
    seed: int,
    c: float = 1.0,
    max_retries: int = 64,
) -> list[BinaryModel]:
    """Randomized set of total binary models with pairwise distance >= 1/2 - eps.

    Samples N = floor(2^(c * eps^2 * n / 2)) - 1 uniform sign vectors and
    retries until all pairwise normalized Hamming distances reach 1/2 - eps;
    the property is verified exactly before returning.  When N < 2 the two
    constant models (distance 1) are returned instead.
    """
    if not 0.0 < eps < 0.5:
        raise ValueError("eps must lie in (0, 1/2)")
    if n < 1:
        raise ValueError("n must be >= 1")
    domain = Domain(n)
    N = int(math.floor(2.0 ** (c * eps * eps * n / 2.0))) - 1
    if N < 2:
        models = [BinaryModel.constant(domain, 1), BinaryModel.constant(domain, -1)]
        assert verify_pairwise_distance(models, eps)
        return models
    from .stat_model import rng_stream

    threshold = 2.0 * eps * n  # dist >= 1/2 - eps  <=>  inner product <= 2 eps n
    for attempt in range(max_retries):
        rng = rng_stream(seed, 7901, attempt)
        X = rng.integers(0, 2, size=(N, n)).astype(np.int32) * 2 - 1
        G = X @ X.T
        np.fill_diagonal(G, -n)
        if G.max() <= threshold:
            models = [BinaryModel(domain, X[i].astype(np.int8)) for i in range(N)]
            assert verify_pairwise_distance(models, eps)
            return models
    raise GVConstructionError(
        f"no valid packing after {max_retries} attempts (n={n}, eps={eps}, N={N})"
    )


def verify_pairwise_distance(models: list[BinaryModel], eps: float) -> bool:
    """Exact check that all pairs differ on at least a (1/2 - eps) fraction."""
    n = models[0].domain.size
    for i in range(len(models)):
        for j in range(i + 1, len(models)):
            dist = int((models[i].values != models[j].values).sum())
            if dist / n < 0.5 - eps:
                return False
    return True
