"""Online prediction with exact expected-mistake accounting.

Learners expose ``predict(x) -> p`` (the probability of predicting +1) and
``update(x, y)``.  All mistake quantities are computed in expectation from
the prediction probabilities; no coins are flipped, so repeated runs are
identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import BinaryClass, agreement_class
from .dimensions import MistakeTree, _LdimOracle, tree_shattered_by


@dataclass(frozen=True)
class LabeledSequence:
    """An ordered list of (x, y) pairs with y in {-1, +1}."""

    pairs: tuple[tuple[int, int], ...]
    source_tag: str | None = None

    def __post_init__(self):
        pairs = tuple((int(x), int(y)) for x, y in self.pairs)
        for x, y in pairs:
            if y not in (-1, 1):
                raise ValueError("labels must be -1 or +1")
        object.__setattr__(self, "pairs", pairs)

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)


@dataclass(frozen=True)
class RegretReport:
    """Exact expected mistake rates for one learner/sequence match."""

    n: int
    learner_rate: float
    benchmark_rate: float | None
    regret: float | None
    rwm_bound: float | None = None
    rounds: tuple[tuple[int, float, int, float], ...] | None = None
    # rounds rows: (round index, p_plus, true label, cumulative expected mistakes)


class SOALearner:
    """Standard-optimal-style learner for a partial binary class.

    Keeps the version space of members exactly consistent with the history (a
    * label is never consistent) and deterministically predicts the label
    whose restricted version space has the larger Littlestone dimension (ties
    predict +1).  Makes at most Ldim(H) mistakes on any realizable sequence.
    """

    def __init__(self, H: BinaryClass):
        if H.is_empty:
            raise ValueError("SOA requires a nonempty class")
        self._oracle = _LdimOracle(H)
        self.version = self._oracle.full

    def predict(self, x: int) -> float:
        if self.version == 0:
            return 1.0
        vp = self.version & self._oracle.plus[x]
        vm = self.version & self._oracle.minus[x]
        dp = self._oracle.ldim(vp) if vp else -1
        dm = self._oracle.ldim(vm) if vm else -1
        return 1.0 if dp >= dm else 0.0

    def update(self, x: int, y: int) -> None:
        mask = self._oracle.plus[x] if y == 1 else self._oracle.minus[x]
        self.version &= mask


class RWMLearner:
    """Randomized weighted majority over the members of a finite class.

    A member's per-step loss is 1(h(x) != y) with * counting as wrong.  The
    prediction probability renormalizes the weight mass over defined votes;
    members voting * contribute to neither label, and if all mass is on *
    the prediction is +1 with probability 1/2.  The learning rate is the
    horizon-aware sqrt(8 ln|H| / n), fixed per run.
    """

    def __init__(self, H: BinaryClass, horizon: int, learning_rate: float | None = None):
        if H.is_empty:
            raise ValueError("RWM requires a nonempty class")
        if horizon < 1:
            raise ValueError("horizon must be >= 1")
        self.H = H
        self.horizon = int(horizon)
        self.lr = (
            learning_rate
            if learning_rate is not None
            else math.sqrt(8.0 * math.log(len(H)) / horizon)
        )
        self.weights = np.ones(len(H))

    @property
    def regret_bound(self) -> float:
        """sqrt(ln|H| / (2n)): the guaranteed expected regret rate."""
        return math.sqrt(math.log(len(self.H)) / (2.0 * self.horizon))

    def predict(self, x: int) -> float:
        col = self.H.matrix[:, x]
        wp = float(self.weights[col == 1].sum())
        wm = float(self.weights[col == -1].sum())
        if wp + wm <= 0.0:
            return 0.5
        return wp / (wp + wm)

    def update(self, x: int, y: int) -> None:
        col = self.H.matrix[:, x]
        losses = (col != y).astype(np.float64)  # * (0) always loses
        self.weights = self.weights * np.exp(-self.lr * losses)


def comp_online(S: BinaryClass, B: BinaryClass, horizon: int) -> RWMLearner:
    """Comparative online learner: RWM over the agreement class of (S, B)."""
    if S.is_empty or B.is_empty:
        raise ValueError("comparative online learning requires nonempty classes")
    return RWMLearner(agreement_class(S, B), horizon)


def run_sequence(
    learner,
    seq: LabeledSequence,
    benchmarks: BinaryClass | None = None,
    keep_rounds: bool = False,
) -> RegretReport:
    """Drive a learner over a sequence with exact expectation accounting.

    The benchmark side, when a class is given, is the minimum exact mistake
    rate over its members with * counting as a mistake.  Regret is signed:
    the learner may beat the class.
    """
    n = len(seq)
    if n == 0:
        raise ValueError("sequence must be nonempty")
    expected = 0.0
    rows = []
    for i, (x, y) in enumerate(seq):
        p = learner.predict(x)
        expected += p if y == -1 else 1.0 - p
        if keep_rounds:
            rows.append((i, float(p), int(y), float(expected)))
        learner.update(x, y)
    learner_rate = expected / n
    benchmark_rate = regret = None
    if benchmarks is not None and not benchmarks.is_empty:
        xs = np.array([x for x, _ in seq])
        ys = np.array([y for _, y in seq], dtype=np.int8)
        mism = (benchmarks.matrix[:, xs] != ys[None, :]).sum(axis=1)
        benchmark_rate = float(mism.min()) / n
        regret = learner_rate - benchmark_rate
    return RegretReport(
        n=n,
        learner_rate=learner_rate,
        benchmark_rate=benchmark_rate,
        regret=regret,
        rwm_bound=getattr(learner, "regret_bound", None),
        rounds=tuple(rows) if keep_rounds else None,
    )


def play_tree_adversary(
    learner,
    tree: MistakeTree,
    S: BinaryClass,
    B: BinaryClass,
) -> tuple[LabeledSequence, float]:
    """Walk a mutually shattered mistake tree against a learner.

    The tree must certify as shattered by both classes (uncertified trees are
    rejected).  At each level the adversary presents the node, observes the
    +1-probability p, picks the label minimizing correctness (-1 if p >= 1/2
    else +1), and descends.  Returns the produced sequence, which is
    realizable by some s in S with a perfectly agreeing b in B, and the
    learner's exact expected mistake count (at least depth/2 by construction).
    """
    if not (tree_shattered_by(S, tree) and tree_shattered_by(B, tree)):
        raise ValueError("tree is not certified shattered by both classes")
    path: tuple[int, ...] = ()
    pairs = []
    expected = 0.0
    for _ in range(tree.depth):
        x = tree.node(path)
        p = learner.predict(x)
        y = -1 if p >= 0.5 else 1
        expected += p if y == -1 else 1.0 - p
        learner.update(x, y)
        pairs.append((x, y))
        path = path + (y,)
    return LabeledSequence(tuple(pairs), source_tag="tree_adversary"), expected


def ldim_rate_bound(m: int, n: int) -> float:
    """The agnostic-online regret rate sqrt((m/n) log((2m + n)/m)) at Ldim m.

    Reported alongside the RWM ln|H| bound: our agnostic learner is
    finite-class RWM, so its guarantee is the ln|H| rate, while this is the
    rate the Littlestone-dimension characterization promises for the optimal
    learner.  Both quantities are surfaced rather than conflated.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if m <= 0:
        return 0.0
    return math.sqrt((m / n) * math.log2((2 * m + n) / m))


def realizable_witness(H: BinaryClass, seq: LabeledSequence) -> int | None:
    """Index of a member consistent with the whole sequence, if any."""
    if H.is_empty or len(seq) == 0:
        return None
    xs = np.array([x for x, _ in seq])
    ys = np.array([y for _, y in seq], dtype=np.int8)
    ok = (H.matrix[:, xs] == ys[None, :]).all(axis=1)
    idx = np.flatnonzero(ok)
    return int(idx[0]) if idx.size else None
