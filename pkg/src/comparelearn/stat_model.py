"""Explicit discrete data distributions and exact error functionals.

A distribution is a finite list of (individual, label, mass) atoms.  All
functionals (classification error, correlation, multiaccuracy and
multicalibration errors, calibration, regression loss) are computed by exact
summation over the support; sampling exists only to feed learners.

Random streams are counter-based (Philox) and splittable: derive independent
generators with :func:`rng_stream` and record ``(seed, stream id)`` for
replay.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .core import (
    BinaryClass,
    BinaryHypothesis,
    BinaryModel,
    ConfigError,
    Domain,
    IntervalPartition,
    RealHypothesis,
    RealModel,
    as_real_class,
    as_real_hypothesis,
    sign_arr,
)

MASS_TOL = 1e-12

DETERMINISTIC = "deterministic"
BER_STAR = "ber_star"
CUSTOM = "custom"


def rng_stream(seed: int, *key: int) -> np.random.Generator:
    """A counter-based generator for (seed, stream id); never share streams."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class Dataset:
    """Labeled sample: parallel index/label arrays plus replay metadata."""

    xs: np.ndarray
    ys: np.ndarray
    meta: dict | None = None

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=np.int64)
        ys = np.asarray(self.ys, dtype=np.float64)
        if xs.shape != ys.shape or xs.ndim != 1:
            raise ValueError("xs and ys must be parallel 1-d arrays")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    def __len__(self):
        return self.xs.shape[0]

    def slice(self, start: int, stop: int) -> "Dataset":
        return Dataset(self.xs[start:stop], self.ys[start:stop], self.meta)


class DiscreteDistribution:
    """Finite-support joint law over (individual index, label).

    Atoms with identical (x, y) are merged; masses must be positive and sum
    to 1 within 1e-12.  ``label_kind`` is "binary" (labels in {-1, +1}) or
    "real" (labels in [-1, 1]).
    """

    __slots__ = ("domain", "xs", "ys", "ps", "label_kind")

    def __init__(self, domain: Domain, atoms, label_kind: str):
        if label_kind not in ("binary", "real"):
            raise ValueError("label_kind must be 'binary' or 'real'")
        merged: dict[tuple[int, float], float] = {}
        for x, y, p in atoms:
            x = int(x)
            y = float(y)
            p = float(p)
            if not 0 <= x < domain.size:
                raise ValueError(f"support index {x} outside domain")
            if label_kind == "binary" and y not in (-1.0, 1.0):
                raise ValueError(f"binary label must be -1 or +1, got {y}")
            if abs(y) > 1.0:
                raise ValueError(f"label must lie in [-1, 1], got {y}")
            if p <= 0:
                raise ValueError("masses must be positive")
            merged[(x, y + 0.0)] = merged.get((x, y + 0.0), 0.0) + p
        if not merged:
            raise ValueError("distribution needs at least one atom")
        keys = sorted(merged)
        xs = np.array([k[0] for k in keys], dtype=np.int64)
        ys = np.array([k[1] for k in keys], dtype=np.float64)
        ps = np.array([merged[k] for k in keys], dtype=np.float64)
        if abs(ps.sum() - 1.0) > MASS_TOL:
            raise ValueError(f"masses must sum to 1 within {MASS_TOL}, got {ps.sum()!r}")
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)
        object.__setattr__(self, "ps", ps)
        object.__setattr__(self, "label_kind", label_kind)
        for arr in (xs, ys, ps):
            arr.flags.writeable = False

    def __setattr__(self, name, value):
        raise AttributeError("DiscreteDistribution is immutable")

    def marginal_x(self) -> np.ndarray:
        out = np.zeros(self.domain.size)
        np.add.at(out, self.xs, self.ps)
        return out

    def sample(self, n: int, rng: np.random.Generator, meta: dict | None = None) -> Dataset:
        idx = rng.choice(self.xs.shape[0], size=int(n), p=self.ps)
        return Dataset(self.xs[idx], self.ys[idx], meta)

    def to_json(self) -> dict:
        return {
            "domain": {"size": self.domain.size},
            "kind": self.label_kind,
            "support": [
                [int(x), float(y), float(p)]
                for x, y, p in zip(self.xs, self.ys, self.ps)
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "DiscreteDistribution":
        try:
            domain = Domain(int(data["domain"]["size"]))
            return cls(domain, data["support"], data["kind"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"invalid distribution JSON: {exc}") from exc

    def sha256(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()

    def __repr__(self):
        return (
            f"DiscreteDistribution(|X|={self.domain.size}, atoms={len(self.xs)}, "
            f"kind={self.label_kind!r})"
        )


def ber_star(u: float) -> dict[int, float]:
    """The +-1 distribution with mean u: Pr[+1] = (1+u)/2."""
    if not -1.0 <= u <= 1.0:
        raise ValueError("u must lie in [-1, 1]")
    return {1: (1.0 + u) / 2.0, -1: (1.0 - u) / 2.0}


@dataclass(frozen=True)
class SourceModel:
    """A source hypothesis together with its conditional label law.

    ``law`` is DETERMINISTIC (y = s(x)), BER_STAR (y in {-1,+1} with
    E[y|x] = s(x)), or CUSTOM with an explicit finite conditional law per
    point whose mean must equal s(x) exactly (within 1e-12).
    """

    hypothesis: RealHypothesis | BinaryHypothesis
    law: str = DETERMINISTIC
    conditionals: Mapping[int, Sequence[tuple[float, float]]] | None = None

    def __post_init__(self):
        if self.law not in (DETERMINISTIC, BER_STAR, CUSTOM):
            raise ValueError(f"unknown label law {self.law!r}")
        if self.law == CUSTOM and self.conditionals is None:
            raise ValueError("CUSTOM law requires explicit conditionals")

    def real_values(self) -> np.ndarray:
        return as_real_hypothesis(self.hypothesis).values


def make_distribution(mu_x, source: SourceModel) -> DiscreteDistribution:
    """Exact joint law of (x, y) with x ~ mu_x and y from the source law."""
    hyp = source.hypothesis
    domain = hyp.domain
    mu = np.asarray(mu_x, dtype=np.float64)
    if mu.shape != (domain.size,):
        raise ValueError("mu_x must be an array over the domain")
    if (mu < 0).any() or abs(mu.sum() - 1.0) > MASS_TOL:
        raise ValueError("mu_x must be a probability vector")
    svals = source.real_values()
    support_x = np.flatnonzero(mu > 0)
    if np.isnan(svals[support_x]).any():
        raise ValueError("source hypothesis must be defined on the support (no *)")
    atoms = []
    if source.law == DETERMINISTIC:
        for x in support_x:
            atoms.append((int(x), float(svals[x]), float(mu[x])))
        kind = "binary" if all(abs(svals[x]) == 1.0 for x in support_x) else "real"
    elif source.law == BER_STAR:
        for x in support_x:
            probs = ber_star(float(svals[x]))
            for y, q in probs.items():
                if q > 0:
                    atoms.append((int(x), float(y), float(mu[x]) * q))
        kind = "binary"
    else:
        kind = "binary"
        for x in support_x:
            law = source.conditionals.get(int(x))
            if law is None:
                raise ValueError(f"CUSTOM law missing conditionals for point {x}")
            mean = sum(y * q for y, q in law)
            if abs(sum(q for _, q in law) - 1.0) > MASS_TOL:
                raise ValueError(f"conditional law at {x} must sum to 1")
            if abs(mean - svals[x]) > MASS_TOL:
                raise ValueError(
                    f"conditional mean at {x} is {mean}, expected s(x) = {svals[x]}"
                )
            for y, q in law:
                if q > 0:
                    atoms.append((int(x), float(y), float(mu[x]) * q))
                    if abs(float(y)) != 1.0:
                        kind = "real"
    return DiscreteDistribution(domain, atoms, kind)


def sample(dist: DiscreteDistribution, n: int, rng: np.random.Generator) -> Dataset:
    return dist.sample(n, rng)


# ---------------------------------------------------------------------------
# exact functionals
# ---------------------------------------------------------------------------


def _binary_values(h) -> np.ndarray:
    if isinstance(h, (BinaryHypothesis, BinaryModel)):
        return h.values
    raise TypeError(f"expected a binary hypothesis or model, got {type(h).__name__}")


def _real_values(h) -> np.ndarray:
    if isinstance(h, (RealHypothesis, RealModel)):
        return h.values
    if isinstance(h, (BinaryHypothesis,)):
        return as_real_hypothesis(h).values
    if isinstance(h, BinaryModel):
        return h.values.astype(np.float64)
    raise TypeError(f"expected a hypothesis or model, got {type(h).__name__}")


def class_error(h, dist: DiscreteDistribution) -> float:
    """Pr[h(x) != y] with * counting as a mistake; binary-label law required."""
    if dist.label_kind != "binary":
        raise ValueError("class_error requires a binary-label distribution")
    vals = _binary_values(h)
    mism = vals[dist.xs] != dist.ys.astype(np.int8)
    return float(dist.ps[mism].sum())


def correlation(f, dist: DiscreteDistribution) -> float:
    """E[y f(x)] for a total model."""
    vals = _real_values(f)
    if np.isnan(vals).any():
        raise ValueError("correlation requires a total model")
    return float(np.sum(dist.ps * dist.ys * vals[dist.xs]))


def corr_partial(b, dist: DiscreteDistribution) -> float:
    """E[y <> b(x)] with the generalized product (* costs -|y|)."""
    vals = _real_values(b)
    bx = vals[dist.xs]
    star = np.isnan(bx)
    terms = np.where(star, -np.abs(dist.ys), dist.ys * np.where(star, 0.0, bx))
    return float(np.sum(dist.ps * terms))


def _residual_star_terms(f, B, dist):
    """Per-member sums of p*(f-y)*b over defined points and p*|f-y| over *."""
    fvals = _real_values(f)
    Bm = as_real_class(B) if isinstance(B, BinaryClass) else B
    if Bm.is_empty:
        raise ValueError("benchmark class must be nonempty")
    res = fvals[dist.xs] - dist.ys  # (N,)
    bx = Bm.matrix[:, dist.xs]  # (mB, N)
    star = np.isnan(bx)
    defined_contrib = dist.ps * res * np.where(star, 0.0, bx)
    star_contrib = dist.ps * np.abs(res) * star
    return defined_contrib, star_contrib, res


def ma_error(f, B, dist: DiscreteDistribution) -> float:
    """Multiaccuracy error: sup over b and sign of E[((f-y) sigma) <> b(x)].

    For each member the inner sup over sigma equals |sum over defined points|
    minus the * mass term, computed exactly.
    """
    defined, starred, _ = _residual_star_terms(f, B, dist)
    per_member = np.abs(defined.sum(axis=1)) - starred.sum(axis=1)
    return float(per_member.max())


def mc_error(f, B, dist: DiscreteDistribution) -> float:
    """Multicalibration error over the model's own level sets.

    The sign is chosen per level inside the sum; the sup over members is
    outside.
    """
    defined, starred, _ = _residual_star_terms(f, B, dist)
    fvals = _real_values(f)[dist.xs]
    totals = np.zeros(defined.shape[0])
    for v in np.unique(fvals):
        m = fvals == v
        totals += np.abs(defined[:, m].sum(axis=1)) - starred[:, m].sum(axis=1)
    return float(totals.max())


def mc_error_lambda(
    f, B, dist: DiscreteDistribution, partition: IntervalPartition
) -> float:
    """Multicalibration error over a fixed interval partition of [-1, 1]."""
    defined, starred, _ = _residual_star_terms(f, B, dist)
    cells = partition.cell_indices(_real_values(f)[dist.xs])
    totals = np.zeros(defined.shape[0])
    for i in range(partition.k):
        m = cells == i
        if m.any():
            totals += np.abs(defined[:, m].sum(axis=1)) - starred[:, m].sum(axis=1)
    return float(totals.max())


def cal_error(f, dist: DiscreteDistribution) -> float:
    """Overall calibration error: sum over levels of |E[(y - f)1(f = v)]|."""
    fvals = _real_values(f)[dist.xs]
    resid = dist.ps * (dist.ys - fvals)
    total = 0.0
    for v in np.unique(fvals):
        total += abs(float(resid[fvals == v].sum()))
    return total


def sign_cal_error(f, dist: DiscreteDistribution) -> float:
    """|E[(y - f(x)) sign(f(x))]|."""
    fvals = _real_values(f)[dist.xs]
    return abs(float(np.sum(dist.ps * (dist.ys - fvals) * sign_arr(fvals))))


def regression_loss(f, loss, dist: DiscreteDistribution) -> float:
    """E[loss(y, f(x))] for a binary-label distribution."""
    if dist.label_kind != "binary":
        raise ValueError("regression_loss requires a binary-label distribution")
    fvals = _real_values(f)[dist.xs]
    vals = np.array([loss(y, q) for y, q in zip(dist.ys, fvals)])
    return float(np.sum(dist.ps * vals))


# ---------------------------------------------------------------------------
# dataset files: CSV body plus JSON sidecar
# ---------------------------------------------------------------------------


def save_dataset(data: Dataset, path: str, sidecar: dict | None = None) -> None:
    with open(path, "w") as fh:
        fh.write("x_index,y\n")
        for x, y in zip(data.xs, data.ys):
            fh.write(f"{int(x)},{float(y)!r}\n")
    meta = dict(data.meta or {})
    if sidecar:
        meta.update(sidecar)
    with open(str(path) + ".meta.json", "w") as fh:
        json.dump(meta, fh, indent=2)
        fh.write("\n")


def load_dataset(path: str) -> Dataset:
    xs, ys = [], []
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "x_index,y":
            raise ConfigError(f"{path}: expected header 'x_index,y', got {header!r}")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            sx, sy = line.split(",")
            xs.append(int(sx))
            ys.append(float(sy))
    meta = None
    try:
        with open(str(path) + ".meta.json") as fh:
            meta = json.load(fh)
    except FileNotFoundError:
        pass
    return Dataset(np.array(xs, dtype=np.int64), np.array(ys), meta)
