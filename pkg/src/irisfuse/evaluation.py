"""Decision-landscape analysis of genuine/imposter score pools.

Empirical *rates* (FAR, FRR, EER) are step functions counted on the pools with
inclusive boundaries: FAR(t) counts imposter scores >= t, FRR(t) counts genuine
scores <= t.  *Odds* (OFA, OFR and their pessimistic variants) come from
Gaussian fits of the two classes and are left unrenormalised over [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.special import ndtr

from .errors import InvalidConfigurationError, InvalidInputError

ODDS_KINDS = ("OFA", "OFR", "POFA", "POFR")
RATE_KINDS = ("FAR", "FRR")

_BISECT_TOL = 1e-12
_BRACKET_SIGMAS = 40.0


# --------------------------------------------------------------------------
# pools and class statistics


@dataclass(frozen=True)
class ScorePool:
    genuine: np.ndarray
    imposter: np.ndarray

    def __post_init__(self):
        for name in ("genuine", "imposter"):
            arr = np.sort(np.asarray(getattr(self, name), dtype=np.float64).ravel())
            if arr.size and (np.isnan(arr).any() or arr[0] < 0.0 or arr[-1] > 1.0):
                raise InvalidInputError(f"{name} scores must lie in [0, 1]")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n_genuine(self) -> int:
        return int(self.genuine.size)

    @property
    def n_imposter(self) -> int:
        return int(self.imposter.size)

    def require_both(self) -> None:
        if not self.genuine.size or not self.imposter.size:
            raise InvalidInputError("both genuine and imposter scores are required")


@dataclass(frozen=True)
class ClassStats:
    mean: float
    std: float
    count: int = 0

    @property
    def dof(self) -> float:
        """Binomial degrees of freedom mu(1-mu)/sigma^2 (inf for a zero spread)."""
        if self.std == 0.0:
            return math.inf
        return self.mean * (1.0 - self.mean) / self.std**2

    @property
    def variance(self) -> float:
        return self.std**2


def class_stats(scores) -> ClassStats:
    """Sample mean, sample standard deviation (n-1) and binomial dof."""
    arr = np.asarray(scores, dtype=np.float64).ravel()
    if arr.size < 2:
        raise InvalidInputError("class statistics need at least 2 scores")
    return ClassStats(float(arr.mean()), float(arr.std(ddof=1)), int(arr.size))


def decidability(gi: ClassStats, gg: ClassStats) -> float:
    """d' = |mu_I - mu_G| / sqrt((sigma_I^2 + sigma_G^2) / 2)."""
    num = abs(gi.mean - gg.mean)
    den = math.sqrt((gi.variance + gg.variance) / 2.0)
    if den == 0.0:
        if num == 0.0:
            return 0.0
        raise ZeroDivisionError("decidability undefined: both classes have zero spread")
    return num / den


def fisher_ratio(gi: ClassStats, gg: ClassStats) -> float:
    """(mu_I - mu_G)^2 / (v_I + v_G)."""
    num = (gi.mean - gg.mean) ** 2
    den = gi.variance + gg.variance
    if den == 0.0:
        if num == 0.0:
            return 0.0
        raise ZeroDivisionError("Fisher ratio undefined: both classes have zero spread")
    return num / den


# --------------------------------------------------------------------------
# empirical rates


def _nonempty(arr: np.ndarray, name: str) -> None:
    if not arr.size:
        raise InvalidInputError(f"no {name} scores")


def far_count(pool: ScorePool, t):
    _nonempty(pool.imposter, "imposter")
    return pool.n_imposter - np.searchsorted(pool.imposter, t, side="left")


def frr_count(pool: ScorePool, t):
    _nonempty(pool.genuine, "genuine")
    return np.searchsorted(pool.genuine, t, side="right")


def far(pool: ScorePool, t):
    """Fraction of imposter scores >= t."""
    out = far_count(pool, t) / pool.n_imposter
    return float(out) if np.ndim(out) == 0 else out


def frr(pool: ScorePool, t):
    """Fraction of genuine scores <= t."""
    out = frr_count(pool, t) / pool.n_genuine
    return float(out) if np.ndim(out) == 0 else out


def extremes(pool: ScorePool) -> tuple[float, float, float]:
    """(MIS, mGS, O1 = MIS - mGS); a negative overlap is a safety gap."""
    pool.require_both()
    mis = float(pool.imposter[-1])
    mgs = float(pool.genuine[0])
    return mis, mgs, mis - mgs


def step_representatives(pool: ScorePool) -> np.ndarray:
    """One threshold per constant piece of (FAR, FRR) between the extreme scores.

    Both rates only change at observed scores, so the pieces are the distinct
    scores themselves and the open gaps between consecutive distinct scores
    (represented by their midpoints).
    """
    u = np.unique(np.concatenate([pool.genuine, pool.imposter]))
    mids = (u[:-1] + u[1:]) / 2.0
    out = np.empty(u.size + mids.size)
    out[0::2] = u
    out[1::2] = mids
    return out


def eer(pool: ScorePool) -> tuple[float, float]:
    """(t_EER, EER) on the empirical step curves.

    Strictly separated classes give EER 0 at the midpoint of the gap.
    Otherwise the threshold minimising |FAR - FRR| is chosen (smallest on ties)
    and the EER is the mean of FAR and FRR there.
    """
    pool.require_both()
    mis, mgs, o1 = extremes(pool)
    if o1 < 0:
        return (mis + mgs) / 2.0, 0.0
    ts = step_representatives(pool)
    fa = far(pool, ts)
    fr = frr(pool, ts)
    i = int(np.argmin(np.abs(fa - fr)))
    return float(ts[i]), float((fa[i] + fr[i]) / 2.0)


def roc(pool: ScorePool, grid) -> list[tuple[float, float, float]]:
    """(t, FAR(t), FRR(t)) at every threshold of ``grid``."""
    grid = np.asarray(grid, dtype=np.float64).ravel()
    if not grid.size:
        raise InvalidInputError("empty threshold grid")
    fa = np.atleast_1d(far(pool, grid))
    fr = np.atleast_1d(frr(pool, grid))
    return [(float(t), float(a), float(r)) for t, a, r in zip(grid, fa, fr)]


# --------------------------------------------------------------------------
# Gaussian models and odds


@dataclass(frozen=True)
class DistributionModel:
    mu: float
    sigma: float
    family: str = "gaussian"

    def __post_init__(self):
        if not self.sigma > 0.0 or not math.isfinite(self.sigma):
            raise InvalidInputError(f"model sigma must be positive, got {self.sigma}")


@dataclass(frozen=True)
class PessimismParams:
    sigma_scale: float = 1.2
    imposter_shift: float = 0.0
    genuine_shift: float = 0.0

    def __post_init__(self):
        if self.sigma_scale < 1.0:
            raise InvalidInputError("sigma_scale must be >= 1")
        if self.imposter_shift < 0.0 or self.genuine_shift < 0.0:
            raise InvalidInputError("pessimism shifts must be >= 0")


def fit_model(stats: ClassStats) -> DistributionModel:
    if stats.std <= 0.0:
        raise InvalidInputError("cannot fit a Gaussian to a class with zero spread")
    return DistributionModel(stats.mean, stats.std)


def pessimize(m: DistributionModel, p: PessimismParams, cls: str) -> DistributionModel:
    """Widen by ``sigma_scale`` and slide the class mean toward the other class."""
    if cls == "imposter":
        return DistributionModel(m.mu + p.imposter_shift, p.sigma_scale * m.sigma)
    if cls == "genuine":
        return DistributionModel(m.mu - p.genuine_shift, p.sigma_scale * m.sigma)
    raise InvalidInputError(f"class must be 'imposter' or 'genuine', got {cls!r}")


def norm_cdf(x):
    """Standard normal CDF."""
    out = ndtr(x)
    return float(out) if np.ndim(out) == 0 else out


def ofa(m: DistributionModel, t):
    """Upper-tail mass of the imposter model above t (POFA when m is pessimized)."""
    return norm_cdf(-(np.asarray(t, dtype=np.float64) - m.mu) / m.sigma)


def ofr(m: DistributionModel, t):
    """Lower-tail mass of the genuine model below t (POFR when m is pessimized)."""
    return norm_cdf((np.asarray(t, dtype=np.float64) - m.mu) / m.sigma)


def odds(kind: str, m: DistributionModel, t):
    if kind in ("OFA", "POFA"):
        return ofa(m, t)
    if kind in ("OFR", "POFR"):
        return ofr(m, t)
    raise InvalidInputError(f"unknown odds curve {kind!r}")


def _bisect(g, lo: float, hi: float, tol: float = _BISECT_TOL) -> float:
    """Root of a function with g(lo) > 0 >= g(hi)."""
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if g(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def invert_odds(kind: str, m: DistributionModel, v: float) -> float:
    """Threshold t with curve(t) = v, by bisection.

    ``kind`` selects the tail: OFA/POFA are upper tails, OFR/POFR lower tails.
    For the pessimistic curves pass the pessimized model.
    """
    if not 0.0 < v < 1.0:
        raise InvalidInputError(f"target odds must lie in (0, 1), got {v}")
    lo = m.mu - _BRACKET_SIGMAS * m.sigma
    hi = m.mu + _BRACKET_SIGMAS * m.sigma
    if kind in ("OFA", "POFA"):
        return _bisect(lambda t: ofa(m, t) - v, lo, hi)
    if kind in ("OFR", "POFR"):
        return _bisect(lambda t: v - ofr(m, t), lo, hi)
    raise InvalidInputError(f"unknown odds curve {kind!r}")


def oee_poee(mi: DistributionModel, mg: DistributionModel) -> tuple[float, float]:
    """(t*, odds) where the imposter upper tail equals the genuine lower tail.

    Fed the fitted models this is the OEE; fed pessimized models, the POEE.
    """
    if mi.mu >= mg.mu:
        raise InvalidConfigurationError(
            f"imposter mean {mi.mu} must be below genuine mean {mg.mu}"
        )
    t = _bisect(lambda x: ofa(mi, x) - ofr(mg, x), mi.mu, mg.mu)
    return t, float((ofa(mi, t) + ofr(mg, t)) / 2.0)


# --------------------------------------------------------------------------
# landscape summary and functioning regimes


@dataclass(frozen=True)
class ModelSet:
    imposter: DistributionModel
    genuine: DistributionModel
    pessimism: PessimismParams
    p_imposter: DistributionModel
    p_genuine: DistributionModel

    @classmethod
    def from_stats(cls, gi: ClassStats, gg: ClassStats, pessimism: PessimismParams | None = None) -> "ModelSet":
        p = pessimism or PessimismParams()
        mi, mg = fit_model(gi), fit_model(gg)
        return cls(mi, mg, p, pessimize(mi, p, "imposter"), pessimize(mg, p, "genuine"))

    @classmethod
    def from_pool(cls, pool: ScorePool, pessimism: PessimismParams | None = None) -> "ModelSet":
        return cls.from_stats(class_stats(pool.imposter), class_stats(pool.genuine), pessimism)

    def curve(self, kind: str) -> DistributionModel:
        return {
            "OFA": self.imposter,
            "OFR": self.genuine,
            "POFA": self.p_imposter,
            "POFR": self.p_genuine,
        }[kind]

    def at(self, kind: str, t):
        return odds(kind, self.curve(kind), t)


@dataclass(frozen=True)
class LandscapeSummary:
    imposter: ClassStats
    genuine: ClassStats
    d_prime: float
    fisher: float
    overlap: float
    mis: float
    mgs: float
    eer: float
    t_eer: float
    far_mis: float
    frr_mis: float
    far_mgs: float
    frr_mgs: float
    oee: float = math.nan
    t_oee: float = math.nan
    poee: float = math.nan
    t_poee: float = math.nan
    pofa_mgs: float = math.nan
    pofr_mis: float = math.nan
    models: ModelSet | None = field(default=None, compare=False)


def analyze(pool: ScorePool, pessimism: PessimismParams | None = None) -> LandscapeSummary:
    """Full evaluation-criteria block for one pool.

    Odds fields stay NaN when a class has zero spread or the means are not
    ordered imposter < genuine.
    """
    pool.require_both()
    gi, gg = class_stats(pool.imposter), class_stats(pool.genuine)
    try:
        d = decidability(gi, gg)
        fr = fisher_ratio(gi, gg)
    except ZeroDivisionError:
        d = fr = math.inf
    mis, mgs, o1 = extremes(pool)
    t_e, e = eer(pool)
    extra = {}
    models = None
    if gi.std > 0 and gg.std > 0:
        models = ModelSet.from_stats(gi, gg, pessimism)
        extra["pofa_mgs"] = float(ofa(models.p_imposter, mgs))
        extra["pofr_mis"] = float(ofr(models.p_genuine, mis))
        if gi.mean < gg.mean:
            extra["t_oee"], extra["oee"] = oee_poee(models.imposter, models.genuine)
            extra["t_poee"], extra["poee"] = oee_poee(models.p_imposter, models.p_genuine)
    return LandscapeSummary(
        imposter=gi,
        genuine=gg,
        d_prime=d,
        fisher=fr,
        overlap=o1,
        mis=mis,
        mgs=mgs,
        eer=e,
        t_eer=t_e,
        far_mis=far(pool, mis),
        frr_mis=frr(pool, mis),
        far_mgs=far(pool, mgs),
        frr_mgs=frr(pool, mgs),
        models=models,
        **extra,
    )


@dataclass(frozen=True)
class RegimeRow:
    metric: str
    target: float
    threshold: float
    achieved: float
    far: float
    frr: float
    ofa: float
    ofr: float
    pofa: float
    pofr: float
    approximate: bool


def _row(pool: ScorePool, models: ModelSet | None, metric, target, t, achieved, approx) -> RegimeRow:
    nan = math.nan
    return RegimeRow(
        metric=metric,
        target=target,
        threshold=float(t),
        achieved=float(achieved),
        far=far(pool, t),
        frr=frr(pool, t),
        ofa=float(models.at("OFA", t)) if models else nan,
        ofr=float(models.at("OFR", t)) if models else nan,
        pofa=float(models.at("POFA", t)) if models else nan,
        pofr=float(models.at("POFR", t)) if models else nan,
        approximate=approx,
    )


def _empirical_regime(pool: ScorePool, metric: str, target: float) -> tuple[float, float]:
    u = step_representatives(pool)
    # the unbounded pieces below/above all scores, represented just past the extremes
    ts = np.concatenate([[np.nextafter(u[0], -np.inf)], u, [np.nextafter(u[-1], np.inf)]])
    fa = far(pool, ts)
    fr = frr(pool, ts)
    value, other = (fa, fr) if metric == "FAR" else (fr, fa)
    gap = np.abs(value - target)
    cand = np.flatnonzero(gap == gap.min())
    # among equally near steps prefer the least complementary error, then the smallest t
    best = cand[np.lexsort((ts[cand], other[cand]))[0]]
    return float(ts[best]), float(value[best])


def _is_approximate(target: float, achieved: float) -> bool:
    if target == 0.0:
        return achieved != 0.0
    return abs(achieved - target) > 0.5 * target


def regime_report(
    pool: ScorePool,
    models: ModelSet | None,
    targets: Iterable[tuple[str, float]],
) -> list[RegimeRow]:
    """Functioning regimes: one row per (metric, target odds/rate).

    Empirical metrics pick the nearest achievable step (ties: least
    complementary error, then smallest threshold); model metrics are inverted
    exactly.  ``approximate`` flags rows whose achieved value is more than 50%
    away from the target.
    """
    rows = []
    for metric, target in targets:
        metric = metric.upper()
        if metric in RATE_KINDS:
            pool.require_both()
            t, got = _empirical_regime(pool, metric, target)
        elif metric in ODDS_KINDS:
            if models is None:
                raise InvalidConfigurationError(f"{metric} regime needs fitted models")
            t = invert_odds(metric, models.curve(metric), target)
            got = float(models.at(metric, t))
        else:
            raise InvalidInputError(f"unknown regime metric {metric!r}")
        rows.append(_row(pool, models, metric, target, t, got, _is_approximate(target, got)))
    return rows


def parse_regimes(spec: str | Sequence[str]) -> list[tuple[str, float]]:
    """Parse ``"FRR=0.02,FAR=1e-3"`` (or a list of such items) into targets."""
    items = spec.split(",") if isinstance(spec, str) else list(spec)
    out = []
    for item in items:
        item = item.strip()
        if not item:
            continue
        metric, sep, value = item.partition("=")
        metric = metric.strip().upper()
        if not sep or metric not in RATE_KINDS + ODDS_KINDS:
            raise InvalidInputError(f"bad regime target {item!r}; expected METRIC=VALUE")
        out.append((metric, float(value)))
    return out
