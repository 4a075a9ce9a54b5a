"""Fuzzy 3-valent disambiguated decision models.

A band (r, a) splits [0, 1] into [0, r] (different irides, D), (r, a)
(undecidable, O) and [a, 1] (identical irides, I).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import IncompatibleRestrictionsError, InvalidConfigurationError, InvalidInputError
from .evaluation import DistributionModel, PessimismParams, invert_odds, ofa, ofr


class Decision(str, enum.Enum):
    D = "D"  # different irides: decidable imposter pair
    O = "O"  # otherwise: undecidable pair
    I = "I"  # identical irides: decidable genuine pair


@dataclass(frozen=True)
class F3VDMBand:
    r: float
    a: float
    provenance: str = "explicit"
    pessimism: PessimismParams | None = field(default=None, compare=False)

    def __post_init__(self):
        if not 0.0 <= self.r < self.a <= 1.0:
            raise InvalidInputError(f"band needs 0 <= r < a <= 1, got r={self.r}, a={self.a}")

    def to_record(self) -> str:
        """Plain-text ``key=value`` lines."""
        lines = [f"r={self.r!r}", f"a={self.a!r}", f"provenance={self.provenance}"]
        if self.pessimism is not None:
            p = self.pessimism
            lines += [
                f"sigma_scale={p.sigma_scale!r}",
                f"imposter_shift={p.imposter_shift!r}",
                f"genuine_shift={p.genuine_shift!r}",
            ]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_record(cls, text: str) -> "F3VDMBand":
        kv = {}
        for line in text.splitlines():
            if line.strip():
                k, _, v = line.partition("=")
                kv[k.strip()] = v.strip()
        pess = None
        if "sigma_scale" in kv:
            pess = PessimismParams(
                float(kv["sigma_scale"]), float(kv["imposter_shift"]), float(kv["genuine_shift"])
            )
        return cls(float(kv["r"]), float(kv["a"]), kv.get("provenance", "explicit"), pess)


@dataclass(frozen=True)
class DiscomfortReport:
    genuine_discomfort: float
    imposter_discomfort: float

    @property
    def total(self) -> float:
        return self.genuine_discomfort + self.imposter_discomfort


def decide(band: F3VDMBand, s: float) -> Decision:
    if not 0.0 <= s <= 1.0:
        raise InvalidInputError(f"score must lie in [0, 1], got {s}")
    if s >= band.a:
        return Decision.I
    if s <= band.r:
        return Decision.D
    return Decision.O


def _make_band(r: float, a: float, provenance: str, pessimism) -> F3VDMBand:
    if r >= a:
        raise IncompatibleRestrictionsError(r, a)
    if r < 0.0 or a > 1.0:
        raise InvalidConfigurationError(f"band thresholds fall outside [0, 1]: r={r}, a={a}")
    return F3VDMBand(r, a, provenance, pessimism)


def band_from_odds(
    v1: float,
    v2: float,
    pg: DistributionModel,
    pi: DistributionModel,
    pessimism: PessimismParams | None = None,
) -> F3VDMBand:
    """r = POFR^-1(v1) on the pessimized genuine model, a = POFA^-1(v2) on the imposter one."""
    r = invert_odds("POFR", pg, v1)
    a = invert_odds("POFA", pi, v2)
    return _make_band(r, a, f"odds:POFR={v1!r},POFA={v2!r}", pessimism)


def band_from_discomfort(
    a: float,
    target_total: float,
    pg: DistributionModel,
    pi: DistributionModel,
    pessimism: PessimismParams | None = None,
) -> F3VDMBand:
    """Keep the accept threshold and pick r so that POFR(a) + POFA(r) = target_total."""
    genuine_part = float(ofr(pg, a))
    budget = target_total - genuine_part
    if budget <= 0.0:
        raise InvalidConfigurationError(
            f"budget {target_total!r} does not exceed POFR(a) = {genuine_part!r}"
        )
    if budget >= 1.0:
        raise InvalidConfigurationError(f"imposter budget {budget!r} is not a valid odds value")
    r = invert_odds("POFA", pi, budget)
    return _make_band(r, a, f"discomfort:a={a!r},total={target_total!r}", pessimism)


def discomfort(band: F3VDMBand, pg: DistributionModel, pi: DistributionModel) -> DiscomfortReport:
    """Odds of honest users landing in the undecidable band: POFR(a) and POFA(r)."""
    return DiscomfortReport(float(ofr(pg, band.a)), float(ofa(pi, band.r)))
