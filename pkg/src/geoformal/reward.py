"""The verifiable reward: format indicator plus type-weighted precision.

total = lambda1 * r_fmt + lambda2 * r_geo, with
r_geo = sum_k omega_k * precision_k over the domain's active categories.

r_geo is precision-only by design and therefore recall-blind: deleting
primitives from a perfect prediction can leave r_geo at 1. The format gate
and group-relative training are the intended counterweights; an optional
f1 mode (precision replaced by per-category F1) is available but off by
default.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .ast import PLANE
from .canon import CanonicalDocument, CanonMode, canonicalize
from .metrics import ACTIVE_CATEGORIES, category_prf, match_pair
from .parser import parse_document
from .validator import SEVERITY_ERROR, check_consistency, check_format


class ConfigError(ValueError):
    """Weights failed validation."""


class BadReference(ValueError):
    """The trusted reference text failed parsing or consistency."""


@dataclass(frozen=True)
class RewardConfig:
    lambda1: float = 0.2
    lambda2: float = 0.8
    omega: dict[str, float] = field(default_factory=dict)
    mode: CanonMode = CanonMode()
    f1_mode: bool = False

    def __post_init__(self):
        if not (math.isfinite(self.lambda1) and math.isfinite(self.lambda2)):
            raise ConfigError("lambda weights must be finite")
        if self.lambda1 < 0 or self.lambda2 < 0:
            raise ConfigError("lambda weights must be nonnegative")
        if self.lambda1 + self.lambda2 <= 0:
            raise ConfigError("lambda weights must not both be zero")
        for category, weight in self.omega.items():
            if category not in ("points", "lines", "circles", "planes", "solids", "semantics"):
                raise ConfigError(f"unknown omega category {category!r}")
            if not math.isfinite(weight) or weight < 0:
                raise ConfigError(f"omega[{category!r}] must be a nonnegative finite number")

    def normalized(self) -> "RewardConfig":
        # lambda2 is set to the exact float complement so a perfect
        # prediction scores exactly 1.0
        total = self.lambda1 + self.lambda2
        lambda1 = self.lambda1 / total
        return RewardConfig(
            lambda1=lambda1,
            lambda2=1.0 - lambda1,
            omega=dict(self.omega),
            mode=self.mode,
            f1_mode=self.f1_mode,
        )

    def omega_for(self, domain: str) -> dict[str, float]:
        """Weights over the domain's active categories, summing to 1.

        Unlisted categories default to weight 1 (uniform baseline). The last
        weight is the exact float complement of the preceding partial sum, so
        summing them in category order yields exactly 1.0."""
        active = ACTIVE_CATEGORIES[domain]
        raw = {category: self.omega.get(category, 1.0) for category in active}
        total = sum(raw.values())
        if total <= 0:
            raise ConfigError(f"omega weights for {domain} sum to zero")
        weights = {category: raw[category] / total for category in active}
        partial = 0.0
        for category in active[:-1]:
            partial += weights[category]
        weights[active[-1]] = 1.0 - partial
        return weights

    @classmethod
    def from_dict(cls, data: dict) -> "RewardConfig":
        unknown = set(data) - {"lambda1", "lambda2", "omega", "mode", "f1_mode"}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        try:
            mode = CanonMode.from_dict(data.get("mode"))
        except ValueError as err:
            raise ConfigError(str(err)) from err
        omega = data.get("omega", {})
        if not isinstance(omega, dict):
            raise ConfigError("omega must be a mapping of category to weight")
        return cls(
            lambda1=float(data.get("lambda1", 0.2)),
            lambda2=float(data.get("lambda2", 0.8)),
            omega={k: float(v) for k, v in omega.items()},
            mode=mode,
            f1_mode=bool(data.get("f1_mode", False)),
        )

    @classmethod
    def load(cls, path: str) -> "RewardConfig":
        with open(path, "r", encoding="utf-8") as handle:
            try:
                data = json.load(handle)
            except json.JSONDecodeError as err:
                raise ConfigError(f"config is not valid JSON: {err}") from err
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        return cls.from_dict(data)

    def override(self, data: dict) -> "RewardConfig":
        """A copy with the given partial settings applied."""
        merged = self.to_dict()
        merged.update(data)
        return RewardConfig.from_dict(merged)

    def to_dict(self) -> dict:
        return {
            "lambda1": self.lambda1,
            "lambda2": self.lambda2,
            "omega": dict(self.omega),
            "mode": self.mode.to_dict(),
            "f1_mode": self.f1_mode,
        }


@dataclass(frozen=True)
class RewardBreakdown:
    r_fmt: int
    r_geo: float
    total: float
    per_category_precision: dict[str, float]
    config_echo: dict

    def to_json_dict(self) -> dict:
        return {
            "total": self.total,
            "r_fmt": self.r_fmt,
            "r_geo": self.r_geo,
            "per_category_precision": dict(self.per_category_precision),
            "config": self.config_echo,
        }


def format_reward(text: str, domain: str = PLANE) -> int:
    """The binary structural indicator: 1 iff the tag format checks out."""
    return 1 if check_format(text, domain).is_compliant else 0


def _category_score(result, category: str, f1_mode: bool) -> float:
    tp = result.tp[category]
    pred = result.pred[category]
    ref = result.ref[category]
    if f1_mode:
        return category_prf(tp, pred, ref)[2] / 100.0
    if pred == 0:
        return 1.0 if ref == 0 else 0.0
    return tp / pred


def geometric_reward(
    pred: CanonicalDocument, ref: CanonicalDocument, config: RewardConfig
) -> float:
    """Type-weighted per-category precision between canonical documents."""
    result = match_pair(pred, ref)
    weights = config.omega_for(ref.domain)
    return sum(
        weight * _category_score(result, category, config.f1_mode)
        for category, weight in weights.items()
    )


def total_reward(
    pred_text: str, ref_text: str, domain: str, config: RewardConfig | None = None
) -> RewardBreakdown:
    """Score one prediction against one trusted reference."""
    config = (config or RewardConfig()).normalized()
    ref_parse = parse_document(ref_text, domain)
    if ref_parse.diagnostics:
        raise BadReference(
            "reference fails to parse: " + "; ".join(str(d) for d in ref_parse.diagnostics[:3])
        )
    ref_errors = [f for f in check_consistency(ref_parse.document) if f.severity == SEVERITY_ERROR]
    if ref_errors:
        raise BadReference(
            "reference is inconsistent: " + "; ".join(f.message for f in ref_errors[:3])
        )

    pred_parse = parse_document(pred_text, domain)  # salvages whatever parses
    pred_doc = canonicalize(pred_parse.document, config.mode)
    ref_doc = canonicalize(ref_parse.document, config.mode)

    result = match_pair(pred_doc, ref_doc)
    weights = config.omega_for(domain)
    precisions = {
        category: _category_score(result, category, config.f1_mode) for category in weights
    }
    r_fmt = format_reward(pred_text, domain)
    r_geo = sum(weights[category] * precisions[category] for category in weights)
    total = config.lambda1 * r_fmt + config.lambda2 * r_geo
    echo = config.to_dict()
    echo["omega"] = weights
    return RewardBreakdown(
        r_fmt=r_fmt,
        r_geo=r_geo,
        total=total,
        per_category_precision=precisions,
        config_echo=echo,
    )
