"""Set-matching evaluation between predicted and reference documents.

Counts intersect canonical-key sets per category; aggregation is micro by
default (sum counts over the corpus, then compute ratios) with a macro
option. Percentages are full precision internally and rounded to one
decimal only at serialization.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .ast import PLANE, SOLID
from .canon import CATEGORIES, CanonicalDocument

# Categories that score in each domain; the remaining ones still match but
# stay out of SA/PPR/overall for that domain.
ACTIVE_CATEGORIES = {
    PLANE: ("points", "lines", "circles", "semantics"),
    SOLID: ("points", "lines", "circles", "planes", "solids"),
}


class ModeMismatch(ValueError):
    """Prediction and reference were canonicalized with different flags."""


class EmptyCorpus(ValueError):
    """score_corpus needs at least one sample."""


class MixedDomains(ValueError):
    """One invocation scores one domain."""


@dataclass(frozen=True)
class MatchResult:
    tp: dict[str, int]
    pred: dict[str, int]
    ref: dict[str, int]
    solid_type_match: bool

    def exact(self, category: str) -> bool:
        return self.tp[category] == self.pred[category] == self.ref[category]


def match_pair(pred: CanonicalDocument, ref: CanonicalDocument) -> MatchResult:
    """Per-category intersection counts for one (prediction, reference) pair."""
    if pred.mode != ref.mode:
        raise ModeMismatch(f"prediction mode {pred.mode} != reference mode {ref.mode}")
    tp, npred, nref = {}, {}, {}
    for category in CATEGORIES:
        pred_keys = pred.category(category)
        ref_keys = ref.category(category)
        tp[category] = len(pred_keys & ref_keys)
        npred[category] = len(pred_keys)
        nref[category] = len(ref_keys)
    return MatchResult(
        tp=tp,
        pred=npred,
        ref=nref,
        solid_type_match=Counter(pred.solid_kinds()) == Counter(ref.solid_kinds()),
    )


def category_prf(tp: int, pred: int, ref: int) -> tuple[float, float, float]:
    """Precision, recall, F1 in percent, with the vacuous-match convention:
    an empty prediction against an empty reference counts as agreement."""
    if pred == 0:
        precision = 100.0 if ref == 0 else 0.0
    else:
        precision = 100.0 * tp / pred
    if ref == 0:
        recall = 100.0 if pred == 0 else 0.0
    else:
        recall = 100.0 * tp / ref
    f1 = 0.0 if precision + recall == 0 else 2 * precision * recall / (precision + recall)
    return precision, recall, f1


@dataclass
class CorpusReport:
    domain: str
    samples: int
    categories: dict[str, tuple[float, float, float]]
    solids_acc: float | None
    sa: dict[str, float]
    ppr: float
    overall: float
    macro: bool = field(default=False)

    def to_json_dict(self) -> dict:
        out: dict = {"domain": self.domain, "samples": self.samples}
        for category in ACTIVE_CATEGORIES[self.domain]:
            if category == "solids":
                out["solids"] = {"acc": round(self.solids_acc, 1)}
            else:
                p, r, f1 = self.categories[category]
                out[category] = {
                    "precision": round(p, 1),
                    "recall": round(r, 1),
                    "f1": round(f1, 1),
                }
        out["sa"] = {name: round(value, 1) for name, value in self.sa.items()}
        out["ppr"] = round(self.ppr, 1)
        out["overall"] = round(self.overall, 1)
        return out

    def to_table(self) -> str:
        header = f"{'category':<12}{'P':>8}{'R':>8}{'F1':>8}{'SA':>8}"
        rows = [f"domain: {self.domain}  samples: {self.samples}", header, "-" * len(header)]
        for category in ACTIVE_CATEGORIES[self.domain]:
            sa = self.sa[category]
            if category == "solids":
                rows.append(
                    f"{'solids':<12}{'-':>8}{'-':>8}{self.solids_acc:>8.1f}{sa:>8.1f}  (acc)"
                )
                continue
            p, r, f1 = self.categories[category]
            rows.append(f"{category:<12}{p:>8.1f}{r:>8.1f}{f1:>8.1f}{sa:>8.1f}")
        rows.append("-" * len(header))
        rows.append(f"{'PPR':<12}{self.ppr:>8.1f}")
        rows.append(f"{'overall':<12}{self.overall:>8.1f}")
        return "\n".join(rows)


def score_corpus(
    pairs: list[tuple[CanonicalDocument, CanonicalDocument, str]],
    macro: bool = False,
) -> CorpusReport:
    """Aggregate a corpus of (prediction, reference, domain) triples."""
    if not pairs:
        raise EmptyCorpus("cannot score an empty corpus")
    domains = {domain for _, _, domain in pairs}
    if len(domains) != 1:
        raise MixedDomains(f"corpus mixes domains {sorted(domains)}")
    domain = domains.pop()
    active = ACTIVE_CATEGORIES[domain]

    results = [match_pair(pred, ref) for pred, ref, _ in pairs]
    n = len(results)

    categories: dict[str, tuple[float, float, float]] = {}
    for category in active:
        if category == "solids":
            continue
        if macro:
            per_sample = [
                category_prf(r.tp[category], r.pred[category], r.ref[category]) for r in results
            ]
            categories[category] = tuple(
                sum(values) / n for values in zip(*per_sample)
            )
        else:
            categories[category] = category_prf(
                sum(r.tp[category] for r in results),
                sum(r.pred[category] for r in results),
                sum(r.ref[category] for r in results),
            )

    sa = {
        category: 100.0 * sum(1 for r in results if r.exact(category)) / n for category in active
    }
    ppr = 100.0 * sum(1 for r in results if all(r.exact(c) for c in active)) / n
    solids_acc = None
    if domain == SOLID:
        solids_acc = 100.0 * sum(1 for r in results if r.solid_type_match) / n

    parts = [categories[c][2] for c in active if c != "solids"]
    if domain == SOLID:
        parts.append(solids_acc)
    overall = sum(parts) / len(parts)

    return CorpusReport(
        domain=domain,
        samples=n,
        categories=categories,
        solids_acc=solids_acc,
        sa=sa,
        ppr=ppr,
        overall=overall,
        macro=macro,
    )
