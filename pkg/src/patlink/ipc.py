"""Patent-class statistics: subset distributions, Q-Q data, and the
automatic selection of allowed classes.

Classes are truncated to Section + Class + Subclass ("A61K"). The allowed
set is estimated from the "sure pairs" subset (very strict disjunction, as
few false pairs as possible): a class is allowed when it holds at least
1.5% of the sure subset's class occurrences and exceeds its baseline share.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field

import numpy as np
from scipy.special import erfinv

from .errors import EmptyDistributionError, ValidationError
from .families import PatentFamily
from .pairing import CandidatePair

log = logging.getLogger(__name__)

_IPC_RE = re.compile(r"^([A-H])(\d{2})([A-Z])")


@dataclass(frozen=True)
class IpcCode:
    section: str
    ipc_class: str
    subclass: str

    def render(self) -> str:
        return f"{self.section}{self.ipc_class}{self.subclass}"


def truncate_ipc(raw: str) -> IpcCode:
    """Keep the top three classification levels, discard group and deeper."""
    m = _IPC_RE.match(raw.strip())
    if not m:
        raise ValidationError(f"malformed IPC code: {raw!r}")
    return IpcCode(section=m.group(1), ipc_class=m.group(2), subclass=m.group(3))


def family_ipc_set(family: PatentFamily) -> set[str]:
    return {truncate_ipc(c).render() for c in family.ipc_codes}


def detect_academic(family: PatentFamily) -> bool:
    """Academic patent heuristic: 'prof' anywhere in a raw inventor name or
    'univ' anywhere in an applicant name, case-insensitive."""
    for name in family.raw_inventor_names:
        if "prof" in name.lower():
            return True
    for applicant in family.applicants:
        if "univ" in applicant.lower():
            return True
    return False


def select_sure_pairs(pairs: list[CandidatePair], min_names: int = 4, min_refs: int = 4,
                      min_cosine: float = 0.95) -> list[CandidatePair]:
    """The very strict subset: >= 4 country-matched common names, or >= 4
    common references, or cosine >= 0.95."""
    sure = []
    for p in pairs:
        names_ok = p.n_common_names >= min_names and p.country_match_count >= min_names
        refs_ok = p.n_common_refs is not None and p.n_common_refs >= min_refs
        cosine_ok = p.cosine is not None and p.cosine >= min_cosine
        if names_ok or refs_ok or cosine_ok:
            sure.append(p)
    return sure


@dataclass
class ClassDistribution:
    label: str
    counts: dict[str, int] = field(default_factory=dict)
    shares: dict[str, float] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.counts.values())


def subset_distribution(families: list[PatentFamily], label: str) -> ClassDistribution:
    """Count every truncated IPC occurrence of every family in the subset;
    each class of a multi-class patent counts individually."""
    if not families:
        raise EmptyDistributionError(f"subset {label!r} is empty")
    counts: dict[str, int] = {}
    for family in families:
        for code in family.ipc_codes:
            key = truncate_ipc(code).render()
            counts[key] = counts.get(key, 0) + 1
    total = sum(counts.values())
    if total == 0:
        raise EmptyDistributionError(f"subset {label!r} has no IPC codes")
    shares = {k: v / total for k, v in counts.items()}
    return ClassDistribution(label=label, counts=counts, shares=shares)


def families_of_pairs(pairs: list[CandidatePair],
                      families_by_id: dict[str, PatentFamily]) -> list[PatentFamily]:
    """Unique families touched by a pair subset, in family_id order."""
    return [families_by_id[fid] for fid in sorted({p.family_id for p in pairs})]


def qq_plot_data(distributions: list[ClassDistribution]) -> list[tuple[str, str, float, float]]:
    """Rows (subset, ipc, share, normal_quantile) for a common Q-Q plot.

    Shares are sorted ascending per subset and paired with standard normal
    quantiles at the (i - 0.5)/n plotting positions.
    """
    rows: list[tuple[str, str, float, float]] = []
    for dist in distributions:
        ordered = sorted(dist.shares.items(), key=lambda kv: (kv[1], kv[0]))
        n = len(ordered)
        for i, (ipc, share) in enumerate(ordered, start=1):
            p = (i - 0.5) / n
            quantile = float(np.sqrt(2.0) * erfinv(2.0 * p - 1.0))
            rows.append((dist.label, ipc, share, quantile))
    return rows


def allowed_classes(sure: ClassDistribution, baseline: ClassDistribution,
                    share_threshold: float = 0.015,
                    require_positive_deviation: bool = True) -> set[str]:
    """Classes holding >= the share threshold of the sure subset and (by
    default) deviating positively from the baseline."""
    allowed = set()
    for code, share in sure.shares.items():
        if share < share_threshold:
            continue
        if require_positive_deviation and share <= baseline.shares.get(code, 0.0):
            continue
        allowed.add(code)
    if not allowed:
        log.warning("allowed-class set is empty; the IPC filter will pass everything through")
    return allowed


def filter_pairs_by_ipc(pairs: list[CandidatePair], allowed: set[str],
                        families_by_id: dict[str, PatentFamily]) -> list[CandidatePair]:
    """Keep pairs whose family holds at least one allowed truncated IPC.

    Sets the allowed_ipc flag on every input pair. An empty allowed set
    degrades to a logged pass-through instead of dropping everything.
    """
    if not allowed:
        for p in pairs:
            p.allowed_ipc = True
        return list(pairs)
    kept = []
    for p in pairs:
        ok = bool(family_ipc_set(families_by_id[p.family_id]) & allowed)
        p.allowed_ipc = ok
        if ok:
            kept.append(p)
    return kept
