"""IPC truncation, subset distributions, Q-Q data, allowed classes."""

import datetime as dt

import numpy as np
import pytest
from scipy.stats import norm

from patlink import ipc
from patlink.errors import EmptyDistributionError, ValidationError
from patlink.families import PatentFamily
from patlink.pairing import CandidatePair


def make_family(family_id="EP1", ipc_codes=("A61K 38/17",), inventors_raw=(),
                applicants=()):
    return PatentFamily(
        family_id=family_id, filing_date=dt.date(2000, 1, 1), inventors=[],
        raw_inventor_names=list(inventors_raw), applicants=list(applicants),
        ipc_codes=list(ipc_codes), description_texts={}, reference_strings=[],
        member_numbers=[f"{family_id}A1"],
    )


def make_pair(family_id="EP1", pub_id="p1", n_names=1, matches=0, cosine=None, n_refs=None):
    return CandidatePair(family_id, pub_id, ["x, y"] * n_names, n_names, matches, 1.0,
                         cosine=cosine, n_common_refs=n_refs)


class TestTruncateIpc:
    def test_full_code(self):
        assert ipc.truncate_ipc("A61K 38/17").render() == "A61K"

    def test_already_truncated(self):
        assert ipc.truncate_ipc("A61K").render() == "A61K"

    def test_malformed(self):
        with pytest.raises(ValidationError):
            ipc.truncate_ipc("9XYZ")


class TestDetectAcademic:
    def test_prof_in_inventor(self):
        fam = make_family(inventors_raw=["Prof. Dr. K. Lippert"], applicants=["Acme GmbH"])
        assert ipc.detect_academic(fam) is True

    def test_univ_in_applicant(self):
        fam = make_family(inventors_raw=["K. Lippert"], applicants=["Universitaet Koeln"])
        assert ipc.detect_academic(fam) is True

    def test_neither(self):
        fam = make_family(inventors_raw=["K. Lippert"], applicants=["Acme GmbH"])
        assert ipc.detect_academic(fam) is False


class TestSelectSurePairs:
    def test_four_country_matched_names(self):
        assert ipc.select_sure_pairs([make_pair(n_names=4, matches=4)]) != []

    def test_high_cosine(self):
        assert ipc.select_sure_pairs([make_pair(cosine=0.96)]) != []

    def test_four_refs(self):
        assert ipc.select_sure_pairs([make_pair(n_refs=4)]) != []

    def test_all_disjuncts_fail(self):
        pair = make_pair(n_names=3, matches=3, cosine=0.90, n_refs=3)
        assert ipc.select_sure_pairs([pair]) == []

    def test_four_names_without_country_match_not_sure(self):
        assert ipc.select_sure_pairs([make_pair(n_names=4, matches=3)]) == []


class TestSubsetDistribution:
    def test_hand_count(self):
        fams = [make_family("EP1", ["A61K 38/17"]),
                make_family("EP2", ["A61K 31/00", "C07D 233/64"])]
        dist = ipc.subset_distribution(fams, "test")
        assert dist.shares["A61K"] == pytest.approx(2 / 3)
        assert dist.shares["C07D"] == pytest.approx(1 / 3)

    def test_single_family_single_code(self):
        dist = ipc.subset_distribution([make_family()], "one")
        assert dist.shares == {"A61K": 1.0}

    def test_empty_subset(self):
        with pytest.raises(EmptyDistributionError):
            ipc.subset_distribution([], "empty")

    def test_shares_sum_to_one(self):
        rng = np.random.default_rng(8)
        sections = ["A61K", "C07D", "H04L", "G06F", "B01D"]
        fams = [make_family(f"EP{i}", list(rng.choice(sections, size=rng.integers(1, 4))))
                for i in range(50)]
        dist = ipc.subset_distribution(fams, "rand")
        assert sum(dist.shares.values()) == pytest.approx(1.0, abs=1e-9)


class TestQqPlotData:
    def test_row_count_and_quantiles(self):
        rng = np.random.default_rng(4)
        sections = [f"A{i:02d}B" for i in range(10)]
        fams_a = [make_family(f"EP{i}", [sections[i]]) for i in range(10)]
        fams_b = [make_family(f"EQ{i}", [sections[9 - i]]) for i in range(10)]
        dist_a = ipc.subset_distribution(fams_a, "a")
        dist_b = ipc.subset_distribution(fams_b, "b")
        rows = ipc.qq_plot_data([dist_a, dist_b])
        assert len(rows) == 20
        # oracle: scipy's inverse normal CDF at the same plotting positions
        for subset in ("a", "b"):
            quantiles = [q for s, _, _, q in rows if s == subset]
            n = len(quantiles)
            expected = [float(norm.ppf((i - 0.5) / n)) for i in range(1, n + 1)]
            np.testing.assert_allclose(quantiles, expected, atol=1e-9)

    def test_identical_subsets_identical_quantiles(self):
        fams = [make_family(f"EP{i}", ["A61K"]) for i in range(3)]
        d1 = ipc.subset_distribution(fams, "x")
        d2 = ipc.subset_distribution(fams, "y")
        rows = ipc.qq_plot_data([d1, d2])
        assert [r[3] for r in rows if r[0] == "x"] == [r[3] for r in rows if r[0] == "y"]

    def test_single_class_quantile_zero(self):
        dist = ipc.subset_distribution([make_family()], "solo")
        rows = ipc.qq_plot_data([dist])
        assert len(rows) == 1
        assert rows[0][3] == pytest.approx(0.0, abs=1e-12)


class TestAllowedClasses:
    def _dist(self, shares, label):
        counts = {k: int(v * 1000) for k, v in shares.items()}
        return ipc.ClassDistribution(label=label, counts=counts, shares=shares)

    def test_above_threshold_and_deviating(self):
        sure = self._dist({"A61K": 0.08, "H04L": 0.005, "B01D": 0.02}, "sure")
        base = self._dist({"A61K": 0.03, "H04L": 0.04, "B01D": 0.025}, "baseline")
        assert ipc.allowed_classes(sure, base) == {"A61K"}

    def test_below_percentage_limit(self):
        sure = self._dist({"H04L": 0.005}, "sure")
        base = self._dist({"H04L": 0.04}, "baseline")
        assert ipc.allowed_classes(sure, base) == set()

    def test_no_positive_deviation(self):
        sure = self._dist({"B01D": 0.02}, "sure")
        base = self._dist({"B01D": 0.025}, "baseline")
        assert ipc.allowed_classes(sure, base) == set()

    def test_monotone_in_share_threshold(self):
        rng = np.random.default_rng(12)
        codes = [f"A{i:02d}K" for i in range(20)]
        raw = rng.dirichlet(np.ones(20))
        sure = self._dist(dict(zip(codes, raw)), "sure")
        base = self._dist({c: 0.0 for c in codes}, "baseline")
        previous = None
        for threshold in (0.005, 0.015, 0.05, 0.2):
            allowed = ipc.allowed_classes(sure, base, share_threshold=threshold)
            if previous is not None:
                assert allowed <= previous
            previous = allowed


class TestFilterPairsByIpc:
    def test_any_membership_keeps(self):
        fams = {"EP1": make_family("EP1", ["A61K", "H04L"])}
        kept = ipc.filter_pairs_by_ipc([make_pair("EP1")], {"A61K"}, fams)
        assert len(kept) == 1 and kept[0].allowed_ipc is True

    def test_no_membership_drops(self):
        fams = {"EP1": make_family("EP1", ["H04L"])}
        pair = make_pair("EP1")
        kept = ipc.filter_pairs_by_ipc([pair], {"A61K"}, fams)
        assert kept == [] and pair.allowed_ipc is False

    def test_pass_through_when_all_allowed(self):
        fams = {"EP1": make_family("EP1", ["A61K"]), "EP2": make_family("EP2", ["H04L"])}
        pairs = [make_pair("EP1"), make_pair("EP2", "p2")]
        kept = ipc.filter_pairs_by_ipc(pairs, {"A61K", "H04L"}, fams)
        assert kept == pairs

    def test_empty_allowed_set_degrades_to_pass_through(self):
        fams = {"EP1": make_family("EP1", ["A61K"])}
        pairs = [make_pair("EP1")]
        assert ipc.filter_pairs_by_ipc(pairs, set(), fams) == pairs

    def test_idempotent(self):
        fams = {"EP1": make_family("EP1", ["A61K"]), "EP2": make_family("EP2", ["H04L"])}
        pairs = [make_pair("EP1"), make_pair("EP2", "p2")]
        once = ipc.filter_pairs_by_ipc(pairs, {"A61K"}, fams)
        twice = ipc.filter_pairs_by_ipc(once, {"A61K"}, fams)
        assert twice == once
