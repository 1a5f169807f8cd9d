import numpy as np
import pytest

from phonrich.metrics import (TrialRecord, compute_eer, compute_min_c_primary,
                              correlation_report, eer_from_scores, kendall_tau,
                              min_c_primary_from_scores, protocol_stats)

from oracles import (brute_force_eer, brute_force_min_c_primary, brute_force_tau,
                     random_monotone_transform)


def make_trials(tar, non):
    trials = [TrialRecord("m", f"t{i}", "target", s) for i, s in enumerate(tar)]
    trials += [TrialRecord("m", f"n{i}", "nontarget", s) for i, s in enumerate(non)]
    return trials


class TestEer:
    def test_perfect_separation(self):
        eer, _ = compute_eer(make_trials([0.9, 0.8], [0.1, 0.2]))
        assert eer == 0.0

    def test_identical_classes(self):
        eer, _ = compute_eer(make_trials([0.3, 0.5], [0.3, 0.5]))
        assert eer == pytest.approx(0.5)

    def test_hand_enumerated_third(self):
        eer, thr = compute_eer(make_trials([0.8, 0.6, 0.4], [0.7, 0.3, 0.2]))
        assert eer == pytest.approx(1 / 3)
        assert 0.4 < thr <= 0.7

    def test_missing_class_error(self):
        with pytest.raises(ValueError):
            compute_eer([TrialRecord("m", "t", "target", 0.5)])

    def test_label_swap_preserves_eer(self):
        rng = np.random.default_rng(0)
        tar = rng.standard_normal(50) + 1
        non = rng.standard_normal(70)
        eer1, _ = eer_from_scores(tar, non)
        # swapping classes maps FAR<->FRR; EER unchanged when scores are negated
        eer2, _ = eer_from_scores(-non, -tar)
        assert eer1 == pytest.approx(eer2, abs=1e-12)

    def test_monotone_invariance(self):
        rng = np.random.default_rng(1)
        tar = rng.standard_normal(40) + 0.5
        non = rng.standard_normal(60)
        eer_ref, _ = eer_from_scores(tar, non)
        for k in range(20):
            f = random_monotone_transform(rng)
            eer_t, _ = eer_from_scores(f(tar), f(non))
            assert abs(eer_t - eer_ref) < 1e-12

    def test_matches_brute_force(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            nt = int(rng.integers(1, 40))
            nn = int(rng.integers(1, 40))
            # quantized scores force ties across and within classes
            tar = np.round(rng.standard_normal(nt) + 0.5, 1)
            non = np.round(rng.standard_normal(nn), 1)
            got, _ = eer_from_scores(tar, non)
            assert got == pytest.approx(brute_force_eer(tar, non), abs=1e-10)

    def test_non_finite_score_rejected(self):
        with pytest.raises(ValueError):
            TrialRecord("m", "t", "target", float("nan"))


class TestMinCPrimary:
    def test_perfect_separation(self):
        assert compute_min_c_primary(make_trials([0.9, 0.8], [0.1, 0.2])) == 0.0

    def test_identical_classes_hit_do_nothing_bound(self):
        assert compute_min_c_primary(make_trials([0.4, 0.6], [0.4, 0.6])) == pytest.approx(1.0)

    def test_hand_case_and_perturbation(self):
        assert compute_min_c_primary(make_trials([0.8, 0.6], [0.5, 0.1])) == 0.0
        perturbed = make_trials([0.8, 0.4], [0.5, 0.1])
        got = compute_min_c_primary(perturbed)
        tar, non = np.array([0.8, 0.4]), np.array([0.5, 0.1])
        assert got == pytest.approx(brute_force_min_c_primary(tar, non), abs=1e-12)

    def test_never_exceeds_one(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            tar = rng.standard_normal(int(rng.integers(1, 30)))
            non = rng.standard_normal(int(rng.integers(1, 30))) + 1  # badly inverted
            assert min_c_primary_from_scores(tar, non) <= 1 + 1e-12

    def test_matches_brute_force(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            tar = np.round(rng.standard_normal(int(rng.integers(1, 40))) + 0.3, 1)
            non = np.round(rng.standard_normal(int(rng.integers(1, 40))), 1)
            got = min_c_primary_from_scores(tar, non)
            assert got == pytest.approx(brute_force_min_c_primary(tar, non), abs=1e-10)


class TestKendallTau:
    def test_identity_is_one(self):
        x = [3.0, 1.0, 7.0, 2.0]
        assert kendall_tau(x, x) == pytest.approx(1.0)

    def test_reversal_is_minus_one(self):
        x = [1.0, 2.0, 5.0, 9.0]
        assert kendall_tau(x, [-v for v in x]) == pytest.approx(-1.0)

    def test_hand_case(self):
        assert kendall_tau([1, 2, 3, 4], [1, 3, 2, 4]) == pytest.approx(2 / 3)

    def test_symmetry(self):
        rng = np.random.default_rng(5)
        x = rng.integers(0, 10, 30).astype(float)
        y = rng.integers(0, 10, 30).astype(float)
        assert kendall_tau(x, y) == pytest.approx(kendall_tau(y, x), abs=1e-12)

    def test_all_tied_raises(self):
        with pytest.raises(ValueError, match="tied"):
            kendall_tau([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            kendall_tau([1.0, 2.0], [1.0, 2.0, 3.0])

    def test_matches_brute_force_with_ties(self):
        rng = np.random.default_rng(6)
        for _ in range(100):
            n = int(rng.integers(2, 60))
            x = rng.integers(0, 6, n).astype(float)
            y = rng.integers(0, 6, n).astype(float)
            try:
                got = kendall_tau(x, y)
            except ValueError:
                continue
            assert got == pytest.approx(brute_force_tau(x, y), abs=1e-10)


class TestCorrelationReport:
    def test_per_class_taus_and_scatter(self):
        trials = make_trials([0.9, 0.7, 0.5], [0.3, 0.2, 0.4])
        qmfs = {t.test_id: {"cu": float(i)} for i, t in enumerate(trials)}
        taus, scatter = correlation_report(trials, qmfs)
        assert ("target", "cu") in taus and ("nontarget", "cu") in taus
        assert len(scatter) == len(trials)
        assert scatter[0][1] == "cu"

    def test_missing_qmf_error(self):
        trials = make_trials([0.9], [0.1])
        with pytest.raises(ValueError, match="missing QMF"):
            correlation_report(trials, {"t0": {"cu": 1.0}})

    def test_constant_qmf_error(self):
        trials = make_trials([0.9, 0.7], [0.3, 0.2])
        qmfs = {t.test_id: {"cu": 5.0} for t in trials}
        with pytest.raises(ValueError, match="tied"):
            correlation_report(trials, qmfs)


class TestProtocolStats:
    def test_single_utterance(self):
        assert protocol_stats([(2.0, 10)]) == (2.0, 0.0, 10.0, 0.0)

    def test_two_utterances(self):
        ns_mean, ns_std, cu_mean, cu_std = protocol_stats([(1, 10), (3, 20)])
        assert (ns_mean, ns_std, cu_mean, cu_std) == (2.0, 1.0, 15.0, 5.0)

    def test_empty_error(self):
        with pytest.raises(ValueError):
            protocol_stats([])
