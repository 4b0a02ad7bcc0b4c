import numpy as np
import pytest

from entlab.entanglement import eof_from_concurrence, pure_concurrence_oracle
from entlab.errors import UsageError
from entlab.experiment import (
    EnsembleSpec,
    TrialRecord,
    conditional_mean,
    entanglement_histogram,
    histogram_delta,
    run_ensemble,
    run_trial,
)
from entlab.gates import circuit
from entlab.qstate import DensityMatrix, PureState, densify, ket
from entlab.sampling import RandomStream, pure_state_vector

I4 = np.eye(4, dtype=complex)


class TestRunTrial:
    def test_forced_ground_state(self):
        rec = run_trial("pure", RandomStream(1, 0), state=densify(ket("00")))
        assert rec.e0 == pytest.approx(0.0, abs=1e-12)
        assert rec.ef == pytest.approx(1.0, abs=1e-9)
        assert rec.delta == pytest.approx(1.0, abs=1e-9)

    def test_forced_maximally_mixed(self):
        rec = run_trial("mixed", RandomStream(1, 0), state=DensityMatrix(I4 / 4))
        assert rec == TrialRecord(0.0, 0.0, 0.0)

    def test_forced_bell_state(self):
        bell = PureState(np.array([1, 0, 0, 1]) / np.sqrt(2))
        rec = run_trial("pure", RandomStream(1, 0), state=densify(bell))
        assert rec.e0 == pytest.approx(1.0, abs=1e-9)
        # cross-check the final EoF against the pure-state closed form
        evolved = PureState(circuit().matrix @ bell.amplitudes)
        expected = eof_from_concurrence(pure_concurrence_oracle(evolved))
        assert rec.ef == pytest.approx(expected, abs=1e-9)

    def test_sampled_trials_consistent(self):
        for i in range(50):
            rec = run_trial("pure", RandomStream(2, i))
            assert 0.0 <= rec.e0 <= 1.0
            assert 0.0 <= rec.ef <= 1.0
            assert rec.delta == pytest.approx(rec.ef - rec.e0, abs=1e-12)


class TestEnsembleSpec:
    def test_rejects_zero_trials(self):
        with pytest.raises(UsageError):
            EnsembleSpec("pure", 0, 1)

    def test_rejects_unknown_kind(self):
        with pytest.raises(UsageError):
            EnsembleSpec("thermal", 10, 1)


class TestRunEnsemble:
    def test_single_trial(self):
        res = run_ensemble(EnsembleSpec("mixed", 1, 3))
        assert len(res) == 1

    def test_deterministic(self):
        a = run_ensemble(EnsembleSpec("mixed", 2000, 4))
        b = run_ensemble(EnsembleSpec("mixed", 2000, 4))
        assert np.array_equal(a.e0, b.e0)
        assert np.array_equal(a.ef, b.ef)
        assert np.array_equal(a.delta, b.delta)

    def test_worker_count_does_not_change_results(self):
        spec = EnsembleSpec("pure", 20_000, 5)  # spans multiple chunks
        seq = run_ensemble(spec, workers=1)
        par = run_ensemble(spec, workers=2)
        assert np.array_equal(seq.e0, par.e0)
        assert np.array_equal(seq.ef, par.ef)

    def test_matches_scalar_trials(self):
        res = run_ensemble(EnsembleSpec("mixed", 64, 6))
        for t in (0, 17, 63):
            rec = run_trial("mixed", RandomStream(6, t))
            assert res.e0[t] == pytest.approx(rec.e0, abs=1e-10)
            assert res.ef[t] == pytest.approx(rec.ef, abs=1e-10)

    def test_bounds_and_purity_preservation(self):
        res = run_ensemble(EnsembleSpec("pure", 1000, 7))
        assert np.all((res.e0 >= 0) & (res.e0 <= 1))
        assert np.all((res.ef >= 0) & (res.ef <= 1))
        assert np.all((res.delta >= -1) & (res.delta <= 1))
        # pure inputs stay pure, so the closed-form oracle applies to every trial
        u = circuit().matrix
        for t in range(1000):
            v = u @ pure_state_vector(RandomStream(7, t))
            expected = eof_from_concurrence(2 * abs(v[0] * v[3] - v[1] * v[2]))
            assert res.ef[t] == pytest.approx(expected, abs=1e-9)

    def test_record_iteration(self):
        res = run_ensemble(EnsembleSpec("mixed", 5, 8))
        records = list(res)
        assert len(records) == 5
        assert records[2] == res[2]
        assert isinstance(records[0], TrialRecord)


class TestHistogramDelta:
    def test_single_zero_record(self):
        h = histogram_delta([TrialRecord(0.3, 0.3, 0.0)], 100)
        assert h.counts.sum() == 1
        assert h.counts[h.bin_index(0.0)] == 1

    def test_extremes_two_bins(self):
        recs = [TrialRecord(1.0, 0.0, -1.0), TrialRecord(0.0, 1.0, 1.0)]
        h = histogram_delta(recs, 2)
        assert list(h.counts) == [1, 1]

    def test_rejects_single_bin(self):
        with pytest.raises(UsageError):
            histogram_delta([TrialRecord(0, 0, 0)], 1)

    def test_mode_at_zero_for_sampled_ensembles(self):
        res = run_ensemble(EnsembleSpec("mixed", 20_000, 9))
        h = histogram_delta(res, 100)
        assert int(np.argmax(h.counts)) == h.bin_index(0.0)

    def test_density_normalization(self):
        res = run_ensemble(EnsembleSpec("mixed", 2000, 10))
        h = histogram_delta(res, 50)
        assert h.densities().sum() * h.bin_width == pytest.approx(1.0, abs=1e-12)


class TestEntanglementHistogram:
    def test_mixed_mode_in_first_bin(self):
        res = run_ensemble(EnsembleSpec("mixed", 20_000, 11))
        h = entanglement_histogram(res, 50)
        assert int(np.argmax(h.counts)) == 0

    def test_pure_mode_interior(self):
        res = run_ensemble(EnsembleSpec("pure", 20_000, 12))
        h = entanglement_histogram(res, 50)
        mode = int(np.argmax(h.counts))
        assert 0 < mode < 49


class TestConditionalMean:
    def test_all_mass_in_first_bin(self):
        recs = [TrialRecord(0.0, 1.0, 1.0)] * 5
        prof = conditional_mean(recs, 10, min_count=1)
        assert prof.mean_ef[0] == pytest.approx(1.0)
        assert np.all(np.isnan(prof.mean_ef[1:]))

    def test_occupancy_threshold(self):
        recs = [TrialRecord(0.0, 0.5, 0.5)] * 99
        prof = conditional_mean(recs, 10, min_count=100)
        assert not prof.occupied[0]
        assert np.isnan(prof.mean_ef[0])

    def test_rejects_single_bin(self):
        with pytest.raises(UsageError):
            conditional_mean([TrialRecord(0, 0, 0)], 1)

    def test_top_edge_lands_in_last_bin(self):
        prof = conditional_mean([TrialRecord(1.0, 0.2, -0.8)], 10, min_count=1)
        assert prof.counts[-1] == 1
