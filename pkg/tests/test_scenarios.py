import pytest

from interpsched.basecase import make_base_instance
from interpsched.scenarios import (
    RandomStream,
    expected_scenario,
    round_clamp_duration,
    sample_batch,
    sample_scenario,
)


class TestSampleScenario:
    def test_zero_rates_no_emergencies(self, t1):
        scen = sample_scenario(t1, RandomStream(0, ("sample", 0)))
        assert scen.emergency_patients == ()

    def test_deterministic_override_copied(self, t1):
        scen = sample_scenario(t1, RandomStream(0, ("sample", 0)))
        assert scen.outpatient_durations == {"n1": 2, "n2": 1}

    def test_same_stream_key_identical(self):
        inst = make_base_instance()
        a = sample_scenario(inst, RandomStream(42, ("sample", 3)))
        b = sample_scenario(inst, RandomStream(42, ("sample", 3)))
        assert a == b

    def test_different_index_differs(self):
        inst = make_base_instance()
        a = sample_scenario(inst, RandomStream(42, ("sample", 0)))
        b = sample_scenario(inst, RandomStream(42, ("sample", 1)))
        assert a != b

    def test_durations_in_bounds(self):
        inst = make_base_instance()
        for idx in range(50):
            scen = sample_scenario(inst, RandomStream(7, ("sample", idx)))
            for pat in scen.emergency_patients:
                assert inst.durations.emergency_low <= pat.duration <= inst.durations.emergency_high
                assert 1 <= pat.arrival <= inst.horizon
            for dur in scen.outpatient_durations.values():
                assert 1 <= dur <= inst.horizon


class TestSampleBatch:
    def test_single_scenario_probability_one(self, t1):
        (scen,) = sample_batch(t1, 1, 0)
        assert scen.probability == 1.0

    def test_uniform_probabilities(self, t1):
        batch = sample_batch(t1, 4, 0)
        assert [s.probability for s in batch] == [0.25] * 4

    def test_seed_reproducibility(self):
        inst = make_base_instance()
        assert sample_batch(inst, 5, 11) == sample_batch(inst, 5, 11)
        a = sample_batch(inst, 5, 11)
        b = sample_batch(inst, 5, 12)
        assert a != b

    def test_batch_matches_indexed_streams(self):
        # order independence: scenario i can be regenerated in isolation
        inst = make_base_instance()
        batch = sample_batch(inst, 4, 5)
        for i in (3, 1, 0, 2):
            lone = sample_scenario(inst, RandomStream(5, ("sample", i)))
            assert lone.emergency_patients == batch[i].emergency_patients
            assert lone.outpatient_durations == batch[i].outpatient_durations

    def test_rejects_non_positive(self, t1):
        with pytest.raises(ValueError):
            sample_batch(t1, 0, 0)


class TestExpectedScenario:
    def test_t1_degenerate(self, t1, t1_scen):
        assert expected_scenario(t1) == t1_scen

    def test_base_case_spanish_count(self):
        inst = make_base_instance()
        scen = expected_scenario(inst)
        spanish = [p for p in scen.emergency_patients if p.language == "Spanish"]
        assert len(spanish) == 4  # round(0.184 * 24)

    def test_emergency_duration_midpoint(self):
        inst = make_base_instance()
        scen = expected_scenario(inst)
        assert {p.duration for p in scen.emergency_patients} == {9}  # round((6+12)/2)

    def test_even_spread(self):
        inst = make_base_instance()
        scen = expected_scenario(inst)
        spanish = sorted(p.arrival for p in scen.emergency_patients if p.language == "Spanish")
        assert spanish == [3, 9, 15, 21]  # ceil((2i-1)*24/8)

    def test_deterministic(self):
        inst = make_base_instance()
        assert expected_scenario(inst) == expected_scenario(inst)
        assert expected_scenario(inst).probability == 1.0


class TestStatistics:
    def test_poisson_empirical_means(self):
        # smaller-sample version of the acceptance check, one language
        inst = make_base_instance()
        n = 3000
        count = 0
        for idx in range(n):
            scen = sample_scenario(inst, RandomStream(99, ("stats", idx)))
            count += sum(1 for p in scen.emergency_patients if p.language == "Spanish")
        mean = count / (n * inst.horizon)
        assert mean == pytest.approx(0.184, rel=0.10)

    def test_round_clamp_transform(self):
        assert round_clamp_duration(7.2, 24) == 7
        assert round_clamp_duration(-3.0, 24) == 1
        assert round_clamp_duration(40.0, 24) == 24
        assert round_clamp_duration(0.4, 24) == 1
