"""Harness tests: campaign execution, normalization pool, speedup, stats glue."""

import pytest

from admmo import (
    BenchCase,
    CaseResult,
    Configuration,
    OptimizerSpec,
    TunerParams,
    TuningRun,
    campaign_summary,
    mean_best_curve,
    normalized_target_performance,
    pairwise_comparisons,
    run_admmo,
    run_campaign,
    speedup,
    synthetic_landscape,
)


def fake_run(best_curve, run_id="r", optimizer="x", budget=None) -> TuningRun:
    curve = tuple(float(v) for v in best_curve)
    return TuningRun(
        run_id=run_id,
        optimizer=optimizer,
        seed=0,
        budget=budget or len(curve),
        best_config=Configuration((0,)),
        best_f_t=curve[-1],
        best_f_a=0.0,
        measurements_used=len(curve),
        trajectory=(),
        best_by_measurement=curve,
    )


def case_with(final_bests: dict[str, dict[int, list[float]]]) -> CaseResult:
    budgets = sorted({b for per in final_bests.values() for b in per})
    repeats = len(next(iter(next(iter(final_bests.values())).values())))
    case = CaseResult("case", tuple(budgets), repeats)
    for label, per_budget in final_bests.items():
        case.runs[label] = {}
        for budget, values in per_budget.items():
            case.runs[label][budget] = [
                fake_run([v] * budget, run_id=f"{label}-{budget}-{i}", optimizer=label)
                for i, v in enumerate(values)
            ]
    return case


class TestCampaign:
    def make_cases(self):
        oracle_a = synthetic_landscape(n_options=8, domain_sizes=2, k=2, seed=61)
        return [BenchCase("land-a", oracle_a.space, oracle_a)]

    def test_cardinality(self):
        cases = self.make_cases()
        optimizers = [OptimizerSpec("admmo"), OptimizerSpec("rs")]
        results = run_campaign(cases, optimizers, budgets=[30], repeats=3, base_seed=100)
        assert len(results) == 1
        runs = results[0].runs
        total = sum(len(v) for per in runs.values() for v in per.values())
        assert total == 6
        assert all(run.trajectory or run.optimizer == "rs" for per in runs.values()
                   for v in per.values() for run in v)

    def test_rerun_reproduces_all_numbers(self):
        cases = self.make_cases()
        optimizers = [OptimizerSpec("admmo"), OptimizerSpec("ga")]
        a = run_campaign(cases, optimizers, budgets=[25], repeats=2, base_seed=7)
        b = run_campaign(cases, optimizers, budgets=[25], repeats=2, base_seed=7)
        assert campaign_summary(a) == campaign_summary(b)

    def test_parallel_jobs_match_sequential(self):
        cases = self.make_cases()
        optimizers = [OptimizerSpec("rs"), OptimizerSpec("ga")]
        seq = run_campaign(cases, optimizers, budgets=[20], repeats=2, base_seed=3, jobs=1)
        par = run_campaign(cases, optimizers, budgets=[20], repeats=2, base_seed=3, jobs=2)
        assert campaign_summary(seq) == campaign_summary(par)

    def test_failing_case_reports_error_and_continues(self):
        class BrokenOracle:
            space = self.make_cases()[0].space

            def sample(self, config):
                raise RuntimeError("dead system under test")

        good = self.make_cases()[0]
        cases = [BenchCase("broken", good.space, BrokenOracle()), good]
        results = run_campaign(cases, [OptimizerSpec("rs")], [15], 1, base_seed=0)
        assert results[0].error is not None
        assert "dead system" in results[0].error
        assert results[1].error is None

    def test_smaller_budget_runs_are_not_prefixes_of_larger_ones(self):
        # the adaptation slope depends on the total budget, so a truncated
        # large-budget run can diverge from an independent small-budget run
        oracle = synthetic_landscape(n_options=12, domain_sizes=2, k=4, seed=51)
        big = run_admmo(oracle.space, oracle, TunerParams(budget=200), seed=0)
        small = run_admmo(oracle.space, oracle, TunerParams(budget=100), seed=0)
        assert big.best_by_measurement[:100] != small.best_by_measurement[:100]


class TestNormalizedPerformance:
    def test_min_max_over_the_pool(self):
        case = case_with({"a": {4: [10.0]}, "b": {4: [20.0]}, "c": {4: [30.0]}})
        table = normalized_target_performance(case)
        assert table["a"][4] == 0.0
        assert table["b"][4] == 0.5
        assert table["c"][4] == 1.0

    def test_pool_winner_scores_zero(self):
        case = case_with(
            {"best": {4: [1.0, 1.0, 1.0]}, "other": {4: [2.0, 3.0, 2.5]}}
        )
        assert normalized_target_performance(case)["best"][4] == 0.0

    def test_pool_spans_budgets(self):
        case = case_with({"a": {2: [10.0], 4: [0.0]}, "b": {2: [5.0], 4: [5.0]}})
        table = normalized_target_performance(case)
        assert table["a"][2] == 1.0 and table["a"][4] == 0.0
        assert table["b"][2] == 0.5 and table["b"][4] == 0.5

    def test_degenerate_pool_warns_and_zeroes(self):
        case = case_with({"a": {4: [1.0, 1.0]}, "b": {4: [1.0, 1.0]}})
        with pytest.warns(UserWarning):
            table = normalized_target_performance(case)
        assert table["a"][4] == 0.0 and table["b"][4] == 0.0

    def test_affine_invariance(self):
        raw = {"a": {4: [3.0, 5.0]}, "b": {4: [4.0, 6.0]}}
        scaled = {
            label: {b: [2.0 * v - 7.0 for v in vals] for b, vals in per.items()}
            for label, per in raw.items()
        }
        assert normalized_target_performance(case_with(raw)) == normalized_target_performance(
            case_with(scaled)
        )


class TestSpeedup:
    def test_four_to_one(self):
        # counterpart reaches its final value at 400, the reference at 100
        counterpart = [fake_run([5.0] * 399 + [1.0], budget=400)]
        reference = [fake_run([2.0] * 99 + [1.0] * 301, budget=400)]
        assert speedup(counterpart, reference, 400) == pytest.approx(4.0)

    def test_identical_curves_give_one(self):
        runs_a = [fake_run([3.0, 2.0, 1.0])]
        runs_b = [fake_run([3.0, 2.0, 1.0])]
        assert speedup(runs_a, runs_b, 3) == 1.0

    def test_not_achieved_is_none(self):
        counterpart = [fake_run([2.0, 1.0, 0.5])]
        reference = [fake_run([3.0, 2.9, 2.8])]
        assert speedup(counterpart, reference, 3) is None

    def test_short_runs_carry_forward(self):
        counterpart = [fake_run([2.0, 1.0])]
        reference = [fake_run([1.0])]
        assert speedup(counterpart, reference, 4) == pytest.approx(2.0)

    def test_affine_invariance(self):
        counterpart = [fake_run([9.0, 4.0, 4.0, 2.0])]
        reference = [fake_run([8.0, 3.0, 2.0, 2.0])]
        base = speedup(counterpart, reference, 4)
        mapped_c = [fake_run([2.0 * v + 5.0 for v in (9.0, 4.0, 4.0, 2.0)])]
        mapped_r = [fake_run([2.0 * v + 5.0 for v in (8.0, 3.0, 2.0, 2.0)])]
        assert speedup(mapped_c, mapped_r, 4) == base

    def test_mean_curve_averages_runs(self):
        runs = [fake_run([4.0, 2.0]), fake_run([2.0, 2.0])]
        assert mean_best_curve(runs, 2) == [3.0, 2.0]


class TestSummary:
    def test_every_pair_and_budget_compared(self):
        case = case_with(
            {
                "admmo": {2: [1.0, 1.1], 4: [0.5, 0.6]},
                "rs": {2: [2.0, 2.1], 4: [1.5, 1.6]},
                "ga": {2: [3.0, 3.1], 4: [2.5, 2.6]},
            }
        )
        comparisons = pairwise_comparisons(case)
        assert len(comparisons) == 3 * 2  # 3 unordered pairs x 2 budgets
        summary = campaign_summary([case])
        entry = summary["cases"]["case"]
        assert len(entry["comparisons"]) == 6
        assert all("effect" in c for c in entry["comparisons"])
        assert set(entry["speedup"]) == {"rs", "ga"}

    def test_failed_case_carries_error(self):
        failed = CaseResult("broken", (10,), 1, error="boom")
        summary = campaign_summary([failed])
        assert summary["cases"]["broken"] == {"error": "boom"}
