"""The two-stage pipeline: training wiring, prediction, protocol, sweep."""

import numpy as np
import pytest

from twostage import (
    HorizonSpec,
    InsufficientDataError,
    MarModel,
    ModelKind,
    NormStats,
    PipelineSettings,
    PreparedSeries,
    SampleSet,
    Stage1DisabledError,
    StagePair,
    TimeSeries,
    augment_baseline,
    evaluate_forecast,
    evaluation_offset,
    evaluation_windows,
    fit_two_stage,
    normalize,
    predict,
    prepare_series,
    run_two_stage_series,
    seed_for,
    split_half,
    sweep_future_horizon,
    train_stage1,
    train_stage2,
    training_windows,
)
from twostage.models import MarParams
from twostage.seeding import STAGE_TWO
from twostage.two_stage import run_tasks, stage1_eval_mse

FAST = dict(widths=(6,), stage1_epochs=2, stage2_epochs=2, dropout_rate=0.0)


def seasonal_series(series_id="S1", n=120, period=8, seed=0, noise=0.05):
    rng = np.random.default_rng(seed)
    t = np.arange(n)
    values = np.sin(2 * np.pi * t / period) + 3.0 + noise * rng.standard_normal(n)
    return TimeSeries(series_id, values, period=period)


def mar_from(weights, bias):
    return MarModel(MarParams(weights=weights, bias=bias))


def prep_and_windows(horizon=2, future=2, **settings_over):
    settings = PipelineSettings(history=4, **{**FAST, **settings_over})
    prep = prepare_series(seasonal_series(), settings)
    train_set = training_windows(prep, horizon, future)
    return settings, prep, train_set


class TestPipelineSettings:
    def test_shipped_training_defaults(self):
        s = PipelineSettings()
        assert s.stage1_epochs == 40
        assert s.stage2_epochs == 20
        assert s.learning_rate == 0.01
        assert s.batch_size == 64
        assert s.widths == (200, 100, 50)
        assert s.dropout_rate == 0.5
        assert s.use_layer_norm is True
        assert s.master_seed == 0

    def test_stage_configs(self):
        s = PipelineSettings(stage1_epochs=7, stage2_epochs=3, learning_rate=0.5, batch_size=16)
        c1 = s.stage1_config(11)
        c2 = s.stage2_config(12)
        assert (c1.epochs, c1.seed, c1.learning_rate, c1.batch_size) == (7, 11, 0.5, 16)
        assert (c2.epochs, c2.seed, c2.learning_rate, c2.batch_size) == (3, 12, 0.5, 16)


class TestStagePairValidation:
    SPEC = HorizonSpec(history=3, horizon=2, future=2)

    def stage1(self):
        return mar_from(np.zeros((2, 3)), np.zeros(2))

    def stage2(self):
        return mar_from(np.zeros((2, 5)), np.zeros(2))

    def test_valid_pair(self):
        StagePair(stage1=self.stage1(), stage2=self.stage2(), spec=self.SPEC, stage1_eval_mse=0.0)

    def test_stage1_required_iff_future(self):
        with pytest.raises(ValueError, match="stage1"):
            StagePair(stage1=None, stage2=self.stage2(), spec=self.SPEC, stage1_eval_mse=None)
        flat = HorizonSpec(history=3, horizon=2)
        with pytest.raises(ValueError, match="stage1"):
            StagePair(
                stage1=self.stage1(),
                stage2=mar_from(np.zeros((2, 3)), np.zeros(2)),
                spec=flat,
                stage1_eval_mse=0.0,
            )

    def test_mse_must_accompany_stage1(self):
        with pytest.raises(ValueError, match="mse"):
            StagePair(stage1=self.stage1(), stage2=self.stage2(), spec=self.SPEC, stage1_eval_mse=None)

    def test_dimension_checks(self):
        bad_s1 = mar_from(np.zeros((2, 4)), np.zeros(2))  # wrong history length
        with pytest.raises(ValueError, match="stage1 input"):
            StagePair(stage1=bad_s1, stage2=self.stage2(), spec=self.SPEC, stage1_eval_mse=0.0)
        bad_s1_out = mar_from(np.zeros((3, 3)), np.zeros(3))
        with pytest.raises(ValueError, match="stage1 output"):
            StagePair(stage1=bad_s1_out, stage2=self.stage2(), spec=self.SPEC, stage1_eval_mse=0.0)
        bad_s2 = mar_from(np.zeros((2, 3)), np.zeros(2))  # must accept history + future
        with pytest.raises(ValueError, match="stage2 input"):
            StagePair(stage1=self.stage1(), stage2=bad_s2, spec=self.SPEC, stage1_eval_mse=0.0)
        bad_s2_out = mar_from(np.zeros((1, 5)), np.zeros(1))
        with pytest.raises(ValueError, match="stage2 output"):
            StagePair(stage1=self.stage1(), stage2=bad_s2_out, spec=self.SPEC, stage1_eval_mse=0.0)

    def test_negative_mse_rejected(self):
        with pytest.raises(ValueError, match="mse"):
            StagePair(stage1=self.stage1(), stage2=self.stage2(), spec=self.SPEC, stage1_eval_mse=-1.0)


class TestTrainStages:
    def test_stage1_disabled_without_future(self):
        settings, _, train_set = prep_and_windows(future=0)
        with pytest.raises(Stage1DisabledError):
            train_stage1(train_set, ModelKind.MAR, settings.stage1_config(0))

    def test_stage1_shapes_and_in_sample_mse(self):
        settings, _, train_set = prep_and_windows(horizon=2, future=3)
        model, mse = train_stage1(
            train_set, ModelKind.MAR, settings.stage1_config(0), widths=settings.widths
        )
        assert (model.input_dim, model.output_dim) == (4, 3)
        predictions, _ = model.forward(train_set.history)
        expected = float(np.mean((predictions - train_set.future) ** 2))
        assert mse == pytest.approx(expected, rel=1e-12)

    def test_stage1_prefers_held_out_windows(self):
        settings, prep, train_set = prep_and_windows(horizon=2, future=3)
        eval_set = evaluation_windows(prep, 2, future=3)
        model, mse = train_stage1(
            train_set, ModelKind.MAR, settings.stage1_config(0), eval_set=eval_set
        )
        predictions, _ = model.forward(eval_set.history)
        expected = float(np.mean((predictions - eval_set.future) ** 2))
        assert mse == pytest.approx(expected, rel=1e-12)

    def test_stage2_consumes_history_plus_future(self):
        settings, _, train_set = prep_and_windows(horizon=2, future=3)
        model = train_stage2(
            train_set, ModelKind.MAR, settings.stage2_config(0), widths=settings.widths
        )
        assert (model.input_dim, model.output_dim) == (7, 2)

    def test_stage2_without_future_is_direct(self):
        settings, _, train_set = prep_and_windows(horizon=2, future=0)
        model = train_stage2(
            train_set, ModelKind.MAR, settings.stage2_config(0), widths=settings.widths
        )
        assert (model.input_dim, model.output_dim) == (4, 2)

    def test_untrainable_kind_rejected(self):
        settings, _, train_set = prep_and_windows()
        with pytest.raises(ValueError, match="trainable"):
            train_stage1(train_set, ModelKind.PREVIOUS_PERIOD, settings.stage1_config(0))
        with pytest.raises(ValueError, match="trainable"):
            train_stage2(train_set, ModelKind.PREVIOUS_PERIOD, settings.stage2_config(0))

    def test_empty_sample_set_rejected(self):
        settings = PipelineSettings(**FAST)
        empty = SampleSet(samples=(), spec=HorizonSpec(history=4, horizon=2, future=1), source_id="S1")
        with pytest.raises(InsufficientDataError):
            train_stage1(empty, ModelKind.MAR, settings.stage1_config(0))
        with pytest.raises(InsufficientDataError):
            train_stage2(empty, ModelKind.MAR, settings.stage2_config(0))


class TestPredictWiring:
    def hand_pair(self):
        # stage1 ignores its input and always predicts [10, 20]
        stage1 = mar_from(np.zeros((2, 3)), np.array([10.0, 20.0]))
        # stage2 output = [future slot 0, history slot 0]
        weights = np.zeros((2, 5))
        weights[0, 3] = 1.0
        weights[1, 0] = 1.0
        stage2 = mar_from(weights, np.zeros(2))
        spec = HorizonSpec(history=3, horizon=2, future=2)
        return StagePair(stage1=stage1, stage2=stage2, spec=spec, stage1_eval_mse=0.0)

    def test_future_estimate_lands_after_history(self):
        pair = self.hand_pair()
        out = predict(pair, np.array([7.0, 8.0, 9.0]))
        assert np.array_equal(out, [10.0, 7.0])

    def test_batch_and_vector_agree(self):
        pair = self.hand_pair()
        batch = np.array([[7.0, 8.0, 9.0], [1.0, 2.0, 3.0]])
        out = predict(pair, batch)
        assert out.shape == (2, 2)
        assert np.array_equal(out[0], predict(pair, batch[0]))
        assert np.array_equal(out[1], [10.0, 1.0])

    def test_composition_identity_on_trained_pair(self):
        settings, prep, train_set = prep_and_windows(horizon=2, future=2)
        pair = fit_two_stage(train_set, settings)
        x = evaluation_windows(prep, 2).history
        future_estimate, _ = pair.stage1.forward(x)
        direct, _ = pair.stage2.forward(np.hstack([x, future_estimate]))
        assert np.array_equal(predict(pair, x), direct)

    def test_degenerate_pair_is_stage2_alone(self):
        settings, prep, train_set = prep_and_windows(horizon=2, future=0)
        pair = fit_two_stage(train_set, settings)
        assert pair.stage1 is None
        x = evaluation_windows(prep, 2).history
        direct, _ = pair.stage2.forward(x)
        assert np.array_equal(predict(pair, x), direct)

    def test_wrong_history_width(self):
        pair = self.hand_pair()
        with pytest.raises(ValueError):
            predict(pair, np.ones(4))


class TestFitTwoStage:
    def test_zero_future_matches_plain_baseline_bitwise(self):
        settings, _, train_set = prep_and_windows(horizon=2, future=0)
        pair = fit_two_stage(train_set, settings)
        seed = seed_for(settings.master_seed, "S1", STAGE_TWO, 0, "mlp_mar")
        baseline = train_stage2(
            train_set,
            ModelKind.HYBRID_MLP_MAR,
            settings.stage2_config(seed),
            widths=settings.widths,
            dropout_rate=settings.dropout_rate,
            use_layer_norm=settings.use_layer_norm,
        )
        assert pair.stage1 is None and pair.stage1_eval_mse is None
        for ours, theirs in zip(pair.stage2.parameters(), baseline.parameters()):
            assert np.array_equal(ours, theirs)

    def test_stage2_untouched_by_stage1_kind(self):
        settings, _, train_set = prep_and_windows(horizon=2, future=2)
        with_mar = fit_two_stage(train_set, settings, stage1_kind=ModelKind.MAR)
        with_mlp = fit_two_stage(train_set, settings, stage1_kind=ModelKind.MLP)
        for a, b in zip(with_mar.stage2.parameters(), with_mlp.stage2.parameters()):
            assert np.array_equal(a, b)
        assert not isinstance(with_mar.stage1, type(with_mlp.stage1))

    def test_explicit_seeds_override_derived_ones(self):
        settings, _, train_set = prep_and_windows(horizon=2, future=2)
        a = fit_two_stage(train_set, settings, stage1_seed=1, stage2_seed=2)
        b = fit_two_stage(train_set, settings, stage1_seed=1, stage2_seed=2)
        c = fit_two_stage(train_set, settings, stage1_seed=1, stage2_seed=3)
        for x, y in zip(a.stage2.parameters(), b.stage2.parameters()):
            assert np.array_equal(x, y)
        assert any(
            not np.array_equal(x, y)
            for x, y in zip(a.stage2.parameters(), c.stage2.parameters())
        )

    def test_master_seed_changes_training(self):
        settings, _, train_set = prep_and_windows(horizon=2, future=2)
        other = PipelineSettings(history=4, master_seed=1, **FAST)
        a = fit_two_stage(train_set, settings)
        b = fit_two_stage(train_set, other)
        assert any(
            not np.array_equal(x, y)
            for x, y in zip(a.stage2.parameters(), b.stage2.parameters())
        )

    def test_augment_baseline_requires_future(self):
        settings, _, train_set = prep_and_windows(horizon=2, future=0)
        with pytest.raises(Stage1DisabledError):
            augment_baseline(ModelKind.MAR, ModelKind.MAR, train_set, settings)

    def test_augment_baseline_widens_the_baseline(self):
        settings, _, train_set = prep_and_windows(horizon=2, future=2)
        pair = fit_two_stage(
            train_set, settings, stage1_kind=ModelKind.MLP, stage2_kind=ModelKind.MAR
        )
        augmented = augment_baseline(ModelKind.MAR, ModelKind.MLP, train_set, settings)
        assert isinstance(augmented.stage2, MarModel)
        assert augmented.stage2.input_dim == 6
        for a, b in zip(augmented.stage2.parameters(), pair.stage2.parameters()):
            assert np.array_equal(a, b)


class TestPrepareSeries:
    def test_normalization_uses_training_half_only(self):
        series = seasonal_series(n=100)
        prep = prepare_series(series, PipelineSettings(**FAST))
        train_half, _ = split_half(series)
        _, expected_stats = normalize(train_half)
        assert prep.stats == expected_stats
        assert np.array_equal(prep.values, expected_stats.apply(series.values))
        assert prep.train_length == 50
        first_half = prep.values[:50]
        assert abs(first_half.mean()) < 1e-9
        assert abs(first_half.std() - 1.0) < 1e-9

    def test_period_precedence_explicit_beats_series(self):
        series = seasonal_series(period=8)
        prep = prepare_series(series, PipelineSettings(period=5, **FAST))
        assert prep.period == 5

    def test_period_from_series_metadata(self):
        prep = prepare_series(seasonal_series(period=8), PipelineSettings(**FAST))
        assert prep.period == 8

    def test_period_auto_detects_cycle(self):
        values = np.sin(2 * np.pi * np.arange(400) / 24.0) + 5.0
        series = TimeSeries("S1", values)
        prep = prepare_series(series, PipelineSettings(period_auto=True, **FAST))
        assert prep.period == 24

    def test_period_auto_falls_back_on_short_series(self):
        series = TimeSeries("S1", np.random.default_rng(0).standard_normal(8) + 10.0)
        prep = prepare_series(series, PipelineSettings(period_auto=True, **FAST))
        assert prep.period == 24  # shipped default

    def test_default_period_when_nothing_known(self):
        series = TimeSeries("S1", np.random.default_rng(1).standard_normal(64))
        prep = prepare_series(series, PipelineSettings(**FAST))
        assert prep.period == 24

    def test_history_defaults_to_two_periods(self):
        prep = prepare_series(seasonal_series(period=8), PipelineSettings(**FAST))
        assert prep.history == 16
        override = prepare_series(seasonal_series(period=8), PipelineSettings(history=5, **FAST))
        assert override.history == 5


class TestWindows:
    def test_training_windows_stay_in_training_half(self):
        _, prep, train_set = prep_and_windows(horizon=2, future=1)
        total = 4 + 2 + 1
        assert len(train_set) == prep.train_length - total + 1
        assert train_set.anchors[0] == 3
        assert train_set.anchors[-1] == prep.train_length - 2 - 1 - 1
        stacked = np.hstack([train_set.history, train_set.target, train_set.future])
        for i, anchor in enumerate(train_set.anchors):
            window = prep.values[anchor - 3 : anchor + 4]
            assert np.array_equal(stacked[i], window)

    def test_evaluation_targets_tile_the_second_half(self):
        settings, prep, _ = prep_and_windows(horizon=3)
        eval_set = evaluation_windows(prep, 3)
        offset = evaluation_offset(prep)
        times = (eval_set.anchors[:, None] + offset + 1 + np.arange(3)[None, :]).ravel()
        assert times[0] == prep.train_length  # first point after the split
        assert np.all(np.diff(times) == 1)  # stride == horizon leaves no gaps
        assert np.array_equal(prep.values[times], eval_set.target.ravel())
        assert times[-1] <= len(prep.values) - 1

    def test_evaluation_windows_ignore_future_for_targets(self):
        _, prep, _ = prep_and_windows()
        base = evaluation_windows(prep, 2, future=0)
        with_future = evaluation_windows(prep, 2, future=2)
        n = len(with_future)
        assert n < len(base)  # future needs room at the end
        assert np.array_equal(with_future.target, base.target[:n])
        assert np.array_equal(with_future.anchors, base.anchors[:n])

    def test_history_may_cross_the_split(self):
        _, prep, _ = prep_and_windows()
        eval_set = evaluation_windows(prep, 2)
        first = eval_set.samples[0]
        expected = prep.values[prep.train_length - 4 : prep.train_length]
        assert np.array_equal(first.history, expected)

    def test_training_half_shorter_than_history(self):
        prep = PreparedSeries(
            series_id="tiny",
            stats=NormStats(mean=0.0, std=1.0),
            values=np.arange(20.0),
            train_length=5,
            period=4,
            history=8,
        )
        with pytest.raises(InsufficientDataError, match="history"):
            evaluation_windows(prep, 2)


class TestEvaluateForecast:
    def make_prep(self):
        # values = 0..39 so target values equal their own time indices
        return PreparedSeries(
            series_id="ramp",
            stats=NormStats(mean=0.0, std=1.0),
            values=np.arange(40.0),
            train_length=20,
            period=4,
            history=6,
        )

    def test_reported_times_index_the_series(self):
        prep = self.make_prep()
        eval_set = evaluation_windows(prep, 2)
        report = evaluate_forecast(
            lambda h: h[:, -2:],  # arbitrary prediction
            eval_set,
            evaluation_offset(prep),
            "ramp",
            PipelineSettings(**FAST),
        )
        assert np.array_equal(report.points.actual, report.points.times.astype(float))
        assert report.points.times[0] == 20
        assert report.n_points == len(eval_set) * 2

    def test_perfect_forecast_scores_zero(self):
        prep = self.make_prep()
        eval_set = evaluation_windows(prep, 2)
        report = evaluate_forecast(
            lambda h: eval_set.target,
            eval_set,
            evaluation_offset(prep),
            "ramp",
            PipelineSettings(**FAST),
        )
        assert report.mae == report.rmse == 0.0

    def test_prediction_shape_mismatch(self):
        prep = self.make_prep()
        eval_set = evaluation_windows(prep, 2)
        with pytest.raises(ValueError, match="shape"):
            evaluate_forecast(
                lambda h: np.zeros((1, 2)),
                eval_set,
                evaluation_offset(prep),
                "ramp",
                PipelineSettings(**FAST),
            )

    def test_empty_eval_set(self):
        empty = SampleSet(samples=(), spec=HorizonSpec(history=6, horizon=2), source_id="ramp")
        with pytest.raises(InsufficientDataError):
            evaluate_forecast(lambda h: h, empty, 0, "ramp", PipelineSettings(**FAST))

    def test_s1_values_pass_through(self):
        prep = self.make_prep()
        eval_set = evaluation_windows(prep, 2)
        report = evaluate_forecast(
            lambda h: eval_set.target,
            eval_set,
            evaluation_offset(prep),
            "ramp",
            PipelineSettings(**FAST),
            s1_mse=0.5,
            s1_count=12,
        )
        assert report.s1_mse == 0.5
        assert report.s1_count == 12


class TestStage1EvalMse:
    def test_constant_stage1_hand_value(self):
        spec = HorizonSpec(history=3, horizon=1, future=2)
        stage1 = mar_from(np.zeros((2, 3)), np.array([1.0, 1.0]))
        stage2 = mar_from(np.zeros((1, 5)), np.zeros(1))
        pair = StagePair(stage1=stage1, stage2=stage2, spec=spec, stage1_eval_mse=0.0)
        from twostage.data import WindowSample

        samples = (
            WindowSample(history=np.zeros(3), target=np.zeros(1), future=np.array([2.0, 3.0]), anchor=2),
            WindowSample(history=np.zeros(3), target=np.zeros(1), future=np.array([1.0, 2.0]), anchor=5),
        )
        eval_set = SampleSet(samples=samples, spec=spec, source_id="S1")
        mse, count = stage1_eval_mse(pair, eval_set)
        # squared gaps to the constant prediction 1: (1,4) and (0,1) -> mean 1.5
        assert mse == pytest.approx(1.5)
        assert count == 4

    def test_none_paths(self):
        spec = HorizonSpec(history=3, horizon=1)
        pair = StagePair(
            stage1=None, stage2=mar_from(np.zeros((1, 3)), np.zeros(1)), spec=spec, stage1_eval_mse=None
        )
        assert stage1_eval_mse(pair, None) == (None, None)
        empty = SampleSet(samples=(), spec=HorizonSpec(history=3, horizon=1, future=2), source_id="S1")
        with_stage1 = StagePair(
            stage1=mar_from(np.zeros((2, 3)), np.zeros(2)),
            stage2=mar_from(np.zeros((1, 5)), np.zeros(1)),
            spec=HorizonSpec(history=3, horizon=1, future=2),
            stage1_eval_mse=0.0,
        )
        assert stage1_eval_mse(with_stage1, empty) == (None, None)
        assert stage1_eval_mse(with_stage1, None) == (None, None)


class TestRunSeries:
    def test_end_to_end_report(self):
        settings = PipelineSettings(history=4, **FAST)
        report, pair, prep = run_two_stage_series(seasonal_series(), 2, 2, settings)
        assert report.series_id == "S1"
        assert pair.spec == HorizonSpec(history=4, horizon=2, future=2)
        assert prep.history == 4
        eval_set = evaluation_windows(prep, 2)
        assert report.n_points == len(eval_set) * 2
        assert report.s1_mse is not None and report.s1_count is not None

    def test_future_zero_row_has_no_s1(self):
        settings = PipelineSettings(history=4, **FAST)
        report, pair, _ = run_two_stage_series(seasonal_series(), 2, 0, settings)
        assert pair.stage1 is None
        assert report.s1_mse is None


class TestSweep:
    def series_pack(self):
        return [seasonal_series("S1", seed=1), seasonal_series("S2", seed=2)]

    def test_rows_cover_requested_futures(self):
        settings = PipelineSettings(history=4, **FAST)
        rows = sweep_future_horizon(self.series_pack(), 2, [0, 2, 4], settings)
        assert [row.future for row in rows] == [0, 2, 4]
        assert rows[0].macro.s1_mse is None
        assert rows[1].macro.s1_mse is not None
        assert rows[2].macro.s1_mse is not None
        assert all(len(row.results) == 2 for row in rows)
        assert all(row.seconds > 0 for row in rows)

    def test_rows_share_evaluation_targets(self):
        settings = PipelineSettings(history=4, **FAST)
        rows = sweep_future_horizon(self.series_pack(), 2, [0, 4], settings)
        a, b = rows
        assert np.array_equal(a.pooled.points.times, b.pooled.points.times)
        assert np.array_equal(a.pooled.points.actual, b.pooled.points.actual)

    def test_short_series_is_skipped_with_reason(self):
        short = TimeSeries("tiny", np.random.default_rng(3).standard_normal(10))
        settings = PipelineSettings(history=4, **FAST)
        rows = sweep_future_horizon([*self.series_pack(), short], 2, [2], settings)
        (row,) = rows
        assert [result.series_id for result in row.results] == ["S1", "S2"]
        assert len(row.skipped) == 1
        assert row.skipped[0][0] == "tiny"
        assert row.skipped[0][1]  # a nonempty reason

    def test_all_series_skipped_raises(self):
        short = TimeSeries("tiny", np.random.default_rng(3).standard_normal(10))
        settings = PipelineSettings(history=4, **FAST)
        with pytest.raises(InsufficientDataError, match="future length 2"):
            sweep_future_horizon([short], 2, [2], settings)

    def test_empty_inputs_rejected(self):
        settings = PipelineSettings(history=4, **FAST)
        with pytest.raises(ValueError):
            sweep_future_horizon([], 2, [2], settings)
        with pytest.raises(ValueError):
            sweep_future_horizon(self.series_pack(), 2, [], settings)

    def test_deterministic_across_runs(self):
        settings = PipelineSettings(history=4, **FAST)
        a = sweep_future_horizon(self.series_pack(), 2, [2], settings)
        b = sweep_future_horizon(self.series_pack(), 2, [2], settings)
        assert a[0].macro.mae == b[0].macro.mae
        assert a[0].pooled.rmse == b[0].pooled.rmse

    def test_worker_count_does_not_change_results(self):
        sequential = PipelineSettings(history=4, workers=1, **FAST)
        parallel = PipelineSettings(history=4, workers=2, **FAST)
        a = sweep_future_horizon(self.series_pack(), 2, [2], sequential)
        b = sweep_future_horizon(self.series_pack(), 2, [2], parallel)
        assert a[0].macro.mae == b[0].macro.mae
        assert [r.series_id for r in a[0].results] == [r.series_id for r in b[0].results]


def test_run_tasks_preserves_order():
    assert run_tasks(_double, [1, 2, 3], workers=1) == [2, 4, 6]
    assert run_tasks(_double, [1, 2, 3], workers=2) == [2, 4, 6]


def _double(x):
    return 2 * x
