import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from vessel_surrogate.core.errors import DomainError
from vessel_surrogate.models.metrics import BenchmarkRow, MetricsReport
from vessel_surrogate.services import metrics
from vessel_surrogate.views.report_view import CSV_HEADER, BenchmarkTable

MPA = 1e6


def test_hand_example():
    truth = np.array([100.0, 200.0, 400.0]) * MPA
    pred = np.array([105.0, 240.0, 900.0]) * MPA
    np.testing.assert_allclose(metrics.residuals(truth, pred), [-0.05, -0.2, -1.25], rtol=1e-12)
    result = metrics.report(truth, pred)
    assert result.n == 3
    assert result.accuracy == pytest.approx(100.0 / 3)
    assert result.mean_abs_residual == pytest.approx(0.5)
    assert result.outliers == 1
    assert result.deviation == pytest.approx(np.std([-5.0, -40.0, -500.0]), rel=1e-12)
    assert result.signed_mean_residual == pytest.approx(-0.5)


def test_symmetric_errors():
    result = metrics.report(np.array([100.0, 100.0]) * MPA, np.array([85.0, 115.0]) * MPA)
    assert result.accuracy == 0.0
    assert result.mean_abs_residual == pytest.approx(0.15)
    assert result.outliers == 0
    assert result.deviation == pytest.approx(15.0)
    assert result.mae_mpa == pytest.approx(15.0)
    assert result.rmse_mpa == pytest.approx(15.0)


def test_perfect_prediction():
    truth = np.linspace(1e7, 5e8, 11)
    result = metrics.report(truth, truth)
    assert (result.accuracy, result.mean_abs_residual, result.outliers, result.deviation) == (100.0, 0.0, 0, 0.0)


def test_matches_a_direct_computation():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        n = int(rng.integers(1, 60))
        truth = rng.uniform(1e6, 5e8, n)
        pred = truth * (1.0 + rng.normal(0.0, 0.3, n))
        delta = [(t - p) / t for t, p in zip(truth, pred)]
        errors = [(t - p) / MPA for t, p in zip(truth, pred)]
        mean_error = math.fsum(errors) / n
        result = metrics.report(truth, pred)
        assert result.accuracy == 100.0 * sum(abs(d) < 0.10 for d in delta) / n
        assert result.mean_abs_residual == math.fsum(abs(d) for d in delta) / n
        assert result.outliers == sum(abs(d) > 0.50 for d in delta)
        assert result.deviation == pytest.approx(
            math.sqrt(math.fsum((e - mean_error) * (e - mean_error) for e in errors) / n), rel=1e-14
        )


@given(st.integers(min_value=-8, max_value=8))
def test_power_of_two_scaling_keeps_relative_metrics(exponent):
    rng = np.random.default_rng(1)
    truth = rng.uniform(1e6, 5e8, 50)
    pred = truth * (1.0 + rng.normal(0.0, 0.2, 50))
    factor = 2.0**exponent
    base = metrics.report(truth, pred)
    scaled = metrics.report(truth * factor, pred * factor)
    assert scaled.accuracy == base.accuracy
    assert scaled.mean_abs_residual == base.mean_abs_residual
    assert scaled.outliers == base.outliers
    assert scaled.deviation == pytest.approx(base.deviation * factor, rel=1e-14)


def test_bands_partition_the_samples():
    rng = np.random.default_rng(2)
    truth = rng.uniform(1e6, 5e8, 500)
    pred = truth * (1.0 + rng.normal(0.0, 0.4, 500))
    result = metrics.report(truth, pred)
    magnitude = np.abs(metrics.residuals(truth, pred))
    middle = int(np.count_nonzero((magnitude >= 0.10) & (magnitude <= 0.50)))
    accurate = round(result.accuracy * result.n / 100.0)
    assert accurate + middle + result.outliers == result.n


def test_zero_truth_is_rejected():
    with pytest.raises(DomainError, match="índice 1"):
        metrics.report([1e8, 0.0, 2e8], [1e8, 1e8, 1e8])


@pytest.mark.parametrize("truth, pred", [([1e8, 2e8], [1e8]), ([], [])])
def test_mismatched_or_empty_inputs(truth, pred):
    with pytest.raises(DomainError):
        metrics.report(truth, pred)


# ============= Tabela ============= #

def _row(name: str, **values) -> BenchmarkRow:
    report = MetricsReport(
        n=values.pop("n", 3311),
        accuracy=values.pop("accuracy", 92.2),
        mean_abs_residual=values.pop("mean_abs_residual", 0.045),
        outliers=values.pop("outliers", 48),
        deviation=values.pop("deviation", 118.67),
    )
    return BenchmarkRow(name=name, report=report, **values)


def test_table_text_formats_the_key_metrics():
    table = metrics.benchmark_table([_row("Deep ensemble", train_seconds=12.5), _row("Random Forest", outliers=7)])
    text = table.to_text()
    for fragment in ("Deep ensemble", "Random Forest", "92.20%", "0.045", "48", "118.67", "12.5"):
        assert fragment in text
    lines = text.splitlines()
    assert len(lines) == 3
    assert lines[0].split()[0] == "Model"
    assert lines[1].strip().startswith("Deep ensemble")


def test_table_frame_has_the_csv_columns():
    frame = metrics.benchmark_table([_row("Deep ensemble"), _row("Random Forest", outliers=7)]).to_frame()
    assert tuple(frame.columns) == CSV_HEADER
    assert frame["outlier"].tolist() == [48, 7]
    assert frame["train_seconds"].isna().all()


def test_table_csv_round_trip():
    table = metrics.benchmark_table(
        [_row("Deep ensemble", train_seconds=1.25, predict_ms_per_sample=0.003), _row("Gradient Boost")]
    )
    restored = BenchmarkTable.from_csv(table.to_csv())
    assert [row.name for row in restored.rows] == ["Deep ensemble", "Gradient Boost"]
    assert restored.rows[0].report.accuracy == 92.2
    assert restored.rows[0].train_seconds == 1.25
    assert restored.rows[1].train_seconds is None
    assert restored.rows[1].report.outliers == 48


def test_empty_table_is_rejected():
    with pytest.raises(DomainError):
        metrics.benchmark_table([])
