import pytest

from translitbench.harness import ModelAdapter, RunConfig, run_experiment
from translitbench.metrics import MetricConfig
from translitbench.reporting import (
    category_matrix_csv,
    format_mean_std_ci,
    render_report,
    report_table,
    significance_by_direction,
)


@pytest.fixture(scope="module")
def run_records(tmp_path_factory, sample_corpus_path=None):
    from conftest import DATA_DIR

    tmp_path = tmp_path_factory.mktemp("runs")
    config = RunConfig(
        corpus_path=str(DATA_DIR / "sample_corpus_1k.jsonl"),
        output_dir=str(tmp_path / "out"),
        adapters=[
            ModelAdapter("identity", "builtin_identity"),
            ModelAdapter("rule", "builtin_rule"),
        ],
        directions=["tj2fa"],
        seeds=[42, 43, 44],
        sample_size=None,
        metric_config=MetricConfig(),
    )
    return run_experiment(config).records


class TestFormat:
    def test_paper_convention(self):
        assert format_mean_std_ci(87.4, 0.1, 87.2, 87.4) == "87.4 ± 0.1 [87.2--87.4]"

    def test_identical_seeds(self):
        assert format_mean_std_ci(50.0, 0.0, 50.0, 50.0) == "50.0 ± 0.0 [50.0--50.0]"

    def test_std_absent(self):
        assert format_mean_std_ci(87.4, None, 87.2, 87.4) == "87.4 [87.2--87.4]"

    def test_no_ci(self):
        assert format_mean_std_ci(87.4, 0.1) == "87.4 ± 0.1"


class TestRenderReport:
    def test_structure_and_formatting(self, run_records):
        report = render_report(run_records, bootstrap_resamples=200)
        assert len(report["rows"]) == 2
        for row in report["rows"]:
            chrf = row["metrics"]["chrf_pp"]
            assert chrf["ci_low"] is not None
            assert chrf["ci_low"] <= chrf["mean"] + 1e-6
            assert "±" in chrf["formatted"] and "--" in chrf["formatted"]
            assert row["seeds"] == [42, 43, 44]

    def test_identity_row_is_exact(self, run_records):
        report = render_report(run_records, bootstrap_resamples=100)
        identity = next(r for r in report["rows"] if r["model"] == "identity")
        # identity on a mirrored direction is not perfect here (tj != fa),
        # but values must be finite and match the record aggregation
        assert 0.0 <= identity["metrics"]["chrf_pp"]["mean"] <= 100.0

    def test_significance_included(self, run_records):
        report = render_report(run_records, bootstrap_resamples=100)
        assert "tj2fa" in report["significance"]
        pairs = report["significance"]["tj2fa"]["pairs"]
        assert len(pairs) == 1
        assert pairs[0]["model_a"] == "identity"
        assert pairs[0]["model_b"] == "rule"
        assert 0.0 <= pairs[0]["wilcoxon_p"] <= 1.0

    def test_category_matrix_csv(self, run_records):
        report = render_report(run_records, bootstrap_resamples=100)
        csv_text = category_matrix_csv(report)
        header = csv_text.splitlines()[0]
        assert header.startswith("model_direction,")
        assert "poetry_parts" in header
        assert len(csv_text.splitlines()) == 3

    def test_report_table_renders(self, run_records):
        report = render_report(run_records, bootstrap_resamples=100)
        table = report_table(report)
        assert "identity" in table and "rule" in table
        assert "chrf_pp" in table.splitlines()[0]

    def test_no_successful_records_rejected(self):
        with pytest.raises(ValueError):
            render_report([])


class TestSignificanceAlignment:
    def test_single_model_yields_empty(self, run_records):
        only_identity = [r for r in run_records if r.model == "identity"]
        assert significance_by_direction(only_identity) == {}
