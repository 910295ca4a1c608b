import io
import json
import logging

import numpy as np
import pytest

from paragraded.core.exceptions import ConfigurationError, IdentityViolationError, ValidationError
from paragraded.core.validators import build_model, validate_hermitian, validate_square, validate_unitary
from paragraded.models.reports import AuditReport, AuditSummary, ResidualCheck
from paragraded.spin_chain import XYChain
from paragraded.utils.config import Config
from paragraded.utils.export import matrix_from_csv, matrix_to_csv, table_to_csv
from paragraded.utils.logger import JSONFormatter, _sanitize_log_data, log_run_summary


@pytest.mark.unit
class TestConfig:
    def test_defaults(self, config):
        assert config.seed == 20240601
        assert config.cutoff == 32
        assert config.edge_window == 2
        assert config.tol_exact == 1e-12
        assert config.tol_synth == 1e-9
        assert config.correction_gain == 1.0
        assert config.strict_grades is True
        assert config.log_level == "WARNING"
        assert config.log_format == "text"
        assert all(config.validate_config().values())

    def test_environment_overrides(self, clean_env):
        clean_env.setenv("PARAGRADED_SEED", "7")
        clean_env.setenv("PARAGRADED_STRICT_GRADES", "off")
        clean_env.setenv("LOG_LEVEL", "debug")
        config = Config(load_env_file=False)
        assert config.seed == 7
        assert config.strict_grades is False
        assert config.log_level == "DEBUG"

    def test_failed_checks(self, clean_env):
        clean_env.setenv("PARAGRADED_CUTOFF", "1")
        clean_env.setenv("PARAGRADED_LOG_FORMAT", "xml")
        checks = Config(load_env_file=False).validate_config()
        assert not checks["cutoff_at_least_two"]
        assert not checks["edge_window_valid"]
        assert not checks["log_format_valid"]
        assert checks["tolerances_positive"]

    @pytest.mark.parametrize(
        "name, value",
        [("PARAGRADED_SEED", "abc"), ("PARAGRADED_CUTOFF", "3.5"), ("PARAGRADED_TOL_SYNTH", "")],
    )
    def test_malformed_number_raises_configuration_error(self, clean_env, name, value):
        clean_env.setenv(name, value)
        with pytest.raises(ConfigurationError) as info:
            Config(load_env_file=False)
        assert name in info.value.message
        assert info.value.exit_code == 1

    def test_as_dict(self, config):
        assert set(config.as_dict()) == {
            "seed", "cutoff", "edge_window", "tol_exact", "tol_synth",
            "correction_gain", "strict_grades", "log_level", "log_format",
        }


@pytest.mark.unit
class TestLogging:
    def setup_method(self):
        self.formatter = JSONFormatter()

    def test_json_formatter_includes_extra_fields(self):
        record = logging.LogRecord("paragraded.test", logging.INFO, __file__, 10, "hello %s", ("world",), None)
        record.run_id = "abc123"
        payload = json.loads(self.formatter.format(record))
        assert payload["message"] == "hello world"
        assert payload["level"] == "INFO"
        assert payload["run_id"] == "abc123"
        assert payload["timestamp"].endswith("Z")

    def test_sanitize_drops_large_arrays(self):
        data = _sanitize_log_data({"small": np.arange(3), "big": np.zeros(100), "nested": {"seq": list(range(50))}})
        assert data["small"] == [0, 1, 2]
        assert data["big"] == "<array shape=(100,)>"
        assert data["nested"]["seq"] == "<sequence len=50>"

    def test_run_summary_levels(self, caplog):
        logger = logging.getLogger("paragraded_test_summary")
        with caplog.at_level(logging.INFO, logger="paragraded_test_summary"):
            log_run_summary(logger, "r1", {"n": 8}, {"exit_code": 0})
            log_run_summary(logger, "r2", {"n": 8}, error=ValueError("boom"))
        assert [r.levelname for r in caplog.records] == ["INFO", "ERROR"]
        assert caplog.records[1].error == {"type": "ValueError", "message": "boom"}


@pytest.mark.unit
class TestValidators:
    def test_build_model_translates_errors(self):
        with pytest.raises(ValidationError) as info:
            build_model(XYChain, n=2)
        assert "n:" in info.value.message
        assert info.value.details["validation_errors"]

    def test_square(self):
        with pytest.raises(ValidationError):
            validate_square(np.ones((2, 3)))
        with pytest.raises(ValidationError):
            validate_square(np.eye(2), size=4)
        with pytest.raises(ValidationError):
            validate_square(np.array([[np.nan, 0], [0, 1]]))

    def test_unitary_and_hermitian(self):
        assert validate_unitary(np.eye(2)).dtype == complex
        with pytest.raises(ValidationError):
            validate_unitary(2 * np.eye(2))
        with pytest.raises(ValidationError) as info:
            validate_hermitian(np.array([[0, 1], [0, 0]]))
        assert info.value.details["max_asymmetry"] == pytest.approx(1.0)


@pytest.mark.unit
class TestReports:
    def _report(self, residual: float) -> AuditReport:
        return AuditReport(suite="demo", checks=[ResidualCheck(name="identity", residual=residual, tolerance=1e-12)])

    def test_passing_report(self):
        report = self._report(0.0)
        assert report.passed
        assert report.require_passed() is report

    def test_failing_report_raises(self):
        with pytest.raises(IdentityViolationError) as info:
            self._report(1e-3).require_passed()
        assert info.value.exit_code == 2
        assert info.value.residual == pytest.approx(1e-3)

    def test_summary_table(self):
        summary = AuditSummary(reports=[self._report(0.0), self._report(1.0)])
        assert not summary.passed
        lines = summary.table().splitlines()
        assert lines[1].endswith("PASS")
        assert lines[2].endswith("FAIL")

    def test_json_dump(self):
        payload = json.loads(self._report(0.0).model_dump_json())
        assert payload["passed"] is True
        assert payload["worst_residual"] == 0.0


@pytest.mark.unit
class TestExport:
    def test_complex_matrix_round_trip(self):
        m = np.array([[1, 0.5j], [-0.5j, 1]])
        text = matrix_to_csv(m, ["a", "b"])
        assert text.splitlines()[1] == "row,a_re,a_im,b_re,b_im"
        assert np.array_equal(matrix_from_csv(io.StringIO(text)), m)

    def test_bare_complex_entries(self):
        m = matrix_from_csv(io.StringIO("1,0\n0,0.5-0.5j\n"))
        assert m[1, 1] == 0.5 - 0.5j

    def test_ragged_rejected(self):
        with pytest.raises(ValidationError):
            matrix_from_csv(io.StringIO("1,0\n0\n"))

    def test_non_numeric_rejected(self):
        with pytest.raises(ValidationError):
            matrix_from_csv(io.StringIO("1,x\n0,1\n"))

    def test_table_writes_to_path(self, tmp_path):
        target = tmp_path / "out.csv"
        text = table_to_csv(["k", "v"], [(1, 0.1)], target)
        assert target.read_text(encoding="utf-8") == text == "k,v\n1,0.10000000000000001\n"
