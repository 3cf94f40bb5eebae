import logging

import pytest

from fockflow.config.settings import load_config
from fockflow.core.exceptions import ConfigurationError
from fockflow.utils.logger import ContextualLogger


def test_defaults(config):
    assert config.truncation_config.max_terms == 128
    assert config.truncation_config.pair_symmetric
    assert config.quadrature_config.samples == 1024
    assert config.zero_search_config.max_depth == 12
    assert config.zero_search_config.multiplicity_cap == 16
    assert config.streamline_config.n_steps == 4000
    assert config.verification_config.seed == 20240917
    assert config.app_config.json_indent == 2


def test_env_override(monkeypatch):
    monkeypatch.setenv("FOCKFLOW_MAX_TERMS", "64")
    assert load_config().truncation_config.max_terms == 64


def test_missing_file(tmp_path):
    with pytest.raises(ConfigurationError):
        load_config(str(tmp_path / "absent.yaml"))


def test_invalid_yaml(tmp_path):
    path = tmp_path / "bad.yaml"
    path.write_text("truncation: [unclosed\n")
    with pytest.raises(ConfigurationError):
        load_config(str(path))


def test_invalid_value(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text("quadrature:\n  samples: 4\n")
    with pytest.raises(ConfigurationError):
        load_config(str(path))


def test_unset_variable_without_default(tmp_path, monkeypatch):
    monkeypatch.delenv("FOCKFLOW_TEST_SEED", raising=False)
    path = tmp_path / "config.yaml"
    path.write_text("verification:\n  seed: ${FOCKFLOW_TEST_SEED}\n")
    with pytest.raises(ConfigurationError):
        load_config(str(path))


def test_partial_file_keeps_defaults(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text("zero_search:\n  max_depth: 5\n")
    config = load_config(str(path))
    assert config.zero_search_config.max_depth == 5
    assert config.truncation_config.tol == 1e-14


def test_contextual_logger_prefix(caplog):
    log = ContextualLogger(logging.getLogger("ctx-test"), {"component": "zero_search"})
    with caplog.at_level(logging.DEBUG, logger="ctx-test"):
        log.with_context(at=1 - 2j, radius=0.25).debug("isolated")
        with log.timed("split"):
            pass
    messages = [record.getMessage() for record in caplog.records]
    assert messages[0] == "[component=zero_search at=1-2i radius=0.25] isolated"
    assert messages[1].startswith("[component=zero_search] split finished in ")


def test_timed_reraises(caplog):
    log = ContextualLogger(logging.getLogger("ctx-test"))
    with caplog.at_level(logging.DEBUG, logger="ctx-test"):
        with pytest.raises(RuntimeError):
            with log.timed("step"):
                raise RuntimeError("boom")
    assert "step aborted" in caplog.records[-1].getMessage()
