import math

import pytest

from fockflow.core.exceptions import UnknownIdentityError, ValidationError
from fockflow.core.verification import DEFAULT_SEED, registered_identities, run_battery, verify_identity
from fockflow.models.report import UNEVALUABLE_ERROR, VerificationReport
from fockflow.utils.exporters import list_to_json

BATTERY = [
    "wedge_periodicity",
    "wedge_boundary",
    "strip_closed_form",
    "strip_combined_periodicity",
    "oblique_boundary",
    "cat_velocity_periodicity",
    "cat_zero_lattice",
    "qutrit_derivative_cycle",
    "qutrit_equivariance",
    "q_series_product",
    "q_zero_progression",
    "circulation_strength",
    "boundary_unimodular",
    "boundary_real",
    "normalization_freedom",
]


def test_battery_order():
    assert registered_identities() == BATTERY


@pytest.mark.parametrize("name", BATTERY)
def test_identity_passes(name):
    report = verify_identity(name)
    assert report.passed, f"{name}: max_error {report.max_error:.3e} > {report.tolerance:.1e}"
    assert report.sample_count > 0
    assert report.details["seed"] == DEFAULT_SEED + BATTERY.index(name)


def test_reports_are_deterministic():
    names = ["wedge_periodicity", "qutrit_equivariance", "q_zero_progression"]
    first = list_to_json(run_battery(names), VerificationReport)
    second = list_to_json(run_battery(names), VerificationReport)
    assert first == second


def test_seed_changes_samples_not_outcome():
    a = verify_identity("qutrit_equivariance", seed=1)
    b = verify_identity("qutrit_equivariance", seed=2)
    assert a.passed and b.passed
    assert a.details["seed"] != b.details["seed"]


def test_parameter_override_is_recorded():
    report = verify_identity("wedge_periodicity", {"n_values": [2], "tolerance": 1e-9})
    assert report.tolerance == 1e-9
    assert report.details["params"]["n_values"] == [2]


def test_tightened_tolerance_fails():
    report = verify_identity("strip_closed_form", {"M": 20, "tolerance": 1e-15})
    assert not report.passed
    assert report.max_error > report.tolerance


def test_unknown_identity():
    with pytest.raises(UnknownIdentityError):
        verify_identity("no_such_identity")


def test_unknown_parameter():
    with pytest.raises(ValidationError):
        verify_identity("wedge_periodicity", {"bogus": 1})


def test_report_pass_flag_is_consistent():
    report = VerificationReport.from_errors("x", [1e-3, float("nan")], 1e-2)
    assert report.max_error == UNEVALUABLE_ERROR
    assert not report.passed
    assert report.to_json_dict()["pass"] is False
    with pytest.raises(ValueError):
        VerificationReport(name="y", max_error=1.0, tolerance=0.1, passed=True, sample_count=1)


def test_report_without_samples_fails():
    report = VerificationReport.from_errors("x", [], 1e-2)
    assert not report.passed
    assert report.sample_count == 0
    assert report.details["no_samples"] is True


def test_oblique_boundary_reads_the_potential():
    report = verify_identity("oblique_boundary", {"betas": [math.pi / 6], "line_samples": 5, "M": 100})
    assert report.passed
    assert report.details["upper_line_value"] == pytest.approx(math.pi)


def test_normalization_freedom_tracks_zero_shifts():
    report = verify_identity("normalization_freedom", {"samples": 2})
    assert report.passed
    assert report.details["zero_max_shift"] <= 1e-9
