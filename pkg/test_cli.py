import json

import pytest
from click.testing import CliRunner

from fockflow.cli.commands import parse_domain, parse_grid, parse_region
from fockflow.cli.main import cli
from fockflow.core.exceptions import CLIError
from fockflow.models.field_grid import DiskRegion, RectRegion
from fockflow.models.image_system import ObliqueStripDomain, WedgeDomain
from fockflow.utils.helpers import parse_complex

FOCK1 = '{"kind": "fock", "n": 1}'
ODD_CAT = '{"kind": "cat", "parity": "odd", "alpha": "1+0i"}'


@pytest.fixture
def runner():
    return CliRunner()


def error_of(result):
    return json.loads(result.stderr.strip().splitlines()[-1])


def test_parsers():
    grid = parse_grid("-4:4:-3:3:20:10")
    assert (grid.nx, grid.ny) == (20, 10)
    assert parse_grid("0:1:0:1:5").ny == 5
    assert parse_region("disk:1+1i:2") == DiskRegion(center=1 + 1j, radius=2)
    assert isinstance(parse_region("rect:-1:1:-2:2"), RectRegion)
    assert parse_domain("wedge:3") == WedgeDomain(n=3)
    assert isinstance(parse_domain("oblique:1:0.5"), ObliqueStripDomain)
    with pytest.raises(CLIError):
        parse_region("annulus:0:1:2")
    with pytest.raises(CLIError):
        parse_grid("0:1:0:1:many")


def test_eval_prints_json(runner):
    result = runner.invoke(cli, ["eval", "--state", FOCK1, "--z", "2"])
    assert result.exit_code == 0, result.stderr
    data = json.loads(result.stdout)
    assert parse_complex(data["velocity"]) == pytest.approx(0.5j)
    assert data["u"] == pytest.approx(0.0, abs=1e-15)
    assert data["v"] == pytest.approx(-0.5)


def test_field_csv_to_stdout_and_file(runner, tmp_path):
    result = runner.invoke(cli, ["field", "--state", FOCK1, "--grid=-1:1:-1:1:3", "--format", "csv"])
    assert result.exit_code == 0, result.stderr
    lines = result.stdout.splitlines()
    assert lines[0] == "x,y,phi,psi,u,v,masked"
    assert len(lines) == 10

    out = tmp_path / "field.csv"
    result = runner.invoke(cli, ["field", "--state", FOCK1, "--grid=-1:1:-1:1:3", "--out", str(out)])
    assert result.exit_code == 0, result.stderr
    assert out.read_text().splitlines() == lines


def test_field_rejects_svg(runner):
    result = runner.invoke(cli, ["field", "--state", FOCK1, "--grid=-1:1:-1:1:3", "--format", "svg"])
    assert result.exit_code == 2
    assert error_of(result)["exit_code"] == 2


def test_zeros(runner):
    result = runner.invoke(cli, ["zeros", "--state", ODD_CAT, "--region", "disk:0:4"])
    assert result.exit_code == 0, result.stderr
    zeros = json.loads(result.stdout)
    assert len(zeros) == 3
    assert all(zero["multiplicity"] == 1 for zero in zeros)


def test_images_for_state_and_domain(runner):
    result = runner.invoke(cli, ["images", "--state", '{"kind": "qcoherent", "q": 0.5, "alpha": "1"}', "--M", "2"])
    assert result.exit_code == 0, result.stderr
    system = json.loads(result.stdout)
    assert [(s["re"], s["kind"]) for s in system["singularities"]] == [
        (2.0, "anti_vortex"), (4.0, "anti_vortex"), (8.0, "anti_vortex")
    ]

    result = runner.invoke(cli, ["images", "--domain", "wedge:3", "--base", "1+0.5i"])
    assert result.exit_code == 0, result.stderr
    assert len(json.loads(result.stdout)["singularities"]) == 6


def test_images_needs_a_generator(runner):
    result = runner.invoke(cli, ["images", "--state", '{"kind": "coherent", "alpha": "1"}'])
    assert result.exit_code == 2
    assert error_of(result)["error"] == "ValidationError"

    result = runner.invoke(cli, ["images", "--domain", "strip:1"])
    assert result.exit_code == 2


def test_verify_named_items(runner):
    result = runner.invoke(cli, ["verify", "--name", "q_zero_progression", "--name", "boundary_real"])
    assert result.exit_code == 0, result.stderr
    reports = json.loads(result.stdout)
    assert [r["name"] for r in reports] == ["q_zero_progression", "boundary_real"]
    assert all(r["pass"] for r in reports)


def test_verify_is_byte_identical(runner):
    args = ["verify", "--name", "qutrit_equivariance", "--seed", "7"]
    assert runner.invoke(cli, args).stdout == runner.invoke(cli, args).stdout


def test_verify_usage_errors(runner):
    assert runner.invoke(cli, ["verify"]).exit_code == 2
    result = runner.invoke(cli, ["verify", "--name", "nope"])
    assert result.exit_code == 2
    assert error_of(result)["error"] == "UnknownIdentityError"


def test_failed_check_exits_one(runner, tmp_path):
    job = tmp_path / "job.yaml"
    job.write_text(
        "command: verify\n"
        "names: [strip_closed_form]\n"
        "params:\n"
        "  strip_closed_form: {M: 20, tolerance: 1.0e-15}\n"
    )
    result = runner.invoke(cli, ["run", "--job", str(job)])
    assert result.exit_code == 1
    assert json.loads(result.stdout)[0]["pass"] is False


def test_run_job_file(runner, tmp_path):
    out = tmp_path / "zeros.json"
    job = tmp_path / "job.yaml"
    job.write_text(
        "command: zeros\n"
        "state: {kind: displaced, n: 2, alpha: '1+1i'}\n"
        "region: 'disk:0:3'\n"
        f"output: {out}\n"
    )
    result = runner.invoke(cli, ["run", "--job", str(job)])
    assert result.exit_code == 0, result.stderr
    zeros = json.loads(out.read_text())
    assert zeros[0]["multiplicity"] == 2


def test_bad_state_is_usage_error(runner):
    result = runner.invoke(cli, ["eval", "--state", '{"kind": "fock", "n": -1}', "--z", "1"])
    assert result.exit_code == 2
    assert error_of(result)["exit_code"] == 2


def test_overflow_is_domain_error(runner):
    result = runner.invoke(cli, ["eval", "--state", '{"kind": "coherent", "alpha": "1"}', "--z", "1000"])
    assert result.exit_code == 3
    assert error_of(result)["error"] == "MagnitudeOverflowError"


def test_unwritable_output_is_io_error(runner, tmp_path):
    result = runner.invoke(cli, ["eval", "--state", FOCK1, "--z", "1", "--out", str(tmp_path / "no" / "x.json")])
    assert result.exit_code == 4
    assert error_of(result)["error"] == "ArtifactIOError"


def test_streamlines_svg(runner, tmp_path):
    out = tmp_path / "lines.svg"
    result = runner.invoke(cli, [
        "streamlines", "--state", FOCK1, "--grid=-2:2:-2:2:2",
        "--seed-point", "1", "--step", "0.01", "--n-steps", "100", "--out", str(out),
    ])
    assert result.exit_code == 0, result.stderr
    svg = out.read_text()
    assert 'id="streamline-0"' in svg
    assert 'id="marker-vortex-0"' in svg


def test_schema(runner):
    result = runner.invoke(cli, ["schema", "--name", "VerificationReport"])
    assert result.exit_code == 0
    schema = json.loads(result.stdout)
    assert "pass" in schema["properties"]


def test_missing_config_file(runner, tmp_path):
    result = runner.invoke(cli, ["--config", str(tmp_path / "nope.yaml"), "version"])
    assert result.exit_code == 2
    assert error_of(result)["error"] == "ConfigurationError"


def test_version_and_config_info(runner):
    assert runner.invoke(cli, ["version"]).exit_code == 0
    assert runner.invoke(cli, ["config-info"]).exit_code == 0
