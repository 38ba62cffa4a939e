"""Suite runner, report schema, CLI behaviour, determinism."""

import json
import subprocess
import sys

import numpy as np
import pytest

from conelab import catalog
from conelab.cli import main as cli_main
from conelab.report import SuiteConfig, all_pass, report_json
from conelab.suites import (
    SUITES,
    SuiteUsageError,
    integrate_level_set,
    run_suite,
)

REPORT_KEYS = {"identity", "anchor", "samples", "max_residual",
               "rms_residual", "tolerance", "verdict", "witness"}


def _config(manifold, suite, **kw):
    kw.setdefault("samples", 25)
    return SuiteConfig(manifold=manifold, suite=suite, **kw)


def test_catalog_keys():
    assert set(catalog.keys()) == {"t3-blair", "t3-unnormalized",
                                   "s3-round", "s5-round"}
    with pytest.raises(KeyError):
        catalog.get("nope")


def test_run_suite_unknown_ids():
    with pytest.raises(SuiteUsageError):
        run_suite(_config("t3-blair", "no-such-suite"))
    with pytest.raises(SuiteUsageError):
        run_suite(_config("no-such-manifold", "sasaki"))
    with pytest.raises(SuiteUsageError):
        run_suite(_config("t3-blair", "hypersasaki"))


def test_expected_verdicts_blair():
    reports = run_suite(_config("t3-blair", "sasaki"))
    by_id = {r.identity: r for r in reports}
    assert by_id["sasaki-defect"].verdict == "fail"
    assert by_id["sasaki-defect"].max_residual >= 0.4
    assert by_id["parallel-omega"].verdict == "fail"
    assert by_id["sasaki-parallel-equivalence"].verdict == "pass"

    reports = run_suite(_config("t3-blair", "kcontact"))
    by_id = {r.identity: r for r in reports}
    assert by_id["killing-field"].verdict == "fail"
    assert by_id["killing-field"].max_residual >= 0.4
    assert by_id["ricci-reeb-criterion"].max_residual == pytest.approx(2.0, abs=1e-10)


def test_expected_verdicts_spheres():
    for manifold in ("s3-round", "s5-round"):
        for suite in ("kcontact", "sasaki"):
            reports = run_suite(_config(manifold, suite,
                                        samples=12 if manifold == "s5-round" else 25))
            assert all_pass(reports), (manifold, suite)


def test_unnormalized_contact_axioms_fail_only_where_expected():
    reports = run_suite(_config("t3-unnormalized", "contact-axioms"))
    verdicts = {r.identity: r.verdict for r in reports}
    assert verdicts["contact-metric-axiom"] == "fail"
    assert verdicts["contact-unit-length"] == "pass"
    assert verdicts["contact-reeb-conditions"] == "pass"
    assert verdicts["cone-symplectic-closed"] == "pass"
    assert verdicts["cone-complex-square"] == "fail"


def test_report_schema_and_verdict_rule():
    reports = run_suite(_config("t3-blair", "kcontact"))
    for r in reports:
        d = r.to_dict()
        assert set(d) == REPORT_KEYS
        if r.max_residual is not None:
            assert (r.verdict == "pass") == (r.max_residual <= r.tolerance)
        assert r.rms_residual <= r.max_residual + 1e-15
        assert r.witness is None or len(r.witness) in (3, 4)


def test_tolerance_override_changes_verdict():
    config = _config("t3-blair", "kcontact",
                     tolerances={"killing-field": 10.0,
                                 "ricci-reeb-criterion": 10.0})
    reports = run_suite(config)
    assert all_pass(reports)


def test_determinism_byte_identical_reports():
    for suite in ("kcontact", "cone-identities"):
        config1 = _config("t3-blair", suite, seed=31337)
        config2 = _config("t3-blair", suite, seed=31337)
        text1 = report_json(config1, run_suite(config1))
        text2 = report_json(config2, run_suite(config2))
        assert text1.encode() == text2.encode()
    # different seed -> different sample draw -> (generically) different bytes
    base = report_json(_config("t3-blair", "kcontact", seed=31337),
                       run_suite(_config("t3-blair", "kcontact", seed=31337)))
    other = report_json(_config("t3-blair", "kcontact", seed=1),
                        run_suite(_config("t3-blair", "kcontact", seed=1)))
    assert other != base


def test_cone_identities_on_every_catalog_base():
    """Every cone-chart identity passes on all four entries, 200 samples."""
    for manifold in catalog.keys():
        reports = run_suite(_config(manifold, "cone-identities", samples=200))
        assert all_pass(reports), manifold


def test_integrate_level_set_values():
    vol = integrate_level_set("t3-blair", 1.0, "one")
    assert vol == pytest.approx(np.pi**3, rel=1e-9)
    assert integrate_level_set("t3-blair", 2.0, "one") == pytest.approx(
        8 * np.pi**3, rel=1e-9)
    with pytest.raises(SuiteUsageError):
        integrate_level_set("t3-blair", 1.0, "no-such-integrand")


def test_cli_list_and_exit_codes(tmp_path, capsys):
    assert cli_main(["list"]) == 0
    out = capsys.readouterr().out
    for suite in SUITES:
        assert suite in out

    # passing suite -> 0, with a report file
    path = tmp_path / "report.json"
    code = cli_main(["verify", "sasaki", "--manifold", "s3-round",
                     "--samples", "10", "--report", str(path)])
    assert code == 0
    payload = json.loads(path.read_text())
    assert set(payload) == {"config", "engine_version", "reports"}
    for rep in payload["reports"]:
        assert set(rep) == REPORT_KEYS

    # expected failure -> 1
    assert cli_main(["verify", "sasaki", "--manifold", "t3-blair",
                     "--samples", "10"]) == 1
    # usage errors -> 2
    assert cli_main(["verify", "sasaki", "--manifold", "bogus"]) == 2
    assert cli_main(["verify", "bogus-suite", "--manifold", "s3-round"]) == 2
    assert cli_main(["verify", "hypersasaki", "--manifold", "t3-blair"]) == 2
    assert cli_main(["integrate", "bogus", "--manifold", "t3-blair",
                     "--radius", "1.0"]) == 2


def test_cli_integrate(capsys):
    code = cli_main(["integrate", "one", "--manifold", "t3-blair",
                     "--radius", "1.0", "--grid", "16"])
    assert code == 0
    out = capsys.readouterr().out.strip()
    assert float(out) == pytest.approx(np.pi**3, rel=1e-9)


def test_cli_config_file_flags_win(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"seed": 7, "samples": 5,
                               "tolerances": {"killing-field": 10.0,
                                              "ricci-reeb-criterion": 10.0}}))
    # config alone: huge tolerances make the blair kcontact suite pass
    assert cli_main(["verify", "kcontact", "--manifold", "t3-blair",
                     "--config", str(cfg)]) == 0
    # flag overrides the config tolerance back to strict -> failure again
    assert cli_main(["verify", "kcontact", "--manifold", "t3-blair",
                     "--config", str(cfg), "--tol", "killing-field=1e-7",
                     "--tol", "ricci-reeb-criterion=1e-7"]) == 1


def test_cli_entry_point_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "conelab.cli", "verify", "kcontact",
         "--manifold", "s3-round", "--samples", "8"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert "killing-field" in proc.stdout
