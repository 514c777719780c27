import json

import numpy as np
import pytest

from effham import (
    MultiToneHamiltonian,
    OperatorValueError,
    ZOO_NAMES,
    commutation_probe,
    default_time_grid,
    eq6_gap,
    eq6_gap_grid,
    frequency_report,
    hermiticity_defect,
    make_model,
    model_digest,
    run_report,
    sigma_x,
    unitarity_defect,
)


# ----------------------------------------------------------------------
# metrics


def test_hermiticity_defect_zero_for_hermitian():
    assert hermiticity_defect(sigma_x()) == 0.0


def test_hermiticity_defect_anti_hermitian_extreme():
    # ||2i sx|| / ||i sx|| = 2 sqrt(2) / sqrt(2)
    assert hermiticity_defect(1j * sigma_x()) == pytest.approx(2.0)


def test_hermiticity_defect_scaled_zero_detection(rng):
    A = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    Aherm = (A + A.conj().T) / 2
    assert hermiticity_defect(Aherm) < 1e-15
    assert hermiticity_defect(Aherm + 1e-8 * 1j * np.eye(4)) > 0


def test_hermiticity_defect_unitary_conjugation_invariant(rng):
    A = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    M = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    from effham import matrix_exponential

    U = matrix_exponential(M - M.conj().T)
    a = hermiticity_defect(A)
    b = hermiticity_defect(U @ A @ U.conj().T)
    assert abs(a - b) < 1e-12


def test_unitarity_defect_values():
    assert unitarity_defect(np.eye(3)) == 0.0
    assert unitarity_defect(2 * np.eye(2)) == pytest.approx(3 * np.sqrt(2))


# ----------------------------------------------------------------------
# reordering identity gap


def test_eq6_zero_for_scalar_model():
    H = make_model("scalar_single_tone")
    ts = np.linspace(0.0, 10.0, 16)
    assert eq6_gap_grid(H, ts).max() <= 1e-12


def test_eq6_zero_for_single_hermitian_tone():
    H = MultiToneHamiltonian([(sigma_x(), 3.0)])
    for t in (0.3, 1.1, 2.9):
        assert eq6_gap(H, t) <= 1e-12


def test_eq6_positive_for_noncommuting_model():
    H = make_model("noncommuting_two_tone")
    # frozen from the direct evaluation oracle
    assert eq6_gap(H, 0.5) == pytest.approx(4.2284e-3, rel=1e-3)


def test_eq6_zero_whenever_commutation_probe_vanishes():
    for name in ("commuting_diag", "scalar_single_tone"):
        H = make_model(name)
        pairs = [(0.1, 0.9), (0.4, 2.2), (1.5, 3.0)]
        assert commutation_probe(H, pairs) < 1e-13
        assert eq6_gap_grid(H, np.linspace(0, 5, 8)).max() <= 1e-12


# ----------------------------------------------------------------------
# zoo


def test_zoo_names_cover_expected_models():
    assert set(ZOO_NAMES) == {
        "jc_detuned",
        "raman_lambda",
        "commuting_diag",
        "noncommuting_two_tone",
        "scalar_single_tone",
    }


def test_make_model_unknown_name():
    with pytest.raises(OperatorValueError):
        make_model("nonexistent_model")


def test_commuting_diag_probe_zero():
    H = make_model("commuting_diag")
    assert commutation_probe(H, [(0.1, 0.7), (0.3, 1.1)]) == 0.0


def test_noncommuting_probe_positive():
    H = make_model("noncommuting_two_tone")
    assert commutation_probe(H, [(0.1, 0.7), (0.3, 1.1)]) > 1e-3


def test_jc_detuned_distinct_frequencies():
    assert frequency_report(make_model("jc_detuned")).passes


def test_jc_detuned_shape():
    H = make_model("jc_detuned")
    assert H.dim == 10
    assert H.omegas == (1.0,)


def test_model_digest_stable_and_sensitive():
    a = make_model("jc_detuned")
    b = make_model("jc_detuned")
    c = make_model("jc_detuned", g=0.06)
    assert model_digest(a) == model_digest(b)
    assert model_digest(a) != model_digest(c)


def test_default_time_grid_span():
    H = make_model("noncommuting_two_tone")
    grid = default_time_grid(H)
    assert grid.size == 64
    assert grid[0] == 0.0
    assert grid[-1] == pytest.approx(2.0)


# ----------------------------------------------------------------------
# report runner


def test_report_scalar_identity_gap_column():
    rep = run_report("scalar_single_tone", grid=16)
    assert rep.eq6.max() <= 1e-12
    # single-tone model: no pair gap; JSON must stay finite (null, not inf)
    data = json.loads(rep.to_json())
    assert data["frequency_report"]["min_pair_gap"] is None


def test_report_noncommuting_order3():
    rep = run_report("noncommuting_two_tone", orders=(2, 3), grid=32)
    rec3 = [r for r in rep.orders if r.order == 3][0]
    assert rec3.hermiticity_defect_grid.max() > 1e-3
    assert rec3.secular_hermiticity_defect < 1e-10
    for row in rep.oracle_residuals:
        assert row["residual"] < 1e-8


def test_report_sweep_slope():
    rep = run_report("noncommuting_two_tone", orders=(2,), grid=8,
                     sweep=(0.4, 0.2, 0.1))
    lams = np.array(rep.sweep["lambdas"])
    defects = np.array(
        [row["orders"][0]["dyson_unitarity_defect_t1"] for row in rep.sweep["rows"]]
    )
    slope = np.polyfit(np.log(lams), np.log(defects), 1)[0]
    assert abs(slope - 3.0) <= 0.3


def test_report_sweep_hermiticity_scaling():
    rep = run_report("noncommuting_two_tone", orders=(2, 3), grid=16,
                     sweep=(0.4, 0.2, 0.1))
    for idx, n in enumerate(rep.options["orders"]):
        lams = np.array(rep.sweep["lambdas"])
        defs = np.array(
            [row["orders"][idx]["hermiticity_defect_max"] for row in rep.sweep["rows"]]
        )
        slope = np.polyfit(np.log(lams), np.log(defs), 1)[0]
        assert abs(slope - n) <= 0.1


def test_report_deterministic_apart_from_timestamp():
    a = run_report("raman_lambda", grid=12).as_dict()
    b = run_report("raman_lambda", grid=12).as_dict()
    a.pop("generated_at")
    b.pop("generated_at")
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_report_json_and_csv_files(tmp_path):
    out = tmp_path / "report.json"
    csv_file = tmp_path / "series.csv"
    rep = run_report("commuting_diag", grid=8, out=str(out), csv_path=str(csv_file))
    data = json.loads(out.read_text())
    assert data["schema"] == 1
    assert data["model_digest"] == rep.model_digest
    assert len(data["time_grid"]) == 8
    assert all(np.isfinite(x) for x in data["eq6_gap"])
    lines = csv_file.read_text().strip().splitlines()
    assert lines[0].split(",")[0] == "t"
    assert lines[0].split(",")[-1] == "eq6_gap"
    assert len(lines) == 9


def test_report_grids_strictly_increasing():
    rep = run_report("scalar_single_tone", grid=8)
    assert np.all(np.diff(rep.time_grid) > 0)


def test_report_from_model_file(tmp_path):
    path = tmp_path / "m.ham"
    path.write_text("space q 2\nparam g = 0.1\ntone g * sp(q) omega = 4.0\n")
    rep = run_report(str(path), grid=8)
    assert rep.dim == 2
    assert rep.omegas == (4.0,)
