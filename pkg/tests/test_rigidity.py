import numpy as np
import pytest

from stressdesign import (
    InvalidArgumentError,
    build_problem,
    design,
    random_generic,
    solve_p1,
    spectrum_report,
    verify_urf,
    assemble_stress,
)

from .conftest import SQUARE_Q

QQ = np.outer(SQUARE_Q, SQUARE_Q)


def test_square_stress_certifies(square):
    cert = verify_urf(QQ, square)
    assert cert.passed and cert.rank == 1
    np.testing.assert_allclose(cert.spectrum, [0, 0, 0, 4], atol=1e-12)
    assert cert.edges_effective == 6
    assert cert.lambda_min_nonzero == pytest.approx(4.0)
    assert cert.condition_number == pytest.approx(1.0)


def test_zero_stress_fails(square):
    cert = verify_urf(np.zeros((4, 4)), square)
    assert not cert.passed and not cert.rank_ok


def test_complete_laplacian_fails_nullspace(square):
    lap = 4 * np.eye(4) - np.ones((4, 4))
    # square is centred, so L P^T = 4 P^T
    np.testing.assert_allclose(lap @ square.positions.T, 4 * square.positions.T)
    cert = verify_urf(lap, square)
    assert cert.psd_ok and not cert.nullspace_ok and not cert.passed


def test_indefinite_stress_fails_psd(square):
    cert = verify_urf(-QQ, square)
    assert not cert.psd_ok and not cert.passed


def test_shape_mismatch(square):
    with pytest.raises(InvalidArgumentError):
        verify_urf(np.eye(5), square)


@pytest.mark.parametrize("c", [1e-3, 0.7, 250.0])
def test_certificate_scale_invariant(square, c):
    a = verify_urf(QQ, square)
    b = verify_urf(c * QQ, square)
    assert (a.psd_ok, a.rank_ok, a.nullspace_ok) == (b.psd_ok, b.rank_ok, b.nullspace_ok)
    assert b.condition_number == pytest.approx(a.condition_number)


def test_spectrum_report_square():
    rep = spectrum_report(QQ, 2)
    assert rep.lambda_min_nonzero == pytest.approx(4.0)
    assert rep.condition_number == pytest.approx(1.0)
    assert rep.rigid


def test_spectrum_report_non_rigid():
    rep = spectrum_report(np.zeros((5, 5)), 2)
    assert rep.condition_number == np.inf and not rep.rigid


def test_dense_decagon_report(decagon):
    d = design(decagon, alpha=5.0)
    rep = spectrum_report(d.stress_normalized, 2)
    assert rep.lambda_min_nonzero == pytest.approx(1.0, abs=0.05)
    assert 1.0 <= rep.condition_number <= 1.05
    assert d.certificate.passed and not d.certificate.generic_assumed


@pytest.mark.parametrize("seed", range(3))
def test_feasible_designs_certify(seed):
    cfg = random_generic(7, 2, seed)
    prob = build_problem(cfg)
    w, report = solve_p1(prob)
    assert report.feasibility.satisfied(prob.gamma, prob.beta)
    omega = assemble_stress(prob.ordering, w)
    cert = verify_urf(omega, cfg, generic=True)
    assert cert.passed and cert.generic_assumed
    assert cert.condition_number >= 1.0
