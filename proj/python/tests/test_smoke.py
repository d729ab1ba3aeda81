import numpy as np
import pytest

import qsm


def test_reference_values():
    a = np.diag([0.5, 0.5]).astype(complex)
    b = np.diag([1 / 3, 2 / 3]).astype(complex)
    assert qsm.fidelity(a, b) == pytest.approx(0.985598559653488780875, rel=1e-13)
    assert qsm.trace_distance(a, b) == pytest.approx(1 / 3, rel=1e-13)
    w, v = qsm.eigh(np.array([[0, 1], [1, 0]], dtype=complex))
    np.testing.assert_allclose(w, [-1.0, 1.0], atol=1e-14)
    root = qsm.sqrtm(np.diag([4.0, 9.0]).astype(complex))
    np.testing.assert_allclose(root, np.diag([2.0, 3.0]), atol=1e-14)


def test_orthogonal_pure_states():
    p = 0.5 * np.array([[1, -1j], [1j, 1]])
    q = 0.5 * np.array([[1, 1j], [-1j, 1]])
    assert qsm.trace_distance(p, q) == pytest.approx(2.0)
    assert qsm.are_orthogonal(p, q)


def test_reconstruct_hidden_antiunitary():
    u = qsm.random_unitary(4, seed=3)
    truth = lambda a: u @ a.conj() @ u.conj().T
    r = qsm.reconstruct(truth, 4)
    assert r["kind"] == "antiunitary"
    assert r["residual"] < 1e-6
    assert abs(np.trace(r["U"].conj().T @ u)) / 4 == pytest.approx(1.0, abs=1e-8)
    assert qsm.check_isometry(truth, 4, metric="trace", pairs=50) < 1e-8


def test_depolarizing_is_rejected():
    depolarize = lambda a: 0.5 * a + 0.5 * np.trace(a).real * np.eye(2) / 2
    with pytest.raises(qsm.QsmError):
        qsm.reconstruct(depolarize, 2)
    assert qsm.check_isometry(depolarize, 2, metric="bures", pairs=50) > 0.1


def test_bad_input_raises():
    with pytest.raises(qsm.QsmError):
        qsm.fidelity(np.diag([1.0, -1.0]).astype(complex), np.eye(2, dtype=complex))


def test_verification_report():
    report = qsm.run_verification("ortho-eq", [1, 2], samples=20)
    assert report["schema"] == "qsm-report/1"
    assert report["pass"]
    assert [r["dim"] for r in report["reports"]] == [1, 2]
    assert "lemma1" in qsm.suite_ids()
