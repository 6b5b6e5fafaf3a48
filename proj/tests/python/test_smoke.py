import json

import numpy as np
import pytest

import ncbloch


def test_clifford_relations():
    gens, grading = ncbloch.clifford(4)
    assert len(gens) == 4
    for i, a in enumerate(gens):
        for j, b in enumerate(gens):
            expect = 2 * np.eye(4) if i == j else np.zeros((4, 4))
            np.testing.assert_allclose(a @ b + b @ a, expect, atol=1e-12)
        np.testing.assert_allclose(a @ grading + grading @ a, 0, atol=1e-12)
    assert ncbloch.clifford(3)[1] is None


def test_hamiltonian_is_hermitian_and_matches_bloch():
    H = ncbloch.hamiltonian("qwz", 1.0, 6, strength=0.5, seed=3)
    assert H.shape == (72, 72)
    np.testing.assert_allclose(H, H.conj().T, atol=1e-14)
    h = ncbloch.bloch_hamiltonian("qwz", 0.5, [0.3, -1.2])
    ref = np.array([[0.5 - np.cos(0.3) - np.cos(-1.2), np.sin(0.3) + 1j * np.sin(1.2)],
                    [np.sin(0.3) - 1j * np.sin(1.2), -(0.5 - np.cos(0.3) - np.cos(-1.2))]])
    np.testing.assert_allclose(h, ref, atol=1e-14)


def test_projector():
    P = ncbloch.fermi_projector("ssh", 0.5, 12)
    np.testing.assert_allclose(P @ P, P, atol=1e-12)
    assert np.trace(P).real == pytest.approx(12)


def test_invariants_agree():
    ch = ncbloch.chern_number("qwz", 1.0, 10)
    assert abs(ch.real + 1) < 0.05
    assert ncbloch.kspace_invariant("qwz", 1.0) == -1
    assert ncbloch.fredholm_index("qwz", 1.0, 10, x0=[0.5, 0.5]) == -1
    assert ncbloch.chern_number("ssh", 0.5, 40).real == pytest.approx(-1, abs=1e-6)
    assert ncbloch.kspace_invariant("ssh", 0.5, 200) == -1
    assert ncbloch.cocycle_pairing("ssh", 0.5, 40, x0_grid=4).real == pytest.approx(-1, abs=0.02)


def test_errors_are_raised():
    with pytest.raises(ncbloch.NcblochError, match="fermi-level"):
        ncbloch.chern_number("ssh", 1.0, 8)
    with pytest.raises(ncbloch.NcblochError):
        ncbloch.hamiltonian("kitaev", 1.0, 8)


def test_verify_quick():
    report = ncbloch.verify()
    assert report and all(r["passed"] for r in report)


def test_sweep_records():
    cfg = '[model]\nname = "ssh"\nm = [0.5, 2.0]\nL = 16\n[disorder]\nlambda = 0.3\nrealizations = 2\nseed = 1\n'
    recs = ncbloch.sweep(cfg)
    assert len(recs) == 12
    assert all(r["code_version"] == ncbloch.code_version() for r in recs)
    means = [r for r in recs if r["realization"] == "mean" and r["invariant"] == "chern_odd"]
    assert [r["nearest_integer"] for r in means] == [-1, 0]
    again = ncbloch.sweep_lines(cfg, [], 2)
    assert [json.loads(x) for x in again] == recs
