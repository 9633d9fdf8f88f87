import numpy as np
import pytest
from hypothesis import given, strategies as st

from rbsqueeze.pseudospin import (OperatorSet, alignment_from_spin1, build_alignment_operators,
                                  coherent_state_moments, commutator)

OPS = build_alignment_operators()
LEVI = {("x", "y"): "z", ("y", "z"): "x", ("z", "x"): "y"}


def test_eq4_action():
    up, zero = np.array([0, 0, 1]), np.array([0, 1, 0])
    np.testing.assert_array_equal(OPS.Tx @ up, [1, 0, 0])
    np.testing.assert_array_equal(OPS.Fz @ zero, [0, 0, 0])


def test_matches_alignment_tensor_definition():
    ref = alignment_from_spin1()
    for a, b in ((OPS.Tx, ref.Tx), (OPS.Ty, ref.Ty), (OPS.Fz, ref.Fz)):
        np.testing.assert_allclose(a, b, atol=1e-15)


def test_hermitian_and_m0_decoupled():
    for M in (OPS.Tx, OPS.Ty, OPS.Fz):
        assert np.abs(M - M.conj().T).max() <= 1e-15
    for M in (OPS.Tx, OPS.Ty, OPS.Jx, OPS.Jy, OPS.Jz):
        assert not M[1].any() and not M[:, 1].any()


def test_restricted_block_is_spin_half():
    for J in OPS.restricted():
        np.testing.assert_allclose(np.linalg.eigvalsh(J), [-0.5, 0.5], atol=1e-15)


def test_cyclic_commutators():
    J = dict(zip("xyz", OPS.pseudospin()))
    for (i, j), k in LEVI.items():
        assert np.abs(commutator(J[i], J[j]) - 1j * J[k]).max() <= 1e-15
        assert np.abs(commutator(J[j], J[i]) + 1j * J[k]).max() <= 1e-15
        assert not commutator(J[i], J[i]).any()


def test_commutator_shape_mismatch():
    with pytest.raises(ValueError):
        commutator(np.eye(3), np.eye(2))


def test_json_roundtrip():
    text = OPS.to_json()
    back = OperatorSet.from_json(text)
    for a, b in ((OPS.Tx, back.Tx), (OPS.Ty, back.Ty), (OPS.Fz, back.Fz)):
        np.testing.assert_array_equal(a, b)


def test_json_golden_ty():
    ty = OperatorSet.from_json(OPS.to_json()).Ty
    # i|-><+| sits at row m=-1, column m=+1
    assert ty[0, 2] == 1j and ty[2, 0] == -1j


@pytest.mark.parametrize("N,mx,vz", [(1, 0.5, 0.25), (100, 50, 25), (4_000_000, 2e6, 1e6)])
def test_coherent_moments(N, mx, vz):
    m = coherent_state_moments(N)
    assert m.mean_Jx == pytest.approx(mx, rel=1e-15)
    assert m.var_Jz == pytest.approx(vz, rel=1e-15)
    assert abs(m.mean_Jy) <= 1e-15 * N and abs(m.mean_Jz) <= 1e-15 * N


@given(st.integers(1, 10**9))
def test_coherent_state_saturates_heisenberg(N):
    m = coherent_state_moments(N)
    assert m.var_Jy * m.var_Jz == pytest.approx((m.mean_Jx / 2) ** 2, rel=1e-12)


def test_coherent_moments_rejects_empty():
    with pytest.raises(ValueError):
        coherent_state_moments(0)
