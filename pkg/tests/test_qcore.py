import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ehybrid.errors import ContractError, DimensionError, ShapeError
from ehybrid.hamiltonians import build_H_read
from ehybrid.params import TWO_PI, CircuitParams
from ehybrid.qcore import (
    HilbertOp,
    commutator,
    eig_hermitian,
    embed,
    identity,
    ladder,
    number,
    product_labels,
    qubit_ops,
    tensor,
)


def test_ladder_dim2():
    a, ad = ladder(2)
    np.testing.assert_array_equal(a.data, [[0, 1], [0, 0]])
    np.testing.assert_array_equal(ad.data, [[0, 0], [1, 0]])


def test_number_spectrum_dim4():
    np.testing.assert_allclose(np.linalg.eigvalsh(number(4).data), [0, 1, 2, 3], atol=1e-15)


def test_truncated_commutator_dim10():
    a, ad = ladder(10)
    c = commutator(a, ad).data
    assert np.abs(c[:9, :9] - np.eye(9)).max() <= 1e-12
    assert c[9, 9] == pytest.approx(-9)


@pytest.mark.parametrize("dim", [0, 1, 2.5])
def test_ladder_rejects_small_dims(dim):
    with pytest.raises(DimensionError):
        ladder(dim)


def test_operator_is_immutable():
    a, _ = ladder(3)
    with pytest.raises(ValueError):
        a.data[0, 1] = 5


def test_shape_validation():
    with pytest.raises(ShapeError):
        HilbertOp((2, 2), np.eye(3))
    with pytest.raises(DimensionError):
        HilbertOp((0,), np.eye(0))
    with pytest.raises(ShapeError):
        ladder(2)[0] + ladder(3)[0]


def test_embed_sigma_z_on_excited_state():
    sz = embed(qubit_ops()[0], 0, [2, 3])
    state = np.kron([0, 1], [0, 1, 0])
    np.testing.assert_allclose(sz.data @ state, state)


def test_embed_number_multiplicity():
    n = embed(number(3), 1, [2, 3])
    np.testing.assert_allclose(np.linalg.eigvalsh(n.data), [0, 0, 1, 1, 2, 2], atol=1e-14)


def test_distinct_factors_commute():
    a = embed(ladder(3)[0], 0, [3, 3])
    c = embed(ladder(3)[0], 1, [3, 3])
    assert np.abs(commutator(a, c).data).max() <= 1e-14


def test_embed_errors():
    with pytest.raises(ShapeError):
        embed(number(3), 0, [2, 3])
    with pytest.raises(ShapeError):
        embed(number(3), 2, [2, 3])


def test_product_label_order_matches_kron():
    dims = (2, 3)
    labels = product_labels(dims)
    n0, n1 = embed(number(2), 0, dims), embed(number(3), 1, dims)
    for k, (i, j) in enumerate(labels):
        assert n0.data[k, k].real == pytest.approx(i) and n1.data[k, k].real == pytest.approx(j)


def test_diagonal_eigen_assignment():
    res = eig_hermitian(HilbertOp((3,), np.diag([0.0, 5.0, 2.0])), ["a", "b", "c"])
    np.testing.assert_allclose(res.eigenvalues, [0, 2, 5])
    assert res.energy("a") == 0 and res.energy("b") == 5 and res.energy("c") == 2
    assert not res.ambiguous


def test_resonant_exchange_splitting():
    g = 0.37
    H = HilbertOp((2,), np.array([[1.0, g], [g, 1.0]]))
    w = eig_hermitian(H).eigenvalues
    assert (w[1] - w[0]) == pytest.approx(2 * g, rel=1e-10)


def test_equal_hybridization_is_ambiguous():
    H = HilbertOp((2,), np.array([[1.0, 0.1], [0.1, 1.0]]))
    res = eig_hermitian(H)
    assert res.is_ambiguous((0,)) and res.is_ambiguous((1,))


def test_readout_hamiltonian_far_detuned_assignments():
    p = CircuitParams.table1(TWO_PI * 900e6)
    res = eig_hermitian(build_H_read(p, 5, 5))
    assert not res.ambiguous
    for lab in product_labels((5, 5, 2)):
        if lab[1] == 0:
            assert res.overlaps[lab] > 0.99


def test_non_hermitian_rejected():
    with pytest.raises(ContractError):
        eig_hermitian(HilbertOp((2,), np.array([[0.0, 1.0], [0.0, 0.0]])))


def _hermitian(n):
    return arrays(np.float64, (2, n, n), elements=st.floats(-10, 10)).map(
        lambda x: HilbertOp((n,), (x[0] + x[0].T) + 1j * (x[1] - x[1].T))
    )


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 8).flatmap(_hermitian))
def test_reconstruction_and_unitarity(H):
    res = eig_hermitian(H)
    V, w = res.eigenvectors, res.eigenvalues
    scale = max(np.abs(H.data).max(), 1e-300)
    assert np.abs(H.data - V @ np.diag(w) @ V.conj().T).max() <= 1e-9 * scale + 1e-300
    assert np.abs(V.conj().T @ V - np.eye(len(w))).max() <= 1e-10
    assert np.all(np.diff(w) >= 0)
    np.testing.assert_allclose(np.linalg.norm(V, axis=0), 1, atol=1e-10)


@settings(max_examples=30, deadline=None)
@given(
    st.lists(st.integers(1, 4), min_size=1, max_size=3).flatmap(
        lambda dims: st.tuples(st.just(dims), st.integers(0, len(dims) - 1))
    ),
    st.floats(-5, 5),
)
def test_embed_trace_law(dims_slot, c):
    dims, slot = dims_slot
    d = dims[slot]
    op = HilbertOp((d,), c * np.arange(1, d * d + 1).reshape(d, d))
    rest = int(np.prod(dims)) // d
    assert embed(op, slot, dims).trace() == pytest.approx(rest * op.trace())


def test_tensor_and_identity():
    t = tensor(identity((2,)), number(3))
    assert t.dims == (2, 3)
    np.testing.assert_allclose(t.data, embed(number(3), 1, (2, 3)).data)
