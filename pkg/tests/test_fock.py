import math

import numpy as np
import pytest

from spinboson.fock import (
    BosonOp,
    Cutoff,
    FockBasis,
    adjoint,
    add_scaled,
    build_annihilation,
    build_creation,
    commutator,
    embed_two_mode,
    interior_projector,
    matrix_dump,
    matrix_load,
    mul,
    number_operator,
    spinor_assemble,
    total_occupation_projector,
)


@pytest.fixture
def one_mode():
    return FockBasis(Cutoff(6))


@pytest.fixture
def two_mode():
    return FockBasis(Cutoff(5, 5))


def test_cutoff_validation():
    with pytest.raises(ValueError):
        Cutoff(0)
    with pytest.raises(ValueError):
        Cutoff(4, 0)
    assert Cutoff(4).dim == 5
    assert Cutoff(4, 3).dim == 20


def test_basis_indexing_is_lexicographic_mode_a_major():
    basis = FockBasis(Cutoff(2, 3))
    assert basis.index_of((0, 0)) == 0
    assert basis.index_of((0, 3)) == 3
    assert basis.index_of((1, 0)) == 4
    assert basis.occupation_of(7) == (1, 3)
    # bijection over the whole space
    for i in range(basis.dim):
        assert basis.index_of(basis.occupation_of(i)) == i
    with pytest.raises(ValueError):
        basis.index_of((3, 0))


def test_annihilation_elements_nmax2():
    basis = FockBasis(Cutoff(2))
    a = build_annihilation(basis).matrix
    expected = np.zeros((3, 3))
    expected[0, 1] = 1.0
    expected[1, 2] = math.sqrt(2)
    assert np.array_equal(a, expected)


def test_annihilation_kills_vacuum(one_mode):
    a = build_annihilation(one_mode).matrix
    assert np.array_equal(a @ one_mode.state_vector((0,)), np.zeros(one_mode.dim))


def test_commutator_truncation_artifact_nmax2():
    basis = FockBasis(Cutoff(2))
    a = build_annihilation(basis)
    comm = commutator(a, adjoint(a)).matrix
    assert np.allclose(comm, np.diag([1.0, 1.0, -2.0]), atol=0)


def test_commutator_is_identity_on_interior(one_mode):
    a = build_annihilation(one_mode)
    comm = commutator(a, adjoint(a)).matrix
    proj = interior_projector(one_mode, 1).matrix
    eye = np.eye(one_mode.dim)
    assert np.max(np.abs(proj @ (comm - eye) @ proj)) < 1e-12


def test_number_operator_and_interior_identity(one_mode):
    a = build_annihilation(one_mode).matrix
    ad = build_creation(one_mode).matrix
    n = number_operator(one_mode).matrix
    assert np.array_equal(n, np.diag(np.arange(7.0)).astype(complex))
    assert np.allclose(ad @ a, n, atol=1e-14)
    proj = interior_projector(one_mode, 1).matrix
    defect = ad @ a + np.eye(7) - a @ ad
    assert np.max(np.abs(proj @ defect @ proj)) < 1e-12


def test_cross_mode_commutators_vanish_exactly(two_mode):
    a = build_annihilation(two_mode, "a")
    b = build_annihilation(two_mode, "b")
    assert np.max(np.abs(commutator(a, b).matrix)) == 0.0
    assert np.max(np.abs(commutator(a, adjoint(b)).matrix)) == 0.0


def test_adjoint_is_involution(two_mode):
    a = build_annihilation(two_mode, "a")
    assert np.array_equal(adjoint(adjoint(a)).matrix, a.matrix)


def test_mul_add_scaled_dimension_mismatch(one_mode, two_mode):
    a1 = build_annihilation(one_mode)
    a2 = build_annihilation(two_mode, "a")
    with pytest.raises(ValueError):
        mul(a1, a2)
    with pytest.raises(ValueError):
        add_scaled(a1, 2.0, a2)
    with pytest.raises(ValueError):
        commutator(a1, a2)


def test_embed_two_mode_actions():
    basis = FockBasis(Cutoff(3, 4))
    single_a = build_annihilation(FockBasis(Cutoff(3)))
    a = embed_two_mode(single_a, basis, "a")
    out = a.matrix @ basis.state_vector((1, 3))
    assert np.allclose(out, basis.state_vector((0, 3)), atol=0)

    single_b = build_annihilation(FockBasis(Cutoff(4)))
    bd = embed_two_mode(adjoint(single_b), basis, "b")
    out = bd.matrix @ basis.state_vector((1, 3))
    assert np.allclose(out, 2.0 * basis.state_vector((1, 4)), atol=1e-15)

    comm = a.matrix @ bd.matrix - bd.matrix @ a.matrix
    assert np.max(np.abs(comm)) == 0.0


def test_embed_cutoff_mismatch():
    basis = FockBasis(Cutoff(3, 4))
    wrong = build_annihilation(FockBasis(Cutoff(5)))
    with pytest.raises(ValueError):
        embed_two_mode(wrong, basis, "a")
    with pytest.raises(ValueError):
        embed_two_mode(wrong, FockBasis(Cutoff(5)), "a")


def test_unknown_mode_on_one_mode_basis(one_mode):
    with pytest.raises(ValueError):
        build_annihilation(one_mode, "b")


def test_spinor_assemble_sigma0_alone():
    h0 = np.zeros((1, 1), dtype=complex)
    z = np.zeros((1, 1), dtype=complex)
    spinor = spinor_assemble(h0, 1.0, z, z)
    assert np.array_equal(spinor.full, np.array([[-1.0, 0.0], [0.0, 1.0]]))


def test_spinor_assemble_rwa_ladder_blocks(one_mode):
    a = build_annihilation(one_mode).matrix
    spinor = spinor_assemble(np.zeros_like(a), 0.0, a, a.conj().T)
    assert np.array_equal(spinor.block(0, 1), a.real)
    assert np.array_equal(spinor.block(1, 0), a.conj().T.real)
    assert np.max(np.abs(spinor.block(0, 0))) == 0.0


@pytest.mark.parametrize(
    "beta,conjugate,hermitian",
    [(0.5, True, True), (0.5, False, False), (0.5 + 0.2j, True, False)],
)
def test_spinor_hermiticity(one_mode, beta, conjugate, hermitian):
    a = build_annihilation(one_mode).matrix
    upper = a + 0.3j * (a @ a)
    lower = upper.conj().T if conjugate else upper
    spinor = spinor_assemble(np.zeros_like(a), beta, upper, lower)
    assert (spinor.hermiticity_defect() < 1e-14) == hermitian


def test_spinor_assemble_shape_mismatch(one_mode, two_mode):
    a1 = build_annihilation(one_mode).matrix
    a2 = build_annihilation(two_mode, "a").matrix
    with pytest.raises(ValueError):
        spinor_assemble(a1, 0.0, a2, a1)


def test_interior_projector_examples():
    basis = FockBasis(Cutoff(3))
    assert np.array_equal(interior_projector(basis, 0).matrix, np.eye(4, dtype=complex))
    assert np.array_equal(interior_projector(basis, 1).matrix, np.diag([1.0, 1, 1, 0]).astype(complex))
    proj = interior_projector(basis, 1).matrix
    a = build_annihilation(basis)
    sandwiched = proj @ commutator(a, adjoint(a)).matrix @ proj
    assert np.array_equal(sandwiched, proj)
    with pytest.raises(ValueError):
        interior_projector(basis, -1)


def test_total_occupation_projector(two_mode):
    proj = total_occupation_projector(two_mode, 3)
    kept = [i for i in range(two_mode.dim) if proj[i, i] == 1.0]
    assert all(sum(two_mode.occupation_of(i)) <= 3 for i in kept)
    dropped = [i for i in range(two_mode.dim) if proj[i, i] == 0.0]
    assert all(sum(two_mode.occupation_of(i)) > 3 for i in dropped)


def test_matrix_dump_roundtrip():
    mat = np.array([[1.0 + 2.0j, 0.0], [-0.5j, 3.0]])
    dumped = matrix_dump(mat)
    assert dumped[0][0] == [1.0, 2.0]
    assert np.array_equal(matrix_load(dumped), mat)


def test_boson_op_labels(one_mode):
    a = build_annihilation(one_mode)
    ad = adjoint(a)
    assert isinstance(a, BosonOp)
    assert ad.label.endswith("†")
    assert adjoint(ad).label == a.label
