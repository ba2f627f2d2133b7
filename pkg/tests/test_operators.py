import numpy as np
import pytest

import oracles
from hardylab.inner import InnerFunction1D, InnerFunctionProd
from hardylab.operators import (
    Subspace,
    TruncationError,
    compress_shift,
    is_doubly_commuting,
    is_invariant,
    monomial_exponent,
    mult_op,
    orthonormalize,
    principal_subspace,
    shift_op,
    wandering_generator,
)
from hardylab.space import BoxTruncation, HardyVector, interior_mask

z = InnerFunction1D.monomial


def coord(caps, pred):
    s = BoxTruncation(caps)
    return Subspace.coordinate(s, [k for k in oracles.box(caps) if pred(k)])


def test_mult_by_z_is_truncated_shift():
    m = mult_op(z(1), 0, BoxTruncation((2,))).dense()
    assert np.array_equal(m, np.eye(3, k=-1))


def test_mult_by_blaschke_first_column():
    m = mult_op(InnerFunction1D(1.0, (0.5,)), 0, BoxTruncation((2,))).dense()
    assert np.allclose(m[:, 0], [-0.5, 0.75, 0.375], rtol=1e-15, atol=0)


def test_mult_by_one_is_identity():
    s = BoxTruncation((2, 3))
    assert np.array_equal(mult_op(z(0), 1, s).dense(), np.eye(s.dim))


def test_mult_slot_errors():
    s = BoxTruncation((2, 2))
    with pytest.raises(IndexError):
        mult_op(z(1), 2, s)
    with pytest.raises(IndexError):
        shift_op(2, s)


def test_shift_matches_oracle():
    caps = (2, 3, 1)
    for i in range(3):
        assert np.array_equal(shift_op(i, BoxTruncation(caps)).dense(), oracles.shift_matrix(caps, i))


def test_shift_examples():
    s = BoxTruncation((3, 3))
    e00 = HardyVector.basis(s, (0, 0))
    m1, m2 = shift_op(0, s), shift_op(1, s)
    assert m1 @ e00 == HardyVector.basis(s, (1, 0))
    assert m1 @ (m2 @ e00) == HardyVector.basis(s, (1, 1)) == m2 @ (m1 @ e00)
    for k in range(4):
        assert np.count_nonzero(m1.adjoint() @ HardyVector.basis(s, (0, k)).coeffs) == 0


def test_adjoint_contract():
    rng = np.random.default_rng(1)
    s = BoxTruncation((3, 2))
    a = mult_op(InnerFunctionProd((InnerFunction1D(1j, (0.3,)), z(1))), (0, 1), s)
    v = rng.normal(size=s.dim) + 1j * rng.normal(size=s.dim)
    w = rng.normal(size=s.dim) + 1j * rng.normal(size=s.dim)
    assert np.isclose(np.vdot(a.matrix @ v, w), np.vdot(v, a.adjoint().matrix @ w), rtol=1e-14)


def test_composition_adds_margins():
    s = BoxTruncation((4, 4))
    c = shift_op(0, s) @ shift_op(1, s)
    assert c.margins == (1, 1)
    assert c.adjoint().margins == (0, 0)


def test_orthonormalize_examples():
    s = BoxTruncation((1,))
    e0, e1 = HardyVector.basis(s, (0,)), HardyVector.basis(s, (1,))
    assert orthonormalize([e0, e0]).rank == 1
    sub = orthonormalize([e0 + e1, e0 - e1])
    assert sub.rank == 2 and np.allclose(sub.projection, np.eye(2))
    assert orthonormalize([], space=s).rank == 0


def test_orthonormalize_random_overcomplete():
    rng = np.random.default_rng(2)
    s = BoxTruncation((4, 4))
    sub = orthonormalize(rng.normal(size=(25, 50)), space=s)
    assert sub.rank <= 25
    p = sub.projection
    assert np.max(np.abs(p @ p - p)) <= 1e-10
    assert np.max(np.abs(sub.frame.conj().T @ sub.frame - np.eye(sub.rank))) <= 1e-11


def test_invariance_examples():
    assert is_invariant(coord((4, 4), lambda k: k[0] >= 1)).max_residual == 0
    assert not is_invariant(coord((4, 4), lambda k: k == (0, 1)))
    assert is_invariant(coord((4, 4), lambda k: k != (0, 0))).max_residual == 0


def test_invariance_empty_mask():
    with pytest.raises(TruncationError, match="truncation too small"):
        is_invariant(coord((2, 2), lambda k: True), mask=interior_mask(BoxTruncation((2, 2)), (3, 0)))


def test_compressed_shift_examples():
    s = BoxTruncation((3, 3))
    full = Subspace.full(s)
    assert np.array_equal(compress_shift(full, 0).matrix, shift_op(0, s).dense())
    assert compress_shift(Subspace.zero(s), 1).matrix.shape == (0, 0)


def test_compressed_shift_on_z1_h2():
    # z1 H2 is the image of an isometry, so R_{z1} is a copy of M_{z1} one row short
    s = BoxTruncation((4, 2))
    sub = coord((4, 2), lambda k: k[0] >= 1)
    r = compress_shift(sub, 0).matrix
    small = shift_op(0, BoxTruncation((3, 2))).dense()
    assert np.allclose(np.sort(np.linalg.svd(r, compute_uv=False)), np.sort(np.linalg.svd(small, compute_uv=False)))


def test_doubly_commuting_principal():
    assert is_doubly_commuting(coord((5, 5), lambda k: k[0] >= 2))
    prod = principal_subspace(InnerFunctionProd.monomial((1, 1)), BoxTruncation((4, 4)))
    assert is_doubly_commuting(prod).max_residual <= 1e-12


def test_doubly_commuting_fails_for_punctured_space():
    res = is_doubly_commuting(coord((6, 6), lambda k: k != (0, 0)))
    assert not res and res.max_residual >= 0.5


def test_doubly_commuting_brute_force_on_antidiagonal_vector():
    # R1 R2* - R2* R1 applied to e01 - e10 computed on dense matrices built from the oracle
    caps = (6, 6)
    keep = [k for k in oracles.box(caps) if k != (0, 0)]
    idx = oracles.box(caps)
    f = np.zeros((len(idx), len(keep)))
    for c, k in enumerate(keep):
        f[idx.index(k), c] = 1
    r1 = f.T @ oracles.shift_matrix(caps, 0) @ f
    r2 = f.T @ oracles.shift_matrix(caps, 1) @ f
    x = f.T @ (np.eye(len(idx))[:, idx.index((0, 1))] - np.eye(len(idx))[:, idx.index((1, 0))])
    assert np.linalg.norm((r1 @ r2.T - r2.T @ r1) @ x) >= 0.5


def test_wandering_examples():
    w = wandering_generator(coord((4, 4), lambda k: k[0] >= 2))
    assert w.kind == "generator" and monomial_exponent(w.generator) == (2, 0)
    assert np.array_equal(w.generator.coeffs, HardyVector.basis(BoxTruncation((4, 4)), (2, 0)).coeffs)
    w = wandering_generator(coord((4, 4), lambda k: k != (0, 0)))
    assert w.kind == "rank" and w.rank == 2
    space = BoxTruncation((4, 4))
    diag = np.real(np.diag(Subspace(space, w.frame).projection))
    assert set(np.flatnonzero(diag > 0.5)) == {space.index_of((1, 0)), space.index_of((0, 1))}
    w = wandering_generator(coord((4, 4), lambda k: min(k) >= 1))
    assert monomial_exponent(w.generator) == (1, 1)
    assert wandering_generator(Subspace.zero(BoxTruncation((2, 2)))).kind == "zero"


def test_wandering_generator_of_blaschke_product():
    s = BoxTruncation((30, 2))
    f = InnerFunctionProd((InnerFunction1D(1.0, (0.3,)), z(1)))
    w = wandering_generator(principal_subspace(f, s, order=20))
    assert w.kind == "generator"
    expect = np.kron(f.factors[1].taylor_coeffs(2), f.factors[0].taylor_coeffs(30))
    expect = expect / np.linalg.norm(expect)
    # sign convention: first nonzero coefficient positive real
    assert abs(abs(np.vdot(expect, w.generator.coeffs)) - 1) <= 1e-9
    first = w.generator.coeffs[np.flatnonzero(np.abs(w.generator.coeffs) > 1e-12)[0]]
    assert first.real > 0 and abs(first.imag) <= 1e-14


def test_invariance_agrees_with_oracle_small_boxes():
    rng = np.random.default_rng(3)
    for caps in [(3, 3), (1, 2, 1), (15,), (2, 4)]:
        pts = oracles.box(caps)
        for _ in range(25):
            keep = {k for k in pts if rng.random() < 0.5}
            sub = Subspace.coordinate(BoxTruncation(caps), sorted(keep, key=pts.index))
            res = is_invariant(sub)
            bad = oracles.monomial_invariant(keep, caps, (1,) * len(caps))
            assert bool(res) == (not bad)
            assert res.max_residual == (1.0 if bad else 0.0)
