import numpy as np
import pytest

import oracles
from hardylab.space import (
    BoxTruncation,
    HardyVector,
    SpaceMismatchError,
    enumerate_basis,
    inner_product,
    interior_mask,
    kron_slots,
    tensor_join,
    tensor_split,
)


def test_basis_one_variable():
    assert enumerate_basis(BoxTruncation((2,))) == [(0,), (1,), (2,)]


def test_basis_colex_variable_one_fastest():
    assert enumerate_basis(BoxTruncation((1, 1))) == [(0, 0), (1, 0), (0, 1), (1, 1)]


@pytest.mark.parametrize("caps", [(1, 0, 1), (3, 2), (2, 0, 1, 2)])
def test_basis_matches_oracle_and_count(caps):
    space = BoxTruncation(caps)
    basis = enumerate_basis(space)
    assert basis == oracles.box(caps)
    assert len(basis) == space.dim == int(np.prod([d + 1 for d in caps]))
    for p, k in enumerate(basis):
        assert space.index_of(k) == p


def test_count_for_101_box():
    assert len(enumerate_basis(BoxTruncation((1, 0, 1)))) == 4


def test_bad_caps_rejected():
    with pytest.raises(ValueError):
        BoxTruncation(())
    with pytest.raises(ValueError):
        BoxTruncation((2, -1))


def test_index_outside_box():
    with pytest.raises(KeyError):
        BoxTruncation((2, 2)).index_of((3, 0))


def test_inner_product_examples():
    s = BoxTruncation((1, 1))
    e00, e10, e01 = (HardyVector.basis(s, k) for k in [(0, 0), (1, 0), (0, 1)])
    assert inner_product(e00, e00) == 1
    assert inner_product(e10, e01) == 0
    assert inner_product((1 + 1j) * e00, e00) == 1 - 1j


def test_inner_product_space_mismatch():
    a = HardyVector.basis(BoxTruncation((1, 1)), (0, 0))
    b = HardyVector.basis(BoxTruncation((2, 1)), (0, 0))
    with pytest.raises(SpaceMismatchError):
        inner_product(a, b)


def test_tensor_split_monomial():
    s = BoxTruncation((3, 4))
    grid = tensor_split(HardyVector.basis(s, (2, 3)))
    assert grid[2, 3] == 1
    assert np.count_nonzero(grid) == 1


def test_tensor_roundtrip_and_norm():
    rng = np.random.default_rng(0)
    s = BoxTruncation((3, 2, 2))
    head, tail = s.split(1)
    for _ in range(100):
        v = HardyVector(s, rng.normal(size=s.dim) + 1j * rng.normal(size=s.dim))
        g = tensor_split(v)
        assert tensor_join(g, head, tail) == v
        assert abs(np.linalg.norm(g) - v.norm()) <= 1e-13 * v.norm()


def test_tensor_split_needs_two_variables():
    with pytest.raises(ValueError):
        tensor_split(HardyVector.basis(BoxTruncation((3,)), (1,)))


def test_kron_slots_acts_on_the_right_factor():
    s = BoxTruncation((2, 3))
    head, tail = s.split(1)
    a = np.eye(3, k=-1)
    op = kron_slots(a, np.eye(4))
    v = HardyVector.basis(s, (1, 2))
    out = op @ v.coeffs
    assert out[s.index_of((2, 2))] == 1 and np.count_nonzero(out) == 1


@pytest.mark.parametrize("margins,size", [((0, 0), 25), ((2, 0), 15), ((5, 0), 0)])
def test_interior_mask_sizes(margins, size):
    mask = interior_mask(BoxTruncation((4, 4)), margins)
    assert mask.size == size
    assert mask.empty == (size == 0)


def test_interior_mask_matches_oracle_and_is_monotone():
    s = BoxTruncation((3, 2, 4))
    prev = None
    for m in range(5):
        mask = interior_mask(s, (m, 0, 1))
        assert mask.indices() == oracles.interior(s.caps, (m, 0, 1))
        if prev is not None:
            assert set(mask.indices()) <= set(prev.indices())
        prev = mask
