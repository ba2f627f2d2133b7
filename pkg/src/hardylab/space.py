"""Box-truncated model of the Hardy space over the polydisc.

A :class:`BoxTruncation` with caps ``(d_1, ..., d_n)`` spans the monomials
``z^k`` with ``0 <= k_i <= d_i``.  Coefficient vectors are stored flat in
colexicographic order with variable 1 varying fastest, which is numpy's
Fortran order on an array of shape ``(d_1 + 1, ..., d_n + 1)``.  Every
serialization in the package uses this order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

MultiIndex = tuple[int, ...]


class SpaceMismatchError(ValueError):
    """Raised when two objects live on different truncations."""


@dataclass(frozen=True)
class BoxTruncation:
    caps: tuple[int, ...]

    def __post_init__(self):
        caps = tuple(int(d) for d in self.caps)
        if not caps:
            raise ValueError("a truncation needs at least one variable")
        if any(d < 0 for d in caps):
            raise ValueError(f"degree caps must be non-negative, got {caps}")
        object.__setattr__(self, "caps", caps)

    @property
    def n(self) -> int:
        return len(self.caps)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(d + 1 for d in self.caps)

    @property
    def dim(self) -> int:
        return int(np.prod(self.shape))

    @cached_property
    def exponents(self) -> np.ndarray:
        """Integer array of shape ``(dim, n)``; row ``p`` is the index at position ``p``."""
        grids = np.indices(self.shape).reshape(self.n, -1, order="F")
        return np.ascontiguousarray(grids.T)

    def index_of(self, k: Sequence[int]) -> int:
        k = tuple(int(x) for x in k)
        if len(k) != self.n:
            raise ValueError(f"multi-index {k} has wrong length for n={self.n}")
        if any(x < 0 or x > d for x, d in zip(k, self.caps)):
            raise KeyError(f"multi-index {k} lies outside the box {self.caps}")
        return int(np.ravel_multi_index(k, self.shape, order="F"))

    def contains(self, k: Sequence[int]) -> bool:
        return len(k) == self.n and all(0 <= x <= d for x, d in zip(k, self.caps))

    def split(self, k: int) -> tuple["BoxTruncation", "BoxTruncation"]:
        """Leading ``k`` variables and the remaining ``n - k`` as separate boxes."""
        if not 1 <= k < self.n:
            raise ValueError(f"cannot split {self.n} variables after {k}")
        return BoxTruncation(self.caps[:k]), BoxTruncation(self.caps[k:])

    def __mul__(self, other: "BoxTruncation") -> "BoxTruncation":
        return BoxTruncation(self.caps + other.caps)


def enumerate_basis(space: BoxTruncation) -> list[MultiIndex]:
    return [tuple(int(x) for x in row) for row in space.exponents]


@dataclass(frozen=True, eq=False)
class HardyVector:
    """Element of a truncated Hardy space, stored by its Taylor coefficients."""

    space: BoxTruncation
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex).reshape(-1)
        if c.size != self.space.dim:
            raise ValueError(f"expected {self.space.dim} coefficients, got {c.size}")
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def basis(cls, space: BoxTruncation, k: Sequence[int]) -> "HardyVector":
        c = np.zeros(space.dim, dtype=complex)
        c[space.index_of(k)] = 1.0
        return cls(space, c)

    def coefficient(self, k: Sequence[int]) -> complex:
        return complex(self.coeffs[self.space.index_of(k)])

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def __add__(self, other: "HardyVector") -> "HardyVector":
        _same_space(self.space, other.space)
        return HardyVector(self.space, self.coeffs + other.coeffs)

    def __sub__(self, other: "HardyVector") -> "HardyVector":
        _same_space(self.space, other.space)
        return HardyVector(self.space, self.coeffs - other.coeffs)

    def __rmul__(self, scalar: complex) -> "HardyVector":
        return HardyVector(self.space, scalar * self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, HardyVector):
            return NotImplemented
        return self.space == other.space and np.array_equal(self.coeffs, other.coeffs)

    __hash__ = None


def _same_space(a: BoxTruncation, b: BoxTruncation) -> None:
    if a != b:
        raise SpaceMismatchError(f"truncations differ: {a.caps} vs {b.caps}")


def inner_product(u: HardyVector, v: HardyVector) -> complex:
    """Hardy inner product, conjugate-linear in the first slot."""
    _same_space(u.space, v.space)
    return complex(np.vdot(u.coeffs, v.coeffs))


def tensor_split(v: HardyVector, k: int = 1) -> np.ndarray:
    """Coefficient grid ``G[a, b]`` of ``v`` under H2(D^n) = H2(D^k) (x) H2(D^(n-k)).

    ``a`` is the position of the leading ``k``-index in its own box and ``b``
    the position of the trailing index, so ``v = sum G[a, b] e_a (x) e_b``.
    """
    if v.space.n < 2:
        raise ValueError("tensor_split needs at least two variables")
    head, tail = v.space.split(k)
    return v.coeffs.reshape((head.dim, tail.dim), order="F").copy()


def tensor_join(grid: np.ndarray, head: BoxTruncation, tail: BoxTruncation) -> HardyVector:
    grid = np.asarray(grid, dtype=complex)
    if grid.shape != (head.dim, tail.dim):
        raise ValueError(f"grid shape {grid.shape} does not match ({head.dim}, {tail.dim})")
    return HardyVector(head * tail, grid.reshape(-1, order="F"))


def kron_slots(head_op, tail_op):
    """Matrix of ``head_op (x) tail_op`` in the colex basis of the joined box.

    Variable 1 varies fastest, so the trailing factor is the outer Kronecker
    factor.
    """
    import scipy.sparse as sp

    if sp.issparse(head_op) or sp.issparse(tail_op):
        return sp.kron(tail_op, head_op, format="csr")
    return np.kron(tail_op, head_op)


@dataclass(frozen=True)
class InteriorMask:
    """Indices whose distance to the degree cap is at least ``margins`` in every variable."""

    space: BoxTruncation
    margins: tuple[int, ...]
    positions: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return int(self.positions.size)

    @property
    def empty(self) -> bool:
        return self.positions.size == 0

    def indices(self) -> list[MultiIndex]:
        return [tuple(int(x) for x in self.space.exponents[p]) for p in self.positions]

    def selector(self) -> np.ndarray:
        """Columns of the identity at the mask positions (``dim x size``)."""
        e = np.zeros((self.space.dim, self.size))
        e[self.positions, np.arange(self.size)] = 1.0
        return e

    def describe(self) -> dict:
        return {"margins": list(self.margins), "size": self.size, "dim": self.space.dim}


def interior_mask(space: BoxTruncation, margins: int | Iterable[int] = 1) -> InteriorMask:
    if isinstance(margins, (int, np.integer)):
        margins = (int(margins),) * space.n
    margins = tuple(int(m) for m in margins)
    if len(margins) != space.n:
        raise ValueError(f"need {space.n} margins, got {len(margins)}")
    if any(m < 0 for m in margins):
        raise ValueError("margins must be non-negative")
    limits = np.array(space.caps) - np.array(margins)
    keep = np.all(space.exponents <= limits, axis=1)
    positions = np.flatnonzero(keep)
    positions.setflags(write=False)
    return InteriorMask(space, margins, positions)
