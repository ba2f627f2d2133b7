"""Multiplication operators, subspaces, and the invariance checks built on them.

Every residual is evaluated on an interior mask: only input vectors whose
indices sit at least ``margin`` below the cap are fed in, so that raising
degrees never falls off the box and the finite identities coincide with
the infinite-dimensional ones.  Outputs are never restricted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .inner import InnerFunction1D, InnerFunctionProd
from .space import BoxTruncation, HardyVector, InteriorMask, SpaceMismatchError, interior_mask

TAU_RANK = 1e-9
DEFAULT_TOL = 1e-8
PHASE_TOL = 1e-12


class TruncationError(ValueError):
    """Raised when an interior mask is empty, i.e. the box is too small for the check."""


def _require_mask(space: BoxTruncation, mask: InteriorMask | None, default: int = 1) -> InteriorMask:
    if mask is None:
        mask = interior_mask(space, default)
    if mask.space != space:
        raise SpaceMismatchError("mask belongs to a different truncation")
    if mask.empty:
        raise TruncationError(f"truncation too small: empty interior for margins {mask.margins}")
    return mask


def spectral_norm(a) -> float:
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(scipy.linalg.norm(a, 2))


@dataclass(frozen=True, eq=False)
class LinOp:
    domain: BoxTruncation
    codomain: BoxTruncation
    matrix: sp.csr_matrix
    margins: tuple[int, ...]

    def __post_init__(self):
        m = sp.csr_matrix(self.matrix, dtype=complex)
        if m.shape != (self.codomain.dim, self.domain.dim):
            raise ValueError(f"matrix shape {m.shape} does not fit the truncations")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "margins", tuple(int(x) for x in self.margins))

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def adjoint(self) -> "LinOp":
        return LinOp(self.codomain, self.domain, self.matrix.conj().T.tocsr(), (0,) * self.codomain.n)

    @property
    def H(self) -> "LinOp":
        return self.adjoint()

    def __matmul__(self, other):
        if isinstance(other, LinOp):
            if other.codomain != self.domain:
                raise SpaceMismatchError("operators cannot be composed")
            margins = tuple(a + b for a, b in zip(self.margins, other.margins))
            return LinOp(other.domain, self.codomain, self.matrix @ other.matrix, margins)
        if isinstance(other, HardyVector):
            if other.space != self.domain:
                raise SpaceMismatchError("vector is not in the operator domain")
            return HardyVector(self.codomain, self.matrix @ other.coeffs)
        return self.matrix @ other

    def __add__(self, other: "LinOp") -> "LinOp":
        if (other.domain, other.codomain) != (self.domain, self.codomain):
            raise SpaceMismatchError("operators act between different truncations")
        margins = tuple(max(a, b) for a, b in zip(self.margins, other.margins))
        return LinOp(self.domain, self.codomain, self.matrix + other.matrix, margins)


def kron_chain(mats: Sequence) -> sp.csr_matrix:
    """Kronecker product of per-variable matrices, variable 1 fastest."""
    out = sp.csr_matrix(np.ones((1, 1)))
    for m in mats:
        out = sp.kron(sp.csr_matrix(m), out, format="csr")
    return out


def toeplitz_lower(coeffs: np.ndarray) -> np.ndarray:
    """Lower-triangular Toeplitz matrix with first column ``coeffs``."""
    n = len(coeffs)
    return scipy.linalg.toeplitz(coeffs, np.zeros(n, dtype=complex))


def _factor_margin(f: InnerFunction1D, order: int | None) -> int:
    if f.is_monomial:
        return f.degree
    return int(order) if order is not None else f.truncation_order()


def mult_op(f, slots, space: BoxTruncation, order=None) -> LinOp:
    """Multiplication by ``f`` acting on the variables ``slots`` (0-based).

    For a Blaschke factor the recorded margin is the truncation order: the
    columns at least that far below the cap lose at most ``tail_bound(order)``
    of their mass to the truncation.
    """
    prod = InnerFunctionProd.lift(f)
    if isinstance(slots, (int, np.integer)):
        slots = (int(slots),)
    slots = tuple(int(s) for s in slots)
    if len(slots) != prod.m:
        raise ValueError(f"{prod.m} factors need {prod.m} slots, got {slots}")
    if len(set(slots)) != len(slots) or any(not 0 <= s < space.n for s in slots):
        raise IndexError(f"slots {slots} out of range for {space.n} variables")
    if order is None or isinstance(order, (int, np.integer)):
        order = (order,) * prod.m
    mats: list = [sp.identity(d + 1, dtype=complex, format="csr") for d in space.caps]
    margins = [0] * space.n
    for factor, s, r in zip(prod.factors, slots, order):
        cap = space.caps[s]
        mats[s] = toeplitz_lower(factor.taylor_coeffs(cap))
        margins[s] = _factor_margin(factor, r)
    return LinOp(space, space, kron_chain(mats), tuple(margins))


def shift_op(i: int, space: BoxTruncation) -> LinOp:
    """``M_{z_i}`` for the 0-based variable ``i``."""
    if not 0 <= i < space.n:
        raise IndexError(f"variable {i} out of range for {space.n} variables")
    mats = [sp.identity(d + 1, format="csr") for d in space.caps]
    mats[i] = sp.eye(space.caps[i] + 1, k=-1, format="csr")
    margins = [0] * space.n
    margins[i] = 1
    return LinOp(space, space, kron_chain(mats), tuple(margins))


@dataclass(frozen=True, eq=False)
class Subspace:
    """Subspace of a truncated Hardy space, held as an orthonormal frame."""

    space: BoxTruncation
    frame: np.ndarray = field(repr=False)

    def __post_init__(self):
        f = np.asarray(self.frame, dtype=complex)
        if f.ndim != 2 or f.shape[0] != self.space.dim:
            raise ValueError(f"frame must have {self.space.dim} rows")
        f = f.copy()
        f.setflags(write=False)
        object.__setattr__(self, "frame", f)

    @property
    def rank(self) -> int:
        return self.frame.shape[1]

    @cached_property
    def projection(self) -> np.ndarray:
        return self.frame @ self.frame.conj().T

    def project(self, x: np.ndarray) -> np.ndarray:
        return self.frame @ (self.frame.conj().T @ x)

    def pullback(self, mask: InteriorMask) -> np.ndarray:
        """Frame coordinates of the mask basis vectors projected into the subspace."""
        return self.frame[mask.positions, :].conj().T

    @classmethod
    def zero(cls, space: BoxTruncation) -> "Subspace":
        return cls(space, np.zeros((space.dim, 0), dtype=complex))

    @classmethod
    def full(cls, space: BoxTruncation) -> "Subspace":
        return cls(space, np.eye(space.dim, dtype=complex))

    @classmethod
    def coordinate(cls, space: BoxTruncation, indices: Iterable) -> "Subspace":
        """Span of the monomials listed by multi-index or position."""
        positions = sorted({p if isinstance(p, (int, np.integer)) else space.index_of(p) for p in indices})
        frame = np.zeros((space.dim, len(positions)), dtype=complex)
        frame[positions, np.arange(len(positions))] = 1.0
        return cls(space, frame)

    @cached_property
    def coordinate_support(self) -> np.ndarray | None:
        """Positions spanned when the frame is a set of unit basis vectors, else None."""
        nz = self.frame != 0
        if not np.all(nz.sum(axis=0) == 1):
            return None
        rows = np.argmax(nz, axis=0)
        if not np.all(self.frame[rows, np.arange(self.rank)] == 1):
            return None
        return rows

    def complement(self) -> "Subspace":
        """Orthogonal complement inside the box."""
        support = self.coordinate_support
        if support is not None:
            rest = np.setdiff1d(np.arange(self.space.dim), support)
            return Subspace.coordinate(self.space, rest)
        return orthonormalize(np.eye(self.space.dim) - self.projection, space=self.space)

    def __repr__(self):
        return f"Subspace(caps={self.space.caps}, rank={self.rank})"


def _as_matrix(vectors, space: BoxTruncation | None):
    if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
        if space is None:
            raise ValueError("a raw matrix needs an explicit space")
        return space, np.asarray(vectors, dtype=complex)
    vectors = list(vectors)
    if not vectors:
        if space is None:
            raise ValueError("cannot infer the space of an empty vector list")
        return space, np.zeros((space.dim, 0), dtype=complex)
    sp0 = vectors[0].space
    for v in vectors:
        if v.space != sp0:
            raise SpaceMismatchError("vectors live on different truncations")
    if space is not None and space != sp0:
        raise SpaceMismatchError("vectors do not live on the given space")
    return sp0, np.column_stack([v.coeffs for v in vectors])


def orthonormalize(vectors, tau_rank: float = TAU_RANK, space: BoxTruncation | None = None) -> Subspace:
    """Orthonormal frame for the span of ``vectors`` (HardyVectors or matrix columns).

    Spans of monomials and already-orthonormal column sets are kept exactly;
    everything else goes through an SVD that discards singular values below
    ``tau_rank`` times the largest.
    """
    space, a = _as_matrix(vectors, space)
    if a.shape[1] == 0 or not np.any(a):
        return Subspace.zero(space)
    a = a[:, np.any(a != 0, axis=0)]
    nz = a != 0
    if np.all(nz.sum(axis=0) == 1):
        return Subspace.coordinate(space, np.argmax(nz, axis=0))
    gram = a.conj().T @ a
    if np.max(np.abs(gram - np.eye(a.shape[1]))) <= 1e-14:
        return Subspace(space, a)
    u, s, _ = scipy.linalg.svd(a, full_matrices=False)
    r = int(np.sum(s > tau_rank * s[0]))
    return Subspace(space, u[:, :r])


def same_subspace(a: Subspace, b: Subspace, mask: InteriorMask | None = None) -> float:
    """``||(P_a - P_b) E_mask||``; the whole box when no mask is given."""
    if a.space != b.space:
        raise SpaceMismatchError("subspaces live on different truncations")
    if mask is None:
        cols = np.eye(a.space.dim)
    else:
        cols = mask.selector()
    return spectral_norm(a.project(cols) - b.project(cols))


@dataclass(frozen=True)
class CheckResult:
    holds: bool
    residuals: dict
    mask: dict

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)

    def __bool__(self):
        return self.holds


def is_invariant(S: Subspace, tol: float = DEFAULT_TOL, mask: InteriorMask | None = None) -> CheckResult:
    """Residuals ``||(I - P_S) M_{z_i} P_S E_mask||`` for every variable."""
    mask = _require_mask(S.space, mask)
    residuals = {}
    g = S.pullback(mask)
    for i in range(S.space.n):
        y = shift_op(i, S.space) @ S.frame
        z = y - S.project(y)
        residuals[f"z{i + 1}"] = spectral_norm(z @ g)
    holds = max(residuals.values()) <= tol
    return CheckResult(holds, residuals, mask.describe())


@dataclass(frozen=True, eq=False)
class CompressedShift:
    subspace: Subspace
    i: int
    matrix: np.ndarray


def compress_shift(S: Subspace, i: int) -> CompressedShift:
    """``R_{z_i}`` in frame coordinates (0-based ``i``)."""
    m = S.frame.conj().T @ (shift_op(i, S.space) @ S.frame)
    return CompressedShift(S, i, np.asarray(m))


def is_doubly_commuting(S: Subspace, tol: float = DEFAULT_TOL, mask: InteriorMask | None = None) -> CheckResult:
    """Residuals of ``R_i R_j^* - R_j^* R_i`` on the pulled-back mask, all ordered pairs ``i != j``."""
    if S.space.n < 2:
        raise ValueError("doubly commuting needs at least two variables")
    mask = _require_mask(S.space, mask)
    g = S.pullback(mask)
    r = [compress_shift(S, i).matrix for i in range(S.space.n)]
    residuals = {}
    for i in range(S.space.n):
        for j in range(S.space.n):
            if i == j:
                continue
            d = r[i] @ r[j].conj().T - r[j].conj().T @ r[i]
            residuals[f"z{i + 1},z{j + 1}"] = spectral_norm(d @ g)
    holds = max(residuals.values()) <= tol
    return CheckResult(holds, residuals, mask.describe())


@dataclass(frozen=True, eq=False)
class WanderingResult:
    rank: int
    frame: np.ndarray = field(repr=False)
    generator: HardyVector | None = None

    @property
    def kind(self) -> str:
        if self.rank == 0:
            return "zero"
        return "generator" if self.rank == 1 else "rank"


def normalize_phase(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    scale = np.max(np.abs(v)) if v.size else 0.0
    if scale == 0:
        return v
    first = v[np.flatnonzero(np.abs(v) > PHASE_TOL * scale)[0]]
    return v * (abs(first) / first)


def wandering_generator(S: Subspace, tau_rank: float = TAU_RANK) -> WanderingResult:
    """The wandering space ``S minus sum_i z_i S`` and, when it is a line, its unit generator."""
    if S.rank == 0:
        return WanderingResult(0, np.zeros((S.space.dim, 0), dtype=complex))
    images = np.hstack([shift_op(i, S.space) @ S.frame for i in range(S.space.n)])
    moved = orthonormalize(images, tau_rank, space=S.space)
    w = orthonormalize(S.frame - moved.project(S.frame), tau_rank, space=S.space)
    if w.rank != 1:
        return WanderingResult(w.rank, w.frame)
    g = normalize_phase(w.frame[:, 0])
    g = g / np.linalg.norm(g)
    return WanderingResult(1, w.frame, HardyVector(S.space, g))


def shift_span(g: HardyVector, tau_rank: float = TAU_RANK) -> Subspace:
    """Span of ``z^k g`` over the box, truncated at the caps."""
    space = g.space
    grid = g.coeffs.reshape(space.shape, order="F")
    cols = []
    for k in space.exponents:
        shifted = np.zeros(space.shape, dtype=complex)
        dst = tuple(slice(int(ki), None) for ki in k)
        src = tuple(slice(0, d + 1 - int(ki)) for d, ki in zip(space.caps, k))
        shifted[dst] = grid[src]
        cols.append(shifted.reshape(-1, order="F"))
    return orthonormalize(np.column_stack(cols), tau_rank, space=space)


def monomial_exponent(v: HardyVector, tol: float = 1e-12) -> tuple[int, ...] | None:
    """Exponent ``k`` when ``v`` is a unimodular multiple of ``e_k``, else None."""
    big = np.flatnonzero(np.abs(v.coeffs) > tol)
    if big.size != 1 or abs(abs(v.coeffs[big[0]]) - 1) > tol:
        return None
    return tuple(int(x) for x in v.space.exponents[big[0]])


def principal_subspace(f, space: BoxTruncation, slots=None, order=None) -> Subspace:
    """Truncated model of ``f H^2``: images of the interior columns under ``M_f``."""
    prod = InnerFunctionProd.lift(f)
    if slots is None:
        slots = tuple(range(prod.m))
    op = mult_op(f, slots, space, order)
    cols = interior_mask(space, op.margins).positions
    return orthonormalize(op.matrix[:, cols].toarray(), space=space)
