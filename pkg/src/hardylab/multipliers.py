"""Families of orthogonal complementary projections and the multipliers they carry.

A multiplier ``Theta = sum_j phi_j P_j`` acts on ``H2(D^k) (x) H2(D^(n-k))``:
the one- (or k-) variable inner functions ``phi_j`` multiply the leading
variables, the projections ``P_j`` act on the trailing ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .inner import DECREASING, INCREASING, InnerFunctionProd, InnerSeq
from .operators import (
    DEFAULT_TOL,
    LinOp,
    Subspace,
    _require_mask,
    mult_op,
    orthonormalize,
    principal_subspace,
    spectral_norm,
)
from .space import BoxTruncation, InteriorMask, interior_mask

FAMILY_TOL = 1e-10


class FamilyError(ValueError):
    """Raised when a projection family is not orthogonal, not complete, or malformed."""


@dataclass(frozen=True, eq=False)
class ProjectionFamily:
    """Ranges of pairwise orthogonal projections ``P_1, ..., P_J`` summing to the identity."""

    space: BoxTruncation
    members: tuple[Subspace, ...]

    def __post_init__(self):
        members = tuple(self.members)
        if not members:
            raise FamilyError("a projection family needs at least one member")
        for j, s in enumerate(members):
            if s.space != self.space:
                raise FamilyError(f"member {j + 1} lives on a different truncation")
        object.__setattr__(self, "members", members)
        for j in range(len(members)):
            for k in range(j + 1, len(members)):
                overlap = spectral_norm(members[j].frame.conj().T @ members[k].frame)
                if overlap > FAMILY_TOL:
                    raise FamilyError(f"members {j + 1} and {k + 1} are not orthogonal ({overlap:.3g})")
        frame = np.hstack([s.frame for s in members])
        defect = spectral_norm(frame @ frame.conj().T - np.eye(self.space.dim))
        if defect > FAMILY_TOL:
            raise FamilyError(f"projections do not sum to the identity (defect {defect:.3g})")

    def __len__(self):
        return len(self.members)

    def __getitem__(self, j) -> Subspace:
        return self.members[j]

    @property
    def ranks(self) -> list[int]:
        return [s.rank for s in self.members]

    def projection(self, j: int) -> np.ndarray:
        """Dense ``P_j`` for the 1-based ``j``."""
        return self.members[j - 1].projection

    def reversed(self) -> "ProjectionFamily":
        return ProjectionFamily(self.space, self.members[::-1])


def family_from_partition(space: BoxTruncation, blocks: Sequence[Iterable]) -> ProjectionFamily:
    """Coordinate projections onto the spans of the given blocks of multi-indices."""
    owner: dict[tuple, int] = {}
    positions = []
    for j, block in enumerate(blocks):
        pos = []
        for k in block:
            k = tuple(int(x) for x in k)
            if not space.contains(k):
                raise FamilyError(f"index {k} in block {j + 1} lies outside the box {space.caps}")
            if k in owner:
                raise FamilyError(f"index {k} appears in blocks {owner[k] + 1} and {j + 1} (overlap)")
            owner[k] = j
            pos.append(space.index_of(k))
        positions.append(pos)
    missing = [tuple(int(x) for x in k) for k in space.exponents if tuple(int(x) for x in k) not in owner]
    if missing:
        raise FamilyError(f"blocks do not cover index {missing[0]} (incomplete partition)")
    return ProjectionFamily(space, tuple(Subspace.coordinate(space, p) for p in positions))


def family_from_frames(space: BoxTruncation, frames: Sequence[np.ndarray]) -> ProjectionFamily:
    """Family from explicit frames; each frame is orthonormalized first."""
    members = []
    for f in frames:
        f = np.asarray(f, dtype=complex).reshape(space.dim, -1)
        members.append(orthonormalize(f, space=space))
    return ProjectionFamily(space, tuple(members))


def family_from_inner_chain(space: BoxTruncation, chain, order=None) -> ProjectionFamily:
    """Family cut out by an increasing chain ``phi_1 | phi_2 | ...`` of product inner functions.

    Member ``j`` is ``phi_j H2 minus phi_{j+1} H2``, the last member is
    ``phi_J H2``, and a leading member ``H2 minus phi_1 H2`` is prepended
    when ``phi_1`` is not constant.  The truncated principal subspaces are
    accumulated from the top so that they are exactly nested even when the
    chain contains Blaschke factors; the default truncation orders come from
    :func:`nested_orders`.
    """
    if not isinstance(chain, InnerSeq):
        chain = InnerSeq(INCREASING, tuple(chain))
    if chain.direction != INCREASING:
        raise FamilyError("inner chain must be increasing")
    report = chain.validate()
    if not report:
        raise FamilyError(f"inner chain invalid at pair {report.pair}: {report.reason}")
    prods = chain.as_products()
    if prods[0].m != space.n:
        raise FamilyError(f"chain acts on {prods[0].m} variables, family space has {space.n}")
    orders = per_term(_default_orders(chain, order), len(prods))
    nested: list[Subspace] = []
    current = None
    for f, r in zip(reversed(prods), reversed(orders)):
        piece = principal_subspace(f, space, order=r)
        if current is not None:
            piece = orthonormalize(np.hstack([current.frame, piece.frame]), space=space)
        nested.append(piece)
        current = piece
    nested.reverse()
    members = []
    if not prods[0].is_constant:
        members.append(nested[0].complement())
    for j, v in enumerate(nested):
        if j + 1 < len(nested):
            nxt = nested[j + 1]
            members.append(orthonormalize(v.frame - nxt.project(v.frame), space=space))
        else:
            members.append(v)
    return ProjectionFamily(space, tuple(members))


def _direct_sum(family: ProjectionFamily, members: Sequence[Subspace]) -> Subspace:
    if not members:
        return Subspace.zero(family.space)
    return orthonormalize(np.hstack([s.frame for s in members]), space=family.space)


def tail_space(family: ProjectionFamily, j: int) -> Subspace:
    """``Ran P_j + Ran P_{j+1} + ...`` for the 1-based ``j``."""
    if not 1 <= j <= len(family):
        raise IndexError(f"j={j} out of range 1..{len(family)}")
    return _direct_sum(family, family.members[j - 1 :])


def head_space(family: ProjectionFamily, j: int) -> Subspace:
    """``Ran P_1 + ... + Ran P_j`` for the 1-based ``j``."""
    if not 1 <= j <= len(family):
        raise IndexError(f"j={j} out of range 1..{len(family)}")
    return _direct_sum(family, family.members[:j])


@dataclass(frozen=True, eq=False)
class ThetaMultiplier:
    seq: InnerSeq
    family: ProjectionFamily

    def __post_init__(self):
        if len(self.seq) != len(self.family):
            raise FamilyError(
                f"sequence has {len(self.seq)} terms but the family has {len(self.family)} members"
            )

    @property
    def k(self) -> int:
        return self.seq.variables


@dataclass(frozen=True, eq=False)
class ThetaOperator:
    """Assembled ``Theta`` with the bookkeeping needed to read off its range."""

    theta: ThetaMultiplier
    head: BoxTruncation
    tail: BoxTruncation
    op: LinOp
    term_margins: tuple[tuple[int, ...], ...]

    @property
    def space(self) -> BoxTruncation:
        return self.op.domain

    @property
    def margins(self) -> tuple[int, ...]:
        return self.op.margins

    def term_interior(self, j: int) -> InteriorMask:
        """Leading-variable indices whose image under ``phi_j`` is reliable (0-based ``j``)."""
        return interior_mask(self.head, self.term_margins[j])

    def usable_mask(self) -> InteriorMask:
        margins = tuple(m for m in self.op.margins[: self.head.n]) + (0,) * self.tail.n
        return interior_mask(self.space, margins)


def build_theta(theta: ThetaMultiplier, head_caps, order=None) -> ThetaOperator:
    """Matrix of ``sum_j M_{phi_j} (x) P_j`` on the joined box.

    ``head_caps`` are the degree caps of the leading variables; a single
    integer is accepted for one-variable terms.  Terms whose margin exceeds
    the caps still build, the usable mask is then empty.
    """
    if isinstance(head_caps, (int, np.integer)):
        head_caps = (int(head_caps),)
    head = BoxTruncation(tuple(head_caps))
    tail = theta.family.space
    if head.n != theta.k:
        raise ValueError(f"terms act on {theta.k} variables but {head.n} caps were given")
    slots = tuple(range(head.n))
    total = None
    term_margins = []
    orders = per_term(_default_orders(theta.seq, order), len(theta.seq))
    for f, member, r in zip(theta.seq.as_products(), theta.family.members, orders):
        m = mult_op(f, slots, head, r)
        term_margins.append(m.margins)
        proj = sp.csr_matrix(member.projection)
        block = sp.kron(proj, m.matrix, format="csr")
        total = block if total is None else total + block
    margins = tuple(max(t[i] for t in term_margins) for i in range(head.n)) + (0,) * tail.n
    op = LinOp(head * tail, head * tail, total, margins)
    return ThetaOperator(theta, head, tail, op, tuple(term_margins))


@dataclass(frozen=True)
class IsometryResult:
    holds: bool
    residual: float
    mask: dict

    def __bool__(self):
        return self.holds


def check_isometry(theta_op, mask: InteriorMask | None = None, tol: float = DEFAULT_TOL) -> IsometryResult:
    """``||E^* (Theta^* Theta - I) E||`` with ``E`` the interior columns.

    The mask is applied on both sides: ``<Theta x, Theta y> = <x, y>`` is only
    free of truncation error when both inputs sit in the interior.
    """
    op = theta_op.op if isinstance(theta_op, ThetaOperator) else theta_op
    if mask is None:
        mask = interior_mask(op.domain, op.margins)
    mask = _require_mask(op.domain, mask)
    cols = op.matrix[:, mask.positions].toarray()
    residual = spectral_norm(cols.conj().T @ cols - np.eye(mask.size))
    return IsometryResult(residual <= tol, residual, mask.describe())


def range_subspace(theta_op) -> Subspace:
    """Truncated model of ``Theta H2``.

    For an assembled multiplier, the inputs are ``e_a (x) f`` with ``f`` in
    ``Ran P_j`` and ``a`` in the interior of term ``j``, so every image is
    ``phi_j e_a (x) f`` up to the tail bound.  A bare operator contributes
    all of its columns.
    """
    if not isinstance(theta_op, ThetaOperator):
        return orthonormalize(theta_op.matrix.toarray(), space=theta_op.codomain)
    inputs = []
    for j, member in enumerate(theta_op.theta.family.members):
        interior = theta_op.term_interior(j)
        if member.rank == 0 or interior.empty:
            continue
        inputs.append(np.kron(member.frame, interior.selector()))
    if not inputs:
        return Subspace.zero(theta_op.space)
    images = theta_op.op.matrix @ np.hstack(inputs)
    return orthonormalize(images, space=theta_op.space)


def nested_orders(seq: InnerSeq, target: float = 1e-12) -> list[tuple[int, ...]]:
    """Per-factor truncation orders that keep the truncated ``f_j H2`` nested.

    The smallest term gets the order reaching ``target``; each larger term
    gets the order of the smaller one plus the order of the quotient.  With
    independent orders the truncated ``f_{j+1} H2`` can stick out of the
    truncated ``f_j H2`` by far more than the tail bound.
    """
    prods = list(seq.as_products())
    if seq.direction == DECREASING:
        prods.reverse()
    orders = [tuple(f.truncation_order(target) for f in prods[0].factors)]
    for small, big in zip(prods, prods[1:]):
        q = small.divides(big)
        if q is None:
            raise FamilyError("sequence terms do not divide each other")
        orders.append(tuple(r + f.truncation_order(target) for r, f in zip(orders[-1], q.factors)))
    if seq.direction == DECREASING:
        orders.reverse()
    return orders


def _default_orders(seq: InnerSeq, order):
    return nested_orders(seq) if order is None else order


def per_term(order, count: int) -> list:
    """Broadcast a truncation order (None, int, or one entry per term) over the terms."""
    if order is None or isinstance(order, (int, np.integer)):
        return [order] * count
    order = list(order)
    if len(order) != count:
        raise ValueError(f"{len(order)} truncation orders for {count} terms")
    return order


def leading_subspaces(seq: InnerSeq, head: BoxTruncation, order=None) -> list[Subspace]:
    """Truncated ``phi_j H2`` on the leading variables for every term."""
    return [
        principal_subspace(f, head, order=r)
        for f, r in zip(seq.as_products(), per_term(_default_orders(seq, order), len(seq)))
    ]


def orthogonal_sum_projection(theta_op: ThetaOperator, cols: np.ndarray, order=None) -> np.ndarray:
    """Apply ``sum_j (Q_j - Q_{j-1}) (x) P_{S_j}`` to ``cols``.

    Decreasing terms use the tails ``S_j`` and ``Q_0 = 0``; increasing terms
    use the heads and ``Q_{J+1} = 0``, where ``Q_j`` projects onto
    ``phi_j H2``.  This is the orthogonal decomposition of ``Theta H2`` into
    layers of the leading variables.
    """
    theta = theta_op.theta
    head, tail = theta_op.head, theta_op.tail
    q = leading_subspaces(theta.seq, head, order)
    fam = theta.family
    J = len(fam)
    grid = cols.reshape(head.dim, tail.dim, -1, order="F")
    out = np.zeros_like(grid, dtype=complex)

    def layer(pa: Subspace, pb: Subspace | None, s: Subspace):
        # (P_pa - P_pb) (x) P_s applied to the grid: leading axis 0, trailing axis 1
        lead = pa.projection if pb is None else pa.projection - pb.projection
        return np.einsum("ab,bcm,dc->adm", lead, grid, s.projection)

    if theta.seq.direction == DECREASING:
        for j in range(1, J + 1):
            out += layer(q[j - 1], q[j - 2] if j > 1 else None, tail_space(fam, j))
    else:
        for j in range(1, J + 1):
            out += layer(q[j - 1], q[j] if j < J else None, head_space(fam, j))
    return out.reshape(head.dim * tail.dim, -1, order="F")
