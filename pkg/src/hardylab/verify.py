"""Executable certificates for the invariant-subspace characterizations.

Every check evaluates each side of an equivalence on its own and reports
whether the sides agree.  Agreement is the contract: a disagreement beyond
tolerance is flagged as an inconsistency, because it can only come from a
bug or from a truncation that is too small to see the pattern.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .inner import DECREASING, INCREASING, InnerFunction1D, InnerFunctionProd, InnerSeq
from .multipliers import (
    ProjectionFamily,
    ThetaMultiplier,
    ThetaOperator,
    build_theta,
    check_isometry,
    head_space,
    nested_orders,
    orthogonal_sum_projection,
    per_term,
    range_subspace,
    tail_space,
)
from .operators import (
    DEFAULT_TOL,
    TAU_RANK,
    Subspace,
    TruncationError,
    is_doubly_commuting,
    is_invariant,
    monomial_exponent,
    mult_op,
    orthonormalize,
    principal_subspace,
    same_subspace,
    shift_op,
    shift_span,
    spectral_norm,
    wandering_generator,
)
from .space import BoxTruncation, InteriorMask, interior_mask

CHECKS = ("isometry", "lemma31", "thm32a", "thm32b", "thm33", "remark_k", "thm41")


class HypothesisError(ValueError):
    """A scenario does not satisfy the hypotheses of the statement being checked."""


@dataclass
class Verdict:
    check: str
    conditions: dict = field(default_factory=dict)
    labels: dict = field(default_factory=dict)
    residuals: dict = field(default_factory=dict)
    masks: dict = field(default_factory=dict)
    classes: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    skipped: str | None = None
    inconsistent: bool = False

    @property
    def consistent(self) -> bool:
        if self.inconsistent:
            return False
        for cls in self.classes:
            values = {self.conditions[c] for c in cls if c in self.conditions}
            if len(values) > 1:
                return False
        return True

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "status": "skipped" if self.skipped else "verdict",
            "skip_reason": self.skipped,
            "conditions": dict(self.conditions),
            "labels": dict(self.labels),
            "consistent": self.consistent,
            "residuals": {k: float(v) for k, v in self.residuals.items()},
            "masks": dict(self.masks),
            "notes": list(self.notes),
        }


def skipped(check: str, reason: str, note: str = "") -> Verdict:
    return Verdict(check, skipped=reason, notes=[note] if note else [])


@dataclass(frozen=True)
class RudinSpec:
    """``span_j first_j H2(D^k) (x) second_j H2(D^(n-k))`` with opposite directions."""

    first: InnerSeq
    second: InnerSeq
    first_order: tuple | None = None


@dataclass(frozen=True, eq=False)
class Thm41Spec:
    this: RudinSpec
    other: RudinSpec
    eta: InnerFunction1D | None = None
    eta_order: int | None = None
    max_m: int | None = None


@dataclass(frozen=True, eq=False)
class Scenario:
    name: str
    caps: tuple[int, ...]
    checks: tuple[str, ...]
    k: int = 1
    seq: InnerSeq | None = None
    family: ProjectionFamily | None = None
    term_orders: tuple | None = None
    witness: InnerSeq | None = None
    thm41: Thm41Spec | None = None
    tol: float = DEFAULT_TOL
    tau_rank: float = TAU_RANK
    margins: tuple[int, ...] | None = None
    expected: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.caps)

    @property
    def space(self) -> BoxTruncation:
        return BoxTruncation(self.caps)

    @property
    def head_caps(self) -> tuple[int, ...]:
        return self.caps[: self.k]

    def theta_operator(self) -> ThetaOperator:
        if self.seq is None or self.family is None:
            raise HypothesisError("scenario has no multiplier (seq and family are required)")
        return build_theta(ThetaMultiplier(self.seq, self.family), self.head_caps, self.term_orders)

    def full_mask(self, theta_op: ThetaOperator | None = None) -> InteriorMask:
        if self.margins is not None:
            return interior_mask(self.space, self.margins)
        margins = [1] * self.n
        if theta_op is not None:
            for f, tm in zip(theta_op.theta.seq.as_products(), theta_op.term_margins):
                for i, (factor, r) in enumerate(zip(f.factors, tm)):
                    if not factor.is_monomial:
                        margins[i] = max(margins[i], r + 1)
        return interior_mask(self.space, margins)

    def family_mask(self) -> InteriorMask:
        fam_space = self.family.space
        if self.margins is not None:
            return interior_mask(fam_space, self.margins[self.n - fam_space.n :])
        return interior_mask(fam_space, 1)


# -- Lemma on families of projections ---------------------------------------------


def _pairs(n: int, ordered: bool):
    return [(p, q) for p in range(n) for q in range(n) if p != q and (not ordered or p < q)]


def lemma31_residuals(
    family: ProjectionFamily, mask: InteriorMask, ordered: bool = False
) -> tuple[dict, dict]:
    """Residual tables for ``P_{S_l} M_p P_j M_q^* P_{S_m}`` and ``P_l M_p P_j M_q^* P_m``.

    Keys read ``j,l,m,p,q`` (1-based, ``l, m > j``).  Inputs are the mask
    columns; a norm ``||P_l Y||`` is evaluated as ``||F_l^* Y||``.
    """
    space = family.space
    J = len(family)
    tails = [tail_space(family, j) for j in range(1, J + 1)]
    e = mask.selector()
    shifts = [shift_op(i, space).matrix for i in range(space.n)]
    with_tails, with_members = {}, {}
    for j in range(1, J):
        pj = family.members[j - 1]
        for p, q in _pairs(space.n, ordered):
            for m in range(j + 1, J + 1):
                x_tail = tails[m - 1].project(e)
                x_mem = family.members[m - 1].project(e)
                y_tail = shifts[p] @ pj.project(shifts[q].conj().T @ x_tail)
                y_mem = shifts[p] @ pj.project(shifts[q].conj().T @ x_mem)
                for l in range(j + 1, J + 1):
                    key = f"{j},{l},{m},{p + 1},{q + 1}"
                    with_tails[key] = spectral_norm(tails[l - 1].frame.conj().T @ y_tail)
                    with_members[key] = spectral_norm(family.members[l - 1].frame.conj().T @ y_mem)
    return with_tails, with_members


def _tails_invariant(family: ProjectionFamily, spaces: Sequence[Subspace], tol, mask) -> tuple[bool, dict]:
    res = {}
    ok = True
    for j, s in enumerate(spaces, start=1):
        r = is_invariant(s, tol, mask)
        res[f"S_{j}"] = r.max_residual
        ok &= r.holds
    return ok, res


def check_lemma31(
    family: ProjectionFamily,
    tol: float = DEFAULT_TOL,
    mask: InteriorMask | None = None,
    ordered: bool = False,
    name: str = "lemma31",
) -> Verdict:
    """Doubly commuting tails versus the two vanishing conditions on the family.

    The tails ``S_k`` must all be invariant; otherwise the statement does not
    apply and the verdict is skipped with reason ``hypothesis failed``.
    """
    space = family.space
    if mask is None:
        mask = interior_mask(space, 1)
    if mask.empty:
        raise TruncationError(f"truncation too small: empty interior for margins {mask.margins}")
    tails = [tail_space(family, j) for j in range(1, len(family) + 1)]
    inv_ok, inv_res = _tails_invariant(family, tails, tol, mask)
    if not inv_ok:
        v = skipped(name, "hypothesis failed", "some tail S_k is not invariant")
        v.residuals = {f"invariance:{k}": x for k, x in inv_res.items()}
        return v
    v = Verdict(name, classes=[["i", "ii", "iii"]])
    v.masks["family"] = mask.describe()
    if space.n < 2:
        for c in ("i", "ii", "iii"):
            v.conditions[c] = True
            v.labels[c] = "vacuous"
        return v
    dc_sup = 0.0
    for j, s in enumerate(tails, start=1):
        r = is_doubly_commuting(s, tol, mask)
        v.residuals[f"i:S_{j}"] = r.max_residual
        dc_sup = max(dc_sup, r.max_residual)
    with_tails, with_members = lemma31_residuals(family, mask, ordered)
    sup_tails = max(with_tails.values(), default=0.0)
    sup_members = max(with_members.values(), default=0.0)
    v.residuals.update({"i": dc_sup, "ii": sup_tails, "iii": sup_members})
    v.residuals.update({f"ii:{k}": x for k, x in with_tails.items()})
    v.residuals.update({f"iii:{k}": x for k, x in with_members.items()})
    v.conditions = {"i": dc_sup <= tol, "ii": sup_tails <= tol, "iii": sup_members <= tol}
    return v


# -- Rudin-type subspaces -----------------------------------------------------------


def _factor_subspaces(factors, box: BoxTruncation, order=None) -> list[Subspace]:
    if isinstance(factors, InnerSeq):
        if order is None:
            order = nested_orders(factors)
        factors = factors.terms
    out = []
    for f, r in zip(factors, per_term(order, len(factors))):
        if isinstance(f, Subspace):
            out.append(f)
        else:
            slots = tuple(range(InnerFunctionProd.lift(f).m))
            out.append(principal_subspace(f, box, slots, r))
    return out


def build_rudin(first, second, space: BoxTruncation, k: int = 1, order=None, tau_rank: float = TAU_RANK) -> Subspace:
    """Truncated ``span_j first_j H2(D^k) (x) second_j H2(D^(n-k))``.

    ``first`` and ``second`` are inner sequences in opposite directions, or
    lists of already computed principal subspaces on the respective boxes.
    """
    if len(first) != len(second):
        raise ValueError(f"{len(first)} leading terms but {len(second)} trailing terms")
    if isinstance(first, InnerSeq) and isinstance(second, InnerSeq):
        if {first.direction, second.direction} != {INCREASING, DECREASING}:
            raise HypothesisError("a Rudin-type subspace pairs an increasing with a decreasing sequence")
        for seq in (first, second):
            report = seq.validate()
            if not report:
                raise HypothesisError(f"{seq.direction} sequence fails at pair {report.pair}: {report.reason}")
    head, tail = space.split(k)
    a = _factor_subspaces(first, head, order)
    b = _factor_subspaces(second, tail)
    pieces = [np.kron(fb.frame, fa.frame) for fa, fb in zip(a, b) if fa.rank and fb.rank]
    if not pieces:
        return Subspace.zero(space)
    return orthonormalize(np.hstack(pieces), tau_rank, space=space)


# -- characterizations of Theta H2 ---------------------------------------------------


def _coefficient_spaces(scn: Scenario) -> list[Subspace]:
    fam = scn.family
    if scn.seq.direction == DECREASING:
        return [tail_space(fam, j) for j in range(1, len(fam) + 1)]
    return [head_space(fam, j) for j in range(1, len(fam) + 1)]


def _require_direction(scn: Scenario, direction: str, check: str):
    if scn.seq is None or scn.family is None:
        raise HypothesisError(f"{check} needs a multiplier (seq and family)")
    if scn.seq.direction != direction:
        raise HypothesisError(f"{check} needs a {direction} sequence, got {scn.seq.direction}")
    report = scn.seq.validate()
    if not report:
        raise HypothesisError(f"sequence fails at pair {report.pair}: {report.reason}")


def check_invariance_biconditional(scn: Scenario, name: str = "thm32a") -> Verdict:
    """``Theta H2`` invariant versus every coefficient space ``S_j`` invariant.

    Decreasing terms pair with the tails of the family, increasing terms with
    the heads; ``k``-variable terms are handled the same way.
    """
    op = scn.theta_operator()
    S = range_subspace(op)
    full_mask = scn.full_mask(op)
    fam_mask = scn.family_mask()
    v = Verdict(name, classes=[["S_invariant", "coefficient_spaces_invariant"]])
    v.masks = {"full": full_mask.describe(), "family": fam_mask.describe()}
    left = is_invariant(S, scn.tol, full_mask)
    v.labels["rank_S"] = S.rank
    v.residuals["S"] = left.max_residual
    v.residuals.update({f"S:{k}": x for k, x in left.residuals.items()})
    spaces = _coefficient_spaces(scn)
    right_ok, right_res = _tails_invariant(scn.family, spaces, scn.tol, fam_mask)
    v.residuals.update(right_res)
    v.conditions = {"S_invariant": left.holds, "coefficient_spaces_invariant": right_ok}
    v.labels["coefficient_spaces"] = "tails" if scn.seq.direction == DECREASING else "heads"
    v.notes.append("inner sequence checked on consecutive listed pairs only")
    return v


def check_thm32a(scn: Scenario) -> Verdict:
    _require_direction(scn, DECREASING, "thm32a")
    return check_invariance_biconditional(scn, "thm32a")


def orthogonal_sum_residual(scn: Scenario, op: ThetaOperator, S: Subspace, mask: InteriorMask) -> float:
    """``||(P_S - sum_j layer_j (x) P_{S_j}) E_mask||``."""
    e = mask.selector()
    return spectral_norm(S.project(e) - orthogonal_sum_projection(op, e, scn.term_orders))


def _certify_rudin(scn: Scenario, op: ThetaOperator, S: Subspace, spaces, full_mask, fam_mask, v: Verdict):
    """Try to exhibit the trailing inner sequence of a Rudin-type representation.

    Returns True on success.  A caller-supplied witness chain is tried
    first; otherwise the generators of the coefficient spaces are extracted.
    """
    opposite = INCREASING if scn.seq.direction == DECREASING else DECREASING
    head_box_n = scn.k
    if scn.witness is not None:
        try:
            R = build_rudin(scn.seq, scn.witness, scn.space, head_box_n, scn.term_orders, scn.tau_rank)
        except HypothesisError as exc:
            v.notes.append(f"witness rejected: {exc}")
        else:
            gap = same_subspace(S, R, full_mask)
            v.residuals["i:witness"] = gap
            if gap <= scn.tol:
                v.labels["i"] = "witness"
                v.labels["i:trailing"] = [t.to_spec() for t in InnerSeq(opposite, scn.witness.terms).as_products()]
                return True
            v.notes.append("supplied witness does not reproduce S; falling back to extraction")
    recovered, principal = [], []
    for j, s in enumerate(spaces, start=1):
        w = wandering_generator(s, scn.tau_rank)
        v.residuals[f"i:wandering_rank:S_{j}"] = float(w.rank)
        if w.rank != 1:
            return False
        gap = same_subspace(shift_span(w.generator, scn.tau_rank), s, fam_mask)
        v.residuals[f"i:generator_gap:S_{j}"] = gap
        if gap > scn.tol:
            return False
        principal.append(s)
        exp = monomial_exponent(w.generator)
        recovered.append(None if exp is None else InnerFunctionProd.monomial(exp))
    R = build_rudin(scn.seq, principal, scn.space, head_box_n, scn.term_orders, scn.tau_rank)
    gap = same_subspace(S, R, full_mask)
    v.residuals["i:rudin_gap"] = gap
    v.residuals["i:orthogonal_sum"] = orthogonal_sum_residual(scn, op, S, full_mask)
    if gap > scn.tol:
        return False
    if all(f is not None for f in recovered):
        chain = InnerSeq(opposite, tuple(recovered))
        report = chain.validate()
        v.labels["i:trailing"] = [f.to_spec() for f in recovered]
        if not report:
            v.notes.append(f"recovered trailing chain not strict at pair {report.pair}: {report.reason}")
    else:
        v.labels["i:trailing"] = "non-monomial generators (principal subspaces verified)"
    v.labels["i"] = "extracted"
    return True


def _part_b(scn: Scenario, name: str) -> Verdict:
    op = scn.theta_operator()
    S = range_subspace(op)
    full_mask = scn.full_mask(op)
    fam_mask = scn.family_mask()
    spaces = _coefficient_spaces(scn)
    left = is_invariant(S, scn.tol, full_mask)
    right_ok, right_res = _tails_invariant(scn.family, spaces, scn.tol, fam_mask)
    if not (left.holds and right_ok):
        v = skipped(name, "hypothesis failed", "part (a) does not hold on both sides")
        v.residuals = {"a:S": left.max_residual, **{f"a:{k}": x for k, x in right_res.items()}}
        return v
    v = Verdict(name, classes=[["i", "ii", "iii", "iv"]])
    v.masks = {"full": full_mask.describe(), "family": fam_mask.describe()}
    fam = scn.family if scn.seq.direction == DECREASING else scn.family.reversed()
    if fam.space.n < 2:
        for c in ("ii", "iii", "iv"):
            v.conditions[c] = True
            v.labels[c] = "vacuous"
    else:
        lemma = check_lemma31(fam, scn.tol, fam_mask, ordered=True, name="lemma")
        v.conditions["ii"] = lemma.conditions["i"]
        v.conditions["iii"] = lemma.conditions["ii"]
        v.conditions["iv"] = lemma.conditions["iii"]
        v.residuals["ii"] = lemma.residuals["i"]
        v.residuals["iii"] = lemma.residuals["ii"]
        v.residuals["iv"] = lemma.residuals["iii"]
        for key, val in lemma.residuals.items():
            if key.startswith("i:"):
                v.residuals["ii:" + key[2:]] = val
    certified = _certify_rudin(scn, op, S, spaces, full_mask, fam_mask, v)
    if certified:
        v.conditions["i"] = True
    elif not v.conditions["ii"]:
        v.conditions["i"] = False
        v.labels["i"] = "false by equivalence"
    else:
        v.conditions["i"] = False
        v.labels["i"] = "extraction inconclusive"
        v.inconsistent = True
        v.notes.append("coefficient spaces are doubly commuting but no Rudin representation was recovered")
    return v


def check_thm32b(scn: Scenario) -> Verdict:
    _require_direction(scn, DECREASING, "thm32b")
    return _part_b(scn, "thm32b")


def check_thm33(scn: Scenario) -> Verdict:
    """Increasing terms: part (a) with heads, then part (b) with the mirrored conditions."""
    _require_direction(scn, INCREASING, "thm33")
    a = check_invariance_biconditional(scn, "thm33")
    v = Verdict("thm33", classes=[["a:S_invariant", "a:coefficient_spaces_invariant"]])
    v.masks = a.masks
    v.notes = a.notes
    v.conditions = {f"a:{k}": x for k, x in a.conditions.items()}
    v.residuals = {f"a:{k}": x for k, x in a.residuals.items()}
    v.labels = {f"a:{k}": x for k, x in a.labels.items()}
    b = _part_b(scn, "thm33")
    if b.skipped:
        v.notes.append(f"part (b) skipped: {b.skipped}")
        v.labels["b"] = "skipped: " + b.skipped
        return v
    v.classes.append(["b:i", "b:ii", "b:iii", "b:iv"])
    v.conditions.update({f"b:{k}": x for k, x in b.conditions.items()})
    v.residuals.update({f"b:{k}": x for k, x in b.residuals.items()})
    v.labels.update({f"b:{k}": x for k, x in b.labels.items()})
    v.notes.extend(b.notes)
    v.inconsistent = b.inconsistent
    return v


def check_remark_k(scn: Scenario) -> Verdict:
    """Invariance biconditional for ``k``-variable terms and a family on ``n - k`` variables."""
    if scn.seq is None:
        raise HypothesisError("remark_k needs a multiplier")
    report = scn.seq.validate()
    if not report:
        raise HypothesisError(f"sequence fails at pair {report.pair}: {report.reason}")
    v = check_invariance_biconditional(scn, "remark_k")
    v.labels["k"] = scn.k
    return v


def check_lemma21(scn: Scenario) -> Verdict:
    """Isometry of ``Theta`` on the interior."""
    op = scn.theta_operator()
    mask = interior_mask(scn.space, op.margins) if scn.margins is None else interior_mask(scn.space, scn.margins)
    r = check_isometry(op, mask, scn.tol)
    v = Verdict("isometry", classes=[["isometry"]])
    v.conditions["isometry"] = r.holds
    v.residuals["isometry"] = r.residual
    v.masks["isometry"] = r.mask
    bounds = []
    for f, tm in zip(op.theta.seq.as_products(), op.term_margins):
        bounds.append(max(fac.tail_bound(m) for fac, m in zip(f.factors, tm)))
    tau = max(bounds)
    v.residuals["tail_bound"] = tau
    v.residuals["tail_bound_limit"] = 2 * tau + tau**2
    v.conditions["within_tail_bound"] = r.residual <= 2 * tau + tau**2 + 1e-13
    if not v.conditions["within_tail_bound"]:
        v.inconsistent = True
        v.notes.append("isometry residual exceeds the analytic tail bound")
    elif not r.holds:
        v.notes.append("residual above tolerance but within the analytic tail bound")
    return v


# -- unitary equivalence -------------------------------------------------------------


def _rudin_from_spec(spec: RudinSpec, space: BoxTruncation, tau_rank: float) -> Subspace:
    if spec.first.direction != DECREASING or spec.second.direction != INCREASING:
        raise HypothesisError("expected decreasing terms in z1 and increasing trailing terms")
    if not InnerFunctionProd.lift(spec.second.terms[0]).is_constant:
        raise HypothesisError("the first trailing term must be the constant 1")
    return build_rudin(spec.first, spec.second, space, 1, spec.first_order, tau_rank)


def _eta_image(eta: InnerFunction1D, S: Subspace, order=None) -> tuple[Subspace, np.ndarray, np.ndarray]:
    """``eta(z1) S`` from the images of the interior part of ``S``."""
    op = mult_op(eta, 0, S.space, order)
    margins = (op.margins[0],) + (0,) * (S.space.n - 1)
    inputs = S.project(interior_mask(S.space, margins).selector())
    image = op.matrix @ inputs
    return orthonormalize(image, space=S.space), op.matrix, inputs


def intertwining_residuals(
    eta: InnerFunction1D, source: Subspace, target: Subspace, mask: InteriorMask, order=None
) -> dict:
    """Residuals of ``U R_i = R_i U`` for ``U = M_eta`` from ``source`` to ``target``.

    Also reports how far ``U`` is from an isometry onto ``target`` on the
    pulled-back mask.
    """
    op = mult_op(eta, 0, source.space, order).matrix
    x = source.project(mask.selector())
    out = {}
    for i in range(source.space.n):
        m = shift_op(i, source.space).matrix
        lhs = op @ source.project(m @ x)
        rhs = target.project(m @ (op @ x))
        out[f"intertwine:z{i + 1}"] = spectral_norm(lhs - rhs)
    ux = op @ x
    out["isometry"] = spectral_norm(ux.conj().T @ ux - x.conj().T @ x)
    out["into_target"] = spectral_norm(ux - target.project(ux))
    return out


@dataclass(frozen=True)
class EtaSearch:
    m: int | None
    direction: str | None
    residuals: dict
    label: str


def find_eta_monomial(
    S: Subspace, S_tilde: Subspace, max_m: int, tol: float = DEFAULT_TOL, mask: InteriorMask | None = None
) -> EtaSearch:
    """Smallest ``m <= max_m`` with ``S = z1^m S_tilde`` (or the reverse) on the mask.

    Failure only means no monomial works; it does not rule out another ``eta``.
    """
    if mask is None:
        mask = interior_mask(S.space, 1)
    if mask.empty:
        raise TruncationError("truncation too small: empty interior")
    residuals = {}
    for m in range(max_m + 1):
        eta = InnerFunction1D.monomial(m)
        forward, _, _ = _eta_image(eta, S_tilde)
        residuals[f"S=z1^{m}S~"] = r = same_subspace(S, forward, mask)
        if r <= tol:
            return EtaSearch(m, "S = z1^m S~", residuals, "equivalent (monomial witness)")
        backward, _, _ = _eta_image(eta, S)
        residuals[f"S~=z1^{m}S"] = r = same_subspace(S_tilde, backward, mask)
        if r <= tol:
            return EtaSearch(m, "S~ = z1^m S", residuals, "equivalent (monomial witness)")
    return EtaSearch(None, None, residuals, "not equivalent within search class")


def check_thm41(spec: Thm41Spec, space: BoxTruncation, tol: float = DEFAULT_TOL,
                mask: InteriorMask | None = None, tau_rank: float = TAU_RANK) -> Verdict:
    """Unitary equivalence witnessed by an inner ``eta(z1)``.

    With a supplied ``eta`` the projection identity ``S = eta S~`` and the
    intertwining of the compressed shifts are both computed; the theorem's
    easy direction demands that the first implies the second.  Without one,
    monomials ``z1^m`` are searched.
    """
    S = _rudin_from_spec(spec.this, space, tau_rank)
    St = _rudin_from_spec(spec.other, space, tau_rank)
    v = Verdict("thm41")
    eta, order, source, target = spec.eta, spec.eta_order, St, S
    if mask is None:
        eta_margin = 0 if eta is None else mult_op(eta, 0, space, order).margins[0]
        mask = interior_mask(space, (1 + max(eta_margin, spec.max_m or 0),) + (1,) * (space.n - 1))
    if mask.empty:
        raise TruncationError(f"truncation too small: empty interior for margins {mask.margins}")
    v.masks["full"] = mask.describe()
    if eta is None:
        max_m = spec.max_m if spec.max_m is not None else max(space.caps[0] - 1, 0)
        found = find_eta_monomial(S, St, max_m, tol, mask)
        v.residuals.update({f"search:{k}": x for k, x in found.residuals.items()})
        v.labels["search"] = found.label
        if found.m is None:
            v.conditions["equivalent_within_search_class"] = False
            v.labels["equivalence"] = "not equivalent within search class"
            return v
        eta = InnerFunction1D.monomial(found.m)
        v.labels["eta"] = eta.to_spec()
        v.labels["direction"] = found.direction
        if found.direction.startswith("S~"):
            source, target = S, St
        v.conditions["equivalent_within_search_class"] = True
    else:
        v.labels["eta"] = eta.to_spec()
    image, _, _ = _eta_image(eta, source, order)
    gap = same_subspace(target, image, mask)
    v.residuals["projection_gap"] = gap
    res = intertwining_residuals(eta, source, target, mask, order)
    v.residuals.update(res)
    v.conditions["S_equals_eta_S~"] = gap <= tol
    v.conditions["intertwines"] = max(x for k, x in res.items() if k.startswith("intertwine")) <= tol
    v.conditions["unitary_onto"] = max(res["isometry"], res["into_target"]) <= tol
    if v.conditions["S_equals_eta_S~"]:
        v.classes.append(["S_equals_eta_S~", "intertwines", "unitary_onto"])
        v.labels["equivalence"] = "unitarily equivalent"
    else:
        v.labels["equivalence"] = "eta is not a witness"
    return v


def run_check(scn: Scenario, check: str) -> Verdict:
    if check == "lemma31":
        if scn.family is None:
            raise HypothesisError("lemma31 needs a family")
        return check_lemma31(scn.family, scn.tol, scn.family_mask())
    if check == "thm32a":
        return check_thm32a(scn)
    if check == "thm32b":
        return check_thm32b(scn)
    if check == "thm33":
        return check_thm33(scn)
    if check == "remark_k":
        return check_remark_k(scn)
    if check == "isometry":
        return check_lemma21(scn)
    if check == "thm41":
        if scn.thm41 is None:
            raise HypothesisError("thm41 needs a 'thm41' block")
        mask = interior_mask(scn.space, scn.margins) if scn.margins is not None else None
        return check_thm41(scn.thm41, scn.space, scn.tol, mask, scn.tau_rank)
    raise ValueError(f"unknown check {check!r}")
