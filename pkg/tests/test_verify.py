import numpy as np
import pytest

import oracles
from hardylab.inner import DECREASING, INCREASING, InnerFunction1D, InnerFunctionProd, InnerSeq
from hardylab.multipliers import family_from_inner_chain, family_from_partition
from hardylab.operators import TruncationError
from hardylab.space import BoxTruncation, interior_mask
from hardylab.verify import (
    HypothesisError,
    RudinSpec,
    Scenario,
    Thm41Spec,
    Verdict,
    build_rudin,
    check_lemma31,
    check_thm32a,
    check_thm32b,
    check_thm33,
    check_thm41,
    check_remark_k,
    find_eta_monomial,
    lemma31_residuals,
    run_check,
)

z = InnerFunction1D.monomial
mono = InnerFunctionProd.monomial


def dec(*t):
    return InnerSeq(DECREASING, tuple(t))


def inc(*t):
    return InnerSeq(INCREASING, tuple(t))


def partition(caps, owner):
    pts = oracles.box(caps)
    J = max(owner(k) for k in pts)
    return family_from_partition(BoxTruncation(caps), [[k for k in pts if owner(k) == j] for j in range(1, J + 1)])


def scenario(caps, seq, family, **kw):
    return Scenario("t", tuple(caps), (), seq=seq, family=family, **kw)


# -- Verdict bookkeeping ------------------------------------------------------------


def test_consistency_flag_follows_classes():
    v = Verdict("x", conditions={"a": True, "b": True, "c": False}, classes=[["a", "b"]])
    assert v.consistent
    v.classes.append(["b", "c"])
    assert not v.consistent
    v = Verdict("x", conditions={"a": True}, classes=[["a"]], inconsistent=True)
    assert not v.consistent and v.to_dict()["consistent"] is False


# -- Lemma on projection families ---------------------------------------------------


def test_lemma_chain_z1():
    v = check_lemma31(family_from_inner_chain(BoxTruncation((5, 5)), [mono((1, 0))]))
    assert v.conditions == {"i": True, "ii": True, "iii": True}


def test_lemma_nonprincipal_tail():
    fam = partition((5, 5), lambda k: 1 if k == (0, 0) else 2)
    v = check_lemma31(fam)
    assert v.conditions == {"i": False, "ii": False, "iii": False} and v.consistent
    assert v.residuals["i:S_2"] >= 0.5
    assert v.residuals["iii:1,2,2,1,2"] > 0


def test_lemma_nonprincipal_residual_matches_oracle():
    caps = (5, 5)
    owner = lambda k: 1 if k == (0, 0) else 2  # noqa: E731
    fam = partition(caps, owner)
    blocks = [{k for k in oracles.box(caps) if owner(k) == j} for j in (1, 2)]
    _, wit = oracles.lemma_members_residual(blocks, caps, (1, 1), [(0, 1), (1, 0)])
    assert (1, 2, 2, 1, 2) in {w[:5] for w in wit}
    tails, members = lemma31_residuals(fam, interior_mask(BoxTruncation(caps), 1))
    assert members["1,2,2,1,2"] == 1.0


def test_lemma_chain_three_variables():
    v = check_lemma31(family_from_inner_chain(BoxTruncation((3, 3, 3)), [mono((1, 1, 0))]))
    assert all(v.conditions.values())
    assert max(v.residuals[c] for c in ("i", "ii", "iii")) <= 1e-12


def test_lemma_hypothesis_failure_is_reported_not_decided():
    fam = partition((4, 4), lambda k: 2 if k == (0, 1) else 1)
    v = check_lemma31(fam)
    assert v.skipped == "hypothesis failed" and v.conditions == {}
    assert v.to_dict()["status"] == "skipped"


def test_lemma_empty_mask():
    fam = partition((2, 2), lambda k: 1)
    with pytest.raises(TruncationError):
        check_lemma31(fam, mask=interior_mask(BoxTruncation((2, 2)), (3, 3)))


# -- invariance biconditional -------------------------------------------------------


def worked(owner, caps=(5, 5)):
    return scenario(caps, dec(z(2), z(1)), partition(caps[1:], owner))


def test_tails_criterion_worked_true():
    v = check_thm32a(worked(lambda k: 1 if k == (0,) else 2))
    assert v.conditions == {"S_invariant": True, "coefficient_spaces_invariant": True}
    assert v.labels["rank_S"] == 29
    assert v.residuals["S"] == 0


def test_tails_criterion_worked_against_brute_force():
    caps = (5, 5)
    support = {k for k in oracles.box(caps) if (k[1] == 0 and k[0] >= 2) or (k[1] >= 1 and k[0] >= 1)}
    assert not oracles.monomial_invariant(support, caps, (1, 1))
    support = {k for k in oracles.box(caps) if (k[1] == 1 and k[0] >= 2) or (k[1] != 1 and k[0] >= 1)}
    assert oracles.monomial_invariant(support, caps, (1, 1))


def test_tails_criterion_escape_false():
    v = check_thm32a(worked(lambda k: 1 if k == (1,) else 2))
    assert v.conditions == {"S_invariant": False, "coefficient_spaces_invariant": False}
    assert v.residuals["S"] >= 1e-2 and v.residuals["S_2"] >= 1e-2


def test_tails_criterion_trivial():
    v = check_thm32a(scenario((3, 3), dec(z(0)), partition((3,), lambda k: 1)))
    assert all(v.conditions.values())


def test_tails_criterion_rejects_increasing():
    with pytest.raises(HypothesisError):
        check_thm32a(scenario((5, 5), inc(z(1), z(2)), partition((5,), lambda k: 1 if k == (0,) else 2)))


# -- four-way equivalence -----------------------------------------------------------


def test_rudin_type_n3_chain_recovers_generators():
    fam = family_from_inner_chain(BoxTruncation((4, 4)), [mono((0, 0)), mono((1, 1))])
    v = check_thm32b(scenario((4, 4, 4), dec(z(2), z(1)), fam))
    assert v.conditions == {"i": True, "ii": True, "iii": True, "iv": True}
    assert v.labels["i"] == "extracted"
    assert v.labels["i:trailing"] == [{"monomial": [0, 0]}, {"monomial": [1, 1]}]
    assert v.residuals["i:orthogonal_sum"] <= 1e-10


def test_rudin_type_witness_path():
    fam = family_from_inner_chain(BoxTruncation((4, 4)), [mono((0, 0)), mono((1, 1))])
    v = check_thm32b(scenario((4, 4, 4), dec(z(2), z(1)), fam, witness=inc(mono((0, 0)), mono((1, 1)))))
    assert v.labels["i"] == "witness" and v.conditions["i"]


def test_rudin_type_wrong_witness_falls_back():
    fam = family_from_inner_chain(BoxTruncation((4, 4)), [mono((0, 0)), mono((1, 1))])
    v = check_thm32b(scenario((4, 4, 4), dec(z(2), z(1)), fam, witness=inc(mono((0, 0)), mono((1, 0)))))
    assert v.labels["i"] == "extracted" and v.conditions["i"]
    assert any("falling back" in n for n in v.notes)


def test_rudin_type_adversarial_all_false():
    fam = partition((4, 4), lambda k: 1 if k == (0, 0) else 2)
    scn = scenario((4, 4, 4), dec(z(2), z(1)), fam)
    assert all(check_thm32a(scn).conditions.values())
    v = check_thm32b(scn)
    assert v.conditions == {"i": False, "ii": False, "iii": False, "iv": False}
    assert v.labels["i"] == "false by equivalence" and v.consistent
    # P2 M_z2 P1 M_z3^* P2 moves z3 to 1 and then to z2
    assert v.residuals["iv"] == 1.0


def test_rudin_type_n2_vacuous():
    v = check_thm32b(worked(lambda k: 1 if k == (0,) else 2))
    assert [v.labels[c] for c in ("ii", "iii", "iv")] == ["vacuous"] * 3
    assert v.conditions["i"] and v.labels["i:trailing"] == [{"monomial": [0]}, {"monomial": [1]}]


def test_rudin_type_skips_when_part_a_fails():
    v = check_thm32b(worked(lambda k: 1 if k == (1,) else 2))
    assert v.skipped == "hypothesis failed"


def test_build_rudin_examples():
    s = BoxTruncation((5, 5))
    assert build_rudin(dec(z(0)), inc(mono((0,))), s).rank == 36
    r = build_rudin(dec(z(2), z(1)), inc(mono((0,)), mono((1,))), s)
    assert r.rank == 4 * 6 + 1 * 5 == 29
    with pytest.raises(HypothesisError):
        build_rudin(dec(z(2), z(1)), dec(mono((1,)), mono((0,))), s)


# -- increasing terms ---------------------------------------------------------------


def test_heads_criterion_worked():
    scn = scenario((5, 5), inc(z(1), z(2)), partition((5,), lambda k: 2 if k == (0,) else 1))
    v = check_thm33(scn)
    assert v.conditions["a:S_invariant"] and v.conditions["a:coefficient_spaces_invariant"]
    assert v.conditions["b:i"] and v.consistent


def test_heads_criterion_single():
    v = check_thm33(scenario((4, 4), inc(z(1)), partition((4,), lambda k: 1)))
    assert v.conditions["a:S_invariant"] and v.labels["b:i:trailing"] == [{"monomial": [0]}]


def test_heads_criterion_negative():
    v = check_thm33(scenario((5, 5), inc(z(1), z(2)), partition((5,), lambda k: 1 if k == (1,) else 2)))
    assert not v.conditions["a:S_invariant"] and not v.conditions["a:coefficient_spaces_invariant"]
    assert v.consistent and "b:i" not in v.conditions


def test_heads_criterion_n3_nonprincipal_heads():
    # heads S_1 = span{k != 0}, S_2 = everything; mirror of the adversarial decreasing case
    scn = scenario((4, 4, 4), inc(z(1), z(2)), partition((4, 4), lambda k: 2 if k == (0, 0) else 1))
    v = check_thm33(scn)
    assert v.conditions["a:S_invariant"]
    assert not any(v.conditions[f"b:{c}"] for c in ("i", "ii", "iii", "iv")) and v.consistent


# -- k-variable terms ---------------------------------------------------------------


def test_remark_single():
    scn = Scenario("r", (3, 3, 3), (), k=2, seq=dec(mono((1, 1))), family=partition((3,), lambda k: 1))
    assert all(check_remark_k(scn).conditions.values())


def test_remark_worked_and_escape():
    seq = dec(mono((1, 2)), mono((1, 1)))
    good = Scenario("r", (3, 3, 3), (), k=2, seq=seq, family=partition((3,), lambda k: 1 if k == (0,) else 2))
    bad = Scenario("r", (3, 3, 3), (), k=2, seq=seq, family=partition((3,), lambda k: 1 if k == (1,) else 2))
    assert all(check_remark_k(good).conditions.values())
    assert not any(check_remark_k(bad).conditions.values())


def test_remark_against_brute_force():
    caps = (3, 3, 3)
    good = {k for k in oracles.box(caps) if (k[2] == 0 and k[0] >= 1 and k[1] >= 2) or (k[2] >= 1 and min(k[:2]) >= 1)}
    bad = {k for k in oracles.box(caps) if (k[2] == 1 and k[0] >= 1 and k[1] >= 2) or (k[2] != 1 and min(k[:2]) >= 1)}
    assert not oracles.monomial_invariant(good, caps, (1, 1, 1))
    assert oracles.monomial_invariant(bad, caps, (1, 1, 1))


# -- isometry -----------------------------------------------------------------------


def test_isometry_check_blaschke():
    scn = scenario((12, 1), dec(InnerFunction1D(1.0, (0.5,))), partition((1,), lambda k: 1), term_orders=(10,))
    v = run_check(scn, "isometry")
    assert not v.conditions["isometry"] and v.conditions["within_tail_bound"] and v.consistent


# -- unitary equivalence ------------------------------------------------------------

BASE = RudinSpec(dec(z(2), z(1)), inc(mono((0,)), mono((1,))))


def test_equivalence_shift_found():
    S = RudinSpec(dec(z(4), z(3)), BASE.second)
    v = check_thm41(Thm41Spec(S, BASE, max_m=3), BoxTruncation((8, 5)))
    assert v.labels["eta"] == {"monomial": 2}
    assert v.conditions["intertwines"] and v.conditions["unitary_onto"] and v.consistent
    assert max(v.residuals[f"intertwine:z{i}"] for i in (1, 2)) <= 1e-10


def test_equivalence_identity():
    v = check_thm41(Thm41Spec(BASE, BASE, max_m=2), BoxTruncation((6, 5)))
    assert v.labels["eta"] == {"monomial": 0}


def test_equivalence_reverse_direction():
    S = RudinSpec(dec(z(4), z(3)), BASE.second)
    v = check_thm41(Thm41Spec(BASE, S, max_m=3), BoxTruncation((8, 5)))
    assert v.labels["direction"] == "S~ = z1^m S" and v.conditions["intertwines"]


def test_equivalence_inconclusive():
    other = RudinSpec(BASE.first, inc(mono((0,)), mono((2,))))
    v = check_thm41(Thm41Spec(BASE, other), BoxTruncation((6, 5)))
    assert v.labels["equivalence"] == "not equivalent within search class"
    assert v.conditions == {"equivalent_within_search_class": False}


def test_equivalence_wrong_eta_is_not_a_witness():
    S = RudinSpec(dec(z(3), z(2)), BASE.second)
    v = check_thm41(Thm41Spec(S, BASE, eta=z(2)), BoxTruncation((8, 5)))
    assert not v.conditions["S_equals_eta_S~"] and v.labels["equivalence"] == "eta is not a witness"


def test_equivalence_requires_constant_first_trailing_term():
    bad = RudinSpec(dec(z(2), z(1)), inc(mono((1,)), mono((2,))))
    with pytest.raises(HypothesisError):
        check_thm41(Thm41Spec(bad, BASE), BoxTruncation((6, 5)))


def test_find_eta_monomial_returns_smallest():
    s = BoxTruncation((9, 4))
    a = build_rudin(dec(z(3), z(1)), inc(mono((0,)), mono((2,))), s)
    b = build_rudin(dec(z(5), z(3)), inc(mono((0,)), mono((2,))), s)
    mask = interior_mask(s, (4, 1))
    assert find_eta_monomial(b, a, 3, mask=mask).m == 2
    assert find_eta_monomial(a, a, 3, mask=mask).m == 0
