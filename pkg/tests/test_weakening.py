"""Weakening of a presented theory along a target interpretation: the
two decision engines, class enumeration, and the worked examples."""

import pytest

from conftest import comm_monoid_fp_context, replay_chain
from operad_workbench.operads import (Interpretation, TerminalPlainOperad,
                                      TerminalSymmetricOperad,
                                      builtin_operad, default_assignment)
from operad_workbench.terms import Presentation, parse_term
from operad_workbench.trees import (PermutedTree, graft, parse_permuted_tree,
                                    parse_tree, to_tree, tree_size)
from operad_workbench.weakening import (FP_REJECTION, WeakeningContext,
                                        WeakeningError,
                                        WeakeningFlavorError,
                                        biased_unbiased_agreement,
                                        enumerate_classes, two_cell)


def plain_terminal_context(presentation, **kwargs) -> WeakeningContext:
    operad = TerminalPlainOperad()
    interp = Interpretation(presentation, operad,
                            default_assignment(presentation, operad))
    return WeakeningContext(presentation, interp, **kwargs)


def test_fp_flavor_is_rejected():
    fp = Presentation("Dup", "fp", *_dup_signature_and_equations())
    with pytest.raises(WeakeningFlavorError) as err:
        WeakeningContext(fp)
    assert "tau_{A,A}" in str(err.value)
    assert "degenerate" in str(err.value)
    assert str(err.value) == FP_REJECTION


def _dup_signature_and_equations():
    from operad_workbench.terms import Equation, Signature
    sig = Signature.of({"p": 2})
    dup = Equation(1, parse_term("p(x1,x1)"), parse_term("x1"))
    return sig, (dup,)


def test_fp_trees_are_not_objects(monoid):
    ctx = plain_terminal_context(monoid)
    with pytest.raises(WeakeningError):
        ctx.object_arity(to_tree(parse_term("m(x1,x1)"), 1))


def test_permuted_trees_need_symmetric_flavor(monoid, comm_monoid):
    pt = parse_permuted_tree("[2,1] m(|,|)", monoid.signature)
    with pytest.raises(WeakeningError):
        plain_terminal_context(monoid).object_arity(pt)
    assert comm_monoid_fp_context(comm_monoid).object_arity(pt) == 2


def test_pointed_weakening_has_one_nullary_class(pointed):
    ctx = plain_terminal_context(pointed)
    classes = ctx.enumerate_classes(0, 6)
    assert len(classes) == 1
    assert classes[0].members == (parse_tree("c", pointed.signature),)


def test_four_generators_fall_into_one_class(pointed_abcd):
    ctx = plain_terminal_context(pointed_abcd)
    classes = ctx.enumerate_classes(0, 6)
    assert len(classes) == 1
    assert len(classes[0].members) == 4
    decision = ctx.two_cell(parse_tree("a", pointed_abcd.signature),
                            parse_tree("d", pointed_abcd.signature))
    assert decision.yes


def test_trivial_theory_has_no_nullary_classes(trivial):
    ctx = plain_terminal_context(trivial)
    assert ctx.enumerate_classes(0, 6) == []


def test_comm_monoid_class_counts(comm_monoid):
    ctx = comm_monoid_fp_context(comm_monoid)
    counts = {n: sum(len(c.members) for c in ctx.enumerate_classes(n, 6))
              for n in range(4)}
    assert counts == {0: 4, 1: 9, 2: 14, 3: 12}
    for n in range(4):
        # permuted trees carry each variable once, so one class per arity
        assert len(ctx.enumerate_classes(n, 6)) == 1


def test_two_cell_engines_agree_on_comm_monoid(comm_monoid):
    eval_ctx = comm_monoid_fp_context(comm_monoid)
    closure_ctx = WeakeningContext(comm_monoid)
    for arity in range(3):
        objects = eval_ctx.enumerate_objects(arity, 5)
        for a in objects:
            for b in objects:
                by_eval = eval_ctx.two_cell(a, b)
                by_closure = closure_ctx.two_cell(a, b)
                assert by_eval.yes
                assert by_closure.yes, (a, b, by_closure.reason)
                replay_chain(comm_monoid.equations, by_closure.trace,
                             closure_ctx.object_term(a),
                             closure_ctx.object_term(b))


def test_unequal_arities_are_refused(comm_monoid):
    ctx = comm_monoid_fp_context(comm_monoid)
    a = ctx.enumerate_objects(1, 4)[0]
    b = ctx.enumerate_objects(2, 4)[0]
    decision = ctx.two_cell(a, b)
    assert decision.answer == "no"
    assert "arities" in decision.reason


def test_oversized_terms_answer_unknown(monoid):
    ctx = WeakeningContext(monoid, max_term_size=5)
    big = parse_tree("m(m(e,e),m(e,m(e,e)))", monoid.signature)
    decision = ctx.two_cell(big, parse_tree("e", monoid.signature))
    assert decision.answer == "unknown"
    assert "size bound" in decision.reason


def test_closure_traces_replay(monoid):
    ctx = WeakeningContext(monoid)
    a = parse_tree("m(e,m(|,e))", monoid.signature)
    b = parse_tree("|", monoid.signature)
    decision = ctx.two_cell(a, b)
    assert decision.yes
    replay_chain(monoid.equations, decision.trace,
                 ctx.object_term(a), ctx.object_term(b))


def test_two_cell_respects_grafting(monoid):
    ctx = WeakeningContext(monoid, max_term_size=7)
    sig = monoid.signature
    m = parse_tree("m(|,|)", sig)
    t1, t2 = parse_tree("m(e,|)", sig), parse_tree("|", sig)
    u1, u2 = parse_tree("m(|,e)", sig), parse_tree("|", sig)
    assert ctx.two_cell(t1, t2).yes and ctx.two_cell(u1, u2).yes
    assert ctx.two_cell(graft(m, [t1, u1]), graft(m, [t2, u2])).yes


def test_two_cell_is_an_equivalence_on_a_stratum(comm_monoid):
    ctx = WeakeningContext(comm_monoid)
    objects = ctx.enumerate_objects(2, 4)
    for a in objects:
        assert ctx.two_cell(a, a).yes
    for a in objects:
        for b in objects:
            assert ctx.two_cell(a, b).answer == ctx.two_cell(b, a).answer


def unbiased_terminal_context(unbiased_monoid):
    return plain_terminal_context(unbiased_monoid)


def test_biased_unbiased_agreement(monoid, unbiased_monoid):
    ctx_a = plain_terminal_context(monoid)
    ctx_b = plain_terminal_context(unbiased_monoid)
    report = biased_unbiased_agreement(ctx_a, ctx_b, range(4), max_size=6)
    assert report.ok, report.lines()
    for arity, (left, right) in report.arities.items():
        assert len(left) == len(right) == 1


def test_agreement_needs_matching_targets(monoid, comm_monoid):
    ctx_a = plain_terminal_context(monoid)
    ctx_b = comm_monoid_fp_context(comm_monoid)
    with pytest.raises(WeakeningError):
        biased_unbiased_agreement(ctx_a, ctx_b, (1,), 4)


def test_module_level_wrappers(pointed):
    ctx = plain_terminal_context(pointed)
    c = parse_tree("c", pointed.signature)
    assert two_cell(ctx, c, c).yes
    assert len(enumerate_classes(ctx, 0, 4)) == 1
