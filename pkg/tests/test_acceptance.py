"""Acceptance gate: nine end-to-end criteria at full bounds, each with
its stated time budget and a single PASS line on success."""

import itertools
import random
import time

import pytest
from conftest import (collapse_functor, comm_monoid_fp_context,
                      doubling_functor, end_pools, identity_weak_functor,
                      random_poly, skewed_group_instance, terminal_weakcat,
                      vector_pools, vectors)

from operad_workbench.cli import main as cli_main
from operad_workbench.clones import (EndClone, clone_roundtrip_check,
                                     roundtrip_check)
from operad_workbench.finmaps import FinFunction
from operad_workbench.operads import (CommMonoidFPOperad, EndOperad,
                                      Interpretation, IntPolyFPOperad,
                                      SymmetryOperad, assoc_instance_ok,
                                      builtin_operad, default_assignment,
                                      unit_instance_ok)
from operad_workbench.strictify import (check_equivalence, check_strictness,
                                        strictify, universal_property_check)
from operad_workbench.terms import (LINEAR, STRONGLY_REGULAR, Equation,
                                    classify_equation, classify_presentation,
                                    enumerate_terms, parse_presentation,
                                    parse_term)
from operad_workbench.trees import (enumerate_fp_trees, parse_tree, to_term,
                                    to_tree)
from operad_workbench.weakening import (FP_REJECTION, WeakeningContext,
                                        WeakeningFlavorError,
                                        biased_unbiased_agreement)
from oracles import (oracle_block_compose, oracle_monoid_vector_act,
                     oracle_monoid_vector_compose)


def terminal_plain_context(presentation) -> WeakeningContext:
    operad = builtin_operad("terminal-plain")
    interp = Interpretation(presentation, operad,
                            default_assignment(presentation, operad))
    return WeakeningContext(presentation, interp)


def test_criterion_1_classification(monoid, pointed, comm_monoid):
    start = time.perf_counter()
    lhs = parse_term("m(m(x1,x2),x3)")
    rhs = parse_term("m(x1,m(x2,x3))")
    assert classify_equation(Equation(3, lhs, rhs)) == STRONGLY_REGULAR
    assert classify_equation(Equation(4, lhs, rhs)) != STRONGLY_REGULAR
    assert classify_presentation(monoid) == STRONGLY_REGULAR
    assert classify_presentation(pointed) == STRONGLY_REGULAR
    assert classify_presentation(comm_monoid) == LINEAR
    assert classify_presentation(comm_monoid) != STRONGLY_REGULAR
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    print(f"PASS criterion 1: classification judgments exact "
          f"({elapsed:.2f}s)")


def test_criterion_2_term_tree_bijection(monoid):
    start = time.perf_counter()
    sig = monoid.signature
    terms = trees = failures = 0
    for arity in range(8):
        for t in enumerate_terms(sig, arity, 7):
            terms += 1
            if to_term(to_tree(t, arity)) != t:
                failures += 1
        for ft in enumerate_fp_trees(sig, arity, 7):
            trees += 1
            if to_tree(to_term(ft), arity) != ft:
                failures += 1
    assert failures == 0
    assert terms > 1000 and trees > 1000
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0
    print(f"PASS criterion 2: {terms} terms and {trees} split trees "
          f"round-trip exactly ({elapsed:.2f}s)")


def test_criterion_3_operad_axiom_suites():
    start = time.perf_counter()
    sym = SymmetryOperad()
    perms = {n: sym.enumerate_elements(n, 10 ** 6) for n in range(4)}

    for n in range(4):
        for sigma in perms[n]:
            assert unit_instance_ok(sym, sigma)

    composed = 0
    for n in range(4):
        for sigma in perms[n]:
            for ks in itertools.product(range(4), repeat=n):
                for taus in itertools.product(*[perms[k] for k in ks]):
                    got = sym.compose(sigma, list(taus))
                    assert got.table == oracle_block_compose(
                        sigma.table, [t.table for t in taus])
                    composed += 1

    # associativity with the full two-level data and a third level that
    # plugs one arbitrary small permutation at each slot in turn (the
    # all-identity level is the degenerate placement)
    assoc = 0
    for n in range(4):
        for sigma in perms[n]:
            for ks in itertools.product(range(4), repeat=n):
                for taus in itertools.product(*[perms[k] for k in ks]):
                    base = [[sym.identity()] * k for k in ks]
                    assert assoc_instance_ok(sym, sigma, list(taus), base)
                    assoc += 1
                    for i, k in enumerate(ks):
                        for j in range(k):
                            for ell in (0, 2, 3):
                                for u in perms[ell]:
                                    rss = [list(rs) for rs in base]
                                    rss[i][j] = u
                                    assert assoc_instance_ok(
                                        sym, sigma, list(taus), rss)
                                    assoc += 1

    comm = CommMonoidFPOperad()
    pools = {n: vectors(n, 2) for n in range(4)}
    comm_composed = 0
    for n in range(4):
        for p in pools[n]:
            for ks in itertools.product(range(4), repeat=n):
                for qs in itertools.product(*[pools[k] for k in ks]):
                    assert comm.compose(p, list(qs)) \
                        == oracle_monoid_vector_compose(p, list(qs))
                    comm_composed += 1
    comm_acted = 0
    for m in range(4):
        for n in range(4):
            for table in itertools.product(range(1, n + 1), repeat=m):
                f = FinFunction(m, n, table)
                for p in pools[m]:
                    assert comm.act_fn(f, p) \
                        == oracle_monoid_vector_act(list(table), n, p)
                    comm_acted += 1

    ipoly = IntPolyFPOperad()
    rng = random.Random(20260816)
    points = 0
    for _ in range(12):
        n = rng.randint(0, 2)
        p = random_poly(rng, n)
        ms = [rng.randint(0, 2) for _ in range(n)]
        qs = [random_poly(rng, m) for m in ms]
        composite = ipoly.compose(p, qs)
        for _ in range(5):
            blocks = [tuple(rng.randint(-4, 4) for _ in range(m))
                      for m in ms]
            flat = tuple(x for block in blocks for x in block)
            inner = tuple(q.evaluate(block)
                          for q, block in zip(qs, blocks))
            assert composite.evaluate(flat) == p.evaluate(inner)
            points += 1

    elapsed = time.perf_counter() - start
    assert elapsed < 60.0
    print(f"PASS criterion 3: symmetry compose x{composed} assoc x{assoc}, "
          f"vector compose x{comm_composed} act x{comm_acted}, "
          f"polynomial points x{points} ({elapsed:.2f}s)")


def test_criterion_4_clone_bridge_roundtrips():
    start = time.perf_counter()
    operad_side = roundtrip_check(CommMonoidFPOperad(), vector_pools())
    assert operad_side.ok, operad_side.lines()
    end_operad_side = roundtrip_check(EndOperad(3), end_pools(3))
    assert end_operad_side.ok, end_operad_side.lines()
    end_clone_side = clone_roundtrip_check(EndClone(3), end_pools(3))
    assert end_clone_side.ok, end_clone_side.lines()
    checked = sum(operad_side.checked.values()) \
        + sum(end_operad_side.checked.values()) \
        + sum(end_clone_side.checked.values())
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0
    print(f"PASS criterion 4: both bridge directions identity on "
          f"{checked} instances ({elapsed:.2f}s)")


def test_criterion_5_coherence_shadow(comm_monoid):
    start = time.perf_counter()
    ctx_eval = comm_monoid_fp_context(comm_monoid)
    ctx_sat = WeakeningContext(comm_monoid)
    objs = {n: ctx_eval.enumerate_objects(n, 6) for n in range(5)}
    assert [len(objs[n]) for n in range(5)] == [4, 9, 14, 12, 0]
    same = cross = 0
    merged_traces = 0
    for n in range(5):
        for o1 in objs[n]:
            for o2 in objs[n]:
                d_eval = ctx_eval.two_cell(o1, o2)
                d_sat = ctx_sat.two_cell(o1, o2)
                assert d_eval.yes and d_sat.yes, (n, o1, o2)
                if d_sat.trace:
                    merged_traces += 1
                same += 1
    for n in range(5):
        for m in range(5):
            if n == m:
                continue
            for o1 in objs[n]:
                for o2 in objs[m]:
                    assert ctx_eval.two_cell(o1, o2).answer == "no"
                    assert ctx_sat.two_cell(o1, o2).answer == "no"
                    cross += 1
    assert merged_traces > 0
    elapsed = time.perf_counter() - start
    assert elapsed < 120.0
    print(f"PASS criterion 5: {same} same-arity pairs merged by both "
          f"engines, {cross} cross-arity pairs refused ({elapsed:.2f}s)")


def test_criterion_6_weakening_examples(pointed, pointed_abcd, trivial):
    start = time.perf_counter()
    single = WeakeningContext(pointed).enumerate_classes(0, 6)
    assert len(single) == 1
    assert list(single[0].members) == [parse_tree("c", pointed.signature)]
    ctx = terminal_plain_context(pointed_abcd)
    classes = ctx.enumerate_classes(0, 6)
    assert len(classes) == 1
    assert len(classes[0].members) == 4
    sig = pointed_abcd.signature
    assert ctx.two_cell(parse_tree("a", sig), parse_tree("d", sig)).yes
    assert WeakeningContext(trivial).enumerate_classes(0, 6) == []
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    print(f"PASS criterion 6: single class, merged four-generator class, "
          f"empty theory empty ({elapsed:.2f}s)")


def test_criterion_7_strictification(z3_instance, z4_instance, monoid):
    start = time.perf_counter()
    for W, expected in ((z3_instance, 40), (z4_instance, 85)):
        S = strictify(W)
        assert len(S.objects) == expected
        strict = check_strictness(S, arrow_cap=6, instance_cap=10 ** 6)
        assert strict.ok, strict.lines()
        equiv = check_equivalence(S, W)
        assert equiv.ok, equiv.lines()
        assert equiv.checked["hom bijection"] == expected ** 2
        assert equiv.checked["essential surjectivity"] \
            == len(W.base.objects)
    maps = (identity_weak_functor(z3_instance),
            collapse_functor(z3_instance, terminal_weakcat(monoid)),
            doubling_functor(z3_instance))
    for G in maps:
        report = universal_property_check(z3_instance, G.target, G)
        assert report.ok, report.lines()
        assert report.checked["uniqueness pins"] > 0
    bad = strictify(skewed_group_instance(monoid))
    assert not check_strictness(bad, arrow_cap=3, instance_cap=400).ok
    elapsed = time.perf_counter() - start
    assert elapsed < 120.0
    print(f"PASS criterion 7: strict action, comparison, and {len(maps)} "
          f"unique induced maps; skewed control caught ({elapsed:.2f}s)")


def test_criterion_8_presentation_independence(monoid, unbiased_monoid):
    start = time.perf_counter()
    report = biased_unbiased_agreement(terminal_plain_context(monoid),
                                       terminal_plain_context(unbiased_monoid),
                                       range(4), 6)
    assert report.ok, report.lines()
    for arity, (left, right) in report.arities.items():
        assert left == right
        assert len(left) == 1
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0
    print(f"PASS criterion 8: identical partitions at arities 0..3 "
          f"({elapsed:.2f}s)")


def test_criterion_9_fp_rejection(tmp_path, capsys):
    text = ("theory Dup\nflavor fp\nops:\n  m : 2\neqs:\n"
            "  @1: m(x1,x1) = x1\n")
    with pytest.raises(WeakeningFlavorError) as caught:
        WeakeningContext(parse_presentation(text))
    assert str(caught.value) == FP_REJECTION
    assert "tau_{A,A}" in FP_REJECTION
    assert "degenerate" in FP_REJECTION
    path = tmp_path / "dup.th"
    path.write_text(text, encoding="utf-8")
    code = cli_main(["decide", str(path), "m(x1,x1)", "x1"])
    err = capsys.readouterr().err
    assert code == 3
    assert "tau_{A,A}" in err
    print("PASS criterion 9: fp weakening rejected with the degeneracy "
          "diagnostic, exit 3")
