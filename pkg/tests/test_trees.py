"""Operation trees: grafting laws, pair composition, and the
term/tree correspondence."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from operad_workbench.finmaps import fn, identity, perm, select
from operad_workbench.terms import (Signature, enumerate_terms, format_term,
                                    max_var, parse_term, rename_vars,
                                    term_size)
from operad_workbench.trees import (FPTree, LEAF, Leaf, Node, PermutedTree,
                                    TreeError, act_fn_tree, act_perm_tree,
                                    as_fp, as_permuted, as_plain,
                                    classify_tree_side, compose_fp,
                                    compose_permuted, enumerate_fp_trees,
                                    enumerate_permuted_trees, enumerate_trees,
                                    format_fp_tree, format_permuted_tree,
                                    format_tree, graft, leaf_fp,
                                    leaf_permuted, parse_fp_tree,
                                    parse_permuted_tree, parse_tree, shape,
                                    to_term, to_term_alpha, to_tree,
                                    tree_arity, tree_size)

SIG = Signature.of({"m": 2, "e": 0})


def tr(text):
    return parse_tree(text, SIG)


def test_sizes_and_arities():
    t = tr("m(m(|,e),|)")
    assert tree_arity(t) == 2
    assert tree_size(t) == 5
    assert tree_arity(LEAF) == 1 and tree_size(LEAF) == 1


def test_parse_format_roundtrip():
    for text in ("|", "e", "m(|,|)", "m(m(|,e),m(e,|))"):
        assert format_tree(tr(text)) == text
    pt = parse_permuted_tree("[2,1] m(|,|)", SIG)
    assert pt == PermutedTree(perm((2, 1)), tr("m(|,|)"))
    assert format_permuted_tree(pt) == "[2,1] m(|,|)"
    ft = parse_fp_tree("[1,1 -> 1] m(|,|)", SIG)
    assert ft == FPTree(fn((1, 1), cod=1), tr("m(|,|)"))
    # an inferable codomain is elided when printing
    assert format_fp_tree(ft) == "[1,1] m(|,|)"
    assert parse_fp_tree(format_fp_tree(ft), SIG) == ft
    with pytest.raises(TreeError):
        parse_tree("m(|)", SIG)


def all_trees(max_size=4, arities=(0, 1, 2)):
    out = []
    for n in arities:
        out.extend(enumerate_trees(SIG, n, max_size))
    return out


def test_graft_unit_laws():
    for t in all_trees():
        n = tree_arity(t)
        assert graft(t, [LEAF] * n) == t
        assert graft(LEAF, [t]) == t


def test_graft_associativity():
    pool = all_trees(max_size=3)
    small = [t for t in pool if tree_arity(t) <= 2]
    for t in [u for u in small if tree_arity(u) == 2]:
        for ys in itertools.product(small, repeat=2):
            inner_total = sum(tree_arity(y) for y in ys)
            for zs in itertools.product(
                    [u for u in small if tree_arity(u) <= 1],
                    repeat=inner_total):
                lhs = graft(graft(t, ys), zs)
                chunks = []
                at = 0
                for y in ys:
                    k = tree_arity(y)
                    chunks.append(zs[at:at + k])
                    at += k
                rhs = graft(t, [graft(y, c) for y, c in zip(ys, chunks)])
                assert lhs == rhs


def permuted_pool(max_size=3, arities=(0, 1, 2)):
    out = []
    for n in arities:
        out.extend(enumerate_permuted_trees(SIG, n, max_size))
    return out


def test_compose_permuted_unit_laws():
    for pt in permuted_pool():
        n = pt.arity
        assert compose_permuted(pt, [leaf_permuted()] * n) == pt
        assert compose_permuted(leaf_permuted(), [pt]) == pt


def test_compose_permuted_associativity():
    pool = permuted_pool(max_size=3, arities=(0, 1, 2))
    outers = [pt for pt in pool if pt.arity == 2][:8]
    inners = [pt for pt in pool if pt.arity <= 1]
    for x in outers:
        for ys in itertools.product(inners, repeat=2):
            mid = compose_permuted(x, list(ys))
            total = mid.arity
            for zs in itertools.product(inners[:4], repeat=total):
                lhs = compose_permuted(mid, list(zs))
                chunks = []
                at = 0
                for y in ys:
                    k = y.arity
                    chunks.append(list(zs[at:at + k]))
                    at += k
                rhs = compose_permuted(
                    x, [compose_permuted(y, c) for y, c in zip(ys, chunks)])
                assert lhs == rhs


def test_compose_permuted_tracks_terms():
    # composing pairs is substitution of terms: variable v of the outer
    # pair receives the v-th inner term, relabelled into its block
    x = parse_permuted_tree("[2,1] m(|,|)", SIG)
    y1 = parse_permuted_tree("[1,2] m(|,m(|,e))", SIG)
    y2 = leaf_permuted()
    composite = compose_permuted(x, [y1, y2])
    assert to_term(composite) == parse_term("m(x3,m(x1,m(x2,e)))")


def test_compose_fp_matches_fp_term_substitution():
    x = parse_fp_tree("[1,1 -> 1] m(|,|)", SIG)
    y = parse_fp_tree("[2,1 -> 2] m(|,m(|,e))", SIG)
    composite = compose_fp(x, [y])
    assert to_term(composite) == parse_term("m(m(x2,m(x1,e)),m(x2,m(x1,e)))")
    assert composite.arity == 2


def test_unit_trees_and_actions():
    assert leaf_permuted() == PermutedTree(perm((1,)), LEAF)
    assert leaf_fp() == FPTree(identity(1), LEAF)
    pt = parse_permuted_tree("[2,1] m(|,|)", SIG)
    rho = perm((2, 1))
    acted = act_perm_tree(rho, pt)
    assert acted.perm == identity(2) and acted.tree == pt.tree
    ft = parse_fp_tree("[1,2 -> 2] m(|,|)", SIG)
    g = fn((1, 1), cod=1)
    assert act_fn_tree(g, ft) == FPTree(fn((1, 1), cod=1), ft.tree)


def test_act_is_a_left_action():
    rho = perm((2, 3, 1))
    tau = perm((3, 2, 1))
    for pt in enumerate_permuted_trees(SIG, 3, 5)[:12]:
        one = act_perm_tree(rho, act_perm_tree(tau, pt))
        from operad_workbench.finmaps import compose
        assert one == act_perm_tree(compose(rho, tau), pt)


def test_conversions():
    pt = parse_permuted_tree("[2,1] m(|,|)", SIG)
    assert as_permuted(as_fp(pt)) == pt
    assert as_plain(FPTree(identity(2), pt.tree)) == pt.tree
    with pytest.raises(TreeError):
        as_permuted(parse_fp_tree("[1,1 -> 1] m(|,|)", SIG))
    with pytest.raises(TreeError):
        as_plain(as_fp(pt))


def test_term_tree_roundtrip_small():
    for arity in range(0, 4):
        for term in enumerate_terms(SIG, arity, 5):
            pair = to_tree(term, arity)
            assert to_term(pair) == term
        for pair in enumerate_fp_trees(SIG, arity, 5, max_leaves=5):
            term = to_term(pair)
            assert to_tree(term, arity) == pair


def test_to_term_alpha_orders_leaves():
    t = tr("m(m(|,e),|)")
    assert to_term_alpha(t, (5, 2)) == parse_term("m(m(x5,e),x2)")
    with pytest.raises(TreeError):
        to_term_alpha(t, (1,))


def test_shape_forgets_labels():
    term = parse_term("m(m(x2,e),x1)")
    assert shape(term) == tr("m(m(|,e),|)")


def test_classify_tree_side():
    assert classify_tree_side(parse_fp_tree("[1,2 -> 2] m(|,|)", SIG)) \
        == "strongly_regular"
    assert classify_tree_side(parse_fp_tree("[2,1 -> 2] m(|,|)", SIG)) \
        == "linear"
    assert classify_tree_side(parse_fp_tree("[1,1 -> 1] m(|,|)", SIG)) \
        == "general"


def test_enumerations_are_sorted_and_well_formed():
    trees = enumerate_trees(SIG, 2, 5)
    assert len(trees) == len(set(trees))
    assert all(tree_arity(t) == 2 and tree_size(t) <= 5 for t in trees)
    sizes = [tree_size(t) for t in trees]
    assert sizes == sorted(sizes)
    pts = enumerate_permuted_trees(SIG, 2, 5)
    assert len(pts) == 2 * len(trees)
    fps = enumerate_fp_trees(SIG, 1, 3, max_leaves=2)
    assert all(ft.arity == 1 for ft in fps)
