"""Operation trees and their permuted and relabelled variants.

A plain tree is a grafting of operation symbols with `|` leaves marking
open inputs; its arity is the leaf count. A permuted tree pairs a plain
tree with a permutation of its inputs, a relabelled tree pairs it with
an arbitrary finite function out of its inputs. The pairs are literal:
two pairs are equal exactly when both components are.

Composition grafts inner trees into the outer tree's leaves after
routing them through the outer function, and combines the functions by
the block-substitution rule from finmaps. Relabelling acts on the pair
by post-composition on the function component.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Sequence

from .finmaps import (FinFunction, FinMapError, comb_compose, compose,
                      format_fn, format_perm, identity, parse_fn, perm,
                      perm_identity, select)
from .terms import App, Signature, Term, Var, label_fn


class TreeError(ValueError):
    pass


@dataclass(frozen=True)
class Leaf:
    pass


@dataclass(frozen=True)
class Node:
    op: str
    children: tuple["Tree", ...]


Tree = Leaf | Node

LEAF = Leaf()


def tree_arity(t: Tree) -> int:
    if isinstance(t, Leaf):
        return 1
    return sum(tree_arity(c) for c in t.children)


def tree_size(t: Tree) -> int:
    if isinstance(t, Leaf):
        return 1
    return 1 + sum(tree_size(c) for c in t.children)


def validate_tree(t: Tree, signature: Signature) -> None:
    if isinstance(t, Leaf):
        return
    declared = signature.arity(t.op)
    if len(t.children) != declared:
        raise TreeError(
            f"operation {t.op!r} expects {declared} children, got {len(t.children)}")
    for c in t.children:
        validate_tree(c, signature)


def graft(t: Tree, subs: Sequence[Tree]) -> Tree:
    """Replace the i-th leaf (left to right) with subs[i]."""
    if len(subs) != tree_arity(t):
        raise TreeError(
            f"graft needs {tree_arity(t)} trees, got {len(subs)}")
    grafted, rest = _graft(t, tuple(subs))
    assert not rest
    return grafted


def _graft(t: Tree, subs: tuple[Tree, ...]) -> tuple[Tree, tuple[Tree, ...]]:
    if isinstance(t, Leaf):
        return subs[0], subs[1:]
    children = []
    for c in t.children:
        built, subs = _graft(c, subs)
        children.append(built)
    return Node(t.op, tuple(children)), subs


@dataclass(frozen=True)
class PermutedTree:
    """A plain tree with a permutation of its inputs."""

    perm: FinFunction
    tree: Tree

    def __post_init__(self):
        if not self.perm.is_bijection:
            raise TreeError("permuted tree needs a bijection")
        if self.perm.dom != tree_arity(self.tree):
            raise TreeError(
                f"permutation degree {self.perm.dom} does not match "
                f"tree arity {tree_arity(self.tree)}")

    @property
    def arity(self) -> int:
        return self.perm.dom


@dataclass(frozen=True)
class FPTree:
    """A plain tree with a relabelling function on its inputs.

    The function's domain is the tree's leaf count; the pair's arity is
    the function's codomain, so inputs may be shared or dropped.
    """

    fn: FinFunction
    tree: Tree

    def __post_init__(self):
        if self.fn.dom != tree_arity(self.tree):
            raise TreeError(
                f"function domain {self.fn.dom} does not match "
                f"tree arity {tree_arity(self.tree)}")

    @property
    def arity(self) -> int:
        return self.fn.cod


def leaf_permuted(n: int = 1) -> PermutedTree:
    if n != 1:
        raise TreeError("the unit tree has arity 1")
    return PermutedTree(perm_identity(1), LEAF)


def leaf_fp(n: int = 1) -> FPTree:
    if n != 1:
        raise TreeError("the unit tree has arity 1")
    return FPTree(identity(1), LEAF)


def compose_permuted(outer: PermutedTree, inner: Sequence[PermutedTree]
                     ) -> PermutedTree:
    """Graft permuted trees into a permuted tree.

    Leaf j of the outer tree receives the inner tree routed there by the
    outer permutation, and the permutations combine by block
    substitution of the inner permutations into the outer one.
    """
    if len(inner) != outer.arity:
        raise TreeError(
            f"composition needs {outer.arity} inner trees, got {len(inner)}")
    perms = [p.perm for p in inner]
    trees = tuple(p.tree for p in inner)
    combined = comb_compose(outer.perm, perms)
    return PermutedTree(combined, graft(outer.tree, select(outer.perm, trees)))


def compose_fp(outer: FPTree, inner: Sequence[FPTree]) -> FPTree:
    """Graft relabelled trees into a relabelled tree, one per output slot."""
    if len(inner) != outer.arity:
        raise TreeError(
            f"composition needs {outer.arity} inner trees, got {len(inner)}")
    fns = [p.fn for p in inner]
    trees = tuple(p.tree for p in inner)
    combined = comb_compose(outer.fn, fns)
    return FPTree(combined, graft(outer.tree, select(outer.fn, trees)))


def act_perm_tree(rho: FinFunction, pt: PermutedTree) -> PermutedTree:
    if not rho.is_bijection:
        raise TreeError("action needs a bijection")
    return PermutedTree(compose(rho, pt.perm), pt.tree)


def act_fn_tree(g: FinFunction, ft: FPTree) -> FPTree:
    return FPTree(compose(g, ft.fn), ft.tree)


def as_fp(pt: PermutedTree) -> FPTree:
    return FPTree(pt.perm, pt.tree)


def as_permuted(ft: FPTree) -> PermutedTree:
    if not ft.fn.is_bijection:
        raise TreeError("function component is not a bijection")
    return PermutedTree(ft.fn, ft.tree)


def as_plain(ft: FPTree) -> Tree:
    if not ft.fn.is_identity:
        raise TreeError("function component is not an identity")
    return ft.tree


def to_term_alpha(t: Tree, alphabet: Sequence[int]) -> Term:
    """Read a tree as a term whose i-th leaf is the variable alphabet[i]."""
    if len(alphabet) != tree_arity(t):
        raise TreeError(
            f"alphabet length {len(alphabet)} does not match arity {tree_arity(t)}")
    built, rest = _to_term(t, tuple(alphabet))
    assert not rest
    return built


def _to_term(t: Tree, alphabet: tuple[int, ...]) -> tuple[Term, tuple[int, ...]]:
    if isinstance(t, Leaf):
        return Var(alphabet[0]), alphabet[1:]
    args = []
    for c in t.children:
        arg, alphabet = _to_term(c, alphabet)
        args.append(arg)
    return App(t.op, tuple(args)), alphabet


def to_term(ft: FPTree | PermutedTree) -> Term:
    """Read a tree pair as a term: the function labels the leaves."""
    f = ft.fn if isinstance(ft, FPTree) else ft.perm
    return to_term_alpha(ft.tree, f.table)


def shape(t: Term) -> Tree:
    if isinstance(t, Var):
        return LEAF
    return Node(t.op, tuple(shape(a) for a in t.args))


def to_tree(t: Term, n: int) -> FPTree:
    """Split a term into its leaf shape and its labelling function."""
    return FPTree(label_fn(t, n), shape(t))


def classify_tree_side(ft: FPTree) -> str:
    from .terms import GENERAL, LINEAR, STRONGLY_REGULAR
    if ft.fn.is_identity:
        return STRONGLY_REGULAR
    if ft.fn.is_bijection:
        return LINEAR
    return GENERAL


def format_tree(t: Tree) -> str:
    if isinstance(t, Leaf):
        return "|"
    if not t.children:
        return t.op
    return f"{t.op}({','.join(format_tree(c) for c in t.children)})"


def format_permuted_tree(pt: PermutedTree) -> str:
    return f"{format_perm(pt.perm)} {format_tree(pt.tree)}"


def format_fp_tree(ft: FPTree) -> str:
    return f"{format_fn(ft.fn)} {format_tree(ft.tree)}"


_PREFIX_RE = re.compile(r"^\s*(\[[^\]]*\])\s*(.*)$", re.DOTALL)


class _TreeParser:
    def __init__(self, text: str, signature: Signature | None):
        self.text = text
        self.pos = 0
        self.signature = signature

    def error(self, message: str) -> TreeError:
        return TreeError(f"{message} at column {self.pos + 1} in {self.text!r}")

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def tree(self) -> Tree:
        self.skip_ws()
        if self.peek() == "|":
            self.pos += 1
            return LEAF
        m = re.compile(r"[A-Za-z_][A-Za-z0-9_]*").match(self.text, self.pos)
        if not m:
            raise self.error("expected '|' or an operation name")
        name = m.group(0)
        self.pos = m.end()
        self.skip_ws()
        children: tuple[Tree, ...] = ()
        if self.peek() == "(":
            self.pos += 1
            parsed = [self.tree()]
            self.skip_ws()
            while self.peek() == ",":
                self.pos += 1
                parsed.append(self.tree())
                self.skip_ws()
            if self.peek() != ")":
                raise self.error("expected ')'")
            self.pos += 1
            children = tuple(parsed)
        node = Node(name, children)
        if self.signature is not None:
            if name not in self.signature:
                raise self.error(f"unknown operation {name!r}")
            declared = self.signature.arity(name)
            if len(children) != declared:
                raise self.error(
                    f"operation {name!r} expects {declared} children, "
                    f"got {len(children)}")
        return node

    def finish(self):
        self.skip_ws()
        if self.pos != len(self.text):
            raise self.error("trailing input")


def parse_tree(text: str, signature: Signature | None = None) -> Tree:
    parser = _TreeParser(text, signature)
    t = parser.tree()
    parser.finish()
    return t


def _split_prefix(text: str) -> tuple[str | None, str]:
    m = _PREFIX_RE.match(text)
    if m:
        return m.group(1), m.group(2)
    return None, text


def parse_permuted_tree(text: str, signature: Signature | None = None
                        ) -> PermutedTree:
    """Parse `[perm] tree`; a missing prefix means the identity."""
    prefix, rest = _split_prefix(text)
    tree = parse_tree(rest, signature)
    if prefix is None:
        return PermutedTree(perm_identity(tree_arity(tree)), tree)
    try:
        p = perm(parse_fn(prefix).table)
    except FinMapError as exc:
        raise TreeError(str(exc)) from exc
    return PermutedTree(p, tree)


def parse_fp_tree(text: str, signature: Signature | None = None) -> FPTree:
    """Parse `[table->cod] tree`; a missing prefix means the identity."""
    prefix, rest = _split_prefix(text)
    tree = parse_tree(rest, signature)
    if prefix is None:
        return FPTree(identity(tree_arity(tree)), tree)
    try:
        f = parse_fn(prefix)
    except FinMapError as exc:
        raise TreeError(str(exc)) from exc
    return FPTree(f, tree)


def enumerate_trees(signature: Signature, arity: int, max_size: int) -> list[Tree]:
    """All trees with the given leaf count and at most max_size nodes."""
    cache: dict[tuple[int, int], list[Tree]] = {}

    def of(size: int, leaves: int) -> list[Tree]:
        key = (size, leaves)
        if key in cache:
            return cache[key]
        found: list[Tree] = []
        if size == 1:
            if leaves == 1:
                found.append(LEAF)
            if leaves == 0:
                found.extend(Node(op, ()) for op, k in signature.ops if k == 0)
        else:
            for op, k in signature.ops:
                if k == 0:
                    continue
                for sizes in _compositions(size - 1, k):
                    for split in _weak_compositions(leaves, k):
                        pools = [of(s, l) for s, l in zip(sizes, split)]
                        if any(not pool for pool in pools):
                            continue
                        for combo in itertools.product(*pools):
                            found.append(Node(op, combo))
        cache[key] = found
        return found

    out: list[Tree] = []
    for size in range(1, max_size + 1):
        out.extend(of(size, arity))
    return sorted(out, key=lambda t: (tree_size(t), format_tree(t)))


def enumerate_permuted_trees(signature: Signature, arity: int, max_size: int
                             ) -> list[PermutedTree]:
    out = []
    for tree in enumerate_trees(signature, arity, max_size):
        for table in itertools.permutations(range(1, arity + 1)):
            out.append(PermutedTree(perm(table), tree))
    return sorted(out, key=lambda pt: (tree_size(pt.tree), format_permuted_tree(pt)))


def enumerate_fp_trees(signature: Signature, arity: int, max_size: int,
                       max_leaves: int | None = None) -> list[FPTree]:
    out = []
    for leaves in range(0, (max_leaves if max_leaves is not None else max_size) + 1):
        trees = [t for t in enumerate_trees(signature, leaves, max_size)]
        if not trees:
            continue
        for table in itertools.product(range(1, arity + 1), repeat=leaves):
            f = FinFunction(leaves, arity, table)
            out.extend(FPTree(f, t) for t in trees)
    return sorted(out, key=lambda ft: (tree_size(ft.tree), format_fp_tree(ft)))


def _compositions(total: int, parts: int) -> list[tuple[int, ...]]:
    if parts == 0:
        return [()] if total == 0 else []
    if parts == 1:
        return [(total,)] if total >= 1 else []
    out = []
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            out.append((first,) + rest)
    return out


def _weak_compositions(total: int, parts: int) -> list[tuple[int, ...]]:
    if parts == 0:
        return [()] if total == 0 else []
    if parts == 1:
        return [(total,)]
    out = []
    for first in range(0, total + 1):
        for rest in _weak_compositions(total - first, parts - 1):
            out.append((first,) + rest)
    return out
