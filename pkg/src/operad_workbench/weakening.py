"""The weakened structure over a presented theory, as a decision procedure.

Objects at arity n are the trees of that arity over the presentation's
signature (plain trees, or permuted trees for the symmetric flavor).
Between two objects there is at most one invertible 2-cell, and it
exists exactly when the generator map identifies them. With a target
interpretation this is decidable by evaluation; without one, bounded
saturation of the equations gives a sound yes/unknown procedure. The
hom structure is never stored, only decided.

The finite-product flavor is rejected outright: duplication and
deletion actions force every interchange component at a repeated
object, the map usually written tau_{A,A}, to be an identity, so
nothing genuinely weak survives. Use plain or symmetric flavor.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .operads import Interpretation, map_maybe_parallel
from .terms import (Presentation, RewriteStep, SaturationResult, Term,
                    closure_saturate, format_term)
from .trees import (FPTree, PermutedTree, Tree, enumerate_permuted_trees,
                    enumerate_trees, format_permuted_tree, format_tree,
                    to_term, to_term_alpha, tree_arity, tree_size)

FP_REJECTION = (
    "finite-product weakening is degenerate: the duplication action forces "
    "every interchange component at a repeated object (tau_{A,A}) to be an "
    "identity, so no genuinely weak structure remains; use plain or "
    "symmetric flavor")


class WeakeningError(ValueError):
    pass


class WeakeningFlavorError(WeakeningError):
    def __init__(self):
        super().__init__(FP_REJECTION)


WeakObject = Tree | PermutedTree


@dataclass(frozen=True)
class Decision:
    answer: str
    reason: str
    trace: tuple[RewriteStep, ...] | None = None

    @property
    def yes(self) -> bool:
        return self.answer == "yes"


@dataclass(frozen=True)
class WeakClass:
    """One equivalence class of objects; element is the shared target
    value in evaluable mode, None in closure mode."""

    arity: int
    element: object | None
    members: tuple[WeakObject, ...]


class WeakeningContext:
    """A presented theory with optional target interpretation and the
    budgets for the saturation fallback."""

    def __init__(self, presentation: Presentation,
                 interpretation: Interpretation | None = None,
                 max_term_size: int = 6, max_steps: int = 500_000):
        if presentation.flavor == "fp":
            raise WeakeningFlavorError()
        if interpretation is not None \
                and interpretation.presentation is not presentation:
            raise WeakeningError(
                "interpretation belongs to a different presentation")
        self.presentation = presentation
        self.interpretation = interpretation
        self.max_term_size = max_term_size
        self.max_steps = max_steps
        self._saturation: SaturationResult | None = None
        self._saturation_arity = -1

    @property
    def evaluable(self) -> bool:
        return self.interpretation is not None

    @property
    def flavor(self) -> str:
        return self.presentation.flavor

    def object_arity(self, t: WeakObject) -> int:
        """Validate an object against the flavor and return its arity."""
        if isinstance(t, FPTree):
            raise WeakeningError(FP_REJECTION)
        if isinstance(t, PermutedTree):
            if self.flavor != "symmetric":
                raise WeakeningError(
                    "permuted trees are objects of the symmetric flavor only")
            return t.arity
        if self.flavor == "symmetric":
            # a bare tree stands for itself under the identity permutation
            return tree_arity(t)
        return tree_arity(t)

    def object_term(self, t: WeakObject) -> Term:
        if isinstance(t, PermutedTree):
            return to_term(t)
        return to_term_alpha(t, tuple(range(1, tree_arity(t) + 1)))

    def format_object(self, t: WeakObject) -> str:
        if isinstance(t, PermutedTree):
            return format_permuted_tree(t)
        return format_tree(t)

    def eval_object(self, t: WeakObject):
        if not self.evaluable:
            raise WeakeningError("no target interpretation to evaluate in")
        self.object_arity(t)
        return self.interpretation.eval_tree(t)

    def saturation(self, arity: int) -> SaturationResult:
        if self._saturation is None or arity > self._saturation_arity:
            self._saturation = closure_saturate(
                self.presentation.signature, self.presentation.equations,
                max_arity=arity, max_term_size=self.max_term_size,
                max_steps=self.max_steps)
            self._saturation_arity = arity
        return self._saturation

    def two_cell(self, t1: WeakObject, t2: WeakObject) -> Decision:
        """Decide whether the unique invertible 2-cell t1 -> t2 exists."""
        n1 = self.object_arity(t1)
        n2 = self.object_arity(t2)
        if n1 != n2:
            return Decision("no", f"different arities {n1} and {n2}")
        if self.evaluable:
            e1 = self.eval_object(t1)
            e2 = self.eval_object(t2)
            if self.interpretation.operad.elements_equal(e1, e2):
                return Decision(
                    "yes", "both evaluate to "
                    + self.interpretation.operad.format_element(e1))
            return Decision(
                "no", self.interpretation.operad.format_element(e1)
                + " differs from "
                + self.interpretation.operad.format_element(e2))
        return self._closure_decision(t1, t2, n1)

    def _closure_decision(self, t1: WeakObject, t2: WeakObject,
                          arity: int) -> Decision:
        term1 = self.object_term(t1)
        term2 = self.object_term(t2)
        sat = self.saturation(arity)
        for term in (term1, term2):
            if not sat.in_universe(arity, term):
                return Decision(
                    "unknown",
                    f"{format_term(term)} exceeds the saturation size bound "
                    f"{self.max_term_size}")
        if sat.same(arity, term1, term2):
            steps = sat.explain(arity, term1, term2)
            return Decision("yes", f"merged in {len(steps)} rewrite steps",
                            tuple(steps))
        suffix = "; saturation budget exhausted" if sat.exhausted else ""
        return Decision(
            "unknown",
            f"not merged within size {self.max_term_size}{suffix}")

    def enumerate_objects(self, arity: int, max_size: int) -> list[WeakObject]:
        if self.flavor == "symmetric":
            return list(enumerate_permuted_trees(
                self.presentation.signature, arity, max_size))
        return list(enumerate_trees(self.presentation.signature, arity, max_size))

    def enumerate_classes(self, arity: int, max_size: int) -> list[WeakClass]:
        """All objects of the arity within the size bound, partitioned by
        two_cell. Evaluable mode keys classes by target element; closure
        mode groups by saturation merges (unknown pairs stay apart)."""
        objects = self.enumerate_objects(arity, max_size)
        if self.evaluable:
            values = map_maybe_parallel(self.eval_object, objects)
            buckets: dict = {}
            for obj, value in zip(objects, values):
                buckets.setdefault(value, []).append(obj)
            classes = [
                WeakClass(arity, value, tuple(sorted(
                    members, key=lambda o: (self._obj_size(o),
                                            self.format_object(o)))))
                for value, members in buckets.items()]
        else:
            sat = self.saturation(arity)
            roots: dict = {}
            for obj in objects:
                term = self.object_term(obj)
                anchor = (sat.anchor(arity, term)
                          if sat.in_universe(arity, term) else term)
                roots.setdefault(anchor, []).append(obj)
            classes = [
                WeakClass(arity, None, tuple(sorted(
                    members, key=lambda o: (self._obj_size(o),
                                            self.format_object(o)))))
                for members in roots.values()]
        return sorted(classes, key=lambda c: (self._obj_size(c.members[0]),
                                              self.format_object(c.members[0])))

    def _obj_size(self, t: WeakObject) -> int:
        return tree_size(t.tree if isinstance(t, PermutedTree) else t)


def two_cell(ctx: WeakeningContext, t1: WeakObject, t2: WeakObject) -> Decision:
    return ctx.two_cell(t1, t2)


def enumerate_classes(ctx: WeakeningContext, arity: int,
                      max_size: int) -> list[WeakClass]:
    return ctx.enumerate_classes(arity, max_size)


@dataclass
class AgreementReport:
    arities: dict[int, tuple[list[str], list[str]]]
    failures: list[str]

    @property
    def ok(self) -> bool:
        return not self.failures

    def lines(self) -> list[str]:
        out = []
        for arity in sorted(self.arities):
            left, right = self.arities[arity]
            out.append(f"arity {arity}: {len(left)} vs {len(right)} classes")
        out.extend(f"FAIL {msg}" for msg in self.failures)
        return out


def biased_unbiased_agreement(ctx_a: WeakeningContext, ctx_b: WeakeningContext,
                              arities: Sequence[int],
                              max_size: int) -> AgreementReport:
    """Compare the partitions two presentations of one theory induce on
    the elements of their shared target.

    For each arity, both contexts partition their own trees by target
    element; agreement means the same element sets are realized and each
    element heads exactly one class on both sides. Trees themselves are
    not compared across contexts since the signatures differ.
    """
    if not (ctx_a.evaluable and ctx_b.evaluable):
        raise WeakeningError("agreement needs evaluable contexts on both sides")
    op_a = ctx_a.interpretation.operad
    op_b = ctx_b.interpretation.operad
    if op_a.name != op_b.name or op_a.flavor != op_b.flavor:
        raise WeakeningError(
            f"contexts target different operads: {op_a.name} vs {op_b.name}")
    per_arity: dict[int, tuple[list[str], list[str]]] = {}
    failures: list[str] = []
    for arity in arities:
        classes_a = ctx_a.enumerate_classes(arity, max_size)
        classes_b = ctx_b.enumerate_classes(arity, max_size)
        keys_a = sorted(op_a.format_element(c.element) for c in classes_a)
        keys_b = sorted(op_b.format_element(c.element) for c in classes_b)
        per_arity[arity] = (keys_a, keys_b)
        if keys_a != keys_b:
            failures.append(
                f"arity {arity}: realized elements {keys_a} vs {keys_b}")
        if len(set(keys_a)) != len(keys_a) or len(set(keys_b)) != len(keys_b):
            failures.append(f"arity {arity}: an element heads two classes")
    return AgreementReport(per_arity, failures)
