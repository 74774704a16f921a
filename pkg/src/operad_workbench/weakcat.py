"""Finite categories carrying weak algebra structure for a presented
theory.

A weak structure is a finite base category, one functor base^k -> base
per k-ary generator, and for each equation an invertible natural family
delta indexed by operand tuples. Instead of storing an action of every
tree, the action h is derived by structural recursion and the image of
an arbitrary 2-cell is compiled as a composite of basic delta
components along a rewrite path supplied by the saturation engine.
Path independence of that compilation is what coherence_check probes.

Everything is validated exhaustively at construction: composition
tables, functoriality, delta endpoints, invertibility, naturality.
The data also round trips through a JSON form; see save_weakcat.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .operads import Interpretation, Operad, builtin_operad
from .terms import (App, Equation, Presentation, RewriteStep, Term, Var,
                    format_term, parse_presentation, format_presentation,
                    support)
from .trees import (PermutedTree, Tree, format_tree, format_fp_tree,
                    to_term, to_term_alpha, to_tree, tree_arity)
from .weakening import WeakeningContext, WeakObject

RESERVED = set(",∘=@")


class WeakcatError(ValueError):
    pass


@dataclass(frozen=True)
class Arrow:
    id: str
    src: str
    dst: str


def _check_id(kind: str, name: str):
    if not name or RESERVED.intersection(name):
        raise WeakcatError(
            f"{kind} id {name!r} is empty or uses a reserved character")


class FiniteCategory:
    """A finite category given by explicit tables, checked exhaustively:
    identities are units and composition is associative."""

    def __init__(self, objects: Sequence[str], arrows: Sequence[Arrow],
                 identities: Mapping[str, str],
                 compose_table: Mapping[tuple[str, str], str],
                 check: bool = True):
        self.objects = tuple(objects)
        if len(set(self.objects)) != len(self.objects):
            raise WeakcatError("duplicate object ids")
        for obj in self.objects:
            _check_id("object", obj)
        self.arrows: dict[str, Arrow] = {}
        for a in arrows:
            _check_id("arrow", a.id)
            if a.id in self.arrows:
                raise WeakcatError(f"duplicate arrow id {a.id!r}")
            if a.src not in self.objects or a.dst not in self.objects:
                raise WeakcatError(f"arrow {a.id!r} has unknown endpoints")
            self.arrows[a.id] = a
        self.identities = dict(identities)
        self._compose = dict(compose_table)
        self._inverses: dict[str, str | None] = {}
        self._hom: dict[tuple[str, str], list[str]] = {}
        for a in self.arrows.values():
            self._hom.setdefault((a.src, a.dst), []).append(a.id)
        self._from: dict[str, list[str]] = {}
        for a in self.arrows.values():
            self._from.setdefault(a.src, []).append(a.id)
        # check=False trusts tables built from an already validated
        # category; user supplied data must keep the full check
        if check:
            self._validate()

    def _validate(self):
        for obj in self.objects:
            ident = self.identities.get(obj)
            if ident is None or ident not in self.arrows:
                raise WeakcatError(f"object {obj!r} lacks an identity arrow")
            a = self.arrows[ident]
            if a.src != obj or a.dst != obj:
                raise WeakcatError(f"identity of {obj!r} has wrong endpoints")
        for (g, f), h in self._compose.items():
            if g not in self.arrows or f not in self.arrows or h not in self.arrows:
                raise WeakcatError(f"composition entry ({g!r},{f!r}) uses unknown arrows")
            gf, ff, hh = self.arrows[g], self.arrows[f], self.arrows[h]
            if ff.dst != gf.src:
                raise WeakcatError(f"({g!r},{f!r}) is not composable")
            if hh.src != ff.src or hh.dst != gf.dst:
                raise WeakcatError(f"composite of ({g!r},{f!r}) has wrong endpoints")
        for f in self.arrows.values():
            for g in self._from.get(f.dst, ()):
                if (g, f.id) not in self._compose:
                    raise WeakcatError(f"missing composite for ({g!r},{f.id!r})")
        for f in self.arrows.values():
            if self.compose(self.identities[f.dst], f.id) != f.id \
                    or self.compose(f.id, self.identities[f.src]) != f.id:
                raise WeakcatError(f"identity laws fail at {f.id!r}")
        for f in self.arrows.values():
            for g in self._from.get(f.dst, ()):
                gf = self.compose(g, f.id)
                for h in self._from.get(self.arrows[g].dst, ()):
                    if self.compose(h, gf) != self.compose(self.compose(h, g), f.id):
                        raise WeakcatError(
                            f"associativity fails at ({h!r},{g!r},{f.id!r})")

    def identity(self, obj: str) -> str:
        return self.identities[obj]

    def compose(self, g: str, f: str) -> str:
        try:
            return self._compose[(g, f)]
        except KeyError:
            raise WeakcatError(f"arrows {g!r} and {f!r} are not composable")

    def compose_chain(self, arrow_ids: Sequence[str], at_object: str) -> str:
        """Compose a chain listed first-to-last; empty chain gives the
        identity at the given object."""
        out = self.identity(at_object)
        for a in arrow_ids:
            out = self.compose(a, out)
        return out

    def hom(self, src: str, dst: str) -> list[str]:
        return list(self._hom.get((src, dst), ()))

    def inverse(self, arrow_id: str) -> str | None:
        if arrow_id not in self._inverses:
            a = self.arrows[arrow_id]
            found = None
            for b in self.hom(a.dst, a.src):
                if self.compose(b, arrow_id) == self.identity(a.src) \
                        and self.compose(arrow_id, b) == self.identity(a.dst):
                    found = b
                    break
            self._inverses[arrow_id] = found
        return self._inverses[arrow_id]

    def is_iso(self, arrow_id: str) -> bool:
        return self.inverse(arrow_id) is not None

    def is_identity(self, arrow_id: str) -> bool:
        a = self.arrows[arrow_id]
        return a.src == a.dst and self.identities[a.src] == arrow_id

    @classmethod
    def indiscrete(cls, objects: Sequence[str]) -> FiniteCategory:
        """Exactly one arrow between every ordered pair of objects."""
        arrows = [Arrow(f"{a}>{b}", a, b) for a in objects for b in objects]
        identities = {a: f"{a}>{a}" for a in objects}
        compose = {}
        for f in arrows:
            for g in arrows:
                if f.dst == g.src:
                    compose[(g.id, f.id)] = f"{f.src}>{g.dst}"
        return cls(objects, arrows, identities, compose)

    @classmethod
    def terminal(cls) -> FiniteCategory:
        return cls.indiscrete(("o",))

    @classmethod
    def from_monoid(cls, elements: Sequence[str], unit: str,
                    multiply) -> FiniteCategory:
        """One object whose endomorphisms are the given monoid;
        multiply(g, f) is the composite g after f."""
        obj = "o"
        arrows = [Arrow(e, obj, obj) for e in elements]
        compose = {(g, f): multiply(g, f) for g in elements for f in elements}
        return cls((obj,), arrows, {obj: unit}, compose)


def key_of(ids: Sequence[str]) -> str:
    return ",".join(ids)


def unkey(key: str) -> tuple[str, ...]:
    return tuple(key.split(",")) if key else ()


class Functor:
    """A functor base^arity -> cod given by explicit tables over object
    and arrow tuples, keyed by comma joined ids (empty key at arity 0).
    Functoriality is checked exhaustively at construction."""

    def __init__(self, dom: FiniteCategory, cod: FiniteCategory, arity: int,
                 obj_map: Mapping[str, str], arr_map: Mapping[str, str],
                 name: str = ""):
        self.dom = dom
        self.cod = cod
        self.arity = arity
        self.obj_map = dict(obj_map)
        self.arr_map = dict(arr_map)
        self.name = name
        self._validate()

    def obj(self, objs: Sequence[str]) -> str:
        if len(objs) != self.arity:
            raise WeakcatError(f"{self.name or 'functor'} expects "
                               f"{self.arity} objects, got {len(objs)}")
        return self.obj_map[key_of(objs)]

    def arr(self, arrs: Sequence[str]) -> str:
        if len(arrs) != self.arity:
            raise WeakcatError(f"{self.name or 'functor'} expects "
                               f"{self.arity} arrows, got {len(arrs)}")
        return self.arr_map[key_of(arrs)]

    def _tuples(self, pool: Sequence[str]) -> Iterable[tuple[str, ...]]:
        if self.arity == 0:
            yield ()
            return
        stack = [()]
        for _ in range(self.arity):
            stack = [t + (x,) for t in stack for x in pool]
        yield from stack

    def _validate(self):
        label = self.name or "functor"
        for objs in self._tuples(self.dom.objects):
            target = self.obj_map.get(key_of(objs))
            if target is None or target not in self.cod.objects:
                raise WeakcatError(f"{label}: object map incomplete at {objs}")
        arrow_ids = list(self.dom.arrows)
        for arrs in self._tuples(arrow_ids):
            image = self.arr_map.get(key_of(arrs))
            if image is None or image not in self.cod.arrows:
                raise WeakcatError(f"{label}: arrow map incomplete at {arrs}")
            srcs = [self.dom.arrows[a].src for a in arrs]
            dsts = [self.dom.arrows[a].dst for a in arrs]
            img = self.cod.arrows[image]
            if img.src != self.obj(srcs) or img.dst != self.obj(dsts):
                raise WeakcatError(f"{label}: image of {arrs} has wrong endpoints")
        for objs in self._tuples(self.dom.objects):
            idents = [self.dom.identity(o) for o in objs]
            if self.arr(idents) != self.cod.identity(self.obj(objs)):
                raise WeakcatError(f"{label}: identities not preserved at {objs}")
        composable = [(g, f.id) for f in self.dom.arrows.values()
                      for g in self.dom._from.get(f.dst, ())]
        for pairs in self._tuples(composable):
            gs = [p[0] for p in pairs]
            fs = [p[1] for p in pairs]
            composites = [self.dom.compose(g, f) for g, f in pairs]
            if self.arr(composites) != self.cod.compose(self.arr(gs), self.arr(fs)):
                raise WeakcatError(f"{label}: composition not preserved at {pairs}")

    @classmethod
    def identity_functor(cls, base: FiniteCategory) -> Functor:
        return cls(base, base, 1,
                   {o: o for o in base.objects},
                   {a: a for a in base.arrows}, name="id")


@dataclass
class WeakcatReport:
    checked: dict[str, int] = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def note(self, label: str, count: int = 1):
        self.checked[label] = self.checked.get(label, 0) + count

    def fail(self, message: str):
        self.failures.append(message)

    def lines(self) -> list[str]:
        out = [f"ok {label}: {count} instances"
               for label, count in sorted(self.checked.items())]
        out.extend(f"FAIL {msg}" for msg in self.failures)
        return out


def cell_key(eq: Equation) -> str:
    return (f"{_side_text(eq.lhs, eq.arity)}="
            f"{_side_text(eq.rhs, eq.arity)}@{eq.arity}")


def _side_text(t: Term, arity: int) -> str:
    pair = to_tree(t, arity)
    if pair.fn.is_identity:
        return format_tree(pair.tree)
    return format_fp_tree(pair)


class WeakPCategoryData:
    """A finite base category with generator functors and basic delta
    families over a presented theory; exhaustively validated."""

    def __init__(self, base: FiniteCategory, presentation: Presentation,
                 generators: Mapping[str, Functor],
                 deltas: Mapping[int, Mapping[tuple[str, ...], str]],
                 target: Operad | None = None,
                 assignment: Mapping[str, object] | None = None,
                 max_term_size: int = 6, max_steps: int = 500_000):
        self.base = base
        self.presentation = presentation
        self.context = WeakeningContext(
            presentation, None, max_term_size, max_steps)
        self.generators = dict(generators)
        self.deltas = {i: dict(fam) for i, fam in deltas.items()}
        self.interpretation = None
        if target is not None:
            if assignment is None:
                raise WeakcatError("target operad given without an assignment")
            self.interpretation = Interpretation(presentation, target, assignment)
        self._delta_memo: dict = {}
        self._validate()

    @property
    def max_term_size(self) -> int:
        return self.context.max_term_size

    def _validate(self):
        sig = self.presentation.signature
        for op, arity in sig.ops:
            gen = self.generators.get(op)
            if gen is None:
                raise WeakcatError(f"no generator functor for {op!r}")
            if gen.arity != arity or gen.dom is not self.base or gen.cod is not self.base:
                raise WeakcatError(f"generator {op!r} has the wrong shape")
        extra = set(self.generators) - set(sig.names())
        if extra:
            raise WeakcatError(f"generators {sorted(extra)} not in the signature")
        for index, eq in enumerate(self.presentation.equations):
            used = support(eq.lhs) | support(eq.rhs)
            if used != set(range(1, eq.arity + 1)):
                # compiled cells pick their component from the rewrite
                # binding, so every declared variable must occur
                raise WeakcatError(
                    f"equation {cell_key(eq)!r} declares unused variables")
            fam = self.deltas.get(index)
            if fam is None:
                raise WeakcatError(f"no delta family for equation {cell_key(eq)!r}")
            self._validate_delta(index, eq, fam)
        extra_cells = set(self.deltas) - set(range(len(self.presentation.equations)))
        if extra_cells:
            raise WeakcatError("delta families for unknown equations")

    def _validate_delta(self, index: int, eq: Equation,
                        fam: Mapping[tuple[str, ...], str]):
        name = cell_key(eq)
        for operands in _object_tuples(self.base, eq.arity):
            arrow_id = fam.get(operands)
            if arrow_id is None:
                raise WeakcatError(f"delta {name!r} missing component at {operands}")
            if arrow_id not in self.base.arrows:
                raise WeakcatError(f"delta {name!r} uses unknown arrow {arrow_id!r}")
            a = self.base.arrows[arrow_id]
            want_src = self.h_obj(eq.lhs, operands)
            want_dst = self.h_obj(eq.rhs, operands)
            if a.src != want_src or a.dst != want_dst:
                raise WeakcatError(
                    f"delta {name!r} at {operands} should run "
                    f"{want_src!r} -> {want_dst!r}, got {a.src!r} -> {a.dst!r}")
            if not self.base.is_iso(arrow_id):
                raise WeakcatError(f"delta {name!r} at {operands} is not invertible")
        for fs in _arrow_tuples(self.base, eq.arity):
            srcs = tuple(self.base.arrows[f].src for f in fs)
            dsts = tuple(self.base.arrows[f].dst for f in fs)
            left = self.base.compose(fam[dsts], self.h_arr(eq.lhs, fs))
            right = self.base.compose(self.h_arr(eq.rhs, fs), fam[srcs])
            if left != right:
                raise WeakcatError(
                    f"delta {name!r} is not natural at arrows {fs}")

    # the action h, by structural recursion; variables index operands 1-based
    def h_obj(self, t: Term | WeakObject, operands: Sequence[str]) -> str:
        term = self._as_term(t)
        return self._h(term, tuple(operands), objects=True)

    def h_arr(self, t: Term | WeakObject, arrows: Sequence[str]) -> str:
        term = self._as_term(t)
        return self._h(term, tuple(arrows), objects=False)

    def _h(self, term: Term, items: tuple[str, ...], objects: bool) -> str:
        if isinstance(term, Var):
            return items[term.index - 1]
        gen = self.generators.get(term.op)
        if gen is None:
            raise WeakcatError(f"unknown operation {term.op!r}")
        images = [self._h(arg, items, objects) for arg in term.args]
        return gen.obj(images) if objects else gen.arr(images)

    def _as_term(self, t: Term | WeakObject) -> Term:
        if isinstance(t, (Var, App)):
            return t
        if isinstance(t, PermutedTree):
            return to_term(t)
        return to_term_alpha(t, tuple(range(1, tree_arity(t) + 1)))

    def is_strict(self) -> bool:
        return all(self.base.is_identity(arrow_id)
                   for fam in self.deltas.values()
                   for arrow_id in fam.values())

    # compiled 2-cell images
    def derive_delta(self, t1: Term | WeakObject, t2: Term | WeakObject,
                     operands: Sequence[str]) -> str | None:
        """The base arrow h(t1)(operands) -> h(t2)(operands) compiled
        along the shortest rewrite path, or None when no path fits the
        budgets. Raises when the trees are provably unrelated."""
        term1, term2 = self._as_term(t1), self._as_term(t2)
        operands = tuple(operands)
        key = (term1, term2, operands)
        if key not in self._delta_memo:
            self._delta_memo[key] = self._derive_delta(term1, term2, operands)
        return self._delta_memo[key]

    def _derive_delta(self, term1: Term, term2: Term,
                      operands: tuple[str, ...]) -> str | None:
        arity = len(operands)
        if term1 == term2:
            return self.base.identity(self.h_obj(term1, operands))
        sat = self.context.saturation(arity)
        if not (sat.in_universe(arity, term1) and sat.in_universe(arity, term2)):
            return None
        if not sat.same(arity, term1, term2):
            decision = self._refute(term1, term2, arity)
            if decision == "no":
                raise WeakcatError(
                    f"no 2-cell between {format_term(term1)} and "
                    f"{format_term(term2)}")
            return None
        steps = sat.explain(arity, term1, term2)
        return self.compile_path(steps, operands,
                                 at_object=self.h_obj(term1, operands))

    def _refute(self, term1: Term, term2: Term, arity: int) -> str:
        if self.interpretation is None:
            return "unknown"
        e1 = self.interpretation.eval_term(term1, arity)
        e2 = self.interpretation.eval_term(term2, arity)
        operad = self.interpretation.operad
        return "unknown" if operad.elements_equal(e1, e2) else "no"

    def compile_path(self, steps: Sequence[RewriteStep],
                     operands: tuple[str, ...], at_object: str) -> str:
        return self.base.compose_chain(
            [self._compile_step(s, operands) for s in steps], at_object)

    def _compile_step(self, step: RewriteStep, operands: tuple[str, ...]) -> str:
        return self._compile_at(step.source, step, step.position, operands)

    def _compile_at(self, term: Term, step: RewriteStep,
                    position: tuple[int, ...], operands: tuple[str, ...]) -> str:
        if not position:
            return self._basic_component(step, operands)
        i = position[0]
        assert isinstance(term, App)
        gen = self.generators[term.op]
        images = []
        for j, child in enumerate(term.args):
            if j == i:
                images.append(self._compile_at(child, step, position[1:], operands))
            else:
                images.append(self.base.identity(self.h_obj(child, operands)))
        return gen.arr(images)

    def _basic_component(self, step: RewriteStep,
                         operands: tuple[str, ...]) -> str:
        eq = self.presentation.equations[step.eq_index]
        bound = dict(step.binding)
        cell_operands = tuple(
            self.h_obj(bound[v], operands) for v in range(1, eq.arity + 1))
        component = self.deltas[step.eq_index][cell_operands]
        if step.forward:
            return component
        inverse = self.base.inverse(component)
        assert inverse is not None
        return inverse


def _object_tuples(base: FiniteCategory, k: int) -> list[tuple[str, ...]]:
    out = [()]
    for _ in range(k):
        out = [t + (o,) for t in out for o in base.objects]
    return out


def _arrow_tuples(base: FiniteCategory, k: int) -> list[tuple[str, ...]]:
    out = [()]
    for _ in range(k):
        out = [t + (a,) for t in out for a in base.arrows]
    return out


def derive_h(W: WeakPCategoryData, t: Term | WeakObject,
             operands: Sequence[str]) -> str:
    return W.h_obj(t, operands)


def derive_delta(W: WeakPCategoryData, t1: Term | WeakObject,
                 t2: Term | WeakObject, operands: Sequence[str]) -> str | None:
    return W.derive_delta(t1, t2, operands)


def coherence_check(W: WeakPCategoryData, max_arity: int = 3,
                    max_size: int | None = None, path_limit: int = 3,
                    operand_cap: int = 27, pair_cap: int = 40) -> WeakcatReport:
    """Path independence of compiled 2-cells: wherever the merge graph
    offers several distinct rewrite paths between two trees, all of them
    must compile to the same base arrow at every probed operand tuple."""
    report = WeakcatReport()
    max_size = W.max_term_size if max_size is None else max_size
    W.context.saturation(max_arity)
    for arity in range(0, max_arity + 1):
        sat = W.context.saturation(arity)
        operand_pool = _object_tuples(W.base, arity)[:operand_cap]
        pairs = 0
        for cls in W.context.enumerate_classes(arity, max_size):
            anchor = cls.members[0]
            term_a = W._as_term(anchor)
            for other in cls.members[1:]:
                if pairs >= pair_cap:
                    break
                term_b = W._as_term(other)
                chains = sat.explain_many(arity, term_a, term_b, limit=path_limit)
                if len(chains) < 2:
                    continue
                pairs += 1
                for operands in operand_pool:
                    at = W.h_obj(term_a, operands)
                    arrows = {W.compile_path(steps, operands, at)
                              for steps in chains}
                    report.note("path independence")
                    if len(arrows) > 1:
                        report.fail(
                            f"paths {format_term(term_a)} ~ {format_term(term_b)}"
                            f" at {operands} compile to {sorted(arrows)}")
    return report


class WeakPFunctorData:
    """A base functor together with one coherence family psi per
    generator: psi_op(a...) runs G(h1(op)(a...)) -> h2(op)(G a...)."""

    def __init__(self, source: WeakPCategoryData, target: WeakPCategoryData,
                 functor: Functor, psi: Mapping[str, Mapping[tuple[str, ...], str]]):
        if source.presentation.name != target.presentation.name:
            raise WeakcatError("weak functor endpoints present different theories")
        if functor.arity != 1 or functor.dom is not source.base \
                or functor.cod is not target.base:
            raise WeakcatError("base functor has the wrong shape")
        self.source = source
        self.target = target
        self.functor = functor
        self.psi = {op: dict(fam) for op, fam in psi.items()}

    def psi_component(self, t: Term | WeakObject,
                      operands: Sequence[str]) -> str:
        """The coherence map at a tree, derived from the generator
        families: identity on a leaf, pasting on a node."""
        term = self.source._as_term(t)
        return self._psi(term, tuple(operands))

    def _psi(self, term: Term, operands: tuple[str, ...]) -> str:
        G = self.functor
        if isinstance(term, Var):
            return self.target.base.identity(G.obj([operands[term.index - 1]]))
        child_objects = [self.source.h_obj(arg, operands) for arg in term.args]
        first = self.psi[term.op][tuple(child_objects)]
        child_psis = [self._psi(arg, operands) for arg in term.args]
        second = self.target.generators[term.op].arr(child_psis)
        return self.target.base.compose(second, first)


def check_weak_functor(Fd: WeakPFunctorData, samples_cap: int = 200) -> WeakcatReport:
    """The coherence family must be invertible, natural, reduce to the
    identity on the unit tree, and intertwine every compiled 2-cell of
    the source with the matching one of the target."""
    report = WeakcatReport()
    W1, W2, G = Fd.source, Fd.target, Fd.functor
    sig = W1.presentation.signature
    for op, arity in sig.ops:
        fam = Fd.psi.get(op)
        if fam is None:
            report.fail(f"missing psi family for {op!r}")
            continue
        gen1, gen2 = W1.generators[op], W2.generators[op]
        for operands in _object_tuples(W1.base, arity):
            component = fam.get(operands)
            if component is None:
                report.fail(f"psi[{op!r}] missing at {operands}")
                continue
            a = W2.base.arrows[component]
            want_src = G.obj([gen1.obj(operands)])
            want_dst = gen2.obj([G.obj([o]) for o in operands])
            if (a.src, a.dst) != (want_src, want_dst):
                report.fail(f"psi[{op!r}] at {operands} has wrong endpoints")
                continue
            if not W2.base.is_iso(component):
                report.fail(f"psi[{op!r}] at {operands} is not invertible")
            report.note("psi endpoints")
        for fs in _arrow_tuples(W1.base, arity):
            srcs = tuple(W1.base.arrows[f].src for f in fs)
            dsts = tuple(W1.base.arrows[f].dst for f in fs)
            report.note("psi naturality")
            try:
                left = W2.base.compose(fam[dsts], G.arr([gen1.arr(fs)]))
                right = W2.base.compose(gen2.arr([G.arr([f]) for f in fs]),
                                        fam[srcs])
            except WeakcatError as exc:
                report.fail(f"psi[{op!r}] at {fs}: {exc}")
                continue
            if left != right:
                report.fail(f"psi[{op!r}] not natural at {fs}")
    for obj in W1.base.objects:
        unit = Fd.psi_component(Var(1), (obj,))
        report.note("unit law")
        if not W2.base.is_identity(unit):
            report.fail(f"psi at the unit tree is not an identity on {obj!r}")
    checked = 0
    for index, eq in enumerate(W1.presentation.equations):
        for operands in _object_tuples(W1.base, eq.arity):
            if checked >= samples_cap:
                break
            checked += 1
            d1 = W1.derive_delta(eq.lhs, eq.rhs, operands)
            images = tuple(G.obj([o]) for o in operands)
            d2 = W2.derive_delta(eq.lhs, eq.rhs, images)
            if d1 is None or d2 is None:
                report.fail(f"equation {cell_key(eq)!r} has no compiled cell")
                continue
            report.note("pasting square")
            try:
                left = W2.base.compose(Fd.psi_component(eq.rhs, operands),
                                       G.arr([d1]))
                right = W2.base.compose(d2, Fd.psi_component(eq.lhs, operands))
            except WeakcatError as exc:
                report.fail(f"pasting at {cell_key(eq)!r} {operands}: {exc}")
                continue
            if left != right:
                report.fail(
                    f"pasting square fails for {cell_key(eq)!r} at {operands}")
    return report


# JSON form
def save_weakcat(W: WeakPCategoryData) -> str:
    """Serialize to the documented JSON shape: objects, arrows, compose
    keyed by "g∘f", identities, generators with comma joined tuple keys,
    deltas keyed by "lhs=rhs@arity" cells, plus the theory text and the
    optional target interpretation."""
    data: dict = {
        "theory": format_presentation(W.presentation),
        "objects": list(W.base.objects),
        "arrows": [{"id": a.id, "src": a.src, "dst": a.dst}
                   for a in W.base.arrows.values()],
        "identities": dict(W.base.identities),
        "compose": {f"{g}∘{f}": h for (g, f), h in W.base._compose.items()},
        "generators": {
            op: {"obj_map": dict(gen.obj_map), "arr_map": dict(gen.arr_map)}
            for op, gen in W.generators.items()},
        "deltas": {
            cell_key(W.presentation.equations[index]): {
                key_of(operands): arrow for operands, arrow in fam.items()}
            for index, fam in W.deltas.items()},
        "bounds": {"max_term_size": W.max_term_size,
                   "max_steps": W.context.max_steps},
    }
    if W.interpretation is not None:
        operad = W.interpretation.operad
        data["target"] = operad.name
        data["interp"] = {
            op: operad.format_element(element)
            for op, element in W.interpretation.assignment.items()}
    return json.dumps(data, ensure_ascii=False, indent=2) + "\n"


def load_weakcat(text: str) -> WeakPCategoryData:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise WeakcatError(f"bad JSON: {exc}") from exc
    for field_name in ("theory", "objects", "arrows", "identities",
                       "compose", "generators", "deltas"):
        if field_name not in data:
            raise WeakcatError(f"missing field {field_name!r}")
    presentation = parse_presentation(data["theory"])
    arrows = [Arrow(a["id"], a["src"], a["dst"]) for a in data["arrows"]]
    compose = {}
    for key, value in data["compose"].items():
        if "∘" not in key:
            raise WeakcatError(f"compose key {key!r} lacks the ∘ separator")
        g, _, f = key.partition("∘")
        compose[(g, f)] = value
    base = FiniteCategory(data["objects"], arrows, data["identities"], compose)
    generators = {}
    for op, tables in data["generators"].items():
        arity = presentation.signature.arity(op)
        generators[op] = Functor(base, base, arity,
                                 tables["obj_map"], tables["arr_map"], name=op)
    by_key = {cell_key(eq): index
              for index, eq in enumerate(presentation.equations)}
    deltas: dict[int, dict[tuple[str, ...], str]] = {}
    for key, fam in data["deltas"].items():
        index = by_key.get(key)
        if index is None:
            raise WeakcatError(f"delta cell {key!r} matches no equation; "
                               f"expected one of {sorted(by_key)}")
        deltas[index] = {unkey(op_key): arrow for op_key, arrow in fam.items()}
    target = None
    assignment = None
    if "target" in data:
        target = builtin_operad(data["target"], presentation)
        assignment = {op: target.parse_element(text_)
                      for op, text_ in data["interp"].items()}
    bounds = data.get("bounds", {})
    return WeakPCategoryData(
        base, presentation, generators, deltas, target, assignment,
        max_term_size=bounds.get("max_term_size", 6),
        max_steps=bounds.get("max_steps", 500_000))


def indiscrete_monoid_instance(presentation: Presentation,
                               elements: Sequence[str], unit: str,
                               multiply,
                               max_term_size: int = 6) -> WeakPCategoryData:
    """The weak instance on the indiscrete category over a finite
    monoid: the binary generator acts by multiply on objects, the
    nullary one picks the unit, and every delta component is the unique
    arrow between its endpoints. The presentation must consist of one
    binary and one nullary operation. The target interpretation sends
    each generator to the sole element of its arity in the
    one-element-per-arity plain operad."""
    arities = {presentation.signature.arity(op): op
               for op in presentation.signature.names()}
    if sorted(arities) != [0, 2] or len(presentation.signature.ops) != 2:
        raise WeakcatError("indiscrete_monoid_instance needs exactly one "
                           "binary and one nullary operation")
    m_op, e_op = arities[2], arities[0]
    base = FiniteCategory.indiscrete(elements)

    def ev(t: Term, operands: Sequence[str]) -> str:
        if isinstance(t, Var):
            return operands[t.index - 1]
        if t.op == e_op:
            return unit
        return multiply(ev(t.args[0], operands), ev(t.args[1], operands))

    m_obj = {key_of((a, b)): multiply(a, b)
             for a in elements for b in elements}
    m_arr = {}
    for f in base.arrows.values():
        for g in base.arrows.values():
            src = multiply(f.src, g.src)
            dst = multiply(f.dst, g.dst)
            m_arr[key_of((f.id, g.id))] = f"{src}>{dst}"
    generators = {
        m_op: Functor(base, base, 2, m_obj, m_arr, name=m_op),
        e_op: Functor(base, base, 0, {"": unit}, {"": f"{unit}>{unit}"},
                      name=e_op),
    }
    deltas: dict[int, dict[tuple[str, ...], str]] = {}
    for index, eq in enumerate(presentation.equations):
        fam = {}
        for operands in _object_tuples(base, eq.arity):
            fam[operands] = (f"{ev(eq.lhs, operands)}>"
                             f"{ev(eq.rhs, operands)}")
        deltas[index] = fam
    target = builtin_operad("terminal-plain", presentation)
    assignment = {m_op: 2, e_op: 0}
    return WeakPCategoryData(base, presentation, generators, deltas,
                             target, assignment,
                             max_term_size=max_term_size)
