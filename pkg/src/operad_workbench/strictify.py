"""Strictification of a finite weak structure and its comparison maps.

Objects of the strict category are pairs (p, a...) of a target element
with a tuple of base objects; arrows between two pairs are the base
arrows between their action values. A target element q acts on objects
by target composition and on arrows by the conjugate

    delta(dst)^-1 . h(tree_q)(f...) . delta(src)

where each delta is a compiled 2-cell from the representative of the
composite element to the graft of the representatives. The element p
acts through a canonical representative: the minimal-size tree whose
evaluation is p, ties broken by serialization (left-nested combs win).

check_strictness probes the strict action laws on enumerated instances,
check_equivalence the comparison back to the base (full, faithful,
essentially surjective, and a weak map via the construction's deltas),
and universal_property_check builds the strict map induced by a weak
map into a strict target and certifies its uniqueness by forcing every
arrow image from the restriction data.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .terms import App, Term, Var, format_term
from .trees import (Leaf, Node, PermutedTree, compose_permuted, format_tree,
                    format_permuted_tree, graft, tree_arity, tree_size)
from .weakcat import (Arrow, FiniteCategory, Functor, WeakPCategoryData,
                      WeakPFunctorData, WeakcatError, WeakcatReport)


class StrictifyError(ValueError):
    pass


@dataclass(frozen=True)
class StObject:
    element: object
    operands: tuple[str, ...]
    h_value: str

    def key(self) -> tuple:
        return (self.element, self.operands)


@dataclass(frozen=True)
class StArrow:
    src: StObject
    dst: StObject
    base: str


def _graft_reprs(outer, inners):
    if isinstance(outer, PermutedTree):
        return compose_permuted(outer, list(inners))
    return graft(outer, list(inners))


def _format_repr(tree) -> str:
    if isinstance(tree, PermutedTree):
        return format_permuted_tree(tree)
    return format_tree(tree)


def _op_term(op: str, arity: int) -> Term:
    return App(op, tuple(Var(i) for i in range(1, arity + 1)))


def _op_tree(op: str, arity: int) -> Node:
    return Node(op, tuple(Leaf() for _ in range(arity)))


class StrictPCategory:
    """The strictified category: enumerated object pairs, base arrows
    tagged with endpoints, and a strict action of target elements."""

    def __init__(self, W: WeakPCategoryData, arity_bound: int = 3,
                 element_bound: int = 20):
        if W.interpretation is None:
            raise StrictifyError(
                "strictification needs a target interpretation on the input")
        self.W = W
        self.arity_bound = arity_bound
        self.element_bound = element_bound
        self.operad = W.interpretation.operad
        self._reprs: dict = {}
        self.elements: dict[int, list] = {}
        for arity in range(arity_bound + 1):
            self._scan_representatives(arity)
            pool = self.operad.enumerate_elements(arity, element_bound)
            self.elements[arity] = [p for p in pool if p in self._reprs]
        self.objects: list[StObject] = []
        self._index: dict[tuple, StObject] = {}
        for arity in range(arity_bound + 1):
            for p in self.elements[arity]:
                for operands in _id_tuples(W.base.objects, arity):
                    self._add_object(p, operands)
        self._fc: FiniteCategory | None = None
        self._fc_obj_ids: dict[tuple, str] = {}
        self._fc_arrow_ids: dict[tuple, str] = {}

    def _scan_representatives(self, arity: int):
        for tree in self.W.context.enumerate_objects(arity, self.W.max_term_size):
            value = self.W.interpretation.eval_tree(tree)
            plain = tree.tree if isinstance(tree, PermutedTree) else tree
            candidate = (tree_size(plain), _format_repr(tree), tree)
            best = self._reprs.get(value)
            if best is None or candidate[:2] < best[:2]:
                self._reprs[value] = candidate

    def _add_object(self, element, operands: tuple[str, ...]):
        h_value = self.W.h_obj(self.repr_tree(element), operands)
        obj = StObject(element, operands, h_value)
        self.objects.append(obj)
        self._index[obj.key()] = obj

    def repr_tree(self, element):
        entry = self._reprs.get(element)
        if entry is None:
            raise StrictifyError(
                f"element {self.operad.format_element(element)} has no "
                f"representative tree within size {self.W.max_term_size} "
                f"and arity {self.arity_bound}")
        return entry[2]

    def obj(self, element, operands: Sequence[str]) -> StObject:
        found = self._index.get((element, tuple(operands)))
        if found is None:
            raise StrictifyError(
                f"object ({self.operad.format_element(element)}, "
                f"{tuple(operands)}) is outside the enumeration bounds")
        return found

    def identity(self, x: StObject) -> StArrow:
        return StArrow(x, x, self.W.base.identity(x.h_value))

    def compose(self, g: StArrow, f: StArrow) -> StArrow:
        if f.dst != g.src:
            raise StrictifyError("arrows are not composable")
        return StArrow(f.src, g.dst, self.W.base.compose(g.base, f.base))

    def inverse(self, f: StArrow) -> StArrow | None:
        base = self.W.base.inverse(f.base)
        if base is None:
            return None
        return StArrow(f.dst, f.src, base)

    def hom(self, x: StObject, y: StObject) -> list[StArrow]:
        return [StArrow(x, y, b) for b in self.W.base.hom(x.h_value, y.h_value)]

    def act_obj(self, q, xs: Sequence[StObject]) -> StObject:
        if self.operad.arity_of(q) != len(xs):
            raise StrictifyError("operand count does not match the element arity")
        composite = self.operad.compose(q, [x.element for x in xs])
        operands = tuple(o for x in xs for o in x.operands)
        return self.obj(composite, operands)

    def delta_in(self, q, xs: Sequence[StObject]) -> str:
        """The compiled cell from the representative of the composite to
        the graft of the representatives, at the flattened operands."""
        composite = self.operad.compose(q, [x.element for x in xs])
        grafted = _graft_reprs(self.repr_tree(q),
                               [self.repr_tree(x.element) for x in xs])
        operands = tuple(o for x in xs for o in x.operands)
        d = self.W.derive_delta(self.repr_tree(composite), grafted, operands)
        if d is None:
            raise StrictifyError(
                "no rewrite path between the composite representative and "
                "the grafted representatives within the saturation budgets")
        return d

    def act_arr(self, q, fs: Sequence[StArrow]) -> StArrow:
        src = self.act_obj(q, [f.src for f in fs])
        dst = self.act_obj(q, [f.dst for f in fs])
        mid = self.W.h_arr(self.repr_tree(q), [f.base for f in fs])
        d_src = self.delta_in(q, [f.src for f in fs])
        d_dst = self.delta_in(q, [f.dst for f in fs])
        inv = self.W.base.inverse(d_dst)
        if inv is None:
            raise StrictifyError("a construction cell is not invertible")
        base = self.W.base.compose(inv, self.W.base.compose(mid, d_src))
        return StArrow(src, dst, base)

    def all_arrows(self) -> list[StArrow]:
        return [StArrow(x, y, b)
                for x in self.objects for y in self.objects
                for b in self.W.base.hom(x.h_value, y.h_value)]

    def sample_arrows(self, cap: int) -> list[StArrow]:
        """A deterministic mix of strided arrows across object pairs
        (rotating the hom choice) interleaved with identities; arrows
        between distinct objects exercise the conjugating cells."""
        pairs = [(x, y) for x in self.objects for y in self.objects]
        stride = max(1, len(pairs) // max(1, 2 * cap))
        spread = []
        for k, (x, y) in enumerate(pairs[::stride][:2 * cap]):
            hom = self.W.base.hom(x.h_value, y.h_value)
            if hom:
                spread.append(StArrow(x, y, hom[k % len(hom)]))
        idents = [self.identity(x) for x in self.objects[:cap]]
        out = []
        for i in range(max(len(spread), len(idents))):
            if i < len(spread):
                out.append(spread[i])
            if i < len(idents):
                out.append(idents[i])
        return out

    def as_finite_category(self) -> tuple[FiniteCategory, dict, dict]:
        """A plain category view with generated ids; returns the maps
        from object keys and (src, dst, base) triples to those ids."""
        if self._fc is None:
            obj_ids = {x.key(): f"s{i}" for i, x in enumerate(self.objects)}
            arrows = []
            arrow_ids = {}
            for f in self.all_arrows():
                aid = (f"{obj_ids[f.src.key()]}."
                       f"{obj_ids[f.dst.key()]}.{f.base}")
                arrow_ids[(f.src.key(), f.dst.key(), f.base)] = aid
                arrows.append(Arrow(aid, obj_ids[f.src.key()],
                                    obj_ids[f.dst.key()]))
            identities = {}
            for x in self.objects:
                ident = self.identity(x)
                identities[obj_ids[x.key()]] = arrow_ids[
                    (x.key(), x.key(), ident.base)]
            triple = {aid: key for key, aid in arrow_ids.items()}
            by_src: dict[str, list[Arrow]] = {}
            for a in arrows:
                by_src.setdefault(a.src, []).append(a)
            compose = {}
            for f in arrows:
                fx, fy, fb = triple[f.id]
                for g in by_src.get(f.dst, ()):
                    gx, gy, gb = triple[g.id]
                    compose[(g.id, f.id)] = arrow_ids[
                        (fx, gy, self.W.base.compose(gb, fb))]
            # composition is inherited from the validated base, so the
            # exhaustive table check is skipped
            self._fc = FiniteCategory(
                [obj_ids[x.key()] for x in self.objects], arrows,
                identities, compose, check=False)
            self._fc_obj_ids = obj_ids
            self._fc_arrow_ids = arrow_ids
        return self._fc, self._fc_obj_ids, self._fc_arrow_ids

    def object_id(self, x: StObject) -> str:
        self.as_finite_category()
        return self._fc_obj_ids[x.key()]

    def arrow_id(self, f: StArrow) -> str:
        self.as_finite_category()
        return self._fc_arrow_ids[(f.src.key(), f.dst.key(), f.base)]


def _id_tuples(pool: Sequence[str], k: int) -> list[tuple[str, ...]]:
    out: list[tuple[str, ...]] = [()]
    for _ in range(k):
        out = [t + (x,) for t in out for x in pool]
    return out


def strictify(W: WeakPCategoryData, arity_bound: int = 3,
              element_bound: int = 20) -> StrictPCategory:
    return StrictPCategory(W, arity_bound, element_bound)


def _element_tuples(S: StrictPCategory, k: int,
                    total_bound: int) -> list[tuple]:
    """All k-tuples of enumerated elements with total arity in bounds."""
    out = [((), 0)]
    for _ in range(k):
        nxt = []
        for chosen, used in out:
            for arity, pool in S.elements.items():
                if used + arity > total_bound:
                    continue
                for p in pool:
                    nxt.append((chosen + (p,), used + arity))
        out = nxt
    return [chosen for chosen, _ in out]


def _arrow_tuples(pool: Sequence[StArrow], slots: int, cap: int,
                  limit: int = 512) -> list[tuple[StArrow, ...]]:
    out: list[tuple[StArrow, ...]] = [()]
    for _ in range(slots):
        out = [t + (f,) for t in out for f in pool[:cap]]
        if len(out) > limit:
            out = out[:limit]
    return out


def check_strictness(S: StrictPCategory, arrow_cap: int = 6,
                     instance_cap: int = 4000) -> WeakcatReport:
    """The strict action laws on enumerated instances: the identity
    element acts as the identity, and acting by a composite element
    equals acting in stages, on objects and on arrow tuples."""
    report = WeakcatReport()
    unit = S.operad.identity()
    arrows = S.sample_arrows(arrow_cap * 4)
    for f in arrows:
        report.note("unit law")
        if S.act_arr(unit, (f,)) != f:
            report.fail(f"unit action moved the arrow {f.base!r}")
    instances = 0
    for k in range(S.arity_bound + 1):
        for q in S.elements[k]:
            for taus in _element_tuples(S, k, S.arity_bound):
                if instances >= instance_cap:
                    break
                arities = [S.operad.arity_of(t) for t in taus]
                composite = S.operad.compose(q, list(taus))
                if composite not in S._reprs:
                    continue
                for fs in _arrow_tuples(arrows, sum(arities), arrow_cap):
                    if instances >= instance_cap:
                        break
                    instances += 1
                    chunks = []
                    at = 0
                    for n in arities:
                        chunks.append(tuple(fs[at:at + n]))
                        at += n
                    try:
                        stages = [S.act_arr(t, chunk)
                                  for t, chunk in zip(taus, chunks)]
                        lhs = S.act_arr(composite, fs)
                        rhs = S.act_arr(q, stages)
                    except StrictifyError:
                        # the slotted arrows carry objects of their own
                        # arities, which can leave the enumeration bounds
                        report.note("associativity instances out of bounds")
                        continue
                    report.note("associativity")
                    if lhs != rhs:
                        report.fail(
                            f"acting by the composite of "
                            f"{S.operad.format_element(q)} differs from "
                            f"acting in stages at {[f.base for f in fs]}")
    return report


def _require_plain(S: StrictPCategory, what: str):
    if S.W.presentation.flavor != "plain":
        raise StrictifyError(
            f"{what} is implemented for plain presentations only; operand "
            f"order under permuted representatives is not handled")


def _act_term(S: StrictPCategory, term: Term,
              xs: Sequence[StObject]) -> StObject:
    if isinstance(term, Var):
        return xs[term.index - 1]
    children = [_act_term(S, arg, xs) for arg in term.args]
    return S.act_obj(S.W.interpretation.assignment[term.op], children)


def _comparison_cell(S: StrictPCategory, op: str,
                     xs: Sequence[StObject]) -> str:
    """The comparison's coherence map at a generator: from the value of
    the strict action to the base action on the values."""
    op_elem = S.W.interpretation.assignment[op]
    composite = S.operad.compose(op_elem, [x.element for x in xs])
    grafted = _graft_reprs(_op_tree(op, len(xs)),
                           [S.repr_tree(x.element) for x in xs])
    operands = tuple(o for x in xs for o in x.operands)
    d = S.W.derive_delta(S.repr_tree(composite), grafted, operands)
    if d is None:
        raise StrictifyError(
            f"no rewrite path for the comparison cell at {op!r}")
    return d


def _comparison_psi(S: StrictPCategory, term: Term,
                    xs: Sequence[StObject]) -> str:
    """The comparison's coherence map at a composite term, pasted from
    generator cells and generator functor images."""
    if isinstance(term, Var):
        return S.W.base.identity(xs[term.index - 1].h_value)
    children = [_act_term(S, arg, xs) for arg in term.args]
    first = _comparison_cell(S, term.op, children)
    child_cells = [_comparison_psi(S, arg, xs) for arg in term.args]
    second = S.W.generators[term.op].arr(child_cells)
    return S.W.base.compose(second, first)


def check_equivalence(S: StrictPCategory, W: WeakPCategoryData,
                      arrow_cap: int = 4,
                      instance_cap: int = 2000) -> WeakcatReport:
    """The comparison to the base: hom-sets transported bijectively,
    every base object hit exactly by the identity-element pair, and the
    construction's deltas satisfying the weak map laws (endpoints,
    invertibility, naturality, pasting) on in-bound instances."""
    if W is not S.W:
        raise StrictifyError("the comparison check needs the input the "
                             "strict category was built from")
    _require_plain(S, "the comparison check")
    report = WeakcatReport()
    base = W.base
    for x in S.objects:
        for y in S.objects:
            report.note("hom bijection")
            if len(S.hom(x, y)) != len(base.hom(x.h_value, y.h_value)):
                report.fail(f"hom sets differ between "
                            f"({x.element}, {x.operands}) and "
                            f"({y.element}, {y.operands})")
    unit = S.operad.identity()
    for a in base.objects:
        report.note("essential surjectivity")
        if S.obj(unit, (a,)).h_value != a:
            report.fail(f"identity pair over {a!r} does not land on {a!r}")
        ident = _comparison_psi(S, Var(1), (S.obj(unit, (a,)),))
        if not base.is_identity(ident):
            report.fail(f"comparison cell at the identity element over "
                        f"{a!r} is not the identity")
    checked = 0
    arrows = S.sample_arrows(arrow_cap * 4)
    for op, arity in W.presentation.signature.ops:
        op_elem = W.interpretation.assignment[op]
        for xs in _object_tuples(S, arity):
            if checked >= instance_cap:
                break
            try:
                cell = _comparison_cell(S, op, xs)
                src = S.act_obj(op_elem, xs)
            except StrictifyError:
                continue
            checked += 1
            want_dst = W.h_obj(_op_term(op, arity),
                               tuple(x.h_value for x in xs))
            a = base.arrows[cell]
            report.note("comparison cell endpoints")
            if (a.src, a.dst) != (src.h_value, want_dst):
                report.fail(f"comparison cell at {op!r} has wrong endpoints")
            if not base.is_iso(cell):
                report.fail(f"comparison cell at {op!r} is not invertible")
        for fs in _arrow_tuples(arrows, arity, arrow_cap, limit=64):
            try:
                image = S.act_arr(op_elem, fs)
                cell_src = _comparison_cell(S, op, [f.src for f in fs])
                cell_dst = _comparison_cell(S, op, [f.dst for f in fs])
            except StrictifyError:
                continue
            left = base.compose(cell_dst, image.base)
            right = base.compose(
                W.h_arr(_op_term(op, arity), [f.base for f in fs]), cell_src)
            report.note("comparison cell naturality")
            if left != right:
                report.fail(f"comparison cell at {op!r} is not natural "
                            f"at {[f.base for f in fs]}")
    for index, eq in enumerate(W.presentation.equations):
        for xs in _object_tuples(S, eq.arity):
            values = tuple(x.h_value for x in xs)
            try:
                left = _comparison_psi(S, eq.rhs, xs)
                start = _comparison_psi(S, eq.lhs, xs)
            except StrictifyError:
                continue
            d_w = W.derive_delta(eq.lhs, eq.rhs, values)
            if d_w is None:
                report.fail(f"no compiled cell for equation {index}")
                continue
            report.note("comparison pasting")
            if left != base.compose(d_w, start):
                report.fail(
                    f"comparison pasting fails for {format_term(eq.lhs)} = "
                    f"{format_term(eq.rhs)} at {values}")
    return report


def _object_tuples(S: StrictPCategory, k: int,
                   limit: int = 4096) -> list[tuple[StObject, ...]]:
    out: list[tuple[StObject, ...]] = [()]
    for _ in range(k):
        out = [t + (x,) for t in out for x in S.objects]
        if len(out) > limit:
            out = out[:limit]
    return out


def universal_property_check(W: WeakPCategoryData, B: WeakPCategoryData,
                             G: WeakPFunctorData, arity_bound: int = 3,
                             element_bound: int = 20,
                             arrow_cap: int = 6) -> WeakcatReport:
    """Builds the strict map H out of the strict category induced by a
    weak map G into a strict target, checks that H is a strict functor
    restricting to G, and certifies uniqueness: every arrow image of a
    strict map restricting to G is forced by closure from the
    restriction data."""
    report = WeakcatReport()
    if not B.is_strict():
        raise StrictifyError("the target of the induced map must be strict")
    if G.source is not W or G.target is not B:
        raise StrictifyError(
            "the weak map must run from the input to the strict target")
    S = strictify(W, arity_bound, element_bound)
    _require_plain(S, "the universal property check")
    st_fc, obj_ids, _ = S.as_finite_category()
    unit = S.operad.identity()

    def gamma(x: StObject) -> str:
        return G.psi_component(S.repr_tree(x.element), x.operands)

    obj_table = {}
    for x in S.objects:
        obj_table[obj_ids[x.key()]] = B.h_obj(
            S.repr_tree(x.element), [G.functor.obj([a]) for a in x.operands])
    arr_table = {}
    for f in S.all_arrows():
        g_src = gamma(f.src)
        g_dst = gamma(f.dst)
        inv = B.base.inverse(g_src)
        if inv is None:
            report.fail(f"coherence image at ({f.src.element}, "
                        f"{f.src.operands}) is not invertible")
            return report
        arr_table[S.arrow_id(f)] = B.base.compose(
            g_dst, B.base.compose(G.functor.arr([f.base]), inv))
    try:
        H = Functor(st_fc, B.base, 1, obj_table, arr_table, name="induced")
        report.note("functoriality")
    except WeakcatError as exc:
        report.fail(f"induced map is not a functor: {exc}")
        return report

    arrows = S.sample_arrows(arrow_cap * 4)
    for op, arity in W.presentation.signature.ops:
        op_elem = W.interpretation.assignment[op]
        for xs in _object_tuples(S, arity):
            try:
                image = S.act_obj(op_elem, xs)
            except StrictifyError:
                continue
            lhs = H.obj([obj_ids[image.key()]])
            rhs = B.h_obj(_op_term(op, arity),
                          tuple(H.obj([obj_ids[x.key()]]) for x in xs))
            report.note("strict action on objects")
            if lhs != rhs:
                report.fail(f"induced map is not strict on objects at {op!r}")
        for fs in _arrow_tuples(arrows, arity, arrow_cap, limit=64):
            try:
                image = S.act_arr(op_elem, fs)
            except StrictifyError:
                continue
            lhs = H.arr([S.arrow_id(image)])
            rhs = B.h_arr(_op_term(op, arity),
                          tuple(H.arr([S.arrow_id(f)]) for f in fs))
            report.note("strict action on arrows")
            if lhs != rhs:
                report.fail(f"induced map is not strict on arrows at {op!r}")

    for a in W.base.objects:
        report.note("restriction on objects")
        if H.obj([obj_ids[S.obj(unit, (a,)).key()]]) != G.functor.obj([a]):
            report.fail(f"restriction misses the object image at {a!r}")
    for b, arrow in W.base.arrows.items():
        st = StArrow(S.obj(unit, (arrow.src,)), S.obj(unit, (arrow.dst,)), b)
        report.note("restriction on arrows")
        if H.arr([S.arrow_id(st)]) != G.functor.arr([b]):
            report.fail(f"restriction misses the arrow image at {b!r}")
    for op, arity in W.presentation.signature.ops:
        for operands in _id_tuples(W.base.objects, arity):
            cell = _embedding_cell(S, op, operands)
            want = G.psi_component(_op_term(op, arity), operands)
            report.note("restriction coherence")
            if H.arr([S.arrow_id(cell)]) != want:
                report.fail(
                    f"restriction coherence fails at {op!r} {operands}")

    _uniqueness(S, W, B, G, H, report)
    return report


def _embedding_cell(S: StrictPCategory, op: str,
                    operands: tuple[str, ...]) -> StArrow:
    """The unit embedding's coherence map at a generator: from the
    identity pair over the base action value to the generator pair."""
    W = S.W
    arity = len(operands)
    op_elem = W.interpretation.assignment[op]
    value = W.h_obj(_op_term(op, arity), operands)
    src = S.obj(S.operad.identity(), (value,))
    dst = S.act_obj(op_elem, [S.obj(S.operad.identity(), (a,))
                              for a in operands])
    base = W.derive_delta(_op_tree(op, arity), S.repr_tree(dst.element),
                          operands)
    if base is None:
        raise StrictifyError(f"no embedding coherence cell for {op!r}")
    return StArrow(src, dst, base)


def _uniqueness(S: StrictPCategory, W: WeakPCategoryData,
                B: WeakPCategoryData, G: WeakPFunctorData, H: Functor,
                report: WeakcatReport):
    """Forced-value propagation. Any strict map restricting to G agrees
    with the pins: identities and the restriction data are forced
    directly; the embedding of each object into its identity pair is
    forced by recursion over representative trees (strictness forces
    action images, the restriction forces the coherence cells); the
    rest closes under inverse and composition. All arrows pinned and
    consistent with H means H is the only candidate."""
    st_fc, obj_ids, _ = S.as_finite_category()
    unit = S.operad.identity()
    pinned: dict[str, str] = {}
    conflicts: list[str] = []

    def pin(arrow_id: str, value: str):
        old = pinned.get(arrow_id)
        if old is None:
            pinned[arrow_id] = value
        elif old != value:
            conflicts.append(f"conflicting forced values at {arrow_id!r}")

    for x in st_fc.objects:
        pin(st_fc.identity(x), B.base.identity(H.obj([x])))
    for b, arrow in W.base.arrows.items():
        st = StArrow(S.obj(unit, (arrow.src,)), S.obj(unit, (arrow.dst,)), b)
        pin(S.arrow_id(st), G.functor.arr([b]))
    for op, arity in W.presentation.signature.ops:
        for operands in _id_tuples(W.base.objects, arity):
            cell = _embedding_cell(S, op, operands)
            pin(S.arrow_id(cell),
                G.psi_component(_op_term(op, arity), operands))

    # embeddings iota: (p, a...) -> identity pair, in representative
    # size order so child embeddings are available first
    iota_st: dict[tuple, StArrow] = {}
    iota_val: dict[tuple, str] = {}
    ordered = sorted(S.objects,
                     key=lambda x: tree_size(S.repr_tree(x.element)))
    for x in ordered:
        if x.element == unit:
            iota_st[x.key()] = S.identity(x)
            iota_val[x.key()] = B.base.identity(H.obj([obj_ids[x.key()]]))
            continue
        t = S.repr_tree(x.element)
        op_elem = W.interpretation.assignment[t.op]
        children = []
        at = 0
        for sub in t.children:
            n = tree_arity(sub)
            children.append(S.obj(W.interpretation.eval_tree(sub),
                                  x.operands[at:at + n]))
            at += n
        step_st = S.act_arr(op_elem, [iota_st[c.key()] for c in children])
        step_val = B.h_arr(_op_term(t.op, len(children)),
                           [iota_val[c.key()] for c in children])
        pin(S.arrow_id(step_st), step_val)
        values = tuple(c.h_value for c in children)
        cell_st = _embedding_cell(S, t.op, values)
        cell_val = pinned[S.arrow_id(cell_st)]
        cell_inv = S.inverse(cell_st)
        val_inv = B.base.inverse(cell_val)
        if cell_inv is None or val_inv is None:
            report.fail(f"embedding cell at ({x.element}, {x.operands}) "
                        f"is not invertible")
            return
        iota_st[x.key()] = S.compose(cell_inv, step_st)
        iota_val[x.key()] = B.base.compose(val_inv, step_val)
        pin(S.arrow_id(iota_st[x.key()]), iota_val[x.key()])

    triple = {aid: key for key, aid in S._fc_arrow_ids.items()}
    changed = True
    while changed and not conflicts:
        changed = False
        for aid in list(pinned):
            x_key, y_key, base = triple[aid]
            inv_base = W.base.inverse(base)
            inv_val = B.base.inverse(pinned[aid])
            if inv_base is None or inv_val is None:
                continue
            inv_id = S._fc_arrow_ids[(y_key, x_key, inv_base)]
            if inv_id not in pinned:
                pin(inv_id, inv_val)
                changed = True
        for f in st_fc.arrows.values():
            if f.id not in pinned:
                continue
            for g in st_fc._from.get(f.dst, ()):
                if g not in pinned:
                    continue
                comp = st_fc.compose(g, f.id)
                value = B.base.compose(pinned[g], pinned[f.id])
                if comp not in pinned:
                    pin(comp, value)
                    changed = True
                elif pinned[comp] != value:
                    conflicts.append(
                        f"forced composition mismatch at {comp!r}")

    report.note("uniqueness pins", len(pinned))
    for msg in conflicts[:3]:
        report.fail(msg)
    unpinned = [a for a in st_fc.arrows if a not in pinned]
    if unpinned:
        report.fail(f"uniqueness not certified: {len(unpinned)} arrow "
                    f"images not forced (first: {unpinned[0]!r})")
        return
    mismatched = [a for a, v in pinned.items() if H.arr([a]) != v]
    report.note("uniqueness agreement", len(pinned) - len(mismatched))
    for a in mismatched[:3]:
        report.fail(f"forced value disagrees with the induced map at {a!r}")
