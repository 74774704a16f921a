"""Signatures, terms, equations, presentations, and bounded equality closure.

Terms are syntax trees with numbered variable leaves x1, x2, ... and
operation nodes drawn from a signature. A term is classified by its
labelling function (the left-to-right sequence of variable occurrences):
identity = strongly regular, bijection = linear, anything else = general.
An equation carries its arity explicitly since the classification
depends on it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Sequence

from .finmaps import FinFunction

STRONGLY_REGULAR = "strongly_regular"
LINEAR = "linear"
GENERAL = "general"

_CLASS_RANK = {STRONGLY_REGULAR: 0, LINEAR: 1, GENERAL: 2}


class TermError(ValueError):
    pass


class PresentationError(ValueError):
    pass


@dataclass(frozen=True)
class Var:
    index: int

    def __post_init__(self):
        if self.index < 1:
            raise TermError(f"variable index {self.index} must be positive")


@dataclass(frozen=True)
class App:
    op: str
    args: tuple["Term", ...]


Term = Var | App

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_VAR_RE = re.compile(r"^x[1-9][0-9]*$")


@dataclass(frozen=True)
class Signature:
    """A finite family of operation names with arities."""

    ops: tuple[tuple[str, int], ...]

    def __post_init__(self):
        seen = set()
        for name, arity in self.ops:
            if not _NAME_RE.fullmatch(name) or _VAR_RE.match(name):
                raise TermError(f"bad operation name {name!r}")
            if arity < 0:
                raise TermError(f"negative arity for {name!r}")
            if name in seen:
                raise TermError(f"duplicate operation {name!r}")
            seen.add(name)

    @classmethod
    def of(cls, ops: Mapping[str, int]) -> "Signature":
        return cls(tuple(ops.items()))

    def arity(self, name: str) -> int:
        for op, k in self.ops:
            if op == name:
                return k
        raise TermError(f"unknown operation {name!r}")

    def names(self) -> list[str]:
        return [op for op, _ in self.ops]

    def __contains__(self, name: str) -> bool:
        return any(op == name for op, _ in self.ops)


def validate_term(t: Term, signature: Signature) -> None:
    if isinstance(t, Var):
        return
    if t.op not in signature:
        raise TermError(f"unknown operation {t.op!r}")
    declared = signature.arity(t.op)
    if len(t.args) != declared:
        raise TermError(
            f"operation {t.op!r} expects {declared} arguments, got {len(t.args)}")
    for a in t.args:
        validate_term(a, signature)


def term_size(t: Term) -> int:
    if isinstance(t, Var):
        return 1
    return 1 + sum(term_size(a) for a in t.args)


def var_seq(t: Term) -> tuple[int, ...]:
    """Left-to-right sequence of variable occurrences."""
    if isinstance(t, Var):
        return (t.index,)
    out: list[int] = []
    for a in t.args:
        out.extend(var_seq(a))
    return tuple(out)


def support(t: Term) -> frozenset[int]:
    return frozenset(var_seq(t))


def max_var(t: Term) -> int:
    return max(support(t), default=0)


def label_fn(t: Term, n: int) -> FinFunction:
    """The labelling function [m] -> [n], j |-> index of the j-th occurrence."""
    seq = var_seq(t)
    for v in seq:
        if v > n:
            raise TermError(f"variable x{v} exceeds declared arity {n}")
    return FinFunction(len(seq), n, seq)


def classify_term(t: Term, n: int) -> str:
    lbl = label_fn(t, n)
    if lbl.is_identity:
        return STRONGLY_REGULAR
    if lbl.is_bijection:
        return LINEAR
    return GENERAL


def graft_term(t: Term, subs: Sequence[Term]) -> Term:
    """Substitute subs[i-1] for every occurrence of x_i; needs support <= len(subs)."""
    if isinstance(t, Var):
        if t.index > len(subs):
            raise TermError(f"graft needs at least {t.index} arguments")
        return subs[t.index - 1]
    return App(t.op, tuple(graft_term(a, subs) for a in t.args))


def substitute(t: Term, binding: Mapping[int, Term]) -> Term:
    if isinstance(t, Var):
        try:
            return binding[t.index]
        except KeyError:
            raise TermError(f"no binding for x{t.index}") from None
    return App(t.op, tuple(substitute(a, binding) for a in t.args))


def rename_vars(t: Term, f: FinFunction) -> Term:
    """Relabel variables along f: x_i |-> x_{f(i)}."""
    if isinstance(t, Var):
        return Var(f(t.index))
    return App(t.op, tuple(rename_vars(a, f) for a in t.args))


def positions(t: Term) -> list[tuple[int, ...]]:
    """All subterm positions, root first, as child-index paths."""
    out: list[tuple[int, ...]] = [()]
    if isinstance(t, App):
        for i, a in enumerate(t.args):
            out.extend((i,) + p for p in positions(a))
    return out


def subterm_at(t: Term, pos: Sequence[int]) -> Term:
    for i in pos:
        if not isinstance(t, App) or i >= len(t.args):
            raise TermError(f"no subterm at {tuple(pos)}")
        t = t.args[i]
    return t


def replace_at(t: Term, pos: Sequence[int], s: Term) -> Term:
    if not pos:
        return s
    if not isinstance(t, App) or pos[0] >= len(t.args):
        raise TermError(f"no subterm at {tuple(pos)}")
    args = list(t.args)
    args[pos[0]] = replace_at(args[pos[0]], pos[1:], s)
    return App(t.op, tuple(args))


@dataclass(frozen=True)
class Equation:
    """A pair of terms at a declared arity."""

    arity: int
    lhs: Term
    rhs: Term

    def __post_init__(self):
        if self.arity < 0:
            raise TermError("negative equation arity")
        for side in (self.lhs, self.rhs):
            bad = [v for v in support(side) if v > self.arity]
            if bad:
                raise TermError(
                    f"variable x{bad[0]} exceeds equation arity {self.arity}")


def classify_equation(eq: Equation) -> str:
    left = classify_term(eq.lhs, eq.arity)
    right = classify_term(eq.rhs, eq.arity)
    return left if _CLASS_RANK[left] >= _CLASS_RANK[right] else right


FLAVORS = ("plain", "symmetric", "fp")
FLAVOR_RANK = {"plain": 0, "symmetric": 1, "fp": 2}


@dataclass(frozen=True)
class Presentation:
    name: str
    flavor: str
    signature: Signature
    equations: tuple[Equation, ...]

    def __post_init__(self):
        if self.flavor not in FLAVORS:
            raise PresentationError(f"unknown flavor {self.flavor!r}")
        for eq in self.equations:
            validate_term(eq.lhs, self.signature)
            validate_term(eq.rhs, self.signature)
            cls = classify_equation(eq)
            if self.flavor == "plain" and cls != STRONGLY_REGULAR:
                raise PresentationError(
                    f"plain flavor requires strongly regular equations, "
                    f"got {format_equation(eq)} ({cls})")
            if self.flavor == "symmetric" and cls == GENERAL:
                raise PresentationError(
                    f"symmetric flavor requires linear equations, "
                    f"got {format_equation(eq)} ({cls})")


def classify_presentation(p: Presentation) -> str:
    worst = STRONGLY_REGULAR
    for eq in p.equations:
        cls = classify_equation(eq)
        if _CLASS_RANK[cls] > _CLASS_RANK[worst]:
            worst = cls
    return worst


def format_term(t: Term) -> str:
    if isinstance(t, Var):
        return f"x{t.index}"
    if not t.args:
        return t.op
    return f"{t.op}({','.join(format_term(a) for a in t.args)})"


def format_equation(eq: Equation) -> str:
    return f"@{eq.arity}: {format_term(eq.lhs)} = {format_term(eq.rhs)}"


def term_sort_key(t: Term) -> tuple[int, str]:
    return (term_size(t), format_term(t))


class _TermParser:
    def __init__(self, text: str, signature: Signature | None):
        self.text = text
        self.pos = 0
        self.signature = signature

    def error(self, message: str) -> TermError:
        return TermError(f"{message} at column {self.pos + 1} in {self.text!r}")

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        self.skip_ws()
        if self.peek() != ch:
            raise self.error(f"expected {ch!r}")
        self.pos += 1

    def name(self) -> str:
        self.skip_ws()
        m = _NAME_RE.match(self.text, self.pos)
        if not m:
            raise self.error("expected a name")
        self.pos = m.end()
        return m.group(0)

    def term(self) -> Term:
        name = self.name()
        if _VAR_RE.match(name):
            return Var(int(name[1:]))
        self.skip_ws()
        args: tuple[Term, ...] = ()
        if self.peek() == "(":
            self.pos += 1
            parsed = [self.term()]
            self.skip_ws()
            while self.peek() == ",":
                self.pos += 1
                parsed.append(self.term())
                self.skip_ws()
            self.expect(")")
            args = tuple(parsed)
        t = App(name, args)
        if self.signature is not None:
            if name not in self.signature:
                raise self.error(f"unknown operation {name!r}")
            declared = self.signature.arity(name)
            if len(args) != declared:
                raise self.error(
                    f"operation {name!r} expects {declared} arguments, got {len(args)}")
        return t

    def finish(self):
        self.skip_ws()
        if self.pos != len(self.text):
            raise self.error("trailing input")


def parse_term(text: str, signature: Signature | None = None) -> Term:
    parser = _TermParser(text, signature)
    t = parser.term()
    parser.finish()
    return t


_EQ_ARITY_RE = re.compile(r"^@([0-9]+)\s*:\s*(.*)$")


def parse_presentation(text: str) -> Presentation:
    """Parse the theory file format.

    Layout: a `theory <Name>` line, a `flavor plain|symmetric|fp` line,
    an `ops:` section of `name : arity` lines, and an optional `eqs:`
    section of `[@n:] lhs = rhs` lines. Lines starting with `#` are
    comments. Equation arity defaults to the maximal variable index.
    """
    name = None
    flavor = None
    ops: list[tuple[str, int]] = []
    raw_eqs: list[tuple[int | None, str, str]] = []
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue

        def fail(message: str):
            raise PresentationError(f"line {lineno}: {message}")

        if line.startswith("theory"):
            name = line[len("theory"):].strip()
            if not name:
                fail("theory needs a name")
            continue
        if line.startswith("flavor"):
            flavor = line[len("flavor"):].strip()
            continue
        if line == "ops:":
            section = "ops"
            continue
        if line == "eqs:":
            section = "eqs"
            continue
        if section == "ops":
            if ":" not in line:
                fail(f"expected 'name : arity', got {line!r}")
            op_name, _, arity_text = line.partition(":")
            try:
                ops.append((op_name.strip(), int(arity_text.strip())))
            except ValueError:
                fail(f"bad arity in {line!r}")
            continue
        if section == "eqs":
            arity: int | None = None
            body = line
            m = _EQ_ARITY_RE.match(line)
            if m:
                arity = int(m.group(1))
                body = m.group(2)
            if "=" not in body:
                fail(f"expected 'lhs = rhs', got {line!r}")
            lhs_text, _, rhs_text = body.partition("=")
            raw_eqs.append((arity, lhs_text.strip(), rhs_text.strip()))
            continue
        fail(f"unexpected line {line!r}")

    if name is None:
        raise PresentationError("missing theory line")
    if flavor is None:
        raise PresentationError("missing flavor line")
    signature = Signature(tuple(ops))
    equations = []
    for arity, lhs_text, rhs_text in raw_eqs:
        try:
            lhs = parse_term(lhs_text, signature)
            rhs = parse_term(rhs_text, signature)
        except TermError as exc:
            raise PresentationError(str(exc)) from exc
        if arity is None:
            arity = max(max_var(lhs), max_var(rhs))
        equations.append(Equation(arity, lhs, rhs))
    return Presentation(name, flavor, signature, tuple(equations))


def format_presentation(p: Presentation) -> str:
    lines = [f"theory {p.name}", f"flavor {p.flavor}", "ops:"]
    lines.extend(f"  {op} : {arity}" for op, arity in p.signature.ops)
    if p.equations:
        lines.append("eqs:")
        lines.extend(f"  {format_equation(eq)}" for eq in p.equations)
    return "\n".join(lines) + "\n"


def enumerate_terms(signature: Signature, arity: int, max_size: int,
                    kind: str = GENERAL) -> list[Term]:
    """All terms with support inside 1..arity and at most max_size nodes.

    kind narrows the result: LINEAR keeps terms using each of x1..x_arity
    exactly once, STRONGLY_REGULAR additionally in increasing order.
    Sorted by (size, text) for determinism.
    """
    by_size: dict[int, list[Term]] = {}

    def of_size(s: int) -> list[Term]:
        if s in by_size:
            return by_size[s]
        found: list[Term] = []
        if s == 1:
            found.extend(Var(i) for i in range(1, arity + 1))
            found.extend(App(op, ()) for op, k in signature.ops if k == 0)
        else:
            for op, k in signature.ops:
                if k == 0 or k > s - 1:
                    continue
                for split in _compositions(s - 1, k):
                    _product_terms(found, op, split, of_size)
        by_size[s] = found
        return found

    out: list[Term] = []
    for s in range(1, max_size + 1):
        out.extend(of_size(s))
    if kind == LINEAR:
        target = tuple(range(1, arity + 1))
        out = [t for t in out if tuple(sorted(var_seq(t))) == target]
    elif kind == STRONGLY_REGULAR:
        target = tuple(range(1, arity + 1))
        out = [t for t in out if var_seq(t) == target]
    return sorted(out, key=term_sort_key)


def _product_terms(found: list[Term], op: str, split: tuple[int, ...], of_size):
    pools = [of_size(part) for part in split]
    if any(not pool for pool in pools):
        return
    indices = [0] * len(pools)
    while True:
        found.append(App(op, tuple(pool[i] for pool, i in zip(pools, indices))))
        for slot in reversed(range(len(pools))):
            indices[slot] += 1
            if indices[slot] < len(pools[slot]):
                break
            indices[slot] = 0
        else:
            return


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


@dataclass(frozen=True)
class RewriteStep:
    """One elementary rewrite: an equation instance applied at a position."""

    source: Term
    target: Term
    eq_index: int
    forward: bool
    position: tuple[int, ...]
    binding: tuple[tuple[int, Term], ...]


_AXIOM = "axiom"
_CONG = "cong"


class _ArityClosure:
    """Union-find with a merge graph over one bounded term universe."""

    def __init__(self, universe: list[Term]):
        self.universe = universe
        self.index = set(universe)
        self.parent: dict[Term, Term] = {t: t for t in universe}
        self.edges: dict[Term, list[tuple[Term, tuple]]] = {t: [] for t in universe}

    def find(self, t: Term) -> Term:
        root = t
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[t] != root:
            self.parent[t], t = root, self.parent[t]
        return root

    def union(self, a: Term, b: Term, reason: tuple) -> bool:
        self.edges[a].append((b, reason))
        self.edges[b].append((a, reason))
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True

    def same(self, a: Term, b: Term) -> bool:
        return self.find(a) == self.find(b)


class SaturationResult:
    """Bounded equality closure: per-arity partitions plus merge explanations."""

    def __init__(self, closures: dict[int, _ArityClosure], equations: tuple[Equation, ...],
                 max_term_size: int, exhausted: bool):
        self._closures = closures
        self.equations = equations
        self.max_term_size = max_term_size
        self.exhausted = exhausted

    def arities(self) -> list[int]:
        return sorted(self._closures)

    def universe(self, arity: int) -> list[Term]:
        return list(self._closures[arity].universe)

    def in_universe(self, arity: int, t: Term) -> bool:
        return arity in self._closures and t in self._closures[arity].index

    def same(self, arity: int, t1: Term, t2: Term) -> bool:
        closure = self._closures[arity]
        if t1 not in closure.index or t2 not in closure.index:
            raise TermError("term outside the saturated universe")
        return closure.same(t1, t2)

    def anchor(self, arity: int, t: Term) -> Term:
        """A class representative usable as a grouping key; stable within
        this result object, arbitrary beyond that."""
        closure = self._closures[arity]
        if t not in closure.index:
            raise TermError("term outside the saturated universe")
        return closure.find(t)

    def classes(self, arity: int) -> list[list[Term]]:
        closure = self._closures[arity]
        grouped: dict[Term, list[Term]] = {}
        for t in closure.universe:
            grouped.setdefault(closure.find(t), []).append(t)
        out = [sorted(batch, key=term_sort_key) for batch in grouped.values()]
        return sorted(out, key=lambda batch: term_sort_key(batch[0]))

    def explain(self, arity: int, t1: Term, t2: Term) -> list[RewriteStep] | None:
        """A chain of elementary rewrites from t1 to t2, or None if unmerged."""
        closure = self._closures[arity]
        if t1 not in closure.index or t2 not in closure.index:
            raise TermError("term outside the saturated universe")
        if not closure.same(t1, t2):
            return None
        return self._elementary_path(closure, t1, t2)

    def explain_many(self, arity: int, t1: Term, t2: Term, limit: int = 4,
                     slack: int = 4) -> list[list[RewriteStep]]:
        """Up to limit distinct rewrite chains from t1 to t2, shortest
        first, ties broken by step serialization. Chains follow simple
        paths in the merge graph no longer than the shortest plus slack;
        an empty list means the terms are not merged."""
        closure = self._closures[arity]
        if t1 not in closure.index or t2 not in closure.index:
            raise TermError("term outside the saturated universe")
        if not closure.same(t1, t2):
            return []
        if t1 == t2:
            return [[]]
        cap = len(self._bfs(closure, t1, t2)) + slack
        found: list[list[tuple[Term, Term, tuple]]] = []
        path: list[tuple[Term, Term, tuple]] = []
        on_path = {t1}

        def walk(u: Term):
            if len(found) >= 4 * limit + 16:
                return
            if u == t2:
                found.append(list(path))
                return
            if len(path) >= cap:
                return
            # repeated unions leave parallel duplicate edges; visit each
            # distinct (target, reason) once
            for v, reason in dict.fromkeys(closure.edges[u]):
                if v in on_path:
                    continue
                on_path.add(v)
                path.append((u, v, reason))
                walk(v)
                path.pop()
                on_path.discard(v)

        walk(t1)
        found.sort(key=lambda links: (
            len(links),
            [format_term(a) + "/" + format_term(b) for a, b, _ in links]))
        out = []
        for links in found[:limit]:
            steps: list[RewriteStep] = []
            for a, b, reason in links:
                steps.extend(self._expand(closure, a, b, reason))
            out.append(steps)
        return out

    def _elementary_path(self, closure: _ArityClosure, t1: Term, t2: Term
                         ) -> list[RewriteStep]:
        links = self._bfs(closure, t1, t2)
        steps: list[RewriteStep] = []
        for (a, b, reason) in links:
            steps.extend(self._expand(closure, a, b, reason))
        return steps

    @staticmethod
    def _bfs(closure: _ArityClosure, t1: Term, t2: Term
             ) -> list[tuple[Term, Term, tuple]]:
        if t1 == t2:
            return []
        seen = {t1}
        frontier = [t1]
        back: dict[Term, tuple[Term, tuple]] = {}
        while frontier:
            nxt = []
            for u in frontier:
                for v, reason in closure.edges[u]:
                    if v in seen:
                        continue
                    seen.add(v)
                    back[v] = (u, reason)
                    if v == t2:
                        links = []
                        cur = t2
                        while cur != t1:
                            prev, why = back[cur]
                            links.append((prev, cur, why))
                            cur = prev
                        links.reverse()
                        return links
                    nxt.append(v)
            frontier = nxt
        raise TermError("merge graph disconnected inside a class")

    def _expand(self, closure: _ArityClosure, a: Term, b: Term, reason: tuple
                ) -> list[RewriteStep]:
        if reason[0] == _AXIOM:
            _, eq_index, binding, lhs_inst, _rhs_inst = reason
            forward = a == lhs_inst
            return [RewriteStep(a, b, eq_index, forward, (), binding)]
        assert reason[0] == _CONG and isinstance(a, App) and isinstance(b, App)
        steps: list[RewriteStep] = []
        current = a
        for i, (child_a, child_b) in enumerate(zip(a.args, b.args)):
            if child_a == child_b:
                continue
            for step in self._elementary_path(closure, child_a, child_b):
                args = list(current.args)
                args[i] = step.target
                nxt = App(current.op, tuple(args))
                steps.append(RewriteStep(current, nxt, step.eq_index, step.forward,
                                         (i,) + step.position, step.binding))
                current = nxt
        assert current == b
        return steps


def closure_saturate(signature: Signature, equations: Sequence[Equation],
                     max_arity: int, max_term_size: int,
                     max_steps: int = 1_000_000) -> SaturationResult:
    """Bounded equality closure over all terms of each arity 0..max_arity.

    Seeds every equation instance whose two sides fit inside the size
    bound, then closes under one-level congruence and transitivity to a
    fixpoint (or until max_steps unions have been attempted). Sound with
    respect to the unrestricted closure; complete only up to the bounds.
    """
    equations = tuple(equations)
    closures: dict[int, _ArityClosure] = {}
    budget = max_steps
    exhausted = False
    for arity in range(max_arity + 1):
        universe = enumerate_terms(signature, arity, max_term_size)
        closure = _ArityClosure(universe)
        closures[arity] = closure
        budget = _seed_instances(closure, equations, universe, max_term_size, budget)
        if budget <= 0:
            exhausted = True
            break
        budget = _congruence_fixpoint(closure, budget)
        if budget <= 0:
            exhausted = True
            break
    return SaturationResult(closures, equations, max_term_size, exhausted)


def _seed_instances(closure: _ArityClosure, equations: tuple[Equation, ...],
                    universe: list[Term], max_term_size: int, budget: int) -> int:
    for eq_index, eq in enumerate(equations):
        occurring = sorted(support(eq.lhs) | support(eq.rhs))
        base_l = term_size(eq.lhs)
        base_r = term_size(eq.rhs)
        occ_l = {v: _occurrences(eq.lhs, v) for v in occurring}
        occ_r = {v: _occurrences(eq.rhs, v) for v in occurring}

        def assign(i: int, size_l: int, size_r: int, binding: dict[int, Term],
                   budget: int) -> int:
            if budget <= 0:
                return budget
            if i == len(occurring):
                lhs_inst = substitute(eq.lhs, binding) if occurring else eq.lhs
                rhs_inst = substitute(eq.rhs, binding) if occurring else eq.rhs
                if lhs_inst in closure.index and rhs_inst in closure.index:
                    frozen = tuple(sorted(binding.items()))
                    closure.union(lhs_inst, rhs_inst,
                                  (_AXIOM, eq_index, frozen, lhs_inst, rhs_inst))
                return budget - 1
            v = occurring[i]
            for t in universe:
                extra = term_size(t) - 1
                new_l = size_l + occ_l[v] * extra
                new_r = size_r + occ_r[v] * extra
                # universe is size-sorted, so the first overflow persists
                if new_l > max_term_size or new_r > max_term_size:
                    break
                binding[v] = t
                budget = assign(i + 1, new_l, new_r, binding, budget)
                del binding[v]
                if budget <= 0:
                    return budget
            return budget

        budget = assign(0, base_l, base_r, {}, budget)
        if budget <= 0:
            return budget
    return budget


def _occurrences(t: Term, v: int) -> int:
    if isinstance(t, Var):
        return 1 if t.index == v else 0
    return sum(_occurrences(a, v) for a in t.args)


def _congruence_fixpoint(closure: _ArityClosure, budget: int) -> int:
    # hash terms by operation and child classes; a shared signature
    # means the children are pairwise merged, so the terms merge too
    compound = [t for t in closure.universe if isinstance(t, App) and t.args]
    changed = True
    while changed and budget > 0:
        changed = False
        buckets: dict[tuple, App] = {}
        for t in compound:
            key = (t.op, tuple(closure.find(a) for a in t.args))
            anchor = buckets.setdefault(key, t)
            if anchor is t:
                continue
            # union even when already merged: the redundant edge keeps
            # alternative rewrite paths available to explain_many
            budget -= 1
            if closure.union(anchor, t, (_CONG,)):
                changed = True
            if budget <= 0:
                return budget
    return budget
