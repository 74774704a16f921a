"""Operads of the three flavors and evaluation of trees inside them.

An operad here is a family of abstract n-ary elements with an arity-1
identity, simultaneous composition, and (depending on flavor) an action
of permutations or of arbitrary finite functions on inputs. The action
convention is substitutional throughout: a function f from n inputs to
m inputs turns an n-ary element p into the m-ary element whose i-th
original input reads input f(i), so permutations act on the left via
composition with the inverse.

Concrete instances: terminal operads (one element per arity), the
initial operad (only the identity), the operad of permutations,
multiplicity vectors (commutative-monoid operations), integer
polynomials, endomorphism operads of a finite carrier, and free operads
of labelled trees over a signature.
"""

from __future__ import annotations

import itertools
import os
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

from .finmaps import (FinFunction, block_compose, block_permutation,
                      comb_compose, compose, direct_sum, fn as make_fn,
                      format_fn, format_perm, identity, inverse, parse_perm,
                      perm, perm_identity, select)
from .terms import (FLAVOR_RANK, Equation, Presentation, Signature, Term,
                    format_term)
from .trees import (FPTree, LEAF, Leaf, Node, PermutedTree,
                    act_fn_tree, act_perm_tree, compose_fp, compose_permuted,
                    enumerate_fp_trees, enumerate_permuted_trees,
                    enumerate_trees, format_fp_tree, format_permuted_tree,
                    format_tree, graft, leaf_fp, leaf_permuted,
                    parse_fp_tree, parse_permuted_tree, parse_tree, to_tree,
                    tree_arity)


class OperadError(ValueError):
    pass


def worker_count() -> int:
    """Thread pool size, from OPERAD_WORKBENCH_THREADS (default 1)."""
    raw = os.environ.get("OPERAD_WORKBENCH_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


def map_maybe_parallel(fn: Callable, items: Sequence) -> list:
    """Map fn over items, threaded when configured, order preserving."""
    workers = worker_count()
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


class Operad:
    """Shared interface; subclasses fill in the element type."""

    flavor = "plain"
    name = "operad"
    finite_per_arity = False

    def identity(self):
        raise NotImplementedError

    def arity_of(self, p) -> int:
        raise NotImplementedError

    def compose(self, p, qs: Sequence):
        raise NotImplementedError

    def act_perm(self, sigma: FinFunction, p):
        if FLAVOR_RANK[self.flavor] < FLAVOR_RANK["symmetric"]:
            raise OperadError(f"{self.name} has no permutation action")
        return self.act_fn(sigma, p)

    def act_fn(self, f: FinFunction, p):
        raise OperadError(f"{self.name} has no finite-function action")

    def elements_equal(self, p, q) -> bool:
        return p == q

    def enumerate_elements(self, arity: int, bound: int) -> list:
        """At most bound elements of the arity, in a fixed canonical order."""
        raise NotImplementedError

    def parse_element(self, text: str):
        raise NotImplementedError

    def format_element(self, p) -> str:
        raise NotImplementedError

    def _check_compose(self, p, qs: Sequence):
        if len(qs) != self.arity_of(p):
            raise OperadError(
                f"composition needs {self.arity_of(p)} arguments, got {len(qs)}")

    def _check_act(self, f: FinFunction, p):
        if f.dom != self.arity_of(p):
            raise OperadError(
                f"action domain {f.dom} does not match arity {self.arity_of(p)}")


class TerminalPlainOperad(Operad):
    """One element per arity; the element is its own arity."""

    flavor = "plain"
    name = "terminal-plain"
    finite_per_arity = True

    def identity(self):
        return 1

    def arity_of(self, p) -> int:
        return p

    def compose(self, p, qs):
        self._check_compose(p, qs)
        return sum(qs)

    def enumerate_elements(self, arity, bound):
        return [arity] if bound >= 1 else []

    def parse_element(self, text):
        try:
            n = int(text)
        except ValueError:
            raise OperadError(f"expected an arity, got {text!r}") from None
        if n < 0:
            raise OperadError("arity must be nonnegative")
        return n

    def format_element(self, p):
        return str(p)


class TerminalSymmetricOperad(TerminalPlainOperad):
    """One element per arity with the trivial permutation action."""

    flavor = "symmetric"
    name = "terminal-symmetric"

    def act_fn(self, f, p):
        self._check_act(f, p)
        if not f.is_bijection:
            raise OperadError(f"{self.name} only acts by permutations")
        return p


class InitialOperad(Operad):
    """Only the arity-1 identity."""

    flavor = "symmetric"
    name = "initial"
    finite_per_arity = True

    def identity(self):
        return 1

    def arity_of(self, p) -> int:
        if p != 1:
            raise OperadError("the only element is the identity")
        return 1

    def compose(self, p, qs):
        self._check_compose(p, qs)
        return 1

    def act_fn(self, f, p):
        self._check_act(f, p)
        if not f.is_bijection:
            raise OperadError(f"{self.name} only acts by permutations")
        return 1

    def enumerate_elements(self, arity, bound):
        return [1] if arity == 1 and bound >= 1 else []

    def parse_element(self, text):
        if text.strip() != "1":
            raise OperadError("the only element is 1")
        return 1

    def format_element(self, p):
        return "1"


class SymmetryOperad(Operad):
    """Permutations under block composition.

    Composing a permutation of n blocks with inner permutations shuffles
    whole blocks while each inner permutation shuffles within its block.
    The action is substitutional: sigma sends tau to tau after the
    inverse of sigma.
    """

    flavor = "symmetric"
    name = "symmetries"
    finite_per_arity = True

    def identity(self):
        return perm_identity(1)

    def arity_of(self, p) -> int:
        return p.dom

    def compose(self, p, qs):
        self._check_compose(p, qs)
        return block_compose(p, qs)

    def act_fn(self, f, p):
        self._check_act(f, p)
        if not f.is_bijection:
            raise OperadError(f"{self.name} only acts by permutations")
        return compose(p, inverse(f))

    def enumerate_elements(self, arity, bound):
        out = []
        for table in itertools.permutations(range(1, arity + 1)):
            if len(out) >= bound:
                break
            out.append(perm(table))
        return out

    def parse_element(self, text):
        try:
            return parse_perm(text)
        except Exception as exc:
            raise OperadError(str(exc)) from exc

    def format_element(self, p):
        return format_perm(p)


class CommMonoidFPOperad(Operad):
    """Multiplicity vectors: the n-ary operations of commutative monoids.

    An n-ary element is a vector of n multiplicities; composition scales
    each inner vector by the outer multiplicity of its slot and
    concatenates, and a finite function pushes multiplicities forward by
    summing fibers.
    """

    flavor = "fp"
    name = "comm-monoid-fp"
    finite_per_arity = False

    def identity(self):
        return (1,)

    def arity_of(self, p) -> int:
        return len(p)

    def compose(self, p, qs):
        self._check_compose(p, qs)
        out: list[int] = []
        for scale, q in zip(p, qs):
            out.extend(scale * x for x in q)
        return tuple(out)

    def act_fn(self, f, p):
        self._check_act(f, p)
        out = [0] * f.cod
        for i, x in enumerate(p, start=1):
            out[f(i) - 1] += x
        return tuple(out)

    def enumerate_elements(self, arity, bound):
        out = []
        total = 0
        while len(out) < bound:
            batch = _vectors_of_sum(total, arity)
            if not batch and total > 0 and arity == 0:
                break
            for v in batch:
                if len(out) >= bound:
                    break
                out.append(v)
            total += 1
        return out

    def parse_element(self, text):
        body = text.strip()
        if not (body.startswith("[") and body.endswith("]")):
            raise OperadError(f"expected a vector like [1,2,0], got {text!r}")
        inner = body[1:-1].strip()
        if not inner:
            return ()
        try:
            values = tuple(int(x) for x in inner.split(","))
        except ValueError:
            raise OperadError(f"bad vector {text!r}") from None
        if any(x < 0 for x in values):
            raise OperadError("multiplicities must be nonnegative")
        return values

    def format_element(self, p):
        return "[" + ",".join(str(x) for x in p) + "]"


def _vectors_of_sum(total: int, arity: int) -> list[tuple[int, ...]]:
    if arity == 0:
        return [()] if total == 0 else []
    if arity == 1:
        return [(total,)]
    out = []
    for first in range(total + 1):
        for rest in _vectors_of_sum(total - first, arity - 1):
            out.append((first,) + rest)
    return out


@dataclass(frozen=True)
class Poly:
    """Integer polynomial in variables x1..x_nvars, stored normalized."""

    nvars: int
    terms: tuple[tuple[tuple[int, ...], int], ...]

    def degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=0)

    def evaluate(self, point: Sequence[int]) -> int:
        if len(point) != self.nvars:
            raise OperadError(
                f"point has {len(point)} coordinates, expected {self.nvars}")
        total = 0
        for exps, coeff in self.terms:
            value = coeff
            for x, e in zip(point, exps):
                value *= x ** e
            total += value
        return total


def _poly_norm(nvars: int, raw: Mapping[tuple[int, ...], int]) -> Poly:
    cleaned = {e: c for e, c in raw.items() if c != 0}
    ordered = sorted(cleaned.items(), key=lambda item: (-sum(item[0]), item[0]))
    return Poly(nvars, tuple(ordered))


def poly_const(nvars: int, c: int) -> Poly:
    return _poly_norm(nvars, {(0,) * nvars: c})


def poly_var(nvars: int, i: int) -> Poly:
    if not 1 <= i <= nvars:
        raise OperadError(f"variable x{i} out of range for {nvars} variables")
    exps = tuple(1 if j == i else 0 for j in range(1, nvars + 1))
    return _poly_norm(nvars, {exps: 1})


def poly_add(p: Poly, q: Poly) -> Poly:
    if p.nvars != q.nvars:
        raise OperadError("polynomial arities differ")
    raw: dict[tuple[int, ...], int] = dict(p.terms)
    for exps, coeff in q.terms:
        raw[exps] = raw.get(exps, 0) + coeff
    return _poly_norm(p.nvars, raw)


def poly_mul(p: Poly, q: Poly) -> Poly:
    if p.nvars != q.nvars:
        raise OperadError("polynomial arities differ")
    raw: dict[tuple[int, ...], int] = {}
    for e1, c1 in p.terms:
        for e2, c2 in q.terms:
            exps = tuple(a + b for a, b in zip(e1, e2))
            raw[exps] = raw.get(exps, 0) + c1 * c2
    return _poly_norm(p.nvars, raw)


def _poly_embed(q: Poly, total: int, offset: int) -> Poly:
    raw = {}
    for exps, coeff in q.terms:
        padded = (0,) * offset + exps + (0,) * (total - offset - q.nvars)
        raw[padded] = coeff
    return _poly_norm(total, raw)


class IntPolyFPOperad(Operad):
    """Integer polynomials under substitution.

    An n-ary element is a polynomial in x1..xn; composition substitutes
    inner polynomials (over disjoint variable blocks) for the outer
    variables, and a finite function relabels variables, merging
    exponents along fibers.
    """

    flavor = "fp"
    name = "int-poly-fp"
    finite_per_arity = False

    def identity(self):
        return poly_var(1, 1)

    def arity_of(self, p) -> int:
        return p.nvars

    def compose(self, p, qs):
        self._check_compose(p, qs)
        sizes = [q.nvars for q in qs]
        total = sum(sizes)
        offsets = [sum(sizes[:i]) for i in range(len(sizes))]
        embedded = [_poly_embed(q, total, off) for q, off in zip(qs, offsets)]
        result = poly_const(total, 0)
        for exps, coeff in p.terms:
            term = poly_const(total, coeff)
            for factor, e in zip(embedded, exps):
                for _ in range(e):
                    term = poly_mul(term, factor)
            result = poly_add(result, term)
        return result

    def act_fn(self, f, p):
        self._check_act(f, p)
        raw: dict[tuple[int, ...], int] = {}
        for exps, coeff in p.terms:
            merged = [0] * f.cod
            for i, e in enumerate(exps, start=1):
                merged[f(i) - 1] += e
            key = tuple(merged)
            raw[key] = raw.get(key, 0) + coeff
        return _poly_norm(f.cod, raw)

    def enumerate_elements(self, arity, bound):
        out = [poly_const(arity, 0), poly_const(arity, 1)]
        degree = 1
        while len(out) < bound and degree <= bound:
            for exps in sorted(_exponents_of_degree(degree, arity)):
                if len(out) >= bound:
                    break
                out.append(_poly_norm(arity, {exps: 1}))
            degree += 1
        return out[:bound]

    def parse_element(self, text):
        return parse_poly(text)

    def format_element(self, p):
        return format_poly(p)


def _exponents_of_degree(degree: int, arity: int) -> list[tuple[int, ...]]:
    if arity == 0:
        return [()] if degree == 0 else []
    return [tuple(v) for v in _vectors_of_sum(degree, arity)]


_POLY_TERM_RE = re.compile(
    r"^\s*(?:(?P<coeff>-?[0-9]+)\s*(?:\*\s*)?)?(?P<vars>(?:x[1-9][0-9]*(?:\^[0-9]+)?\s*(?:\*\s*)?)*)\s*$")
_POLY_VAR_RE = re.compile(r"x([1-9][0-9]*)(?:\^([0-9]+))?")


def parse_poly(text: str, nvars: int | None = None) -> Poly:
    """Parse a polynomial like `2*x1^2*x2 - 3`; arity defaults to the
    largest variable index."""
    chunks: list[tuple[int, str]] = []
    sign = 1
    body = text.strip()
    if not body:
        raise OperadError("empty polynomial")
    if body.startswith("+") or body.startswith("-"):
        sign = -1 if body[0] == "-" else 1
        body = body[1:]
    while True:
        plus = _next_sign(body)
        if plus is None:
            chunks.append((sign, body))
            break
        chunks.append((sign, body[:plus]))
        sign = -1 if body[plus] == "-" else 1
        body = body[plus + 1:]
    parsed: list[tuple[int, dict[int, int]]] = []
    max_index = 0
    for sgn, chunk in chunks:
        m = _POLY_TERM_RE.match(chunk)
        if not m or not chunk.strip():
            raise OperadError(f"bad polynomial term {chunk!r}")
        coeff = int(m.group("coeff")) if m.group("coeff") else 1
        exps: dict[int, int] = {}
        for vm in _POLY_VAR_RE.finditer(m.group("vars") or ""):
            index = int(vm.group(1))
            power = int(vm.group(2)) if vm.group(2) else 1
            exps[index] = exps.get(index, 0) + power
            max_index = max(max_index, index)
        parsed.append((sgn * coeff, exps))
    arity = nvars if nvars is not None else max_index
    raw: dict[tuple[int, ...], int] = {}
    for coeff, exps in parsed:
        if any(i > arity for i in exps):
            raise OperadError("variable index exceeds declared arity")
        key = tuple(exps.get(i, 0) for i in range(1, arity + 1))
        raw[key] = raw.get(key, 0) + coeff
    return _poly_norm(arity, raw)


def _next_sign(body: str) -> int | None:
    for i, ch in enumerate(body):
        if ch in "+-":
            return i
    return None


def format_poly(p: Poly) -> str:
    if not p.terms:
        return "0"
    pieces = []
    for position, (exps, coeff) in enumerate(p.terms):
        factors = []
        for i, e in enumerate(exps, start=1):
            if e == 1:
                factors.append(f"x{i}")
            elif e > 1:
                factors.append(f"x{i}^{e}")
        magnitude = abs(coeff)
        if not factors:
            body = str(magnitude)
        elif magnitude == 1:
            body = "*".join(factors)
        else:
            body = f"{magnitude}*" + "*".join(factors)
        if position == 0:
            pieces.append(body if coeff > 0 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if coeff > 0 else f"- {body}")
    return " ".join(pieces)


@dataclass(frozen=True)
class FiniteOp:
    """A total n-ary operation on the carrier {1..carrier}, tabulated."""

    carrier: int
    arity: int
    table: tuple[int, ...]

    def __post_init__(self):
        if len(self.table) != self.carrier ** self.arity:
            raise OperadError(
                f"table needs {self.carrier ** self.arity} entries, "
                f"got {len(self.table)}")
        if any(not 1 <= v <= self.carrier for v in self.table):
            raise OperadError("table values must lie in the carrier")

    def __call__(self, args: Sequence[int]) -> int:
        if len(args) != self.arity:
            raise OperadError(f"expected {self.arity} arguments")
        index = 0
        for a in args:
            if not 1 <= a <= self.carrier:
                raise OperadError("argument outside the carrier")
            index = index * self.carrier + (a - 1)
        return self.table[index]


def op_from_callable(carrier: int, arity: int, fn: Callable) -> FiniteOp:
    table = []
    for args in itertools.product(range(1, carrier + 1), repeat=arity):
        table.append(fn(*args))
    return FiniteOp(carrier, arity, tuple(table))


class EndOperad(Operad):
    """All finitary operations on a finite carrier, under substitution."""

    flavor = "fp"
    finite_per_arity = True

    def __init__(self, carrier: int):
        if carrier < 1:
            raise OperadError("carrier must be nonempty")
        self.carrier = carrier
        self.name = f"end-{carrier}"

    def identity(self):
        return FiniteOp(self.carrier, 1, tuple(range(1, self.carrier + 1)))

    def arity_of(self, p) -> int:
        return p.arity

    def compose(self, p, qs):
        self._check_compose(p, qs)
        if any(q.carrier != self.carrier for q in qs):
            raise OperadError("carrier mismatch")
        sizes = [q.arity for q in qs]
        total = sum(sizes)
        table = []
        for args in itertools.product(range(1, self.carrier + 1), repeat=total):
            mids = []
            offset = 0
            for q, k in zip(qs, sizes):
                mids.append(q(args[offset:offset + k]))
                offset += k
            table.append(p(mids))
        return FiniteOp(self.carrier, total, tuple(table))

    def act_fn(self, f, p):
        self._check_act(f, p)
        table = []
        for args in itertools.product(range(1, self.carrier + 1), repeat=f.cod):
            table.append(p(select(f, args)))
        return FiniteOp(self.carrier, f.cod, tuple(table))

    def enumerate_elements(self, arity, bound):
        out = []
        for table in itertools.product(range(1, self.carrier + 1),
                                       repeat=self.carrier ** arity):
            if len(out) >= bound:
                break
            out.append(FiniteOp(self.carrier, arity, table))
        return out

    def parse_element(self, text):
        arity_text, sep, table_text = text.partition(":")
        if not sep:
            raise OperadError(f"expected 'arity:[values]', got {text!r}")
        try:
            arity = int(arity_text.strip())
        except ValueError:
            raise OperadError(f"bad arity in {text!r}") from None
        body = table_text.strip()
        if not (body.startswith("[") and body.endswith("]")):
            raise OperadError(f"expected a table like [1,2], got {text!r}")
        inner = body[1:-1].strip()
        values = tuple(int(x) for x in inner.split(",")) if inner else ()
        return FiniteOp(self.carrier, arity, values)

    def format_element(self, p):
        return f"{p.arity}:[" + ",".join(str(v) for v in p.table) + "]"


class FreeOperad(Operad):
    """Labelled trees over a signature, composed by grafting.

    Elements are plain trees, permuted trees, or relabelled trees
    according to the flavor. No equations are imposed: two elements are
    equal exactly when they are the same labelled pair.
    """

    finite_per_arity = False

    def __init__(self, signature: Signature, flavor: str = "plain"):
        if flavor not in FLAVOR_RANK:
            raise OperadError(f"unknown flavor {flavor!r}")
        self.signature = signature
        self.flavor = flavor
        self.name = f"free-{flavor}"

    def identity(self):
        if self.flavor == "plain":
            return LEAF
        if self.flavor == "symmetric":
            return leaf_permuted()
        return leaf_fp()

    def generator(self, op: str):
        k = self.signature.arity(op)
        node = Node(op, (LEAF,) * k)
        if self.flavor == "plain":
            return node
        if self.flavor == "symmetric":
            return PermutedTree(perm_identity(k), node)
        return FPTree(identity(k), node)

    def arity_of(self, p) -> int:
        if self.flavor == "plain":
            return tree_arity(p)
        return p.arity

    def compose(self, p, qs):
        self._check_compose(p, qs)
        if self.flavor == "plain":
            return graft(p, qs)
        if self.flavor == "symmetric":
            return compose_permuted(p, qs)
        return compose_fp(p, qs)

    def act_fn(self, f, p):
        self._check_act(f, p)
        if self.flavor == "symmetric":
            if not f.is_bijection:
                raise OperadError(f"{self.name} only acts by permutations")
            return act_perm_tree(f, p)
        return act_fn_tree(f, p)

    def enumerate_elements(self, arity, bound):
        max_size = 1
        out: list = []
        while len(out) < bound and max_size <= 2 * bound + 2:
            out = self._enumerate(arity, max_size)
            max_size += 1
        return out[:bound]

    def _enumerate(self, arity, max_size):
        if self.flavor == "plain":
            return enumerate_trees(self.signature, arity, max_size)
        if self.flavor == "symmetric":
            return enumerate_permuted_trees(self.signature, arity, max_size)
        return enumerate_fp_trees(self.signature, arity, max_size)

    def parse_element(self, text):
        try:
            if self.flavor == "plain":
                return parse_tree(text, self.signature)
            if self.flavor == "symmetric":
                return parse_permuted_tree(text, self.signature)
            return parse_fp_tree(text, self.signature)
        except Exception as exc:
            raise OperadError(str(exc)) from exc

    def format_element(self, p):
        if self.flavor == "plain":
            return format_tree(p)
        if self.flavor == "symmetric":
            return format_permuted_tree(p)
        return format_fp_tree(p)


def eval_tree(tree, assignment: Mapping[str, object], operad: Operad):
    """Evaluate a tree in an operad, sending each node label through the
    assignment. Permuted and relabelled pairs evaluate their plain tree
    and then apply the action."""
    if isinstance(tree, PermutedTree):
        return operad.act_perm(tree.perm, eval_tree(tree.tree, assignment, operad))
    if isinstance(tree, FPTree):
        return operad.act_fn(tree.fn, eval_tree(tree.tree, assignment, operad))
    if isinstance(tree, Leaf):
        return operad.identity()
    if tree.op not in assignment:
        raise OperadError(f"no assignment for operation {tree.op!r}")
    children = [eval_tree(c, assignment, operad) for c in tree.children]
    return operad.compose(assignment[tree.op], children)


class Interpretation:
    """An assignment of operad elements to the operations of a
    presentation, arity checked at construction."""

    def __init__(self, presentation: Presentation, operad: Operad,
                 assignment: Mapping[str, object]):
        if FLAVOR_RANK[operad.flavor] < FLAVOR_RANK[presentation.flavor]:
            raise OperadError(
                f"target {operad.name} ({operad.flavor}) cannot interpret a "
                f"{presentation.flavor} presentation")
        for op, declared in presentation.signature.ops:
            if op not in assignment:
                raise OperadError(f"missing assignment for {op!r}")
            actual = operad.arity_of(assignment[op])
            if actual != declared:
                raise OperadError(
                    f"operation {op!r} has arity {declared}, "
                    f"assigned element has arity {actual}")
        self.presentation = presentation
        self.operad = operad
        self.assignment = dict(assignment)

    def eval_term(self, t: Term, n: int):
        """Evaluate a term at a declared arity: split off the labelling
        function, evaluate the shape, then act."""
        pair = to_tree(t, n)
        base = eval_tree(pair.tree, self.assignment, self.operad)
        if pair.fn.is_identity:
            return base
        if pair.fn.is_bijection:
            return self.operad.act_perm(pair.fn, base)
        return self.operad.act_fn(pair.fn, base)

    def eval_tree(self, tree):
        return eval_tree(tree, self.assignment, self.operad)


@dataclass
class InterpretationReport:
    equation_failures: list[tuple[Equation, str, str]]
    surjectivity: dict[int, tuple[int, int]] | None

    @property
    def ok(self) -> bool:
        return not self.equation_failures

    def lines(self) -> list[str]:
        out = []
        if self.ok:
            out.append("all equations hold")
        for eq, lhs, rhs in self.equation_failures:
            out.append(f"fails {format_term(eq.lhs)} = {format_term(eq.rhs)} "
                       f"@{eq.arity}: {lhs} != {rhs}")
        if self.surjectivity is not None:
            for arity in sorted(self.surjectivity):
                hit, total = self.surjectivity[arity]
                out.append(f"arity {arity}: reaches {hit} of {total} elements")
        return out


def validate_interpretation(interp: Interpretation,
                            surjectivity_arities: Sequence[int] = (),
                            element_bound: int = 64,
                            tree_size_bound: int = 7) -> InterpretationReport:
    """Check every equation of the presentation under the assignment.

    When surjectivity_arities is given and the target has finitely many
    elements per arity, also report how many target elements of those
    arities are hit by trees up to tree_size_bound.
    """
    failures = []
    for eq in interp.presentation.equations:
        lhs = interp.eval_term(eq.lhs, eq.arity)
        rhs = interp.eval_term(eq.rhs, eq.arity)
        if not interp.operad.elements_equal(lhs, rhs):
            failures.append((eq, interp.operad.format_element(lhs),
                             interp.operad.format_element(rhs)))
    surjectivity = None
    if surjectivity_arities and interp.operad.finite_per_arity:
        surjectivity = {}
        for arity in surjectivity_arities:
            targets = interp.operad.enumerate_elements(arity, element_bound)
            reached = set()
            for tree in enumerate_trees(interp.presentation.signature, arity,
                                        tree_size_bound):
                value = interp.eval_tree(tree)
                for i, t in enumerate(targets):
                    if interp.operad.elements_equal(value, t):
                        reached.add(i)
                        break
            surjectivity[arity] = (len(reached), len(targets))
    return InterpretationReport(failures, surjectivity)


@dataclass
class AxiomReport:
    checked: dict[str, int]
    failures: list[str]

    @property
    def ok(self) -> bool:
        return not self.failures

    def lines(self) -> list[str]:
        out = [f"{law}: {count} instances" for law, count in sorted(self.checked.items())]
        out.extend(f"FAIL {msg}" for msg in self.failures)
        return out


def unit_instance_ok(operad: Operad, p) -> bool:
    n = operad.arity_of(p)
    left = operad.compose(operad.identity(), [p])
    right = operad.compose(p, [operad.identity()] * n)
    return operad.elements_equal(left, p) and operad.elements_equal(right, p)


def assoc_instance_ok(operad: Operad, p, qs: Sequence, rss: Sequence[Sequence]) -> bool:
    flat = [r for rs in rss for r in rs]
    one_shot = operad.compose(operad.compose(p, qs), flat)
    nested = operad.compose(p, [operad.compose(q, rs) for q, rs in zip(qs, rss)])
    return operad.elements_equal(one_shot, nested)


def act_functorial_ok(operad: Operad, g: FinFunction, f: FinFunction, p) -> bool:
    stepwise = operad.act_fn(g, operad.act_fn(f, p))
    joined = operad.act_fn(compose(g, f), p)
    identity_ok = operad.elements_equal(
        operad.act_fn(identity(operad.arity_of(p)) if operad.flavor == "fp"
                      else perm_identity(operad.arity_of(p)), p), p)
    return identity_ok and operad.elements_equal(stepwise, joined)


def equivariance_outer_ok(operad: Operad, sigma: FinFunction, p,
                          rs: Sequence) -> bool:
    """Acting on the outer element then composing equals composing the
    permuted argument list and block-permuting the result."""
    sizes = [operad.arity_of(r) for r in rs]
    left = operad.compose(operad.act_perm(sigma, p), rs)
    routed = select(sigma, tuple(rs))
    bp = block_permutation(sigma, sizes)
    right = operad.act_perm(bp, operad.compose(p, list(routed)))
    return operad.elements_equal(left, right)


def equivariance_inner_ok(operad: Operad, p, gs: Sequence[FinFunction],
                          rs: Sequence) -> bool:
    """Acting on each argument equals composing first and acting by the
    direct sum."""
    acted = [operad.act_fn(g, r) if operad.flavor == "fp"
             else operad.act_perm(g, r) for g, r in zip(gs, rs)]
    left = operad.compose(p, acted)
    joined = direct_sum(list(gs))
    base = operad.compose(p, list(rs))
    right = operad.act_fn(joined, base) if operad.flavor == "fp" \
        else operad.act_perm(joined, base)
    return operad.elements_equal(left, right)


def combing_ok(operad: Operad, f: FinFunction, p, gs: Sequence[FinFunction],
               qs: Sequence) -> bool:
    """Composing two acted elements equals acting by the block
    substitution of the functions on the composite of the bare elements."""
    acted_inner = [operad.act_fn(g, q) for g, q in zip(gs, qs)]
    left = operad.compose(operad.act_fn(f, p), acted_inner)
    routed = select(f, tuple(qs))
    right = operad.act_fn(comb_compose(f, list(gs)),
                          operad.compose(p, list(routed)))
    return operad.elements_equal(left, right)


def operad_axiom_check(operad: Operad, max_arity: int = 2,
                       element_bound: int = 4, size_cap: int = 3,
                       instance_cap: int = 4000) -> AxiomReport:
    """Systematically probe the operad laws on small enumerated elements.

    Walks units, associativity, action functoriality, both equivariance
    shapes, and (for fp flavor) the combined substitution law, stopping
    each law after instance_cap instances.
    """
    pools = {n: operad.enumerate_elements(n, element_bound)
             for n in range(max_arity + 1)}
    checked: dict[str, int] = {}
    failures: list[str] = []

    def note(law: str, ok: bool, describe: Callable[[], str]):
        checked[law] = checked.get(law, 0) + 1
        if not ok:
            failures.append(f"{law}: {describe()}")

    for n, pool in pools.items():
        for p in pool:
            if checked.get("unit", 0) >= instance_cap:
                break
            note("unit", unit_instance_ok(operad, p),
                 lambda p=p: operad.format_element(p))

    for n in range(max_arity + 1):
        for p in pools[n]:
            for ks in itertools.product(range(max_arity + 1), repeat=n):
                if checked.get("associativity", 0) >= instance_cap:
                    break
                qs = [pools[k][0] if pools[k] else None for k in ks]
                if any(q is None for q in qs):
                    continue
                rss = [[operad.identity()] * k for k in ks]
                note("associativity", assoc_instance_ok(operad, p, qs, rss),
                     lambda p=p: operad.format_element(p))

    if FLAVOR_RANK[operad.flavor] >= FLAVOR_RANK["symmetric"]:
        for n in range(1, max_arity + 1):
            tables = list(itertools.permutations(range(1, n + 1)))
            for p in pools[n]:
                for t1 in tables:
                    for t2 in tables:
                        if checked.get("action", 0) >= instance_cap:
                            break
                        note("action",
                             act_functorial_ok(operad, perm(t1), perm(t2), p),
                             lambda p=p: operad.format_element(p))
                for t in tables:
                    for ks in itertools.product(range(max_arity + 1), repeat=n):
                        if checked.get("equivariance-outer", 0) >= instance_cap:
                            break
                        rs = [pools[k][0] if pools[k] else None for k in ks]
                        if any(r is None for r in rs):
                            continue
                        note("equivariance-outer",
                             equivariance_outer_ok(operad, perm(t), p, rs),
                             lambda p=p, t=t: f"{operad.format_element(p)} by {t}")

    if operad.flavor == "fp":
        for n in range(1, max_arity + 1):
            for p in pools[n]:
                for ks in itertools.product(range(1, max_arity + 1), repeat=n):
                    rs = [pools[k][0] if pools[k] else None for k in ks]
                    if any(r is None for r in rs):
                        continue
                    gs = [make_fn(tuple(1 for _ in range(k)), 1) for k in ks]
                    if checked.get("equivariance-inner", 0) < instance_cap:
                        note("equivariance-inner",
                             equivariance_inner_ok(operad, p, gs, rs),
                             lambda p=p: operad.format_element(p))
    elif FLAVOR_RANK[operad.flavor] >= FLAVOR_RANK["symmetric"]:
        for n in range(1, max_arity + 1):
            for p in pools[n]:
                for ks in itertools.product(range(1, max_arity + 1), repeat=n):
                    rs = [pools[k][0] if pools[k] else None for k in ks]
                    if any(r is None for r in rs):
                        continue
                    gs = [perm(tuple(range(k, 0, -1))) for k in ks]
                    if checked.get("equivariance-inner", 0) < instance_cap:
                        note("equivariance-inner",
                             equivariance_inner_ok(operad, p, gs, rs),
                             lambda p=p: operad.format_element(p))

    if operad.flavor == "fp":
        fns = [make_fn(table, c)
               for c in range(1, max_arity + 1)
               for dom in range(1, max_arity + 1)
               for table in itertools.product(range(1, c + 1), repeat=dom)]
        inner_shapes = [(1,), (1, 1)][:max(1, max_arity)]
        for f in fns:
            for p in pools.get(f.dom, []):
                for gs_tables in itertools.product(inner_shapes, repeat=f.cod):
                    if checked.get("combined-substitution", 0) >= instance_cap:
                        break
                    gs = [make_fn(t, 1) for t in gs_tables]
                    qs = []
                    for t in gs_tables:
                        pool = pools.get(len(t), [])
                        qs.append(pool[0] if pool else None)
                    if any(q is None for q in qs):
                        continue
                    note("combined-substitution",
                         combing_ok(operad, f, p, gs, qs),
                         lambda p=p, f=f: f"{operad.format_element(p)} by {format_fn(f)}")

    return AxiomReport(checked, failures)


BUILTIN_OPERADS: dict[str, Callable[[], Operad]] = {
    "terminal-plain": TerminalPlainOperad,
    "terminal-symmetric": TerminalSymmetricOperad,
    "initial": InitialOperad,
    "symmetries": SymmetryOperad,
    "comm-monoid-fp": CommMonoidFPOperad,
    "int-poly-fp": IntPolyFPOperad,
}


def builtin_operad(name: str, presentation: Presentation | None = None) -> Operad:
    """Look up a target operad by name; `free` builds the free operad of
    the presentation's own flavor over its signature, and `end-N` the
    endomorphism operad of an N-element carrier."""
    if name == "free":
        if presentation is None:
            raise OperadError("the free target needs a presentation")
        return FreeOperad(presentation.signature, presentation.flavor)
    m = re.fullmatch(r"end-([0-9]+)", name)
    if m:
        return EndOperad(int(m.group(1)))
    if name in BUILTIN_OPERADS:
        return BUILTIN_OPERADS[name]()
    raise OperadError(f"unknown target operad {name!r}")


def default_assignment(presentation: Presentation, operad: Operad
                       ) -> dict[str, object]:
    """The stock assignment used by the command line for each builtin:
    whatever canonical element of the right arity the target offers."""
    out: dict[str, object] = {}
    for op, k in presentation.signature.ops:
        if isinstance(operad, (TerminalPlainOperad, TerminalSymmetricOperad)):
            out[op] = k
        elif isinstance(operad, InitialOperad):
            if k != 1:
                raise OperadError(
                    f"the initial operad has no element of arity {k}")
            out[op] = 1
        elif isinstance(operad, SymmetryOperad):
            out[op] = perm_identity(k)
        elif isinstance(operad, CommMonoidFPOperad):
            out[op] = (1,) * k
        elif isinstance(operad, IntPolyFPOperad):
            zero = poly_const(k, 0)
            total = zero
            for i in range(1, k + 1):
                total = poly_add(total, poly_var(k, i))
            out[op] = total
        elif isinstance(operad, FreeOperad):
            out[op] = operad.generator(op)
        elif isinstance(operad, EndOperad):
            out[op] = op_from_callable(
                operad.carrier, k,
                lambda *args: args[0] if args else 1)
        else:
            raise OperadError(
                f"no default assignment for target {operad.name}")
    return out
