"""The clone carried by a finite-product operad and back: projections,
shared-context substitution, and both roundtrip directions."""

import itertools

import pytest
from conftest import end_pools, vector_pools, vectors

from operad_workbench.clones import (Clone, CloneError, CloneFromFP,
                                     EndClone, FPFromClone,
                                     clone_axiom_check,
                                     clone_roundtrip_check, roundtrip_check)
from operad_workbench.operads import (CommMonoidFPOperad, EndOperad,
                                      FiniteOp, IntPolyFPOperad,
                                      op_from_callable, operad_axiom_check)

COMM = CommMonoidFPOperad()


def test_projections_are_unit_vectors():
    clone = CloneFromFP(COMM)
    assert clone.proj(1, 3) == (1, 0, 0)
    assert clone.proj(3, 3) == (0, 0, 1)
    with pytest.raises(CloneError):
        clone.proj(4, 3)
    with pytest.raises(CloneError):
        clone.proj(0, 1)


def test_ccompose_is_matrix_substitution():
    # substituting m-ary vectors q_i into p in a shared context sums
    # multiplicity contributions: result[j] = sum_i p[i] * q_i[j]
    clone = CloneFromFP(COMM)
    for n in range(0, 3):
        for m in range(0, 3):
            for p in vectors(n, 2):
                for qs in itertools.product(vectors(m, 2), repeat=n):
                    got = clone.ccompose(p, list(qs), context=m)
                    want = tuple(
                        sum(p[i] * qs[i][j] for i in range(n))
                        for j in range(m))
                    assert got == want


def test_nullary_substitution_needs_context():
    clone = CloneFromFP(COMM)
    assert clone.ccompose((), [], context=2) == (0, 0)
    with pytest.raises(CloneError):
        clone.ccompose((), [])
    with pytest.raises(CloneError):
        clone.ccompose((1, 1), [(1,), (1, 0)])
    with pytest.raises(CloneError):
        clone.ccompose((1, 1), [(1, 0), (0, 1)], context=3)


def test_clone_from_fp_rejects_plain_targets():
    from operad_workbench.operads import TerminalPlainOperad
    with pytest.raises(CloneError):
        CloneFromFP(TerminalPlainOperad())


def test_end_clone_substitutes_pointwise():
    clone = EndClone(2)
    land = op_from_callable(2, 2, lambda a, b: min(a, b))
    swap = op_from_callable(2, 2, lambda a, b: b)
    first = op_from_callable(2, 2, lambda a, b: a)
    got = clone.ccompose(land, [swap, first])
    want = op_from_callable(2, 2, lambda a, b: min(b, a))
    assert got == want
    assert clone.proj(2, 2) == swap


def test_clone_axiom_suites():
    report = clone_axiom_check(CloneFromFP(COMM), vector_pools())
    assert report.ok, report.lines()
    end_pools = {n: EndClone(2).enumerate_elements(n, 8) for n in range(4)}
    report = clone_axiom_check(EndClone(2), end_pools)
    assert report.ok, report.lines()


def test_roundtrip_comm_monoid():
    report = roundtrip_check(COMM, vector_pools())
    assert report.ok, report.lines()
    assert report.checked["compose"] > 0
    assert report.checked["action"] > 0


def test_roundtrip_end_operad():
    report = roundtrip_check(EndOperad(3), end_pools(3))
    assert report.ok, report.lines()


def test_clone_roundtrip_end_clone():
    report = clone_roundtrip_check(EndClone(3), end_pools(3))
    assert report.ok, report.lines()


def test_fp_from_clone_is_an_operad():
    operad = FPFromClone(EndClone(2))
    report = operad_axiom_check(operad, element_bound=3)
    assert report.ok, report.lines()


def test_roundtrip_detects_broken_clone():
    class Skewed(Clone):
        """EndClone with a corrupted binary projection."""

        def __init__(self):
            self.inner = EndClone(2)
            self.name = "skewed"

        def proj(self, i, n):
            if (i, n) == (1, 2):
                return self.inner.proj(2, 2)
            return self.inner.proj(i, n)

        def ccompose(self, p, qs, context=None):
            return self.inner.ccompose(p, qs, context)

        def arity_of(self, p):
            return self.inner.arity_of(p)

        def enumerate_elements(self, arity, bound):
            return self.inner.enumerate_elements(arity, bound)

    pools = {n: EndClone(2).enumerate_elements(n, 4) for n in range(3)}
    report = clone_roundtrip_check(Skewed(), pools)
    assert not report.ok
