"""Artinian local non-positively graded commutative dg algebras (R, m)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Hashable, Mapping, Sequence, Tuple

from . import sparse
from .dgla import CommutativeDGA
from .errors import PreconditionFailed, ShapeMismatch
from .graded import koszul
from .validation import ValidationReport


class ArtinianLocalDGA(CommutativeDGA):
    """A finite-dimensional (R, m) with basis ``unit`` + ``m_basis``.

    Validity is not assumed; run :func:`validate_artinian`.
    """

    def __init__(self, labels, degrees, unit, m_basis: Sequence[Hashable],
                 products: Mapping = None, differential: Mapping = None):
        if unit is None:
            raise ShapeMismatch("an artinian algebra needs a unit label")
        super().__init__(labels, degrees, products, differential, unit=unit)
        self.m_basis = tuple(m_basis)
        unknown = [m for m in self.m_basis if m not in self.degrees_map]
        if unknown:
            raise ShapeMismatch(f"m-basis mentions undeclared labels {unknown}")

    def maximal_ideal(self) -> CommutativeDGA:
        """m as a non-unital dg algebra on the m-basis labels."""
        mset = set(self.m_basis)
        prods = {}
        for a, b in product(self.m_basis, repeat=2):
            img = self.mul(a, b)
            if any(t not in mset for t in img):
                raise PreconditionFailed(f"{a!r}*{b!r} leaves m")
            if img:
                prods[(a, b)] = img
        diff = {}
        for a in self.m_basis:
            img = self.d(a)
            if any(t not in mset for t in img):
                raise PreconditionFailed(f"d({a!r}) leaves m")
            if img:
                diff[a] = img
        ideal = CommutativeDGA(self.m_basis, {a: self.degree(a) for a in self.m_basis}, prods, diff)
        return ideal

    def is_square_zero_ideal(self) -> bool:
        return all(not self.mul(a, b) for a in self.m_basis for b in self.m_basis)


def make_dual_numbers(n: int) -> ArtinianLocalDGA:
    """Q[e]/e^n with deg e = 0 and d = 0; basis labels "1", "e", "e^2", ..."""
    if n < 2:
        raise ValueError("need n >= 2")

    def name(k):
        return "1" if k == 0 else ("e" if k == 1 else f"e^{k}")

    labels = [name(k) for k in range(n)]
    products = {}
    for i in range(1, n):
        for j in range(i, n):
            if i + j < n:
                products[(name(i), name(j))] = {name(i + j): 1}
    return ArtinianLocalDGA(labels, [0] * n, "1", labels[1:], products)


def make_square_zero(generators: Mapping[str, int], products: Mapping = None) -> ArtinianLocalDGA:
    """Q + span(generators) with the given products among generators (default all zero)."""
    labels = ["1"] + list(generators)
    degrees = {"1": 0, **{g: int(d) for g, d in generators.items()}}
    return ArtinianLocalDGA(labels, degrees, "1", list(generators), products or {})


def validate_artinian(R: ArtinianLocalDGA) -> ValidationReport:
    labels = R.labels
    deg = R.degrees_map
    for a in labels:
        if deg[a] > 0:
            return ValidationReport.fail("nonpositive_grading", (a,), f"{a!r} has positive degree {deg[a]}")
    if deg[R.unit] != 0:
        return ValidationReport.fail("unit", (R.unit,), "unit must have degree 0")
    if R.unit in R.m_basis or set(labels) != set(R.m_basis) | {R.unit} or len(set(R.m_basis)) != len(R.m_basis):
        return ValidationReport.fail("residue_field", (R.unit,),
                                     "basis must be the unit followed by the m-basis, so that R/m = Q")
    for a, b in product(labels, repeat=2):
        for t in R.mul(a, b):
            if deg[t] != deg[a] + deg[b]:
                return ValidationReport.fail("degree", (a, b, t), f"{a!r}*{b!r} has a component of the wrong degree")
    for a in labels:
        for t in R.d(a):
            if deg[t] != deg[a] + 1:
                return ValidationReport.fail("degree", (a, t), f"d({a!r}) has a component of the wrong degree")
    for a in labels:
        if sparse.sub(R.mul(R.unit, a), {a: 1}) or sparse.sub(R.mul(a, R.unit), {a: 1}):
            return ValidationReport.fail("unit", (a,), f"1*{a!r} != {a!r}")
    for i, a in enumerate(labels):
        for b in labels[i:]:
            lhs = R.mul(a, b)
            rhs = sparse.scale(R.mul(b, a), koszul(deg[a] * deg[b]))
            if sparse.sub(lhs, rhs):
                return ValidationReport.fail("commutativity", (a, b), f"{a!r}*{b!r} != (-1)^(|a||b|) {b!r}*{a!r}")
    for a, b, c in product(labels, repeat=3):
        lhs = R.multiply(R.mul(a, b), {c: 1})
        rhs = R.multiply({a: 1}, R.mul(b, c))
        if sparse.sub(lhs, rhs):
            return ValidationReport.fail("associativity", (a, b, c), f"({a!r}{b!r}){c!r} != {a!r}({b!r}{c!r})")
    for a in labels:
        if R.d_elem(R.d(a)):
            return ValidationReport.fail("d_squared", (a,), f"d(d({a!r})) != 0")
    for a, b in product(labels, repeat=2):
        lhs = R.d_elem(R.mul(a, b))
        rhs = sparse.add(R.multiply(R.d(a), {b: 1}), sparse.scale(R.multiply({a: 1}, R.d(b)), koszul(deg[a])))
        if sparse.sub(lhs, rhs):
            return ValidationReport.fail("leibniz", (a, b), f"d({a!r}{b!r}) != da b + (-1)^|a| a db")
    for a in R.m_basis:
        if R.unit in R.d(a):
            return ValidationReport.fail("ideal", (a,), f"d({a!r}) has a unit component, so d(m) is not inside m")
        for b in labels:
            if R.unit in R.mul(a, b):
                return ValidationReport.fail("ideal", (a, b), f"{a!r}*{b!r} has a unit component")
    try:
        R.power_spans(R.m_basis)
    except PreconditionFailed:
        return ValidationReport.fail("nilpotent", tuple(R.m_basis), "powers of m stabilise at a nonzero ideal")
    return ValidationReport.ok()


@dataclass(frozen=True)
class MFiltration:
    """Canonical bases of m^1, ..., m^(N-1) (all nonzero) with m^N = 0.

    Basis vectors are dense over ``labels`` (the full basis of R).
    """

    labels: Tuple[Hashable, ...]
    levels: Tuple[Tuple[Tuple[Fraction, ...], ...], ...]

    @property
    def index(self) -> int:
        return len(self.levels) + 1

    def level(self, j: int):
        """Basis of m^j as sparse dicts (empty for j >= N); j = 0 is not supported."""
        if j < 1:
            raise ValueError("levels start at m^1")
        if j > len(self.levels):
            return []
        return [sparse.from_dense(v, self.labels) for v in self.levels[j - 1]]


def m_filtration(R: ArtinianLocalDGA) -> MFiltration:
    levels = R.power_spans(R.m_basis)
    return MFiltration(tuple(R.labels), tuple(tuple(tuple(v) for v in lvl) for lvl in levels))
