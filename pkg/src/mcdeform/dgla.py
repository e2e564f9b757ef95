"""Differential graded Lie algebras.

Elements are sparse dicts ``{label: Fraction}``. A dgla only has to answer
four questions about basis labels (degree, differential, bracket, basis);
element-level operations are derived from those by bilinearity, so explicit
structure-constant algebras, End complexes and lazy tensor products all share
one interface.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Dict, Hashable, Mapping, Optional, Sequence

from . import sparse
from .errors import PreconditionFailed, ShapeMismatch
from .exactla import q, row_space_basis
from .graded import ChainComplex, _hom_differential, homology_dim, hom_basis, koszul
from .validation import ValidationReport


class BaseDGLA:
    """Shared element arithmetic; subclasses supply the basis-level data."""

    def __init__(self):
        self._bracket_cache = {}
        self._d_cache = {}
        self._by_degree = None

    # basis-level interface
    def degree(self, label) -> int:
        raise NotImplementedError

    def basis(self) -> Sequence:
        raise NotImplementedError

    def _d_basis(self, label) -> Mapping:
        raise NotImplementedError

    def _bracket_basis(self, a, b) -> Mapping:
        raise NotImplementedError

    def nilpotency_bound(self) -> Optional[int]:
        """An upper bound for the nilpotency class, or None if unknown/infinite."""
        cls = nilpotency_class(self)
        return cls if isinstance(cls, int) else None

    # cached basis operations
    def d_basis(self, label) -> Mapping:
        out = self._d_cache.get(label)
        if out is None:
            out = self._d_cache[label] = self._d_basis(label)
        return out

    def bracket_basis(self, a, b) -> Mapping:
        key = (a, b)
        out = self._bracket_cache.get(key)
        if out is None:
            out = self._bracket_cache[key] = self._bracket_basis(a, b)
        return out

    def basis_in_degree(self, k: int) -> list:
        if self._by_degree is None:
            groups: Dict[int, list] = {}
            for lab in self.basis():
                groups.setdefault(self.degree(lab), []).append(lab)
            self._by_degree = groups
        return list(self._by_degree.get(k, ()))

    def degrees(self) -> list:
        self.basis_in_degree(0)
        return sorted(self._by_degree)

    def dim(self) -> int:
        return len(self.basis())

    # element operations
    def d(self, x: Mapping) -> dict:
        acc: dict = {}
        for lab, c in x.items():
            sparse.add_into(acc, self.d_basis(lab), c)
        return acc

    def bracket(self, x: Mapping, y: Mapping) -> dict:
        acc: dict = {}
        for a, ca in x.items():
            for b, cb in y.items():
                br = self.bracket_basis(a, b)
                if br:
                    sparse.add_into(acc, br, ca * cb)
        return acc

    def ad_power(self, x: Mapping, y: Mapping, k: int) -> dict:
        for _ in range(k):
            if not y:
                break
            y = self.bracket(x, y)
        return y

    def element_degree(self, x: Mapping) -> Optional[int]:
        """Degree of a homogeneous nonzero element; None for zero; raises if mixed."""
        degs = {self.degree(lab) for lab in x}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError(f"element is not homogeneous (degrees {sorted(degs)})")
        return degs.pop()

    def check_degree(self, x: Mapping, k: int, what="element"):
        for lab in x:
            if self.degree(lab) != k:
                raise ValueError(f"{what} has a component {lab!r} of degree {self.degree(lab)}, expected {k}")

    def format_label(self, label) -> str:
        return str(label)


class DGLA(BaseDGLA):
    """A dgla given by structure constants.

    ``brackets`` may list a pair in either order; the missing order is filled
    in by graded antisymmetry. Listing both orders is allowed and is then
    checked by :func:`validate_dgla`.
    """

    def __init__(self, labels: Sequence[Hashable], degrees, differential: Mapping = None,
                 brackets: Mapping = None):
        super().__init__()
        self.labels = tuple(labels)
        if len(set(self.labels)) != len(self.labels):
            raise ShapeMismatch("duplicate basis labels")
        if isinstance(degrees, Mapping):
            self.degrees_map = {lab: int(degrees[lab]) for lab in self.labels}
        else:
            degrees = list(degrees)
            if len(degrees) != len(self.labels):
                raise ShapeMismatch("one degree per basis label required")
            self.degrees_map = dict(zip(self.labels, map(int, degrees)))
        known = set(self.labels)
        self.differential = {}
        for a, img in (differential or {}).items():
            if a not in known or any(t not in known for t in img):
                raise ShapeMismatch(f"differential of {a!r} mentions an undeclared label")
            v = sparse.vec(img)
            if v:
                self.differential[a] = v
        self.brackets = {}
        for pair, img in (brackets or {}).items():
            a, b = pair
            if a not in known or b not in known or any(t not in known for t in img):
                raise ShapeMismatch(f"bracket [{a!r}, {b!r}] mentions an undeclared label")
            v = sparse.vec(img)
            if v:
                self.brackets[(a, b)] = v
        self._nilp = None

    def degree(self, label) -> int:
        return self.degrees_map[label]

    def basis(self):
        return self.labels

    def _d_basis(self, label):
        return self.differential.get(label, {})

    def _bracket_basis(self, a, b):
        if (a, b) in self.brackets:
            return self.brackets[(a, b)]
        if (b, a) in self.brackets:
            s = -koszul(self.degree(a) * self.degree(b))
            return sparse.scale(self.brackets[(b, a)], s)
        return {}

    def nilpotency_bound(self):
        if self._nilp is None:
            self._nilp = nilpotency_class(self)
        return self._nilp if isinstance(self._nilp, int) else None


class EndDGLA(BaseDGLA):
    """End(A) with the commutator bracket; basis labels ``(i, a, j, b)`` send a in A^i to b in A^j."""

    def __init__(self, A: ChainComplex):
        super().__init__()
        self.complex = A
        lo = min(A.degrees, default=0) - max(A.degrees, default=0)
        hi = -lo
        self._basis = []
        for k in range(lo, hi + 1):
            self._basis.extend(hom_basis(A, A, k))
        self._nilp = None

    def degree(self, label):
        return label[2] - label[0]

    def basis(self):
        return self._basis

    def _d_basis(self, label):
        return _hom_differential(self.complex, self.complex, label)

    def _bracket_basis(self, e1, e2):
        i, a, j, b = e1
        k, c, l, e = e2
        out = {}
        if (l, e) == (i, a):
            out[(k, c, j, b)] = Fraction(1)
        if (j, b) == (k, c):
            key = (i, a, l, e)
            s = -koszul(self.degree(e1) * self.degree(e2))
            nv = out.get(key, 0) + s
            if nv:
                out[key] = Fraction(nv)
            else:
                out.pop(key, None)
        return out

    def compose(self, f: Mapping, g: Mapping) -> dict:
        """Composition f o g of two elements (as maps)."""
        acc: dict = {}
        for (i, a, j, b), cf in f.items():
            for (k, c, l, e), cg in g.items():
                if (l, e) == (i, a):
                    sparse.add_into(acc, {(k, c, j, b): Fraction(1)}, cf * cg)
        return acc

    def nilpotency_bound(self):
        if self._nilp is None:
            self._nilp = nilpotency_class(self)
        return self._nilp if isinstance(self._nilp, int) else None

    def format_label(self, label):
        i, a, j, b = label
        return f"{a}@{i}->{b}@{j}"


def end_dgla(A: ChainComplex) -> EndDGLA:
    return EndDGLA(A)


class CommutativeDGA:
    """Graded-commutative dg algebra by structure constants (unit optional).

    ``products`` may list a pair in either order; the other order follows by
    graded commutativity. Products with ``unit`` default to the identity.
    """

    def __init__(self, labels: Sequence[Hashable], degrees, products: Mapping = None,
                 differential: Mapping = None, unit: Hashable = None):
        self.labels = tuple(labels)
        if len(set(self.labels)) != len(self.labels):
            raise ShapeMismatch("duplicate basis labels")
        if isinstance(degrees, Mapping):
            self.degrees_map = {lab: int(degrees[lab]) for lab in self.labels}
        else:
            self.degrees_map = dict(zip(self.labels, map(int, degrees)))
            if len(self.degrees_map) != len(self.labels):
                raise ShapeMismatch("one degree per basis label required")
        known = set(self.labels)
        if unit is not None and unit not in known:
            raise ShapeMismatch(f"unit {unit!r} is not a basis label")
        self.unit = unit
        self.products = {}
        for (a, b), img in (products or {}).items():
            if a not in known or b not in known or any(t not in known for t in img):
                raise ShapeMismatch(f"product {a!r}*{b!r} mentions an undeclared label")
            self.products[(a, b)] = sparse.vec(img)
        self.differential = {}
        for a, img in (differential or {}).items():
            if a not in known or any(t not in known for t in img):
                raise ShapeMismatch(f"differential of {a!r} mentions an undeclared label")
            v = sparse.vec(img)
            if v:
                self.differential[a] = v
        self._nilp_index = None

    @property
    def unital(self):
        return self.unit is not None

    def degree(self, a) -> int:
        return self.degrees_map[a]

    def mul(self, a, b) -> Mapping:
        if (a, b) in self.products:
            return self.products[(a, b)]
        if (b, a) in self.products:
            return sparse.scale(self.products[(b, a)], koszul(self.degree(a) * self.degree(b)))
        if self.unit is not None:
            if a == self.unit:
                return {b: Fraction(1)}
            if b == self.unit:
                return {a: Fraction(1)}
        return {}

    def d(self, a) -> Mapping:
        return self.differential.get(a, {})

    def multiply(self, x: Mapping, y: Mapping) -> dict:
        acc: dict = {}
        for a, ca in x.items():
            for b, cb in y.items():
                sparse.add_into(acc, self.mul(a, b), ca * cb)
        return acc

    def d_elem(self, x: Mapping) -> dict:
        acc: dict = {}
        for a, c in x.items():
            sparse.add_into(acc, self.d(a), c)
        return acc

    def power_spans(self, generators: Sequence[Hashable]):
        """Canonical bases of I, I^2, ... for I spanned by ``generators``, until zero.

        Returns the list of nonzero levels; raises PreconditionFailed if the
        powers stabilise at a nonzero ideal.
        """
        labels = self.labels
        level = row_space_basis([sparse.to_dense({g: 1}, labels) for g in generators], len(labels))
        levels = []
        while level:
            levels.append(level)
            prods = []
            for v in level:
                ve = sparse.from_dense(v, labels)
                for g in generators:
                    w = self.multiply(ve, {g: Fraction(1)})
                    if w:
                        prods.append(sparse.to_dense(w, labels))
            nxt = row_space_basis(prods, len(labels))
            if len(nxt) == len(level):
                raise PreconditionFailed("powers of the ideal stabilise at a nonzero subspace")
            level = nxt
        return levels

    def nilpotency_index(self) -> Optional[int]:
        """Least N with all N-fold products zero (non-unital algebras only)."""
        if self.unital:
            return None
        if self._nilp_index is None:
            try:
                self._nilp_index = len(self.power_spans(self.labels)) + 1
            except PreconditionFailed:
                self._nilp_index = -1
        return None if self._nilp_index < 0 else self._nilp_index

    def is_square_zero(self) -> bool:
        return all(not self.mul(a, b) for a in self.labels for b in self.labels)


class TensorDGLA(BaseDGLA):
    """C (x) g for a graded-commutative dg algebra C and a dgla g.

    Basis labels are pairs ``(c, x)``;
    d(c x) = dc x + (-1)^|c| c dx and [a x, b y] = (-1)^{|x||b|} ab [x, y].
    """

    def __init__(self, coeffs, inner: BaseDGLA):
        super().__init__()
        for attr in ("labels", "degree", "mul", "d", "unital"):
            if not hasattr(coeffs, attr):
                raise ShapeMismatch(f"coefficient algebra lacks {attr!r}")
        self.coeffs = coeffs
        self.inner = inner
        self._basis = None

    def degree(self, label):
        c, x = label
        return self.coeffs.degree(c) + self.inner.degree(x)

    def basis(self):
        if self._basis is None:
            self._basis = [(c, x) for c in self.coeffs.labels for x in self.inner.basis()]
        return self._basis

    def _d_basis(self, label):
        c, x = label
        acc: dict = {}
        for c2, v in self.coeffs.d(c).items():
            sparse.add_into(acc, {(c2, x): v})
        s = koszul(self.coeffs.degree(c))
        for x2, v in self.inner.d_basis(x).items():
            sparse.add_into(acc, {(c, x2): v}, s)
        return acc

    def _bracket_basis(self, l1, l2):
        a, x = l1
        b, y = l2
        br = self.inner.bracket_basis(x, y)
        if not br:
            return {}
        prod = self.coeffs.mul(a, b)
        if not prod:
            return {}
        s = koszul(self.inner.degree(x) * self.coeffs.degree(b))
        acc: dict = {}
        for c, pc in prod.items():
            for w, pw in br.items():
                sparse.add_into(acc, {(c, w): pc * pw}, s)
        return acc

    def nilpotency_bound(self):
        if self.coeffs.unital:
            return self.inner.nilpotency_bound()
        idx = self.coeffs.nilpotency_index()
        if idx is None:
            return self.inner.nilpotency_bound()
        inner = self.inner.nilpotency_bound() if isinstance(self.inner, DGLA) else None
        return idx - 1 if inner is None else min(idx - 1, inner)

    def embed(self, c, x: Mapping) -> dict:
        """c (x) x for a coefficient basis label c and an element x of the inner dgla."""
        return {(c, lab): v for lab, v in x.items()}

    def format_label(self, label):
        c, x = label
        cs = self.coeffs.format_label(c) if hasattr(self.coeffs, "format_label") else str(c)
        return f"{cs}*{self.inner.format_label(x)}"


def tensor_dgla(C, g: BaseDGLA) -> TensorDGLA:
    return TensorDGLA(C, g)


# ---------------------------------------------------------------- validation

def validate_dgla(g: BaseDGLA) -> ValidationReport:
    """Check degrees, antisymmetry, d^2 = 0, Leibniz and Jacobi on basis labels."""
    basis = list(g.basis())
    deg = {a: g.degree(a) for a in basis}
    for a in basis:
        for t in g.d_basis(a):
            if g.degree(t) != deg[a] + 1:
                return ValidationReport.fail("degree", (a, t), f"d({a!r}) has a component {t!r} of the wrong degree")
    for a, b in product(basis, repeat=2):
        for t in g.bracket_basis(a, b):
            if g.degree(t) != deg[a] + deg[b]:
                return ValidationReport.fail("degree", (a, b, t), f"[{a!r}, {b!r}] has a component {t!r} of the wrong degree")
    for i, a in enumerate(basis):
        for b in basis[i:]:
            lhs = g.bracket_basis(a, b)
            rhs = sparse.scale(g.bracket_basis(b, a), -koszul(deg[a] * deg[b]))
            if sparse.sub(lhs, rhs):
                return ValidationReport.fail("antisymmetry", (a, b), f"[{a!r}, {b!r}] != -(-1)^(|a||b|) [{b!r}, {a!r}]")
    for a in basis:
        dd = g.d(g.d_basis(a))
        if dd:
            return ValidationReport.fail("d_squared", (a,), f"d(d({a!r})) = {_fmt(dd)}")
    for a, b in product(basis, repeat=2):
        lhs = g.d(g.bracket_basis(a, b))
        rhs = sparse.add(g.bracket(g.d_basis(a), {b: 1}),
                         sparse.scale(g.bracket({a: 1}, g.d_basis(b)), koszul(deg[a])))
        if sparse.sub(lhs, rhs):
            return ValidationReport.fail("leibniz", (a, b), f"d[{a!r}, {b!r}] != [da, b] + (-1)^|a| [a, db]")
    for a, b, c in product(basis, repeat=3):
        lhs = g.bracket({a: 1}, g.bracket_basis(b, c))
        rhs = sparse.add(g.bracket(g.bracket_basis(a, b), {c: 1}),
                         sparse.scale(g.bracket({b: 1}, g.bracket_basis(a, c)), koszul(deg[a] * deg[b])))
        if sparse.sub(lhs, rhs):
            return ValidationReport.fail("jacobi", (a, b, c), f"graded Jacobi fails on ({a!r}, {b!r}, {c!r})")
    return ValidationReport.ok()


def _fmt(v: Mapping) -> str:
    return " + ".join(f"{c}*{lab!r}" for lab, c in v.items()) or "0"


@dataclass(frozen=True)
class NotNilpotent:
    """The lower central series stabilises at a nonzero subspace of this dimension."""

    stable_dim: int


def nilpotency_class(g: BaseDGLA):
    """Least c with every (c+1)-fold bracket zero, or :class:`NotNilpotent`."""
    labels = list(g.basis())
    n = len(labels)
    if n == 0:
        return 0
    index = {lab: i for i, lab in enumerate(labels)}
    current = [sparse.to_dense({lab: 1}, labels, index) for lab in labels]
    c = 1
    while True:
        images = []
        for v in current:
            ve = sparse.from_dense(v, labels)
            for lab in labels:
                w = g.bracket({lab: Fraction(1)}, ve)
                if w:
                    images.append(sparse.to_dense(w, labels, index))
        nxt = row_space_basis(images, n)
        if not nxt:
            return c
        if len(nxt) == len(current):
            return NotNilpotent(len(nxt))
        current = nxt
        c += 1


# ---------------------------------------------------------------- morphisms

def underlying_complex(g: BaseDGLA) -> ChainComplex:
    comps = {k: g.basis_in_degree(k) for k in g.degrees()}
    d = {(g.degree(a), a): dict(g.d_basis(a)) for a in g.basis() if g.d_basis(a)}
    return ChainComplex.from_maps(comps, d)


class DGLAMorphism:
    """A linear map given on basis labels: ``images[a] = {target_label: coeff}``."""

    def __init__(self, source: BaseDGLA, target: BaseDGLA, images: Mapping):
        self.source = source
        self.target = target
        tgt = set(target.basis())
        self.images = {}
        for a in source.basis():
            img = sparse.vec(images.get(a, {}))
            if any(t not in tgt for t in img):
                raise ShapeMismatch(f"image of {a!r} mentions an undeclared target label")
            self.images[a] = img

    def __call__(self, x: Mapping) -> dict:
        acc: dict = {}
        for a, c in x.items():
            sparse.add_into(acc, self.images[a], c)
        return acc

    @classmethod
    def identity(cls, g: BaseDGLA) -> "DGLAMorphism":
        return cls(g, g, {a: {a: 1} for a in g.basis()})


def validate_morphism(f: DGLAMorphism) -> ValidationReport:
    src, tgt = f.source, f.target
    for a in src.basis():
        for t in f.images[a]:
            if tgt.degree(t) != src.degree(a):
                return ValidationReport.fail("degree", (a, t), "morphism does not preserve degree")
    for a in src.basis():
        if sparse.sub(f(src.d_basis(a)), tgt.d(f.images[a])):
            return ValidationReport.fail("chain_map", (a,), f"f(d{a!r}) != d f({a!r})")
    for a, b in product(src.basis(), repeat=2):
        if sparse.sub(f(src.bracket_basis(a, b)), tgt.bracket(f.images[a], f.images[b])):
            return ValidationReport.fail("bracket", (a, b), f"f[{a!r}, {b!r}] != [f{a!r}, f{b!r}]")
    return ValidationReport.ok()


def mapping_cone(f: DGLAMorphism) -> ChainComplex:
    """Cone^n = src^{n+1} + tgt^n with d(a, b) = (-da, f(a) + db)."""
    src, tgt = f.source, f.target
    degs = set(k - 1 for k in src.degrees()) | set(tgt.degrees())
    comps = {}
    d = {}
    for n in sorted(degs):
        comps[n] = [("s", a) for a in src.basis_in_degree(n + 1)] + [("t", b) for b in tgt.basis_in_degree(n)]
        for a in src.basis_in_degree(n + 1):
            img = {("s", t): -v for t, v in src.d_basis(a).items()}
            img.update({("t", t): v for t, v in f.images[a].items()})
            if img:
                d[(n, ("s", a))] = img
        for b in tgt.basis_in_degree(n):
            img = {("t", t): v for t, v in tgt.d_basis(b).items()}
            if img:
                d[(n, ("t", b))] = img
    return ChainComplex.from_maps(comps, d)


def is_quasi_iso(f: DGLAMorphism) -> bool:
    cone = mapping_cone(f)
    return all(homology_dim(cone, n) == 0 for n in cone.degrees)


def ensure_nilpotent(g: BaseDGLA) -> int:
    bound = g.nilpotency_bound()
    if bound is None:
        raise PreconditionFailed("host dgla is not nilpotent")
    return bound
