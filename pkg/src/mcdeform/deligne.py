"""Nerve simplices, the simplicial gauge group, pi_0 at square-zero order,
and finite simplicial-set utilities.

n-simplices of the nerve are MC elements of Omega_n (x) h; n-simplices of the
gauge group are degree-0 elements of the same host (their logarithms). Both
sets are infinite, so everything here is a constructor or a membership test.

Face convention (shared with :mod:`mcdeform.forms`): on the 1-simplex face 1
is the endpoint t = 0 and face 0 is the endpoint t = 1.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Hashable, List, Mapping, Optional, Sequence, Tuple

from . import sparse
from .dgla import BaseDGLA, DGLAMorphism, TensorDGLA, is_quasi_iso, tensor_dgla
from .errors import DegreeOverflow, MCDeformError, PreconditionFailed
from .exactla import complement_basis, span_rank
from .forms import (DEFAULT_DEGREE_BOUND, FormsAlgebra, SullivanForm, degeneracy_map, face_map,
                    format_monomial, restrict_to_point)
from .mc import bch, curvature, gauge_act, gauge_equivalent, is_mc, matrix_of, mc_solve_square_zero


def forms_host(n: int, inner: BaseDGLA, bound: int = DEFAULT_DEGREE_BOUND) -> TensorDGLA:
    """Omega_n (x) inner, cached per (n, bound) on the inner dgla."""
    cache = inner.__dict__.setdefault("_forms_hosts", {})
    key = (n, bound)
    if key not in cache:
        cache[key] = tensor_dgla(FormsAlgebra(n, bound), inner)
    return cache[key]


def split_by_inner(Z: Mapping, n: int, bound: int) -> Dict[Hashable, SullivanForm]:
    """Group an element of Omega_n (x) h into one form per h-label."""
    groups: Dict[Hashable, dict] = defaultdict(dict)
    for (mono, x), c in Z.items():
        groups[x][mono] = c
    return {x: SullivanForm(n, terms, bound) for x, terms in groups.items()}


def join_by_inner(parts: Mapping[Hashable, SullivanForm]) -> dict:
    out = {}
    for x, w in parts.items():
        for mono, c in w.terms.items():
            out[(mono, x)] = c
    return out


def constant_element(n: int, x: Mapping) -> dict:
    """1 (x) x in Omega_n (x) h."""
    unit = ((0,) * n, ())
    return {(unit, lab): c for lab, c in x.items()}


def to_inner(Z0: Mapping) -> dict:
    """Strip the Omega_0 = Q factor."""
    out = {}
    for (mono, x), c in Z0.items():
        if mono != ((), ()):
            raise ValueError("not an element over the 0-simplex")
        out[x] = c
    return out


def element_face(Z: Mapping, n: int, i: int, bound: int = DEFAULT_DEGREE_BOUND) -> dict:
    return join_by_inner({x: face_map(i, w) for x, w in split_by_inner(Z, n, bound).items()})


def element_degeneracy(Z: Mapping, n: int, i: int, bound: int = DEFAULT_DEGREE_BOUND) -> dict:
    return join_by_inner({x: degeneracy_map(i, w) for x, w in split_by_inner(Z, n, bound).items()})


def element_at_point(Z: Mapping, n: int, coords: Sequence, bound: int = DEFAULT_DEGREE_BOUND) -> dict:
    """Restriction of the 0-form part to a rational point of the simplex, as an element of h."""
    out = {}
    for x, w in split_by_inner(Z, n, bound).items():
        v = restrict_to_point(w, coords)
        if v:
            out[x] = v
    return out


# ---------------------------------------------------------------- nerve

@dataclass(frozen=True)
class Membership:
    member: bool
    witness: Optional[Tuple[str, str, Fraction]] = None

    def __bool__(self):
        return self.member


def nerve_member(host: TensorDGLA, Z: Mapping) -> Membership:
    """Is Z a Maurer-Cartan element of Omega_n (x) h?

    On failure the witness names one nonzero curvature coefficient as
    (form monomial, inner label, coefficient).
    """
    curv = curvature(host, Z)
    if not curv:
        return Membership(True)
    (mono, x), c = min(curv.items(), key=lambda kv: (format_monomial(kv[0][0]), str(kv[0][1])))
    return Membership(False, (format_monomial(mono), host.inner.format_label(x), c))


@dataclass(frozen=True)
class NerveSimplex:
    n: int
    host: TensorDGLA
    element: dict

    def face(self, i: int) -> dict:
        return element_face(self.element, self.n, i, self.host.coeffs.bound)


def gauge_path(h: BaseDGLA, z: Mapping, gamma: Mapping, bound: int = DEFAULT_DEGREE_BOUND) -> NerveSimplex:
    """A 1-simplex of the nerve from z (at t = 0) to exp(gamma) . z (at t = 1).

    Z(t) = exp(t gamma) . z - dt (x) gamma; the t-polynomial is a finite sum
    because h is nilpotent. Raises DegreeOverflow if ``bound`` is too small.
    """
    if not is_mc(h, z):
        raise PreconditionFailed("starting point is not Maurer-Cartan")
    host = forms_host(1, h, bound)
    Z = constant_element(1, z)
    term = sparse.sub(h.bracket(gamma, z), h.d(gamma))
    k = 0
    fact = 1
    while term:
        fact *= k + 1
        mono = ((k + 1,), ())
        if k + 1 > bound:
            raise DegreeOverflow(f"gauge path needs polynomial degree {k + 1} > bound {bound}")
        sparse.add_into(Z, {(mono, x): c for x, c in term.items()}, Fraction(1, fact))
        term = h.bracket(gamma, term)
        k += 1
    dt = ((0,), (1,))
    sparse.add_into(Z, {(dt, x): c for x, c in gamma.items()}, -1)
    simplex = NerveSimplex(1, host, Z)
    check = nerve_member(host, Z)
    if not check:
        raise MCDeformError(f"gauge path failed the MC check at {check.witness}")
    if to_inner(simplex.face(1)) != sparse.vec(z) or to_inner(simplex.face(0)) != gauge_act(h, gamma, z):
        raise MCDeformError("gauge path has the wrong endpoints")
    return simplex


# ---------------------------------------------------------------- gauge group

@dataclass(frozen=True)
class GaugeGroupSimplex:
    """An n-simplex of G(h) = exp(Omega_n (x) h)^0, stored by its logarithm."""

    n: int
    inner: BaseDGLA
    log: dict
    bound: int = DEFAULT_DEGREE_BOUND

    def __post_init__(self):
        self.host.check_degree(self.log, 0, "gauge logarithm")

    @property
    def host(self) -> TensorDGLA:
        return forms_host(self.n, self.inner, self.bound)

    @classmethod
    def from_inner(cls, inner: BaseDGLA, gamma: Mapping, bound: int = DEFAULT_DEGREE_BOUND):
        return cls(0, inner, constant_element(0, gamma), bound)

    def face(self, i: int) -> "GaugeGroupSimplex":
        return GaugeGroupSimplex(self.n - 1, self.inner, element_face(self.log, self.n, i, self.bound), self.bound)

    def degeneracy(self, i: int) -> "GaugeGroupSimplex":
        return GaugeGroupSimplex(self.n + 1, self.inner, element_degeneracy(self.log, self.n, i, self.bound), self.bound)

    def at_point(self, coords: Sequence) -> dict:
        return element_at_point(self.log, self.n, coords, self.bound)

    def act(self, Z: Mapping) -> dict:
        return gauge_act(self.host, self.log, Z)


def group_mul(g: GaugeGroupSimplex, g2: GaugeGroupSimplex) -> GaugeGroupSimplex:
    if (g.n, g.bound) != (g2.n, g2.bound) or g.inner is not g2.inner:
        raise ValueError("gauge simplices live in different groups")
    return GaugeGroupSimplex(g.n, g.inner, bch(g.host, g.log, g2.log), g.bound)


def contraction_path(g: GaugeGroupSimplex) -> GaugeGroupSimplex:
    """The 1-simplex t * log(g): face 1 (t = 0) is the identity, face 0 (t = 1) is g."""
    if g.n != 0:
        raise ValueError("contraction paths start from 0-simplices")
    log = {(((1,), ()), x): c for x, c in to_inner(g.log).items()}
    return GaugeGroupSimplex(1, g.inner, log, g.bound)


# ---------------------------------------------------------------- pi_0 at square-zero order

def _square_zero_host(g: BaseDGLA, R) -> TensorDGLA:
    if not R.is_square_zero_ideal():
        raise PreconditionFailed("m^2 != 0")
    return tensor_dgla(R.maximal_ideal(), g)


def _coboundaries(host: TensorDGLA) -> List[dict]:
    src = host.basis_in_degree(0)
    tgt = host.basis_in_degree(1)
    if not src or not tgt:
        return []
    mat = matrix_of(host, host.d, src, tgt)
    cols = [sparse.from_dense(mat.column(j), tgt) for j in range(mat.cols)]
    return _independent(host, [c for c in cols if c], 1)


def _independent(host, vectors: List[dict], degree: int) -> List[dict]:
    tgt = host.basis_in_degree(degree)
    dense = [sparse.to_dense(v, tgt) for v in vectors]
    return [sparse.from_dense(v, tgt) for v in complement_basis([], dense, len(tgt))]


@dataclass
class Pi0Classification:
    host: TensorDGLA
    cocycles: List[dict]
    coboundaries: List[dict]
    representatives: List[dict]

    @property
    def dimension(self) -> int:
        return len(self.representatives)


def pi0_sigma_square_zero(g: BaseDGLA, R) -> Pi0Classification:
    """MC classes of m (x) g for m^2 = 0: cocycles modulo coboundaries.

    ``representatives`` lift a basis of the orbit space Z^1 / B^1.
    """
    host = _square_zero_host(g, R)
    cocycles = mc_solve_square_zero(host)
    bounds = _coboundaries(host)
    tgt = host.basis_in_degree(1)
    reps = complement_basis([sparse.to_dense(b, tgt) for b in bounds],
                            [sparse.to_dense(z, tgt) for z in cocycles], len(tgt))
    return Pi0Classification(host, cocycles, bounds, [sparse.from_dense(v, tgt) for v in reps])


@dataclass
class ClassesMapReport:
    source_dim: int
    target_dim: int
    rank: int
    quasi_iso: bool

    @property
    def injective(self):
        return self.rank == self.source_dim

    @property
    def surjective(self):
        return self.rank == self.target_dim

    @property
    def bijective(self):
        return self.injective and self.surjective

    @property
    def consistent(self):
        """A quasi-isomorphism must induce a bijection."""
        return self.bijective or not self.quasi_iso


def induced_map(f: DGLAMorphism, source_host: TensorDGLA) -> Callable[[Mapping], dict]:
    def apply(x: Mapping) -> dict:
        acc: dict = {}
        for (c, a), v in x.items():
            sparse.add_into(acc, {(c, b): w for b, w in f.images[a].items()}, v)
        return acc
    return apply


def mc_classes_map(f: DGLAMorphism, R) -> ClassesMapReport:
    """The linear map H^1(m (x) g) -> H^1(m (x) h) induced by f, for m^2 = 0."""
    src = pi0_sigma_square_zero(f.source, R)
    tgt = pi0_sigma_square_zero(f.target, R)
    phi = induced_map(f, src.host)
    labels = tgt.host.basis_in_degree(1)
    images = [sparse.to_dense(phi(z), labels) for z in src.representatives]
    bounds = [sparse.to_dense(b, labels) for b in tgt.coboundaries]
    r = span_rank(images + bounds, len(labels)) - span_rank(bounds, len(labels))
    return ClassesMapReport(src.dimension, tgt.dimension, r, is_quasi_iso(f))


# ---------------------------------------------------------------- finite simplicial sets

@dataclass
class FiniteSimplicialSet:
    """Levels 0..L with face and degeneracy tables.

    ``faces[(n, i)][k]`` is the index in level n-1 of d_i of simplex k of
    level n; ``degeneracies[(n, i)][k]`` indexes level n+1 (present for n < L).
    """

    levels: List[List[Hashable]]
    faces: Dict[Tuple[int, int], Tuple[int, ...]] = field(default_factory=dict)
    degeneracies: Dict[Tuple[int, int], Tuple[int, ...]] = field(default_factory=dict)

    @property
    def truncation(self):
        return len(self.levels) - 1

    def sizes(self):
        return [len(lv) for lv in self.levels]

    def check_identities(self) -> Optional[str]:
        """First violated simplicial identity, or None."""
        L = self.truncation
        f, s = self.faces, self.degeneracies
        for n in range(2, L + 1):
            for j in range(n + 1):
                for i in range(j):
                    for k in range(len(self.levels[n])):
                        if f[(n - 1, i)][f[(n, j)][k]] != f[(n - 1, j - 1)][f[(n, i)][k]]:
                            return f"d_{i} d_{j} != d_{j - 1} d_{i} at level {n}"
        for n in range(L):
            for j in range(n + 1):
                for k in range(len(self.levels[n])):
                    up = s[(n, j)][k]
                    if f[(n + 1, j)][up] != k or f[(n + 1, j + 1)][up] != k:
                        return f"d s_{j} != id at level {n}"
                    for i in range(n + 2):
                        if i < j:
                            if f[(n + 1, i)][up] != s[(n - 1, j - 1)][f[(n, i)][k]]:
                                return f"d_{i} s_{j} != s_{j - 1} d_{i} at level {n}"
                        elif i > j + 1:
                            if f[(n + 1, i)][up] != s[(n - 1, j)][f[(n, i - 1)][k]]:
                                return f"d_{i} s_{j} != s_{j} d_{i - 1} at level {n}"
        for n in range(L - 1):
            for j in range(n + 1):
                for i in range(j + 1):
                    for k in range(len(self.levels[n])):
                        if s[(n + 1, i)][s[(n, j)][k]] != s[(n + 1, j + 1)][s[(n, i)][k]]:
                            return f"s_{i} s_{j} != s_{j + 1} s_{i} at level {n}"
        return None


@dataclass
class Groupoid:
    """A finite groupoid: named arrows with source/target and a composition rule.

    ``compose(g, f)`` is g after f.
    """

    objects: List[Hashable]
    arrows: Dict[Hashable, Tuple[Hashable, Hashable]]
    compose: Callable[[Hashable, Hashable], Hashable]
    identity: Callable[[Hashable], Hashable]

    @classmethod
    def from_group(cls, elements: Sequence, mul: Callable, unit) -> "Groupoid":
        return cls(["*"], {e: ("*", "*") for e in elements}, lambda g, f: mul(g, f), lambda _: unit)

    @classmethod
    def from_equivalence(cls, objects: Sequence, related: Callable[[Hashable, Hashable], bool]) -> "Groupoid":
        """The groupoid with exactly one arrow x -> y whenever ``related(x, y)``."""
        objects = list(objects)
        arrows = {}
        for x in objects:
            for y in objects:
                if x == y or related(x, y):
                    arrows[(x, y)] = (x, y)
        return cls(objects, arrows, lambda g, f: (f[0], g[1]), lambda x: (x, x))

    @classmethod
    def discrete(cls, objects: Sequence) -> "Groupoid":
        return cls.from_equivalence(objects, lambda x, y: False)


def finite_nerve(gpd: Groupoid, L: int) -> FiniteSimplicialSet:
    """Nerve levels 0..L: level n holds composable strings (f_1, ..., f_n)."""
    src = {a: st[0] for a, st in gpd.arrows.items()}
    tgt = {a: st[1] for a, st in gpd.arrows.items()}
    levels: List[List[Hashable]] = [list(gpd.objects)]
    if L >= 1:
        levels.append([(a,) for a in gpd.arrows])
    for n in range(2, L + 1):
        nxt = []
        for chain in levels[-1]:
            for a in gpd.arrows:
                if src[a] == tgt[chain[-1]]:
                    nxt.append(chain + (a,))
        levels.append(nxt)
    index = [{s: k for k, s in enumerate(lv)} for lv in levels]

    def face(n, i, chain):
        if n == 1:
            a = chain[0]
            return tgt[a] if i == 0 else src[a]
        if i == 0:
            return chain[1:]
        if i == n:
            return chain[:-1]
        return chain[:i - 1] + (gpd.compose(chain[i], chain[i - 1]),) + chain[i + 1:]

    def degen(n, i, simplex):
        if n == 0:
            return (gpd.identity(simplex),)
        obj = src[simplex[0]] if i == 0 else tgt[simplex[i - 1]]
        return simplex[:i] + (gpd.identity(obj),) + simplex[i:]

    faces = {}
    degens = {}
    for n in range(1, L + 1):
        for i in range(n + 1):
            faces[(n, i)] = tuple(index[n - 1][face(n, i, c)] for c in levels[n])
    for n in range(L):
        for i in range(n + 1):
            degens[(n, i)] = tuple(index[n + 1][degen(n, i, c)] for c in levels[n])
    return FiniteSimplicialSet(levels, faces, degens)


@dataclass
class BisimplicialSet:
    """Levels ``levels[p][q]`` with horizontal (p) and vertical (q) face/degeneracy tables."""

    levels: List[List[List[Hashable]]]
    hfaces: Dict[Tuple[int, int, int], Tuple[int, ...]]
    vfaces: Dict[Tuple[int, int, int], Tuple[int, ...]]
    hdegens: Dict[Tuple[int, int, int], Tuple[int, ...]] = field(default_factory=dict)
    vdegens: Dict[Tuple[int, int, int], Tuple[int, ...]] = field(default_factory=dict)

    @classmethod
    def constant(cls, X: FiniteSimplicialSet) -> "BisimplicialSet":
        """X viewed as constant in the vertical direction."""
        L = X.truncation
        levels = [[list(X.levels[p]) for _ in range(L + 1)] for p in range(L + 1)]
        hf, vf, hd, vd = {}, {}, {}, {}
        for p in range(L + 1):
            ident = tuple(range(len(X.levels[p])))
            for qd in range(L + 1):
                if p >= 1:
                    for i in range(p + 1):
                        hf[(p, qd, i)] = X.faces[(p, i)]
                if p < L:
                    for i in range(p + 1):
                        hd[(p, qd, i)] = X.degeneracies[(p, i)]
                if qd >= 1:
                    for i in range(qd + 1):
                        vf[(p, qd, i)] = ident
                if qd < L:
                    for i in range(qd + 1):
                        vd[(p, qd, i)] = ident
        return cls(levels, hf, vf, hd, vd)


def diagonal(X: BisimplicialSet) -> FiniteSimplicialSet:
    """Level n is X_{n,n}; d_i = d_i^h d_i^v and s_i = s_i^h s_i^v."""
    L = len(X.levels) - 1
    levels = [list(X.levels[n][n]) for n in range(L + 1)]
    faces = {}
    degens = {}
    for n in range(1, L + 1):
        for i in range(n + 1):
            v = X.vfaces[(n, n, i)]
            h = X.hfaces[(n, n - 1, i)]
            faces[(n, i)] = tuple(h[v[k]] for k in range(len(levels[n])))
    for n in range(L):
        for i in range(n + 1):
            v = X.vdegens.get((n, n, i))
            h = X.hdegens.get((n, n + 1, i))
            if v is None or h is None:
                continue
            degens[(n, i)] = tuple(h[v[k]] for k in range(len(levels[n])))
    return FiniteSimplicialSet(levels, faces, degens)


def pi0(X: FiniteSimplicialSet) -> int:
    """Connected components of the 1-skeleton."""
    parent = list(range(len(X.levels[0])))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    if X.truncation >= 1:
        for a, b in zip(X.faces[(1, 0)], X.faces[(1, 1)]):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
    return len({find(a) for a in range(len(parent))})


def deligne_groupoid_pi0(host: TensorDGLA, objects: Sequence[Mapping], L: int = 2) -> int:
    """pi_0 of the nerve of the groupoid on ``objects`` (duplicates merged) with arrows found by gauge search."""
    lookup = {}
    for z in objects:
        lookup.setdefault(tuple(sorted(z.items(), key=lambda kv: repr(kv[0]))), z)
    keys = list(lookup)

    def related(a, b):
        return bool(gauge_equivalent(host, lookup[a], lookup[b]))

    return pi0(finite_nerve(Groupoid.from_equivalence(keys, related), L))
