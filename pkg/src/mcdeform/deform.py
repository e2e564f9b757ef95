"""Deformations of a complex A over an artinian base R as twisted complexes.

A twist z in (m (x) End A)^1 acts on R (x) A by
rho(c (x) f)(r (x) a) = (-1)^{|f||r|} cr (x) f(a), and the deformed
differential is d_R (x) 1 + 1 (x) d_A + rho(z). Operators on R (x) A are
dense matrices over :func:`tensor_basis`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence

from . import sparse
from .artin import ArtinianLocalDGA, make_dual_numbers
from .deligne import pi0_sigma_square_zero
from .dgla import EndDGLA, TensorDGLA, end_dgla, tensor_dgla
from .errors import MCDeformError, NotInvertible, NotMC, PreconditionFailed
from .exactla import QMatrix, inverse, solve_affine
from .graded import ChainComplex, end_complex, homology_dim, koszul
from .mc import NotFoundAtOrder, curvature, gauge_equivalent, is_mc


def tensor_basis(R: ArtinianLocalDGA, A: ChainComplex) -> List[tuple]:
    """Basis (r, i, a) of R (x) A ordered by total degree, then A order, then R order."""
    out = []
    for i in A.degrees:
        for a in A.space.basis(i):
            for r in R.labels:
                out.append((R.degree(r) + i, r, i, a))
    out.sort(key=lambda t: t[0])
    return [t[1:] for t in out]


def _index(basis):
    return {b: k for k, b in enumerate(basis)}


def _matrix(entries: Dict[tuple, Fraction], n: int) -> QMatrix:
    rows = [[Fraction(0)] * n for _ in range(n)]
    for (r, c), v in entries.items():
        rows[r][c] += v
    return QMatrix(n, n, rows)


def untwisted_operator(R: ArtinianLocalDGA, A: ChainComplex) -> QMatrix:
    """d_R (x) 1 + 1 (x) d_A with the Koszul sign on the second term."""
    basis = tensor_basis(R, A)
    idx = _index(basis)
    entries: Dict[tuple, Fraction] = {}
    for col, (r, i, a) in enumerate(basis):
        for r2, v in R.d(r).items():
            key = (idx[(r2, i, a)], col)
            entries[key] = entries.get(key, 0) + v
        if A.dim(i + 1):
            dA = A.d(i)
            c = A.space.basis(i).index(a)
            s = koszul(R.degree(r))
            for row, b in enumerate(A.space.basis(i + 1)):
                if dA[row, c]:
                    key = (idx[(r, i + 1, b)], col)
                    entries[key] = entries.get(key, 0) + s * dA[row, c]
    return _matrix(entries, len(basis))


def rho_operator(R: ArtinianLocalDGA, A: ChainComplex, x: Mapping) -> QMatrix:
    """The R-linear operator of x in R (x) End(A) (labels (c, (i, a, j, b)))."""
    basis = tensor_basis(R, A)
    idx = _index(basis)
    entries: Dict[tuple, Fraction] = {}
    for (c, (i, a, j, b)), v in x.items():
        f_deg = j - i
        for r in R.labels:
            col = idx.get((r, i, a))
            if col is None:
                continue
            s = koszul(f_deg * R.degree(r))
            for t, w in R.mul(c, r).items():
                key = (idx[(t, j, b)], col)
                entries[key] = entries.get(key, 0) + s * v * w
    return _matrix(entries, len(basis))


def r_linear_operator(R: ArtinianLocalDGA, A: ChainComplex, images: Mapping) -> QMatrix:
    """Degree-0 R-linear operator from its values on 1 (x) a.

    ``images[(i, a)] = {(s, j, b): coeff}`` gives theta(1 (x) a).
    """
    basis = tensor_basis(R, A)
    idx = _index(basis)
    entries: Dict[tuple, Fraction] = {}
    for col, (r, i, a) in enumerate(basis):
        for (s, j, b), v in images.get((i, a), {}).items():
            if R.degree(s) + j != i:
                raise ValueError(f"image of {(i, a)} is not homogeneous of degree 0")
            for t, w in R.mul(r, s).items():
                key = (idx[(t, j, b)], col)
                entries[key] = entries.get(key, 0) + v * w
    return _matrix(entries, len(basis))


def operator_complex(R: ArtinianLocalDGA, A: ChainComplex, D: QMatrix) -> ChainComplex:
    """R (x) A as a complex of Q-vector spaces with differential D."""
    basis = tensor_basis(R, A)
    degs = {b: R.degree(b[0]) + b[1] for b in basis}
    comps: Dict[int, list] = {}
    for b in basis:
        comps.setdefault(degs[b], []).append(b)
    d = {}
    for col, b in enumerate(basis):
        img = {basis[row]: D[row, col] for row in range(D.rows) if D[row, col]}
        if img:
            d[(degs[b], b)] = img
    return ChainComplex.from_maps(comps, d)


def end_host(R: ArtinianLocalDGA, A: ChainComplex, g: Optional[EndDGLA] = None) -> TensorDGLA:
    return tensor_dgla(R.maximal_ideal(), g if g is not None else end_dgla(A))


@dataclass
class Deformation:
    base: ArtinianLocalDGA
    fiber: ChainComplex
    twist: dict
    host: TensorDGLA
    total: QMatrix

    @property
    def basis(self):
        return tensor_basis(self.base, self.fiber)

    def total_complex(self) -> ChainComplex:
        return operator_complex(self.base, self.fiber, self.total)

    def homology(self) -> Dict[int, int]:
        C = self.total_complex()
        return {i: homology_dim(C, i) for i in C.degrees}


def twist(A: ChainComplex, R: ArtinianLocalDGA, z: Mapping, host: Optional[TensorDGLA] = None) -> Deformation:
    """(R (x) A, d + z); accepted iff the total differential squares to zero."""
    host = host or end_host(R, A)
    host.check_degree(z, 1, "twist")
    z = sparse.vec(z)
    total = untwisted_operator(R, A) + rho_operator(R, A, z)
    squares_to_zero = (total @ total).is_zero()
    mc = is_mc(host, z)
    if squares_to_zero != mc:
        raise MCDeformError("total differential and MC equation disagree; sign conventions are broken")
    if not mc:
        raise NotMC("twist is not Maurer-Cartan", curvature(host, z))
    return Deformation(R, A, z, host, total)


def reduce(B: Deformation) -> ChainComplex:
    """k (x)_R B: the block of the total differential on 1 (x) A."""
    R, A = B.base, B.fiber
    basis = B.basis
    idx = _index(basis)
    d = {}
    for i in A.degrees:
        for a in A.space.basis(i):
            col = idx[(R.unit, i, a)]
            img = {}
            for b in A.space.basis(i + 1):
                v = B.total[idx[(R.unit, i + 1, b)], col]
                if v:
                    img[b] = v
            if img:
                d[(i, a)] = img
    return ChainComplex.from_maps(dict(A.space.components), d)


def mc_from_trivialization(R: ArtinianLocalDGA, A: ChainComplex, d_B: QMatrix, theta: QMatrix) -> Deformation:
    """Transport d_B along a graded trivialization theta and read off the twist.

    z = theta d_B theta^-1 - 1 (x) d_A', where d_A' is the reduction of the
    transported differential. d_A' = d_A whenever theta reduces to a chain
    automorphism of A (for instance the identity); otherwise the returned
    deformation has the conjugated fiber (A, d_A').
    """
    inv = inverse(theta)
    if inv is None:
        raise NotInvertible("trivialization is not invertible")
    phi = theta @ d_B @ inv
    basis = tensor_basis(R, A)
    idx = _index(basis)
    z: dict = {}
    fiber_d = {}
    for i in A.degrees:
        for a in A.space.basis(i):
            col = idx[(R.unit, i, a)]
            for row, (r, j, b) in enumerate(basis):
                v = phi[row, col]
                if not v:
                    continue
                if r == R.unit:
                    fiber_d.setdefault((i, a), {})[b] = v
                else:
                    sparse.add_into(z, {(r, (i, a, j, b)): v})
    fiber = ChainComplex.from_maps(dict(A.space.components), fiber_d)
    B = twist(fiber, R, z)
    if B.total != phi:
        raise ValueError("transported differential is not an R-linear twist of its reduction")
    return B


def gauge_operator(R: ArtinianLocalDGA, A: ChainComplex, gamma: Mapping) -> QMatrix:
    """exp(rho(gamma)) on R (x) A (rho(gamma) is nilpotent)."""
    X = rho_operator(R, A, gamma)
    n = X.rows
    out = QMatrix.identity(n)
    term = QMatrix.identity(n)
    k = 1
    while True:
        term = (term @ X).scale(Fraction(1, k))
        if term.is_zero():
            return out
        out = out + term
        k += 1
        if k > n + 1:
            raise PreconditionFailed("rho(gamma) is not nilpotent")


def iso_reducing_to_identity(A: ChainComplex, R: ArtinianLocalDGA, z: Mapping, z2: Mapping) -> Optional[QMatrix]:
    """A degree-0 R-linear isomorphism 1 + psi, psi in m (x) End(A), intertwining d + z and d + z2."""
    if not R.is_square_zero_ideal():
        raise PreconditionFailed("m^2 != 0")
    host = end_host(R, A)
    D1 = twist(A, R, z, host).total
    D2 = twist(A, R, z2, host).total
    n = D1.rows
    unknowns = host.basis_in_degree(0)
    cols = []
    for lab in unknowns:
        P = rho_operator(R, A, {lab: Fraction(1)})
        M = P @ D1 - D2 @ P
        cols.append([x for row in M.data for x in row])
    rhs = [x for row in (D2 - D1).data for x in row]
    if not cols:
        return QMatrix.identity(n) if not any(rhs) else None
    sol = solve_affine(QMatrix.from_columns(cols, n * n), rhs)
    if sol is None:
        return None
    psi = sparse.lincomb(zip(sol, [{lab: Fraction(1)} for lab in unknowns]))
    phi = QMatrix.identity(n) + rho_operator(R, A, psi)
    if phi @ D1 != D2 @ phi:
        raise MCDeformError("linear solve returned a non-intertwining map")
    return phi


@dataclass
class FirstOrderClassification:
    dimension: int
    h1_end: int
    representatives: List[dict]
    statement: str


def classify_first_order(A: ChainComplex) -> FirstOrderClassification:
    """First-order deformations over Q[e]/e^2: MC elements are e-multiples of
    1-cocycles of End(A), and gauge classes are their cohomology classes.
    """
    R = make_dual_numbers(2)
    cls = pi0_sigma_square_zero(end_dgla(A), R)
    E = end_complex(A)
    h1 = homology_dim(E, 1)
    reps = [{lab: v for (c, lab), v in r.items()} for r in cls.representatives]
    statement = (f"gauge classes of first-order deformations form H^1(End A), "
                 f"a {cls.dimension}-dimensional space")
    return FirstOrderClassification(cls.dimension, h1, reps, statement)


# ---------------------------------------------------------------- counterexample

def window_complex(N: int) -> ChainComplex:
    """A^i = Q (basis label "a") for i in [-N, N], zero differential."""
    return ChainComplex.zero_differential({i: ["a"] for i in range(-N, N + 1)})


def shift_twist(N: int, coefficients: Optional[Mapping[int, Fraction]] = None) -> dict:
    """e (x) f with f: A^i -> A^{i+1} scaled by coefficients[i] (default 1)."""
    z = {}
    for i in range(-N, N):
        c = Fraction(1) if coefficients is None else Fraction(coefficients.get(i, 0))
        if c:
            z[("e", (i, "a", i + 1, "a"))] = c
    return z


@dataclass
class CounterexampleReport:
    N: int
    is_mc: bool
    gauge_nontrivial: bool
    gauge_search_order: Optional[int]
    homology: Dict[int, int]
    interior: List[int] = field(default_factory=list)
    conclusion: str = ""

    @property
    def interior_acyclic(self) -> bool:
        return all(self.homology.get(i, 0) == 0 for i in self.interior)

    def as_dict(self):
        return {
            "N": self.N,
            "is_mc": self.is_mc,
            "gauge_nontrivial": self.gauge_nontrivial,
            "gauge_search_order": self.gauge_search_order,
            "homology": [{"degree": i, "dim": h} for i, h in sorted(self.homology.items())],
            "interior_degrees": self.interior,
            "interior_acyclic": self.interior_acyclic,
            "conclusion": self.conclusion,
        }


def counterexample_demo(N: int, coefficients: Optional[Mapping[int, Fraction]] = None) -> CounterexampleReport:
    """The window complex A^i = Q, i in [-N, N], d = 0, over Q[e]/e^2, twisted by
    e times the degree-one shift f.

    Boundary degrees -N and N are excluded from the acyclicity claim because
    the window truncates the two extreme components of f.
    """
    if N < 2:
        raise ValueError("need N >= 2")
    A = window_complex(N)
    R = make_dual_numbers(2)
    host = end_host(R, A)
    f = shift_twist(N, coefficients)
    mc = is_mc(host, f)
    search = gauge_equivalent(host, f, {})
    nontrivial = isinstance(search, NotFoundAtOrder)
    B = twist(A, R, f, host)
    homology = B.homology()
    interior = list(range(-N + 1, N))
    report = CounterexampleReport(N, mc, nontrivial, search.order if nontrivial else None, homology, interior)
    if mc and nontrivial and report.interior_acyclic:
        report.conclusion = ("f is Maurer-Cartan and not gauge-equivalent to 0, but (R (x) A, d + f) "
                             "is acyclic in every interior degree")
    else:
        report.conclusion = "the twisted complex is not a counterexample for these coefficients"
    return report
