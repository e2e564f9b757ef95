"""Maurer-Cartan equation, gauge action and order-by-order lifting.

Convention: z in degree 1 is Maurer-Cartan iff dz + 1/2 [z, z] = 0. A gauge
element is a degree-0 element gamma of a nilpotent host, acting by

    exp(gamma) . z = z + sum_k (ad gamma)^k / (k+1)! ([gamma, z] - d gamma).

Hosts for the filtration-aware routines are ``TensorDGLA(m, g)`` with ``m``
the maximal ideal of an artinian algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import List, Mapping, Optional

from . import sparse
from .dgla import BaseDGLA, TensorDGLA, ensure_nilpotent
from .errors import PreconditionFailed
from .exactla import QMatrix, kernel_basis, rref, solve_affine

MAX_SERIES_TERMS = 64


def curvature(host: BaseDGLA, z: Mapping) -> dict:
    host.check_degree(z, 1, "MC candidate")
    return sparse.add(host.d(z), sparse.scale(host.bracket(z, z), Fraction(1, 2)))


def is_mc(host: BaseDGLA, z: Mapping) -> bool:
    return not curvature(host, z)


def gauge_act(host: BaseDGLA, gamma: Mapping, z: Mapping) -> dict:
    host.check_degree(gamma, 0, "gauge element")
    host.check_degree(z, 1, "MC element")
    acc = dict(z)
    term = sparse.sub(host.bracket(gamma, z), host.d(gamma))
    k = 0
    fact = 1
    while term:
        fact *= k + 1
        sparse.add_into(acc, term, Fraction(1, fact))
        term = host.bracket(gamma, term)
        k += 1
        if k > MAX_SERIES_TERMS:
            raise PreconditionFailed("gauge series does not terminate; host is not nilpotent")
    return acc


@lru_cache(maxsize=None)
def bernoulli(m: int) -> Fraction:
    """Bernoulli number B_m (B_1 = -1/2)."""
    if m == 0:
        return Fraction(1)
    return -sum(comb(m + 1, k) * bernoulli(k) for k in range(m)) / (m + 1)


def _compositions(n: int, parts: int):
    if parts == 1:
        yield (n,)
        return
    for first in range(1, n - parts + 2):
        for rest in _compositions(n - first, parts - 1):
            yield (first,) + rest


def bch(host: BaseDGLA, x: Mapping, y: Mapping, depth: Optional[int] = None) -> dict:
    """log(exp(x) exp(y)) for degree-0 elements of a nilpotent host.

    Homogeneous parts follow Varadarajan's recursion; the series is cut at
    the host's nilpotency class, beyond which every term vanishes.
    """
    host.check_degree(x, 0, "gauge element")
    host.check_degree(y, 0, "gauge element")
    if depth is None:
        depth = ensure_nilpotent(host)
    if not x:
        return dict(y)
    if not y:
        return dict(x)
    s = sparse.add(x, y)
    diff = sparse.sub(x, y)
    parts = {1: s}
    for n in range(1, max(depth, 1)):
        acc = sparse.scale(host.bracket(diff, parts[n]), Fraction(1, 2))
        for p in range(1, n // 2 + 1):
            coeff = bernoulli(2 * p) / factorial(2 * p)
            if not coeff:
                continue
            for ks in _compositions(n, 2 * p):
                if any(not parts[k] for k in ks):
                    continue
                term = s
                for k in reversed(ks):
                    term = host.bracket(parts[k], term)
                    if not term:
                        break
                if term:
                    sparse.add_into(acc, term, coeff)
        parts[n + 1] = sparse.scale(acc, Fraction(1, n + 1))
    return sparse.add(*parts.values())


def gauge_inverse(gamma: Mapping) -> dict:
    return sparse.scale(gamma, -1)


# ---------------------------------------------------------------- linear helpers

def matrix_of(host: BaseDGLA, fn, src: List, tgt: List) -> QMatrix:
    index = {lab: i for i, lab in enumerate(tgt)}
    cols = []
    for lab in src:
        cols.append(sparse.to_dense(fn({lab: Fraction(1)}), tgt, index))
    return QMatrix.from_columns(cols, len(tgt))


def _require_artinian_host(host) -> TensorDGLA:
    if not isinstance(host, TensorDGLA) or host.coeffs.unital:
        raise PreconditionFailed("host must be m (x) g for the maximal ideal m of an artinian algebra")
    return host


def m_levels(host: TensorDGLA) -> List[List[dict]]:
    """Bases of m^1, m^2, ... (nonzero levels) over the coefficient labels."""
    cached = getattr(host, "_m_levels", None)
    if cached is None:
        coeffs = host.coeffs
        levels = coeffs.power_spans(coeffs.labels)
        cached = [[sparse.from_dense(v, coeffs.labels) for v in lvl] for lvl in levels]
        host._m_levels = cached
    return cached


def _filtered_by_total_degree(host: TensorDGLA, j: int, total: int) -> List[dict]:
    """Spanning set of (m^j (x) g) in total degree ``total``."""
    levels = m_levels(host)
    if j > len(levels):
        return []
    out = []
    for v in levels[j - 1]:
        for c_deg in {host.coeffs.degree(c) for c in v}:
            part = {c: a for c, a in v.items() if host.coeffs.degree(c) == c_deg}
            for x in host.inner.basis():
                if host.inner.degree(x) + c_deg == total:
                    out.append({(c, x): a for c, a in part.items()})
    return out


def _solve_in_host(host, unknowns: List[dict], apply, slack: List[dict], rhs: Mapping, degree: int):
    """Find coefficients a with sum a_i apply(U_i) + sum b_j W_j = rhs; returns a or None."""
    tgt = host.basis_in_degree(degree)
    index = {lab: i for i, lab in enumerate(tgt)}
    cols = [sparse.to_dense(apply(u), tgt, index) for u in unknowns]
    cols += [sparse.to_dense(w, tgt, index) for w in slack]
    b = sparse.to_dense(rhs, tgt, index)
    if not cols:
        return [] if not any(b) else None
    sol = solve_affine(QMatrix.from_columns(cols, len(tgt)), b)
    if sol is None:
        return None
    return sol[:len(unknowns)]


def _in_span(host, vectors: List[dict], target: Mapping, degree: int) -> bool:
    return _solve_in_host(host, [], lambda u: u, vectors, target, degree) is not None


def reduce_modulo(host, vector: Mapping, subspace: List[dict], degree: int) -> dict:
    """Canonical representative of ``vector`` modulo span(subspace)."""
    tgt = host.basis_in_degree(degree)
    index = {lab: i for i, lab in enumerate(tgt)}
    v = sparse.to_dense(vector, tgt, index)
    if subspace:
        rows, pivots = rref([sparse.to_dense(w, tgt, index) for w in subspace])
        for row, pc in zip(rows, pivots):
            if v[pc]:
                f = v[pc]
                v = [a - f * b for a, b in zip(v, row)]
    return sparse.from_dense(v, tgt)


# ---------------------------------------------------------------- solving

def mc_solve_square_zero(host: BaseDGLA) -> List[dict]:
    """Basis of MC(m (x) g) when m^2 = 0: the cocycles in degree 1."""
    _require_artinian_host(host)
    if not host.coeffs.is_square_zero():
        raise PreconditionFailed("m^2 != 0; the MC equation is not linear")
    src = host.basis_in_degree(1)
    tgt = host.basis_in_degree(2)
    if not tgt:
        return [{lab: Fraction(1)} for lab in src]
    mat = matrix_of(host, host.d, src, tgt)
    return [sparse.from_dense(v, src) for v in kernel_basis(mat)]


@dataclass
class ObstructionStep:
    """Result of trying to lift an MC solution from order k to order k + 1.

    ``order`` is k + 1: the element is sought modulo m^(k+2).
    """

    order: int
    obstructed: bool
    obstruction: dict
    closed: bool
    correction: dict = field(default_factory=dict)
    lifted: Optional[dict] = None


def obstruction_step(host: TensorDGLA, z: Mapping, k: int) -> ObstructionStep:
    """One lifting step: curvature(z) in m^(k+1) (x) g is to be killed modulo m^(k+2)."""
    _require_artinian_host(host)
    if k < 0:
        raise ValueError("k must be non-negative")
    curv = curvature(host, z)
    if k >= 1 and not _in_span(host, _filtered_by_total_degree(host, k + 1, 2), curv, 2):
        raise PreconditionFailed(f"curvature is not in m^{k + 1} (x) g")
    next_level = _filtered_by_total_degree(host, k + 2, 2)
    obstruction = reduce_modulo(host, curv, next_level, 2)
    closed = _in_span(host, _filtered_by_total_degree(host, k + 2, 3), host.d(curv), 3)
    unknowns = _filtered_by_total_degree(host, k + 1, 1)
    sol = _solve_in_host(host, unknowns, host.d, next_level, sparse.scale(curv, -1), 2)
    if sol is None:
        return ObstructionStep(k + 1, True, obstruction, closed)
    correction = sparse.lincomb(zip(sol, unknowns))
    return ObstructionStep(k + 1, False, obstruction, closed, correction, sparse.add(z, correction))


@dataclass
class LiftResult:
    steps: List[ObstructionStep]
    element: dict

    @property
    def obstructed(self):
        return bool(self.steps) and self.steps[-1].obstructed


def lift_mc(host: TensorDGLA, z: Mapping, order: int) -> LiftResult:
    """Lift z step by step until it solves the MC equation modulo m^(order+1)."""
    steps = []
    current = dict(z)
    for k in range(order):
        step = obstruction_step(host, current, k)
        steps.append(step)
        if step.obstructed:
            break
        current = step.lifted
    return LiftResult(steps, current)


# ---------------------------------------------------------------- equivalence

@dataclass(frozen=True)
class Found:
    gamma: dict

    def __bool__(self):
        return True


@dataclass(frozen=True)
class NotFoundAtOrder:
    """The order-by-order search failed at this order.

    Only a proof of inequivalence when m^2 = 0.
    """

    order: int

    def __bool__(self):
        return False


def gauge_equivalent(host: TensorDGLA, z: Mapping, z2: Mapping):
    """Search gamma with exp(gamma) . z = z2, one m-adic order at a time.

    With w the current image and w = z2 mod m^(k+1), stage k solves the linear
    equation [delta, w] - d delta = z2 - w mod m^(k+2) for delta in m (x) g^0.
    Every higher term of the gauge series is then a bracket of delta with
    something in m^(k+1), so exp(delta) . w = z2 mod m^(k+2) exactly.
    """
    _require_artinian_host(host)
    host.check_degree(z, 1)
    host.check_degree(z2, 1)
    levels = m_levels(host)
    unknowns = _filtered_by_total_degree(host, 1, 0)
    gamma: dict = {}
    w = dict(z)
    for k in range(len(levels)):
        diff = sparse.sub(z2, w)
        if not diff:
            break
        slack = _filtered_by_total_degree(host, k + 2, 1)
        current = w
        sol = _solve_in_host(host, unknowns, lambda u: sparse.sub(host.bracket(u, current), host.d(u)),
                             slack, diff, 1)
        if sol is None:
            return NotFoundAtOrder(k + 1)
        delta = sparse.lincomb(zip(sol, unknowns))
        w = gauge_act(host, delta, w)
        gamma = bch(host, delta, gamma)
    if sparse.sub(gauge_act(host, gamma, z), z2):
        return NotFoundAtOrder(len(levels) + 1)
    return Found(gamma)
