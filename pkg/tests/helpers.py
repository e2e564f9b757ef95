"""Shared builders for the test-suite: small dglas, complexes and random samples."""

import random
from fractions import Fraction
from pathlib import Path

from mcdeform import sparse
from mcdeform.artin import make_dual_numbers, make_square_zero
from mcdeform.dgla import DGLA, DGLAMorphism, end_dgla, tensor_dgla
from mcdeform.exactla import QMatrix, inverse
from mcdeform.graded import ChainComplex
from mcdeform.mc import gauge_act

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"


def abelian(degrees=(0, 1, 1)):
    labels = [f"v{k}" for k in range(len(degrees))]
    return DGLA(labels, list(degrees))


def xy_lie():
    return DGLA(["x", "y"], [0, 0], brackets={("x", "y"): {"y": 1}})


def sl2():
    return DGLA(["e", "f", "h"], [0, 0, 0], brackets={
        ("h", "e"): {"e": 2}, ("h", "f"): {"f": -2}, ("e", "f"): {"h": 1}})


def sl2_adjoint_shift():
    """sl2 acting on a copy of itself placed in degree 1 (abelian there)."""
    base = {("h", "e"): {"e": 2}, ("h", "f"): {"f": -2}, ("e", "f"): {"h": 1}}
    br = dict(base)
    for (a, b), img in base.items():
        br[(a, b.upper())] = {k.upper(): v for k, v in img.items()}
        br[(b, a.upper())] = {k.upper(): -v for k, v in img.items()}
    for a in "efh":
        br[(a, a.upper())] = {}
    return DGLA(["e", "f", "h", "E", "F", "H"], [0, 0, 0, 1, 1, 1], brackets=br)


def heisenberg():
    return DGLA(["p", "q", "c"], [0, 0, 0], brackets={("p", "q"): {"c": 1}})


def obstruction_dgla():
    return DGLA(["x", "y"], [1, 2], brackets={("x", "x"): {"y": 1}})


def obstruction_killed_dgla():
    return DGLA(["x", "u", "y"], [1, 1, 2], differential={"u": {"y": 1}},
                brackets={("x", "x"): {"y": 1}})


def window(N):
    return ChainComplex.zero_differential({i: ["a"] for i in range(-N, N + 1)})


def two_term():
    return ChainComplex.zero_differential({-1: ["a"], 0: ["b"]})


def identity_complex():
    return ChainComplex.from_maps({-1: ["a"], 0: ["b"]}, {(-1, "a"): {"b": 1}})


def rand_q(rng, lo=-3, hi=3, den=(1, 1, 2)):
    return Fraction(rng.randint(lo, hi), rng.choice(den))


def random_complex(rng, lo=-2, hi=1, max_pieces=3):
    """A random complex on degrees lo..hi: a sum of lines and contractible pairs,
    conjugated by random invertible changes of basis in each degree."""
    pieces = {i: [] for i in range(lo, hi + 1)}
    pairs = []
    for _ in range(rng.randint(1, max_pieces)):
        i = rng.randint(lo, hi)
        if i < hi and rng.random() < 0.5:
            k_src, k_tgt = len(pieces[i]), len(pieces[i + 1])
            pieces[i].append(None)
            pieces[i + 1].append(None)
            pairs.append((i, k_src, k_tgt, Fraction(rng.choice([1, 2, -1, 3]))))
        else:
            pieces[i].append(None)
    dims = {i: len(v) for i, v in pieces.items() if v}
    mats = {}
    for i in dims:
        if dims.get(i + 1):
            rows = [[Fraction(0)] * dims[i] for _ in range(dims[i + 1])]
            for j, ks, kt, c in pairs:
                if j == i:
                    rows[kt][ks] = c
            mats[i] = QMatrix.from_rows(rows, dims[i])
    basis_change = {i: _random_invertible(rng, n) for i, n in dims.items()}
    comps = {i: [f"c{i}_{k}".replace("-", "m") for k in range(n)] for i, n in dims.items()}
    d = {}
    for i, M in mats.items():
        P, Pinv = basis_change[i + 1], inverse(basis_change[i])
        D = P @ M @ Pinv
        for c, a in enumerate(comps[i]):
            img = {comps[i + 1][r]: D[r, c] for r in range(D.rows) if D[r, c]}
            if img:
                d[(i, a)] = img
    return ChainComplex.from_maps(comps, d)


def _random_invertible(rng, n):
    while True:
        M = QMatrix.from_rows([[Fraction(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)], n)
        if inverse(M) is not None:
            return M


def random_element(rng, host, degree, density=0.6):
    out = {}
    for lab in host.basis_in_degree(degree):
        if rng.random() < density:
            c = rand_q(rng)
            if c:
                out[lab] = c
    return out


def nilpotent_hosts():
    """Hosts of nilpotency class at most 3, with names."""
    e3 = make_dual_numbers(3)
    e4 = make_dual_numbers(4)
    sq = make_square_zero({"a": 0, "b": 0})
    return [
        ("abelian(x)e3", tensor_dgla(e3.maximal_ideal(), abelian((0, 0, 1, 1, 2)))),
        ("xy(x)e3", tensor_dgla(e3.maximal_ideal(), xy_lie())),
        ("sl2(x)e3", tensor_dgla(e3.maximal_ideal(), sl2())),
        ("sl2(x)e4", tensor_dgla(e4.maximal_ideal(), sl2())),
        ("heis(x)sq", tensor_dgla(sq.maximal_ideal(), heisenberg())),
        ("End(id)(x)e3", tensor_dgla(e3.maximal_ideal(), end_dgla(identity_complex()))),
        ("End(3term)(x)e3", tensor_dgla(e3.maximal_ideal(), end_dgla(ChainComplex.from_maps(
            {-2: ["a"], -1: ["b", "c"], 0: ["d"]}, {(-2, "a"): {"b": 1}, (-1, "c"): {"d": 1}})))),
        ("obs(x)e3", tensor_dgla(e3.maximal_ideal(), obstruction_killed_dgla())),
        ("sl2ad(x)e3", tensor_dgla(e3.maximal_ideal(), sl2_adjoint_shift())),
        ("sl2ad(x)e4", tensor_dgla(e4.maximal_ideal(), sl2_adjoint_shift())),
    ]


def top_cocycles(host):
    """Closed degree-1 elements of m^top (x) g; they are MC since [m^top, m^top] = 0."""
    from mcdeform.exactla import kernel_basis
    from mcdeform.mc import m_levels, matrix_of
    cands = []
    for v in m_levels(host)[-1]:
        for x in host.inner.basis():
            if host.inner.degree(x) + min(host.coeffs.degree(c) for c in v) == 1:
                cands.append({(c, x): a for c, a in v.items() if host.coeffs.degree(c) + host.inner.degree(x) == 1})
    cands = [c for c in cands if c]
    if not cands:
        return []
    src = host.basis_in_degree(1)
    tgt = host.basis_in_degree(2)
    if not tgt:
        return cands
    index = {lab: i for i, lab in enumerate(tgt)}
    cols = [sparse.to_dense(host.d(c), tgt, index) for c in cands]
    out = []
    for coeffs in kernel_basis(QMatrix.from_columns(cols, len(tgt))):
        out.append(sparse.lincomb(zip(coeffs, cands)))
    return out


def random_mc(rng, host):
    """A random MC element: a random closed top-level element moved by a random gauge."""
    from mcdeform.mc import is_mc
    z0 = random_element(rng, host, 1)
    if not is_mc(host, z0):
        z0 = {}
    for c in top_cocycles(host):
        sparse.add_into(z0, c, rand_q(rng))
    gamma = random_element(rng, host, 0)
    return gauge_act(host, gamma, z0)


def seeded(seed):
    return random.Random(seed)


def vec(**kw):
    return sparse.vec(kw)


def with_contractible_ideal(base, acting=None, degree=0):
    """base + span(u, v) with du = v, |u| = degree; ``acting`` (a degree-0 label of
    base) acts on u and v by the identity, everything else brackets to zero."""
    labels = list(base.labels) + ["u", "v"]
    degrees = {**base.degrees_map, "u": degree, "v": degree + 1}
    diff = {**base.differential, "u": {"v": 1}}
    br = dict(base.brackets)
    if acting is not None:
        br[(acting, "u")] = {"u": 1}
        br[(acting, "v")] = {"v": 1}
    g = DGLA(labels, degrees, diff, br)
    proj = DGLAMorphism(g, base, {a: {a: 1} for a in base.labels})
    return g, proj


def quasi_iso_examples():
    """Surjective quasi-isomorphisms killing a contractible two-term ideal."""
    out = []
    out.append(with_contractible_ideal(abelian((0, 1, 1)), degree=0)[1])
    out.append(with_contractible_ideal(xy_lie(), acting="x", degree=0)[1])
    out.append(with_contractible_ideal(abelian((1, 2)), degree=1)[1])
    out.append(with_contractible_ideal(DGLA(["x", "y", "w"], [0, 1, 1],
                                            brackets={("x", "y"): {"y": 1}}), acting="x", degree=0)[1])
    return out


def non_quasi_iso_example():
    """Projection of abelian(0, 1) onto its degree-0 line: kills H^1."""
    g = abelian((0, 1))
    h = DGLA(["v0"], [0])
    return DGLAMorphism(g, h, {"v0": {"v0": 1}})


def random_form(rng, n, max_poly=2, bound=8, form_degree=None):
    """A random form on Delta^n with polynomial degree <= max_poly."""
    from itertools import combinations
    from mcdeform.forms import SullivanForm, _compositions
    words = [w for k in range(n + 1) for w in combinations(range(1, n + 1), k)]
    if form_degree is not None:
        words = [w for w in words if len(w) == form_degree]
    terms = {}
    for _ in range(rng.randint(0, 4)):
        total = rng.randint(0, max_poly)
        exps = rng.choice(list(_compositions(total, n)))
        terms[(exps, rng.choice(words))] = rand_q(rng)
    return SullivanForm(n, terms, bound)
