from fractions import Fraction

import pytest

from mcdeform.artin import make_dual_numbers, make_square_zero
from mcdeform.deform import (classify_first_order, counterexample_demo, end_host, gauge_operator,
                             iso_reducing_to_identity, mc_from_trivialization, r_linear_operator, reduce,
                             rho_operator, shift_twist, tensor_basis, twist, untwisted_operator,
                             window_complex)
from mcdeform.errors import NotInvertible, NotMC, PreconditionFailed
from mcdeform.exactla import QMatrix
from mcdeform.graded import ChainComplex, validate_complex
from mcdeform.mc import Found, gauge_act, gauge_equivalent, is_mc

from helpers import identity_complex, random_complex, random_element, random_mc, rand_q, seeded, two_term

F = Fraction
R2 = make_dual_numbers(2)


def three_term():
    return ChainComplex.from_maps({-2: ["a"], -1: ["b", "c"], 0: ["d"]},
                                  {(-2, "a"): {"b": 1}, (-1, "c"): {"d": 1}})


def test_tensor_basis_sorted_by_total_degree():
    R = make_square_zero({"u": -1})
    basis = tensor_basis(R, two_term())
    degs = [R.degree(r) + i for r, i, _ in basis]
    assert degs == sorted(degs) and len(basis) == 4


def test_untwisted_squares_to_zero_with_graded_base():
    R = make_square_zero({"u": -1, "w": 0})
    for A in (identity_complex(), three_term()):
        D = untwisted_operator(R, A)
        assert (D @ D).is_zero()


def test_twist_two_term():
    A = two_term()
    B = twist(A, R2, {("e", (-1, "a", 0, "b")): F(1)})
    assert reduce(B).d(-1) == A.d(-1)
    assert B.homology() == {-1: 1, 0: 1}
    assert validate_complex(B.total_complex()).valid


def test_twist_rejects_non_mc():
    R = make_dual_numbers(3)
    A = ChainComplex.zero_differential({-1: ["a"], 0: ["b"], 1: ["c"]})
    z = {("e", (-1, "a", 0, "b")): F(1), ("e", (0, "b", 1, "c")): F(1)}
    with pytest.raises(NotMC) as info:
        twist(A, R, z)
    assert info.value.curvature


def test_reduce_recovers_fiber():
    rng = seeded(3)
    for _ in range(5):
        A = random_complex(rng)
        B = twist(A, R2, {})
        red = reduce(B)
        for i in A.degrees:
            if A.dim(i + 1):
                assert red.d(i) == A.d(i)


def test_mc_from_identity_trivialization():
    A = identity_complex()
    z = {("e", (-1, "a", 0, "b")): F(3)}
    B = twist(A, R2, z)
    n = len(B.basis)
    out = mc_from_trivialization(R2, A, B.total, QMatrix.identity(n))
    assert out.twist == z
    assert out.fiber.d(-1) == A.d(-1)


def test_mc_from_gauge_trivialization_matches_gauge_action():
    R = make_dual_numbers(3)
    A = three_term()
    host = end_host(R, A)
    rng = seeded(11)
    for _ in range(10):
        z = random_mc(rng, host)
        assert is_mc(host, z)
        gamma = random_element(rng, host, 0)
        B = twist(A, R, z, host)
        out = mc_from_trivialization(R, A, B.total, gauge_operator(R, A, gamma))
        assert out.twist == gauge_act(host, gamma, z)
        assert gauge_equivalent(host, z, out.twist)


def test_mc_from_non_identity_reduction_conjugates_fiber():
    A = identity_complex()
    theta = r_linear_operator(R2, A, {(-1, "a"): {("1", -1, "a"): F(2)}, (0, "b"): {("1", 0, "b"): F(1)}})
    B = twist(A, R2, {})
    out = mc_from_trivialization(R2, A, B.total, theta)
    assert out.fiber.d(-1)[0, 0] == F(1, 2)
    assert out.twist == {}


def test_mc_from_random_trivialization_is_mc():
    R = make_dual_numbers(3)
    rng = seeded(5)
    for _ in range(10):
        A = random_complex(rng)
        host = end_host(R, A)
        B = twist(A, R, {}, host)
        images = {}
        for i in A.degrees:
            for a in A.space.basis(i):
                img = {(R.unit, i, a): F(1)}
                for c in ("e", "e^2"):
                    for b in A.space.basis(i):
                        q = rand_q(rng)
                        if q:
                            img[(c, i, b)] = img.get((c, i, b), 0) + q
                images[(i, a)] = img
        out = mc_from_trivialization(R, A, B.total, r_linear_operator(R, A, images))
        assert is_mc(out.host, out.twist)


def test_mc_from_singular_trivialization_raises():
    A = two_term()
    n = len(tensor_basis(R2, A))
    with pytest.raises(NotInvertible):
        mc_from_trivialization(R2, A, untwisted_operator(R2, A), QMatrix.zeros(n, n))


def test_classify_first_order():
    point = ChainComplex.zero_differential({0: ["p"]})
    for A, dim in ((point, 0), (two_term(), 1), (identity_complex(), 0), (three_term(), 0)):
        cls = classify_first_order(A)
        assert cls.dimension == dim == cls.h1_end
        assert len(cls.representatives) == dim


def test_iso_agrees_with_gauge_search():
    A = two_term()
    host = end_host(R2, A)
    f = (-1, "a", 0, "b")
    pairs = [({}, {}), ({("e", f): F(1)}, {("e", f): F(1)}), ({("e", f): F(1)}, {("e", f): F(2)}),
             ({}, {("e", f): F(1)})]
    for z, z2 in pairs:
        phi = iso_reducing_to_identity(A, R2, z, z2)
        assert (phi is not None) == bool(gauge_equivalent(host, z, z2))
    A = identity_complex()
    host = end_host(R2, A)
    z2 = {("e", (-1, "a", 0, "b")): F(7)}
    assert iso_reducing_to_identity(A, R2, {}, z2) is not None
    assert isinstance(gauge_equivalent(host, {}, z2), Found)
    with pytest.raises(PreconditionFailed):
        iso_reducing_to_identity(A, make_dual_numbers(3), {}, {})


@pytest.mark.parametrize("N", [2, 3, 4, 5])
def test_counterexample(N):
    rep = counterexample_demo(N)
    assert rep.is_mc and rep.gauge_nontrivial
    assert rep.gauge_search_order == 1
    assert rep.interior_acyclic
    assert rep.homology[-N] == 1 and rep.homology[N] == 1
    assert rep.interior == list(range(-N + 1, N))


def test_counterexample_variants():
    N = 3
    broken = counterexample_demo(N, {i: 1 for i in range(-N, N) if i != 0})
    assert not broken.interior_acyclic
    zero = counterexample_demo(N, {})
    assert not zero.gauge_nontrivial
    assert all(h == 2 for h in zero.homology.values())
    A = window_complex(N)
    assert iso_reducing_to_identity(A, R2, shift_twist(N), shift_twist(N, {i: 2 for i in range(-N, N)})) is None
    with pytest.raises(ValueError):
        counterexample_demo(1)


def test_rho_intertwines_differentials_on_graded_base():
    R = make_square_zero({"u": -1, "w": 0})
    A = identity_complex()
    host = end_host(R, A)
    rng = seeded(9)
    D0 = untwisted_operator(R, A)
    for _ in range(20):
        x = random_element(rng, host, 0)
        X = rho_operator(R, A, x)
        comm = X @ D0 - D0 @ X
        assert comm == rho_operator(R, A, host.d(x)).scale(-1)
