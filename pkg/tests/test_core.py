"""Kernel operations against hand-derived and brute-force oracles."""

import random
from fractions import Fraction

import pytest

from drsys.core import (
    check_invariance,
    closure_in_sample,
    dn_distance,
    image_set,
    invariance_violation,
    iterate,
    iteration_domain,
    preimage_of_image,
    restrict,
)
from drsys.points import abs_metric, euclidean
from drsys.randomized import random_systems
from drsys.system import SystemValidationError, make_table_system
from drsys import gallery


@pytest.fixture(scope="module")
def half():
    return gallery.build("half-domain-interval", depth=6).system


@pytest.fixture(scope="module")
def doubling():
    return gallery.build("doubling-line", depth=6, window_exp=4).system


def grid_pt(k, depth=6):
    return euclidean(k * 2.0**-depth)


def test_iterate_examples(half):
    # sigma(x) = 2x with domain [0, 1/2): one step lands, two steps escape
    x = grid_pt(19)  # 19/64, just below 1/2 after one halving of 0.6-ish
    assert iterate(half, x, 1) == grid_pt(38)
    assert iterate(half, x, 2) is None  # 19/64 is outside [0, 1/4)
    assert iterate(half, x, 0) == x


def test_iterate_composition(half):
    for k in (0, 3, 9, 19, 40):
        x = grid_pt(k)
        for i in range(3):
            for j in range(3):
                whole = iterate(half, x, i + j)
                if whole is not None:
                    assert whole == iterate(half, iterate(half, x, i), j)


def test_iteration_domain(half):
    x = grid_pt(19)  # in Dom(sigma) but not Dom(sigma^2)
    assert iteration_domain(half, x, 3) == {0, 1}
    assert iteration_domain(half, x, 1) == {0}
    # downward closed for every sample point
    for p in half.sample:
        I = iteration_domain(half, p, 5)
        assert I == set(range(len(I)))


def test_dn_distance_by_direct_iteration(half, doubling):
    x, y = grid_pt(19), grid_pt(26)
    # I_3 = {0,1} for both; max(|x-y|, |2x-2y|) = 2 * 7/64
    assert dn_distance(half, x, y, 3) == pytest.approx(14 / 64)
    assert dn_distance(half, x, x, 4) == 0
    a, b = euclidean(0.125), euclidean(0.25)
    got = dn_distance(doubling, a, b, 2)
    assert got == max(abs(0.125 - 0.25), abs(0.25 - 0.5))
    assert got == dn_distance(doubling, b, a, 2)
    assert got >= doubling.metric(a, b)


def test_image_set_examples(half):
    # sample & [0, 2^-4) maps into sample & [0, 2^-2) after two steps
    U = frozenset(p for p in half.sample if p.coords[0] < 2.0**-4)
    img = image_set(half, U, 2)
    expect = frozenset(
        euclidean(p.coords[0] * 4.0) for p in U if p.coords[0] < 2.0**-4
    )
    assert img == expect
    assert image_set(half, frozenset(), 3) == frozenset()
    outside = frozenset(p for p in half.sample if p.coords[0] >= 0.5)
    for n in (1, 2, 3):
        assert image_set(half, outside, n) == frozenset()


def test_preimage_of_image_injective_identity(half):
    # injective map: the k-fold preimage of the k-fold image is U & Dom(sigma^k)
    sample = list(half.sample)
    rng = random.Random(7)
    for _ in range(20):
        U = frozenset(rng.sample(sample, rng.randint(0, 12)))
        for k in range(0, 4):
            dom_k = frozenset(
                p for p in sample if half.iterate_index(half.index[p], k) >= 0
            )
            assert preimage_of_image(half, U, k) == (U & dom_k)


def test_preimage_of_image_k0_and_negative(half):
    sample = frozenset(half.sample)
    U = frozenset(list(half.sample)[::5])
    assert preimage_of_image(half, U, 0) == U
    for k in (-1, -2, -3):
        assert preimage_of_image(half, U, k) == U & image_set(half, sample, -k)


def test_preimage_of_image_branching():
    # two-branch table system: preimages enumerate both branches
    pts = [euclidean(Fraction(i)) for i in range(4)]
    mapping = {pts[1]: pts[0], pts[2]: pts[0], pts[3]: pts[2]}
    sysm = make_table_system("branching", pts, mapping, abs_metric)
    U = frozenset([pts[1]])
    # sigma(U) = {p0}; preimages of {p0} are {p1, p2}
    assert preimage_of_image(sysm, U, 1) == frozenset([pts[1], pts[2]])


def test_check_invariance_split_equivalence():
    # Y is forward-invariant iff its complement is backward-invariant
    rng = random.Random(13)
    for sysm, _ in random_systems(13, 25, max_points=9):
        sample = list(sysm.sample)
        Y = frozenset(rng.sample(sample, rng.randint(0, len(sample))))
        Z = frozenset(sample) - Y
        assert (
            check_invariance(sysm, Y)["sigma_invariant"]
            == check_invariance(sysm, Z)["sigma_inv_invariant"]
        )


def test_check_invariance_full_sample(half):
    got = check_invariance(half, frozenset(half.sample))
    assert got == {"sigma_invariant": True, "sigma_inv_invariant": True}


def test_restrict_to_fixed_point(half):
    zero = euclidean(0.0)
    sub = restrict(half, frozenset([zero]))
    assert sub.sample == (zero,)
    assert sub.in_domain(zero)
    assert sub.apply(zero) == zero


def test_restrict_full_sample_identity(half):
    sub = restrict(half, frozenset(half.sample))
    assert sub.sample == half.sample
    for p in half.sample:
        assert sub.in_domain(p) == half.in_domain(p)


def test_restrict_rejects_noninvariant(half):
    Y = frozenset([euclidean(0.125)])  # maps to 0.25 outside Y
    with pytest.raises(SystemValidationError) as err:
        restrict(half, Y)
    assert "0.125" in str(err.value)
    assert invariance_violation(half, Y) is not None


def test_lemma_identities_random_suite():
    # the four preimage-of-image identities on random partial maps
    for sysm, injective in random_systems(99, 40, max_points=7):
        sample = list(sysm.sample)
        dom = frozenset(p for p in sample if sysm.in_domain(p))
        rng = random.Random(hash(sysm.space_id) & 0xFFFF)
        subsets = [
            frozenset(rng.sample(sample, rng.randint(0, len(sample))))
            for _ in range(12)
        ]
        for U in subsets:
            for k in range(-4, 5):
                P = preimage_of_image(sysm, U, k)
                if k <= 0:
                    assert P == U & image_set(sysm, frozenset(sample), -k)
                else:
                    dom_k = frozenset(
                        p
                        for p in sample
                        if sysm.iterate_index(sysm.index[p], k) >= 0
                    )
                    assert P <= dom_k
                assert P <= dom | U
                for n in (1, 2, 3):
                    inter = image_set(sysm, U, n) & P
                    assert inter <= dom | U
                    if U <= dom:
                        assert inter <= dom
                if injective:
                    assert P <= U
                    if k >= 0:
                        dom_k = frozenset(
                            p
                            for p in sample
                            if sysm.iterate_index(sysm.index[p], k) >= 0
                        )
                        assert P == U & dom_k


def test_closure_in_sample_dilation(half):
    S = frozenset([euclidean(0.5)])
    cl = closure_in_sample(half, S)
    step = 2.0**-6
    assert euclidean(0.5 - step) in cl and euclidean(0.5 + step) in cl
    assert euclidean(0.5 - 2 * step) not in cl
    assert closure_in_sample(half, frozenset()) == frozenset()


def test_sample_closed_under_apply_rejected():
    pts = [euclidean(Fraction(0)), euclidean(Fraction(1))]
    with pytest.raises(SystemValidationError):
        make_table_system(
            "broken", pts, {pts[1]: euclidean(Fraction(2))}, abs_metric
        )


def test_metric_axioms_validated():
    pts = [euclidean(Fraction(i)) for i in range(3)]

    def bad_metric(a, b):
        return Fraction(1) if a != b else Fraction(1)  # zero-set violated

    with pytest.raises(SystemValidationError):
        make_table_system("badmetric", pts, {}, bad_metric)
