import dataclasses
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import (
    all_order_maps,
    circle,
    homotopy_classes,
    oracle_distance,
    random_graph_poset,
    random_mixed_poset,
    random_pair,
    random_poset,
)
from homdist.distance import (
    Budgets,
    CoverCertificate,
    cat,
    cat_via_inclusions,
    distance,
    gcat,
    map_category,
    tc,
    tc_m,
    verify_certificate,
    verify_gcat_certificate,
)
from homdist.errors import Mismatch, NotConnected
from homdist.homotopy import Fence
from homdist.poset import Ideal, OrderMap, build_poset, chain, induced_subposet, power_product


def _value(d):
    return float("inf") if d.kind == "infinite" else d.value


def test_triangle_counterexample(fgh):
    f, g, h = fgh
    fg, gh, fh = distance([f, g]), distance([g, h]), distance([f, h])
    assert (fg.value, gh.value, fh.value) == (1, 1, 3)
    assert fh.lower_bound_proof["refuted_cover_sizes"] == [0, 1, 2, 3]
    assert fg.lower_bound_proof["refuted_cover_sizes"] == [0, 1]
    for maps, d in [([f, g], fg), ([g, h], gh), ([f, h], fh)]:
        assert verify_certificate(maps, d.certificate, d.value)
    assert fh.value > fg.value + gh.value


def test_same_map_is_zero(fgh):
    f, _, _ = fgh
    d = distance([f, f])
    assert d.value == 0 and len(d.certificate.ideals) == 1


def test_circle_invariants(S):
    assert cat(S).value == 1
    assert gcat(S).value == 1
    assert cat_via_inclusions(S).value == 1
    assert tc(S).value == 3


def test_torus_category(torus):
    values = {cat(torus, b).value for b in ("(a,a)", "(x1,x2)", "(b,x1)")}
    assert values == {3}
    assert cat_via_inclusions(torus).value == 3
    assert gcat(torus).value == 3


def test_tc_bounds(S, torus):
    t = tc(S).value
    assert cat(S).value <= t <= cat(torus).value


def test_disconnected_space_rejected():
    X = build_poset(["p", "q"])
    with pytest.raises(NotConnected):
        cat(X)


def test_mismatched_maps(S):
    with pytest.raises(Mismatch):
        distance([OrderMap.identity(S), OrderMap.identity(chain(2))])
    with pytest.raises(ValueError):
        distance([OrderMap.identity(S)])


def test_infinite_distance():
    # two points mapped to different components
    X = build_poset(["p"])
    Y = build_poset(["u", "v"])
    d = distance([OrderMap.constant(X, Y, "u"), OrderMap.constant(X, Y, "v")])
    assert d.kind == "infinite" and not d.finite
    assert d.lower_bound_proof == {"non_domain_minimal_open": "p"}


def test_map_category(S):
    idm = OrderMap.identity(S)
    assert map_category(idm).value == 1


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**9))
def test_matches_brute_force_oracle(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 5)
    X = random_graph_poset(rng, n, "x") if n >= 3 and rng.random() < 0.5 else \
        random_mixed_poset(rng, n, connected=False, prefix="x")
    Y = circle("y") if rng.random() < 0.5 else random_mixed_poset(rng, rng.randint(1, 3), False, "y")
    f, g = random_pair(rng, X, Y)
    chosen = [f, g] if rng.random() < 0.7 else [f, g, rng.choice(all_order_maps(X, Y))]
    expect = oracle_distance(chosen)
    for use_cores in (True, False):
        d = distance(chosen, Budgets(use_cores=use_cores))
        assert _value(d) == expect
        if d.finite:
            assert verify_certificate(chosen, d.certificate, d.value)


def _oracle_contractible(X, mask):
    sub, _ = induced_subposet(X, mask)
    labels = homotopy_classes(sub, sub)
    ident = tuple(range(len(sub)))
    return any(labels[ident] == labels[(c,) * len(sub)] for c in range(len(sub)))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9))
def test_gcat_matches_brute_force(seed):
    from helpers import all_ideals
    import itertools

    rng = random.Random(seed)
    X = random_poset(rng, rng.randint(1, 4), rng.uniform(0.2, 0.8), prefix="x")
    good = [m for m in all_ideals(X) if m and _oracle_contractible(X, m)]
    expect = next(k - 1 for k in range(1, len(good) + 1)
                  for combo in itertools.combinations(good, k)
                  if sum_or(combo) == X.full)
    d = gcat(X)
    assert d.value == expect
    assert verify_gcat_certificate(X, d.certificate)
    assert d.value >= cat(X).value


def sum_or(masks):
    acc = 0
    for m in masks:
        acc |= m
    return acc


def test_higher_tc_of_contractible_spaces():
    V = build_poset(["p", "q", "r"], [("p", "q"), ("p", "r")])
    for X in (chain(2), V):
        assert tc_m(X, 3).value == 0
    with pytest.raises(ValueError):
        tc_m(V, 1)


def test_projections_of_power(S):
    P, projections = power_product([S, S])
    d = distance(projections)
    assert d.value == tc(S).value


def test_tampered_certificates(fgh):
    f, g, _ = fgh
    d = distance([f, g])
    cert = d.certificate
    assert verify_certificate([f, g], cert, 1)
    # wrong claimed value
    assert not verify_certificate([f, g], cert, 0)
    assert verify_certificate([f, g], cert, 0).reason.startswith("WrongSize")
    # drop an ideal: no longer a cover
    short = CoverCertificate(cert.ideals[:1], cert.fences[:1])
    assert verify_certificate([f, g], short).reason.startswith("NotCover")
    # not downward closed
    X = f.dom
    bad = dataclasses.replace(cert.ideals[0])
    object.__setattr__(bad, "mask", X.mask_of(["(x1,x1)"]))
    broken = CoverCertificate([bad] + cert.ideals[1:], cert.fences)
    assert verify_certificate([f, g], broken).reason.startswith(("NotDownwardClosed", "Malformed"))
    # fence with the wrong endpoint
    U = cert.ideals[0]
    fence = cert.fences[0][0]
    wrong = Fence(fence.maps[:-1]) if len(fence.maps) > 1 else Fence(fence.maps * 2)
    assert not verify_certificate([f, g], CoverCertificate(cert.ideals, [[wrong]] + cert.fences[1:]))


def test_budget_exhaustion_gives_lower_bound(fgh):
    f, _, h = fgh
    d = distance([f, h], Budgets(bfs=1))
    assert d.kind == "unknown" and d.budgets_hit
    assert d.at_least <= 3
    d = distance([f, h], Budgets(ideals=3))
    assert d.kind == "unknown" and "ideals" in d.budgets_hit and d.at_least <= 3


def test_budget_scaling(monkeypatch):
    monkeypatch.setenv("HOMDIST_BUDGET_SCALE", "0.5")
    b = Budgets().scaled()
    assert b.ideals == Budgets.ideals // 2
    monkeypatch.delenv("HOMDIST_BUDGET_SCALE")
    assert Budgets().scaled() == Budgets()


def test_workers_give_same_result(fgh):
    f, g, _ = fgh
    one = distance([f, g])
    two = distance([f, g], Budgets(workers=2))
    assert one.value == two.value
    assert one.lower_bound_proof == two.lower_bound_proof


def test_empty_domain_ideal_is_trivial(S):
    assert Ideal(S, 0).is_valid()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9))
def test_invariance_under_core_maps_and_homotopic_replacement(seed):
    from homdist.homotopy import homotopic
    from homdist.poset import compose, core

    rng = random.Random(seed)
    n = rng.randint(3, 6)
    X = random_graph_poset(rng, n, "x") if rng.random() < 0.5 else random_mixed_poset(rng, n, prefix="x")
    Y = circle("y") if rng.random() < 0.5 else random_mixed_poset(rng, rng.randint(1, 4), prefix="y")
    f, g = random_pair(rng, X, Y)
    base = distance([f, g]).value
    cx, cy = core(X), core(Y)
    # pre-composition with the domain's core inclusion, post-composition with the codomain's retraction
    assert distance([compose(cx.inclusion, f), compose(cx.inclusion, g)]).value == base
    assert distance([compose(f, cy.retraction), compose(g, cy.retraction)]).value == base
    # replacing f by any homotopic map leaves the distance unchanged
    f2 = rng.choice([m for m in all_order_maps(X, Y) if homotopic(m, f).homotopic])
    assert distance([f2, g]).value == base
