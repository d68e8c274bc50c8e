# test_group.py
import math

import numpy as np
import pytest

from errors import DegenerateMatrix
from group import (
    GAMMA1,
    GAMMA3,
    GAMMA4,
    IDENTITY,
    Generator,
    GroupElement,
    IwasawaCoords,
    apply_word,
    compose,
    from_iwasawa,
    geodesic,
    horocycle,
    horocycle_lift,
    in_fundamental_domain,
    inverse,
    iwasawa,
    power,
    reduce_to_fundamental,
    right_geodesic,
    rotation,
)

ATOMS = {(0.0, 0.0), (0.5, 0.0), (0.0, 0.5)}


def close(g: GroupElement, h: GroupElement, tol: float = 1e-12) -> bool:
    a = np.array(list(g.to_dict().values()))
    b = np.array(list(h.to_dict().values()))
    return bool(np.all(np.abs(a - b) <= tol))


def test_compose_identity_and_inverse():
    g = GroupElement(2.0, 1.0, 3.0, 2.0, 0.25, -0.5)
    assert close(compose(g, IDENTITY), g)
    assert close(compose(g, inverse(g)), IDENTITY)
    assert close(compose(inverse(g), g), IDENTITY)


def test_translations_commute():
    assert close(compose(GAMMA3, GAMMA4), GroupElement(1.0, 0.0, 0.0, 1.0, 1.0, 1.0))


def test_determinant_survives_long_chains():
    g = IDENTITY
    for k in range(1000):
        g = g @ rotation(0.37 * k) @ horocycle(1e-3 if k % 2 else -1e-3)
    assert abs(g.det - 1.0) <= 1e-10


@pytest.mark.parametrize("g, expected", [
    (IDENTITY, (0.0, 1.0, 0.0)),
    (GroupElement(2.0, 0.0, 0.0, 0.5), (0.0, 4.0, 0.0)),
    (rotation(math.pi / 3), (0.0, 1.0, math.pi / 3)),
])
def test_iwasawa_examples(g, expected):
    coords = iwasawa(g)
    assert (coords.x, coords.y, coords.phi) == pytest.approx(expected, abs=1e-14)


def test_iwasawa_round_trip():
    rng = np.random.default_rng(1)
    for _ in range(50):
        coords = IwasawaCoords(rng.uniform(-3, 3), rng.uniform(0.1, 5), rng.uniform(0.01, 6.2))
        g = from_iwasawa(coords, 0.3, -0.1)
        assert close(from_iwasawa(iwasawa(g), g.xi1, g.xi2), g, 1e-12)


def test_iwasawa_rejects_degenerate_matrix():
    with pytest.raises(DegenerateMatrix):
        iwasawa(GroupElement(1.0, 0.0, 0.0, 2.0))


def test_flows():
    assert close(geodesic(0.0), IDENTITY)
    coords = iwasawa(horocycle(0.3) @ geodesic(1.7))
    assert (coords.x, coords.y, coords.phi) == pytest.approx((0.3, math.exp(-1.7), 0.0), abs=1e-14)
    assert close(power(GAMMA1, 4), IDENTITY)


def test_right_geodesic_is_a_flow():
    g = GroupElement(2.0, 1.0, 3.0, 2.0, 0.25, -0.5)
    assert close(right_geodesic(g, 0.0), g)
    assert close(right_geodesic(g, 0.9), compose(g, geodesic(0.9)))
    assert close(right_geodesic(right_geodesic(g, 0.4), 0.5), right_geodesic(g, 0.9), tol=1e-12)
    coords = iwasawa(right_geodesic(horocycle(0.3), 1.7))
    assert (coords.x, coords.y, coords.phi) == pytest.approx((0.3, math.exp(-1.7), 0.0), abs=1e-14)


def test_horocycle_lift():
    assert close(horocycle_lift(0.0, 0.0), IDENTITY)
    g = horocycle_lift(0.4, 2.0, 0.5, 0.25)
    coords = iwasawa(g)
    assert (coords.x, coords.y) == pytest.approx((0.4, math.exp(-2.0)))
    assert (g.xi1, g.xi2) == (0.25 + 0.5 * 0.4, 0.0)


def test_fundamental_domain_membership():
    assert in_fundamental_domain(0.0, 1.0, 0.0, 0.0, 0.0)
    assert in_fundamental_domain(-0.5, 2.0, 1.0, 0.5, 0.5)
    assert not in_fundamental_domain(0.5, 2.0, 1.0, 0.0, 0.0)
    assert not in_fundamental_domain(0.0, 0.9, 1.0, 0.0, 0.0)
    assert not in_fundamental_domain(0.0, 2.0, math.pi, 0.0, 0.0)
    assert not in_fundamental_domain(0.0, 2.0, 0.0, -0.5, 0.0)


def test_reduction_leaves_reduced_points_alone():
    g = from_iwasawa(IwasawaCoords(0.1, 2.0, 0.5), 0.2, -0.3)
    result = reduce_to_fundamental(g)
    assert result.word == []
    assert close(result.reduced, g)


def test_reduction_of_pure_translation():
    result = reduce_to_fundamental(GroupElement(1.0, 0.0, 0.0, 1.0, 3.0, -2.0))
    assert (result.reduced.xi1, result.reduced.xi2) == (0.0, 0.0)
    assert {gen for gen, _ in result.word} <= {Generator.GAMMA3, Generator.GAMMA4}


def test_reduction_lands_in_domain_and_replays():
    rng = np.random.default_rng(7)
    for u in rng.random(20):
        g = horocycle_lift(float(u), 10.0)
        result = reduce_to_fundamental(g)
        coords = iwasawa(result.reduced)
        assert in_fundamental_domain(coords.x, coords.y, coords.phi, result.reduced.xi1, result.reduced.xi2)
        assert close(apply_word(g, result.word), result.reduced, 1e-9)


def test_rational_lifts_reduce_onto_three_atoms():
    rng = np.random.default_rng(11)
    for u in rng.random(20):
        reduced = reduce_to_fundamental(horocycle(float(u)) @ geodesic(15.0)).reduced
        assert any(abs(reduced.xi1 - a) <= 1e-9 and abs(reduced.xi2 - b) <= 1e-9 for a, b in ATOMS)
