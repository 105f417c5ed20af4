import random

import pytest

from galois40.permgroup import (J, NotTransitive, PermGroup, action_on, build_group, compose,
                                cycle_type, det_mod3, format_cycle_type, group_order, identity,
                                inverse, is_even, isotropic_lines, mat_mul, matrix_group_order,
                                multiplier, orbit_stabilizer_holds, parse_cycle_type,
                                projective_points, psp_cycle_types, pgsp_cycle_types, scalar,
                                similitude_generator, simplicity_smoke_test,
                                symplectic_generators, transpose)


def test_generators_preserve_the_form():
    for g in symplectic_generators():
        assert mat_mul(transpose(g), mat_mul(J, g)) == J
        assert det_mod3(g) == 1


def test_symplectic_closure_has_order_51840():
    assert matrix_group_order(symplectic_generators()) == 51840


def test_similitude_scales_the_form_by_two():
    s = similitude_generator()
    assert s == ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 2, 0), (0, 0, 0, 2))
    assert multiplier(s) == 2
    # nu is multiplicative: the square is symplectic
    assert multiplier(mat_mul(s, s)) == 1


def test_geometry_has_forty_points_and_lines():
    assert len(projective_points()) == 40
    lines = isotropic_lines()
    assert len(lines) == 40
    assert len(set(lines)) == 40


def test_projective_action_identifies_g_and_minus_g():
    assert action_on("points", identity()) == tuple(range(40))
    assert action_on("lines", identity()) == tuple(range(40))
    minus = scalar(2)
    for g in symplectic_generators():
        mg = mat_mul(minus, g)
        assert action_on("points", g) == action_on("points", mg)
        assert action_on("lines", g) == action_on("lines", mg)


@pytest.mark.parametrize("variant,order", [("psp", 25920), ("pgsp", 51840)])
@pytest.mark.parametrize("action", ["points", "lines"])
def test_group_orders(variant, action, order):
    assert group_order(variant, action) == order
    assert orbit_stabilizer_holds(build_group(variant, action).group)


@pytest.mark.parametrize("variant", ["psp", "pgsp"])
@pytest.mark.parametrize("action", ["points", "lines"])
def test_both_actions_are_transitive_and_primitive(variant, action):
    G = build_group(variant, action).group
    assert G.is_transitive()
    assert G.block_systems() == []
    assert G.is_primitive()


def test_trivial_group():
    G = PermGroup.from_generators([tuple(range(40))], 40)
    assert G.order() == 1
    assert not G.is_transitive()
    with pytest.raises(NotTransitive):
        G.block_systems()


def test_four_cycle_has_the_antipodal_block_system():
    G = PermGroup.from_generators([(1, 2, 3, 0)], 4)
    assert G.is_transitive()
    assert G.block_systems() == [[frozenset({0, 2}), frozenset({1, 3})]]
    assert not G.is_primitive()


def test_symmetric_group_on_five_points_is_primitive():
    G = PermGroup.from_generators([(1, 0, 2, 3, 4), (1, 2, 3, 4, 0)], 5)
    assert G.order() == 120
    assert G.is_primitive()


def test_not_a_permutation_is_rejected():
    with pytest.raises(ValueError):
        PermGroup.from_generators([(0, 0, 1)], 3)


def test_cycle_type_helpers():
    p = (1, 2, 0, 4, 3, 5)
    ct = cycle_type(p)
    assert sum(ct) == 6
    assert ct == (3, 2, 1)
    assert format_cycle_type(ct) == "3^1 2^1 1^1"
    assert format_cycle_type((2,) * 20) == "2^20"
    assert parse_cycle_type(format_cycle_type(ct)) == ct
    assert format_cycle_type(ct, ",") == "3^1,2^1,1^1"
    assert parse_cycle_type("3^1,2^1,1^1") == ct
    assert not is_even(ct)
    assert is_even(cycle_type(tuple(range(40))))


def test_compose_and_inverse():
    rng = random.Random(5)
    for _ in range(50):
        p = list(range(12))
        rng.shuffle(p)
        p = tuple(p)
        assert compose(p, inverse(p)) == tuple(range(12))
        assert compose(inverse(p), p) == tuple(range(12))


def test_identity_type_is_all_fixed_points():
    G = build_group("psp", "points").group
    assert G.cycle_type_counts()[(1,) * 40] == 1


def test_psp_types_are_even_and_pgsp_has_odd_types():
    for action in ("points", "lines"):
        assert all(is_even(ct) for ct in build_group("psp", action).group.cycle_type_set())
    odd = [ct for ct in build_group("pgsp", "lines").group.cycle_type_set() if not is_even(ct)]
    assert odd


def test_cycle_type_oracle_sizes():
    counts = {(v, a): len(build_group(v, a).group.cycle_type_set())
              for v in ("psp", "pgsp") for a in ("points", "lines")}
    assert counts == {("psp", "points"): 13, ("psp", "lines"): 15,
                      ("pgsp", "points"): 16, ("pgsp", "lines"): 25}
    assert psp_cycle_types() <= pgsp_cycle_types()
    assert len(psp_cycle_types()) == 25
    assert len(pgsp_cycle_types()) == 38


def test_coset_types_lie_outside_the_subgroup_elements():
    data = build_group("pgsp", "points")
    assert data.subgroup.order() * 2 == data.group.order()
    assert data.coset_cycle_types()


def test_psp_passes_the_simplicity_smoke_test():
    G = build_group("psp", "points").group
    assert simplicity_smoke_test(G, trials=3, seed=1)


def test_psp_is_a_proper_normal_subgroup_of_pgsp():
    data = build_group("pgsp", "points")
    g = data.subgroup.generators[0]
    assert data.group.normal_closure(g).order() == 25920
