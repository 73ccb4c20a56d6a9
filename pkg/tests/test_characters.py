from itertools import product
from math import gcd

import pytest

from twisted_bernoulli.characters import (
    DirichletCharacter,
    character_from_json,
    character_to_json,
    enumerate_cyclic,
    from_table,
    has_cyclic_units,
    principal,
    unit_group_exponent,
)
from twisted_bernoulli.errors import (
    ConfigError,
    NonCyclicUnitGroup,
    NonDivisibleConductor,
    NotMultiplicative,
    NotNormalized,
    WrongSupport,
)
from twisted_bernoulli.exact import RootOfUnity, cyclo_field, totient


def table_of(chi):
    out = []
    for v in chi.values:
        if v is None:
            out.append(None)
        else:
            out.append(v.normalized()._key())
    return out


def test_principal_tables():
    assert table_of(principal(1)) == [(1, 0)]
    assert table_of(principal(4)) == [None, (1, 0), None, (1, 0)]
    assert table_of(principal(6)) == [None, (1, 0), None, None, None, (1, 0)]


def test_principal_modulus_one_is_one_at_zero():
    chi = principal(1)
    assert chi.value(0).is_one()
    assert chi.value_at(0, cyclo_field(1)) == 1


def test_from_table_valid_mod4():
    chi = from_table(4, [0, 1, 0, -1])
    assert table_of(chi) == [None, (1, 0), None, (2, 1)]
    assert not chi.is_principal()


def test_from_table_legendre_mod3():
    chi = from_table(3, [0, 1, -1])
    assert table_of(chi) == [None, (1, 0), (2, 1)]


def test_from_table_rejects_wrong_support():
    with pytest.raises(WrongSupport):
        from_table(4, [0, 1, 1, 1])
    with pytest.raises(WrongSupport):
        from_table(4, [0, 1, 0, 0])


def test_from_table_rejects_unnormalized():
    with pytest.raises(NotNormalized):
        from_table(3, [0, -1, 1])


def test_from_table_rejects_non_multiplicative():
    # chi(3)^2 must equal chi(9 mod 4) = chi(1) = 1, so chi(3) = zeta_3 fails
    with pytest.raises(NotMultiplicative):
        from_table(4, [None, RootOfUnity(1, 0), None, RootOfUnity(3, 1)])


def test_enumerate_d3():
    chars = enumerate_cyclic(3)
    assert len(chars) == 2
    assert chars[0].is_principal()
    assert table_of(chars[1]) == [None, (1, 0), (2, 1)]


def test_enumerate_d1():
    chars = enumerate_cyclic(1)
    assert len(chars) == 1
    assert chars[0].value(0).is_one()


def test_enumerate_d5_against_homomorphism_oracle():
    chars = enumerate_cyclic(5)
    assert len(chars) == 4
    # brute-force oracle: all maps of the cyclic unit group <2> into mu_4
    units = [1, 2, 3, 4]
    dlog = {pow(2, t, 5): t for t in range(4)}
    expected = set()
    for j in range(4):
        tab = tuple(
            None if gcd(a, 5) > 1 else RootOfUnity(4, j * dlog[a % 5])._key() for a in range(5)
        )
        expected.add(tab)
    got = {
        tuple(None if v is None else v._key() for v in chi.values) for chi in chars
    }
    assert got == expected
    # the two order-4 characters take value zeta_4^(+-1) at the root 2
    order4 = [chi for chi in chars if chi.value(2).normalized().order == 4]
    assert {chi.value(2).normalized()._key() for chi in order4} == {(4, 1), (4, 3)}


def test_enumerate_rejects_non_cyclic():
    with pytest.raises(NonCyclicUnitGroup):
        enumerate_cyclic(8)
    assert not has_cyclic_units(8)
    assert has_cyclic_units(4) and has_cyclic_units(9) and has_cyclic_units(18)


def test_enumerated_characters_pass_validation():
    for d in (1, 2, 3, 4, 5, 6, 7, 9, 10, 11):
        for chi in enumerate_cyclic(d):
            rebuilt = from_table(d, list(chi.values))
            assert rebuilt == chi


def test_value_at_periodic_extension():
    chi = from_table(4, [0, 1, 0, -1])
    f = cyclo_field(1)
    assert chi.value_at(7, f) == -1
    assert chi.value_at(6, f) == 0
    assert principal(1).value_at(0, f) == 1


def test_value_at_requires_embeddable_values():
    chi = enumerate_cyclic(5)[1]  # has order-4 values
    with pytest.raises(NonDivisibleConductor):
        chi.value_at(2, cyclo_field(3))
    assert chi.value_at(2, cyclo_field(12)).field.conductor == 12


def test_orthogonality():
    for d in range(1, 12):
        if not has_cyclic_units(d):
            continue
        f = cyclo_field(unit_group_exponent(d))
        for chi in enumerate_cyclic(d):
            total = f.zero
            for a in range(d):
                total = total + chi.value_at(a, f)
            if chi.is_principal():
                assert total == totient(d) if d > 1 else total == 1
            else:
                assert total.is_zero()


def test_pointwise_product_is_character():
    for d in (3, 4, 5, 7):
        chars = enumerate_cyclic(d)
        for c1, c2 in product(chars, chars):
            prod = c1 * c2
            assert from_table(d, list(prod.values)) == prod


def test_power_of_character():
    chi = enumerate_cyclic(5)[1]
    assert chi**2 == chi * chi
    assert (chi**4).is_principal()


def test_value_orders_divide_group_exponent():
    for d in (3, 4, 5, 9, 11):
        lam = unit_group_exponent(d)
        for chi in enumerate_cyclic(d):
            for v in chi.values:
                if v is not None:
                    assert lam % v.normalized().order == 0


# --- JSON specs -----------------------------------------------------------------

def test_character_json_round_trip():
    for d in (1, 3, 4, 5):
        for chi in enumerate_cyclic(d):
            assert character_from_json(character_to_json(chi)) == chi


def test_character_spec_forms():
    assert character_from_json({"modulus": 4, "kind": "principal"}) == principal(4)
    tab = {
        "modulus": 4,
        "kind": "table",
        "values": [
            None,
            {"order": 1, "exponent": 0},
            None,
            {"order": 2, "exponent": 1},
        ],
    }
    assert character_from_json(tab) == from_table(4, [0, 1, 0, -1])
    idx = {"modulus": 3, "kind": "index", "j": 1}
    assert character_from_json(idx) == enumerate_cyclic(3)[1]


def test_character_spec_reduces_exponents_on_load():
    spec = {
        "modulus": 3,
        "kind": "table",
        "values": [None, {"order": 1, "exponent": 5}, {"order": 2, "exponent": 7}],
    }
    assert character_from_json(spec) == from_table(3, [0, 1, -1])


def test_character_spec_rejects_unknown_keys():
    with pytest.raises(ConfigError):
        character_from_json({"modulus": 3, "kind": "principal", "extra": 1})
    with pytest.raises(ConfigError):
        character_from_json({"kind": "principal"})
    with pytest.raises(ConfigError):
        character_from_json({"modulus": 3, "kind": "index", "j": 9})
