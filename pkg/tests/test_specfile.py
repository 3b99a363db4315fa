import json
from fractions import Fraction

import pytest

from homalg.errors import SchemaError
from homalg.specfile import digest, parse_instantiation, parse_spec, with_field

from conftest import fixture_names, fixture_path, load_fixture


def test_digest_ignores_key_order():
    assert digest({"a": 1, "b": [1, 2]}) == digest({"b": [1, 2], "a": 1})
    assert digest({"a": 1}) != digest({"a": 2})


@pytest.mark.parametrize("name", fixture_names())
def test_spec_json_round_trip(name):
    spec = load_fixture(name)
    again = parse_spec(spec.to_json())
    assert again.to_json() == spec.to_json()
    assert again.digest() == spec.digest()


def test_instantiation_parsing():
    spec = load_fixture("example1_hom_assoc")
    assert parse_instantiation(["a=2", "b = -1/3"], spec) == {"a": Fraction(2), "b": Fraction(-1, 3)}
    with pytest.raises(SchemaError):
        parse_instantiation(["a"], spec)
    with pytest.raises(SchemaError):
        parse_instantiation(["zz=1"], spec)
    with pytest.raises(SchemaError):
        parse_instantiation(["a=i"], spec)


def test_field_override():
    spec = load_fixture("example1_hom_assoc")
    assert with_field(spec, "Qi").gaussian
    with pytest.raises(SchemaError):
        with_field(spec, "F2")


def test_reserved_and_undeclared_names():
    base = json.loads(open(fixture_path("example1_hom_assoc")).read())
    with pytest.raises(SchemaError):
        parse_spec({**base, "params": ["i"]})
    with pytest.raises(SchemaError):
        parse_spec({**base, "unknowns": ["nope"]})
