import json

import numpy as np
import pytest

import brute
from entropoly import (
    DimensionMismatch,
    DomainKind,
    InvalidProblemFile,
    PolytopeSpec,
    UnsupportedMatrix,
    gen_multiway,
    gen_transport,
    load_problem,
    problem_to_dict,
    validate_spec,
)


def test_validate_segment_integer():
    report = validate_spec(PolytopeSpec([[1.0, 1.0]], [3.0], DomainKind.INTEGER))
    assert report.rank_ok
    assert report.lattice_index == 1
    assert report.interior_hint.kind == "found"
    assert np.allclose(report.interior_hint.point, [1.5, 1.5], atol=1e-8)


def test_validate_negative_rhs_is_empty():
    report = validate_spec(PolytopeSpec([[1.0, 1.0]], [-1.0], DomainKind.VOLUME))
    assert report.interior_hint.kind == "empty"
    assert report.lattice_index is None


def test_validate_transport_binary_lattice():
    spec = gen_transport((1, 1), (1, 1), DomainKind.BINARY)
    report = validate_spec(spec)
    assert report.lattice_index == 1
    assert brute.minors_gcd(spec.integer_A()) == 1


def test_generated_specs_validate():
    for spec in (gen_transport((3, 4), (2, 5), DomainKind.INTEGER),
                 gen_multiway((2, 3, 2), [[6, 6], [4, 4, 4], [5, 7]], DomainKind.INTEGER)):
        report = validate_spec(spec)
        assert report.rank_ok
        assert report.lattice_index == 1
        assert report.interior_hint.kind == "found"


def test_validation_is_deterministic():
    spec = gen_transport((2, 3), (1, 4), DomainKind.INTEGER)
    r1 = validate_spec(spec)
    r2 = validate_spec(spec)
    assert r1.rank_ok == r2.rank_ok and r1.lattice_index == r2.lattice_index
    assert np.array_equal(r1.interior_hint.point, r2.interior_hint.point)


def test_spec_shape_checks():
    with pytest.raises(DimensionMismatch):
        PolytopeSpec(np.eye(2), [1.0, 1.0], DomainKind.VOLUME)  # d == n
    with pytest.raises(DimensionMismatch):
        PolytopeSpec([[1.0, 1.0]], [1.0, 2.0], DomainKind.VOLUME)
    with pytest.raises(DimensionMismatch):
        PolytopeSpec([[1.0, 1.0]], [1.0], DomainKind.VOLUME, tilt=[0.1])


def test_discrete_domains_require_integers():
    with pytest.raises(UnsupportedMatrix):
        PolytopeSpec([[1.0, 0.5]], [1.0], DomainKind.INTEGER)
    with pytest.raises(UnsupportedMatrix):
        PolytopeSpec([[1.0, 1.0]], [1.5], DomainKind.BINARY)


def test_problem_round_trip():
    spec = gen_transport((2, 3), (4, 1), DomainKind.INTEGER, name="toy")
    data = problem_to_dict(spec)
    again = load_problem(json.dumps(data))
    assert again.name == "toy"
    assert again.domain is DomainKind.INTEGER
    assert np.array_equal(again.A, spec.A)
    assert np.array_equal(again.b, spec.b)
    assert problem_to_dict(again) == data


def test_problem_round_trip_volume_tilt():
    spec = PolytopeSpec([[1.0, 0.5, 2.0]], [3.25], DomainKind.VOLUME, tilt=[0.1, -0.2, 0.0])
    data = problem_to_dict(spec)
    again = load_problem(data)
    assert np.allclose(again.A, spec.A)
    assert np.allclose(again.tilt, spec.tilt)


@pytest.mark.parametrize("payload", [
    "not json at all",
    '{"A": [[1, 1]], "b": [1]}',                                   # missing domain
    '{"A": [[1, 1]], "b": [1], "domain": "nope"}',                 # bad domain
    '{"A": [[1, 1]], "b": [1], "domain": "integer", "zap": 1}',    # unknown key
    '{"A": [[1, 0.5]], "b": [1], "domain": "integer"}',            # non-integer data
    '{"A": [[1, 1], [1, 1]], "b": [1, 1], "domain": "volume"}',    # d == n
    '[1, 2, 3]',
])
def test_problem_schema_errors(payload):
    with pytest.raises(InvalidProblemFile):
        load_problem(payload)
