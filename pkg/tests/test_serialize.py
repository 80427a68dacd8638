import json

from congruence import FieldConfig, LaurentMatrix, LaurentPoly, Matrix, MatrixTuple, tuple_rank
from congruence import serialize as ser
from congruence.field import sqrt
from congruence.fixtures import config_point, random_matrix, random_target
from congruence.witness import witness_full


def roundtrip(obj):
    return json.loads(ser.dumps(obj))


def test_scalar_encodings(Q):
    assert ser.scalar_to_json(Q("-3/4")) == "-3/4"
    assert ser.scalar_from_json(Q, "-3/4") == Q("-3/4")
    assert ser.scalar_from_json(Q, 5) == Q(5)
    F = FieldConfig.tower(5)
    r = sqrt(F(2))
    enc = roundtrip(ser.scalar_to_json(r))
    assert enc["level"] == 1
    assert ser.scalar_from_json(F, enc) == r


def test_config_roundtrip_keeps_tower():
    F = FieldConfig.tower(7)
    sqrt(F(3))
    G = ser.config_from_json(roundtrip(ser.config_to_json(F)))
    assert G.p == 7 and G.max_level == F.max_level
    assert [a.value for a in G.adjoined] == [a.value for a in F.adjoined]
    assert ser.config_from_json({"kind": "rational"}) is FieldConfig.rational()


def test_matrix_roundtrip(Q, F5, rng):
    for cfg in (Q, F5):
        M = random_matrix(cfg, 3, 4, rng)
        assert ser.matrix_from_json(cfg, roundtrip(ser.matrix_to_json(M))) == M
    assert ser.matrix_from_json(Q, [[1, "1/2"], [0, 3]]) == Matrix.from_rows(Q, [[1, "1/2"], [0, 3]])


def test_laurent_roundtrip(Q):
    a = LaurentPoly(Q, {-2: 3, 1: "1/5"})
    assert ser.poly_from_json(Q, roundtrip(ser.poly_to_json(a))) == a
    D = LaurentMatrix.monomial_diagonal(Q, [-1, 0, 2])
    assert ser.laurent_matrix_from_json(Q, roundtrip(ser.laurent_matrix_to_json(D))) == D


def test_infinity_certificate(F5):
    cert = tuple_rank(MatrixTuple.of([], config=F5))
    assert roundtrip(ser.certificate_to_json(cert))["value"] == "infinity"


def test_witness_payload_roundtrip(F5, rng):
    x = config_point(F5, 1, 1, 1, 28, rng)
    t = random_target(F5, 1, 1, 1, 1, rng)
    W = witness_full(x, t, seed=0)
    x2 = ser.point_from_json(F5, roundtrip(ser.point_to_json(x)))
    t2 = ser.target_from_json(F5, roundtrip(ser.target_to_json(t)))
    W2 = ser.curve_from_json(F5, roundtrip(ser.curve_to_json(W)))
    assert x2.sym == x.sym and x2.alt == x.alt and x2.col == x.col
    assert t2.sym == t.sym and t2.col == t.col
    assert W2.G == W.G and W2.det_certificate == W.det_certificate
    report = roundtrip(ser.report_to_json(W.report))
    assert report["passed"] is True


def test_dumps_is_stable(Q):
    obj = {"b": [ser.scalar_to_json(Q(1))], "a": 1}
    assert ser.dumps(obj) == ser.dumps(json.loads(ser.dumps(obj)))
    assert ser.dumps(obj).endswith("\n")
