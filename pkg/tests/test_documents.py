import json

import numpy as np
import pytest

from framecat.corpus import (boolean_frame, chain_frame, pair_groupoid,
                             parity_pair_groupoid)
from framecat.crm import pi_restriction_monoid
from framecat.documents import (ParseError, StructMorphism, WorkbenchDocument,
                                parse_document, serialize_document)
from framecat.functors import omega_object
from framecat.order import validate_frame
from framecat.quantale import validate_rqf
from framecat.topcat import validate_topcategory


def roundtrip(doc: WorkbenchDocument) -> WorkbenchDocument:
    return parse_document(serialize_document(doc))


def test_pair_groupoid_document():
    doc = WorkbenchDocument("topcategory", "pair2", pair_groupoid(2))
    back = roundtrip(doc)
    assert back.kind == "topcategory" and back.name == "pair2"
    assert back.obj.n == 4
    assert sorted(back.obj.cat.identities()) == [0, 3]
    assert back.obj.topology.is_discrete


def test_serialization_is_byte_stable():
    docs = [
        WorkbenchDocument("frame", "bool3", boolean_frame(3)),
        WorkbenchDocument("topcategory", "parity", parity_pair_groupoid()),
        WorkbenchDocument("rqf", "omega2", omega_object(pair_groupoid(2)).rqf),
    ]
    for doc in docs:
        text = serialize_document(doc)
        assert serialize_document(roundtrip(doc)) == text
        # canonical form sorts keys
        raw = json.loads(text)
        assert list(raw) == sorted(raw)


def test_parsed_objects_validate():
    doc = roundtrip(WorkbenchDocument("rqf", "omega2", omega_object(pair_groupoid(2)).rqf))
    assert validate_rqf(doc.obj).ok
    doc = roundtrip(WorkbenchDocument("frame", "chain5", chain_frame(5)))
    assert validate_frame(doc.obj).ok
    doc = roundtrip(WorkbenchDocument("topcategory", "parity", parity_pair_groupoid()))
    assert validate_topcategory(doc.obj).ok


def test_crm_document_roundtrip():
    s, _ = pi_restriction_monoid(omega_object(pair_groupoid(2)).rqf)
    back = roundtrip(WorkbenchDocument("crm", "i2", s))
    assert back.obj.n == 7
    assert (back.obj.mul == s.mul).all()


def test_morphism_document():
    q = omega_object(pair_groupoid(2)).rqf
    m = StructMorphism("rqf", q, q, np.arange(16, dtype=np.int64))
    back = roundtrip(WorkbenchDocument("morphism", "ident", m))
    assert back.obj.flavor == "rqf"
    assert list(back.obj.map) == list(range(16))


def test_functor_document():
    tc = pair_groupoid(2)
    m = StructMorphism("functor", tc, tc, np.array([3, 2, 1, 0], dtype=np.int64))
    back = roundtrip(WorkbenchDocument("functor", "swap", m))
    assert list(back.obj.map) == [3, 2, 1, 0]


def test_empty_category_document():
    from framecat.corpus import empty_category
    back = roundtrip(WorkbenchDocument("topcategory", "empty", empty_category()))
    assert back.obj.n == 0


def test_comp_entry_out_of_range_names_the_field():
    text = json.dumps({
        "kind": "category", "name": "bad",
        "payload": {"arrows": 4, "identities": [0, 3], "d": [0, 0, 3, 3],
                    "r": [0, 3, 0, 3], "comp": [[0, 0, 9]]}})
    with pytest.raises(ParseError) as exc:
        parse_document(text)
    assert "$.payload.comp[0][2]" in str(exc.value)


def test_syntax_error_carries_position():
    with pytest.raises(ParseError) as exc:
        parse_document('{"kind": "poset"')
    assert "line 1" in str(exc.value)


def test_unknown_kind_rejected():
    with pytest.raises(ParseError) as exc:
        parse_document('{"kind": "widget", "name": "x", "payload": {}}')
    assert "$.kind" in str(exc.value)


def test_wrong_arity_names_the_field():
    text = json.dumps({
        "kind": "poset", "name": "bad",
        "payload": {"n": 3, "leq": [[1, 1, 1], [0, 1], [0, 0, 1]]}})
    with pytest.raises(ParseError) as exc:
        parse_document(text)
    assert "$.payload.leq[1]" in str(exc.value)


def test_morphism_endpoint_kinds_must_agree():
    q = omega_object(pair_groupoid(2)).rqf
    from framecat.documents import payload_of
    text = json.dumps({
        "kind": "morphism", "name": "bad",
        "payload": {
            "source": {"kind": "rqf", "payload": payload_of("rqf", q)},
            "target": {"kind": "crm", "payload": {}},
            "map": list(range(16)),
        }})
    with pytest.raises(ParseError):
        parse_document(text)
