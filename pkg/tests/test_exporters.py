import json

from src.exporters import JsonExporter, fibration_payload, jsonable, sset_payload
from src.simpset import shape


def test_jsonable_labels():
    assert jsonable({("0", "1"): ("a", 2)}) == {"('0', '1')": ["a", 2]}
    assert jsonable(None) is None


def test_json_exporter_writes_sorted_keys(tmp_path):
    target = tmp_path / "out.json"
    JsonExporter({"b": 1, "a": ("x",)}).export(str(target))
    text = target.read_text(encoding="utf-8")
    assert text.index('"a"') < text.index('"b"')
    assert json.loads(text) == {"a": ["x"], "b": 1}


def test_sset_payload_has_census():
    assert sset_payload(shape("K"))["census"] == [2, 3, 2]


def test_fibration_payload_is_json(p0):
    json.dumps(jsonable(fibration_payload(p0)))
