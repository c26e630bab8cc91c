from groupcoop.records import OutputRecord, from_json, to_csv, to_text


def _record():
    return OutputRecord("predict", {"n": 4}, ["a", "b"], [["x", 1.23456], ["yy", True]], {"k": 0.5}, seed=3)


def test_json_roundtrip():
    rec = _record()
    assert from_json(rec.render("json")) == rec


def test_csv_precision():
    assert to_csv(_record(), precision=2).splitlines() == ["a,b", "x,1.23", "yy,yes"]


def test_text_layout():
    lines = to_text(_record()).splitlines()
    assert lines[:3] == ["# predict", "# seed: 3", "k: 0.5000"]
    assert lines[-2:] == [" x  1.2346", "yy     yes"]


def test_unknown_format():
    import pytest

    with pytest.raises(ValueError):
        _record().render("xml")
