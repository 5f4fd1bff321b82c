import json

import numpy as np
import pytest

from fibretool.cxhyp import embed_fuchsian
from fibretool.repfile import (
    RepFileError,
    embedded_from_text,
    embedded_to_text,
    load_embedded,
    load_rep,
    rep_from_text,
    rep_to_text,
    save_embedded,
    save_rep,
)

from reps import deformed, seed_h


def test_round_trip_exact(tmp_path):
    rep = deformed(8, 3)
    path = tmp_path / "r.json"
    save_rep(rep, path, {"seed": 3})
    back, meta = load_rep(path)
    assert meta == {"seed": 3}
    assert back.kind == "G" and back.n == 8
    for a, b in zip(rep.images, back.images):
        assert a.canonical().entries() == b.entries()
    text = path.read_text()
    save_rep(back, tmp_path / "s.json", meta)
    assert (tmp_path / "s.json").read_text() == text


def test_text_layout():
    text = rep_to_text(seed_h(6))
    obj = json.loads(text)
    assert obj["format"] == "fibretool-rep" and obj["version"] == 1
    assert len(obj["matrices"]) == 6
    # one matrix per line
    assert sum(1 for line in text.splitlines() if line.strip().startswith("[")) == 6
    assert all(m[0] > 0 or (m[0] == 0 and m[1] > 0) for m in obj["matrices"])


def mutate(text, **changes):
    obj = json.loads(text)
    obj.update(changes)
    return json.dumps(obj)


@pytest.mark.parametrize(
    "change,fragment",
    [
        ({"version": 2}, "version"),
        ({"format": "other"}, "format"),
        ({"kind": "X"}, "kind"),
        ({"n": 7}, "kind"),
        ({"matrices": "no"}, "matrices"),
        ({"metadata": []}, "metadata"),
    ],
)
def test_rejects_bad_fields(change, fragment):
    with pytest.raises(RepFileError, match=fragment):
        rep_from_text(mutate(rep_to_text(seed_h(6)), **change))


def test_rejects_bad_matrices():
    text = rep_to_text(seed_h(6))
    obj = json.loads(text)
    obj["matrices"][2] = [1.0, 0.0, 0.0, 0.5]
    with pytest.raises(RepFileError, match=r"matrices\[3\]"):
        rep_from_text(json.dumps(obj))
    obj["matrices"][2] = [1.0, 0.0, 0.0]
    with pytest.raises(RepFileError, match=r"matrices\[3\]"):
        rep_from_text(json.dumps(obj))
    obj["matrices"][2] = [1.0, 0.0, "x", 1.0]
    with pytest.raises(RepFileError):
        rep_from_text(json.dumps(obj))
    obj["matrices"] = obj["matrices"][:5]
    with pytest.raises(RepFileError):
        rep_from_text(json.dumps(obj))


def test_rejects_malformed_json(tmp_path):
    with pytest.raises(RepFileError, match="line"):
        rep_from_text("{\n  nope\n}")
    with pytest.raises(RepFileError):
        load_rep(tmp_path / "missing.json")
    with pytest.raises(RepFileError):
        rep_from_text("[1, 2]")


def test_embedded_round_trip(tmp_path):
    rep3 = embed_fuchsian(seed_h(6))
    path = tmp_path / "e.json"
    save_embedded(rep3, path, {"k": 1})
    back, meta = load_embedded(path)
    assert meta == {"k": 1}
    for a, b in zip(rep3.images, back.images):
        assert np.array_equal(a, b)
    assert embedded_to_text(back, meta) == path.read_text()


def test_embedded_rejects():
    text = embedded_to_text(embed_fuchsian(seed_h(6)))
    obj = json.loads(text)
    obj["matrices"][0] = [[[0, 0]] * 3] * 3
    with pytest.raises(RepFileError, match="singular"):
        embedded_from_text(json.dumps(obj))
    obj["matrices"] = obj["matrices"][:2]
    with pytest.raises(RepFileError):
        embedded_from_text(json.dumps(obj))
    with pytest.raises(RepFileError, match="format"):
        embedded_from_text(rep_to_text(seed_h(6)))
