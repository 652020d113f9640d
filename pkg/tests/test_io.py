import json

import numpy as np
import pytest

from aca import OptimizerConfig, fit
from aca import io as aio


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


def test_header_detection(tmp_path):
    t = aio.read_csv(write(tmp_path / "a.csv", "height,weight\n1.5,2\n-3e-2,4\n"))
    assert t.names == ["height", "weight"]
    assert np.array_equal(t.values, [[1.5, 2.0], [-0.03, 4.0]])
    t = aio.read_csv(write(tmp_path / "b.csv", "1,2,3\n4,5,6\n"))
    assert t.names == ["X1", "X2", "X3"]
    assert t.values.shape == (2, 3)


def test_header_only_is_empty(tmp_path):
    t = aio.read_csv(write(tmp_path / "c.csv", "a,b\n"))
    assert t.values.shape == (0, 2)


@pytest.mark.parametrize("text, line", [("a,b\n1,2\n3\n", 3), ("1,2\n3,x\n", 2),
                                        ("1,2\n3,nan\n", 2), ("a,b\n1,2\n\n4,inf\n", 4)])
def test_malformed_rows_name_the_line(tmp_path, text, line):
    with pytest.raises(aio.DataError, match=f"line {line}:"):
        aio.read_csv(write(tmp_path / "bad.csv", text))


def test_float_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    vals = np.r_[rng.standard_normal(50), 1e-300, -5e300, 0.1, 1 / 3]
    aio.write_csv(tmp_path / "f.csv", ["v"], vals[:, None])
    raw = (tmp_path / "f.csv").read_bytes()
    assert b"\r" not in raw
    assert np.array_equal(aio.read_csv(tmp_path / "f.csv").values[:, 0], vals)


@pytest.fixture
def model():
    rng = np.random.default_rng(4)
    return fit(rng.standard_normal((40, 3)), 2, "apd",
               OptimizerConfig(budget_k=200, restarts=4, seed=17))


def test_model_round_trip_is_byte_identical(tmp_path, model):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    aio.save_model(model, a)
    loaded = aio.load_model(a)
    aio.save_model(loaded, b)
    assert a.read_bytes() == b.read_bytes()
    assert np.array_equal(loaded.components, model.components)
    assert np.array_equal(loaded.min_depths, model.min_depths)
    assert loaded.config == model.config
    assert loaded.notion == model.notion
    doc = json.loads(a.read_text())
    assert list(doc) == list(aio.MODEL_KEYS)
    assert doc["seed"] == 17 and doc["depth_notion"] == "apd"


def edit(tmp_path, model, change):
    doc = aio.model_to_dict(model)
    change(doc)
    p = tmp_path / "m.json"
    p.write_text(json.dumps(doc))
    return p


def test_model_validation(tmp_path, model):
    with pytest.raises(aio.DataError, match="missing key.*anchor_rows"):
        aio.load_model(edit(tmp_path, model, lambda d: d.pop("anchor_rows")))
    with pytest.raises(aio.DataError, match="unknown key.*comment"):
        aio.load_model(edit(tmp_path, model, lambda d: d.update(comment="x")))
    with pytest.raises(aio.DataError, match="unit"):
        aio.load_model(edit(tmp_path, model,
                            lambda d: d["components"][0].__setitem__(0, 2.0)))

    def skew(d):
        d["components"][1] = list(d["components"][0])

    with pytest.raises(aio.DataError, match="orthogonal"):
        aio.load_model(edit(tmp_path, model, skew))
    with pytest.raises(aio.DataError, match="format_version"):
        aio.load_model(edit(tmp_path, model, lambda d: d.update(format_version=2)))
    with pytest.raises(aio.DataError):
        aio.load_model(edit(tmp_path, model, lambda d: d["config"].update(budget_k=0)))
    bad = tmp_path / "x.json"
    bad.write_text("{not json")
    with pytest.raises(aio.DataError):
        aio.load_model(bad)
