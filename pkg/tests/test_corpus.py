import json

import numpy as np
import pytest

from nearvec.corpus import DEFAULT_CORPUS, CorpusSpec, registry_space, run_corpus
from nearvec.errors import EmptyCorpusError, ParseError
from nearvec.formats import nearfield_to_json
from nearvec.nearfield import dickson_p2


@pytest.mark.parametrize(
    "name,size",
    [("dickson25-self", 25), ("dickson25-sq", 625), ("dickson9-3", 729), ("prime-5-3", 125),
     ("twisted-5-1-3", 25), ("twisted-5-1-1-3", 125), ("twisted-7-1-5", 49)],
)
def test_registry_names(name, size):
    V = registry_space(name)
    assert V.size == size and V.name == name


@pytest.mark.parametrize("bad", ["dickson24-self", "prime-x-1", "nonsense", "twisted-5"])
def test_registry_rejects(bad):
    with pytest.raises(ParseError):
        registry_space(bad)


def test_default_corpus_round_trips_through_space_json():
    spec = CorpusSpec.default()
    assert [e["id"] for e in spec.entries] == list(DEFAULT_CORPUS)
    expanded = CorpusSpec.from_json(json.loads(json.dumps(spec.expanded().to_json())))
    for a, b in zip(spec.entries, expanded.entries):
        V, W = spec.build(a), expanded.build(b)
        assert np.array_equal(V.add, W.add) and np.array_equal(V.act, W.act)


def test_corpus_parsing_errors():
    with pytest.raises(ParseError):
        CorpusSpec.from_json([{"id": "x"}])
    with pytest.raises(ParseError):
        CorpusSpec.from_json({"entries": [3]})
    assert CorpusSpec.from_json(["prime-3-1"]).entries[0]["registry"] == "prime-3-1"


def test_empty_corpus():
    with pytest.raises(EmptyCorpusError) as e:
        run_corpus(CorpusSpec([]), out=lambda s: None)
    assert e.value.code == "empty-corpus"


def test_small_corpus_passes():
    lines = []
    ok, results = run_corpus(CorpusSpec.from_json(["prime-3-2", "twisted-5-1-3"]), lines.append)
    assert ok
    assert lines[-1] == f"PASS {len(results)}/{len(results)}"


def test_corrupted_nearfield_entry_fails_naming_axiom():
    data = nearfield_to_json(dickson_p2(3))
    data["mul"][4][5] = data["mul"][4][6]
    lines = []
    ok, results = run_corpus(CorpusSpec.from_json([{"id": "bad9", "nearfield": data}]), lines.append, "nvs-corpus --spec c.json")
    assert not ok
    assert lines[-2].startswith("FAIL bad9 axioms: axiom ")
    assert "mul-group" in lines[-2]
    assert lines[-1] == "repro: nvs-corpus --spec c.json --only bad9"


def test_corrupted_space_entry_fails():
    V = registry_space("prime-3-2")
    from nearvec.formats import space_to_json

    data = space_to_json(V)
    data = {"kind": "table", "scalar": data["scalar"], "add": V.add.tolist(), "action": V.act.tolist()}
    data["action"][2][1] = data["action"][2][2]
    lines = []
    ok, _ = run_corpus(CorpusSpec.from_json([{"id": "badspace", "space": data}]), lines.append)
    assert not ok
    assert lines[-2].startswith("FAIL badspace space-axioms")
