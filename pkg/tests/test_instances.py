import json
from pathlib import Path

import pytest

from tdlc_entropy.errors import InvalidInstance
from tdlc_entropy.instances import dump_instance, instance_from_json, load_instance
from tdlc_entropy.padic import MatrixAutomorphism
from tdlc_entropy.shift import ShiftAutomorphism

INSTANCES = Path(__file__).resolve().parent.parent / "instances"

PADIC = {
    "universe": {"kind": "padic", "p": 5, "dim": 2},
    "automorphism": {"kind": "matrix", "rows": [["0", "1/5"], ["1", "0"]]},
}


@pytest.mark.parametrize("path", sorted(INSTANCES.glob("*.json")), ids=lambda p: p.stem)
def test_shipped_instances_round_trip(path):
    inst = load_instance(path)
    again = instance_from_json(json.loads(dump_instance(inst)))
    assert again.to_json() == inst.to_json()
    assert dump_instance(again) == dump_instance(inst)


def test_missing_subgroup_defaults_to_the_standard_one():
    inst = instance_from_json(PADIC)
    assert not inst.subgroup_given
    assert inst.subgroup == inst.universe.standard_subgroup()
    assert isinstance(inst.automorphism, MatrixAutomorphism)
    assert inst.op == "entropy"


def test_shift_instance():
    inst = instance_from_json({
        "universe": {"kind": "shift", "m": 4},
        "automorphism": {"kind": "shift", "k": -2, "unit": 3},
        "subgroup": {"kind": "cylinder", "zero_coords": [0, 1]},
    })
    assert isinstance(inst.automorphism, ShiftAutomorphism)
    assert inst.automorphism.k == -2
    assert inst.subgroup == inst.universe.window(0, 1)


@pytest.mark.parametrize("mutate", [
    lambda d: d.update(universe={"kind": "padic", "p": 4, "dim": 2}),
    lambda d: d.update(universe={"kind": "torus"}),
    lambda d: d.update(automorphism={"kind": "matrix", "rows": [["1/0", "0"], ["0", "1"]]}),
    lambda d: d.update(automorphism={"kind": "matrix", "rows": [["1", "2"], ["2", "4"]]}),
    lambda d: d.update(automorphism={"kind": "matrix", "rows": [["1"]]}),
    lambda d: d.update(op="integrate"),
    lambda d: d.update(params={"window": 0}),
    lambda d: d.update(params={"colour": "red"}),
    lambda d: d.update(params={"candidates": "all"}),
    lambda d: d.update(subgroup={"kind": "lattice", "basis": [["1", "1"], ["1", "1"]]}),
    lambda d: d.pop("universe"),
    lambda d: d.update(subgroup={"kind": "lattice", "bases": [["1", "0"], ["0", "1"]]}),
    lambda d: d.update(automorphism={"kind": "matrix", "rows": [["1", "0"], ["0", "1"]], "row": []}),
    lambda d: d.update(extra=1),
    lambda d: d.update(params={"window": 1}),
    lambda d: d.update(params={"algorithms": ["guess"]}),
    lambda d: d.update(params={"suite": "astrology"}),
], ids=["bad-prime", "unknown-kind", "zero-denominator", "singular", "wrong-size", "bad-op",
        "bad-window", "unknown-param", "bad-candidates", "rank-deficient", "no-universe", "misspelt-subgroup-field",
        "misspelt-automorphism-field", "unknown-top-level", "window-one", "bad-algorithm", "bad-suite"])
def test_invalid_instances(mutate):
    data = json.loads(json.dumps(PADIC))
    mutate(data)
    with pytest.raises(InvalidInstance):
        instance_from_json(data)


def test_floats_and_bad_files_are_rejected(tmp_path):
    f = tmp_path / "float.json"
    f.write_text('{"universe": {"kind": "padic", "p": 5, "dim": 1}, '
                 '"automorphism": {"kind": "matrix", "rows": [[0.2]]}}')
    with pytest.raises(InvalidInstance, match="floats"):
        load_instance(f)
    (tmp_path / "broken.json").write_text("{")
    with pytest.raises(InvalidInstance):
        load_instance(tmp_path / "broken.json")
    with pytest.raises(InvalidInstance):
        load_instance(tmp_path / "missing.json")
    with pytest.raises(InvalidInstance):
        instance_from_json([1, 2])


def test_misspelt_cylinder_field_is_rejected():
    with pytest.raises(InvalidInstance, match="zero"):
        instance_from_json({
            "universe": {"kind": "product", "factors": [{"kind": "padic", "p": 2, "dim": 1}, {"kind": "shift", "m": 2}]},
            "automorphism": {"kind": "product", "factors": [{"kind": "matrix", "rows": [["2"]]},
                                                            {"kind": "shift", "k": 1}]},
            "subgroup": {"kind": "product", "factors": [{"kind": "lattice", "basis": [["1"]]},
                                                        {"kind": "cylinder", "zero": [0]}]},
        })
