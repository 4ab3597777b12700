from __future__ import annotations

from fractions import Fraction

import pytest

from lsqlab.graphs import GraphError, hypercube
from lsqlab.clocked import full_flip_walk, generate_walk
from lsqlab.gridwalks import (
    GridWalkConfig,
    block_threaded_walk,
    grid_walk_integer,
    walk2d_improved,
)
from lsqlab.instances import (
    instance_from_json,
    instance_summary,
    load_instance,
    save_instance,
    verify_instance,
)


def roundtrip(inst, tmp_path):
    path = tmp_path / "inst.json"
    save_instance(inst, path)
    loaded = load_instance(path)
    save_instance(loaded, tmp_path / "again.json")
    assert (tmp_path / "again.json").read_bytes() == path.read_bytes()
    return loaded


def test_product_clocked_roundtrip(tmp_path):
    inst = generate_walk(hypercube(2, 3), hypercube(2, 4),
                         full_flip_walk(3), 7, seed=5)
    loaded = roundtrip(inst, tmp_path)
    assert loaded.walk == inst.walk
    assert loaded.fmap == inst.fmap
    assert loaded.end == inst.end
    assert loaded.T == inst.T


def test_grid_int_roundtrip(tmp_path):
    inst = grid_walk_integer(16, 2, 1, seed=4)
    loaded = roundtrip(inst, tmp_path)
    assert loaded.fmap == inst.fmap
    assert loaded.end == inst.end


def test_grid_block_roundtrip(tmp_path):
    inst = block_threaded_walk(GridWalkConfig(n=81, d=2, seed=3,
                                              r=Fraction(1, 2)))
    loaded = roundtrip(inst, tmp_path)
    assert loaded.fmap == inst.fmap
    assert loaded.end == inst.end
    assert loaded.cfg.r == Fraction(1, 2)


def test_walk2d_roundtrip(tmp_path):
    inst = walk2d_improved(243, seed=8)
    loaded = roundtrip(inst, tmp_path)
    assert loaded.fmap == inst.fmap
    assert loaded.end == inst.end


def test_unknown_kind_rejected():
    with pytest.raises(GraphError, match="unknown instance kind"):
        instance_from_json({"kind": "torus-walk"})
    with pytest.raises(GraphError):
        instance_from_json({})


def test_tampered_walk_rejected(tmp_path):
    inst = generate_walk(hypercube(2, 3), hypercube(2, 4),
                         full_flip_walk(3), 7, seed=5)
    data = inst.to_json()
    data["walk"][1] = list(data["walk"][0])  # a flip walk never stays
    with pytest.raises(GraphError):
        instance_from_json(data)


def test_verify_instance_passes_all_kinds():
    insts = [
        generate_walk(hypercube(2, 3), hypercube(2, 4),
                      full_flip_walk(3), 7, seed=1),
        grid_walk_integer(16, 2, 1, seed=1),
        block_threaded_walk(GridWalkConfig(n=81, d=2, seed=1,
                                           r=Fraction(1, 2))),
        walk2d_improved(243, seed=1),
    ]
    for inst in insts:
        ok, witness = verify_instance(inst)
        assert ok
        assert witness is None


def test_instance_summary_fields():
    inst = grid_walk_integer(16, 2, 1, seed=0)
    s = instance_summary(inst)
    assert s["kind"] == "grid-int-m"
    assert s["vertices"] == 256
    assert s["T"] == 7
    block = instance_summary(block_threaded_walk(
        GridWalkConfig(n=81, d=2, seed=0, r=Fraction(1, 2))))
    assert (block["alpha"], block["span"], block["L"]) == (9, 63, 567)
    twod = instance_summary(walk2d_improved(243, seed=0))
    assert (twod["side"], twod["block_side"], twod["steps"]) == (3, 81, 6)
