import pytest

from tangleweb.planar import (PlanarDiagram, PlanarError, planar_to_word,
                              word_to_planar)
from tangleweb.tangle import parse_word
from tangleweb.tensor import evaluate

from conftest import random_word, seeded


def test_circle_counts_as_loop():
    p = word_to_planar(parse_word("tangle 0 -> 0 / cup / cap"))
    assert p.loops == 1
    assert p.vertex_count() == 0


def test_bubble_two_vertices_and_bigon_face():
    p = word_to_planar(parse_word("tangle 1 -> 1 / w / m"))
    assert p.vertex_count() == 2
    assert sorted(len(f) for f in p.internal_faces()) == [2]


def test_h_word_no_internal_face():
    p = word_to_planar(parse_word("tangle 2 -> 2 / m / w"))
    assert p.vertex_count() == 2
    assert p.internal_faces() == []


def test_lollipop_face():
    p = word_to_planar(parse_word("tangle 0 -> 1 / cup / m"))
    assert [len(f) for f in p.internal_faces()] == [1]


def test_crossing_rejected():
    with pytest.raises(PlanarError):
        word_to_planar(parse_word("tangle 2 -> 2 / x"))


def test_slice_order_irrelevant():
    w1 = parse_word("tangle 4 -> 0 / cap,id,id / cap")
    w2 = parse_word("tangle 4 -> 0 / id,id,cap / cap")
    assert word_to_planar(w1) == word_to_planar(w2)


def test_mirror_encodes_differently():
    # a 3-vertex tree [3] -> [3] and its mirror image
    w = parse_word("tangle 3 -> 3 / m,id / w,id / id,m / id,w")
    mirror = parse_word("tangle 3 -> 3 / id,m / id,w / m,id / w,id")
    a, b = word_to_planar(w), word_to_planar(mirror)
    assert a.canonical_encoding() != b.canonical_encoding()


def test_encoding_golden():
    # determinism contract: these strings are load-bearing for golden files
    p = word_to_planar(parse_word("tangle 2 -> 2 / m / w"))
    assert p.canonical_encoding() == b"2>2|o0|t0:N0,N1,t1,b0,b1"
    c = word_to_planar(parse_word("tangle 0 -> 0 / cup / cap"))
    assert c.canonical_encoding() == b"0>0|o1|"


def test_nonplanar_rotation_rejected():
    # the crossing pairing {1,3},{2,4} cannot embed in the disk
    d = PlanarDiagram(4, 0)
    hs = []
    for i in range(4):
        h = d.new_halfedge()
        d.set_top(i, h)
        hs.append(h)
    d.pair(hs[0], hs[2])
    d.pair(hs[1], hs[3])
    with pytest.raises(PlanarError):
        d.check_valid()


def test_roundtrip_examples(all_algebras):
    texts = [
        "tangle 2 -> 2 / m / w",
        "tangle 0 -> 0 / cup / cap",
        "tangle 3 -> 0 / id,w,id / m,m / cap",
        "tangle 2 -> 2 / cap / cup",
        "tangle 0 -> 4 / cup / id,cup,id",
        "tangle 5 -> 1 / id,cap,id,id / m,id / m",
        "tangle 0 -> 0 / cup / w,w / id,cap,id / cap / cup / cap",
    ]
    for txt in texts:
        w = parse_word(txt)
        p = word_to_planar(w)
        w2 = planar_to_word(p)
        for alg in all_algebras:
            assert evaluate(w, alg) == evaluate(w2, alg), (txt, alg.case)


def test_roundtrip_random(all_algebras):
    rng = seeded(31)
    for _ in range(60):
        w = random_word(rng, max_slices=6, max_strands=5)
        p = word_to_planar(w)
        w2 = planar_to_word(p)      # self-checks re-trace equality
        for alg in all_algebras[:2]:
            assert evaluate(w, alg) == evaluate(w2, alg)
        assert evaluate(w, all_algebras[2]) == evaluate(w2, all_algebras[2])


def test_components_and_json():
    p = word_to_planar(parse_word("tangle 2 -> 2 / cap / cup"))
    comps = p.components()
    assert len(comps) == 2
    obj = p.to_json_obj()
    assert obj["boundary_top"] == 2 and obj["boundary_bottom"] == 2
    assert len(obj["edges"]) == 2
