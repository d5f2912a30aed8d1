from fractions import Fraction

import pytest

from tangleweb.basis import riordan
from tangleweb.centralizer import (BudgetError, brauer_compose, brauer_diagrams,
                                   brauer_e, brauer_identity, brauer_map,
                                   brauer_sigma, centralizer_basis, matching_word,
                                   matrix_model, structure_constants)
from tangleweb.oracle import invariant_dim
from tangleweb.rewrite import eval_diagram, normalize
from tangleweb.tensor import TensorMap, evaluate


def find_basis_index(table, pred):
    hits = [k for k, d in enumerate(table.basis) if pred(d)]
    assert len(hits) == 1, hits
    return hits[0]


def test_dim3_n2_table(dim3):
    table = structure_constants(dim3, 2)
    assert len(table.basis) == riordan(4) == 3
    assert table.check_identity()
    assert table.check_associative()
    cupcap = find_basis_index(
        table, lambda d: d.vertex_count() == 0
        and sorted(sorted(cb) for _, cb in d.components())
        == [[("b", 0), ("b", 1)], [("t", 0), ("t", 1)]])
    assert table.table[(cupcap, cupcap)] == {cupcap: Fraction(3)}


def test_dim7_n2_table(dim7):
    table = structure_constants(dim7, 2)
    assert len(table.basis) == 4
    assert table.check_identity()
    assert table.check_associative()
    hvert = find_basis_index(
        table, lambda d: d.vertex_count() == 2 and all(
            any(r[0] == "t" for r in cb) and any(r[0] == "b" for r in cb)
            for cv, cb in d.components() if cv) and len(d.components()) == 1
        and _separates_tops(d))
    assert table.table[(hvert, hvert)] == {hvert: Fraction(-6)}


def _separates_tops(d):
    # the vertical tree: one vertex holds both top legs
    for vid, triple in d.rot.items():
        kinds = {d.loc[d.pairing[h]][0] for h in triple}
        if kinds == {"t", "v"}:
            return True
    return False


def test_kap_n2_table(kap):
    table = structure_constants(kap, 2)
    hvert = find_basis_index(table, lambda d: d.vertex_count() == 2)
    assert table.table[(hvert, hvert)] == {hvert: Fraction(1)}


def test_basis_sizes_n3(dim3, kap):
    for alg in (dim3, kap):
        assert len(centralizer_basis(alg, 3)) == riordan(6) == 15


def test_budget_guard(dim7, dim3):
    with pytest.raises(BudgetError):
        structure_constants(dim7, 4)
    with pytest.raises(BudgetError):
        structure_constants(dim3, 5)


def test_brauer_abstract_algebra():
    n = 3
    diags = brauer_diagrams(n)
    assert len(diags) == 15
    e = brauer_identity(n)
    for d in diags:
        assert brauer_compose(d, e, n) == (d, 0)
        assert brauer_compose(e, d, n) == (d, 0)
    ei = brauer_e(n, 0)
    prod, loops = brauer_compose(ei, ei, n)
    assert prod == ei and loops == 1
    s0, s1 = brauer_sigma(n, 0), brauer_sigma(n, 1)
    lhs = brauer_compose(brauer_compose(s0, s1, n)[0], s0, n)
    rhs = brauer_compose(brauer_compose(s1, s0, n)[0], s1, n)
    assert lhs == rhs     # braid relation


def test_matching_word_realizes_diagrams(dim3):
    n = 3
    for d in brauer_diagrams(n):
        w = matching_word(n, d)
        assert w.n_in == w.n_out == n
        evaluate(w, dim3)     # arity-consistent and evaluable


def test_brauer_map_parameters(dim3, kap):
    _, _, delta3, rep3 = brauer_map(dim3, 3)
    assert delta3 == 3
    assert rep3["homomorphism"] and rep3["e_squared"]
    assert rep3["bijective"] and rep3["image_rank"] == 15
    _, _, deltak, repk = brauer_map(kap, 3)
    assert deltak == -1
    assert repk["homomorphism"] and repk["bijective"] and repk["image_rank"] == 15


def test_brauer_identity_maps_to_identity(dim3):
    n = 2
    out = normalize(matching_word(n, brauer_identity(n)), dim3)
    (d, c), = list(out)
    assert c == 1 and d.vertex_count() == 0
    comps = sorted(sorted(cb) for _, cb in d.components())
    assert comps == [[("b", 0), ("t", 0)], [("b", 1), ("t", 1)]]


def test_matrix_model_dim7_n2(dim7):
    rep = matrix_model(dim7, 2)
    assert rep["basis_size"] == 4
    assert rep["independent"] and rep["structure_match"] and rep["equivariant"]
    # rank 4 equals the oracle's invariant dimension for V^(x)4
    assert rep["basis_size"] == invariant_dim(dim7, 4)


def test_matrix_model_3dim_n3(dim3, kap):
    for alg in (dim3, kap):
        rep = matrix_model(alg, 3)
        assert rep["basis_size"] == 15
        assert rep["independent"] and rep["structure_match"]
        assert rep["equivariant"] and rep["identity"] and rep["associative"]


def test_kap_example_map(kap):
    # the centralizer element sending u (x) v (x) w to
    # sum_i u (x) ((v x w) x y_i) (x) x_i, built directly from dual bases,
    # equals the evaluation of the basis diagram with blocks {1,1'} and
    # {2,3,3',2'}
    from tangleweb.algebra import dual_bases
    from tangleweb.basis import build_normalized
    db = dual_bases(kap)
    d = kap.dim
    entries = {}
    for u in range(d):
        for v in range(d):
            for w in range(d):
                for i in range(d):
                    vw = kap.times_vec({v: Fraction(1)}, {w: Fraction(1)})
                    out_vec = kap.times_vec(vw, db.v[i])
                    for a, c in out_vec.items():
                        for b, cx in db.u[i].items():
                            key = ((u, a, b), (u, v, w))
                            val = entries.get(key, Fraction(0)) + c * cx
                            if val:
                                entries[key] = val
                            elif key in entries:
                                del entries[key]
    direct = TensorMap(kap, 3, 3, entries)
    diagram = build_normalized(3, 3, ((0, 5), (1, 2, 3, 4)))
    assert eval_diagram(diagram, kap) == direct
