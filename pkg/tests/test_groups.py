import json

import numpy as np
import pytest

from projspec.groups import (
    CayleyTable,
    GroupRep,
    build_group,
    coset_enumeration,
    cyclic_cayley,
    dihedral_cayley,
    free_group_region,
    gl3_reps,
    h0_containment_test,
    koopman_tau_values,
    koopman_truncation,
    load_group,
    markov_operator,
    parse_word,
    regular_rep,
    symmetric3_cayley,
)
from projspec.pencil import char_poly


@pytest.mark.parametrize("n", range(1, 9))
def test_dihedral_order_and_associativity(n):
    c = dihedral_cayley(n)
    assert c.order == 2 * n
    assert c.is_associative()


def test_cyclic_and_s3():
    assert cyclic_cayley(12).order == 12
    s3 = symmetric3_cayley()
    assert s3.order == 6 and s3.is_associative()
    # S3 is not abelian
    assert not np.array_equal(s3.table, s3.table.T)


def test_coset_enumeration_with_coincidences():
    # <a, b | a^3, b^2, abab> is S3 again, reached through coincidences
    table, words = coset_enumeration(2, [((0, 3),), ((1, 2),), ((0, 1), (1, 1), (0, 1), (1, 1))])
    assert len(table) == 6 and words[0] == ()


def test_cayley_table_validation():
    with pytest.raises(ValueError):
        CayleyTable([[0, 1], [0, 1]], (1,))
    z4 = cyclic_cayley(4)
    involution = next(k for k in range(1, 4) if z4.table[k, k] == 0)
    with pytest.raises(ValueError, match="generate"):
        CayleyTable(z4.table, (involution,))


def test_regular_rep_is_permutation_rep():
    r = regular_rep(dihedral_cayley(3))
    for m in r.matrices:
        assert np.allclose(m @ m.T, np.eye(6))
        assert np.allclose(m @ m, np.eye(6))


def test_group_rep_checks_relations():
    with pytest.raises(ValueError, match="relation"):
        GroupRep(("a",), (np.diag([1.0, 1j]),), ("a^2",))
    with pytest.raises(ValueError, match="unitary"):
        GroupRep(("a",), (np.diag([2.0, 1.0]),))


def test_parse_word():
    assert parse_word("g1 g2^-1 g3^2", ("g1", "g2", "g3")) == ((0, 1), (1, -1), (2, 2))
    with pytest.raises(ValueError):
        parse_word("x", ("g1",))


def test_gl3_char_polys_coincide():
    plus, minus = gl3_reps()
    assert char_poly(plus.pencil()).allclose(char_poly(minus.pencil()), 1e-12)
    assert plus.d == 2


def test_h0_tests():
    assert h0_containment_test(regular_rep(dihedral_cayley(4)))
    assert h0_containment_test(regular_rep(cyclic_cayley(5)), mode="sampling")
    assert not h0_containment_test(gl3_reps()[0])
    assert not h0_containment_test(gl3_reps()[0], mode="sampling")


def test_markov_operator_norm():
    m = markov_operator(regular_rep(dihedral_cayley(4)))
    assert np.linalg.norm(m, 2) == pytest.approx(1.0)


def test_koopman_level_structure():
    r0 = koopman_truncation(0)
    assert r0.d == 1 and np.allclose(r0.matrices[0], 1)
    r3 = koopman_truncation(3)
    assert r3.d == 8
    with pytest.raises(ValueError):
        koopman_truncation(13)


def test_koopman_tau_values_level1():
    vals = np.sort(koopman_tau_values(1, 0.7, -1.3))
    assert np.allclose(vals, [-1, 1])


def test_free_group_region():
    assert not free_group_region((1, -0.5, -0.5), 2)
    assert free_group_region(np.exp(2j * np.pi * np.arange(3) / 3), 2)
    with pytest.raises(ValueError):
        free_group_region((1, 1), 2)


def test_build_group_kinds(tmp_path):
    assert build_group({"kind": "dihedral", "N": 4})[0].d == 8
    assert len(build_group({"kind": "gl3z3"})) == 2
    assert build_group({"kind": "koopman-dinfty", "L": 2})[0].d == 4
    custom = {"kind": "custom-cayley", "table": cyclic_cayley(3).table.tolist(), "generators": [1]}
    assert build_group(custom)[0].d == 3
    path = tmp_path / "g.json"
    path.write_text(json.dumps({"kind": "cyclic", "N": 6, "labels": ["s"]}))
    assert load_group(path)[0].labels == ("s",)
    with pytest.raises(ValueError):
        build_group({"kind": "dihedral", "N": 2, "bogus": 1})
    with pytest.raises(ValueError):
        build_group({"kind": "heisenberg"})
