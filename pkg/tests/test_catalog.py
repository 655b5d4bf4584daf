"""Anyon-theory tables: fusion, twists, modular data, Majorana braiding."""

from fractions import Fraction

import pytest

from quditlab.catalog import (MajoranaWord, QDim, builtin_theory, fuse,
                              is_isomorphic, majorana_braid, modular_data,
                              monodromy, product_theory, s_unitary,
                              turn_to_str, twist_value)
from quditlab.errors import UnsupportedModelError

ALL_BUILTINS = [("toric", None), ("z_n", 2), ("z_n", 3), ("z_n", 4),
                ("semion", None), ("doubled_semion", None), ("ising", None),
                ("ising_like_twist", None)]


def test_all_builtins_validate():
    for name, n in ALL_BUILTINS:
        builtin_theory(name, n).validate()


def test_unknown_name():
    with pytest.raises(UnsupportedModelError):
        builtin_theory("fibonacci")


def test_toric_fusion_and_dims():
    t = builtin_theory("toric")
    assert fuse(t, "e", "m") == {"em": 1}
    assert fuse(t, "e", "em") == {"m": 1}
    assert fuse(t, "em", "em") == {"1": 1}
    assert all(t.dim[a] == QDim(1) for a in t.labels)
    assert t.total_dim == QDim(2)


def test_unit_law_everywhere():
    for name, n in ALL_BUILTINS:
        t = builtin_theory(name, n)
        for a in t.labels:
            assert fuse(t, a, t.unit) == {a: 1}


def test_ising_like_twist_fusion():
    t = builtin_theory("ising_like_twist")
    assert fuse(t, "sig+", "sig+") == {"1": 1, "eps": 1}
    assert fuse(t, "sig+", "sig-") == {"e": 1, "m": 1}
    assert fuse(t, "sig+", "eps") == {"sig+": 1}
    assert fuse(t, "sig+", "e") == {"sig-": 1}
    assert fuse(t, "sig+", "m") == {"sig-": 1}
    assert twist_value(t, "sig+") == Fraction(1, 4)
    assert twist_value(t, "sig-") == Fraction(3, 4)


def test_twist_values():
    z4 = builtin_theory("z_n", 4)
    assert twist_value(z4, "e2m2") == 0          # i^4 = 1
    assert twist_value(z4, "em") == Fraction(1, 4)
    z2 = builtin_theory("z_n", 2)
    assert twist_value(z2, "em") == Fraction(1, 2)  # (-1)^{pq}
    ds = builtin_theory("doubled_semion")
    assert twist_value(ds, "s") == Fraction(1, 4)
    assert twist_value(ds, "sbar") == Fraction(3, 4)
    assert twist_value(ds, "ssbar") == 0
    ising = builtin_theory("ising")
    assert twist_value(ising, "sigma") == Fraction(1, 16)
    assert twist_value(ising, "psi") == Fraction(1, 2)
    assert builtin_theory("semion").twist["s"] == Fraction(1, 4)
    for name, n in ALL_BUILTINS:
        assert twist_value(builtin_theory(name, n), "1") == 0


def test_ising_dimension_is_root_two():
    ising = builtin_theory("ising")
    assert ising.dim["sigma"] == QDim(0, 1)
    assert str(ising.dim["sigma"]) == "2^{1/2}"
    assert ising.dim["sigma"] * ising.dim["sigma"] == QDim(2)


def test_monodromy():
    z4 = builtin_theory("z_n", 4)
    # c_{e,e2m2} o c_{e2m2,e} = theta(e3m2) = -1
    assert monodromy(z4, "e", "e2m2") == Fraction(1, 2)
    assert monodromy(z4, "e", "1") == 0
    z2 = builtin_theory("z_n", 2)
    assert monodromy(z2, "e", "m") == Fraction(1, 2)
    with pytest.raises(UnsupportedModelError):
        monodromy(builtin_theory("ising"), "sigma", "sigma")


def test_monodromy_is_bicharacter():
    for name, n in (("z_n", 2), ("z_n", 3), ("z_n", 4), ("doubled_semion", None)):
        t = builtin_theory(name, n)
        for a in t.labels:
            for b in t.labels:
                for c in t.labels:
                    (bc,) = fuse(t, b, c)
                    lhs = monodromy(t, a, bc)
                    rhs = (monodromy(t, a, b) + monodromy(t, a, c)) % 1
                    assert lhs == rhs


def test_toric_modular_data_matches_tabulated_matrix():
    t = builtin_theory("toric")
    s, t_diag = modular_data(t)
    expected = [[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, 1, -1], [1, -1, -1, 1]]
    for i in range(4):
        for j in range(4):
            mag, turn = s[i][j]
            value = mag * QDim(2)  # strip the 1/D normalization
            sign = 1 if turn == 0 else -1
            assert value == QDim(1) and sign == expected[i][j]
    assert [turn_to_str(x) for x in t_diag] == ["1", "1", "1", "-1"]


def test_s_row_zero_proportional_to_dims():
    for name, n in ALL_BUILTINS:
        t = builtin_theory(name, n)
        try:
            s, _ = modular_data(t)
        except UnsupportedModelError:
            continue
        for j, b in enumerate(t.labels):
            mag, turn = s[0][j]
            assert turn == 0
            assert mag == t.dim[b] / t.total_dim


def test_s_unitary():
    assert s_unitary(builtin_theory("toric"))
    assert s_unitary(builtin_theory("doubled_semion"))
    assert s_unitary(builtin_theory("ising"))


def test_no_s_matrix_for_twist_theory():
    with pytest.raises(UnsupportedModelError):
        modular_data(builtin_theory("ising_like_twist"))


def test_twist_theory_is_not_doubled_ising():
    ilt = builtin_theory("ising_like_twist")
    doubled = product_theory(builtin_theory("ising"), builtin_theory("ising"))
    doubled.validate()
    assert len(doubled.labels) == 9
    assert not is_isomorphic(ilt, doubled)
    # quantum-dimension obstruction: D = 2*sqrt(2) versus 4
    assert ilt.total_dim == QDim(0, 2)
    assert doubled.total_dim == QDim(4)
    assert ilt.total_dim != doubled.total_dim
    # sigma+ x sigma+ differs from sigma+ x sigma-: no relabeling can merge them
    assert fuse(ilt, "sig+", "sig+") != fuse(ilt, "sig+", "sig-")


def test_condensed_vs_builtin_isomorphism_helper():
    assert is_isomorphic(builtin_theory("toric"), builtin_theory("z_n", 2))
    assert not is_isomorphic(builtin_theory("toric"), builtin_theory("doubled_semion"))


def test_turn_to_str():
    assert turn_to_str(Fraction(0)) == "1"
    assert turn_to_str(Fraction(1, 4)) == "i"
    assert turn_to_str(Fraction(1, 2)) == "-1"
    assert turn_to_str(Fraction(3, 4)) == "-i"
    assert turn_to_str(Fraction(1, 16)) == "e^{2*pi*i*1/16}"


def test_majorana_normal_ordering():
    w = MajoranaWord.from_factors(4, [2, 0])
    assert w.factors == (0, 2) and w.sign == -1
    assert MajoranaWord.from_factors(4, [1, 1]).factors == ()
    w = MajoranaWord.from_factors(4, [3, 1, 3])
    assert w.factors == (1,) and w.sign == -1  # c3 c1 c3 = -c1


def test_majorana_braid():
    c0 = MajoranaWord.from_factors(4, [0])
    assert majorana_braid(c0, 0).factors == (1,)
    c3 = MajoranaWord.from_factors(4, [3])
    assert majorana_braid(c3, 0) == c3  # untouched generators are fixed
    twice = majorana_braid(majorana_braid(c0, 0), 0)
    assert twice.factors == (0,) and twice.sign == -1
    with pytest.raises(ValueError):
        majorana_braid(c0, 3)


def test_majorana_pair_charge_flips_under_double_exchange():
    pair = MajoranaWord.from_factors(4, [0, 1])
    braided = majorana_braid(majorana_braid(pair, 1), 1)
    assert braided.factors == (0, 1) and braided.sign == -pair.sign
