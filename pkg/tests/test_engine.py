"""Smith-normal-form stabilizer arithmetic against brute-force oracles."""

import random

import pytest

from quditlab import engine, lattice
from quditlab.engine import (GeneratorMatrix, brute_force_subgroup_order,
                             is_member, logical_dimension, subgroup_order,
                             syndrome, excitation_energy, assert_sign_consistent)
from quditlab.errors import InvalidModelError
from quditlab.lattice import (Generator, StabilizerModel, build_toric_code,
                              toric_string_operator)
from quditlab.pauli import from_terms, identity, pauli_mul, single_site


def test_subgroup_order_trivial_and_full():
    zero = GeneratorMatrix(3, ((0, 0, 0, 0),), 4)
    assert subgroup_order(zero) == 1
    full = GeneratorMatrix(3, tuple(tuple(1 if i == j else 0 for j in range(4))
                                    for i in range(4)), 4)
    assert subgroup_order(full) == 3 ** 4


def test_subgroup_order_toric_code():
    for rows, cols in ((2, 2), (3, 2), (3, 3)):
        m = build_toric_code(rows, cols, 2)
        gm = GeneratorMatrix.from_ops([g.op for g in m.generators])
        assert subgroup_order(gm) == 2 ** (2 * rows * cols - 2)


def test_subgroup_order_matches_brute_force():
    rng = random.Random(17)
    for _ in range(40):
        N = rng.choice([2, 3, 4])
        n = rng.randint(1, 3)
        k = rng.randint(1, 4)
        rows = tuple(tuple(rng.randrange(N) for _ in range(2 * n)) for _ in range(k))
        gm = GeneratorMatrix(N, rows, 2 * n)
        assert subgroup_order(gm) == brute_force_subgroup_order(gm)


def test_logical_dimension_values():
    assert logical_dimension(build_toric_code(2, 2, 2)) == 4
    assert logical_dimension(build_toric_code(3, 4, 2)) == 4
    assert logical_dimension(build_toric_code(3, 3, 4)) == 16
    assert logical_dimension(lattice.build_bombin_lattice(4, 4)) == 4


def test_logical_dimension_rejects_noncommuting():
    bad = StabilizerModel(
        lattice.LatticeGeometry(2, 2, "edges"), 2,
        (Generator("x", "vertex", single_site(2, 8, 0, x=1), 2),
         Generator("z", "vertex", single_site(2, 8, 0, z=1), 2)))
    with pytest.raises(InvalidModelError):
        logical_dimension(bad)


def test_logical_dimension_invariances():
    m = build_toric_code(2, 3, 3)
    base = logical_dimension(m)
    gens = list(m.generators)
    # reordering
    reordered = StabilizerModel(m.geometry, m.modulus, tuple(reversed(gens)))
    assert logical_dimension(reordered) == base
    # replace a generator by itself times another
    merged = list(gens)
    merged[0] = Generator("merged", gens[0].kind,
                          pauli_mul(gens[0].op, gens[1].op), gens[0].order)
    assert logical_dimension(StabilizerModel(m.geometry, m.modulus, tuple(merged))) == base
    # site relabeling (reverse site order)
    n = m.n_sites
    relabeled = tuple(
        Generator(g.gid, g.kind,
                  type(g.op)(g.op.modulus, tuple(reversed(g.op.x_exp)),
                             tuple(reversed(g.op.z_exp)), g.op.phase_exp), g.order)
        for g in gens)
    assert logical_dimension(StabilizerModel(m.geometry, m.modulus, relabeled)) == base


def test_is_member():
    m = build_toric_code(3, 3, 2)
    for g in m.generators[:4]:
        assert is_member(m, g.op)
    # product of all plaquettes is the identity, hence a member
    prod = identity(2, m.n_sites)
    for g in m.generators:
        if g.kind == "plaquette":
            prod = pauli_mul(prod, g.op)
    assert prod.is_identity(up_to_phase=True)
    assert is_member(m, prod)
    # a non-contractible string commutes with everything but is not a member
    loop = toric_string_operator(m, [(0, y) for y in range(3)] + [(0, 0)], "e")
    assert not engine.syndrome(m, loop)
    assert not is_member(m, loop)
    # a detectable error is not a member either
    assert not is_member(m, single_site(2, m.n_sites, 0, x=1))


def test_syndrome_examples():
    m = build_toric_code(3, 3, 2)
    assert not syndrome(m, identity(2, m.n_sites))
    geo = m.geometry
    x_err = single_site(2, m.n_sites, geo.edge_index("h", 1, 1), x=1)
    syn = syndrome(m, x_err)
    assert len(syn.violated_plaquettes) == 2 and not syn.violated_vertices
    z_err = single_site(2, m.n_sites, geo.edge_index("h", 1, 1), z=1)
    syn = syndrome(m, z_err)
    assert len(syn.violated_vertices) == 2 and not syn.violated_plaquettes


def test_syndrome_is_homomorphism():
    rng = random.Random(23)
    m = build_toric_code(2, 3, 4)
    n = m.n_sites
    for _ in range(20):
        e1 = from_terms(4, n, [(rng.randrange(n), rng.randrange(4), rng.randrange(4))])
        e2 = from_terms(4, n, [(rng.randrange(n), rng.randrange(4), rng.randrange(4))])
        s12 = syndrome(m, pauli_mul(e1, e2))
        s1 = syndrome(m, e1)
        s2 = syndrome(m, e2)
        for g in m.generators:
            combined = (s1.exponents.get(g.gid, 0) + s2.exponents.get(g.gid, 0)) % g.order
            assert s12.exponents.get(g.gid, 0) == combined


def test_excitation_energy_string_independence():
    m = build_toric_code(6, 6, 2)
    geo = m.geometry
    for L in (1, 2, 3, 4):
        # X string along a dual path keeps exactly two endpoint excitations
        path = [(1 + k, 2) for k in range(L + 1)]
        err = toric_string_operator(m, path, "m")
        assert excitation_energy(m, err) == 2


def test_sign_consistency_of_builtin_models():
    assert_sign_consistent(build_toric_code(2, 2, 2))

def test_fast_order_path_matches_snf_reference():
    rng = random.Random(77)
    for _ in range(30):
        N = rng.choice([2, 3, 4, 6])
        n = rng.randint(1, 3)
        rows = tuple(tuple(rng.randrange(N) for _ in range(2 * n))
                     for _ in range(rng.randint(1, 5)))
        gm = GeneratorMatrix(N, rows, 2 * n)
        assert subgroup_order(gm) == engine.subgroup_order_snf(gm)


def test_sign_consistency_bombin_and_ds():
    from quditlab.dsemion import build_doubled_semion
    from quditlab.lattice import build_bombin_lattice
    assert_sign_consistent(build_bombin_lattice(2, 2))
    assert_sign_consistent(build_doubled_semion(2, 2), bound=40000)
