"""Defect surgeries: dimensions, counts, certificates, syndrome transport."""

import pytest

from quditlab import engine
from quditlab.defects import (apply_bombin_twist, apply_dislocation,
                              apply_ds_patch, apply_kitaev_twist,
                              apply_multiple_ising_twists,
                              apply_z4_patch_in_ds, couple_bilayer)
from quditlab.dsemion import build_doubled_semion
from quditlab.errors import DefectError, GeometryError, UnsupportedModelError
from quditlab.lattice import (build_bombin_lattice, build_toric_code,
                              evaluate_constraint, toric_string_operator)
from quditlab.pauli import commutation_exponent, from_terms, pauli_mul, single_site


def _assert_commuting(model):
    ops = [g.op for g in model.generators]
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            assert commutation_exponent(ops[i], ops[j]) == 0


def _assert_certificates(model, report):
    for cert in report.constraints_after:
        assert evaluate_constraint(model, cert).is_identity(up_to_phase=True)


def _kind_counts(report):
    out = {}
    for g in report.added:
        out[g.kind] = out.get(g.kind, 0) + 1
    return out


# ----------------------------------------------------------------------
# dislocations and Kitaev-lattice twists
# ----------------------------------------------------------------------

def test_dislocation_i():
    tc = build_toric_code(6, 6, 2)
    m, rep = apply_dislocation(tc, "i", 1, 1)
    assert len(rep.removed) == 6  # three stars, three plaquettes
    assert _kind_counts(rep) == {"fish": 3, "short-string": 2}
    assert (rep.dim_before, rep.dim_after) == (4, 4)
    assert len(m.constraints) == 1  # single merged trivial constraint
    _assert_commuting(m)
    _assert_certificates(m, rep)


def test_dislocation_ii():
    tc = build_toric_code(6, 6, 2)
    m, rep = apply_dislocation(tc, "ii", 0, 2)
    assert len(rep.removed) == len(rep.added) == 12
    assert (rep.dim_before, rep.dim_after) == (4, 2)
    _assert_certificates(m, rep)


def test_dislocation_needs_z2():
    with pytest.raises(UnsupportedModelError):
        apply_dislocation(build_toric_code(4, 4, 4), "i")
    with pytest.raises(DefectError):
        apply_dislocation(build_toric_code(6, 6, 2), "iii")


def test_kitaev_twist_dimensions_z_n():
    for N in (2, 3, 4):
        tc = build_toric_code(4, 4, N)
        m, rep = apply_kitaev_twist(tc, 0, 1, length=2, contractible=True)
        assert (rep.dim_before, rep.dim_after) == (N * N, N * N)
        _assert_commuting(m)
        m, rep = apply_kitaev_twist(tc, 0, 1, contractible=False)
        assert rep.dim_after == N
        _assert_commuting(m)


def test_kitaev_twist_matches_bombin_dimensions():
    # conjugation equivalence at the level of logical dimensions
    bomb = build_bombin_lattice(6, 8)
    tc = build_toric_code(6, 8, 2)
    _, rb = apply_bombin_twist(bomb, x0=2, y0=1, width=2)
    _, rk = apply_kitaev_twist(tc, 2, 1, length=3)
    assert rb.dim_after == rk.dim_after == 4
    _, rb = apply_bombin_twist(bomb, y0=1, contractible=False)
    _, rk = apply_kitaev_twist(tc, 0, 1, contractible=False)
    assert rb.dim_after == rk.dim_after == 2


def test_twist_region_overlap_rejected():
    tc = build_toric_code(6, 6, 2)
    m, _ = apply_kitaev_twist(tc, 0, 1, length=3)
    with pytest.raises(DefectError):
        apply_kitaev_twist(m, 2, 1, length=3)


def test_multiple_ising_twists():
    tc = build_toric_code(6, 6, 2)
    dims = {}
    for k in (0, 1, 2, 3):
        m, rep = apply_multiple_ising_twists(tc, k)
        dims[k] = rep.dim_after
        if k:
            _assert_certificates(m, rep)
    assert dims[0] == 4          # identity transformation
    assert dims[1] == 4          # constraint merge only
    assert dims[2] == 2 * dims[0]  # dimension doubles
    assert dims[3] == 16
    with pytest.raises(DefectError):
        apply_multiple_ising_twists(tc, 2, sites=[(0, 0), (1, 0)])


# ----------------------------------------------------------------------
# Bombin-lattice twists
# ----------------------------------------------------------------------

def test_bombin_twist_contractible_minimal():
    b = build_bombin_lattice(6, 8)
    m, rep = apply_bombin_twist(b, x0=2, y0=1, width=2)
    assert len(rep.removed) == 5
    assert _kind_counts(rep) == {"pentagon": 2, "parallelogram": 2}
    assert (rep.dim_before, rep.dim_after) == (4, 4)
    assert len(m.constraints) == 1
    _assert_commuting(m)
    _assert_certificates(m, rep)
    # pentagons carry one Y (a site with both X and Z content)
    for g in rep.added:
        ys = sum(1 for x, z in zip(g.op.x_exp, g.op.z_exp) if x and z)
        assert ys == (1 if g.kind == "pentagon" else 0)
        assert g.op.weight() == (5 if g.kind == "pentagon" else 4)
        assert g.op.order() == 2


def test_bombin_twist_wider_cut():
    b = build_bombin_lattice(6, 8)
    m, rep = apply_bombin_twist(b, x0=2, y0=1, width=3)
    assert len(rep.removed) == 6 and len(rep.added) == 5
    assert rep.dim_after == 4
    _assert_commuting(m)


def test_bombin_twist_noncontractible_parities():
    b = build_bombin_lattice(8, 8)
    dims = {}
    for mult in (1, 2, 3):
        m, rep = apply_bombin_twist(b, y0=1, contractible=False, multiplicity=mult)
        dims[mult] = rep.dim_after
        _assert_commuting(m)
        _assert_certificates(m, rep)
    assert dims[1] == 2   # one non-contractible twist halves the dimension
    assert dims[2] == 4   # two full twists cancel out
    assert dims[3] == 2   # odd counts drop to two again


def test_bombin_twist_validation():
    b = build_bombin_lattice(6, 6)
    with pytest.raises(UnsupportedModelError):
        apply_bombin_twist(build_toric_code(4, 4, 2))
    with pytest.raises(DefectError):
        apply_bombin_twist(b, width=1)
    with pytest.raises(DefectError):
        apply_bombin_twist(b, width=4)  # needs cols-4 >= width
    with pytest.raises(DefectError):
        apply_bombin_twist(b, contractible=False, multiplicity=4)


# ----------------------------------------------------------------------
# doubled-semion patches
# ----------------------------------------------------------------------

def test_ds_patch_contractible():
    tc = build_toric_code(4, 4, 4)
    m, rep = apply_ds_patch(tc, 1, 1, contractible=True)
    assert len(rep.removed) == 8
    assert _kind_counts(rep) == {"defect-fish": 4, "defect-plaquette": 4,
                                 "defect-short": 4}
    orders = sorted(g.op.symplectic_order() for g in rep.added)
    assert orders == [2] * 8 + [4] * 4
    # the quartet relation keeps the contractible-patch dimension at 16
    assert (rep.dim_before, rep.dim_after) == (16, 16)
    _assert_commuting(m)
    _assert_certificates(m, rep)


def test_ds_patch_ring():
    tc = build_toric_code(4, 4, 4)
    m, rep = apply_ds_patch(tc, y=1, contractible=False)
    assert rep.dim_after == 8  # one condensed-loop homology class absorbed
    _assert_commuting(m)
    _assert_certificates(m, rep)


def test_ds_patch_needs_z4():
    with pytest.raises(UnsupportedModelError):
        apply_ds_patch(build_toric_code(4, 4, 2))
    with pytest.raises(GeometryError):
        apply_ds_patch(build_toric_code(3, 3, 4), 0, 0)


def test_ds_patch_quartet_identity():
    # product of the four hop terms = A(center)^2 B(SW)^2: the relation the
    # constraint-volume bookkeeping must include
    tc = build_toric_code(4, 4, 4)
    _, rep = apply_ds_patch(tc, 1, 1)
    hops = [g.op for g in rep.added if g.kind == "defect-short"]
    prod = hops[0]
    for h in hops[1:]:
        prod = pauli_mul(prod, h)
    from quditlab.pauli import pauli_pow
    rhs = pauli_mul(pauli_pow(tc.generator("A(2,2)").op, 2),
                    pauli_pow(tc.generator("B(1,1)").op, 2))
    assert prod.x_exp == rhs.x_exp and prod.z_exp == rhs.z_exp


def test_z4_patch_in_ds():
    ds = build_doubled_semion(4, 4)
    m, rep = apply_z4_patch_in_ds(ds, 1, 1)
    assert len(rep.removed) == 8 + 12  # fish+plaquettes plus incident hops
    assert (rep.dim_before, rep.dim_after) == (4, 4)
    _assert_commuting(m)
    _assert_certificates(m.model, rep)
    with pytest.raises(UnsupportedModelError):
        apply_z4_patch_in_ds(build_toric_code(4, 4, 4))


def test_z4_patch_confined_vs_free_strings():
    ds, _ = apply_z4_patch_in_ds(build_doubled_semion(6, 6), 1, 1)
    geo = ds.geometry
    n = ds.n_sites
    # an e string strictly inside the patch: endpoint syndromes only
    inside = from_terms(4, n, [(geo.edge_index("h", 1, 1), 0, 1)])
    syn = engine.syndrome(ds, inside)
    assert set(syn.exponents) == {"TCA(1,1)", "TCA(2,1)"}
    # escaping strings light up hop terms along the way: linear energy growth
    e3 = from_terms(4, n, [(geo.edge_index("h", x, 1), 0, 1) for x in (1, 2, 3)])
    e4 = from_terms(4, n, [(geo.edge_index("h", x, 1), 0, 1) for x in (1, 2, 3, 4)])
    assert engine.excitation_energy(ds, e4) > engine.excitation_energy(ds, e3)


# ----------------------------------------------------------------------
# bilayer wormholes
# ----------------------------------------------------------------------

def test_bilayer_wormhole_i():
    a = build_toric_code(4, 4, 2)
    b = build_toric_code(4, 4, 2)
    m, rep = couple_bilayer(a, b, "i")
    assert len(rep.removed) == 4 and len(rep.added) == 2
    assert (rep.dim_before, rep.dim_after) == (16, 16)
    assert len(rep.constraints_after) == 2
    _assert_commuting(m)
    _assert_certificates(m, rep)


def test_bilayer_wormhole_ii():
    a = build_toric_code(4, 4, 2)
    b = build_toric_code(4, 4, 2)
    m, rep = couple_bilayer(a, b, "ii")
    assert (rep.dim_before, rep.dim_after) == (16, 32)
    assert len(rep.constraints_after) == 3
    _assert_commuting(m)
    _assert_certificates(m, rep)


def test_bilayer_validation():
    a = build_toric_code(4, 4, 2)
    with pytest.raises(UnsupportedModelError):
        couple_bilayer(a, build_toric_code(4, 6, 2), "i")
    with pytest.raises(UnsupportedModelError):
        couple_bilayer(a, build_toric_code(4, 4, 4), "i")
    with pytest.raises(DefectError):
        couple_bilayer(a, build_toric_code(4, 4, 2), "iii")
    with pytest.raises(DefectError):
        couple_bilayer(a, build_toric_code(4, 4, 2), "i", ((0, 0), (0, 0)))


def test_wormhole_ii_transports_flux_to_charge():
    a = build_toric_code(4, 4, 2)
    b = build_toric_code(4, 4, 2)
    m, _ = couple_bilayer(a, b, "ii", ((0, 0), (2, 2)))
    geo = m.geometry
    terms = [(geo.edge_index("h", 0, 1, 1), 1, 0),
             (geo.edge_index("h", 0, 2, 1), 1, 0)]      # flux leg in layer 2
    terms += [(geo.edge_index("h", 0, 0, 0), 0, 1),
              (geo.edge_index("h", 1, 0, 0), 0, 1)]     # charge leg in layer 1
    word = from_terms(2, m.n_sites, terms)
    syn = engine.syndrome(m, word)
    kinds = sorted(syn.kinds[g] for g in syn.exponents)
    assert kinds == ["plaquette-T2", "vertex-T1"]


# ----------------------------------------------------------------------
# syndrome transport across twist lines
# ----------------------------------------------------------------------

def test_em_condensed_on_twist_line():
    tc = build_toric_code(8, 8, 2)
    m, _ = apply_kitaev_twist(tc, 0, 2, length=3, contractible=True)
    geo = m.geometry
    n = m.n_sites

    def hop(x, y):
        return from_terms(2, n, [(geo.edge_index("h", x, y), 0, 1),
                                 (geo.edge_index("v", x + 1, y), 1, 0)])

    ending_on_line = pauli_mul(pauli_mul(hop(4, 2), hop(3, 2)), hop(2, 2))
    syn = engine.syndrome(m, ending_on_line)
    assert engine.excitation_energy(m, ending_on_line) == 2
    assert sorted(syn.kinds[g] for g in syn.exponents) == ["plaquette", "vertex"]
    free = pauli_mul(hop(4, 5), hop(3, 5))
    assert engine.excitation_energy(m, free) == 4


def test_twist_transport_swaps_and_restores_kinds():
    tc = build_toric_code(8, 8, 2)
    m1, _ = apply_kitaev_twist(tc, 0, 2, contractible=False)
    m2, _ = apply_kitaev_twist(m1, 0, 5, contractible=False)
    geo = m2.geometry
    n = m2.n_sites
    e_leg = toric_string_operator(m2, [(3, 0), (3, 1), (3, 2)], "e")
    m_mid = toric_string_operator(m2, [(3, 2), (3, 3), (3, 4)], "m")
    once = pauli_mul(e_leg, m_mid)
    syn1 = engine.syndrome(m2, once)
    assert sorted(syn1.kinds[g] for g in syn1.exponents) == ["plaquette", "vertex"]

    m_cross = toric_string_operator(m2, [(3, 4), (3, 5)], "m")
    dress = single_site(2, n, geo.edge_index("h", 3, 5), z=1)
    e_up = toric_string_operator(m2, [(4, 5), (4, 6), (4, 7)], "e")
    twice = pauli_mul(pauli_mul(pauli_mul(once, m_cross), dress), e_up)
    syn2 = engine.syndrome(m2, twice)
    assert sorted(syn2.kinds[g] for g in syn2.exponents) == ["vertex", "vertex"]


def test_bombin_shear_transport_swaps_colors():
    b = build_bombin_lattice(8, 8)
    m, _ = apply_bombin_twist(b, y0=3, contractible=False)
    geo = m.geometry
    n = m.n_sites
    below = single_site(2, n, geo.vertex_index(2, 3), z=1)
    crossed = pauli_mul(below, single_site(2, n, geo.vertex_index(4, 4), z=1))
    syn = engine.syndrome(m, crossed)
    cells = sorted(syn.kinds[g] for g in syn.exponents)
    assert cells == ["cell-dark", "cell-light"]  # the pair changed color class

    m2, _ = apply_bombin_twist(b, y0=3, contractible=False, multiplicity=2)
    word = crossed
    word = pauli_mul(word, single_site(2, n, geo.vertex_index(5, 5), z=1))
    word = pauli_mul(word, single_site(2, n, geo.vertex_index(7, 6), z=1))
    syn2 = engine.syndrome(m2, word)
    cells2 = sorted(syn2.kinds[g] for g in syn2.exponents)
    assert cells2 == ["cell-light", "cell-light"]  # restored after two crossings
