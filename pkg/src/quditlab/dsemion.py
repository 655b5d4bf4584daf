"""Doubled-semion Pauli stabilizer model on Z_4 edge qudits.

Stabilizer content (frozen convention, pinned by the behavioral contract:
mutual commutation, C_e order 2, spin values i/-i/1, logical dimension 4):

* vertex term  A_v  = (toric vertex star at v) * (toric plaquette NE of v),
  a 6-edge operator of order 4 ("fish" footprint);
* plaquette term B_p = (toric plaquette)^2, order 2;
* edge terms  C_e, order 2, one per edge: the boson hopping operators

      C_h(x,y) = Z^2 on h(x,y)  *  X^2 on v(x+1,y)
      C_v(x,y) = Z^2 on v(x,y)  *  X^2 on h(x,y+1)

String operators.  s and sbar live on oriented dual-lattice paths; the
per-dual-step segments (reverse steps use the adjoint) are

      step p(x,y) -> p(x+1,y):  X      on v(x+1,y),  Z^b on h(x+1,y+1)
      step p(x,y) -> p(x,y+1):  X^-1   on h(x,y+1),  Z^b on v(x+1,y+1)

with b = +1 for s and b = -1 for sbar; this is the labeling that extracts
theta(s) = +i.  The ss-bar string is orientation-free: Z^2 on every edge of
a lattice path.  All three commute with every stabilizer away from their
endpoints.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import GeometryError, PathError, UnsupportedModelError
from .lattice import Generator, LatticeGeometry, StabilizerModel
from .pauli import (PauliOp, from_terms, identity, pauli_adjoint, pauli_mul)

__all__ = [
    "DSModel",
    "StringOperator",
    "build_doubled_semion",
    "string_operator",
    "extract_topological_spin",
    "logical_operators",
]

ANYONS = ("1", "s", "sbar", "ssbar")


@dataclass(frozen=True)
class DSModel:
    """Doubled-semion stabilizer model; duck-types as a StabilizerModel."""

    model: StabilizerModel

    @property
    def geometry(self) -> LatticeGeometry:
        return self.model.geometry

    @property
    def modulus(self) -> int:
        return self.model.modulus

    @property
    def generators(self):
        return self.model.generators

    @property
    def constraints(self):
        return self.model.constraints

    @property
    def n_sites(self) -> int:
        return self.model.n_sites

    @property
    def family(self) -> str:
        return self.model.family

    def generator(self, gid: str) -> Generator:
        return self.model.generator(gid)


@dataclass(frozen=True)
class StringOperator:
    """A realized anyon string: its type, its path, and its Pauli word."""

    anyon: str
    path: tuple
    op: PauliOp


def ds_generators(geo: LatticeGeometry, layer: int = 0, tag: str = ""):
    """The four doubled-semion generator families on an edge-placement torus."""
    n = geo.n_sites
    gens = []
    for y in range(geo.rows):
        for x in range(geo.cols):
            star = [(s, e, 0) for s, e in geo.vertex_star(x, y, layer)]
            plaq = [(s, 0, e) for s, e in geo.plaquette_boundary(x, y, layer)]
            fish = from_terms(4, n, star + plaq)
            bsq = from_terms(4, n, [(s, 0, 2 * e) for s, e in geo.plaquette_boundary(x, y, layer)])
            ch = from_terms(4, n, [(geo.edge_index("h", x, y, layer), 0, 2),
                                   (geo.edge_index("v", x + 1, y, layer), 2, 0)])
            cv = from_terms(4, n, [(geo.edge_index("v", x, y, layer), 0, 2),
                                   (geo.edge_index("h", x, y + 1, layer), 2, 0)])
            gens.append(Generator(f"{tag}A({x},{y})", "vertex", fish, 4))
            gens.append(Generator(f"{tag}B({x},{y})", "plaquette", bsq, 2))
            gens.append(Generator(f"{tag}C(h,{x},{y})", "edge", ch, 2))
            gens.append(Generator(f"{tag}C(v,{x},{y})", "edge", cv, 2))
    return gens


def build_doubled_semion(rows: int, cols: int) -> DSModel:
    """Doubled-semion model on a cols x rows torus; logical dimension 4."""
    if rows < 2 or cols < 2:
        raise GeometryError("doubled semion needs rows, cols >= 2")
    geo = LatticeGeometry(rows, cols, "edges")
    gens = ds_generators(geo)
    constraints = (
        # product of all vertex terms = product of all toric stars and plaquettes
        {g.gid: 1 for g in gens if g.kind == "vertex"},
        {g.gid: 1 for g in gens if g.kind == "plaquette"},
    )
    model = StabilizerModel(geo, 4, tuple(gens), constraints, "doubled-semion")
    return DSModel(model)


# frozen segment signs: (alpha, beta, alpha', beta') = (1, 1, -1, 1)
def _segment(geo: LatticeGeometry, n: int, direction: str, x: int, y: int,
             sbar: bool) -> PauliOp:
    b = -1 if sbar else 1
    if direction == "+x":
        terms = [(geo.edge_index("v", x + 1, y), 1, 0),
                 (geo.edge_index("h", x + 1, y + 1), 0, b)]
    else:  # "+y"
        terms = [(geo.edge_index("h", x, y + 1), -1, 0),
                 (geo.edge_index("v", x + 1, y + 1), 0, b)]
    return from_terms(4, n, terms)


def _dual_steps(geo: LatticeGeometry, path):
    for (x0, y0), (x1, y1) in zip(path, path[1:]):
        dx = (x1 - x0) % geo.cols
        dy = (y1 - y0) % geo.rows
        if dx == 1 and dy == 0:
            yield "+x", x0, y0, False
        elif dx == geo.cols - 1 and dy == 0:
            yield "+x", x1, y1, True
        elif dx == 0 and dy == 1:
            yield "+y", x0, y0, False
        elif dx == 0 and dy == geo.rows - 1:
            yield "+y", x1, y1, True
        else:
            raise PathError(f"dual path step {(x0, y0)} -> {(x1, y1)} is not adjacent")


def _lattice_edges(geo: LatticeGeometry, path):
    for (x0, y0), (x1, y1) in zip(path, path[1:]):
        dx = (x1 - x0) % geo.cols
        dy = (y1 - y0) % geo.rows
        if dx == 1 and dy == 0:
            yield geo.edge_index("h", x0, y0)
        elif dx == geo.cols - 1 and dy == 0:
            yield geo.edge_index("h", x1, y1)
        elif dx == 0 and dy == 1:
            yield geo.edge_index("v", x0, y0)
        elif dx == 0 and dy == geo.rows - 1:
            yield geo.edge_index("v", x1, y1)
        else:
            raise PathError(f"path step {(x0, y0)} -> {(x1, y1)} is not adjacent")


def string_operator(ds: DSModel, anyon: str, path) -> StringOperator:
    """Realize an anyon string on a path.

    s and sbar take an oriented dual-lattice path (plaquette sequence);
    ssbar takes an unoriented lattice path (vertex sequence).
    """
    geo = ds.geometry
    n = ds.n_sites
    if len(path) < 2:
        raise PathError("string path needs at least two nodes")
    if anyon in ("s", "sbar"):
        acc = identity(4, n)
        for direction, x, y, reverse in _dual_steps(geo, path):
            seg = _segment(geo, n, direction, x, y, anyon == "sbar")
            acc = pauli_mul(acc, pauli_adjoint(seg) if reverse else seg)
        return StringOperator(anyon, tuple(path), acc)
    if anyon == "ssbar":
        terms = [(e, 0, 2) for e in _lattice_edges(geo, path)]
        return StringOperator(anyon, tuple(path), from_terms(4, n, terms))
    if anyon == "1":
        return StringOperator("1", tuple(path), identity(4, n))
    raise UnsupportedModelError(f"unknown anyon type {anyon!r}")


def extract_topological_spin(ds: DSModel, plaquette, anyon: str, reach: int = 3) -> int:
    """Topological spin from the ordered triple product of strings meeting a plaquette.

    Three strings of the same type approach the plaquette from the left,
    from below, and from the right; exchanging the product order costs
    exactly theta(a).  Returns k with theta = i^k.
    """
    geo = ds.geometry
    if not (2 < geo.cols and 2 < geo.rows):
        raise GeometryError("spin extraction needs room for three incoming paths")
    px, py = plaquette
    reach = min(reach, geo.cols - 1, geo.rows - 1)
    left = [((px - d) % geo.cols, py) for d in range(reach, 0, -1)] + [(px, py)]
    below = [(px, (py - d) % geo.rows) for d in range(reach, 0, -1)] + [(px, py)]
    right = [((px + d) % geo.cols, py) for d in range(reach, 0, -1)] + [(px, py)]
    w1 = string_operator(ds, anyon, left).op
    w2 = string_operator(ds, anyon, below).op
    w3 = string_operator(ds, anyon, right).op
    fwd = pauli_mul(pauli_mul(w1, pauli_adjoint(w2)), w3)
    rev = pauli_mul(pauli_mul(w3, pauli_adjoint(w2)), w1)
    if fwd.x_exp != rev.x_exp or fwd.z_exp != rev.z_exp:
        raise PathError("triple products disagree beyond a phase")
    delta = (fwd.phase_exp - rev.phase_exp) % 8
    if delta % 2:
        raise PathError("spin is not a power of i")
    return delta // 2 % 4


def logical_operators(ds: DSModel) -> dict:
    """Canonical logical strings: meridian/longitude s and sbar loops.

    Returns {"X1": W_alpha^s, "X2": W_alpha^sbar, "Z1": W_beta^s,
    "Z2": W_beta^sbar}; each commutes with every stabilizer, each square is
    a stabilizer, and Z_i anticommutes with X_i.
    """
    geo = ds.geometry
    merid = [(x, 0) for x in range(geo.cols)] + [(0, 0)]
    longi = [(0, y) for y in range(geo.rows)] + [(0, 0)]
    return {
        "X1": string_operator(ds, "s", merid),
        "X2": string_operator(ds, "sbar", merid),
        "Z1": string_operator(ds, "s", longi),
        "Z2": string_operator(ds, "sbar", longi),
    }
