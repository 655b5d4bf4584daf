"""Exact linear algebra over Z_N for stabilizer groups.

Group order, logical dimension and membership are computed from the Smith
normal form of integer matrices.  N is not assumed prime (Z_4 is not a
field), so all reasoning is over Z: the subgroup of Z_N^{2n} generated by
the rows of G has order N^{2n} / prod(diag SNF [G; N*I]).  Phases are
ignored for order and membership; the built-in models are sign-consistent
by construction and a brute-force check asserts so on small instances.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidModelError, ShapeError
from .pauli import PauliOp, commutation_exponent, identity, pauli_mul

__all__ = [
    "GeneratorMatrix",
    "Syndrome",
    "smith_normal_form",
    "subgroup_order",
    "logical_dimension",
    "is_member",
    "syndrome",
    "excitation_energy",
    "brute_force_subgroup_order",
]


@dataclass(frozen=True)
class GeneratorMatrix:
    """Integer matrix, one row per generator, columns (x-block | z-block) mod N."""

    modulus: int
    rows: tuple
    columns: int

    @classmethod
    def from_ops(cls, ops, modulus: int = None, sites: int = None) -> "GeneratorMatrix":
        ops = list(ops)
        if ops:
            modulus = ops[0].modulus
            sites = ops[0].sites
        if modulus is None or sites is None:
            raise ShapeError("empty generator list needs explicit modulus and sites")
        rows = []
        for op in ops:
            if op.modulus != modulus or op.sites != sites:
                raise ShapeError("generator register mismatch")
            rows.append(tuple(op.x_exp) + tuple(op.z_exp))
        return cls(modulus, tuple(rows), 2 * sites)

    def row_of(self, op: PauliOp) -> tuple:
        if 2 * op.sites != self.columns:
            raise ShapeError("operator register mismatch")
        return tuple(op.x_exp) + tuple(op.z_exp)


def smith_normal_form(rows, columns, track_right: bool = False):
    """Diagonalize an integer matrix by unimodular row/column operations.

    Returns the list of nonzero diagonal entries (not necessarily in divisor
    order, which no caller needs), and, if ``track_right`` is set, the column
    transform V with  original_matrix @ V  column-equivalent to the diagonal.
    """
    m = [list(r) for r in rows]
    nrows = len(m)
    v = [[int(i == j) for j in range(columns)] for i in range(columns)] if track_right else None

    def col_op(j, k, factor):
        for r in m:
            r[j] += factor * r[k]
        if v is not None:
            for r in v:
                r[j] += factor * r[k]

    def col_swap(j, k):
        for r in m:
            r[j], r[k] = r[k], r[j]
        if v is not None:
            for r in v:
                r[j], r[k] = r[k], r[j]

    diag = []
    top = 0
    left = 0
    while top < nrows and left < columns:
        # locate the smallest-magnitude nonzero pivot at or below/right of (top,left)
        pivot = None
        best = None
        for i in range(top, nrows):
            for j in range(left, columns):
                a = m[i][j]
                if a and (best is None or abs(a) < best):
                    best = abs(a)
                    pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        m[top], m[pi] = m[pi], m[top]
        if pj != left:
            col_swap(left, pj)
        while True:
            p = m[top][left]
            dirty = False
            for i in range(top + 1, nrows):
                if m[i][left]:
                    q = m[i][left] // p
                    if q:
                        for j in range(left, columns):
                            m[i][j] -= q * m[top][j]
                    if m[i][left]:
                        m[top], m[i] = m[i], m[top]
                        dirty = True
                        break
            if dirty:
                continue
            for j in range(left + 1, columns):
                if m[top][j]:
                    q = m[top][j] // p
                    if q:
                        col_op(j, left, -q)
                    if m[top][j]:
                        col_swap(left, j)
                        dirty = True
                        break
            if not dirty:
                break
        entry = m[top][left]
        diag.append(abs(entry))
        top += 1
        left += 1
    return (diag, v) if track_right else diag


def _stacked(gens: GeneratorMatrix):
    n2 = gens.columns
    rows = [tuple(e % gens.modulus for e in r) for r in gens.rows]
    rows += [tuple(gens.modulus if j == i else 0 for j in range(n2)) for i in range(n2)]
    return rows


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _egcd(a, b):
    if b == 0:
        return a, 1, 0
    d, s, t = _egcd(b, a % b)
    return d, t, s - (a // b) * t


def lattice_index(rows, modulus, columns) -> int:
    """[Z^columns : L] for the lattice L spanned by ``rows`` and N Z^columns.

    Column-wise gcd triangularization with every entry kept reduced mod N;
    the annihilator (N/d) * pivot is re-inserted after each column so the
    result equals the diagonal product of the Smith normal form of the
    stacked matrix [rows; N I] (cross-checked in the tests), at a fraction
    of the cost.
    """
    N = modulus
    active = [[e % N for e in r] for r in rows if any(e % N for e in r)]
    index = 1
    for col in range(columns):
        nz = [r for r in active if r[col]]
        rest = [r for r in active if not r[col]]
        if not nz:
            index *= N
            continue
        # gcd-combine rows until a single nonzero entry remains in this column
        while len(nz) > 1:
            nz.sort(key=lambda r: r[col])
            base = nz[0]
            out = [base]
            for r in nz[1:]:
                q = r[col] // base[col]
                new = [(a - q * b) % N for a, b in zip(r, base)]
                if new[col]:
                    out.append(new)
                elif any(new):
                    rest.append(new)
            nz = out
        pivot = nz[0]
        g = pivot[col]
        d, a, _ = _egcd(g, N)
        index *= d
        prow = [(a * v) % N for v in pivot]
        ann = [(N // d) * v % N for v in prow]
        if any(ann):
            rest.append(ann)
        active = rest
    return index


def subgroup_order(gens: GeneratorMatrix) -> int:
    """Order of the subgroup of Z_N^{2n} generated by the rows."""
    n2 = gens.columns
    prod = lattice_index(gens.rows, gens.modulus, n2)
    total = gens.modulus ** n2
    assert total % prod == 0
    return total // prod


def subgroup_order_snf(gens: GeneratorMatrix) -> int:
    """Reference path: the same order from the Smith normal form of [G; N I]."""
    n2 = gens.columns
    diag = smith_normal_form(_stacked(gens), n2)
    prod = 1
    for d in diag:
        prod *= d
    total = gens.modulus ** n2
    assert total % prod == 0
    return total // prod


def logical_dimension(model) -> int:
    """N^sites / |stabilizer group|; requires pairwise-commuting generators."""
    ops = [g.op for g in model.generators]
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            if commutation_exponent(ops[i], ops[j]):
                raise InvalidModelError(
                    f"generators {model.generators[i].gid} and "
                    f"{model.generators[j].gid} do not commute")
    gens = GeneratorMatrix.from_ops(ops, model.modulus, model.n_sites)
    order = subgroup_order(gens)
    total = model.modulus ** model.n_sites
    if total % order:
        raise InvalidModelError("stabilizer order does not divide Hilbert dimension")
    return total // order


def is_member(model, op: PauliOp) -> bool:
    """True iff op lies in the stabilizer group up to phase.

    Operators that fail to commute with some generator are detectable errors,
    not members; they return False without raising.
    """
    for g in model.generators:
        if commutation_exponent(g.op, op):
            return False
    gens = GeneratorMatrix.from_ops([g.op for g in model.generators],
                                    model.modulus, model.n_sites)
    n = gens.modulus
    diag, v = smith_normal_form(_stacked(gens), gens.columns, track_right=True)
    target = list(gens.row_of(op))
    # w = target @ V must be divisible entrywise by the SNF diagonal
    for j in range(gens.columns):
        w = sum(target[i] * v[i][j] for i in range(gens.columns))
        d = diag[j] if j < len(diag) else 0
        if d == 0:
            if w:
                return False
        elif w % d:
            return False
    return True


@dataclass(frozen=True)
class Syndrome:
    """Measured eigenvalue exponents, one entry per violated generator.

    Exponents are normalized to the generator's declared order: generator g
    of order r on error E picks up eigenvalue exp(2*pi*i*s/r) with
    s = commutation_exponent(g, E) * r / N mod r.  Unviolated generators are
    omitted from ``exponents``.
    """

    exponents: dict = field(default_factory=dict)
    kinds: dict = field(default_factory=dict)

    def violated(self, kind_prefix: str = None):
        if kind_prefix is None:
            return sorted(self.exponents)
        return sorted(g for g in self.exponents
                      if self.kinds[g].startswith(kind_prefix))

    @property
    def violated_vertices(self):
        return self.violated("vertex")

    @property
    def violated_plaquettes(self):
        return self.violated("plaquette")

    @property
    def violated_edges(self):
        return self.violated("edge")

    def weight(self) -> int:
        return len(self.exponents)

    def __bool__(self):
        return bool(self.exponents)


def syndrome(model, error: PauliOp) -> Syndrome:
    """Commutation exponent of every generator against the error."""
    if error.modulus != model.modulus or error.sites != model.n_sites:
        raise ShapeError("error register does not match model")
    n = model.modulus
    exps = {}
    kinds = {}
    for g in model.generators:
        k = commutation_exponent(g.op, error)
        if k:
            exps[g.gid] = k * g.order // n % g.order
            kinds[g.gid] = g.kind
    return Syndrome(exps, kinds)


def excitation_energy(model, error: PauliOp) -> int:
    """Number of violated generators (violated-stabilizer counting only)."""
    return syndrome(model, error).weight()


def brute_force_subgroup_order(gens: GeneratorMatrix) -> int:
    """Oracle: BFS closure of the rows under addition mod N."""
    n = gens.modulus
    seen = {(0,) * gens.columns}
    frontier = [(0,) * gens.columns]
    rows = [tuple(e % n for e in r) for r in gens.rows]
    while frontier:
        cur = frontier.pop()
        for r in rows:
            nxt = tuple((a + b) % n for a, b in zip(cur, r))
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return len(seen)


def assert_sign_consistent(model, bound: int = 200000):
    """Brute-force check: no generated word equals a nontrivial phase times identity.

    Only usable on models whose full group closure is enumerable (tests).
    """
    start = identity(model.modulus, model.n_sites)
    seen = {(start.x_exp, start.z_exp): start.phase_exp}
    frontier = [start]
    while frontier:
        cur = frontier.pop()
        for g in model.generators:
            nxt = pauli_mul(cur, g.op)
            key = (nxt.x_exp, nxt.z_exp)
            if key not in seen:
                if len(seen) > bound:
                    raise AssertionError("closure exceeds enumeration bound")
                seen[key] = nxt.phase_exp
                frontier.append(nxt)
            elif seen[key] != nxt.phase_exp:
                raise InvalidModelError(
                    "stabilizer group contains a nontrivial phase times a "
                    "repeated word (sign inconsistency)")
    return len(seen)
