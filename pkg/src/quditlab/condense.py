"""Anyon condensation for pointed (abelian) theories.

A condensable algebra here is a group-like boson subalgebra: a label
subgroup containing the unit, closed under fusion and duals, with every
summand of trivial twist and pairwise trivial monodromy.  Modules are the
fusion orbits (cosets): a module is local (deconfined) exactly when its
summands braid trivially with the whole algebra; local modules form the
condensed theory, with twists inherited from any summand (well-definedness
is asserted, never assumed) and quantum dimensions divided by dim A.
"""

from __future__ import annotations

from dataclasses import dataclass
from .catalog import AnyonTheory, QDim, _sqrt_qdim, monodromy
from .errors import QuditLabError, UnsupportedModelError

__all__ = [
    "CondensableAlgebra",
    "ModuleObject",
    "ValidationReport",
    "validate_condensable",
    "enumerate_condensable",
    "right_modules",
    "local_modules",
    "condensed_theory",
    "bulk_to_boundary",
    "defect_line_image",
]


@dataclass(frozen=True)
class CondensableAlgebra:
    """A boson subalgebra 1 + a + b + ... of an abelian theory."""

    parent: AnyonTheory
    summands: tuple  # sorted labels, unit included
    boundary_tag: str = ""

    @property
    def dim(self) -> QDim:
        total = QDim()
        for a in self.summands:
            total = total + self.parent.dim[a]
        return total

    def label(self) -> str:
        return "+".join(self.summands)


@dataclass(frozen=True)
class ModuleObject:
    """A simple right A-module: a fusion orbit with its locality flag."""

    summands: tuple
    local: bool
    dim: QDim

    def label(self) -> str:
        return "+".join(self.summands)


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    failures: tuple = ()

    def first_failure(self):
        return self.failures[0] if self.failures else None


def _fuse_one(theory, a, b):
    out = theory.fuse(a, b)
    (c,) = out
    return c


def _require_abelian(theory):
    if not theory.is_abelian():
        raise UnsupportedModelError(
            f"condensation engine handles pointed theories only; {theory.name} is not")


def validate_condensable(theory: AnyonTheory, summands) -> ValidationReport:
    """Check unit membership, fusion/dual closure, bosonity, mutual monodromy."""
    _require_abelian(theory)
    failures = []
    summands = sorted(set(summands), key=theory.labels.index)
    if theory.unit not in summands:
        failures.append(("unit-missing", theory.unit, None))
    for a in summands:
        for b in summands:
            c = _fuse_one(theory, a, b)
            if c not in summands:
                failures.append(("not-closed", f"{a}x{b}", c))
        if theory.dual(a) not in summands:
            failures.append(("dual-missing", a, theory.dual(a)))
    for a in summands:
        if theory.twist[a] % 1 != 0:
            failures.append(("not-a-boson", a, theory.twist[a]))
    for a in summands:
        for b in summands:
            if monodromy(theory, a, b) % 1 != 0:
                failures.append(("nontrivial-monodromy", (a, b),
                                 monodromy(theory, a, b)))
    return ValidationReport(not failures, tuple(failures))


def _algebra(theory, summands) -> CondensableAlgebra:
    report = validate_condensable(theory, summands)
    if not report.valid:
        raise QuditLabError(f"not a condensable algebra: {report.first_failure()}")
    ordered = tuple(sorted(set(summands), key=theory.labels.index))
    tag = ""
    if theory.name in ("toric", "z_2") and len(ordered) == 2:
        tag = {"m": "smooth boundary", "e": "rough boundary"}.get(ordered[1], "")
    return CondensableAlgebra(theory, ordered, tag)


def enumerate_condensable(theory: AnyonTheory):
    """All condensable algebras: closures of boson pairs that pass validation."""
    _require_abelian(theory)
    bosons = [a for a in theory.labels if theory.twist[a] % 1 == 0]

    def closure(gens):
        seen = {theory.unit}
        frontier = list(gens)
        while frontier:
            x = frontier.pop()
            if x in seen:
                continue
            seen.add(x)
            frontier.append(theory.dual(x))
            for y in list(seen):
                frontier.append(_fuse_one(theory, x, y))
        return tuple(sorted(seen, key=theory.labels.index))

    candidates = {closure(())}
    for b1 in bosons:
        candidates.add(closure([b1]))
        for b2 in bosons:
            candidates.add(closure([b1, b2]))
    out = []
    for summands in sorted(candidates):
        if validate_condensable(theory, summands).valid:
            out.append(_algebra(theory, summands))
    out.sort(key=lambda alg: (len(alg.summands), alg.summands))
    return out


def _orbit(theory, algebra, x):
    return tuple(sorted({_fuse_one(theory, x, a) for a in algebra.summands},
                        key=theory.labels.index))


def _is_local(theory, algebra, orbit):
    return all(monodromy(theory, m, a) % 1 == 0
               for m in orbit for a in algebra.summands)


def _module(theory, algebra, orbit) -> ModuleObject:
    total = QDim()
    for m in orbit:
        total = total + theory.dim[m]
    return ModuleObject(orbit, _is_local(theory, algebra, orbit),
                        total / algebra.dim)


def right_modules(theory: AnyonTheory, algebra: CondensableAlgebra):
    """Fusion orbits of all labels under the algebra; each is one simple module."""
    seen = set()
    modules = []
    for x in theory.labels:
        orbit = _orbit(theory, algebra, x)
        if orbit in seen:
            continue
        seen.add(orbit)
        modules.append(_module(theory, algebra, orbit))
    return modules


def local_modules(theory: AnyonTheory, algebra: CondensableAlgebra):
    return [m for m in right_modules(theory, algebra) if m.local]


def condensed_theory(theory: AnyonTheory, algebra: CondensableAlgebra) -> AnyonTheory:
    """The theory of local modules: orbit fusion, inherited twists, scaled dims."""
    locals_ = local_modules(theory, algebra)
    reps = {}
    for mod in locals_:
        rep = mod.summands[0]
        reps[mod.summands] = rep
    labels = tuple(mod.label() for mod in locals_)
    by_orbit = {mod.summands: mod.label() for mod in locals_}
    fusion = {}
    for m1 in locals_:
        for m2 in locals_:
            c = _fuse_one(theory, m1.summands[0], m2.summands[0])
            target = _orbit(theory, algebra, c)
            if target not in by_orbit:
                raise QuditLabError("local modules are not closed under fusion")
            fusion[(m1.label(), m2.label())] = {by_orbit[target]: 1}
    twist = {}
    for mod in locals_:
        values = {theory.twist[s] % 1 for s in mod.summands}
        if len(values) != 1:
            raise QuditLabError(
                f"inherited twist ill-defined on module {mod.label()}")
        twist[mod.label()] = values.pop()
    dim = {mod.label(): mod.dim for mod in locals_}
    square = 0
    for mod in locals_:
        if mod.dim != QDim(1):
            raise QuditLabError("pointed condensation should have unit module dims")
        square += 1
    total = _sqrt_qdim(square)
    name = f"{theory.name}/({algebra.label()})"
    return AnyonTheory(name, labels, fusion, twist, dim, total).validate()


def bulk_to_boundary(theory: AnyonTheory, algebra: CondensableAlgebra,
                     x: str) -> ModuleObject:
    """The module x (x) A: image of a bulk label on the condensation wall."""
    theory._check(x)
    return _module(theory, algebra, _orbit(theory, algebra, x))


DEFECT_LINE_TABLE = {
    "1": ("e", "m"),
    "e": ("1", "em"),
    "m": ("1", "em"),
    "em": ("e", "m"),
}


def defect_line_image(theory: AnyonTheory, x: str):
    """Image of a toric-code label under the charge-flux defect-line functor."""
    if tuple(theory.labels) != ("1", "e", "m", "em"):
        raise UnsupportedModelError(
            "the defect-line functor is tabulated for the toric-code theory only")
    theory._check(x)
    return dict.fromkeys(DEFECT_LINE_TABLE[x], 1)
