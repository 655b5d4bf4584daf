"""Data-level anyon-theory catalog: fusion, twists, dimensions, modular data.

All quantities are exact: topological spins are Fractions of a full turn
(theta = exp(2*pi*i*turn), so 1/16 distinguishes the Ising spin from every
power of i), quantum dimensions are numbers p + q*sqrt(2) with Fraction
coefficients, and S-matrix entries are (magnitude, turn) pairs.  No floats
anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import QuditLabError, UnsupportedModelError

__all__ = [
    "QDim",
    "AnyonTheory",
    "MajoranaWord",
    "builtin_theory",
    "fuse",
    "twist_value",
    "monodromy",
    "modular_data",
    "s_unitary",
    "majorana_braid",
    "is_isomorphic",
    "product_theory",
    "turn_to_str",
]


@dataclass(frozen=True)
class QDim:
    """Exact number a + b*sqrt(2); enough for every theory in the catalog."""

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    def __add__(self, other):
        other = _as_qdim(other)
        return QDim(self.a + other.a, self.b + other.b)

    def __sub__(self, other):
        other = _as_qdim(other)
        return QDim(self.a - other.a, self.b - other.b)

    def __mul__(self, other):
        other = _as_qdim(other)
        return QDim(self.a * other.a + 2 * self.b * other.b,
                    self.a * other.b + self.b * other.a)

    def __neg__(self):
        return QDim(-self.a, -self.b)

    def __truediv__(self, other):
        other = _as_qdim(other)
        norm = other.a * other.a - 2 * other.b * other.b
        if norm == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt 2)")
        conj = QDim(other.a, -other.b)
        num = self * conj
        return QDim(num.a / norm, num.b / norm)

    def is_zero(self):
        return self.a == 0 and self.b == 0

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return "2^{1/2}" if self.b == 1 else f"{self.b}*2^{{1/2}}"
        return f"{self.a}+{self.b}*2^{{1/2}}"


def _as_qdim(x) -> QDim:
    if isinstance(x, QDim):
        return x
    return QDim(Fraction(x))


ONE = QDim(Fraction(1))


def _sqrt_qdim(n: int) -> QDim:
    """Exact sqrt(n) when n = a^2 or n = 2 b^2 (all catalogued cases)."""
    r = int(round(n ** 0.5))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand * cand == n:
            return QDim(cand)
    if n % 2 == 0:
        half = n // 2
        r = int(round(half ** 0.5))
        for cand in (r - 1, r, r + 1):
            if cand >= 0 and cand * cand == half:
                return QDim(0, cand)
    raise QuditLabError(f"sqrt({n}) is not representable in Q(sqrt 2)")


@dataclass(frozen=True)
class AnyonTheory:
    """Label set with fusion table, twists, dimensions and optional S/T data.

    ``fusion[(a, b)]`` maps outcome labels to multiplicities; ``twist`` holds
    Fractions of a full turn; ``s_matrix`` (when stored or synthesized) holds
    (QDim magnitude, Fraction turn) pairs.
    """

    name: str
    labels: tuple
    fusion: dict
    twist: dict
    dim: dict
    total_dim: QDim
    s_matrix: tuple = None

    @property
    def unit(self) -> str:
        return self.labels[0]

    def fuse(self, a: str, b: str) -> dict:
        self._check(a)
        self._check(b)
        return dict(self.fusion[(a, b)])

    def dual(self, a: str) -> str:
        self._check(a)
        for b in self.labels:
            if self.fusion[(a, b)].get(self.unit, 0) == 1:
                return b
        raise QuditLabError(f"label {a} has no dual")

    def is_abelian(self) -> bool:
        return all(sum(out.values()) == 1 for out in self.fusion.values())

    def _check(self, a):
        if a not in self.labels:
            raise QuditLabError(f"unknown label {a!r} in theory {self.name}")

    def validate(self):
        """Unit laws, associativity, duals, dimension homomorphism, D."""
        u = self.unit
        for a in self.labels:
            if self.fusion[(a, u)] != {a: 1} or self.fusion[(u, a)] != {a: 1}:
                raise QuditLabError(f"unit law fails for {a}")
            self.dual(a)
        for a in self.labels:
            for b in self.labels:
                for c in self.labels:
                    lhs = {}
                    for x, m1 in self.fusion[(a, b)].items():
                        for d, m2 in self.fusion[(x, c)].items():
                            lhs[d] = lhs.get(d, 0) + m1 * m2
                    rhs = {}
                    for y, m1 in self.fusion[(b, c)].items():
                        for d, m2 in self.fusion[(a, y)].items():
                            rhs[d] = rhs.get(d, 0) + m1 * m2
                    if lhs != rhs:
                        raise QuditLabError(f"fusion not associative at ({a},{b},{c})")
        for a in self.labels:
            for b in self.labels:
                total = QDim()
                for c, m in self.fusion[(a, b)].items():
                    total = total + self.dim[c] * m
                if total != self.dim[a] * self.dim[b]:
                    raise QuditLabError(f"dimension homomorphism fails at ({a},{b})")
        square = QDim()
        for a in self.labels:
            square = square + self.dim[a] * self.dim[a]
        if self.total_dim * self.total_dim != square:
            raise QuditLabError("total dimension does not match sum of squares")
        return self


def _group_theory(name, moduli, label_of, twist_of, label_order=None) -> AnyonTheory:
    """Pointed theory from an abelian group given as a tuple of moduli."""
    import itertools
    elems = list(itertools.product(*[range(m) for m in moduli]))
    labels = tuple(label_order) if label_order else tuple(label_of(e) for e in elems)
    by_label = {label_of(e): e for e in elems}
    fusion = {}
    for ea in elems:
        for eb in elems:
            ec = tuple((x + y) % m for x, y, m in zip(ea, eb, moduli))
            fusion[(label_of(ea), label_of(eb))] = {label_of(ec): 1}
    twist = {label_of(e): Fraction(twist_of(e)) % 1 for e in elems}
    dim = {l: ONE for l in labels}
    total = _sqrt_qdim(len(elems))
    return AnyonTheory(name, labels, fusion, twist, dim, total)


def _zn_label(p, q):
    if p == 0 and q == 0:
        return "1"
    out = ""
    if p:
        out += "e" + (str(p) if p > 1 else "")
    if q:
        out += "m" + (str(q) if q > 1 else "")
    return out


def _zn_order(n):
    return ["1"] + [_zn_label(p, q) for q in range(n) for p in range(n) if (p, q) != (0, 0)]


def builtin_theory(name: str, n: int = None) -> AnyonTheory:
    """The catalogued theories: toric, z_n(N), semion, doubled_semion, ising,
    ising_like_twist."""
    if name == "toric":
        t = builtin_theory("z_n", 2)
        return AnyonTheory("toric", t.labels, t.fusion, t.twist, t.dim, t.total_dim)
    if name == "z_n":
        if n is None or n < 2:
            raise UnsupportedModelError("z_n needs a modulus N >= 2")
        return _group_theory(
            f"z_{n}", (n, n), lambda e: _zn_label(*e),
            lambda e: Fraction(e[0] * e[1], n), _zn_order(n))
    if name == "semion":
        return _group_theory("semion", (2,),
                             lambda e: "s" if e[0] else "1",
                             lambda e: Fraction(1, 4) if e[0] else Fraction(0),
                             ["1", "s"])
    if name == "doubled_semion":
        def lab(e):
            return {(0, 0): "1", (1, 0): "s", (0, 1): "sbar", (1, 1): "ssbar"}[e]

        def tw(e):
            return {(0, 0): 0, (1, 0): Fraction(1, 4),
                    (0, 1): Fraction(3, 4), (1, 1): 0}[e]

        return _group_theory("doubled_semion", (2, 2), lab, tw,
                             ["1", "s", "sbar", "ssbar"])
    if name == "ising":
        labels = ("1", "sigma", "psi")
        f = {}
        table = {
            ("1", "1"): {"1": 1}, ("1", "sigma"): {"sigma": 1}, ("1", "psi"): {"psi": 1},
            ("sigma", "sigma"): {"1": 1, "psi": 1}, ("sigma", "psi"): {"sigma": 1},
            ("psi", "psi"): {"1": 1},
        }
        for (a, b), out in table.items():
            f[(a, b)] = out
            f[(b, a)] = out
        twist = {"1": Fraction(0), "sigma": Fraction(1, 16), "psi": Fraction(1, 2)}
        root2 = QDim(0, 1)
        dim = {"1": ONE, "sigma": root2, "psi": ONE}
        half = Fraction(1, 2)
        s = (
            ((QDim(half), Fraction(0)), (root2 * QDim(half), Fraction(0)), (QDim(half), Fraction(0))),
            ((root2 * QDim(half), Fraction(0)), (QDim(0), Fraction(0)), (root2 * QDim(half), Fraction(1, 2))),
            ((QDim(half), Fraction(0)), (root2 * QDim(half), Fraction(1, 2)), (QDim(half), Fraction(0))),
        )
        return AnyonTheory("ising", labels, f, twist, dim, QDim(2), s)
    if name == "ising_like_twist":
        labels = ("1", "e", "m", "eps", "sig+", "sig-")
        pt = {"1": (0, 0), "e": (1, 0), "m": (0, 1), "eps": (1, 1)}
        inv = {v: k for k, v in pt.items()}
        f = {}
        for a, ea in pt.items():
            for b, eb in pt.items():
                f[(a, b)] = {inv[((ea[0] + eb[0]) % 2, (ea[1] + eb[1]) % 2)]: 1}
        for s in ("sig+", "sig-"):
            other = "sig-" if s == "sig+" else "sig+"
            f[(s, s)] = {"1": 1, "eps": 1}
            f[(s, other)] = {"e": 1, "m": 1}
            f[(other, s)] = {"e": 1, "m": 1}
            for a, flip in (("1", False), ("eps", False), ("e", True), ("m", True)):
                out = {other: 1} if flip else {s: 1}
                f[(s, a)] = dict(out)
                f[(a, s)] = dict(out)
        twist = {"1": Fraction(0), "e": Fraction(0), "m": Fraction(0),
                 "eps": Fraction(1, 2), "sig+": Fraction(1, 4), "sig-": Fraction(3, 4)}
        root2 = QDim(0, 1)
        dim = {"1": ONE, "e": ONE, "m": ONE, "eps": ONE, "sig+": root2, "sig-": root2}
        return AnyonTheory("ising_like_twist", labels, f, twist, dim, QDim(0, 2))
    raise UnsupportedModelError(f"unknown builtin theory {name!r}")


def fuse(theory: AnyonTheory, a: str, b: str) -> dict:
    """Outcome multiset of a x b as a label -> multiplicity dict."""
    return theory.fuse(a, b)


def twist_value(theory: AnyonTheory, label: str) -> Fraction:
    """Topological spin as a fraction of a full turn (theta = e^{2 pi i t})."""
    theory._check(label)
    return theory.twist[label]


def monodromy(theory: AnyonTheory, a: str, b: str) -> Fraction:
    """Full braiding phase theta(ab)/theta(a)theta(b), abelian theories only."""
    out = theory.fuse(a, b)
    if len(out) != 1 or sum(out.values()) != 1:
        raise UnsupportedModelError(
            f"monodromy formula needs single-channel fusion; {a} x {b} is not")
    (c,) = out
    return (theory.twist[c] - theory.twist[a] - theory.twist[b]) % 1


def modular_data(theory: AnyonTheory):
    """(S, T): T as the tuple of twist turns, S as (magnitude, turn) entries.

    For abelian theories S_ab = monodromy(a,b) d_a d_b / D; non-abelian
    theories must carry stored S data.
    """
    t_diag = tuple(theory.twist[a] for a in theory.labels)
    if theory.s_matrix is not None:
        return theory.s_matrix, t_diag
    if not theory.is_abelian():
        raise UnsupportedModelError(
            f"no stored S matrix and {theory.name} is not abelian")
    s = []
    for a in theory.labels:
        row = []
        for b in theory.labels:
            mag = theory.dim[a] * theory.dim[b] / theory.total_dim
            row.append((mag, monodromy(theory, a, b)))
        s.append(tuple(row))
    return tuple(s), t_diag


def _signed_real(entry):
    mag, turn = entry
    if turn == 0:
        return mag
    if turn == Fraction(1, 2):
        return -mag
    raise UnsupportedModelError("entry is not real")


def s_unitary(theory: AnyonTheory) -> bool:
    """Exact S S^dagger = identity check for theories with real S entries."""
    s, _ = modular_data(theory)
    k = len(theory.labels)
    real = [[_signed_real(s[i][j]) for j in range(k)] for i in range(k)]
    for i in range(k):
        for j in range(k):
            acc = QDim()
            for l in range(k):
                acc = acc + real[i][l] * real[j][l]
            if acc != (ONE if i == j else QDim()):
                return False
    return True


def product_theory(t1: AnyonTheory, t2: AnyonTheory) -> AnyonTheory:
    """Deligne product: labels are pairs, data multiplies componentwise."""
    labels = tuple(f"({a},{b})" for a in t1.labels for b in t2.labels)
    fusion = {}
    for a1 in t1.labels:
        for b1 in t2.labels:
            for a2 in t1.labels:
                for b2 in t2.labels:
                    out = {}
                    for c1, m1 in t1.fusion[(a1, a2)].items():
                        for c2, m2 in t2.fusion[(b1, b2)].items():
                            out[f"({c1},{c2})"] = m1 * m2
                    fusion[(f"({a1},{b1})", f"({a2},{b2})")] = out
    twist = {f"({a},{b})": (t1.twist[a] + t2.twist[b]) % 1
             for a in t1.labels for b in t2.labels}
    dim = {f"({a},{b})": t1.dim[a] * t2.dim[b]
           for a in t1.labels for b in t2.labels}
    return AnyonTheory(f"{t1.name}x{t2.name}", labels, fusion, twist, dim,
                       t1.total_dim * t2.total_dim)


def is_isomorphic(t1: AnyonTheory, t2: AnyonTheory) -> bool:
    """Exhaustive search for a unit-preserving bijection matching fusion,
    twists and dimensions."""
    import itertools
    if len(t1.labels) != len(t2.labels):
        return False
    others1 = [l for l in t1.labels if l != t1.unit]
    others2 = [l for l in t2.labels if l != t2.unit]
    for perm in itertools.permutations(others2):
        phi = {t1.unit: t2.unit}
        phi.update(dict(zip(others1, perm)))
        if any(t1.twist[a] != t2.twist[phi[a]] for a in t1.labels):
            continue
        if any(t1.dim[a] != t2.dim[phi[a]] for a in t1.labels):
            continue
        ok = True
        for a in t1.labels:
            for b in t1.labels:
                image = {phi[c]: m for c, m in t1.fusion[(a, b)].items()}
                if image != t2.fusion[(phi[a], phi[b])]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return True
    return False


def turn_to_str(turn: Fraction) -> str:
    turn = Fraction(turn) % 1
    named = {Fraction(0): "1", Fraction(1, 4): "i",
             Fraction(1, 2): "-1", Fraction(3, 4): "-i"}
    if turn in named:
        return named[turn]
    return f"e^{{2*pi*i*{turn.numerator}/{turn.denominator}}}"


# ----------------------------------------------------------------------
# Majorana braid representation
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class MajoranaWord:
    """Normal-ordered product of Majorana generators with a sign.

    Relations c_j c_k + c_k c_j = 2 delta_jk: adjacent swaps of distinct
    generators flip the sign, repeated generators cancel.
    """

    n_modes: int
    sign: int = 1
    factors: tuple = ()

    @classmethod
    def from_factors(cls, n_modes: int, factors, sign: int = 1) -> "MajoranaWord":
        seq = list(factors)
        for j in seq:
            if not 0 <= j < n_modes:
                raise ValueError(f"generator index {j} out of range")
        # insertion sort counting transpositions of distinct generators
        out = []
        for j in seq:
            k = len(out)
            while k > 0 and out[k - 1] > j:
                k -= 1
            sign *= (-1) ** (len(out) - k)
            out.insert(k, j)
        # cancel equal neighbors (c_j^2 = 1)
        i = 0
        while i + 1 < len(out):
            if out[i] == out[i + 1]:
                del out[i:i + 2]
                i = max(0, i - 1)
            else:
                i += 1
        return cls(n_modes, sign, tuple(out))

    def __mul__(self, other: "MajoranaWord") -> "MajoranaWord":
        if self.n_modes != other.n_modes:
            raise ValueError("mode-count mismatch")
        return MajoranaWord.from_factors(self.n_modes,
                                         self.factors + other.factors,
                                         self.sign * other.sign)


def majorana_braid(word: MajoranaWord, j: int) -> MajoranaWord:
    """Braid generator j past j+1: c_j -> c_{j+1}, c_{j+1} -> -c_j."""
    if not 0 <= j + 1 < word.n_modes:
        raise ValueError(f"braid index {j} out of range for {word.n_modes} modes")
    sign = word.sign
    factors = []
    for c in word.factors:
        if c == j:
            factors.append(j + 1)
        elif c == j + 1:
            factors.append(j)
            sign = -sign
        else:
            factors.append(c)
    return MajoranaWord.from_factors(word.n_modes, factors, sign)
