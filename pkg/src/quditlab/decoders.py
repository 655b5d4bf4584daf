"""Error correction: toric pairing decoder, the five-step doubled-semion
decoder, a brute-force minimum-weight oracle, and a seeded Monte Carlo
harness.

All decoders are pure functions of the syndrome.  Stochastic work takes an
explicit seed and reproduces bit-for-bit.  Soundness (the correction clears
the syndrome) is checked by the caller-facing helpers and asserted
exhaustively in the tests; residual logical classes are identified through
commutation exponents against the model's canonical logical strings.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import dsemion, engine
from .dsemion import DSModel, string_operator
from .errors import DecodeNotFoundError, InconsistentSyndromeError
from .lattice import StabilizerModel, toric_string_operator
from .pauli import (PauliOp, commutation_exponent, identity, pauli_adjoint,
                    pauli_mul, pauli_pow, single_site)

__all__ = [
    "Correction",
    "DecodeOutcome",
    "MonteCarloResult",
    "decode_toric",
    "decode_doubled_semion",
    "brute_force_decode",
    "BruteForceOracle",
    "monte_carlo_trial",
    "classify_residual",
    "decode_outcome",
]


@dataclass(frozen=True)
class Correction:
    op: PauliOp
    trace: tuple = ()


@dataclass(frozen=True)
class DecodeOutcome:
    success: bool
    logical_class: str


@dataclass(frozen=True)
class MonteCarloResult:
    error_rate: float
    trials: int
    failures: int
    seed: int
    class_counts: dict = field(default_factory=dict)

    @property
    def failure_rate(self) -> float:
        return self.failures / self.trials if self.trials else 0.0

    def wilson_interval(self, z: float = 1.96):
        if not self.trials:
            return (0.0, 0.0)
        n = self.trials
        p = self.failure_rate
        mid = (p + z * z / (2 * n)) / (1 + z * z / n)
        half = (z / (1 + z * z / n)) * ((p * (1 - p) / n + z * z / (4 * n * n)) ** 0.5)
        return (max(0.0, mid - half), min(1.0, mid + half))


# ----------------------------------------------------------------------
# logical classes
# ----------------------------------------------------------------------

def _logical_ops(model):
    if isinstance(model, DSModel) or getattr(model, "family", "") == "doubled-semion":
        ds = model if isinstance(model, DSModel) else DSModel(model)
        return [(name, s.op) for name, s in sorted(dsemion.logical_operators(ds).items())]
    return list(model.logicals)


def _class_tuple(model, op, logicals):
    return tuple(commutation_exponent(op, l) for _, l in logicals)


def _class_names(model, logicals):
    """Map class tuple -> shortest product name over the logical generators."""
    n = model.modulus
    combos = [((), identity(model.modulus, model.n_sites))]
    names = {_class_tuple(model, combos[0][1], logicals): "1"}
    for name, op in logicals:
        new = []
        for prev_name, prev_op in combos:
            acc = prev_op
            for k in range(n):
                if k:
                    acc = pauli_mul(acc, op)
                label = prev_name + ((f"{name}^{k}",) if k else ())
                new.append((label, acc))
                t = _class_tuple(model, acc, logicals)
                if t not in names:
                    names[t] = "*".join(label) if label else "1"
        combos = new
    return names


def classify_residual(model, residual: PauliOp) -> str:
    """Name the logical class of a syndrome-free residual operator."""
    logicals = _logical_ops(model)
    t = _class_tuple(model, residual, logicals)
    names = _class_names(model, logicals)
    if t not in names:
        raise InconsistentSyndromeError("residual carries syndrome; not a logical class")
    return names[t]


def decode_outcome(model, error: PauliOp, correction: Correction) -> DecodeOutcome:
    residual = pauli_mul(error, correction.op)
    if engine.syndrome(model, residual):
        return DecodeOutcome(False, "syndrome")
    label = classify_residual(model, residual)
    return DecodeOutcome(label == "1", label)


# ----------------------------------------------------------------------
# toric pairing decoder
# ----------------------------------------------------------------------

def _torus_dist(geo, a, b):
    dx = abs(a[0] - b[0])
    dy = abs(a[1] - b[1])
    return min(dx, geo.cols - dx) + min(dy, geo.rows - dy)


def _torus_path(geo, a, b):
    """Deterministic staircase path from a to b: x leg first, then y leg."""
    path = [a]
    x, y = a
    dx = (b[0] - x) % geo.cols
    step = 1 if dx <= geo.cols - dx else -1
    for _ in range(min(dx, geo.cols - dx)):
        x = (x + step) % geo.cols
        path.append((x, y))
    dy = (b[1] - y) % geo.rows
    step = 1 if dy <= geo.rows - dy else -1
    for _ in range(min(dy, geo.rows - dy)):
        y = (y + step) % geo.rows
        path.append((x, y))
    return path


def _min_weight_pairing(positions, dist):
    """Exact minimum-weight perfect matching by subset dynamic programming."""
    k = len(positions)
    if k % 2:
        raise InconsistentSyndromeError("odd number of violations cannot pair up")
    memo = {0: (0, ())}

    def solve(mask):
        if mask in memo:
            return memo[mask]
        i = next(b for b in range(k) if mask >> b & 1)
        best = None
        for j in range(i + 1, k):
            if mask >> j & 1:
                rest = solve(mask & ~(1 << i) & ~(1 << j))
                cand = (rest[0] + dist(positions[i], positions[j]),
                        rest[1] + ((i, j),))
                if best is None or cand < best:
                    best = cand
        memo[mask] = best
        return best

    return solve((1 << k) - 1)[1]


def _all_pairings(k):
    """Every perfect matching on k indices (k even, desk scale)."""
    if k == 0:
        return [()]
    items = list(range(k))

    def rec(rest):
        if not rest:
            return [()]
        i = rest[0]
        out = []
        for pos, j in enumerate(rest[1:], start=1):
            sub = rest[1:pos] + rest[pos + 1:]
            out += [((i, j),) + tail for tail in rec(sub)]
        return out

    return rec(items)


def _geodesic_paths(geo, a, b):
    """Shortest staircase paths a -> b, covering both legs' wrap ties."""
    def leg_steps(delta, size):
        fwd = delta % size
        back = size - fwd if fwd else 0
        if fwd == 0:
            return [()]
        opts = []
        if fwd <= back:
            opts.append((1,) * fwd)
        if back <= fwd:
            opts.append((-1,) * back)
        return opts

    paths = set()
    for xs in leg_steps(b[0] - a[0], geo.cols):
        for ys in leg_steps(b[1] - a[1], geo.rows):
            for order in ("xy", "yx"):
                x, y = a
                path = [a]
                seq = ([("x", s) for s in xs] + [("y", s) for s in ys]
                       if order == "xy" else
                       [("y", s) for s in ys] + [("x", s) for s in xs])
                for axis, s in seq:
                    if axis == "x":
                        x = (x + s) % geo.cols
                    else:
                        y = (y + s) % geo.rows
                    path.append((x, y))
                paths.add(tuple(path))
    return sorted(paths)


def _gid_coords(gid):
    inner = gid[gid.index("(") + 1:-1].split(",")
    return int(inner[-2]), int(inner[-1])


def _violations(model, syn, kind):
    out = []
    for g in model.generators:
        if g.kind == kind and g.gid in syn.exponents:
            out.append((_gid_coords(g.gid), syn.exponents[g.gid] * model.modulus // g.order))
    return sorted(out)


def _string_multiplier(model, string, anchor_gid, want, syn_of):
    base = syn_of(string)
    k = base.exponents.get(anchor_gid, 0)
    n = model.modulus
    for m in range(1, n):
        if (k * m) % n == (-want) % n:
            return m
    raise InconsistentSyndromeError("string cannot annihilate the charge")


def _family_candidates(model, positions, stype, cap=12):
    """Syndrome-clearing string products for one violation family (modulus 2).

    Enumerates minimum-cost pairings and geodesic path variants, then keeps
    one representative per (weight, logical-class) so that degenerate
    choices are resolved by the same canonical order the oracle uses.
    """
    geo = model.geometry
    if not positions:
        return [identity(model.modulus, model.n_sites)]
    if len(positions) > cap:
        pairs = _min_weight_pairing(positions, lambda a, b: _torus_dist(geo, a, b))
        corr = identity(model.modulus, model.n_sites)
        for i, j in pairs:
            corr = pauli_mul(corr, toric_string_operator(
                model, _torus_path(geo, positions[i], positions[j]), stype))
        return [corr]
    pairings = _all_pairings(len(positions))
    costs = [sum(_torus_dist(geo, positions[i], positions[j]) for i, j in pr)
             for pr in pairings]
    best = min(costs)
    logicals = _logical_ops(model)
    words = {}
    for pr, cost in zip(pairings, costs):
        if cost != best:
            continue
        partial = [identity(model.modulus, model.n_sites)]
        for i, j in pr:
            strings = [toric_string_operator(model, list(path), stype)
                       for path in _geodesic_paths(geo, positions[i], positions[j])]
            partial = [pauli_mul(w, s) for w in partial for s in strings]
        for w in partial:
            words.setdefault((w.x_exp, w.z_exp), w)
    out = sorted(words.values(), key=lambda w: (w.x_exp, w.z_exp))
    if len(out) > 64:
        # keep only one representative per logical class to bound the joint search
        reps = {}
        for w in out:
            key = (w.weight(), _class_tuple(model, w, logicals))
            if key not in reps:
                reps[key] = w
        out = [reps[k] for k in sorted(reps)]
    return out


def decode_toric(model: StabilizerModel, syn) -> Correction:
    """Pair violated vertices with Z strings and plaquettes with X strings.

    For modulus 2 the pairing is an exact minimum-weight perfect matching on
    torus distance; degenerate ties are broken canonically by (weight,
    logical class, exponents), the same order the brute-force oracle uses.
    For larger moduli the charges are folded into a reference location along
    shortest paths (sound, deterministic).
    """
    geo = model.geometry
    n = model.modulus
    if n == 2:
        vert = [p for p, q in _violations(model, syn, "vertex")]
        plaq = [p for p, q in _violations(model, syn, "plaquette")]
        if len(vert) % 2 or len(plaq) % 2:
            raise InconsistentSyndromeError("odd violation parity")
        logicals = _logical_ops(model)
        best = None
        for zw in _family_candidates(model, vert, "e"):
            for xw in _family_candidates(model, plaq, "m"):
                w = pauli_mul(zw, xw)
                key = (w.weight(), _class_tuple(model, w, logicals), w.x_exp, w.z_exp)
                if best is None or key < best[0]:
                    best = (key, w)
        return Correction(best[1], ())

    corr = identity(n, model.n_sites)

    def raw_syndrome(op):
        return engine.syndrome(model, op)

    for kind, stype in (("vertex", "e"), ("plaquette", "m")):
        current = _violations(model, syn, kind)
        if not corr.is_identity(up_to_phase=True):
            extra = raw_syndrome(corr)
            acc = {}
            for pos, q in current:
                acc[pos] = (acc.get(pos, 0) + q) % n
            for g in model.generators:
                if g.kind == kind and g.gid in extra.exponents:
                    pos = _gid_coords(g.gid)
                    acc[pos] = (acc.get(pos, 0) + extra.exponents[g.gid] * n // g.order) % n
            current = sorted((p, q) for p, q in acc.items() if q)
        if not current:
            continue
        if sum(q for _, q in current) % n:
            raise InconsistentSyndromeError(f"{kind} charges do not cancel mod {n}")
        items = list(current)
        while len(items) > 1:
            (p0, q0), (p1, q1) = items[0], items[1]
            gid = f"{'A' if kind == 'vertex' else 'B'}({p0[0]},{p0[1]})"
            string = toric_string_operator(model, _torus_path(geo, p0, p1), stype)
            m = _string_multiplier(model, string, gid, q0, raw_syndrome)
            word = pauli_pow(string, m)
            corr = pauli_mul(corr, word)
            moved = raw_syndrome(word).exponents.get(
                f"{'A' if kind == 'vertex' else 'B'}({p1[0]},{p1[1]})", 0)
            q1 = (q1 + moved) % n
            items = ([(p1, q1)] if q1 else []) + items[2:]
        if items and items[0][1]:
            raise InconsistentSyndromeError("unpaired charge remains")
    return Correction(corr, ())


# ----------------------------------------------------------------------
# doubled-semion five-step decoder
# ----------------------------------------------------------------------

def _combine(ds, syn_exponents, corr):
    """Exponents of error * corr given the error's syndrome exponents."""
    out = dict(syn_exponents)
    extra = engine.syndrome(ds, corr)
    for g in ds.generators:
        if g.gid in extra.exponents:
            v = (out.get(g.gid, 0) + extra.exponents[g.gid]) % g.order
            if v:
                out[g.gid] = v
            else:
                out.pop(g.gid, None)
    return out


def _trail_edges(ds, exps):
    """Violated C generators as (orient, x, y) of their Z^2 edge, row-major."""
    edges = []
    for g in ds.generators:
        if g.kind == "edge" and g.gid in exps:
            o, xs, ys = g.gid[2:-1].split(",")
            edges.append((o, int(xs), int(ys)))
    return sorted(edges, key=lambda t: (t[2], t[1], t[0]))


def _close_plaquettes(ds, exps):
    """Step 3: close residual plaquette excitations with semion strings."""
    geo = ds.geometry
    pos = sorted(_gid_coords(g) for g in exps if g.startswith("B("))
    if not pos:
        return [identity(4, ds.n_sites)], "none"
    if len(pos) % 2:
        raise InconsistentSyndromeError("odd number of plaquette excitations")
    pairs = _min_weight_pairing(pos, lambda a, b: _torus_dist(geo, a, b))
    words = [identity(4, ds.n_sites)]
    for i, j in pairs:
        path = _torus_path(geo, pos[i], pos[j])
        segs = []
        for anyon in ("s", "sbar"):
            w = string_operator(ds, anyon, path).op
            segs += [w, pauli_adjoint(w)]
        words = [pauli_mul(w0, s) for w0 in words for s in segs]
    return words, "3"


def _close_vertices(ds, exps):
    """Step 5b: pair double vertex excitations with ss-bar strings."""
    geo = ds.geometry
    pos = []
    for g in exps:
        if g.startswith("A("):
            if exps[g] != 2:
                raise InconsistentSyndromeError("unpaired single vertex excitation")
            pos.append(_gid_coords(g))
    if not pos:
        return identity(4, ds.n_sites), "none"
    pairs = _min_weight_pairing(sorted(pos), lambda a, b: _torus_dist(geo, a, b))
    pos = sorted(pos)
    corr = identity(4, ds.n_sites)
    for i, j in pairs:
        w = string_operator(ds, "ssbar", _torus_path(geo, pos[i], pos[j])).op
        corr = pauli_mul(corr, w)
    return corr, "5b"


def decode_doubled_semion(ds: DSModel, syn) -> Correction:
    """The five-step doubled-semion correction.

    1. Trace the edge (C_e) excitations into a path of implicated edges.
    2. (a) Edges flanked by plaquette excitations are bit-flip errors: undo
       them with X powers read from the endpoint vertex exponents ("to the
       left of the path" fixes the power sign convention).  (b) Otherwise
       the implicated edge is the hop partner of a phase-flip: undo with Z.
    3. Close the remaining plaquette excitations with a semion (or
       anti-semion) string.
    4. Inspect the remaining vertex excitations at the corners.
    5. (a)/(b) Cancel paired double vertex excitations with ss-bar strings.

    Sign ambiguities on interior edges are resolved by deterministic
    enumeration (first syndrome-clearing assignment in row-major order).
    """
    geo = ds.geometry
    exps0 = dict(syn.exponents)
    trail = _trail_edges(ds, exps0)
    if len(trail) > 12:
        raise InconsistentSyndromeError("edge-excitation trail too long to trace")

    # which interpretation per trail edge: X on the edge itself when a
    # flanking plaquette is excited, else Z on the hop partner edge
    def flanking_plaquettes(o, x, y):
        if o == "h":
            return [f"B({x},{y})", f"B({x},{(y - 1) % geo.rows})"]
        return [f"B({x},{y})", f"B({(x - 1) % geo.cols},{y})"]

    plans = []
    for o, x, y in trail:
        edge_idx = geo.edge_index(o, x, y)
        if any(b in exps0 for b in flanking_plaquettes(o, x, y)):
            rule = "2a"
            site = edge_idx
            make = lambda s, site=site: single_site(4, ds.n_sites, site, x=s)
            # endpoint vertex exponent suggests the power
            hint_gid = (f"A({x},{(y - 1) % geo.rows})" if o == "h"
                        else f"A({(x - 1) % geo.cols},{y})")
            hint = exps0.get(hint_gid, 1) % 4
            hint = hint if hint in (1, 3) else 1
            first = (-hint) % 4
        else:
            rule = "2b"
            if o == "h":
                site = geo.edge_index("v", x + 1, y)
            else:
                site = geo.edge_index("h", x, y + 1)
            make = lambda s, site=site: single_site(4, ds.n_sites, site, z=s)
            first = 3
        plans.append((rule, make, first))

    def candidates(k):
        if k == len(plans):
            yield identity(4, ds.n_sites), ()
            return
        rule, make, first = plans[k]
        for rest, rules in candidates(k + 1):
            for s in (first, (-first) % 4):
                yield pauli_mul(make(s), rest), (rule,) + rules

    cleared = []
    logicals = _logical_ops(ds)
    for step2, rules in candidates(0):
        exps = _combine(ds, exps0, step2)
        if any(g.startswith("C(") for g in exps):
            continue
        trace = (("1",) if trail else ()) + tuple(dict.fromkeys(rules))
        closers, rule3 = _close_plaquettes(ds, exps)
        for closer in closers:
            exps3 = _combine(ds, exps, closer)
            if any(g.startswith("B(") for g in exps3):
                continue
            t3 = trace + ((rule3,) if rule3 != "none" else ())
            if any(g.startswith("A(") for g in exps3):
                t3 = t3 + ("4",)
            try:
                fixer, rule5 = _close_vertices(ds, exps3)
            except InconsistentSyndromeError:
                continue
            exps5 = _combine(ds, exps3, pauli_mul(closer, fixer)) if rule5 != "none" else exps3
            if exps5:
                continue
            corr = pauli_mul(step2, pauli_mul(closer, fixer))
            if rule5 != "none":
                t3 = t3 + (rule5,)
            cleared.append((corr, t3))
    if not cleared:
        raise InconsistentSyndromeError("no rule assignment clears the syndrome")
    corr, trace = min(cleared, key=lambda ct: (
        ct[0].weight(), _class_tuple(ds, ct[0], logicals), ct[0].x_exp, ct[0].z_exp))
    return Correction(corr, trace)


# ----------------------------------------------------------------------
# brute-force oracle
# ----------------------------------------------------------------------

class BruteForceOracle:
    """Exhaustive minimum-weight search with meet-in-the-middle tables.

    Desk scale only: weight <= 3 on lattices up to 6x6.  At the minimum
    weight the oracle enumerates every matching correction and returns the
    canonical one: smallest (logical class, exponent tuple).
    """

    def __init__(self, model, max_weight: int = 2):
        if max_weight > 3:
            raise DecodeNotFoundError("oracle enumerates weight <= 3 only")
        self.model = model
        self.max_weight = max_weight
        self.n = model.n_sites
        self.N = model.modulus
        self.gens = list(model.generators)
        self.logicals = _logical_ops(model)
        self.singles = []  # (key, op) in deterministic order
        for site in range(self.n):
            for a in range(self.N):
                for b in range(self.N):
                    if a == 0 and b == 0:
                        continue
                    op = single_site(self.N, self.n, site, x=a, z=b)
                    self.singles.append((self._key(op), op))
        self.by_key = {}
        for key, op in self.singles:
            self.by_key.setdefault(key, []).append(op)
        self.w2 = None
        if max_weight >= 2:
            self.w2 = set()
            for i, (k1, op1) in enumerate(self.singles):
                s1 = op1.support()[0]
                for k2, op2 in self.singles[i + 1:]:
                    if op2.support()[0] == s1:
                        continue
                    self.w2.add(tuple((a + b) % o for a, b, o in
                                      zip(k1, k2, self._orders)))

    @property
    def _orders(self):
        return [g.order for g in self.gens]

    def _key(self, op):
        n = self.N
        return tuple(commutation_exponent(g.op, op) * g.order // n % g.order
                     for g in self.gens)

    def syndrome_key(self, syn):
        return tuple(syn.exponents.get(g.gid, 0) for g in self.gens)

    def _sub(self, a, b):
        return tuple((x - y) % o for x, y, o in zip(a, b, self._orders))

    def _weight2_matches(self, target):
        out = []
        for k1, op1 in self.singles:
            need = self._sub(target, k1)
            for op2 in self.by_key.get(need, []):
                if op2.support()[0] > op1.support()[0]:
                    out.append(pauli_mul(op1, op2))
        return out

    def _canonical(self, words, trace) -> Correction:
        best = min(words, key=lambda w: (_class_tuple(self.model, w, self.logicals),
                                         w.x_exp, w.z_exp))
        return Correction(best, trace)

    def decode(self, syn) -> Correction:
        target = tuple((-v) % o for v, o in zip(self.syndrome_key(syn), self._orders))
        if not any(target):
            return Correction(identity(self.N, self.n), ("w0",))
        if target in self.by_key:
            return self._canonical(self.by_key[target], ("w1",))
        if self.max_weight >= 2:
            cands = self._weight2_matches(target)
            if cands:
                return self._canonical(cands, ("w2",))
        if self.max_weight >= 3:
            cands = []
            for k1, op1 in self.singles:
                s1 = op1.support()[0]
                need = self._sub(target, k1)
                if need not in self.w2:
                    continue
                for w2op in self._weight2_matches(need):
                    if min(w2op.support()) > s1:
                        cands.append(pauli_mul(op1, w2op))
            if cands:
                return self._canonical(cands, ("w3",))
        raise DecodeNotFoundError(
            f"no correction of weight <= {self.max_weight} matches the syndrome")


def brute_force_decode(model, syn, max_weight: int = 2) -> Correction:
    """Exhaustive minimum-weight decode; ground truth for the two decoders."""
    return BruteForceOracle(model, max_weight).decode(syn)


# ----------------------------------------------------------------------
# Monte Carlo harness
# ----------------------------------------------------------------------

def monte_carlo_trial(model, decoder, error_rate: float, trials: int,
                      seed: int) -> MonteCarloResult:
    """i.i.d. per-site X/Z error injection, decode, classify the residual.

    Identical seeds reproduce identical trials bit-for-bit.
    """
    if not 0.0 <= error_rate <= 1.0:
        raise ValueError("error_rate must lie in [0, 1]")
    rng = random.Random(seed)
    n = model.n_sites
    N = model.modulus
    failures = 0
    class_counts = {}
    logicals = _logical_ops(model)
    names = _class_names(model, logicals)
    for _ in range(trials):
        xs = [0] * n
        zs = [0] * n
        touched = False
        for site in range(n):
            if rng.random() < error_rate:
                xs[site] = rng.randrange(1, N)
                touched = True
            if rng.random() < error_rate:
                zs[site] = rng.randrange(1, N)
                touched = True
        if not touched:
            class_counts["1"] = class_counts.get("1", 0) + 1
            continue
        err = PauliOp(N, tuple(xs), tuple(zs))
        corr = decoder(model, engine.syndrome(model, err))
        residual = pauli_mul(err, corr.op)
        if engine.syndrome(model, residual):
            label = "syndrome"
        else:
            label = names.get(_class_tuple(model, residual, logicals), "unknown")
        class_counts[label] = class_counts.get(label, 0) + 1
        if label != "1":
            failures += 1
    return MonteCarloResult(error_rate, trials, failures, seed, class_counts)
