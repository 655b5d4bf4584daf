"""Command-line entry point and config/report layer.

Config documents are line-structured text with a versioned header::

    quditlab-config v1
    model toric rows=4 cols=4 modulus=2
    defect ds-patch x=1 y=1 contractible=true
    error 0|0:1,0
    channel rate=0.001 trials=10000
    seed 7
    output dimension

Reports are deterministic line-structured text (or JSON with --format json):
identical config and seed produce byte-identical output.  Exit codes:
0 success, 2 config error, 3 model inconsistency, 4 decode inconsistency.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import condense, decoders, defects, dsemion, engine, lattice
from .catalog import builtin_theory, modular_data, turn_to_str
from .errors import (ConfigError, DecodeNotFoundError,
                     InconsistentSyndromeError, QuditLabError)
from .pauli import from_text, to_text

__all__ = ["ExperimentConfig", "parse_config", "run", "main"]

CONFIG_HEADER = "quditlab-config v1"
REPORT_HEADER = "quditlab-report v1"

EXIT_CONFIG = 2
EXIT_MODEL = 3
EXIT_DECODE = 4


@dataclass
class ExperimentConfig:
    family: str = "toric"
    rows: int = 4
    cols: int = 4
    modulus: int = 2
    defects: list = field(default_factory=list)
    error_text: str = None
    string_spec: tuple = None  # (anyon-or-e/m, path) alternative to error
    rate: float = None
    trials: int = None
    seed: int = None
    outputs: list = field(default_factory=list)


def _parse_kv(tokens, line_no):
    out = {}
    for tok in tokens:
        if "=" not in tok:
            raise ConfigError(f"line {line_no}: expected key=value, got {tok!r}")
        k, _, v = tok.partition("=")
        out[k] = v
    return out


def _as_int(kv, key, line_no, default=None):
    if key not in kv:
        if default is None:
            raise ConfigError(f"line {line_no}: missing field {key!r}")
        return default
    try:
        return int(kv[key])
    except ValueError:
        raise ConfigError(f"line {line_no}: field {key!r} must be an integer")


def _as_bool(kv, key, line_no, default=True):
    if key not in kv:
        return default
    v = kv[key].lower()
    if v in ("true", "1", "yes"):
        return True
    if v in ("false", "0", "no"):
        return False
    raise ConfigError(f"line {line_no}: field {key!r} must be true or false")


KNOWN_DEFECTS = (
    "bombin-twist", "kitaev-twist", "krishna-dislocation-i",
    "krishna-dislocation-ii", "ds-patch", "z4-patch-in-ds",
    "bilayer-wormhole-i", "bilayer-wormhole-ii", "ising-twists",
)


def parse_config(text: str) -> ExperimentConfig:
    lines = text.splitlines()
    if not lines or lines[0].strip() != CONFIG_HEADER:
        raise ConfigError(f"missing header line {CONFIG_HEADER!r}")
    cfg = ExperimentConfig()
    for no, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, *rest = line.split()
        if head == "model":
            if not rest:
                raise ConfigError(f"line {no}: model needs a family")
            cfg.family = rest[0]
            kv = _parse_kv(rest[1:], no)
            cfg.rows = _as_int(kv, "rows", no)
            cfg.cols = _as_int(kv, "cols", no)
            cfg.modulus = _as_int(kv, "modulus", no, default=2)
        elif head == "defect":
            if not rest:
                raise ConfigError(f"line {no}: defect needs a kind")
            kind = rest[0]
            if kind not in KNOWN_DEFECTS:
                raise ConfigError(f"line {no}: unknown defect kind {kind!r}")
            kv = _parse_kv(rest[1:], no)
            kv["kind"] = kind
            kv["line"] = no
            cfg.defects.append(kv)
        elif head == "error":
            if not rest:
                raise ConfigError(f"line {no}: error needs a Pauli word")
            cfg.error_text = rest[0]
        elif head == "string":
            if len(rest) < 3:
                raise ConfigError(f"line {no}: string needs an anyon type and "
                                  f"at least two path nodes")
            try:
                path = tuple(tuple(int(c) for c in tok.split(",")) for tok in rest[1:])
            except ValueError:
                raise ConfigError(f"line {no}: string path nodes must be x,y pairs")
            if any(len(p) != 2 for p in path):
                raise ConfigError(f"line {no}: string path nodes must be x,y pairs")
            cfg.string_spec = (rest[0], path)
        elif head == "channel":
            kv = _parse_kv(rest, no)
            if "rate" not in kv:
                raise ConfigError(f"line {no}: missing field 'rate'")
            cfg.rate = float(kv["rate"])
            cfg.trials = _as_int(kv, "trials", no)
        elif head == "seed":
            cfg.seed = int(rest[0])
        elif head == "output":
            if not rest:
                raise ConfigError(f"line {no}: output needs a name")
            cfg.outputs.append((rest[0], _parse_kv(rest[1:], no)))
        else:
            raise ConfigError(f"line {no}: unknown directive {head!r}")
    return cfg


def _apply_defect(model, kv):
    kind = kv["kind"]
    no = kv.get("line", "?")
    x = _as_int(kv, "x", no, default=1)
    y = _as_int(kv, "y", no, default=1)
    if kind == "bombin-twist":
        return defects.apply_bombin_twist(
            model, x0=x, y0=y, width=_as_int(kv, "width", no, default=2),
            contractible=_as_bool(kv, "contractible", no),
            multiplicity=_as_int(kv, "multiplicity", no, default=1))
    if kind == "kitaev-twist":
        return defects.apply_kitaev_twist(
            model, x0=x, y0=y, length=_as_int(kv, "length", no, default=3),
            contractible=_as_bool(kv, "contractible", no))
    if kind == "krishna-dislocation-i":
        return defects.apply_dislocation(model, "i", x, y)
    if kind == "krishna-dislocation-ii":
        return defects.apply_dislocation(model, "ii", x, y)
    if kind == "ds-patch":
        return defects.apply_ds_patch(model, x, y,
                                      contractible=_as_bool(kv, "contractible", no))
    if kind == "z4-patch-in-ds":
        return defects.apply_z4_patch_in_ds(model, x, y)
    if kind == "ising-twists":
        return defects.apply_multiple_ising_twists(model, _as_int(kv, "k", no))
    raise ConfigError(f"line {no}: defect {kind!r} needs a bilayer model")


def build_model(cfg: ExperimentConfig):
    """Construct the configured model with all defects applied; returns
    (model, [DefectReport])."""
    reports = []
    if cfg.family == "toric":
        model = lattice.build_toric_code(cfg.rows, cfg.cols, cfg.modulus)
    elif cfg.family == "bombin":
        model = lattice.build_bombin_lattice(cfg.rows, cfg.cols)
    elif cfg.family == "doubled-semion":
        model = dsemion.build_doubled_semion(cfg.rows, cfg.cols)
    elif cfg.family == "bilayer":
        a = lattice.build_toric_code(cfg.rows, cfg.cols, cfg.modulus)
        b = lattice.build_toric_code(cfg.rows, cfg.cols, cfg.modulus)
        worm = [d for d in cfg.defects if d["kind"].startswith("bilayer-wormhole")]
        if len(worm) != 1:
            raise ConfigError("bilayer model needs exactly one bilayer-wormhole defect")
        kv = worm[0]
        mouths = kv.get("mouths", "0,0,2,2").split(",")
        if len(mouths) != 4:
            raise ConfigError(f"line {kv.get('line')}: mouths needs x1,y1,x2,y2")
        m1 = (int(mouths[0]), int(mouths[1]))
        m2 = (int(mouths[2]), int(mouths[3]))
        model, rep = defects.couple_bilayer(a, b, kv["kind"].rsplit("-", 1)[-1],
                                            (m1, m2))
        reports.append(rep)
        rest = [d for d in cfg.defects if not d["kind"].startswith("bilayer-wormhole")]
        if rest:
            raise ConfigError("bilayer models support only the wormhole defect")
        return model, reports
    else:
        raise ConfigError(f"unknown model family {cfg.family!r}")
    for kv in cfg.defects:
        if kv["kind"].startswith("bilayer-wormhole"):
            raise ConfigError("bilayer wormholes need the bilayer model family")
        model, rep = _apply_defect(model, kv)
        reports.append(rep)
    return model, reports


def _plain_model(model):
    return model.model if isinstance(model, dsemion.DSModel) else model


def _decoder_for(model):
    fam = getattr(model, "family", "")
    if fam == "doubled-semion":
        ds = model if isinstance(model, dsemion.DSModel) else dsemion.DSModel(model)
        return lambda m, s: decoders.decode_doubled_semion(ds, s)
    return decoders.decode_toric


def _model_lines(model, reports):
    m = _plain_model(model)
    kinds = {}
    orders = {}
    for g in m.generators:
        kinds[g.kind] = kinds.get(g.kind, 0) + 1
        orders[g.order] = orders.get(g.order, 0) + 1
    lines = [f"model {m.family} {m.geometry.cols}x{m.geometry.rows} "
             f"modulus={m.modulus} qudits={m.n_sites}"]
    lines.append("generators " + " ".join(
        f"{k}={v}" for k, v in sorted(kinds.items())))
    lines.append("orders " + " ".join(
        f"order{k}={v}" for k, v in sorted(orders.items())))
    for i, rep in enumerate(reports):
        lines.append(f"defect-report {i} {rep.summary()}")
    return lines


def run(cfg: ExperimentConfig, seed_override: int = None) -> str:
    """Execute the configured pipeline and return the report document."""
    model, reports = build_model(cfg)
    m = _plain_model(model)
    seed = seed_override if seed_override is not None else cfg.seed
    lines = [REPORT_HEADER]
    lines += _model_lines(model, reports)
    outputs = cfg.outputs or [("dimension", {})]
    error = None
    if cfg.error_text is not None:
        error = from_text(cfg.error_text, m.modulus, m.n_sites)
    elif cfg.string_spec is not None:
        kind, path = cfg.string_spec
        if kind in ("e", "m"):
            error = lattice.toric_string_operator(m, list(path), kind)
        elif getattr(model, "family", "") == "doubled-semion":
            ds = model if isinstance(model, dsemion.DSModel) else dsemion.DSModel(model)
            error = dsemion.string_operator(ds, kind, list(path)).op
        else:
            raise ConfigError(f"string type {kind!r} needs the doubled-semion model")
    for name, kv in outputs:
        if name == "dimension":
            lines.append(f"dimension {engine.logical_dimension(m)}")
        elif name == "generators":
            for g in m.generators:
                lines.append(f"generator {g.gid} {g.kind} order={g.order} "
                             f"{to_text(g.op)}")
        elif name == "syndrome":
            if error is None:
                raise ConfigError("output syndrome needs an error line")
            syn = engine.syndrome(m, error)
            items = " ".join(f"{g}:{syn.exponents[g]}" for g in sorted(syn.exponents))
            lines.append(f"syndrome weight={syn.weight()} {items}".rstrip())
        elif name == "decode":
            if error is None:
                raise ConfigError("output decode needs an error line")
            decoder = _decoder_for(model)
            corr = decoder(m, engine.syndrome(m, error))
            out = decoders.decode_outcome(model if isinstance(model, dsemion.DSModel)
                                          else m, error, corr)
            lines.append(f"decode correction={to_text(corr.op)} "
                         f"trace={','.join(corr.trace) or '-'} "
                         f"success={str(out.success).lower()} class={out.logical_class}")
        elif name == "mc":
            if cfg.rate is None or cfg.trials is None:
                raise ConfigError("output mc needs a channel line")
            if seed is None:
                raise ConfigError("output mc needs a seed")
            decoder = _decoder_for(model)
            target = model if isinstance(model, dsemion.DSModel) else m
            res = decoders.monte_carlo_trial(target, decoder, cfg.rate,
                                             cfg.trials, seed)
            lo, hi = res.wilson_interval()
            lines.append(f"mc rate={res.error_rate} trials={res.trials} seed={res.seed} "
                         f"failures={res.failures} failure-rate={res.failure_rate:.6f} "
                         f"ci95={lo:.6f},{hi:.6f}")
            counts = " ".join(f"{k}={v}" for k, v in sorted(res.class_counts.items()))
            lines.append(f"mc-classes {counts}")
        elif name == "spin":
            if getattr(model, "family", "") != "doubled-semion":
                raise ConfigError("output spin needs the doubled-semion model")
            ds = model if isinstance(model, dsemion.DSModel) else dsemion.DSModel(model)
            which = kv.get("anyon")
            anyons = [which] if which else ["s", "sbar", "ssbar"]
            px = _as_int(kv, "x", 0, default=max(2, ds.geometry.cols // 2))
            py = _as_int(kv, "y", 0, default=max(2, ds.geometry.rows // 2))
            for anyon in anyons:
                k = dsemion.extract_topological_spin(ds, (px, py), anyon)
                lines.append(f"spin {anyon} = {turn_to_str(Fraction(k, 4))}")
        elif name == "condense":
            theory = _theory_by_name(kv.get("theory", "z4"))
            lines += _condense_lines(theory, kv.get("algebra", "1"))
        else:
            raise ConfigError(f"unknown output {name!r}")
    return "\n".join(lines) + "\n"


def _theory_by_name(name: str):
    name = name.lower().replace("-", "_")
    if name.startswith("z") and name[1:].isdigit():
        return builtin_theory("z_n", int(name[1:]))
    if name in ("toric", "semion", "doubled_semion", "ising", "ising_like_twist"):
        return builtin_theory(name)
    raise ConfigError(f"unknown theory {name!r}")


def _condense_lines(theory, algebra_text):
    summands = algebra_text.split("+")
    report = condense.validate_condensable(theory, summands)
    lines = [f"condense theory={theory.name} algebra={algebra_text}"]
    if not report.valid:
        kind, where, witness = report.first_failure()
        lines.append(f"condense-invalid {kind} at {where} witness={witness}")
        return lines
    alg = condense._algebra(theory, summands)
    if alg.boundary_tag:
        lines.append(f"condense-boundary {alg.boundary_tag}")
    mods = condense.right_modules(theory, alg)
    for mod in sorted(mods, key=lambda mm: mm.summands):
        status = "local" if mod.local else "confined"
        lines.append(f"module {mod.label()} {status}")
    new = condense.condensed_theory(theory, alg)
    lines.append("condensed-labels " + " ".join(new.labels))
    lines.append("condensed-twists " + " ".join(
        f"{l}:{turn_to_str(new.twist[l])}" for l in new.labels))
    return lines


def _catalog_lines(theory):
    lines = [f"theory {theory.name}"]
    lines.append("labels " + " ".join(theory.labels))
    for a in theory.labels:
        lines.append(f"dim {a} = {theory.dim[a]}")
    lines.append(f"total-dimension {theory.total_dim}")
    for a in theory.labels:
        t = theory.twist[a]
        lines.append(f"twist {a} = {turn_to_str(t)} (turn {t})")
    for a in theory.labels:
        for b in theory.labels:
            if theory.labels.index(b) < theory.labels.index(a):
                continue
            out = theory.fuse(a, b)
            pretty = " + ".join(
                (f"{m}*{c}" if m > 1 else c) for c, m in sorted(out.items()))
            lines.append(f"fuse {a} x {b} = {pretty}")
    try:
        s, t = modular_data(theory)
    except QuditLabError:
        return lines
    for i, a in enumerate(theory.labels):
        row = " ".join(
            f"{mag}*{turn_to_str(turn)}" if turn else str(mag)
            for (mag, turn) in s[i])
        lines.append(f"S {a} | {row}")
    return lines


def _emit(text: str, out_path, fmt: str):
    if fmt == "json":
        payload = {"lines": text.rstrip("\n").split("\n")}
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_config(path) -> ExperimentConfig:
    try:
        with open(path) as fh:
            return parse_config(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="quditlab",
        description="Qudit stabilizer laboratory: build lattice models, apply "
                    "defects, decode errors, and inspect anyon data.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, needs_config=True):
        if needs_config:
            p.add_argument("--config", required=True, help="config document path")
        p.add_argument("--seed", type=int, default=None, help="seed override")
        p.add_argument("--out", default=None, help="write the report here")
        p.add_argument("--format", default="text", choices=("text", "json"))

    for name, help_text in (
            ("run", "execute every output requested by the config"),
            ("build", "build the model and report its generator content"),
            ("dim", "report the logical dimension"),
            ("syndrome", "report the syndrome of the configured error"),
            ("decode", "decode the configured error"),
            ("mc", "run the configured Monte Carlo channel"),
            ("spin", "extract topological spins on the doubled-semion model")):
        p = sub.add_parser(name, help=help_text)
        add_common(p)
        if name == "spin":
            p.add_argument("--anyon", default=None, choices=("s", "sbar", "ssbar"))

    p = sub.add_parser("condense", help="condense a theory by a boson algebra")
    p.add_argument("theory")
    p.add_argument("algebra", help="e.g. 1+e2m2")
    add_common(p, needs_config=False)

    p = sub.add_parser("catalog", help="dump a built-in anyon theory")
    p.add_argument("theory")
    add_common(p, needs_config=False)

    args = parser.parse_args(argv)
    try:
        if args.command == "condense":
            theory = _theory_by_name(args.theory)
            text = "\n".join([REPORT_HEADER] +
                             _condense_lines(theory, args.algebra)) + "\n"
        elif args.command == "catalog":
            theory = _theory_by_name(args.theory)
            text = "\n".join([REPORT_HEADER] + _catalog_lines(theory)) + "\n"
        else:
            cfg = _load_config(args.config)
            if args.command == "build":
                cfg.outputs = [("dimension", {}), ("generators", {})]
            elif args.command == "dim":
                cfg.outputs = [("dimension", {})]
            elif args.command == "syndrome":
                cfg.outputs = [("syndrome", {})]
            elif args.command == "decode":
                cfg.outputs = [("decode", {})]
            elif args.command == "mc":
                cfg.outputs = [("mc", {})]
            elif args.command == "spin":
                which = {"anyon": args.anyon} if args.anyon else {}
                cfg.outputs = [("spin", which)]
            text = run(cfg, seed_override=args.seed)
        _emit(text, args.out, args.format)
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (InconsistentSyndromeError, DecodeNotFoundError) as exc:
        print(f"decode error: {exc}", file=sys.stderr)
        return EXIT_DECODE
    except QuditLabError as exc:
        print(f"model error: {exc}", file=sys.stderr)
        return EXIT_MODEL


if __name__ == "__main__":
    sys.exit(main())
