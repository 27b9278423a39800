"""Command-line entry point: ``redgreen <subcommand> ...``.

Global options (accepted before or after the subcommand): ``--seed``,
``--tol`` and ``--format {human,machine}``. ``REDGREEN_SEED`` and
``REDGREEN_TOL`` override the built-in defaults; explicit flags win over both.
Machine output is one JSON object per line with sorted keys.

Exit codes: 0 ok, 2 bad arguments, 3 unreadable or malformed file,
4 validation failure, 5 degenerate input, 6 no witness, 7 soundness failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Optional, Sequence, TextIO

import numpy as np

from redgreen import catalog, entangle, wfrob
from redgreen import diagram as dg
from redgreen.diagram import Diagram
from redgreen.errors import (
    ArgumentError,
    DegenerateInputError,
    DimensionError,
    NoWitnessError,
    RedGreenError,
    SoundnessError,
)
from redgreen.evaluator import evaluate
from redgreen.fuzz import RULE_ORDER, verify_rules
from redgreen.generators import point_mult
from redgreen.phase import Color, Phase
from redgreen.qtensor import DEFAULT_TOL, QTensor
from redgreen.rewrite import RuleId, fuse_normalize

DIGITS = 15


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    tol: float = DEFAULT_TOL
    fmt: str = "human"

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise ArgumentError("seed must be a 64-bit unsigned integer")
        if not self.tol > 0:
            raise ArgumentError("tolerance must be positive")
        if self.fmt not in ("human", "machine"):
            raise ArgumentError(f"unknown format {self.fmt!r}")


# output ---------------------------------------------------------------------------


def _num(x) -> str:
    if isinstance(x, complex):
        return f"{x.real:.{DIGITS}g}{x.imag:+.{DIGITS}g}j"
    return f"{x:.{DIGITS}g}"


def _jsonable(x):
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, Phase):
        return str(x)
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if hasattr(x, "value") and not isinstance(x, (int, float, str, bool)):
        return x.value
    return x


def _human(x) -> str:
    if isinstance(x, (complex, np.complexfloating)):
        return _num(complex(x))
    if isinstance(x, (float, np.floating)):
        return _num(float(x))
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(_human(v) for v in x) + "]"
    if isinstance(x, dict):
        return "{" + ", ".join(f"{k}: {_human(v)}" for k, v in x.items()) + "}"
    if hasattr(x, "value") and not isinstance(x, (int, float, str, bool)):
        return str(x.value)
    return str(x)


class Emitter:
    def __init__(self, cfg: RunConfig, out: TextIO):
        self.cfg = cfg
        self.out = out

    def header(self, command: str):
        if self.cfg.fmt == "machine":
            self.record("config", command=command, seed=self.cfg.seed, tol=self.cfg.tol)
        else:
            self.out.write(f"# {command}  tolerance={self.cfg.tol:.3g}  seed={self.cfg.seed}\n")

    def record(self, kind: str, **fields):
        if self.cfg.fmt == "machine":
            self.out.write(json.dumps(_jsonable({"kind": kind, **fields}), sort_keys=True) + "\n")
        else:
            body = "  ".join(f"{k}={_human(v)}" for k, v in fields.items())
            self.out.write(f"{kind}: {body}\n" if body else f"{kind}\n")


def _tensor_fields(t: QTensor, tol: float) -> dict:
    """Nonzero amplitudes keyed by bit string (outputs then inputs)."""
    n = t.n_out + t.n_in
    amps = {}
    for k, z in enumerate(t.data):
        if abs(z) > tol:
            amps[format(k, f"0{n}b") if n else "scalar"] = complex(z)
    return {"n_in": t.n_in, "n_out": t.n_out, "amplitudes": amps}


# subcommands -------------------------------------------------------------------


def _load_state(path: str) -> QTensor:
    obj = catalog.load(path)
    if isinstance(obj, Diagram):
        obj = evaluate(obj)
    if not obj.is_state or obj.n_out != 3:
        raise DimensionError(f"expected a 3-qubit state, got a {obj.n_in}->{obj.n_out} tensor")
    return obj


def cmd_eval(args, cfg: RunConfig, em: Emitter) -> int:
    obj = catalog.load(args.file)
    t = evaluate(obj) if isinstance(obj, Diagram) else obj
    if args.scalar:
        if not t.is_scalar:
            raise DimensionError(f"diagram is {t.n_in}->{t.n_out}, not a scalar")
        em.record("scalar", value=t.scalar())
    else:
        em.record("tensor", **_tensor_fields(t, cfg.tol))
    return 0


def cmd_normalize(args, cfg: RunConfig, em: Emitter) -> int:
    obj = catalog.load(args.file)
    if not isinstance(obj, Diagram):
        raise ArgumentError("normalize needs a diagram file")
    res = fuse_normalize(obj)
    em.record("normalized", nodes=len(res.diagram.nodes), edges=len(res.diagram.edges), steps=len(res.steps), scalar=res.scalar)
    for k, app in enumerate(res.steps):
        em.record("step", index=k, rule=app.rule, site=list(app.site), scalar=app.scalar)
    if cfg.fmt == "machine":
        em.record("diagram", diagram=dg.to_dict(res.diagram))
    else:
        em.out.write(dg.dumps(res.diagram))
    return 0


def cmd_verify_rules(args, cfg: RunConfig, em: Emitter) -> int:
    rules = [RuleId(r) for r in args.rule] if args.rule else None
    reports = verify_rules(cfg.seed, args.instances, cfg.tol, rules, args.workers)
    ok = True
    for r in reports:
        em.record(
            "rule",
            rule=r.rule,
            passed=r.passed,
            instances=r.instances,
            max_deviation=r.max_deviation,
            max_scalar_error=r.max_scalar_error,
            status="pass" if r.ok else "FAIL",
        )
        if not r.ok:
            ok = False
            em.record("failure", rule=r.rule, detail=r.first_failure)
    if not ok:
        raise SoundnessError("at least one rule failed its soundness check")
    return 0


def _emit_tangles(em: Emitter, psi: QTensor, tol: float):
    rep = entangle.tangle_report(psi, tol)
    em.record("tangles", **rep.as_dict())
    em.record("hyperdeterminant_tangle", value=entangle.hyperdeterminant_tangle(psi))


def cmd_classify(args, cfg: RunConfig, em: Emitter) -> int:
    psi = _load_state(args.file)
    cls = entangle.classify_slocc(psi, cfg.tol)
    em.record("class", slocc=cls)
    _emit_tangles(em, entangle.normalize(psi), cfg.tol)
    if args.witness:
        if cls is not entangle.SloccClass.GHZ:
            raise NoWitnessError(f"a {cls.value} state is not reachable from GHZ by invertible local maps")
        wit = entangle.ghz_witness(psi)
        em.record("witness", **{k: [[complex(z) for z in row] for row in getattr(wit, k).matrix] for k in ("A1", "A2", "A3")})
    return 0


def cmd_tangle(args, cfg: RunConfig, em: Emitter) -> int:
    psi = _load_state(args.file)
    if np.linalg.norm(psi.data) == 0:
        raise DegenerateInputError("the zero vector has no tangles")
    _emit_tangles(em, entangle.normalize(psi), cfg.tol)
    return 0


def cmd_family(args, cfg: RunConfig, em: Emitter) -> int:
    ph = (args.alpha, args.beta, args.gamma)
    verdict = entangle.family_is_w_class(*ph, tol=cfg.tol)
    if verdict is entangle.FamilyVerdict.Degenerate:
        em.record("family", alpha=ph[0], beta=ph[1], gamma=ph[2], verdict=verdict, tangle=None)
        raise DegenerateInputError("the family state at these phases is the zero vector")
    em.record(
        "family", alpha=ph[0], beta=ph[1], gamma=ph[2], verdict=verdict, tangle=entangle.family_three_tangle(*ph)
    )
    if args.report:
        amp = entangle.family_amplitudes(*ph)
        em.record("amplitudes", a=amp.a, b=amp.b, c=amp.c, d=amp.d)
        em.record("conditions", vanishing=list(entangle.family_conditions(*ph)))
        psi = evaluate(dg.w_family_diagram(*ph))
        em.record("evaluated", slocc=entangle.classify_slocc(psi, cfg.tol))
        _emit_tangles(em, entangle.normalize(psi), cfg.tol)
        for k in range(3):
            c = entangle.plug_corner_analysis(*ph, corner=k, tol=cfg.tol)
            em.record(
                "corner", corner=k, combined=list(c.combined), verdict=c.verdict, rank=c.bipartite_rank, agrees=c.agrees
            )
    return 0


def cmd_scan(args, cfg: RunConfig, em: Emitter) -> int:
    rep = entangle.scan_family(args.denominator, cfg.tol, classify=not args.no_classify, workers=args.workers)
    for r in rep.rows:
        em.record(
            "point",
            p=list(r.numerators),
            verdict=r.verdict,
            tangle=r.tangle,
            slocc=r.slocc,
            flagged=r.flagged,
        )
    em.record("summary", q=rep.q, points=len(rep.rows), consistent=rep.consistent, **rep.counts())
    if not rep.consistent:
        raise SoundnessError(f"{len(rep.mismatches)} grid points disagree between tangle and plane membership")
    return 0


def cmd_supp(args, cfg: RunConfig, em: Emitter) -> int:
    xi, zeta = args.xi, args.zeta
    em.record("supplementarity", xi=xi, zeta=zeta, verdict=entangle.supplementarity(xi, zeta), point=list(point_mult(xi, zeta).data))
    return 0


def cmd_square4(args, cfg: RunConfig, em: Emitter) -> int:
    ok = True
    for r in entangle.square4_analysis(args.alpha, args.beta, args.gamma, args.delta, cfg.tol):
        ok &= r.agrees
        em.record(
            "pair", plugged=list(r.plugged), pattern=r.pattern, combined=list(r.combined), verdict=r.verdict, rank=r.bipartite_rank, agrees=r.agrees
        )
    em.record("summary", all_agree=ok)
    return 0


def cmd_wfrob_check(args, cfg: RunConfig, em: Emitter) -> int:
    p = wfrob.load_fixture_presentation(args.reading)
    rep = wfrob.verify_frobenius(p, cfg.tol)
    em.record("axioms", reading=args.reading, **rep.as_dict())
    lv = wfrob.loop_value(p, cfg.tol)
    em.record("loop", classification=lv.classification, rank=lv.rank)
    with_pi, with_zero = wfrob.orthogonality_scalars()
    em.record("orthogonality", with_pi_copoint=with_pi, with_zero_copoint=with_zero, holds=wfrob.verify_orthogonality(cfg.tol))
    em.record("pi_loop", X=wfrob.pi_loop_scalar(Color.X), Z=wfrob.pi_loop_scalar(Color.Z))
    if not rep.axioms_hold:
        raise SoundnessError(f"reading {args.reading!r} fails the Frobenius axioms")
    return 0


# parser -------------------------------------------------------------------------


def _phase(text: str) -> Phase:
    try:
        return Phase.parse(text)
    except RedGreenError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _global_options(p: argparse.ArgumentParser, suppress: bool):
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--seed", type=int, default=d, help="seed for randomized suites (env REDGREEN_SEED)")
    p.add_argument("--tol", type=float, default=d, help="numeric tolerance (env REDGREEN_TOL, default 1e-9)")
    p.add_argument("--format", dest="fmt", choices=["human", "machine"], default=d)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="redgreen", description=__doc__.splitlines()[0])
    _global_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        _global_options(sp, suppress=True)
        sp.set_defaults(func=func)
        return sp

    sp = add("eval", cmd_eval, "evaluate a diagram (or echo a tensor) file")
    sp.add_argument("file")
    sp.add_argument("--scalar", action="store_true", help="require a closed diagram and print its scalar")

    sp = add("normalize", cmd_normalize, "spider-fusion normal form of a diagram")
    sp.add_argument("file")

    sp = add("verify-rules", cmd_verify_rules, "fuzz every rewrite rule against the evaluator")
    sp.add_argument("--instances", type=int, default=100)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--rule", action="append", choices=[r.value for r in RULE_ORDER])

    sp = add("classify", cmd_classify, "SLOCC class and tangles of a 3-qubit state or diagram")
    sp.add_argument("file")
    sp.add_argument("--witness", action="store_true", help="also give local maps taking GHZ to the state")

    sp = add("tangle", cmd_tangle, "tangles of a 3-qubit state")
    sp.add_argument("file")

    sp = add("family", cmd_family, "the triangle phase family at one point")
    for name in ("alpha", "beta", "gamma"):
        sp.add_argument(f"--{name}", type=_phase, required=True, help="p/q means p*pi/q")
    sp.add_argument("--report", action="store_true")

    sp = add("scan", cmd_scan, "scan the phase family over (p/q) pi, 0 <= p < 2q")
    sp.add_argument("--denominator", type=int, required=True)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--no-classify", action="store_true", help="skip classifying the evaluated diagrams")

    sp = add("supp", cmd_supp, "supplementarity of two Z phases")
    sp.add_argument("xi", type=_phase)
    sp.add_argument("zeta", type=_phase)

    sp = add("square4", cmd_square4, "corner-pair plugging of the four-qubit square")
    for name in ("alpha", "beta", "gamma", "delta"):
        sp.add_argument(f"--{name}", type=_phase, required=True)

    sp = add("wfrob-check", cmd_wfrob_check, "Frobenius axioms, loop value and orthogonality of the W algebra")
    sp.add_argument("--reading", choices=wfrob.READINGS, default=wfrob.DEFAULT_READING)
    return parser


def _config(args) -> RunConfig:
    try:
        seed = args.seed if args.seed is not None else int(os.environ.get("REDGREEN_SEED", "0"))
        tol = args.tol if args.tol is not None else float(os.environ.get("REDGREEN_TOL", str(DEFAULT_TOL)))
    except ValueError as exc:
        raise ArgumentError(f"bad environment override: {exc}") from None
    return RunConfig(seed=seed, tol=tol, fmt=args.fmt or "human")


def run(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None, err: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config(args)
        em = Emitter(cfg, out)
        em.header(args.command)
        return args.func(args, cfg, em)
    except RedGreenError as exc:
        err.write(f"redgreen: {type(exc).__name__}: {exc}\n")
        return exc.exit_code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
