"""Command-line front end: ``codekit build|verify|distance|info``.

Exit codes: 0 success or pass, 1 verification failure, 2 usage,
constraint or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from codekit import __version__
from codekit import serialize as ser
from codekit.alphred import (
    audit_diamond,
    build_pipeline,
    desk_q2_schedule,
    diamond,
    gamma_exponent,
    make_input,
    schedule_b1,
    schedule_from_dict,
)
from codekit.classical import LinearCode, distance_bruteforce, rs_code
from codekit.css import CssCode, css_distance, distance_bound
from codekit.errors import BudgetExceeded, CodekitError
from codekit.gf import make_tower, parse_field
from codekit.multfriendly import MFCollection, lift_classical, mf_quantum, mf_rm, mf_rs, verify_mf
from codekit.transversal import (
    TransversalTriple,
    build_from_classical,
    derive_u_certificate,
    rs_transversal,
    verify_ccz,
)

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.replace(",", " ").split()]


def _out_path(args, default: str) -> Path:
    return Path(args.out) if args.out else Path(default)


def _emit(obj, args, default_name: str, provenance: dict) -> None:
    path = _out_path(args, default_name)
    ser.save(path, ser.make_bundle(obj, provenance))
    print(f"{_describe(obj)} -> {path}")


def _describe(obj) -> str:
    if isinstance(obj, LinearCode):
        return f"[{obj.n},{obj.k}]_{obj.field.order}"
    if isinstance(obj, CssCode):
        return f"[[{obj.n},{obj.k},≥{distance_bound(obj)}]]_{obj.field.order}"
    if isinstance(obj, TransversalTriple):
        d = min(distance_bound(c) for c in obj.codes)
        return f"[[{obj.n},{obj.k},≥{d}]]_{obj.field.order}"
    if isinstance(obj, MFCollection):
        return f"{obj.kind} MF collection m={obj.m} [{obj.n},{obj.k}]_{obj.field.order}"
    return repr(obj)


def _load(path: str, *kinds: type):
    bundle = ser.load(path)
    if kinds and not isinstance(bundle.payload, kinds):
        names = " or ".join(k.__name__ for k in kinds)
        raise ser.BundleError(f"{path} holds a {bundle.kind}, expected {names}")
    return bundle


# ---------------------------------------------------------------------------
# build


def cmd_build_rs(args) -> int:
    F = parse_field(args.q)
    t = rs_transversal(F, args.k, args.l)
    _emit(t, args, f"rs_q{F.order}_k{args.k}_l{args.l}.json", {"command": "build rs", "q": args.q, "k": args.k, "l": args.l})
    return EXIT_OK


def cmd_build_classical_rs(args) -> int:
    F = parse_field(args.q)
    pts = _ints(args.points) if args.points else list(range(F.order))
    c = rs_code(F, pts, args.k)
    _emit(c, args, f"classical_rs_q{F.order}_k{args.k}.json", {"command": "build classical-rs", "q": args.q, "k": args.k})
    return EXIT_OK


def cmd_build_transversal(args) -> int:
    c = _load(args.classical, LinearCode).payload
    t = build_from_classical(c, _ints(args.a_set), budget=args.budget)
    _emit(t, args, "transversal.json", {"command": "build transversal", "a_set": _ints(args.a_set)})
    return EXIT_OK


def cmd_build_mf(args) -> int:
    F = parse_field(args.q)
    tower = make_tower(F, args.k)
    if args.family == "rs":
        n = args.n if args.n is not None else F.order
        mf = mf_rs(F, n, args.k, args.m, tower)
    elif args.family == "rm":
        mf = mf_rm(F, args.k, args.m, tower)
    else:
        if args.r is None or args.l is None:
            raise CodekitError("quantum MF codes need --r and --l")
        mf = mf_quantum(F, args.k, args.r, args.l, args.m, tower)
    if args.lift and mf.kind == "classical":
        mf = lift_classical(mf)
    prov = {"command": f"build mf {args.family}", "q": args.q, "k": args.k, "m": args.m}
    _emit(mf, args, f"mf_{args.family}_q{F.order}_k{args.k}.json", prov)
    return EXIT_OK


def cmd_build_diamond(args) -> int:
    mf = _load(args.mf, MFCollection).payload
    triple = _load(args.triple, TransversalTriple).payload
    inp = make_input(mf, triple, args.r)
    out = diamond(inp)
    certs = []
    if args.audit:
        rep = audit_diamond(inp, out)
        print(f"proof-chain audit {'PASS' if rep.passed else 'FAIL'} ({rep.checked} tuples)")
        certs.append({"kind": "diamond-audit", "passed": rep.passed, "checked": rep.checked, "links": rep.links})
        if not rep.passed:
            for f in rep.failures[:5]:
                print(f"  {f}")
    path = _out_path(args, "diamond.json")
    ser.save(path, ser.make_bundle(out, {"command": "build diamond", "r": args.r}, certs))
    print(f"{_describe(out)} -> {path}")
    return EXIT_OK if all(c["passed"] for c in certs) else EXIT_FAIL


def cmd_build_pipeline(args) -> int:
    if args.schedule == "b1":
        if args.base_q is None or args.depth is None:
            raise CodekitError("--schedule b1 needs --base-q and --depth")
        F1 = parse_field(args.base_q)
        kbar = [None if x in ("", "-") else int(x) for x in args.kbar.split(",")] if args.kbar else None
        base = {key: val for key, val in (("k", args.base_k), ("l", args.base_l)) if val is not None}
        sched = schedule_b1(F1.order, args.depth, k_bar=kbar, base=base or None)
    elif args.schedule == "desk-q2":
        sched = desk_q2_schedule()
        F1 = parse_field("2")
    else:
        if not args.file:
            raise CodekitError("--schedule custom needs --file")
        sched = schedule_from_dict(json.loads(Path(args.file).read_text(encoding="utf-8")))
        F1 = parse_field(args.base_q) if args.base_q else parse_field(str(sched.q))
    for lv in sched.levels:
        print(f"level q={lv.q} family={lv.family} k̄={lv.k_bar} n̄={lv.n_bar} r={lv.r}")
    if sched.base:
        print(f"base RS over q={sched.q_top}: k={sched.base['k']} ℓ={sched.base['l']}")

    def progress(level: int, cur) -> None:
        print(f"  after level {level}: {_describe(cur)}")

    out = build_pipeline(sched, F1, progress=progress)
    name = f"pipeline_{sched.name}_q{sched.q}.json"
    _emit(out, args, name, {"command": "build pipeline", "schedule": sched.name})
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify / distance / info


def _write_cert(args, cert_dict: dict, kind: str) -> None:
    path = Path(args.cert_out) if args.cert_out else Path(f"{args.input}.{kind}.cert.json")
    path.write_text(json.dumps(cert_dict, sort_keys=True, indent=1, ensure_ascii=False) + "\n", encoding="utf-8")
    print(f"certificate -> {path}")


def cmd_verify(args) -> int:
    bundle = ser.load(args.input)
    obj = bundle.payload
    if args.what == "ccz":
        if not isinstance(obj, TransversalTriple):
            raise ser.BundleError("verify ccz needs a triple bundle")
        cert = verify_ccz(obj, args.mode, samples=args.samples, seed=args.seed)
    elif args.what == "u":
        if not isinstance(obj, TransversalTriple):
            raise ser.BundleError("verify u needs a triple bundle")
        ccz = verify_ccz(obj, args.mode, samples=args.samples, seed=args.seed) if obj.same_code else None
        cert = derive_u_certificate(obj, ccz)
    else:
        if not isinstance(obj, MFCollection):
            raise ser.BundleError("verify mf needs an MF collection bundle")
        cert = verify_mf(obj, args.mode, samples=args.samples, seed=args.seed)
    print(cert.summary())
    _write_cert(args, cert.to_dict(), args.what)
    return EXIT_OK if cert.passed else EXIT_FAIL


def _distance_lines(obj, budget: Optional[int]) -> list[str]:
    if isinstance(obj, LinearCode):
        return [f"exact {distance_bruteforce(obj, budget)}"]
    if isinstance(obj, CssCode):
        return [css_distance(obj, budget).describe()]
    if isinstance(obj, TransversalTriple):
        if obj.same_code:
            return [css_distance(obj.codes[0], budget).describe()]
        reps = [css_distance(c, budget) for c in obj.codes]
        worst = min(reps, key=lambda r: (r.value, r.exact))
        return [worst.describe()] + [f"code {h + 1}: {r.describe()}" for h, r in enumerate(reps)]
    if isinstance(obj, MFCollection):
        out = []
        for h, c in enumerate(obj.members):
            d = distance_bruteforce(c, budget) if isinstance(c, LinearCode) else None
            text = f"exact {d}" if d is not None else css_distance(c, budget).describe()
            out.append(f"member {h + 1}: {text}")
        return out
    raise ser.BundleError("no distance for this bundle kind")


def cmd_distance(args) -> int:
    obj = ser.load(args.input).payload
    for line in _distance_lines(obj, args.budget):
        print(line)
    return EXIT_OK


def cmd_info(args) -> int:
    bundle = ser.load(args.input)
    obj = bundle.payload
    print(f"kind: {bundle.kind}")
    if isinstance(obj, LinearCode):
        print(f"classical {_describe(obj)}")
    elif isinstance(obj, MFCollection):
        print(_describe(obj))
        print(f"tower: {obj.tower.base} ⊆ {obj.tower.ext}, gamma {list(obj.tower.gamma)}")
    else:
        code = obj.codes[0] if isinstance(obj, TransversalTriple) else obj
        d = min(distance_bound(c) for c in obj.codes) if isinstance(obj, TransversalTriple) else distance_bound(code)
        print(f"{_describe(obj)}  field {obj.field}")
        if d >= 2:
            print(f"gamma = log(n/k)/log(d) = {gamma_exponent(obj.n, obj.k, d):.3f}")
        if isinstance(obj, TransversalTriple):
            print(f"same code in all slots: {obj.same_code}")
            levels = obj.info.get("levels")
            if levels:
                print(f"{'level':>5} {'q':>6} {'family':>8} {'n̄':>7} {'k̄':>3} {'d̄':>3} {'r':>3}")
                for i, lv in enumerate(levels, 1):
                    print(
                        f"{i:>5} {lv['q']:>6} {lv['family']:>8} {lv['n_bar']:>7} {lv['k_bar']:>3} {lv['d_bar']:>3} {lv['r']:>3}"
                    )
                base = obj.info.get("base", {})
                print(f"base: [[{base.get('n')},{base.get('k')},≥{base.get('d')}]]_{base.get('q')}")
    prov = {k: v for k, v in bundle.provenance.items()}
    print("provenance: " + json.dumps(prov, sort_keys=True, ensure_ascii=False))
    for c in bundle.certificates:
        status = "PASS" if c.get("passed") else "FAIL"
        print(f"certificate {c.get('kind')}: {status}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="codekit", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"codekit {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    build = sub.add_parser("build", help="construct a code and write a bundle")
    bsub = build.add_subparsers(dest="what", required=True)

    def out_opt(sp):
        sp.add_argument("--out", "-o", help="output bundle path")

    sp = bsub.add_parser("rs", help="transversal-CCZ Reed-Solomon triple [[q−k, k, ℓ+1−k]]")
    sp.add_argument("--q", required=True, help='field, e.g. "13", "2^3", "4^2"')
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--l", type=int, required=True, help="ℓ, polynomial degree bound")
    out_opt(sp)
    sp.set_defaults(func=cmd_build_rs)

    sp = bsub.add_parser("classical-rs", help="classical Reed-Solomon code")
    sp.add_argument("--q", required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--points", help="evaluation points (default: all of F_q)")
    out_opt(sp)
    sp.set_defaults(func=cmd_build_classical_rs)

    sp = bsub.add_parser("transversal", help="triple from a classical code bundle and a set A")
    sp.add_argument("--classical", required=True)
    sp.add_argument("--a-set", required=True, help="coordinates, e.g. 5,6")
    sp.add_argument("--budget", type=int)
    out_opt(sp)
    sp.set_defaults(func=cmd_build_transversal)

    sp = bsub.add_parser("mf", help="multiplication-friendly collection")
    sp.add_argument("family", choices=["rs", "rm", "quantum"])
    sp.add_argument("--q", required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--m", type=int, default=4)
    sp.add_argument("--n", type=int, help="RS length (default q)")
    sp.add_argument("--r", type=int, help="quantum: |A|")
    sp.add_argument("--l", type=int, help="quantum: ℓ")
    sp.add_argument("--lift", action="store_true", help="lift a classical collection to CSS codes")
    out_opt(sp)
    sp.set_defaults(func=cmd_build_mf)

    sp = bsub.add_parser("diamond", help="alphabet reduction of a triple by an MF collection")
    sp.add_argument("--mf", required=True)
    sp.add_argument("--triple", required=True)
    sp.add_argument("--r", type=int, default=1)
    sp.add_argument("--audit", action="store_true", help="also run the proof-chain audit")
    out_opt(sp)
    sp.set_defaults(func=cmd_build_diamond)

    sp = bsub.add_parser("pipeline", help="iterated alphabet reduction")
    sp.add_argument("--schedule", required=True, choices=["b1", "desk-q2", "custom"])
    sp.add_argument("--file", help="JSON schedule for --schedule custom")
    sp.add_argument("--base-q")
    sp.add_argument("--depth", type=int, help="T: T−1 MF levels and a base code over q_T")
    sp.add_argument("--kbar", help="b1: comma-separated per-level k̄ overrides")
    sp.add_argument("--base-k", type=int, help="b1: override the base code's k")
    sp.add_argument("--base-l", type=int, help="b1: override the base code's ℓ")
    out_opt(sp)
    sp.set_defaults(func=cmd_build_pipeline)

    ver = sub.add_parser("verify", help="verify a bundle and write a certificate")
    ver.add_argument("what", choices=["ccz", "u", "mf"])
    ver.add_argument("--in", dest="input", required=True)
    ver.add_argument("--mode", choices=["det", "rand"], default="det")
    ver.add_argument("--samples", type=int, default=1000)
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--cert-out", help="certificate path (default: next to the bundle)")
    ver.set_defaults(func=cmd_verify)

    dist = sub.add_parser("distance", help="exact distance or certified lower bound")
    dist.add_argument("--in", dest="input", required=True)
    dist.add_argument("--budget", type=int, help="enumeration budget (default CODEKIT_BUDGET or 2^24)")
    dist.set_defaults(func=cmd_distance)

    info = sub.add_parser("info", help="parameters, γ and provenance of a bundle")
    info.add_argument("--in", dest="input", required=True)
    info.set_defaults(func=cmd_info)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_ERROR
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (CodekitError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
