"""Command line front end.

Every subcommand reads exact JSON (file path or ``fixture:NAME``), prints
either plain text or a JSON document carrying a run manifest, and exits
with 0 on success, 2 on validation errors, 3 on infeasible/empty sets,
4 when an enumeration guard trips and 5 on certificate failures.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
from fractions import Fraction
from importlib import resources

from . import __version__
from .core import KnapsackInstance, Sense, is_superincreasing, validate
from .apps import MixedInstance, alpha_expansion_instance, integer_basis_instance, mixed_hull_extended
from .dpopt import optimize
from .errors import (
    CertificateFailed,
    EmptyCloud,
    Infeasible,
    LexknapError,
    TooLarge,
    UnboundedDetected,
    ValidationFailure,
    ZeroCoefficientRegime,
)
from .facets import facet_certificate, hull_ge, hull_le, phi
from .greedy import profile_for, uniqueness
from .intersect import (
    build_two_sided,
    case_classify,
    extended_formulation,
    intersection_hull,
    relaxed_intersection,
)
from .jsonio import (
    dumps,
    encode_number,
    hull_from_dict,
    hull_to_dict,
    instance_from_dict,
    instance_to_dict,
    row_to_dict,
)
from . import oracle


def _exit_code(err: LexknapError) -> int:
    if isinstance(err, (Infeasible, EmptyCloud)):
        return 3
    if isinstance(err, (TooLarge, UnboundedDetected)):
        return 4
    if isinstance(err, CertificateFailed):
        return 5
    return 2


def _read(path: str) -> tuple[dict, bytes]:
    if path.startswith("fixture:"):
        name = path[len("fixture:") :]
        raw = resources.files("lexknap").joinpath(f"fixtures/{name}.json").read_bytes()
    else:
        with open(path, "rb") as fh:
            raw = fh.read()
    return json.loads(raw), raw


def _load_instance(path: str) -> tuple[KnapsackInstance, bytes]:
    d, raw = _read(path)
    if "a" not in d:
        raise ValidationFailure(f"{path} does not contain an instance")
    return instance_from_dict(d), raw


def _digest(*chunks: bytes) -> str:
    return hashlib.sha256(b"\n--\n".join(chunks)).hexdigest()[:16]


def _vec(v) -> str:
    return " ".join(str(x) for x in v)


def _parse_costs(text: str) -> list:
    out = []
    for part in text.split(","):
        f = Fraction(part.strip())
        out.append(int(f) if f.denominator == 1 else f)
    return out


def _emit(args, result: dict, text: str, *, digest: str, seed: int | None, outcome: str) -> int:
    if args.format == "json":
        doc = {
            "manifest": {
                "command": args.command,
                "input": digest,
                "version": __version__,
                "seed": seed,
                "outcome": outcome,
            },
            "result": result,
        }
        sys.stdout.write(dumps(doc))
    else:
        sys.stdout.write(text + "\n" if text and not text.endswith("\n") else text)
    return 0


# ---------------------------------------------------------------------------
# Subcommands.


def _cmd_check(args) -> int:
    inst, raw = _load_instance(args.path)
    if inst.sense is Sense.GE:
        ok, idx = is_superincreasing(inst.a, inst.u)
        total = sum(ai * ui for ai, ui in zip(inst.a, inst.u))
        result = {
            "sense": "ge",
            "superincreasing": ok,
            "violation_index": idx,
            "total": total,
            "feasible": inst.b <= total,
        }
        text = (
            f"sense = ge\nsuperincreasing = {'yes' if ok else 'no'}\n"
            f"total = {total}\nfeasible = {'yes' if inst.b <= total else 'no'}"
        )
        outcome = "ge checked"
    else:
        vk = validate(inst)
        result = {
            "sense": "le",
            "superincreasing": True,
            "u_tightened": list(vk.inst.u),
            "nontrivial": vk.nontrivial,
        }
        text = (
            "sense = le\nsuperincreasing = yes\n"
            f"u_tightened = {_vec(vk.inst.u)}\n"
            f"nontrivial = {'yes' if vk.nontrivial else 'no'}"
        )
        outcome = "valid"
    return _emit(args, result, text, digest=_digest(raw), seed=None, outcome=outcome)


def _cmd_greedy(args) -> int:
    inst, raw = _load_instance(args.path)
    if inst.sense is not Sense.LE:
        raise ValidationFailure("greedy reports need a <=-instance")
    vk, gp = profile_for(inst)
    used = sum(ai * ti for ai, ti in zip(vk.inst.a, gp.theta))
    rep = uniqueness(vk, gp)
    result = {
        "theta": list(gp.theta),
        "used": used,
        "capacity": inst.b,
        "support": list(gp.support),
        "unique": rep.unique,
        "alternate": list(rep.alternate) if rep.alternate else None,
    }
    lines = [
        f"theta = {_vec(gp.theta)}",
        f"used = {used}",
        f"capacity = {inst.b}",
        f"support = {_vec(gp.support)}",
        f"unique = {'yes' if rep.unique else 'no'}",
    ]
    if rep.alternate:
        lines.append(f"alternate = {_vec(rep.alternate)}")
    return _emit(
        args, result, "\n".join(lines), digest=_digest(raw), seed=None, outcome=f"used={used}"
    )


def _cmd_facets(args) -> int:
    inst, raw = _load_instance(args.path)
    if inst.sense is Sense.LE:
        vk, gp = profile_for(inst)
        hull = hull_le(vk, gp)
    else:
        hull = hull_ge(inst.a, inst.u, inst.b)
    text = hull.render()
    return _emit(
        args,
        hull_to_dict(hull),
        text,
        digest=_digest(raw),
        seed=None,
        outcome=f"{len(hull.ineqs)} rows",
    )


def _cmd_optimize(args) -> int:
    inst, raw = _load_instance(args.path)
    if inst.sense is not Sense.LE:
        raise ValidationFailure("optimization needs a <=-instance")
    vk, gp = profile_for(inst)
    cloud = None
    if args.verify:
        cloud = oracle.enumerate_lattice(vk)

    def one(costs):
        res = optimize(vk, gp, costs)
        if cloud is not None:
            best, _ = oracle.brute_max(cloud, costs)
            if best != res.value:
                raise CertificateFailed(
                    f"dp value {res.value} != enumerated maximum {best} for c={costs}"
                )
        return res

    if args.costs is not None:
        costs = _parse_costs(args.costs)
        res = one(costs)
        result = {
            "value": encode_number(res.value),
            "solution": list(res.solution),
            "leaf": res.leaf,
            "leaves": list(res.leaves),
            "verified": bool(args.verify),
        }
        text = (
            f"value = {res.value}\nsolution = {_vec(res.solution)}\n"
            f"leaf = {res.leaf}\nleaves = {_vec(res.leaves)}"
        )
        return _emit(
            args, result, text, digest=_digest(raw), seed=None, outcome=f"value={res.value}"
        )

    if args.random <= 0:
        raise ValidationFailure("give --costs or a positive --random count")
    rng = random.Random(args.seed)
    runs = []
    lines = []
    for k in range(args.random):
        costs = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(inst.n)]
        costs = [int(f) if f.denominator == 1 else f for f in costs]
        res = one(costs)
        runs.append(
            {
                "costs": [encode_number(c) for c in costs],
                "value": encode_number(res.value),
                "solution": list(res.solution),
            }
        )
        lines.append(
            f"run {k + 1}: costs = {_vec(costs)}; value = {res.value}; "
            f"solution = {_vec(res.solution)}"
        )
    result = {"runs": runs, "verified": bool(args.verify)}
    return _emit(
        args,
        result,
        "\n".join(lines),
        digest=_digest(raw),
        seed=args.seed,
        outcome=f"{args.random} runs",
    )


def _load_pair(args) -> tuple[KnapsackInstance, KnapsackInstance, tuple[bytes, ...]]:
    if len(args.paths) == 1:
        d, raw = _read(args.paths[0])
        if "le" not in d or "ge" not in d:
            raise ValidationFailure("a single intersect argument must hold 'le' and 'ge'")
        return instance_from_dict(d["le"]), instance_from_dict(d["ge"]), (raw,)
    le, raw1 = _load_instance(args.paths[0])
    ge, raw2 = _load_instance(args.paths[1])
    return le, ge, (raw1, raw2)


def _cmd_intersect(args) -> int:
    le, ge, raws = _load_pair(args)
    try:
        ts = build_two_sided(le, ge)
    except ZeroCoefficientRegime:
        ge_rows = None
        if args.ge_facets:
            d, raw_f = _read(args.ge_facets)
            ge_rows = tuple(hull_from_dict(d).ineqs)
            raws = raws + (raw_f,)
        poly = relaxed_intersection(le, ge, ge_rows=ge_rows)
        vs = oracle.vertices(poly)
        vert_list = [[encode_number(v) for v in vert] for vert in vs.vertices]
        result = {"relaxation": True, "hull": hull_to_dict(poly), "vertices": vert_list}
        lines = ["relaxation = yes", poly.render()]
        for vert in vs.vertices:
            frac = any(Fraction(v).denominator > 1 for v in vert)
            lines.append(f"vertex = {_vec(vert)}" + (" [fractional]" if frac else ""))
        return _emit(
            args,
            result,
            "\n".join(lines),
            digest=_digest(*raws),
            seed=None,
            outcome="relaxation",
        )

    hull = intersection_hull(ts)
    case = "point" if ts.m == 0 else case_classify(ts).value
    result = {
        "relaxation": False,
        "case": case,
        "theta": list(ts.theta),
        "gamma": list(ts.gamma),
        "fixed_suffix": list(ts.fixed_suffix),
        "hull": hull_to_dict(hull),
    }
    lines = [
        f"case = {case}",
        f"theta = {_vec(ts.theta)}",
        f"gamma = {_vec(ts.gamma)}",
        f"fixed_suffix = {_vec(ts.fixed_suffix) if ts.fixed_suffix else '-'}",
        hull.render(),
    ]
    if args.extend:
        ef = extended_formulation(ts)
        result["extended"] = {
            "n": ef.n,
            "full_dim": ef.full_dim,
            "fixed_suffix": list(ef.fixed_suffix),
            "fixed_values": list(ef.fixed_values),
            "rows": [row_to_dict(r) for r in ef.rows],
            "g": [list(p) for p in ef.g],
            "h": [list(p) for p in ef.h],
        }
        lines.append(ef.render())
    return _emit(
        args,
        result,
        "\n".join(lines),
        digest=_digest(*raws),
        seed=None,
        outcome=f"case={case}",
    )


def _verify_one(path: str) -> tuple[dict, str, bytes]:
    d, raw = _read(path)
    identities = None
    if "le" in d and "ge" in d:
        ts = build_two_sided(instance_from_dict(d["le"]), instance_from_dict(d["ge"]))
        hull = intersection_hull(ts)
        cloud = oracle.enumerate_lattice(ts.as_pair())
        report = oracle.assert_integer_hull(hull, cloud)
        label = "two-sided"
    else:
        inst = instance_from_dict(d)
        if inst.sense is Sense.LE:
            vk, gp = profile_for(inst)
            hull = hull_le(vk, gp)
            cloud = oracle.enumerate_lattice(vk)
            report = oracle.assert_integer_hull(hull, cloud)
            for row in hull.ineqs:
                if row.tag.startswith("PACKING("):
                    j = int(row.tag[len("PACKING(") : -1])
                    cert = facet_certificate(vk, gp, j)
                    assert cert.verified
            identities = _check_coefficient_recursion(vk, gp)
            label = "packing"
        else:
            hull = hull_ge(inst.a, inst.u, inst.b)
            cloud = oracle.enumerate_lattice(inst)
            report = oracle.assert_integer_hull(hull, cloud)
            label = "covering"
    result = {
        "path": path,
        "kind": label,
        "points": len(cloud),
        "vertices": report.n_vertices,
        "identities": identities,
        "passed": report.passed,
    }
    text = f"ok {path}: kind={label} points={len(cloud)} vertices={report.n_vertices}"
    if identities is not None:
        text += f" identities={identities}"
    return result, text, raw


def _check_coefficient_recursion(vk, gp) -> int:
    """Re-derive every packing coefficient from the accumulation recursion."""
    u, theta = vk.inst.u, gp.theta
    checked = 0
    for j in range(1, vk.n):
        tail = gp.support_tail(j)
        for pos, i in enumerate(tail):
            below = sum(
                phi(vk, gp, j, k) * (u[k - 1] - theta[k - 1]) for k in tail[:pos]
            )
            if phi(vk, gp, j, i) != u[j - 1] - theta[j - 1] + below:
                raise CertificateFailed(f"coefficient recursion broke at j={j}, i={i}")
            checked += 1
    return checked


def _cmd_verify(args) -> int:
    results = []
    lines = []
    raws = []
    for path in args.paths:
        result, text, raw = _verify_one(path)
        results.append(result)
        lines.append(text)
        raws.append(raw)
    return _emit(
        args,
        {"systems": results},
        "\n".join(lines),
        digest=_digest(*raws),
        seed=None,
        outcome=f"verified {len(results)}",
    )


def _cmd_gen(args) -> int:
    seed = None
    if args.alpha is not None:
        if args.ubound is None:
            raise ValidationFailure("--alpha needs --ubound")
        inst = alpha_expansion_instance(args.alpha, args.ubound)
        stamp = f"alpha:{args.alpha}:{args.ubound}"
    elif args.basis is not None:
        chain = [int(v) for v in args.basis.split(",")]
        a, u = integer_basis_instance(chain, args.last_bound)
        b = sum(ai * ui for ai, ui in zip(a, u)) - 1
        inst = KnapsackInstance(a, u, b)
        stamp = f"basis:{args.basis}:{args.last_bound}"
    else:
        n = args.random_superincreasing
        if n is None:
            raise ValidationFailure("choose one of --alpha, --basis, --random-superincreasing")
        if n < 2:
            raise ValidationFailure("random instances need n >= 2")
        seed = args.seed
        rng = random.Random(seed)
        u = [rng.randint(1, args.umax) for _ in range(n)]
        a = [rng.randint(1, args.amax)]
        for i in range(n - 1):
            a.append(sum(ak * uk for ak, uk in zip(a, u)) + rng.randint(0, args.slackmax))
        b = rng.randint(max(ai * ui for ai, ui in zip(a, u)), sum(ai * ui for ai, ui in zip(a, u)) - 1)
        inst = KnapsackInstance(tuple(a), tuple(u), b)
        stamp = f"random:{n}:{seed}:{args.umax}:{args.amax}:{args.slackmax}"
    doc = instance_to_dict(inst)
    if args.format == "json":
        sys.stdout.write(dumps(doc))
        return 0
    text = f"a = {_vec(inst.a)}\nu = {_vec(inst.u)}\nb = {inst.b}\nsense = {inst.sense.value}"
    return _emit(
        args, doc, text, digest=_digest(stamp.encode()), seed=seed, outcome="generated"
    )


def _cmd_mixed(args) -> int:
    d, raw = _read(args.path)
    mi = MixedInstance(
        tuple(d["a"]), tuple(d["u"]), Fraction(d["ub_cont"]), Fraction(d["b"])
    )
    sys_ = mixed_hull_extended(mi)
    result = {
        "n": sys_.n,
        "rows": [row_to_dict(r) for r in sys_.rows],
        "tight_hull": hull_to_dict(sys_.tight_hull),
        "deep_hull": hull_to_dict(sys_.deep_hull),
    }
    return _emit(
        args,
        result,
        sys_.render(),
        digest=_digest(raw),
        seed=None,
        outcome=f"{len(sys_.rows)} rows",
    )


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lexknap", description=__doc__)
    p.add_argument("--version", action="version", version=f"lexknap {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def with_fmt(sp):
        sp.add_argument("--format", choices=("text", "json"), default="text")
        return sp

    sp = with_fmt(sub.add_parser("check", help="validate an instance"))
    sp.add_argument("path")
    sp.set_defaults(func=_cmd_check)

    sp = with_fmt(sub.add_parser("greedy", help="maximal packing report"))
    sp.add_argument("path")
    sp.set_defaults(func=_cmd_greedy)

    sp = with_fmt(sub.add_parser("facets", help="complete hull description"))
    sp.add_argument("path")
    sp.set_defaults(func=_cmd_facets)

    sp = with_fmt(sub.add_parser("optimize", help="linear optimization by leaf scan"))
    sp.add_argument("path")
    sp.add_argument("-c", "--costs", help="comma-separated rational costs")
    sp.add_argument("--random", type=int, default=0, help="number of random objectives")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--verify", action="store_true", help="cross-check by enumeration")
    sp.set_defaults(func=_cmd_optimize)

    sp = with_fmt(sub.add_parser("intersect", help="two-sided hull / relaxation"))
    sp.add_argument("paths", nargs="+", help="pair file, or <le> <ge>")
    sp.add_argument("--extend", action="store_true", help="emit the lifted (x,y) system")
    sp.add_argument("--ge-facets", help="facet rows for the >=-side (zero-coefficient regime)")
    sp.set_defaults(func=_cmd_intersect)

    sp = with_fmt(sub.add_parser("verify", help="certified hull checks by enumeration"))
    sp.add_argument("paths", nargs="+")
    sp.set_defaults(func=_cmd_verify)

    sp = with_fmt(sub.add_parser("gen", help="generate instances"))
    sp.add_argument("--alpha", type=int)
    sp.add_argument("--ubound", type=int)
    sp.add_argument("--basis", help="comma-separated divisor chain")
    sp.add_argument("--last-bound", type=int, default=None)
    sp.add_argument("--random-superincreasing", type=int, metavar="N")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--umax", type=int, default=4)
    sp.add_argument("--amax", type=int, default=4)
    sp.add_argument("--slackmax", type=int, default=3)
    sp.set_defaults(func=_cmd_gen)

    sp = with_fmt(sub.add_parser("mixed", help="continuous-slack disjunctive hull"))
    sp.add_argument("path")
    sp.set_defaults(func=_cmd_mixed)

    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except LexknapError as err:
        sys.stderr.write(f"error[{err.code}]: {err}\n")
        return _exit_code(err)
    except (OSError, ValueError, KeyError) as err:
        sys.stderr.write(f"error[input]: {err}\n")
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
