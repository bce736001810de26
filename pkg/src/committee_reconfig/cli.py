"""Command-line front end.

Exit codes: 0 positive answer, 1 negative answer (axiom violated, no path,
structure absent), 2 usage or input error, 3 resource budget exceeded.
``isolation`` reports a radius rather than a verdict and exits 0 on success.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence, TextIO

from . import schemas
from .axioms import check
from .core import InstanceFormatError, as_committee, load_instance, parse_committee, parse_fraction, serialize_instance
from .domains import connect_jr_ci, connect_jr_vi, recognize_ci, recognize_vi
from .generators import FAMILIES, FamilyTooLarge, describe, gen_fixture
from .reconfig import (
    NOT_ISOLATED,
    BudgetExceeded,
    Predicate,
    bfs_connect,
    committee_graph_dot,
    connect_affordable,
    connect_ejr_4approx,
    connect_rule_outputs,
    connect_two_jr,
    isolation_radius,
    non_isolation_witness,
)
from .reconfig.search import neighbors, satisfying_committees
from .reductions import Layout, parse_sat, sat_to_jr_reconfig
from .rules import RULES, TooLarge, run_rule

OK, NEGATIVE, USAGE, BUDGET = 0, 1, 2, 3
DEFAULT_NODE_BUDGET = 10**6
PATH_METHODS = ("bfs", "two-jr", "four-ejr", "affordable", "rules", "ci", "vi")


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# -- argument helpers ----------------------------------------------------------


def _instance(spec: str):
    """A path to an instance file, or ``fixture:NAME``."""
    if spec.startswith("fixture:"):
        return gen_fixture(spec.split(":", 1)[1]).instance
    return load_instance(spec)


def _committee(inst, text: Optional[str], flag: str, size: Optional[int] = None):
    if text is None:
        raise UsageError(f"{flag} is required")
    if size is None:
        return as_committee(inst, parse_committee(text), max_size=inst.k)
    return as_committee(inst, parse_committee(text), size)


def _predicate(name: str, alpha) -> Predicate:
    if name == "jr":
        return Predicate.jr(alpha)
    if name == "ejr":
        return Predicate.ejr(alpha)
    if alpha != 1:
        raise UsageError("ejr+ has no approximate version")
    return Predicate.ejr_plus()


def _params(text: str) -> dict:
    out = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        if "=" not in part:
            raise UsageError(f"parameter {part!r} must look like key=value")
        key, val = part.split("=", 1)
        out[key.strip()] = val.strip()
    return out


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="committee-reconfig", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, instance=True):
        if instance:
            sp.add_argument("--instance", required=True, help="instance file or fixture:NAME")
        sp.add_argument("--pretty", action="store_true", help="human-readable output")

    sp = sub.add_parser("check", help="test a committee against an axiom")
    common(sp)
    sp.add_argument("--axiom", choices=("jr", "ejr", "ejr+"), required=True)
    sp.add_argument("--committee", required=True)
    sp.add_argument("--alpha", type=parse_fraction, default=1)
    sp.add_argument("--mode", choices=("proof", "literal"), default="proof")

    sp = sub.add_parser("rule", help="run a voting rule")
    common(sp)
    sp.add_argument("--rule", choices=RULES, required=True)

    sp = sub.add_parser("path", help="transition path between two committees")
    common(sp)
    sp.add_argument("--method", choices=PATH_METHODS, required=True)
    sp.add_argument("--from", dest="source")
    sp.add_argument("--to", dest="target")
    sp.add_argument("--pred", choices=("jr", "ejr", "ejr+"), default="jr")
    sp.add_argument("--alpha", type=parse_fraction, default=1)
    sp.add_argument("--rule", choices=RULES)
    sp.add_argument("--rule2", choices=RULES)
    sp.add_argument("--node-budget", type=int, default=DEFAULT_NODE_BUDGET)

    sp = sub.add_parser("isolation", help="isolation radius or a near neighbour")
    common(sp)
    sp.add_argument("--committee")
    sp.add_argument("--pred", choices=("jr", "ejr", "ejr+"), default="jr")
    sp.add_argument("--alpha", type=parse_fraction, default=1)
    sp.add_argument("--max-radius", type=int)
    sp.add_argument("--node-budget", type=int, default=DEFAULT_NODE_BUDGET)
    sp.add_argument("--sidecar", help="gen sidecar whose class representatives replace the full scan")
    sp.add_argument("--rule", choices=("pav", "mes", "gjcr"), help="find a neighbour of this rule's output")

    sp = sub.add_parser("domain", help="recognise candidate- or voter-interval structure")
    common(sp)
    sp.add_argument("--recognize", choices=("ci", "vi"), required=True)

    sp = sub.add_parser("gen", help="generate an instance family")
    common(sp, instance=False)
    sp.add_argument("--family", choices=FAMILIES, required=True)
    sp.add_argument("--params", default="", help="comma-separated key=value pairs")
    sp.add_argument("--out", required=True, help="instance file to write")
    sp.add_argument("--sidecar", help="annotation file (default: OUT.json)")

    sp = sub.add_parser("reduce", help="reduce SAT reconfiguration to JR reconfiguration")
    common(sp, instance=False)
    sp.add_argument("--sat", required=True)
    sp.add_argument("--out", help="write the instance here and print a JSON summary")

    sp = sub.add_parser("graph", help="predicate-restricted committee graph")
    common(sp)
    sp.add_argument("--pred", choices=("jr", "ejr", "ejr+"), default="jr")
    sp.add_argument("--alpha", type=parse_fraction, default=1)
    sp.add_argument("--emit", choices=("dot", "json"), default="dot")
    sp.add_argument("--node-budget", type=int, default=DEFAULT_NODE_BUDGET)
    return p


# -- subcommands ---------------------------------------------------------------


def _cmd_check(a):
    inst = _instance(a.instance)
    W = _committee(inst, a.committee, "--committee", inst.k)
    if a.axiom == "ejr+" and a.alpha != 1:
        raise UsageError("ejr+ has no approximate version")
    wit = check(inst, W, a.axiom, a.alpha, a.mode)
    if wit is None:
        return OK, "check", {"satisfied": True}
    return NEGATIVE, "check", {"satisfied": False, "witness": wit.to_json()}


def _cmd_rule(a):
    inst = _instance(a.instance)
    return OK, "rule", run_rule(inst, a.rule).to_json()


def _path_doc(method: str, path, label: str):
    if path is None:
        return NEGATIVE, "path", {"method": method, "connected": False, "predicate": label}
    return OK, "path", {"method": method, "connected": True, **path.to_json()}


def _cmd_path(a):
    inst = _instance(a.instance)
    m = a.method
    if m == "rules":
        if not a.rule or not a.rule2:
            raise UsageError("--method rules needs --rule and --rule2")
        W = run_rule(inst, a.rule).committee if a.source is None else _committee(inst, a.source, "--from", inst.k)
        W2 = run_rule(inst, a.rule2).committee if a.target is None else _committee(inst, a.target, "--to", inst.k)
        return _path_doc(m, connect_rule_outputs(inst, W, a.rule, W2, a.rule2), "jr")
    if m == "affordable":
        A = _committee(inst, a.source, "--from")
        B = _committee(inst, a.target, "--to")
        return _path_doc(m, connect_affordable(inst, A, B), "jr")
    W = _committee(inst, a.source, "--from", inst.k)
    W2 = _committee(inst, a.target, "--to", inst.k)
    if m == "bfs":
        pred = _predicate(a.pred, a.alpha)
        return _path_doc(m, bfs_connect(inst, W, W2, pred, a.node_budget), pred.label)
    if m == "two-jr":
        return _path_doc(m, connect_two_jr(inst, W, W2), "2/1-jr")
    if m == "four-ejr":
        return _path_doc(m, connect_ejr_4approx(inst, W, W2), "4/1-ejr")
    cert = (recognize_ci if m == "ci" else recognize_vi)(inst)
    if cert is None:
        raise UsageError(f"instance is not {m.upper()}")
    fn = connect_jr_ci if m == "ci" else connect_jr_vi
    return _path_doc(m, fn(inst, cert, W, W2), "jr")


def _cmd_isolation(a):
    inst = _instance(a.instance)
    if a.rule is not None:
        if a.pred == "jr":
            raise UsageError("--rule needs --pred ejr or ejr+")
        W = run_rule(inst, a.rule).committee if a.committee is None else _committee(inst, a.committee, "--committee", inst.k)
        hit = non_isolation_witness(inst, W, a.rule, a.pred)
        doc = {
            "committee": list(W),
            "predicate": a.pred,
            "max_radius": inst.k - 1 if a.max_radius is None else a.max_radius,
            "radius": NOT_ISOLATED,
            "neighbor": hit.to_json(),
        }
        return OK, "isolation", doc
    W = _committee(inst, a.committee, "--committee", inst.k)
    pred = _predicate(a.pred, a.alpha)
    restrict = None
    max_r = a.max_radius
    if a.sidecar is not None:
        with open(a.sidecar) as fh:
            side = json.load(fh)
        reps = side.get("automorphism_classes")
        if not reps:
            raise UsageError("sidecar has no automorphism_classes")
        restrict = [tuple(r["committee"]) for r in reps]
        if max_r is None:
            max_r = max(len(set(W) - set(c)) for c in restrict)
    if max_r is None:
        max_r = inst.k - 1
    radius = isolation_radius(inst, W, pred, max_r, restrict, a.node_budget)
    doc = {"committee": list(W), "predicate": pred.label, "max_radius": max_r, "radius": radius}
    return OK, "isolation", doc


def _cmd_domain(a):
    inst = _instance(a.instance)
    cert = (recognize_ci if a.recognize == "ci" else recognize_vi)(inst)
    if cert is None:
        return NEGATIVE, "domain", {"kind": a.recognize, "ordering": "absent"}
    return OK, "domain", cert.to_json()


def _cmd_gen(a):
    desc = describe(a.family, **_params(a.params))
    side_path = a.sidecar or a.out + ".json"
    with open(a.out, "w") as fh:
        fh.write(serialize_instance(desc.instance))
    doc = desc.sidecar()
    with open(side_path, "w") as fh:
        json.dump(doc, fh, separators=(",", ":"))
        fh.write("\n")
    return OK, "gen", {**doc, "instance": a.out, "sidecar": side_path}


def _cmd_reduce(a):
    with open(a.sat) as fh:
        sri = parse_sat(fh.read())
    inst, W1, W2 = sat_to_jr_reconfig(sri)
    L = Layout(len(sri.padded_clauses()), sri.num_vars)
    text = (
        f"# committee phi1: {','.join(map(str, W1))}\n"
        f"# committee phi2: {','.join(map(str, W2))}\n"
        f"# clauses {L.a} variables {L.b} dummies {L.q}\n"
        + serialize_instance(inst)
    )
    if a.out is None:
        return OK, None, text
    with open(a.out, "w") as fh:
        fh.write(text)
    doc = {"n": inst.n, "m": inst.m, "k": inst.k, "W1": list(W1), "W2": list(W2), "instance": a.out}
    return OK, "reduce", doc


def _cmd_graph(a):
    inst = _instance(a.instance)
    pred = _predicate(a.pred, a.alpha)
    if a.emit == "dot":
        return OK, None, committee_graph_dot(inst, pred, a.node_budget)
    nodes = satisfying_committees(inst, pred, a.node_budget)
    index = {W: i for i, W in enumerate(nodes)}
    edges = []
    for W, i in index.items():
        for nxt in neighbors(inst, W):
            j = index.get(nxt)
            if j is not None and i < j:
                edges.append([i, j])
    return OK, "graph", {"predicate": pred.label, "nodes": [list(W) for W in nodes], "edges": edges}


COMMANDS = {
    "check": _cmd_check,
    "rule": _cmd_rule,
    "path": _cmd_path,
    "isolation": _cmd_isolation,
    "domain": _cmd_domain,
    "gen": _cmd_gen,
    "reduce": _cmd_reduce,
    "graph": _cmd_graph,
}


# -- output ----------------------------------------------------------------------


def _pretty(kind: str, doc: dict) -> str:
    if kind == "check":
        if doc["satisfied"]:
            return "satisfied\n"
        w = doc["witness"]
        return (
            f"violated: {w['axiom']} (alpha {w['alpha']}, ell {w['ell']})\n"
            f"  candidates {w['candidates']}\n  voters     {w['voters']}\n"
        )
    if kind == "path" and doc["connected"]:
        lines = [f"{doc['method']} path, {doc['length']} moves, predicate {doc['predicate']}"]
        for i, s in enumerate(doc["steps"]):
            mark = "ok" if s["ok"] else "FAIL"
            lines.append(f"  {i:3d}  {{{','.join(map(str, s['committee']))}}}  {mark}")
        return "\n".join(lines) + "\n"
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _emit(out: TextIO, kind: Optional[str], doc, pretty: bool) -> None:
    if kind is None:
        out.write(doc)
        return
    schemas.validate(kind, doc)
    if pretty:
        out.write(_pretty(kind, doc))
    else:
        out.write(json.dumps(doc, separators=(",", ":")) + "\n")


def _error(err: TextIO, kind: str, message: str) -> None:
    err.write(json.dumps({"error": kind, "message": message}, separators=(",", ":")) + "\n")


def run(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    """Execute one command; returns the exit code."""
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = _build_parser()
    try:
        args = parser.parse_args(list(sys.argv[1:] if argv is None else argv))
    except UsageError as exc:
        _error(err, "usage", str(exc))
        return USAGE
    except SystemExit as exc:  # --help
        return OK if not exc.code else USAGE
    threads = os.environ.get("COMMITTEE_RECONFIG_THREADS")
    if threads is not None and (not threads.isdigit() or int(threads) < 1):
        _error(err, "usage", "COMMITTEE_RECONFIG_THREADS must be a positive integer")
        return USAGE
    try:
        code, kind, doc = COMMANDS[args.command](args)
    except (BudgetExceeded, TooLarge, FamilyTooLarge) as exc:
        _error(err, "budget", str(exc))
        return BUDGET
    except (UsageError, InstanceFormatError, ValueError, KeyError, OSError) as exc:
        _error(err, "usage", str(exc))
        return USAGE
    _emit(out, kind, doc, args.pretty)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
