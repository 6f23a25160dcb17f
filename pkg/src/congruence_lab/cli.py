"""Command line entry point: congruence-lab <subcommand> ..."""
from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import invariants as inv
from .polyalg import check_modulus
from .schubert import SchubertClass, grassmannian_dim, pair
from .surfaces import EXPECTED_ORDER, ConstructionError, build_family
from .trisecant import SCHEMA, TrisecantReport, default_threads, estimate_order

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_CONSTRUCTION = 3

# expected order of the trisecant congruence, with the statement it encodes
EXPECTED = {
    "bordiga": (1, "the trisecant lines of a Bordiga surface generate a first order congruence"),
    "veronese": (1, "the trisecant lines of the smooth, projected Veronese surface in P^4 generate a first order congruence"),
    "veronese-degenerate": (0, "the projection from a point of the secant variety has not trisecants"),
    "delpezzo": (1, "the trisecants of the projected Del Pezzo quintic generate a first order congruence"),
    "scroll14": (1, "the trisecants of a quintic scroll projected from a non-secant line generate a first order congruence"),
    "scroll23": (1, "the trisecants of a quintic scroll projected from a non-secant line generate a first order congruence"),
    "quartic-scroll": (0, "the trisecants of the scrolls generate a congruence of order zero"),
    "zak": (1, "a general linear section of the secant variety of the rational normal quintic is a Bordiga surface"),
}
assert {k: v[0] for k, v in EXPECTED.items()} == EXPECTED_ORDER


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    q: int = 101
    seed: int = 0
    trials: int = 20
    threads: int | None = None
    out: str | None = None
    as_json: bool = False
    verbose: bool = False

    def __post_init__(self):
        try:
            check_modulus(self.q)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if self.trials < 1:
            raise UsageError("--trials must be at least 1")
        if self.threads is not None and self.threads < 1:
            raise UsageError("--threads must be at least 1")


def dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Schubert expressions
#
#   expr   := term (('+' | '-') term)*
#   term   := [int ['*']] factor ('*' factor)*
#   factor := atom ['^' int]
#   atom   := 's(' int [',' int] ')' | '(' expr ')'
#   input  := expr ['@' 'n' '=' int]


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.text = text
        self.pos = pos

    def caret(self) -> str:
        return f"{self.text}\n{' ' * self.pos}^"


_TOKEN = re.compile(r"\s*(?:(\d+)|(.))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.group(0).strip() == "":
            break
        start = m.start(1) if m.group(1) else m.start(2)
        if m.group(1):
            out.append(("int", m.group(1), start))
        else:
            out.append(("op", m.group(2), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, n: int | None):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.n = n

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind: str, value: str | None = None):
        tok = self.peek()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value if value is not None else kind
            got = tok[1] or "end of input"
            raise ParseError(f"expected {want!r}, found {got!r}", self.text, tok[2])
        self.i += 1
        return tok

    def integer(self) -> int:
        return int(self.take("int")[1])

    def parse(self) -> SchubertClass:
        # locate '@ n=..' first so that symbols know their Grassmannian
        for j, tok in enumerate(self.tokens):
            if tok == ("op", "@", tok[2]):
                save = self.i
                self.i = j + 1
                self.take("op", "n")
                self.take("op", "=")
                self.n = self.integer()
                self.take("end")
                self.tokens = self.tokens[:j] + [("end", "", tok[2])]
                self.i = save
                break
        if self.n is None:
            raise ParseError("missing '@ n=<int>'", self.text, len(self.text))
        if self.n < 2:
            raise ParseError("n must be at least 2", self.text, len(self.text))
        value = self.expr()
        self.take("end")
        return value

    def expr(self) -> SchubertClass:
        value = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op, pos = self.peek()[1], self.peek()[2]
            self.i += 1
            rhs = self.term()
            try:
                value = value + rhs if op == "+" else value - rhs
            except ValueError as exc:
                raise ParseError(str(exc), self.text, pos) from None
        return value

    def term(self) -> SchubertClass:
        coeff = 1
        if self.peek()[0] == "int":
            coeff = self.integer()
            if self.peek()[1] == "*":
                self.i += 1
        value = self.factor()
        while self.peek()[1] == "*":
            self.i += 1
            value = value * self.factor()
        return value.scale(coeff)

    def factor(self) -> SchubertClass:
        base = self.atom()
        if self.peek()[1] == "^":
            self.i += 1
            return base ** self.integer()
        return base

    def atom(self) -> SchubertClass:
        tok = self.peek()
        if tok[1] == "(":
            self.i += 1
            value = self.expr()
            self.take("op", ")")
            return value
        if tok[1] not in ("s", "σ"):
            raise ParseError(f"expected a symbol s(a,b), found {tok[1] or 'end of input'!r}", self.text, tok[2])
        self.i += 1
        self.take("op", "(")
        a = self.integer()
        b = 0
        if self.peek()[1] == ",":
            self.i += 1
            b = self.integer()
        self.take("op", ")")
        try:
            return SchubertClass.sigma(a, b, self.n)
        except ValueError as exc:
            raise ParseError(str(exc), self.text, tok[2]) from None


def parse_schubert(text: str, n: int | None = None) -> SchubertClass:
    return _Parser(text, n).parse()


def cmd_schubert(expr: str, n: int | None = None) -> dict:
    cls = parse_schubert(expr, n)
    result = {"schema": SCHEMA, "kind": "schubert", "expression": expr, "n": cls.n, "expansion": str(cls),
              "terms": [[a, b, c] for (a, b), c in cls.terms.items()]}
    if cls.codim == grassmannian_dim(cls.n):
        result["intersection_number"] = pair(cls, SchubertClass.sigma(0, 0, cls.n))
    return result


# ---------------------------------------------------------------------------
# invariants


def cmd_classify() -> dict:
    rows, excluded = inv.classify_p4_detailed()
    return {
        "schema": SCHEMA,
        "kind": "classification",
        "columns": ["m", "h", "k", "a", "x", "pi"],
        "rows": [{"values": list(r.as_tuple()), "audit": list(r.audit)} for r in rows],
        "exclusions": [{"m": e.m, "h": e.h, "reason": e.reason} for e in excluded],
    }


def _split_args(args: Sequence[str]) -> tuple[list[str], dict[str, str]]:
    pos, kw = [], {}
    for a in args:
        if "=" in a:
            k, v = a.split("=", 1)
            kw[k] = v
        else:
            pos.append(a)
    return pos, kw


def _ints(values: Sequence[str], count: int, usage: str) -> list[int]:
    if len(values) != count:
        raise UsageError(f"usage: {usage}")
    try:
        return [int(v) for v in values]
    except ValueError:
        raise UsageError(f"usage: {usage}") from None


def _pairs(values: Sequence[str], usage: str) -> list[tuple[int, int]]:
    try:
        return [tuple(int(x) for x in v.split(",")) for v in values]  # type: ignore[misc]
    except ValueError:
        raise UsageError(f"usage: {usage}") from None


def _fraction(v: Fraction) -> int | str:
    return int(v) if v.denominator == 1 else str(v)


INVARIANT_IDS = {
    "3ple": "m pi K2 chi [n=4]: trisecant (n-3)-planes through a general (n-4)-plane",
    "au": "m pi chi: apparent triple points of a surface in P^4",
    "parity": "chi pi: triple points of a smooth quintic in P^4",
    "double": "m pi K2 chi: double point residual, checked against 3ple - au",
    "cayley": "h m: class a = h(m-2) - C(m,3)",
    "k": "h m: multiplicity k = h - m + 2",
    "clebsch": "m pi: apparent double points of a space curve",
    "gate": "m: h = m(m+2)/6 - 1 when integral",
    "x": "m k a [n=4] [a2=0]: parasitic excess",
    "agen": "a0 a1 l,k ... [pure=0]: sum l_j k_j against a0 + a1",
    "bgen": "a0 a1 a2 x k,m ...: (a0+a1)^2 = x + sum k^2 m + a0 + 2a1 + a2",
    "mult": "mu ... [n=4]: parasitic multiplicity sum C(mu, n-1)",
    "decompose": "x [n=4]: parasitic plane decompositions",
    "focal": "n h ... [i=1,...]: focal length budget",
    "bounds": "n k': open bounds on the degree of the fundamental locus",
    "genus": "p_a a: sectional genus of the congruence",
}


def cmd_invariants(name: str, args: Sequence[str]) -> dict:
    if name not in INVARIANT_IDS:
        raise UsageError(f"unknown formula id {name!r}; choose from {', '.join(INVARIANT_IDS)}")
    usage = f"invariants {name} {INVARIANT_IDS[name].split(':')[0]}"
    pos, kw = _split_args(args)
    try:
        opt = {k: int(v) for k, v in kw.items() if k not in ("i",)}
    except ValueError:
        raise UsageError(f"usage: {usage}") from None
    value: object
    if name == "3ple":
        m, pi, K2, chi = _ints(pos, 4, usage)
        value = inv.triple_points_general(inv.SurfaceInvariants(opt.get("n", 4), m, pi, K2, chi))
    elif name == "au":
        m, pi, chi = _ints(pos, 3, usage)
        value = inv.triple_points_p4(m, pi, chi)
    elif name == "parity":
        chi, pi = _ints(pos, 2, usage)
        value = inv.smooth_quintic_parity(chi, pi)
    elif name == "double":
        m, pi, K2, chi = _ints(pos, 4, usage)
        value = inv.double_point_consistency(inv.SurfaceInvariants(4, m, pi, K2, chi))
    elif name == "cayley":
        h, m = _ints(pos, 2, usage)
        value = inv.cayley_class(h, m)
    elif name == "k":
        h, m = _ints(pos, 2, usage)
        value = inv.multiplicity_k(h, m)
    elif name == "clebsch":
        m, pi = _ints(pos, 2, usage)
        value = inv.clebsch_h(m, pi)
    elif name == "gate":
        (m,) = _ints(pos, 1, usage)
        value = inv.integrality_gate(m)
    elif name == "x":
        m, k, a = _ints(pos, 3, usage)
        value = inv.parasitic_excess(m, k, a, opt.get("n", 4), opt.get("a2", 0))
    elif name == "agen":
        a0, a1 = _ints(pos[:2], 2, usage)
        value = inv.check_agen(_pairs(pos[2:], usage), a0, a1, bool(opt.get("pure", 0)))
    elif name == "bgen":
        a0, a1, a2, x = _ints(pos[:4], 4, usage)
        value = inv.check_bgen(a0, a1, a2, x, _pairs(pos[4:], usage))
    elif name == "mult":
        value = inv.parasitic_multiplicity(_ints(pos, len(pos), usage), opt.get("n", 4))
    elif name == "decompose":
        (x,) = _ints(pos, 1, usage)
        value = [[list(p) for p in d.parts] for d in inv.decompose_x(x, opt.get("n", 4))]
    elif name == "focal":
        if len(pos) < 2:
            raise UsageError(f"usage: {usage}")
        n, *lengths = _ints(pos, len(pos), usage)
        indices = tuple(_ints(kw["i"].split(","), len(lengths), usage)) if "i" in kw else None
        value = inv.focal_budget_check(inv.FocalBudget(n, tuple(lengths), indices))
    elif name == "bounds":
        n, kp = _ints(pos, 2, usage)
        lo, hi = inv.degree_bounds(n, kp)
        value = [_fraction(lo), _fraction(hi)]
    else:  # genus
        p_a, a = _ints(pos, 2, usage)
        value = inv.congruence_sectional_genus(p_a, a)
    return {"schema": SCHEMA, "kind": "invariant", "id": name, "args": list(args), "value": value}


def format_value(value) -> str:
    if isinstance(value, list) and len(value) == 2 and all(isinstance(v, (int, str)) for v in value):
        return f"({value[0]},{value[1]})"
    if isinstance(value, bool):
        return str(value).lower()
    return "none" if value is None else str(value)


# ---------------------------------------------------------------------------
# surfaces and reports


def cmd_verify(family: str, config: RunConfig) -> TrisecantReport:
    if family not in EXPECTED:
        raise UsageError(f"unknown family {family!r}; choose from {', '.join(EXPECTED)}")
    model = build_family(family, config.q, config.seed)
    return estimate_order(
        model,
        config.trials,
        config.seed,
        threads=config.threads or default_threads(),
        expected=EXPECTED[family][0],
        family=family,
    )


def cmd_report(paths: Sequence[str]) -> dict:
    reports = []
    for path in paths:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        try:
            reports.append(TrisecantReport.from_dict(data))
        except (ValueError, KeyError) as exc:
            raise UsageError(f"{path}: {exc}") from None
    families: dict[str, list[TrisecantReport]] = {}
    for r in reports:
        families.setdefault(r.family, []).append(r)
    summary = []
    for family in sorted(families):
        rs = sorted(families[family], key=lambda r: (r.q, r.seed))
        modes = {str(r.q): r.mode for r in rs}
        # trial-by-trial agreement of counts across the reports of one family
        length = min(len(r.counts) for r in rs)
        same = sum(1 for i in range(length) if len({r.counts[i][1] for r in rs}) == 1)
        expected = EXPECTED.get(family, (rs[0].expected, ""))[0]
        summary.append({
            "family": family,
            "expected_order": expected,
            "observed_modes": modes,
            "agreement": len(set(modes.values())) == 1,
            "trial_agreement": round(same / length, 4) if length else None,
            "matches_expected": all(r.mode == expected for r in rs),
            "anomalies": sum(len(r.anomalies) for r in rs),
        })
    return {"schema": SCHEMA, "kind": "consolidated_report", "families": summary}


def cmd_build(family: str, config: RunConfig) -> dict:
    if family not in EXPECTED:
        raise UsageError(f"unknown family {family!r}; choose from {', '.join(EXPECTED)}")
    return build_family(family, config.q, config.seed).to_dict()


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print JSON instead of text")
    common.add_argument("--out", help="write the JSON result to this file")
    common.add_argument("-v", "--verbose", action="store_true")

    field = argparse.ArgumentParser(add_help=False)
    field.add_argument("--q", type=int, default=101, help="prime modulus (default 101)")
    field.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(prog="congruence-lab", description="Trisecant congruences of surfaces in P^4.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("schubert", parents=[common], help="expand a product of Schubert cycles")
    s.add_argument("expr", help="e.g. 's(1,0)^6 @ n=4'")
    s.add_argument("--n", type=int, help="ambient P^n when the expression has no '@ n=' suffix")

    sub.add_parser("classify", parents=[common], help="numerical classification in P^4")

    i = sub.add_parser("invariants", parents=[common], help="evaluate a formula")
    i.add_argument("name", help=", ".join(INVARIANT_IDS))
    i.add_argument("args", nargs="*")

    b = sub.add_parser("build", parents=[common, field], help="construct a surface model")
    b.add_argument("family", choices=list(EXPECTED))

    v = sub.add_parser("verify", parents=[common, field], help="estimate the order of the trisecant congruence")
    v.add_argument("family", choices=list(EXPECTED))
    v.add_argument("--trials", type=int, default=20)
    v.add_argument("--threads", type=int, default=None, help="worker threads (default $CONGRUENCE_LAB_THREADS or 1)")
    v.add_argument("--timing", action="store_true", help="include wall time in the JSON report")

    r = sub.add_parser("report", parents=[common], help="merge verification reports")
    r.add_argument("paths", nargs="*")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    want_json = args.json or bool(args.out)
    try:
        if args.command == "schubert":
            res = cmd_schubert(args.expr, args.n)
            text = res["expansion"] + "\n"
            if "intersection_number" in res:
                text += f"intersection number: {res['intersection_number']}\n"
        elif args.command == "classify":
            res = cmd_classify()
            lines = ["m h k a x pi"] + [" ".join(map(str, row["values"])) for row in res["rows"]]
            if args.verbose:
                for row in res["rows"]:
                    lines += ["  " + a for a in row["audit"]]
            lines += [f"excluded m={e['m']}" + (f" h={e['h']}" if e["h"] is not None else "") + f": {e['reason']}" for e in res["exclusions"]]
            text = "\n".join(lines) + "\n"
        elif args.command == "invariants":
            res = cmd_invariants(args.name, args.args)
            text = format_value(res["value"]) + "\n"
        elif args.command == "build":
            config = RunConfig("build", q=args.q, seed=args.seed)
            res = cmd_build(args.family, config)
            text = f"{args.family}: {len(res['generators'])} generators of degree {res['degree']} over F_{args.q}\n"
        elif args.command == "verify":
            threads = args.threads
            config = RunConfig("verify", q=args.q, seed=args.seed, trials=args.trials, threads=threads,
                               out=args.out, as_json=args.json, verbose=args.verbose)
            report = cmd_verify(args.family, config)
            out_text = report.to_json(timing=args.timing)
            if want_json:
                emit(out_text, args.out)
                if args.out:
                    sys.stderr.write(_verify_line(report))
            else:
                sys.stdout.write(_verify_line(report))
            return EXIT_OK if report.mode == report.expected else EXIT_MISMATCH
        else:
            res = cmd_report(args.paths)
            lines = ["family expected observed agreement"]
            for f in res["families"]:
                obs = ",".join(f"q{q}:{m}" for q, m in f["observed_modes"].items())
                lines.append(f"{f['family']} {f['expected_order']} {obs} {str(f['agreement']).lower()}")
            text = "\n".join(lines) + "\n"
    except ParseError as exc:
        sys.stderr.write(f"parse error: {exc}\n{exc.caret()}\n")
        return EXIT_USAGE
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except ConstructionError as exc:
        sys.stderr.write(f"construction failed: {exc}\n")
        return EXIT_CONSTRUCTION
    except (ValueError, inv.NonIntegralError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    if want_json:
        emit(dump(res), args.out)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _verify_line(report: TrisecantReport) -> str:
    counts = " ".join(str(c) for _, c in report.counts)
    status = "match" if report.mode == report.expected else "MISMATCH"
    return (f"{report.family} q={report.q} seed={report.seed}: mode {report.mode} "
            f"(expected {report.expected}, {status}); anomalies {len(report.anomalies)}; counts {counts}\n")


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
