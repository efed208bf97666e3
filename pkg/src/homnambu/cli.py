"""``homnambu`` command-line front end.

Exit status: 0 when every check holds, 1 when a check fails or a domain
precondition is violated, 2 for usage and document errors.
"""

from __future__ import annotations

import argparse
import json
import shlex
import sys
from dataclasses import dataclass, field
from typing import Sequence

from .algebras import CheckReport, check_binary_endomorphism, check_hom_jacobi, check_trace_function
from .compat import (
    CompatTriple,
    check_compatibility,
    check_kernel_stability,
    classify_triple,
    solve_beta_space,
)
from .documents import AlgebraDocument, fixture_names, resolve_input
from .errors import (
    DocumentError,
    HomNambuError,
    HypothesisFailure,
    ParseError,
    UndeclaredParameter,
    UnknownName,
)
from .jacobian import (
    PolyMap,
    check_fundamental_identity,
    check_twisted_hom_nambu,
    jacobian_bracket,
    tripoly,
)
from .linalg import Matrix
from .ternary import (
    check_hom_nambu,
    check_ternary_endomorphism,
    check_ternary_skew_equivalence,
    induce_ternary,
    twist_by_endomorphism,
)

BINARY_CHECKS = ("skew", "hom-jacobi", "trace", "hom-nambu", "endo")
TERNARY_CHECKS = ("skew", "hom-nambu", "endo")


@dataclass
class RunReport:
    command: str
    checks: list = field(default_factory=list)  # (label, CheckReport, basis names or None)
    facts: list = field(default_factory=list)  # (key, text)
    warnings: list = field(default_factory=list)
    provenance: str | None = None
    error: str | None = None
    usage_error: bool = False

    @property
    def exit_code(self) -> int:
        if self.usage_error:
            return 2
        if self.error is not None or any(not r.holds for _, r, _ in self.checks):
            return 1
        return 0

    def check(self, label: str, report: CheckReport, names=None) -> CheckReport:
        self.checks.append((label, report, names))
        return report

    def fact(self, key: str, value) -> None:
        self.facts.append((key, value))

    # -- rendering ----------------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "command": self.command,
            "checks": [_report_json(label, r, names) for label, r, names in self.checks],
            "facts": [{"key": k, "value": v} for k, v in self.facts],
            "warnings": list(self.warnings),
            "provenance": self.provenance,
            "error": self.error,
            "exit_code": self.exit_code,
        }

    def render(self, fmt: str = "text") -> str:
        if fmt == "json":
            return json.dumps(self.to_json(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"
        lines = [f"command: {self.command}"]
        if self.provenance:
            lines.append(f"provenance: {self.provenance}")
        lines += [f"warning: {w}" for w in self.warnings]
        for label, r, names in self.checks:
            d = _report_json(label, r, names)
            line = f"check {label}: {r.verdict}"
            if not r.holds:
                line += f" witness ({', '.join(d['witness'])}) residual ({', '.join(d['residual'])})"
            lines.append(line)
            if d["assumptions"]:
                lines.append(f"  assuming nonzero: {', '.join(d['assumptions'])}")
        for key, value in self.facts:
            if isinstance(value, list):
                lines.append(f"{key}:")
                lines += [f"  {v}" for v in value]
            else:
                lines.append(f"{key}: {value}")
        if self.error:
            lines.append(f"error: {self.error}")
        lines.append(f"exit: {self.exit_code}")
        return "\n".join(lines) + "\n"


def _report_json(label: str, r: CheckReport, names) -> dict:
    def wit(i):
        return names[i] if names is not None and isinstance(i, int) and 0 <= i < len(names) else str(i)

    return {
        "check": label,
        "verdict": r.verdict,
        "witness": [wit(i) for i in r.witness] if r.witness is not None else None,
        "residual": [x.to_text() for x in r.residual] if r.residual is not None else None,
        "assumptions": [a.to_text() for a in r.pivot_assumptions],
        "parts": {k: p.verdict for k, p in r.parts.items()},
    }


def _vector_text(names, vec) -> str:
    out = ""
    for i, s in enumerate(vec):
        if s.is_zero():
            continue
        text = s.to_text()
        sign = "+"
        if text.startswith("-") and " " not in text:
            sign, text = "-", (-s).to_text()
        if " " in text and s.is_polynomial():
            text = f"({text})"
        term = names[i] if text == "1" else f"{text}*{names[i]}"
        out += f" {sign} {term}" if out else ("-" if sign == "-" else "") + term
    return out or "0"


def _matrix_text(m: Matrix) -> str:
    return "[" + "; ".join(", ".join(x.to_text() for x in row) for row in m.entries) + "]"


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------

def _load(args) -> AlgebraDocument:
    doc = resolve_input(args.input)
    if doc.constraints and not args.no_constraints:
        doc = doc.apply_constraints()
    return doc


def _pick(explicit: str | None, doc_names, fallback: str | None) -> str:
    if explicit:
        return explicit
    if fallback in doc_names:
        return fallback
    raise UnknownName(f"no {fallback!r} in the document; pass the name explicitly")


def _tau(args, doc):
    return _pick(args.functional, doc.functionals, "tau" if "tau" in doc.functionals else "tr")


def _alpha(args, doc):
    name = args.alpha or args.map
    if name:
        return name
    return "alpha" if "alpha" in doc.maps else "identity"


def _beta(args, doc, alpha_name):
    if args.beta:
        return args.beta
    return "beta" if "beta" in doc.maps else alpha_name


def _triple(args, doc):
    tn = _tau(args, doc)
    an = _alpha(args, doc)
    bn = _beta(args, doc, an)
    return (tn, an, bn), CompatTriple(doc.map(an), doc.map(bn), doc.functional(tn))


def _note_doc(report: RunReport, doc: AlgebraDocument) -> None:
    report.provenance = doc.provenance
    if doc.eliminated:
        report.fact("constraints applied", [f"{k} = {v.to_text()}" for k, v in sorted(doc.eliminated.items())])


def _write(doc: AlgebraDocument, out: str | None, report: RunReport) -> None:
    if out:
        doc.dump(out)
        report.fact("written", out)
    else:
        report.fact("document", doc.dumps().rstrip("\n").split("\n"))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_check(args, report: RunReport) -> None:
    doc = _load(args)
    _note_doc(report, doc)
    names = doc.basis_names
    if doc.kind == "binary":
        wanted = args.checks or ["hom-jacobi"] + (["trace", "skew"] if doc.functionals or args.functional else [])
        A = doc.binary_algebra()
        for c in wanted:
            if c not in BINARY_CHECKS:
                raise _Usage(f"unknown check {c!r} for a binary document")
            if c == "hom-jacobi":
                an = _alpha(args, doc)
                report.check(f"hom-jacobi [alpha={an}]", check_hom_jacobi(A, doc.map(an)), names)
            elif c == "trace":
                tn = _tau(args, doc)
                report.check(f"trace [tau={tn}]", check_trace_function(A, doc.functional(tn)), names)
            elif c == "skew":
                tn = _tau(args, doc)
                report.check(f"skew [tau={tn}]", check_ternary_skew_equivalence(A, doc.functional(tn)), names)
            elif c == "endo":
                rn = args.map or "identity"
                report.check(f"endo [rho={rn}]", check_binary_endomorphism(A, doc.map(rn)), names)
            elif c == "hom-nambu":
                (tn, an, bn), t = _triple(args, doc)
                T = induce_ternary(A, t.tau, t.alpha, t.beta)
                report.check(f"hom-nambu [induced tau={tn}, twist=({an}, {bn})]", check_hom_nambu(T), names)
    else:
        wanted = args.checks or ["hom-nambu"]
        T = doc.ternary_algebra()
        for c in wanted:
            if c not in TERNARY_CHECKS:
                raise _Usage(f"unknown check {c!r} for a ternary document")
            if c == "hom-nambu":
                report.check(f"hom-nambu [twist=({doc.twist[0]}, {doc.twist[1]})]", check_hom_nambu(T), names)
            elif c == "skew":
                # the stored form is totally skew by construction
                report.check("skew", CheckReport("skew", True, notes={"structural": True}), names)
            elif c == "endo":
                rn = args.map or "identity"
                report.check(f"endo [rho={rn}]", check_ternary_endomorphism(T, doc.map(rn)), names)


def cmd_induce(args, report: RunReport) -> None:
    doc = _load(args)
    if doc.kind != "binary":
        raise _Usage("induce needs a binary document")
    _note_doc(report, doc)
    (tn, an, bn), t = _triple(args, doc)
    A = doc.binary_algebra()
    names = doc.basis_names
    trace = check_trace_function(A, t.tau)
    compat = check_compatibility(t)
    failed = ([] if trace else ["trace"]) + [k for k, p in compat.parts.items() if not p]
    if failed:
        if not args.force:
            report.check(f"trace [tau={tn}]", trace, names)
            report.check(f"compatibility [alpha={an}, beta={bn}, tau={tn}]", compat, names)
            raise HypothesisFailure(f"failed preconditions: {', '.join(failed)}")
        report.warnings.append(f"--force: preconditions fail ({', '.join(failed)}); the result need not be Hom-Nambu")
    T = induce_ternary(A, t.tau, t.alpha, t.beta)
    maps = {an: t.alpha, bn: t.beta}
    out = AlgebraDocument.from_ternary(
        T, sorted(set(doc.params) - set(doc.eliminated)), twist_names=(an, bn), maps=maps,
        functionals={tn: t.tau}, provenance=f"induced from {args.input} by tau={tn}",
    )
    for key in sorted(T.d):
        report.fact(f"[{', '.join(names[i] for i in key)}]", _vector_text(names, T.d[key]))
    if args.verify:
        report.check("hom-nambu [induced]", check_hom_nambu(T), names)
    _write(out, args.out, report)


def cmd_classify(args, report: RunReport) -> None:
    doc = _load(args)
    _note_doc(report, doc)
    (tn, an, bn), t = _triple(args, doc)
    names = doc.basis_names
    cls = classify_triple(t)
    report.fact("triple", f"alpha={an}, beta={bn}, tau={tn}")
    report.fact("classification", cls.label())
    report.fact("degenerate", str(cls.degenerate).lower())
    report.fact("tau.alpha", "zero" if cls.tau_alpha_zero else "nonzero")
    report.fact("tau.beta", "zero" if cls.tau_beta_zero else "nonzero")
    report.fact("ker tau", [_vector_text(names, v) for v in cls.kernel.basis])
    if cls.kernel.pivot_assumptions:
        report.fact("assuming nonzero", ", ".join(a.to_text() for a in cls.kernel.pivot_assumptions))
    if not cls.degenerate:
        report.check("kernel-stability", check_kernel_stability(t), None)


def cmd_solve_beta(args, report: RunReport) -> None:
    doc = _load(args)
    if doc.kind != "binary":
        raise _Usage("solve-beta needs a binary document")
    _note_doc(report, doc)
    tn = _tau(args, doc)
    an = _alpha(args, doc)
    space = solve_beta_space(doc.binary_algebra(), doc.map(an), doc.functional(tn))
    report.fact("alpha", an)
    report.fact("tau", tn)
    report.fact("dimension", str(space.dim))
    report.fact("basis (row-major beta)", [_matrix_text(Matrix.from_vector(doc.dim, v)) for v in space.basis])
    if space.pivot_assumptions:
        report.fact("assuming nonzero", ", ".join(a.to_text() for a in space.pivot_assumptions))
    report.fact("alpha satisfies tau-alpha", str(space.notes["tau-alpha"]).lower())


def cmd_twist(args, report: RunReport) -> None:
    doc = _load(args)
    if doc.kind != "ternary":
        raise _Usage("twist needs a ternary document")
    _note_doc(report, doc)
    rn = args.map
    if not rn:
        raise _Usage("twist needs --map NAME")
    rho = doc.map(rn)
    T2 = twist_by_endomorphism(doc.ternary_algebra(), rho)
    maps = {k: doc.map(k) for k in doc.maps}
    out = AlgebraDocument.from_ternary(
        T2, doc.params, twist_names=(rn, rn), maps=maps, provenance=f"twisted by {rn}",
    )
    names = doc.basis_names
    for key in sorted(T2.d):
        report.fact(f"[{', '.join(names[i] for i in key)}]", _vector_text(names, T2.d[key]))
    _write(out, args.out, report)


def cmd_jacobian(args, report: RunReport) -> None:
    polys = [tripoly(p) for p in args.polys]
    if args.action == "bracket":
        if len(polys) != 3:
            raise _Usage("bracket takes three polynomials")
        report.fact("bracket", jacobian_bracket(*polys).to_text())
    elif args.action == "fi-check":
        if len(polys) != 5:
            raise _Usage("fi-check takes five polynomials")
        report.check("fundamental-identity", check_fundamental_identity(polys))
    else:
        if len(polys) != 5 or not args.gamma:
            raise _Usage("twist-check takes five polynomials and --gamma")
        g = PolyMap.parse(args.gamma)
        report.fact("gamma", g.to_text())
        report.check("twisted-hom-nambu", check_twisted_hom_nambu(g, polys))


def cmd_examples(args, report: RunReport) -> None:
    if not args.all_paper_examples:
        report.fact("fixtures", fixture_names())
        return
    from .examples import run_worked_examples

    for label, r in run_worked_examples():
        report.check(label, r, None)


COMMANDS = {
    "check": cmd_check,
    "induce": cmd_induce,
    "classify": cmd_classify,
    "solve-beta": cmd_solve_beta,
    "twist": cmd_twist,
    "jacobian": cmd_jacobian,
    "examples": cmd_examples,
}


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")

    doc_opts = _Parser(add_help=False)
    doc_opts.add_argument("--input", required=True, help="document path or packaged fixture name")
    doc_opts.add_argument("--no-constraints", action="store_true", help="do not substitute document constraints")
    doc_opts.add_argument("--map", help="map name (alpha for hom-jacobi, rho for endo/twist)")
    doc_opts.add_argument("--functional", help="trace functional name")
    doc_opts.add_argument("--alpha")
    doc_opts.add_argument("--beta")

    p = _Parser(prog="homnambu", description="Exact checks for Hom-Lie and ternary Hom-Nambu-Lie algebras.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", parents=[common, doc_opts])
    c.add_argument("--checks", type=lambda s: [x.strip() for x in s.split(",") if x.strip()])

    c = sub.add_parser("induce", parents=[common, doc_opts])
    c.add_argument("--out")
    c.add_argument("--force", action="store_true")
    c.add_argument("--verify", action="store_true", help="also run hom-nambu on the result")

    sub.add_parser("classify", parents=[common, doc_opts])
    sub.add_parser("solve-beta", parents=[common, doc_opts])

    c = sub.add_parser("twist", parents=[common, doc_opts])
    c.add_argument("--out")

    c = sub.add_parser("jacobian", parents=[common])
    c.add_argument("action", choices=("bracket", "fi-check", "twist-check"))
    c.add_argument("polys", nargs="+")
    c.add_argument("--gamma", help='polynomial map, e.g. "x1 + x2^2, x2, x3"')

    c = sub.add_parser("examples", parents=[common])
    c.add_argument("--all-paper-examples", action="store_true")
    return p


def run(argv: Sequence[str]) -> RunReport:
    argv = list(argv)
    report = RunReport(command=shlex.join(["homnambu", *argv]))
    try:
        args = build_parser().parse_args(argv)
        COMMANDS[args.command](args, report)
    except _Usage as exc:
        report.error = str(exc)
        report.usage_error = True
    except (DocumentError, ParseError, UndeclaredParameter, UnknownName) as exc:
        report.error = f"{type(exc).__name__}: {exc}"
        report.usage_error = True
    except HomNambuError as exc:
        report.error = f"{type(exc).__name__}: {exc}"
    return report


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        report = run(argv)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    fmt = "json" if any(a == "json" and argv[k - 1] == "--format" for k, a in enumerate(argv) if k) else "text"
    stream = sys.stderr if report.usage_error and fmt == "text" else sys.stdout
    stream.write(report.render(fmt))
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
