"""Command-line front end: ``subfinsler {validate|classify|integrate|survey|catalog}``.

Problem files are JSON documents; see the README for the schema.  Exit codes
are 0 ok, 2 bad input (including a non-generating subspace), 3 Jacobi
failure, 4 integration step rejected, 5 census mismatch.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .abnormality import SIGNS, AbnormalityVerdict, FreeVerdict, classify_abnormal, frame_change
from .adapted_basis import distinguished_line, lemma1_basis
from .catalog import PRETTY, REPRESENTATIVES, AlgebraFamily, build_algebra, catalog_k
from .convex_gauge import DEFAULT_TOL, Ellipsoid, GaugeBody, PNorm, Polytope, in_frame
from .equivalence import census, fingerprint, theorem4_case
from .errors import NotGenerating, StepTooLarge, SubFinslerError, UnknownFamily
from .extremal_ode import DEFAULT_STEP, ControlLaw, integrate_adjoint, psi4_closed_form
from .lie_core import StructureConstants, Subspace, admits_generating_hyperplane, check_jacobi, generates

EXIT_OK, EXIT_INPUT, EXIT_JACOBI, EXIT_STEP, EXIT_CENSUS = 0, 2, 3, 4, 5
JACOBI_TOL = 1e-9


class InputError(Exception):
    pass


class JacobiFailure(Exception):
    pass


@dataclass
class Problem:
    C: StructureConstants
    vectors: np.ndarray | None = None
    body: GaugeBody | None = None
    frame: str = "adapted"
    tolerances: dict = field(default_factory=dict)
    algebra_json: dict = field(default_factory=dict)

    @property
    def q(self) -> Subspace:
        if self.vectors is None:
            raise InputError("the problem file has no subspace")
        return Subspace.span(self.vectors)

    def body_in_adapted(self, adapted_q_frame) -> GaugeBody:
        if self.body is None:
            raise InputError("the problem file has no body")
        if self.frame == "adapted":
            return self.body
        return in_frame(self.body, frame_change(self.vectors.T, adapted_q_frame))

    def tol(self, name: str, default: float) -> float:
        return float(self.tolerances.get(name, default))


def _number(x):
    # "1/2" style strings keep the tensor exact
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise InputError(f"expected a number, got {x!r}")
    return x


def _vector(v, n: int, what: str) -> np.ndarray:
    try:
        out = np.array([float(_number(x)) for x in v])
    except (TypeError, ValueError) as err:
        raise InputError(f"{what}: {err}") from None
    if out.shape != (n,):
        raise InputError(f"{what} must have {n} entries")
    return out


def parse_algebra(doc) -> StructureConstants:
    if not isinstance(doc, dict):
        raise InputError("'algebra' must be an object")
    if "family" in doc:
        params = tuple(_number(p) for p in doc.get("params", []))
        try:
            return build_algebra(AlgebraFamily(doc["family"], params))
        except ValueError as err:
            raise InputError(str(err)) from None
    if "structure_constants" in doc:
        brackets = {}
        for rec in doc["structure_constants"]:
            try:
                i, j, k, val = (int(rec["i"]), int(rec["j"]), int(rec["k"]), _number(rec["value"]))
            except (KeyError, TypeError, ValueError) as err:
                raise InputError(f"bad structure-constant record {rec!r}: {err}") from None
            if not (1 <= i < j <= 4 and 1 <= k <= 4):
                raise InputError(f"structure-constant indices need 1 <= i < j <= 4, 1 <= k <= 4: {rec!r}")
            terms = brackets.setdefault((i, j), {})
            terms[k] = terms.get(k, 0) + val
        C = StructureConstants.from_brackets(brackets)
        if check_jacobi(C) > JACOBI_TOL:
            raise JacobiFailure(f"Jacobi residual {check_jacobi(C):.3e} exceeds {JACOBI_TOL}")
        return C
    raise InputError("'algebra' needs either 'family' or 'structure_constants'")


def parse_body(doc) -> GaugeBody:
    if not isinstance(doc, dict) or "type" not in doc:
        raise InputError("'body' must be an object with a 'type'")
    kind = doc["type"]
    try:
        if kind == "ellipsoid":
            return Ellipsoid(np.array([_vector(r, 3, "ellipsoid row") for r in doc["matrix"]]))
        if kind == "polytope":
            return Polytope(np.array([_vector(v, 3, "vertex") for v in doc["vertices"]]))
        if kind == "pnorm":
            p = doc["p"]
            p = float("inf") if p in ("inf", "infinity") else float(_number(p))
            return PNorm(p, tuple(_vector(doc.get("scale", [1, 1, 1]), 3, "pnorm scale")))
    except KeyError as err:
        raise InputError(f"body of type {kind!r} is missing {err}") from None
    except ValueError as err:
        raise InputError(f"invalid {kind} body: {err}") from None
    raise InputError(f"unknown body type {kind!r}; expected ellipsoid, polytope or pnorm")


def parse_problem(doc) -> Problem:
    if not isinstance(doc, dict):
        raise InputError("a problem file must hold a JSON object")
    if "algebra" not in doc:
        raise InputError("missing 'algebra'")
    C = parse_algebra(doc["algebra"])
    vectors = None
    if "subspace" in doc:
        rows = doc["subspace"]
        if not isinstance(rows, list) or len(rows) != 3:
            raise InputError("'subspace' must list three 4-vectors")
        vectors = np.array([_vector(r, 4, "subspace vector") for r in rows])
    body = parse_body(doc["body"]) if "body" in doc else None
    frame = doc.get("frame", "adapted")
    if frame not in ("ambient", "adapted"):
        raise InputError("'frame' must be 'ambient' or 'adapted'")
    tolerances = doc.get("tolerances", {})
    if not isinstance(tolerances, dict):
        raise InputError("'tolerances' must be an object")
    return Problem(C, vectors, body, frame, tolerances, doc["algebra"])


def load_problem(path: str) -> Problem:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as err:
        raise InputError(f"cannot read {path}: {err.strerror}") from None
    except json.JSONDecodeError as err:
        raise InputError(f"{path} is not valid JSON: {err}") from None
    return parse_problem(doc)


# ---------------------------------------------------------------- formatting

def _num(x: float, tol: float = 0.0) -> str:
    if abs(x) <= tol:
        x = 0.0
    return f"{x + 0.0:.4g}"


def span_label(v) -> str:
    """``⟨E1 + 0.5 E3⟩`` with the first nonzero coefficient scaled to 1."""
    v = np.asarray(v, dtype=float)
    big = np.abs(v).max()
    nz = [i for i in range(len(v)) if abs(v[i]) > 1e-9 * big]
    v = v / v[nz[0]]
    terms = []
    for i in nz:
        c = v[i]
        mag = "" if abs(abs(c) - 1) <= 1e-12 else f"{abs(c):.6g} "
        if not terms:
            terms.append(f"{'-' if c < 0 else ''}{mag}E{i + 1}")
        else:
            terms.append(f"{'-' if c < 0 else '+'} {mag}E{i + 1}")
    return "⟨" + " ".join(terms) + "⟩"


def _sign(s: int) -> str:
    return "+1" if s > 0 else "-1"


def _rounded(x, digits: int = 12):
    if x is None:
        return None
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_rounded(y, digits) for y in x]
    return round(float(x), digits) + 0.0


def verdict_json(v: AbnormalityVerdict, case, q1) -> dict:
    return {
        "summary": v.summary,
        "kind": v.kind.value,
        "condition": v.condition.value,
        "sides": {_sign(s): {"nonstrong": v.sides[s].nonstrong,
                             "witness_k": _rounded(v.sides[s].witness_k),
                             "gap": _rounded(v.sides[s].gap)} for s in SIGNS},
        "extremal_directions": {_sign(s): _rounded(v.extremal_directions[s]) for s in SIGNS},
        "c23": _rounded(v.c23),
        "case": list(case) if case else None,
        "q1": _rounded(q1),
        "diagnostic": v.diagnostic,
    }


def verdict_line(report: dict, tol: float) -> str:
    """Headline of a classify report; works from the JSON form so both outputs agree."""
    parts = []
    for key in ("+1", "-1"):
        side = report["sides"][key]
        k = "none" if side["witness_k"] is None else _num(side["witness_k"], tol)
        gap = "none" if side["gap"] is None else _num(side["gap"], tol)
        parts.append(f"s={key}: k={k}, gap={gap}")
    if report["kind"] == FreeVerdict.DEPENDENT.value:
        line = f"{report['summary']} ({'; '.join(parts)})"
    else:
        line = f"{report['summary']} for all seminorms"
    if report["case"]:
        line += f", case {report['case'][0]},{report['case'][1]}"
    return line


def parse_report(text: str) -> dict:
    """Verdict fields of a ``classify --json`` report."""
    doc = json.loads(text)
    v = doc["verdict"]
    return {"summary": v["summary"], "kind": v["kind"], "condition": v["condition"],
            "nonstrong": {k: v["sides"][k]["nonstrong"] for k in ("+1", "-1")},
            "case": tuple(v["case"]) if v["case"] else None}


def _emit(args, doc: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        print("\n".join(lines))


def _algebra_name(C: StructureConstants) -> str:
    if C.family is None:
        return "custom tensor"
    if not C.params:
        return PRETTY[C.family]
    return f"{PRETTY[C.family]} ({', '.join(f'{float(p):g}' for p in C.params)})"


# ---------------------------------------------------------------- commands

def cmd_validate(args) -> int:
    P = load_problem(args.file)
    q = P.q
    jac = check_jacobi(P.C)
    doc = {"command": "validate", "algebra": _algebra_name(P.C), "jacobi_residual": jac,
           "subspace_dim": q.dim, "generates": False, "q1": None}
    if q.dim == 3 and generates(P.C, q):
        q1 = distinguished_line(P.C, q)
        doc.update(generates=True, q1=_rounded(q1))
        line = f"generates: yes, q1 = {span_label(q1)}"
    else:
        line = "generates: no"
    _emit(args, doc, [f"algebra: {doc['algebra']}", f"jacobi residual: {jac:.3g}", line,
                      "PASS" if doc["generates"] else "FAIL"])
    return EXIT_OK if doc["generates"] else EXIT_INPUT


def cmd_classify(args) -> int:
    P = load_problem(args.file)
    q = P.q
    if q.dim != 3 or not generates(P.C, q):
        raise NotGenerating("the subspace does not generate the algebra")
    tol = args.tol if args.tol is not None else P.tol("support", DEFAULT_TOL)
    frame = None if P.frame == "adapted" else P.vectors.T
    if P.body is None:
        raise InputError("the problem file has no body")
    v = classify_abnormal(P.C, q, P.body, tol=tol, frame=frame, seed=args.seed)
    try:
        case = theorem4_case(P.C, q)
    except UnknownFamily:
        case = None
    q1 = distinguished_line(P.C, q)
    report = verdict_json(v, case, q1)
    fp = fingerprint(P.C, q)
    doc = {"command": "classify", "algebra": _algebra_name(P.C), "verdict": report,
           "fingerprint": fp.as_dict()}
    lines = [verdict_line(report, tol), f"algebra: {doc['algebra']}", f"q1 = {span_label(q1)}",
             f"seminorm-free: {v.kind.value}", f"condition: {v.condition.value}"]
    if v.c23 is not None:
        lines.append("c23 = (" + ", ".join(_num(x, 1e-12) for x in v.c23) + ")")
    for s in SIGNS:
        side = v.sides[s]
        d = ", ".join(_num(x, 1e-12) for x in v.extremal_directions[s])
        lines.append(f"s={_sign(s)}: {'nonstrong' if side.nonstrong else 'strong'}, "
                     f"direction s e2 / F(s e2) = ({d})")
    lines.append(f"fingerprint: {fp}")
    if v.diagnostic:
        lines.append(f"note: {v.diagnostic}")
    _emit(args, doc, lines)
    return EXIT_OK


def _psi0(text: str | None) -> np.ndarray:
    if text is None:
        return np.array([0.0, 0.0, 0.0, 1.0])
    return _vector(text.replace(",", " ").split(), 4, "--psi0")


def cmd_integrate(args) -> int:
    P = load_problem(args.file)
    q = P.q
    if q.dim != 3 or not generates(P.C, q):
        raise NotGenerating("the subspace does not generate the algebra")
    basis = lemma1_basis(P.C, q, args.seed)
    body = P.body_in_adapted(basis.q_frame) if P.body is not None else Ellipsoid(np.eye(3))
    law = ControlLaw.abnormal(body, args.sign)
    u2 = float(law.values[0][1])
    psi0 = _psi0(args.psi0)
    traj = integrate_adjoint(basis.adapted_c, law, psi0, args.t_end, args.step)
    out = sys.stdout
    out.write("t\tpsi1\tpsi2\tpsi3\tpsi4\tpsi4_closed\tdeviation\n")
    for st in traj:
        closed = float(psi4_closed_form(basis.adapted_c, u2, args.sign, psi0[3], st.t))
        cells = [st.t, *st.psi, closed, abs(st.psi[3] - closed)]
        out.write("\t".join(f"{x + 0.0:.12g}" for x in cells) + "\n")
    return EXIT_OK


def cmd_survey(args) -> int:
    if args.file:
        C = load_problem(args.file).C
    elif args.family:
        try:
            C = build_algebra(AlgebraFamily(args.family, tuple(_number(p) for p in args.params)))
        except ValueError as err:
            raise InputError(str(err)) from None
    else:
        raise InputError("survey needs --family or a problem file")
    cen = census(C, args.n, args.seed)
    ranked = sorted(cen.counts.items(), key=lambda kv: (-kv[1], str(kv[0])))
    ok = cen.ok
    if cen.n_classes == 0:
        summary = "no generating subspaces"
        if cen.expected:
            summary += f" (expected {cen.expected}) MISMATCH"
    else:
        noun = "class" if cen.n_classes == 1 else "classes"
        exp = "unknown" if cen.expected is None else str(cen.expected)
        summary = f"{cen.n_classes} {noun} (expected {exp}) {'OK' if ok else 'MISMATCH'}"
    doc = {"command": "survey", "algebra": _algebra_name(C), "n": args.n, "seed": args.seed,
           "classes": [{"count": n, "fingerprint": fp.as_dict()} for fp, n in ranked],
           "n_classes": cen.n_classes, "expected": cen.expected, "ok": ok}
    lines = [f"algebra: {doc['algebra']}"] + [f"{n:6d}  {fp}" for fp, n in ranked] + [summary]
    _emit(args, doc, lines)
    return EXIT_OK if ok else EXIT_CENSUS


def cmd_catalog(args) -> int:
    rows = []
    for fam in REPRESENTATIVES:
        C = build_algebra(fam)
        rows.append({"family": fam.name, "params": [float(p) for p in fam.params],
                     "label": fam.label, "k": catalog_k(fam),
                     "generating_hyperplane": admits_generating_hyperplane(C)})
    lines = [f"{'family':<18} {'k':>2}  generating 3-subspaces"]
    lines += [f"{r['label']:<18} {r['k']:>2}  {'yes' if r['generating_hyperplane'] else 'no'}"
              for r in rows]
    _emit(args, {"command": "catalog", "families": rows}, lines)
    return EXIT_OK


def _common(suppress: bool) -> argparse.ArgumentParser:
    # subcommands must not reset flags given before the subcommand name
    p = argparse.ArgumentParser(add_help=False)
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--json", action="store_true", default=d(False), help="machine-readable output")
    p.add_argument("--tol", type=float, default=d(None), help="support-test tolerance")
    p.add_argument("--seed", type=int, default=d(0))
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common(True)
    parser = argparse.ArgumentParser(prog="subfinsler", description=__doc__.splitlines()[0],
                                     parents=[_common(False)])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (("validate", "check a problem file and report q1"),
                           ("classify", "strong / nonstrong abnormality of both extremals")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("file")
    p = sub.add_parser("integrate", parents=[common], help="adjoint system along an abnormal extremal")
    p.add_argument("file")
    p.add_argument("--t-end", type=float, default=1.0)
    p.add_argument("--step", type=float, default=DEFAULT_STEP)
    p.add_argument("--psi0", default=None, help="four covector components, default 0,0,0,1")
    p.add_argument("--sign", type=int, choices=SIGNS, default=1)
    p = sub.add_parser("survey", parents=[common], help="census of generating subspace classes")
    p.add_argument("file", nargs="?")
    p.add_argument("--family")
    p.add_argument("--params", nargs="*", default=[])
    # let "-1/2" through as a value; no option of this parser looks like a number
    p._negative_number_matcher = re.compile(r"^-(\d+(/\d+)?|\d*\.\d+)$")
    p.add_argument("--n", type=int, default=2000)
    sub.add_parser("catalog", parents=[common], help="families, k and hyperplane criterion")
    return parser


COMMANDS = {"validate": cmd_validate, "classify": cmd_classify, "integrate": cmd_integrate,
            "survey": cmd_survey, "catalog": cmd_catalog}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_INPUT if err.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except JacobiFailure as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_JACOBI
    except StepTooLarge as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_STEP
    except (InputError, NotGenerating) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    except (SubFinslerError, ValueError) as err:
        print(f"error: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
