"""Command line interface: ``sl2cq [options] <command> [args]``.

Every run reads one JSON config (``--config``, or the built-in default),
applies flag overrides, validates the result against the shipped schema and
prints one report.  Reports echo a digest of the effective config, so an
output file records exactly what produced it.

Exit codes: 0 ok, 1 usage or config error, 2 hypothesis not met, 3 budget
exceeded.
"""

from __future__ import annotations

import argparse
import copy
import hashlib
import json
import logging
import os
import re
import sys
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable, Sequence

import jsonschema

from .algebra import AlgebraError, BasisKey, Sl2Cq
from .closure import ClosureBudgetExceeded
from .heisenberg import (
    HeisenbergModule,
    ModuleError,
    NonDecidableLambda,
    SupportBox,
    enumerate_basis,
    format_monomial,
    product_formula_counts,
)
from .imaginary import CentralChargeZero, HypothesisUnmet, ImaginaryModule, NoYFactors, Weight
from .lattice import LatticeError, SearchBudgetExceeded, in_lambda_lattice, is_negative
from .scalars import ScalarConfig
from .torus import TorusElement

log = logging.getLogger(__name__)

EXIT_OK, EXIT_USAGE, EXIT_HYPOTHESIS, EXIT_BUDGET = 0, 1, 2, 3

DEFAULT_CONFIG = {
    "n": 2,
    "backend": "cyclotomic",
    "N": 3,
    "M": [[0, 1], [2, 0]],
    "lambda": {"h": "0", "c": ["1", "0"]},
    "box": {"B": 2, "L": 2, "M": 1},
    "raise_bound": 2,
    "format": "json",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ------------------------------------------------------------- config


def load_schema() -> dict:
    return json.loads(resources.files("sl2cq").joinpath("config_schema.json").read_text())


def parse_vector(text: str) -> tuple:
    body = text.strip().strip("()[] ")
    if not body:
        return ()
    try:
        return tuple(int(s) for s in body.split(","))
    except ValueError:
        raise UsageError(f"not an integer vector: {text!r}") from None


def _upper_entries(items: Sequence[str]) -> dict:
    out = {}
    for item in items:
        m = re.fullmatch(r"\s*(\d+)\s*,\s*(\d+)\s*=\s*(-?\d+)\s*", item)
        if not m:
            raise UsageError(f"--m expects i,j=value, got {item!r}")
        i, j = int(m.group(1)), int(m.group(2))
        if not 1 <= i < j:
            raise UsageError(f"--m sets entries above the diagonal (i < j), got {item!r}")
        out[(i, j)] = int(m.group(3))
    return out


def effective_config(args) -> dict:
    if args.config:
        try:
            with open(args.config) as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
    else:
        cfg = copy.deepcopy(DEFAULT_CONFIG)
    if args.n is not None:
        cfg["n"] = args.n
    if args.backend is not None:
        cfg["backend"] = args.backend
    if args.N is not None:
        cfg["N"] = args.N
    if args.m_entries:
        n = cfg["n"]
        upper = _upper_entries(args.m_entries)
        if any(j > n for _i, j in upper):
            raise UsageError(f"--m index outside 1..{n}")
        cfg["M"] = [list(r) for r in ScalarConfig.cyclotomic_upper(n, cfg.get("N", 1), upper).M]
    lam = cfg.setdefault("lambda", {})
    if args.lambda_h is not None:
        lam["h"] = args.lambda_h
    if args.lambda_c is not None:
        lam["c"] = [s.strip() for s in args.lambda_c.split(";" if ";" in args.lambda_c else ",")]
    if args.lambda_d is not None:
        lam["d"] = [s.strip() for s in args.lambda_d.split(";" if ";" in args.lambda_d else ",")]
    box = cfg.setdefault("box", {})
    for name, val in (("B", args.B), ("L", args.L), ("M", args.max_y)):
        if val is not None:
            box[name] = val
    if args.raise_bound is not None:
        cfg["raise_bound"] = args.raise_bound
    if args.budget is not None:
        cfg["budget"] = args.budget
    if args.format is not None:
        cfg["format"] = args.format
    if cfg.get("backend") != "cyclotomic":
        cfg.pop("N", None)
        cfg.pop("M", None)
    try:
        jsonschema.validate(cfg, load_schema())
    except jsonschema.ValidationError as exc:
        raise UsageError(f"invalid config: {exc.message}") from None
    return cfg


def config_digest(cfg: dict) -> str:
    blob = json.dumps(cfg, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


@dataclass
class Session:
    cfg: dict
    algebra: Sl2Cq
    weight: Weight
    box: SupportBox
    raise_bound: int
    budget: int | None
    _heis: HeisenbergModule | None = None
    _imag: ImaginaryModule | None = None

    @classmethod
    def build(cls, cfg: dict) -> Session:
        try:
            scalars = ScalarConfig.from_json(cfg)
        except (ValueError, KeyError) as exc:
            raise UsageError(f"invalid scalar config: {exc}") from None
        algebra = Sl2Cq(scalars)
        lam = cfg.get("lambda", {})
        n = scalars.n
        c = lam.get("c", ["0"] * n)
        if len(c) != n:
            raise UsageError(f"lambda.c needs {n} values")
        d = lam.get("d")
        if d is not None and len(d) != n:
            raise UsageError(f"lambda.d needs {n} values")
        try:
            weight = Weight.make(algebra.ring, str(lam.get("h", "0")), [str(x) for x in c],
                                 [str(x) for x in d] if d else None)
        except (ValueError, TypeError, ArithmeticError) as exc:
            raise UsageError(f"lambda values do not parse in the {scalars.backend.value} backend: {exc}") from None
        b = cfg.get("box", {})
        box = SupportBox(int(b.get("B", 2)), int(b.get("L", 2)), int(b.get("M", 1)))
        return cls(cfg, algebra, weight, box, int(cfg.get("raise_bound", 2)), cfg.get("budget"))

    @property
    def heis(self) -> HeisenbergModule:
        if self._heis is None:
            self._heis = HeisenbergModule(self.algebra, self.weight.c)
        return self._heis

    @property
    def imag(self) -> ImaginaryModule:
        if self._imag is None:
            self._imag = ImaginaryModule(self.algebra, self.weight)
        return self._imag

    def key(self, text: str) -> BasisKey:
        try:
            k = BasisKey.parse(text)
            return self.algebra.key(k.kind, k.data)
        except (KeyError, ValueError) as exc:
            raise UsageError(f"bad basis key {text!r}: {exc}") from None

    def vector(self, text: str) -> tuple:
        v = parse_vector(text)
        if len(v) != self.algebra.n:
            raise UsageError(f"{text!r} should have {self.algebra.n} entries")
        return v


# ------------------------------------------------------------- reports


@dataclass
class Report:
    result: object
    summary: str
    header: list = field(default_factory=list)
    rows: list = field(default_factory=list)
    status: int = EXIT_OK


def _vec(v) -> str:
    return "(" + ",".join(map(str, v)) + ")"


def _vector_rows(vec) -> list:
    return [[vec.format(m), str(c)] for m, c in vec.terms.items()]


def cmd_bracket(s: Session, a) -> Report:
    x, y = s.algebra.basis(s.key(a.k1)), s.algebra.basis(s.key(a.k2))
    br = s.algebra.bracket(x, y)
    oracle = s.algebra.bracket_oracle(x, y)
    match = br == oracle
    summary = f"{br} | oracle: {'match' if match else 'mismatch'}"
    rows = [[str(k), str(c)] for k, c in br.terms.items()]
    return Report({"bracket": br.to_json(), "oracle": oracle.to_json(), "match": match}, summary,
                  ["key", "coeff"], rows)


def cmd_torus_mul(s: Session, a) -> Report:
    lat = s.algebra.lattice
    u = TorusElement.monomial(lat, s.vector(a.a))
    v = TorusElement.monomial(lat, s.vector(a.b))
    prod = u * v
    rows = [[_vec(e), str(c)] for e, c in prod]
    return Report({"product": prod.to_json()}, str(prod), ["exponent", "coeff"], rows)


def cmd_radical(s: Session, a) -> Report:
    basis = [list(v) for v in s.algebra.lattice.radical_basis(a.r)]
    return Report(basis, json.dumps(basis, separators=(",", ":")), ["basis_vector"],
                  [[_vec(v)] for v in basis])


def cmd_lambda_lattice(s: Session, a) -> Report:
    r = s.vector(a.rvec)
    member = in_lambda_lattice(s.weight.c, r)
    return Report({"rvec": list(r), "member": member}, f"{_vec(r)} {'in' if member else 'not in'} Lambda_lambda",
                  ["rvec", "member"], [[_vec(r), str(member).lower()]])


def cmd_witness(s: Session, a) -> Report:
    b = s.vector(a.b)
    bounds = parse_vector(a.bounds)
    c = s.algebra.lattice.lemma2_witness(b, bounds)
    f = s.algebra.lattice.f_map(c, b)
    return Report({"b": list(b), "bounds": list(bounds), "witness": list(c), "f": str(f)},
                  f"witness {_vec(c)} f={f}", ["witness", "f"], [[_vec(c), str(f)]])


def cmd_hdim(s: Session, a) -> Report:
    beta = s.vector(a.beta)
    monos = enumerate_basis(s.algebra.lattice, beta, s.box)
    formula = product_formula_counts(s.algebra.lattice, s.box).get(beta, 0) if is_negative(beta) or not any(beta) else 0
    if not any(beta):
        formula = 1
    result = {"degree": list(beta), "dim": len(monos), "product_formula": formula,
              "monomials": [format_monomial(m) for m in monos], "box": s.box.to_json()}
    return Report(result, f"dim H_{_vec(beta)} = {len(monos)} (product formula {formula})", ["monomial"],
                  [[format_monomial(m)] for m in monos])


def _heis_word(s: Session, words: Sequence[str]):
    keys = [s.key(w) for w in words]
    try:
        return s.heis.straighten(keys)
    except LatticeError as exc:
        raise UsageError(str(exc)) from None


def cmd_hact(s: Session, a) -> Report:
    g = s.key(a.g)
    v = _heis_word(s, a.word)
    w = s.heis.act(g, v)
    return Report({"vector": v.to_json(), "image": w.to_json()}, str(w), ["monomial", "coeff"], _vector_rows(w))


def _components(comp: dict) -> tuple:
    out, rows = [], []
    for deg in sorted(comp, key=lambda d: tuple(reversed(d))):
        vecs = comp[deg]
        out.append({"degree": list(deg), "dim": len(vecs), "basis": [v.to_json() for v in vecs]})
        for v in vecs:
            rows.append([_vec(deg), str(v)])
    return out, rows


def cmd_tilde_h(s: Session, a) -> Report:
    comp = s.heis.tilde_h_components(s.box, s.budget)
    out, rows = _components(comp)
    total = sum(len(v) for v in comp.values())
    return Report({"box": s.box.to_json(), "components": out, "dim": total},
                  f"H~ in-box dim {total} over {len(comp)} degrees", ["degree", "vector"], rows)


def cmd_singular(s: Session, a) -> Report:
    quotient = s.heis.tilde_closure(s.box, s.budget) if a.quotient else None
    sv = s.heis.singular_vectors(s.box, s.raise_bound, quotient=quotient)
    comp = {d: v for d, v in sv.items() if v}
    out, rows = _components(comp)
    below = sum(len(v) for d, v in comp.items() if any(d))
    return Report({"box": s.box.to_json(), "raise_bound": s.raise_bound, "quotient": bool(a.quotient),
                   "components": out, "below_top": below},
                  f"{below} singular vectors below degree 0", ["degree", "vector"], rows)


def cmd_mdim(s: Session, a) -> Report:
    beta = s.vector(a.beta)
    if a.m < 0:
        raise UsageError("m must be nonnegative")
    d = s.imag.weight_dimension(a.m, beta, s.box)
    w = s.weight.shift(a.m, beta)
    return Report({"m": a.m, "degree": list(beta), "dim": d, "weight": w.to_json(), "box": s.box.to_json()},
                  f"dim M_({a.m},{_vec(beta)}) = {d}", ["m", "degree", "dim"], [[str(a.m), _vec(beta), str(d)]])


def _m_word(s: Session, words: Sequence[str]):
    return s.imag.from_word([s.key(w) for w in words])


def cmd_mact(s: Session, a) -> Report:
    g = s.key(a.g)
    v = _m_word(s, a.word)
    w = s.imag.act(g, v)
    return Report({"vector": v.to_json(), "image": w.to_json()}, str(w), ["monomial", "coeff"], _vector_rows(w))


def cmd_prop3(s: Session, a) -> Report:
    v = _m_word(s, a.word)
    if not v:
        raise UsageError("the word gives the zero vector")
    m = s.imag.y_length(v)
    x = s.imag.prop3_probe(v, s.box)
    w = s.imag.act(x, v)
    key = next(iter(x.terms))
    return Report({"vector": v.to_json(), "witness": str(key), "y_length": m, "image_y_length": s.imag.y_length(w),
                   "image": w.to_json()},
                  f"{key}: y-length {m} -> {m - 1}", ["witness", "y_length", "image_y_length"],
                  [[str(key), str(m), str(m - 1)]])


def cmd_theorem2(s: Session, a) -> Report:
    gen = _m_word(s, a.word)
    if not gen:
        raise UsageError("the word gives the zero vector")
    rep = s.imag.theorem2_check(gen, s.box, max_vectors=s.budget)
    rows = [[str(r["slot"]["m"]), _vec(r["slot"]["degree"]), str(r["dim_N"]), str(r["dim_convolution"]),
             str(r["interior"]).lower(), str(r["pass"]).lower()] for r in rep["slots"]]
    verdict = "PASS" if rep["pass"] else "FAIL"
    summary = f"{verdict} slots={len(rows)} interior={sum(1 for r in rep['slots'] if r['interior'])}"
    status = EXIT_OK
    if rep["central_charge_zero"]:
        summary += " | hypothesis unmet: lambda(c_i) = 0 for all i"
        status = EXIT_HYPOTHESIS
    return Report(rep, summary, ["m", "degree", "dim_N", "dim_convolution", "interior", "pass"], rows, status)


def cmd_ldims(s: Session, a) -> Report:
    dims = s.imag.l_lambda_dims(s.box, s.budget)
    out, rows = [], []
    for (m, beta), d in dims.items():
        full = s.imag.weight_dimension(m, beta, s.box)
        out.append({"slot": {"m": m, "degree": list(beta)}, "dim": d, "dim_M": full})
        rows.append([str(m), _vec(beta), str(d), str(full)])
    return Report({"box": s.box.to_json(), "slots": out}, f"{len(out)} nonzero slots", ["m", "degree", "dim", "dim_M"],
                  rows)


def cmd_axioms(s: Session, a) -> Report:
    bound = a.box if a.box is not None else s.box.B
    alg = s.algebra
    keys = alg.basis_keys(bound)
    jac = alg.check_jacobi(keys)
    anti = alg.check_antisymmetry(keys)
    orc = alg.check_oracle(keys)
    checked, failed = orc["checked"], orc["failures"]
    first = None if orc["first_failure"] is None else [str(k) for k in orc["first_failure"]]
    ok = jac["failures"] == 0 and not jac["table_error"] and anti["failures"] == 0 and failed == 0
    summary = (f"{'PASS' if ok else 'FAIL'} jacobi={jac['checked'] - jac['failures']}/{jac['checked']} "
               f"antisym={anti['checked'] - anti['failures']}/{anti['checked']} oracle={checked - failed}/{checked}")

    def first_of(rep):
        f = rep["first_failure"]
        return None if f is None else [str(k) for k in f]

    result = {"box": bound, "keys": len(keys), "pass": ok,
              "jacobi": {"checked": jac["checked"], "failures": jac["failures"], "first_failure": first_of(jac),
                         "table_error": jac["table_error"]},
              "antisymmetry": {"checked": anti["checked"], "failures": anti["failures"],
                               "first_failure": first_of(anti)},
              "oracle": {"checked": checked, "failures": failed, "first_failure": list(first) if first else None}}
    rows = [["jacobi", str(jac["checked"]), str(jac["failures"])],
            ["antisymmetry", str(anti["checked"]), str(anti["failures"])],
            ["oracle", str(checked), str(failed)]]
    return Report(result, summary, ["check", "checked", "failures"], rows)


# ------------------------------------------------------------- parser


def _common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("configuration (flags override the config file)")
    g.add_argument("--config", help="JSON config file")
    g.add_argument("--n", type=int)
    g.add_argument("--backend", choices=["cyclotomic", "generic", "rational"])
    g.add_argument("--N", type=int, help="order of the root of unity")
    g.add_argument("--m", dest="m_entries", action="append", metavar="I,J=V", help="exponent m_ij above the diagonal (repeatable)")
    g.add_argument("--lambda-h", dest="lambda_h")
    g.add_argument("--lambda-c", dest="lambda_c", help="comma separated (';' if the values contain commas)")
    g.add_argument("--lambda-d", dest="lambda_d")
    g.add_argument("--B", type=int, help="box bound on exponents and degrees")
    g.add_argument("--L", type=int, help="box bound on the number of factors")
    g.add_argument("--max-y", dest="max_y", type=int, help="box bound on the number of Y-factors")
    g.add_argument("--raise-bound", dest="raise_bound", type=int)
    g.add_argument("--budget", type=int, help="maximal number of in-box vectors in a closure")
    g.add_argument("--format", choices=["json", "tsv", "text"])
    g.add_argument("-v", "--verbose", action="store_true")


COMMANDS: dict[str, tuple[Callable, str]] = {}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sl2cq", description="Exact computations in sl_2 over a quantum torus.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text)
        _common(p)
        p.set_defaults(func=func)
        return p

    p = add("bracket", cmd_bracket, "bracket of two basis keys, with the matrix oracle")
    p.add_argument("k1")
    p.add_argument("k2")
    p = add("torus-mul", cmd_torus_mul, "product t^a t^b in the quantum torus")
    p.add_argument("a")
    p.add_argument("b")
    p = add("radical", cmd_radical, "HNF basis of the radical on the first r coordinates")
    p.add_argument("r", type=int)
    p = add("lambda-lattice", cmd_lambda_lattice, "membership of rvec in Lambda_lambda")
    p.add_argument("rvec")
    p = add("witness", cmd_witness, "vector c with f(c, b) != 1 past the given bounds")
    p.add_argument("b")
    p.add_argument("bounds")
    p = add("hdim", cmd_hdim, "dimension of a degree of H(lambda) in the box")
    p.add_argument("beta")
    p = add("hact", cmd_hact, "act by a t generator on a word of t^- generators applied to v")
    p.add_argument("g")
    p.add_argument("word", nargs="*")
    add("tilde-h", cmd_tilde_h, "in-box basis of the submodule H~")
    p = add("singular", cmd_singular, "singular vectors of H(lambda), optionally modulo H~")
    p.add_argument("--quotient", action="store_true")
    p = add("mdim", cmd_mdim, "number of in-box monomials of M(lambda) in a slot")
    p.add_argument("m", type=int)
    p.add_argument("beta")
    p = add("mact", cmd_mact, "act by a basis key on a word applied to v in M(lambda)")
    p.add_argument("g")
    p.add_argument("word", nargs="*")
    p = add("prop3", cmd_prop3, "find X(A) lowering the number of Y-factors of a weight vector")
    p.add_argument("word", nargs="+")
    p = add("theorem2", cmd_theorem2, "compare a generated submodule with U(Y-span) tensor its Y-free part")
    p.add_argument("word", nargs="*")
    add("ldims", cmd_ldims, "in-box slot dimensions of the irreducible quotient L(lambda)")
    p = add("axioms", cmd_axioms, "Jacobi, antisymmetry and oracle checks on a box of basis keys")
    p.add_argument("--box", type=int, default=None)
    return parser


# ------------------------------------------------------------- output


def render(command: str, cfg: dict, report: Report, fmt: str, args_echo: dict) -> str:
    digest = config_digest(cfg)
    if fmt == "text":
        return f"{report.summary}\n"
    if fmt == "tsv":
        lines = [f"# sl2cq {command} config_digest={digest}", f"# {report.summary}"]
        if report.header:
            lines.append("\t".join(report.header))
        lines.extend("\t".join(row) for row in report.rows)
        return "\n".join(lines) + "\n"
    doc = {"command": command, "args": args_echo, "config_digest": digest, "config": cfg,
           "summary": report.summary, "result": report.result}
    return json.dumps(doc, indent=2) + "\n"


_CONFIG_DESTS = {"config", "n", "backend", "N", "m_entries", "lambda_h", "lambda_c", "lambda_d", "B", "L", "max_y",
                 "raise_bound", "budget", "format", "verbose", "func", "command"}


def _set_threads() -> None:
    raw = os.environ.get("SL2CQ_THREADS")
    if not raw:
        return
    try:
        import numba

        numba.set_num_threads(max(1, min(int(raw), numba.config.NUMBA_NUM_THREADS)))
    except (ValueError, ImportError):
        log.warning("ignoring SL2CQ_THREADS=%r", raw)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    _set_threads()
    try:
        cfg = effective_config(args)
        session = Session.build(cfg)
    except UsageError as exc:
        print(f"sl2cq: {exc}", file=sys.stderr)
        return EXIT_USAGE
    fmt = cfg.get("format", "json")
    echo = {k: v for k, v in sorted(vars(args).items()) if k not in _CONFIG_DESTS}
    try:
        report = args.func(session, args)
    except UsageError as exc:
        print(f"sl2cq: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (HypothesisUnmet, CentralChargeZero) as exc:
        report = Report({"error": "hypothesis_unmet", "message": str(exc)}, f"hypothesis unmet: {exc}",
                        status=EXIT_HYPOTHESIS)
    except (ClosureBudgetExceeded, SearchBudgetExceeded) as exc:
        report = Report({"error": "budget_exceeded", "message": str(exc)}, f"budget exceeded: {exc}",
                        status=EXIT_BUDGET)
    except (NonDecidableLambda, NoYFactors, ModuleError, AlgebraError, LatticeError, ValueError) as exc:
        print(f"sl2cq: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(render(args.command, cfg, report, fmt, echo))
    sys.stdout.flush()
    return report.status


if __name__ == "__main__":
    sys.exit(main())
