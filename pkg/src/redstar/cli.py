"""Scene-driven command line: configure a model, run verification suites,
and emit machine-readable reports.

Scenes are JSON files; all numbers may be given as strings like "1/2" to
stay exact.  Reports are deterministic for a fixed scene and seed: records
are sorted by identity and coefficients print as exact rationals with
explicit powers of pi.

Exit codes: 0 all identities pass, 1 some identity fails, 2 configuration
error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .funcs import Func
from .geometry import (
    DensityWeight,
    LieAlgebraData,
    ModelSpace,
    gaussian_base_weight,
    lebesgue_weight,
)
from .involution import reduced_involution
from .koszul import ReductionConfig, reduced_star
from .scalars import GaussRational
from .starprod import StarProduct
from .suites import SUITES, SuiteContext, run_suite


class SceneError(Exception):
    pass


class Scene:
    def __init__(self, data: dict, path: str = "<memory>"):
        self.path = path
        try:
            lie_spec = data["lie_algebra"]
            structure = {}
            for entry in lie_spec.get("structure_constants", []):
                a, b, c, v = entry
                structure[(int(a) - 1, int(b) - 1, int(c) - 1)] = Fraction(str(v))
            self.lie = LieAlgebraData(
                int(lie_spec["dim"]), structure, lie_spec.get("label", "")
            )
        except (KeyError, TypeError, IndexError) as exc:
            raise SceneError(f"bad lie_algebra block: {exc}") from exc
        except ValueError as exc:
            raise SceneError(str(exc)) from exc

        base = data.get("base", {})
        self.base_dim = int(base.get("dim", 2))
        matrix = base.get("poisson_matrix")
        if matrix is not None:
            matrix = [[Fraction(str(v)) for v in row] for row in matrix]
        self.poisson_matrix = matrix
        self.order = int(data.get("truncation_order", 4))
        caps = data.get("degree_caps", {})
        self.degree_cap = int(caps.get("polynomial", 3))
        self.operator_cap = int(caps.get("operator_basis", 4))
        self.seed = int(data.get("seed", 0))
        self.trials = int(data.get("trials", 8))
        self.suites = list(data.get("suites", ["all"]))
        self.weights = dict(data.get("weights", {}))
        self.star_product = data.get("star_product", "total")
        self.label = data.get("label", self.lie.label)

    def model(self) -> ModelSpace:
        try:
            return ModelSpace(self.lie, self.base_dim, self.order,
                              self.poisson_matrix)
        except ValueError as exc:
            raise SceneError(str(exc)) from exc

    def weight(self, model: ModelSpace, name: str) -> DensityWeight:
        spec = self.weights.get(name)
        if spec is None:
            if name == "lebesgue":
                return lebesgue_weight(model)
            if name == "gaussian":
                return gaussian_base_weight(model, 1)
            raise SceneError(f"unknown weight {name!r}")
        kind = spec.get("kind", "gaussian")
        if kind == "lebesgue":
            return lebesgue_weight(model)
        if kind == "gaussian":
            return gaussian_base_weight(model, Fraction(str(spec.get("exponent", 1))))
        raise SceneError(f"unknown weight kind {kind!r}")

    def context(self, model: ModelSpace) -> SuiteContext:
        return SuiteContext(model, seed=self.seed, trials=self.trials,
                            degree_cap=self.degree_cap,
                            operator_cap=self.operator_cap)


def load_scene(path: str) -> Scene:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise SceneError(f"cannot read scene file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SceneError(f"scene file is not valid JSON: {exc}") from exc
    return Scene(data, path)


# ---------------------------------------------------------------------------
# a small polynomial expression parser for the computation verbs
# ---------------------------------------------------------------------------


class _ExprParser:
    """Polynomials in the model coordinates with +, -, *, ^ and fractions."""

    def __init__(self, text: str, model: ModelSpace):
        import re

        self.tokens = re.findall(r"\d+/\d+|\d+|[A-Za-z_][A-Za-z_0-9]*|\*\*|[-+*^()]",
                                 text)
        self.pos = 0
        self.model = model

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def parse(self) -> Func:
        out = self.expr()
        if self.peek() is not None:
            raise SceneError(f"unexpected token {self.peek()!r}")
        return out

    def expr(self) -> Func:
        sign = 1
        while self.peek() in ("+", "-"):
            if self.take() == "-":
                sign = -sign
        node = self.term() * GaussRational(sign)
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            node = node + (rhs if op == "+" else -rhs)
        return node

    def term(self) -> Func:
        node = self.power()
        while self.peek() == "*":
            self.take()
            node = node * self.power()
        return node

    def power(self) -> Func:
        base = self.atom()
        if self.peek() in ("^", "**"):
            self.take()
            exp = int(self.take())
            out = self.model.one()
            for _ in range(exp):
                out = out * base
            return out
        return base

    def atom(self) -> Func:
        tok = self.take()
        if tok is None:
            raise SceneError("unexpected end of expression")
        if tok == "(":
            node = self.expr()
            if self.take() != ")":
                raise SceneError("missing closing parenthesis")
            return node
        if tok == "-":
            return -self.atom()
        if tok.replace("/", "").isdigit():
            return self.model.constant(Fraction(tok))
        if tok in self.model.gens:
            return self.model.var(tok)
        if tok == "i":
            return self.model.constant(0) + self.model.one() * GaussRational(0, 1)
        raise SceneError(f"unknown symbol {tok!r}; coordinates are {self.model.gens}")


def parse_expr(text: str, model: ModelSpace) -> Func:
    return _ExprParser(text, model).parse()


# ---------------------------------------------------------------------------
# report emission
# ---------------------------------------------------------------------------


def emit_report(records: list, fmt: str, scene_label: str = "",
                timings: bool = False) -> str:
    """Render records with a stable field order.

    Reports are byte-identical across runs for a fixed scene and seed;
    wall-clock timings are therefore opt-in.
    """
    records = sorted(records, key=lambda r: r["id"])
    counts = {
        "pass": sum(1 for r in records if r["status"] == "pass"),
        "fail": sum(1 for r in records if r["status"] == "fail"),
        "skip": sum(1 for r in records if r["status"] == "skip"),
    }
    if fmt == "json":
        out_records = []
        for r in records:
            rec = {
                "id": r["id"],
                "statement": r["statement"],
                "status": r["status"],
                "first_bad_order": r["first_bad_order"],
                "detail": r["detail"],
            }
            if timings:
                rec["seconds"] = r["seconds"]
            out_records.append(rec)
        doc = {"scene": scene_label, "counts": counts, "records": out_records}
        return json.dumps(doc, indent=2, sort_keys=False)
    if fmt == "text":
        lines = [f"scene: {scene_label}"]
        for r in records:
            mark = {"pass": "ok  ", "fail": "FAIL", "skip": "skip"}[r["status"]]
            extra = ""
            if r["status"] == "fail":
                extra = f"  [first bad order {r['first_bad_order']}] {r['detail']}"
            elif r["status"] == "skip":
                extra = f"  [{r['detail']}]"
            lines.append(f"{mark}  {r['id']}: {r['statement']}{extra}")
        lines.append(
            f"total: {counts['pass']} pass, {counts['fail']} fail, "
            f"{counts['skip']} skip"
        )
        return "\n".join(lines)
    raise SceneError(f"unknown report format {fmt!r}")


def _write_out(text: str, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------------------
# verbs
# ---------------------------------------------------------------------------


def cmd_verify(args) -> int:
    scene = load_scene(args.scene)
    if args.seed is not None:
        scene.seed = args.seed
    if args.order is not None:
        scene.order = args.order
    if args.degree_cap is not None:
        scene.degree_cap = args.degree_cap
    model = scene.model()
    ctx = scene.context(model)
    suites = [args.suite] if args.suite else scene.suites
    for name in suites:
        if name != "all" and name not in SUITES:
            raise SceneError(
                f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'"
            )
        run_suite(ctx, name)
    text = emit_report(ctx.records, args.format, scene.label, timings=args.timings)
    _write_out(text, args.out)
    return 1 if any(r["status"] == "fail" for r in ctx.records) else 0


def cmd_star(args) -> int:
    scene = load_scene(args.scene)
    if args.order is not None:
        scene.order = args.order
    model = scene.model()
    name = args.product or scene.star_product
    product = StarProduct(model, name)
    f = parse_expr(args.left, model)
    g = parse_expr(args.right, model)
    result = product(f, g)
    print(f"# {name}: ({args.left}) with ({args.right})")
    for r, coeff in enumerate(result.series.coeffs):
        print(f"lam^{r}: {coeff!r}")
    return 0


def cmd_reduce(args) -> int:
    scene = load_scene(args.scene)
    if args.order is not None:
        scene.order = args.order
    model = scene.model()
    cfg = ReductionConfig(model, Fraction(1, 2))
    if args.left and args.right:
        u = parse_expr(args.left, model)
        v = parse_expr(args.right, model)
    else:
        ctx = scene.context(model)
        u, v = ctx.rand_base(), ctx.rand_base()
        print(f"# random inputs (seed {scene.seed}): u = {u!r}; v = {v!r}")
    for name in model.group_names + model.momentum_names:
        if u.depends_on(name) or v.depends_on(name):
            raise SceneError("reduce takes base-coordinate functions")
    result = reduced_star(cfg, u, v)
    print("# coefficients of the reduced product")
    for r, coeff in enumerate(result.series.coeffs):
        print(f"C_{r}: {coeff!r}")
    return 0


def cmd_involve(args) -> int:
    scene = load_scene(args.scene)
    if args.order is not None:
        scene.order = args.order
    model = scene.model()
    u = parse_expr(args.input, model)
    weight = scene.weight(model, args.weight)
    ustar = reduced_involution(model, u, weight)
    print(f"# involution of ({args.input}) for weight {args.weight}")
    for r, coeff in enumerate(ustar.series.coeffs):
        print(f"lam^{r}: {coeff!r}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="redstar",
        description="exact verification of star-product reduction identities",
    )
    sub = p.add_subparsers(dest="command", required=True)

    pv = sub.add_parser("verify", help="run verification suites from a scene")
    pv.add_argument("--scene", required=True)
    pv.add_argument("--suite", default=None,
                    help="suite name (default: the scene's list)")
    pv.add_argument("--format", default="text", choices=["text", "json"])
    pv.add_argument("--out", default=None, help="write the report to a file")
    pv.add_argument("--seed", type=int, default=None)
    pv.add_argument("--order", type=int, default=None)
    pv.add_argument("--degree-cap", dest="degree_cap", type=int, default=None)
    pv.add_argument("--timings", action="store_true",
                    help="include wall-clock timings (breaks byte determinism)")
    pv.set_defaults(fn=cmd_verify)

    ps = sub.add_parser("star", help="multiply two functions and print the series")
    ps.add_argument("--scene", required=True)
    ps.add_argument("--product", default=None,
                    choices=["moyal", "std", "weyl_g", "total"],
                    help="default: the scene's star_product entry")
    ps.add_argument("--left", required=True)
    ps.add_argument("--right", required=True)
    ps.add_argument("--order", type=int, default=None)
    ps.set_defaults(fn=cmd_star)

    pr = sub.add_parser("reduce", help="print the reduced-product coefficients")
    pr.add_argument("--scene", required=True)
    pr.add_argument("--left", default=None)
    pr.add_argument("--right", default=None)
    pr.add_argument("--order", type=int, default=None)
    pr.set_defaults(fn=cmd_reduce)

    pi = sub.add_parser("involve", help="print the weighted involution of a function")
    pi.add_argument("--scene", required=True)
    pi.add_argument("--input", required=True)
    pi.add_argument("--weight", default="gaussian")
    pi.add_argument("--order", type=int, default=None)
    pi.set_defaults(fn=cmd_involve)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except SceneError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
