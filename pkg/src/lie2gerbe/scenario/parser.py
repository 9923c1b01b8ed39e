"""Scenario language: a block-structured description of a geometry and the suites to run on it.

Example::

    space dim=3 ring=poly
    def B0 = x1*dx2∧dx3
    def chi = d(B0)
    def tau = dx1∧dx2
    cover three-box
    gerbe seed 4 potential B0
    liealg abelian 2
    action e1 -> D1, e2 -> D2
    moment auto
    suite l2-axioms, butterfly-F, prop41
    options cases=20 seed=1

Expressions use the renderer's own syntax (``x1^2``, ``2pi``, ``cos(2pi*(x1-2*x3))``,
``(x2)*dx1∧dx3``, ``D1``), so anything the library prints parses back.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from lark import Lark, Token, Tree
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken

from ..cartan import COS, POLY, SIN, TRIG, Form, Q, Scalar, Space, VectorField, d, interior, lie_derivative, vf_bracket, wedge
from ..gerbe import CechCover, Curving, GerbeData, DegenerateCover, single_chart, three_box_cube
from ..moment import (
    ActionData,
    FiniteLieAlgebra,
    InvalidAlgebra,
    LieVec,
    abelian,
    heisenberg,
    heisenberg_action,
    rotations,
    so3,
    translations,
)

SUITES = (
    "l2-axioms", "morphisms", "gerbe-valid", "lemma-connex",
    "butterfly-F", "butterfly-G", "butterfly-E",
    "prop32", "prop35", "prop37", "prop39", "remark-gcanon",
    "moment", "prop41", "outer-edge",
)

GRAMMAR = r"""
start: block*

?block: space | defn | cover | gerbe | liealg | action | moment | suite | options

space: "space" kv*
options: "options" kv*
kv: KEY "=" (NAME | number)

defn: "def" NAME "=" expr

cover: "cover" COVERNAME         -> cover_named
     | "cover" box+              -> cover_boxes
box: "box" interval+
interval: "[" expr "," expr "]"

gerbe: "gerbe" "seed" INT ("potential" NAME)? ("degree" INT)?   -> gerbe_seed
     | "gerbe" "explicit" gerbe_item+                           -> gerbe_explicit
gerbe_item: "h" "(" INT "," INT "," INT ")" "=" expr            -> g_h
          | "Lambda" "(" INT "," INT ")" "=" expr               -> g_lam
          | "B" "(" INT ")" "=" expr                            -> g_b

liealg: "liealg" NAME INT?                                      -> liealg_named
      | "liealg" "dim" INT lie_rel*                             -> liealg_table
lie_rel: "[" NAME "," NAME "]" "=" expr

action: "action" NAME                                           -> action_named
      | "action" action_item ("," action_item)*                 -> action_maps
action_item: NAME "->" expr

moment: "moment" AUTO? moment_item*
moment_item: "J0" "(" NAME ")" "=" "(" expr "," expr ")"       -> j0
           | "J2" "(" NAME "," NAME ")" "=" expr                -> j2

suite: "suite" SUITENAME ("," SUITENAME)*

?expr: sum
?sum: product
    | sum "+" product                  -> add
    | sum "-" product                  -> sub
?product: unary
    | product "*" unary                -> mul
    | product "/" unary                -> div
    | product WEDGE unary              -> wedge
?unary: power
    | "-" unary                        -> neg
?power: atom
    | atom "^" INT                     -> pow
?atom: number
    | TWO_PI                           -> twopi
    | NAME                             -> var
    | NAME "(" [expr ("," expr)*] ")"  -> call
    | "(" expr ")"

number: DECIMAL | INT
WEDGE: "∧" | "^^"
TWO_PI.3: "2pi" | "2π"
DECIMAL.2: /\d+\.\d+/
SUITENAME: /[A-Za-z][A-Za-z0-9]*(-[A-Za-z0-9]+)*/
COVERNAME: /[a-z]+(-[a-z]+)*/
AUTO: "auto"
KEY: /[A-Za-z_][A-Za-z0-9_]*(-[A-Za-z0-9_]+)*/
NAME: /[A-Za-z_][A-Za-z0-9_]*/

%import common.INT
%import common.WS
COMMENT: /#[^\n]*/
%ignore WS
%ignore COMMENT
"""

_PARSER = Lark(GRAMMAR, parser="lalr", lexer="contextual", propagate_positions=True)

RESERVED = {"d", "i", "L", "bracket", "wedge", "sin", "cos"}
_COORD = re.compile(r"x(\d+)$")
_DX = re.compile(r"dx(\d+)$")
_D = re.compile(r"D(\d+)$")
_E = re.compile(r"e(\d+)$")


class ScenarioError(ValueError):
    """Input error with a source location."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message, self.line, self.column = message, line, column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


class ScenarioTypeError(ScenarioError):
    pass


@dataclass(frozen=True)
class RunOptions:
    cases: int = 20
    seed: int = 0
    max_degree: int = 2


@dataclass(frozen=True)
class GerbeSpec:
    seed: int | None = None
    potential: str | None = None
    degree: int = 2
    data: GerbeData | None = None
    curving: Curving | None = None


@dataclass(frozen=True)
class MomentSpec:
    auto: bool = True
    J0: tuple = ()      # ((m, x, beta), ...)
    J2: tuple = ()      # ((m, n, scalar), ...)


@dataclass
class ScenarioDoc:
    space: Space
    defs: dict = field(default_factory=dict)
    cover: CechCover | None = None
    gerbe: GerbeSpec | None = None
    liealg: FiniteLieAlgebra | None = None
    action: ActionData | None = None
    moment: MomentSpec | None = None
    suites: tuple = ()
    options: RunOptions = RunOptions()

    def render_definitions(self) -> str:
        return "\n".join(f"def {k} = {render_value(v)}" for k, v in self.defs.items())


def render_value(v) -> str:
    if isinstance(v, (Scalar, Form, VectorField, LieVec)):
        return v.render()
    return str(v)


# -- evaluation -----------------------------------------------------------------------

def _pos(node):
    meta = getattr(node, "meta", None)
    if meta is not None and not meta.empty:
        return meta.line, meta.column
    if isinstance(node, Token):
        return node.line, node.column
    return None, None


def _type_name(v) -> str:
    if isinstance(v, Form):
        return f"{v.k}-form"
    if isinstance(v, Scalar) or _is_num(v):
        return "scalar"
    if isinstance(v, VectorField):
        return "vector field"
    if isinstance(v, LieVec):
        return "Lie algebra element"
    return type(v).__name__


def _is_num(v) -> bool:
    return hasattr(v, "numerator") and not isinstance(v, (Scalar, Form, VectorField))


class Evaluator:
    def __init__(self, space: Space, defs: dict, lie: FiniteLieAlgebra | None = None):
        self.space = space
        self.defs = defs
        self.lie = lie

    def fail(self, node, msg, cls=ScenarioTypeError):
        line, col = _pos(node)
        raise cls(msg, line, col)

    def lift(self, v):
        return self.space.const(v) if _is_num(v) else v

    def eval(self, node):
        if isinstance(node, Token):
            return self.fail(node, f"unexpected token {node!r}")
        return getattr(self, "e_" + node.data)(node)

    # literals and names
    def e_number(self, node):
        return Q(str(node.children[0]))

    def e_twopi(self, node):
        if self.space.ring != TRIG:
            self.fail(node, "2pi only occurs on trig spaces")
        return self.space.two_pi()

    def e_var(self, node):
        name = str(node.children[0])
        n = self.space.n
        if name in self.defs:
            return self.defs[name]
        for pat, kind in ((_COORD, "x"), (_DX, "dx"), (_D, "D"), (_E, "e")):
            m = pat.match(name)
            if not m:
                continue
            i = int(m.group(1)) - 1
            if kind == "e":
                if self.lie is None or not 0 <= i < self.lie.dim:
                    self.fail(node, f"undefined name {name!r}", ScenarioError)
                return self.lie.basis(i)
            if not 0 <= i < n:
                self.fail(node, f"{name} is out of range for dimension {n}")
            if kind == "x":
                if self.space.ring == TRIG:
                    self.fail(node, f"coordinate {name} is not a function on the torus; use sin/cos")
                return self.space.coord(i)
            if kind == "dx":
                return Form.basis(self.space, (i,))
            return VectorField.coordinate(self.space, i)
        self.fail(node, f"undefined name {name!r}", ScenarioError)

    # arithmetic
    def _binary(self, node):
        return self.eval(node.children[0]), self.eval(node.children[-1])

    def _same_kind(self, node, a, b, op):
        if _is_num(a) and _is_num(b):
            return a, b
        if isinstance(a, LieVec) or isinstance(b, LieVec):
            if isinstance(a, LieVec) and isinstance(b, LieVec):
                return a, b
        else:
            a, b = self.lift(a), self.lift(b)
            if type(a) is type(b) and (not isinstance(a, Form) or a.k == b.k):
                return a, b
        self.fail(node, f"cannot {op} {_type_name(a)} and {_type_name(b)}")

    def e_add(self, node):
        a, b = self._same_kind(node, *self._binary(node), "add")
        return a + b

    def e_sub(self, node):
        a, b = self._same_kind(node, *self._binary(node), "subtract")
        return a - b

    def e_neg(self, node):
        return -self.eval(node.children[0])

    def e_mul(self, node):
        a, b = self._binary(node)
        if _is_num(a) and _is_num(b):
            return a * b
        if _is_num(a):
            return b * a
        if _is_num(b):
            return a * b
        if isinstance(a, Scalar) and isinstance(b, (Scalar, Form, VectorField)):
            return b * a
        if isinstance(b, Scalar) and isinstance(a, (Form, VectorField)):
            return a * b
        self.fail(node, f"cannot multiply {_type_name(a)} by {_type_name(b)}; use ∧ for forms")

    def e_div(self, node):
        a, b = self._binary(node)
        if not _is_num(b):
            self.fail(node, "division only by rational constants")
        if b == 0:
            self.fail(node, "division by zero")
        return a * (1 / b) if not _is_num(a) else a / b

    def e_wedge(self, node):
        return self._wedge(node, *self._binary(node))

    def _wedge(self, node, a, b):
        a, b = self.lift(a), self.lift(b)
        if not all(isinstance(v, (Scalar, Form)) for v in (a, b)):
            self.fail(node, f"cannot wedge {_type_name(a)} with {_type_name(b)}")
        return wedge(a, b)

    def e_pow(self, node):
        base = self.eval(node.children[0])
        m = int(node.children[1])
        if _is_num(base):
            return base ** m
        if not isinstance(base, Scalar):
            self.fail(node, f"cannot raise {_type_name(base)} to a power")
        return base ** m

    # functions
    def e_call(self, node):
        fname = str(node.children[0])
        args = [c for c in node.children[1:] if c is not None]
        if fname in ("sin", "cos"):
            return self._trig(node, fname, args)
        vals = [self.eval(a) for a in args]
        arity = {"d": 1, "i": 2, "L": 2, "bracket": 2, "wedge": 2}
        if fname not in arity:
            if fname in self.defs:
                self.fail(node, f"{fname!r} is not a function")
            self.fail(node, f"undefined function {fname!r}", ScenarioError)
        if len(vals) != arity[fname]:
            self.fail(node, f"{fname} takes {arity[fname]} argument(s), got {len(vals)}")
        if fname == "wedge":
            return self._wedge(node, *vals)
        if fname == "d":
            v = self.lift(vals[0])
            if not isinstance(v, (Scalar, Form)):
                self.fail(node, f"d of a {_type_name(v)}")
            return d(v)
        u, w = vals[0], self.lift(vals[1])
        if fname == "bracket":
            if not (isinstance(u, VectorField) and isinstance(w, VectorField)):
                self.fail(node, "bracket takes two vector fields")
            return vf_bracket(u, w)
        if not isinstance(u, VectorField):
            self.fail(node, f"{fname}: first argument must be a vector field")
        if fname == "i":
            if not isinstance(w, Form):
                self.fail(node, f"i: cannot contract a {_type_name(w)}")
            return interior(u, w)
        if isinstance(w, Scalar):
            return u(w)
        if not isinstance(w, Form):
            self.fail(node, f"L: cannot differentiate a {_type_name(w)}")
        return lie_derivative(u, w)

    def _trig(self, node, fname, args):
        if self.space.ring != TRIG:
            self.fail(node, f"{fname} is not available on a polynomial space")
        if len(args) != 1:
            self.fail(node, f"{fname} takes 1 argument, got {len(args)}")
        freq = _phase(args[0], self.space.n, self)
        return self.space.trig(COS if fname == "cos" else SIN, freq)


def _phase(node, n, ev: Evaluator):
    """Integer frequency k for an argument of the form 2pi*(k.x)."""
    # work in an auxiliary polynomial space whose last coordinate stands for 2pi
    aux = Space(n + 1, POLY)

    def go(t):
        if isinstance(t, Tree):
            if t.data == "twopi":
                return aux.coord(n)
            if t.data == "var":
                m = _COORD.match(str(t.children[0]))
                if not m or not 1 <= int(m.group(1)) <= n:
                    ev.fail(t, f"trig argument must be 2pi times an integer combination of x1..x{n}")
                return aux.coord(int(m.group(1)) - 1)
            if t.data == "number":
                return aux.const(Q(str(t.children[0])))
            if t.data in ("add", "sub", "mul", "neg"):
                vals = [go(c) for c in t.children if isinstance(c, Tree)]
                if t.data == "neg":
                    return -vals[0]
                a, b = vals
                return a + b if t.data == "add" else a - b if t.data == "sub" else a * b
        ev.fail(t, f"trig argument must be 2pi times an integer combination of x1..x{n}")

    val = go(node)
    freq = [0] * n
    for (e, p, f, k), c in val.terms.items():
        if e[n] != 1 or sum(e) != 2 or c.denominator != 1:
            ev.fail(node, f"trig argument must be 2pi times an integer combination of x1..x{n}")
        freq[e.index(1)] = int(c)
    return tuple(freq)


# -- document assembly ------------------------------------------------------------------

def _kv(node):
    out = {}
    for kv in node.children:
        key, val = kv.children
        if isinstance(val, Tree):
            val = Q(str(val.children[0]))
        out[str(key)] = (val, kv)
    return out


def _int_option(node, kv, key, v, lo=0):
    if not hasattr(v, "numerator") or v.denominator != 1 or v < lo:
        line, col = _pos(kv)
        raise ScenarioError(f"{key} must be an integer >= {lo}", line, col)
    return int(v)


def parse_scenario(text: str) -> ScenarioDoc:
    try:
        tree = _PARSER.parse(text)
    except UnexpectedInput as exc:
        raise _syntax_error(exc, text) from None
    blocks = tree.children
    space_blocks = [b for b in blocks if b.data == "space"]
    if len(space_blocks) != 1:
        line, col = _pos(space_blocks[1]) if space_blocks else (1, 1)
        raise ScenarioError("exactly one space block is required", line, col)
    doc = ScenarioDoc(space=_space(space_blocks[0]))
    if blocks[0].data != "space":
        line, col = _pos(blocks[0])
        raise ScenarioError("the space block must come first", line, col)
    opts = {}
    for b in blocks[1:]:
        handler = _BLOCKS[b.data]
        handler(doc, b, opts)
    doc.options = RunOptions(**opts)
    return doc


def _syntax_error(exc: UnexpectedInput, text: str) -> ScenarioError:
    if isinstance(exc, UnexpectedEOF):
        lines = text.splitlines() or [""]
        return ScenarioError("unexpected end of input", len(lines), len(lines[-1]) + 1)
    if isinstance(exc, UnexpectedToken):
        tok = exc.token
        what = "end of input" if tok.type == "$END" else repr(str(tok))
        return ScenarioError(f"unexpected {what}", exc.line, exc.column)
    if isinstance(exc, UnexpectedCharacters):
        return ScenarioError(f"unexpected character {exc.char!r}", exc.line, exc.column)
    return ScenarioError(str(exc), getattr(exc, "line", None), getattr(exc, "column", None))


def _space(node) -> Space:
    kv = _kv(node)
    unknown = set(kv) - {"dim", "ring"}
    if unknown:
        line, col = _pos(kv[sorted(unknown)[0]][1])
        raise ScenarioError(f"unknown space key {sorted(unknown)[0]!r}", line, col)
    if "dim" not in kv:
        line, col = _pos(node)
        raise ScenarioError("space needs dim=N", line, col)
    n = _int_option(node, kv["dim"][1], "dim", kv["dim"][0], lo=1)
    ring = str(kv.get("ring", (POLY, None))[0])
    if ring not in (POLY, TRIG):
        line, col = _pos(kv["ring"][1])
        raise ScenarioError(f"ring must be poly or trig, not {ring!r}", line, col)
    return Space(n, ring)


def _defn(doc, node, opts):
    name = str(node.children[0])
    line, col = _pos(node)
    if name in RESERVED or any(p.match(name) for p in (_COORD, _DX, _D, _E)):
        raise ScenarioError(f"{name!r} is a reserved name", line, col)
    if name in doc.defs:
        raise ScenarioError(f"{name!r} is already defined", line, col)
    doc.defs[name] = _evaluate(doc, node.children[1])


def _evaluate(doc, node, lie=None):
    ev = Evaluator(doc.space, doc.defs, lie)
    try:
        return ev.eval(node)
    except ScenarioError:
        raise
    except (ValueError, IndexError) as exc:
        line, col = _pos(node)
        raise ScenarioTypeError(str(exc), line, col) from None


def _cover_named(doc, node, opts):
    name = str(node.children[0])
    line, col = _pos(node)
    makers = {"single": single_chart, "three-box": three_box_cube}
    if name not in makers:
        raise ScenarioError(f"unknown cover {name!r} (single, three-box, or explicit boxes)", line, col)
    try:
        doc.cover = makers[name](doc.space)
    except DegenerateCover as exc:
        raise ScenarioError(str(exc), line, col) from None


def _cover_boxes(doc, node, opts):
    boxes = []
    for box in node.children:
        boxes.append(tuple(tuple(_rational(doc, e) for e in iv.children) for iv in box.children))
    line, col = _pos(node)
    try:
        doc.cover = CechCover(doc.space, tuple(boxes))
    except DegenerateCover as exc:
        raise ScenarioError(str(exc), line, col) from None


def _rational(doc, node):
    v = _evaluate(doc, node)
    if isinstance(v, Scalar) and not v.terms:
        return Q(0)
    if isinstance(v, Scalar) and v == v.constant_mode() and len(v.terms) == 1 and not any(k[1] for k in v.terms):
        return next(iter(v.terms.values()))
    if not _is_num(v):
        line, col = _pos(node)
        raise ScenarioTypeError("box endpoints must be rational constants", line, col)
    return v


def _require_cover(doc, node):
    if doc.cover is None:
        line, col = _pos(node)
        raise ScenarioError("gerbe block needs a preceding cover block", line, col)


def _gerbe_seed(doc, node, opts):
    _require_cover(doc, node)
    seed = int(node.children[0])
    potential, degree = None, 2
    for tok in node.children[1:]:
        if tok.type == "NAME":
            potential = str(tok)
            if potential not in doc.defs or not (isinstance(doc.defs[potential], Form) and doc.defs[potential].k == 2):
                raise ScenarioTypeError(f"potential {potential!r} must be a defined 2-form", tok.line, tok.column)
        else:
            degree = int(tok)
    doc.gerbe = GerbeSpec(seed=seed, potential=potential, degree=degree)


def _gerbe_explicit(doc, node, opts):
    _require_cover(doc, node)
    cov, space = doc.cover, doc.space
    h = {t: space.zero() for t in cov.triples}
    lam = {p: Form.zero(space, 1) for p in cov.pairs}
    B = [None] * cov.size
    for item in node.children:
        idx = tuple(int(t) - 1 for t in item.children[:-1])
        val = _evaluate(doc, item.children[-1])
        line, col = _pos(item)
        want = {"g_h": (Scalar, 0, h), "g_lam": (Form, 1, lam), "g_b": (Form, 2, None)}[item.data]
        val = space.const(val) if _is_num(val) else val
        if not isinstance(val, want[0]) or (want[0] is Form and val.k != want[1]):
            raise ScenarioTypeError(f"expected a {'scalar' if want[1] == 0 else f'{want[1]}-form'}, got {_type_name(val)}",
                                    line, col)
        if item.data == "g_b":
            if not 0 <= idx[0] < cov.size:
                raise ScenarioError(f"chart {idx[0] + 1} does not exist", line, col)
            B[idx[0]] = val
            continue
        table = want[2]
        if idx not in table:
            raise ScenarioError(f"U_{''.join(str(i + 1) for i in idx)} is not an overlap of the cover "
                                "(indices must be increasing)", line, col)
        table[idx] = val
    if any(b is None for b in B):
        line, col = _pos(node)
        raise ScenarioError("explicit gerbe needs a curving B(i) on every chart", line, col)
    data = GerbeData(cov, tuple(h[t] for t in cov.triples), tuple(lam[p] for p in cov.pairs))
    doc.gerbe = GerbeSpec(data=data, curving=Curving(tuple(B)))


def _liealg_named(doc, node, opts):
    name = str(node.children[0])
    line, col = _pos(node)
    k = int(node.children[1]) if len(node.children) > 1 and node.children[1] is not None else None
    if name == "abelian":
        if k is None or k < 1:
            raise ScenarioError("abelian needs a dimension", line, col)
        doc.liealg = abelian(k)
    elif name in ("heisenberg", "so3") and k is None:
        doc.liealg = heisenberg() if name == "heisenberg" else so3()
    else:
        raise ScenarioError(f"unknown Lie algebra {name!r} (abelian N, heisenberg, so3, or dim N with brackets)",
                            line, col)


def _liealg_table(doc, node, opts):
    k = int(node.children[0])
    line, col = _pos(node)
    if k < 1:
        raise ScenarioError("dimension must be >= 1", line, col)
    labels = tuple(f"e{i + 1}" for i in range(k))
    probe = FiniteLieAlgebra(labels, ())
    consts = []
    for rel in node.children[1:]:
        a, b, rhs = rel.children
        ia, ib = (_basis_index(t, k) for t in (a, b))
        val = _evaluate(doc, rhs, lie=probe)
        rl, rc = _pos(rel)
        if not isinstance(val, LieVec):
            raise ScenarioTypeError(f"bracket value must be a combination of e1..e{k}", rl, rc)
        if ia == ib:
            raise ScenarioError("[e,e] is zero by antisymmetry", rl, rc)
        sign = 1 if ia < ib else -1
        for l, c in enumerate(val.c):
            if c:
                consts.append((min(ia, ib), max(ia, ib), l, sign * c))
    try:
        doc.liealg = FiniteLieAlgebra(labels, tuple(consts))
    except InvalidAlgebra as exc:
        raise ScenarioError(str(exc), line, col) from None


def _basis_index(tok, k):
    m = _E.match(str(tok))
    if not m or not 1 <= int(m.group(1)) <= k:
        raise ScenarioError(f"{tok} is not a basis element e1..e{k}", tok.line, tok.column)
    return int(m.group(1)) - 1


def _require_liealg(doc, node, what):
    if doc.liealg is None:
        line, col = _pos(node)
        raise ScenarioError(f"{what} block needs a preceding liealg block", line, col)


def _action_named(doc, node, opts):
    _require_liealg(doc, node, "action")
    name = str(node.children[0])
    line, col = _pos(node)
    g = doc.liealg
    makers = {
        "translations": lambda: translations(doc.space, g.dim),
        "heisenberg": lambda: heisenberg_action(doc.space),
        "rotations": lambda: rotations(doc.space),
    }
    if name not in makers:
        raise ScenarioError(f"unknown action {name!r} (translations, heisenberg, rotations, or e1 -> field, ...)",
                            line, col)
    if doc.space.ring != POLY or (name != "translations" and doc.space.n != 3) or g.dim > doc.space.n:
        raise ScenarioError(f"action {name!r} does not fit this space", line, col)
    act = makers[name]()
    if act.algebra.structure != g.structure:
        raise ScenarioError(f"action {name!r} is for a different Lie algebra", line, col)
    doc.action = ActionData(g, act.fields)


def _action_maps(doc, node, opts):
    _require_liealg(doc, node, "action")
    g = doc.liealg
    fields = [None] * g.dim
    for item in node.children:
        i = _basis_index(item.children[0], g.dim)
        val = _evaluate(doc, item.children[1])
        line, col = _pos(item)
        if not isinstance(val, VectorField):
            raise ScenarioTypeError(f"e{i + 1} must map to a vector field, got {_type_name(val)}", line, col)
        fields[i] = val
    if any(f is None for f in fields):
        line, col = _pos(node)
        missing = ", ".join(f"e{i + 1}" for i, f in enumerate(fields) if f is None)
        raise ScenarioError(f"action leaves {missing} unassigned", line, col)
    doc.action = ActionData(g, tuple(fields))


def _moment(doc, node, opts):
    _require_liealg(doc, node, "moment")
    g = doc.liealg
    items = [c for c in node.children if isinstance(c, Tree)]
    auto = any(isinstance(c, Token) and c.type == "AUTO" for c in node.children)
    if not auto and not items:
        line, col = _pos(node)
        raise ScenarioError("moment needs 'auto' or explicit J0/J2 entries", line, col)
    j0, j2 = [], []
    for item in items:
        line, col = _pos(item)
        if item.data == "j0":
            m = _basis_index(item.children[0], g.dim)
            x, beta = (_evaluate(doc, c) for c in item.children[1:])
            if not isinstance(x, VectorField) or not (isinstance(beta, Form) and beta.k == 1):
                raise ScenarioTypeError("J0(e) = (vector field, 1-form)", line, col)
            j0.append((m, x, beta))
        else:
            m, n = (_basis_index(t, g.dim) for t in item.children[:2])
            s = _evaluate(doc, item.children[2])
            s = doc.space.const(s) if _is_num(s) else s
            if not isinstance(s, Scalar):
                raise ScenarioTypeError(f"J2 values are scalars, got {_type_name(s)}", line, col)
            if m == n:
                raise ScenarioError("J2(e,e) is zero by antisymmetry", line, col)
            j2.append((m, n, s) if m < n else (n, m, -s))
    if not auto and sorted(m for m, _, _ in j0) != list(range(g.dim)):
        line, col = _pos(node)
        raise ScenarioError("explicit moment map needs exactly one J0 entry per basis element", line, col)
    doc.moment = MomentSpec(auto=auto, J0=tuple(j0), J2=tuple(j2))


def _suite(doc, node, opts):
    names = []
    for tok in node.children:
        if str(tok) not in SUITES:
            raise ScenarioError(f"unknown suite {str(tok)!r}", tok.line, tok.column)
        names.append(str(tok))
    doc.suites = doc.suites + tuple(n for n in names if n not in doc.suites)


def _options(doc, node, opts):
    for key, (v, kv) in _kv(node).items():
        k = key.replace("-", "_")
        if k not in ("cases", "seed", "max_degree"):
            line, col = _pos(kv)
            raise ScenarioError(f"unknown option {key!r}", line, col)
        opts[k] = _int_option(node, kv, key, v, lo=1 if k == "cases" else 0)


def _space_again(doc, node, opts):
    line, col = _pos(node)
    raise ScenarioError("exactly one space block is required", line, col)


_BLOCKS = {
    "space": _space_again,
    "defn": _defn,
    "cover_named": _cover_named,
    "cover_boxes": _cover_boxes,
    "gerbe_seed": _gerbe_seed,
    "gerbe_explicit": _gerbe_explicit,
    "liealg_named": _liealg_named,
    "liealg_table": _liealg_table,
    "action_named": _action_named,
    "action_maps": _action_maps,
    "moment": _moment,
    "suite": _suite,
    "options": _options,
}


def parse_expression(space: Space, text: str):
    """Evaluate one expression in ``space`` (used for round-trip checks)."""
    doc = parse_scenario(f"space dim={space.n} ring={space.ring}\ndef _v = {text}")
    return doc.defs["_v"]
