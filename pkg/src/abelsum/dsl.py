"""Surface syntax for terms, weights and closed-form expressions.

Three small languages share one tokenizer and one Pratt expression parser:

  * term strings ("(-1)^(k-1) * C(n,k) * C(k,p)") lower to TermExpr,
  * weight strings ("H(k)^2", "H^(2)(k+s)", "Hx(2k+1; 1/2)") lower to
    WeightExpr,
  * closed-form strings (arithmetic over n and parameters with calls like
    C, fact, poch, H, sum, prod, floor, ifgt) evaluate to exact rationals.

Parsing is split from lowering: parse_* produce plain tuple ASTs (stable
under render/reparse round trips), and lower_* bind named parameters to
rationals and build the algebra objects.  Unbound parameters are an error
at lowering time, not at parse time.
"""

from __future__ import annotations

from gmpy2 import mpq

from .poly import QN, QQ, RatFunc, UniPoly
from .rationals import Rat, as_int, is_integral
from .terms import LinearForm, TermExpr
from .weights import HarmonicAtom, WeightExpr, harmonic_number


class DslError(Exception):
    """Syntax or lowering error; carries the byte offset when known."""

    def __init__(self, msg: str, pos: int | None = None):
        if pos is not None:
            msg = f"{msg} (at offset {pos})"
        super().__init__(msg)
        self.pos = pos


class DslEvalError(DslError):
    """Runtime error while evaluating a closed-form expression."""


# ---------------------------------------------------------------------------
# tokenizer
# ---------------------------------------------------------------------------

_PUNCT = "+-*/^(),;"


def tokenize(src: str):
    """List of (kind, value, pos) with kind in {'int', 'name', 'op', 'end'}."""
    toks = []
    i, n = 0, len(src)
    while i < n:
        ch = src[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            toks.append(("int", int(src[i:j]), i))
            # implicit multiplication: "2k" reads as "2*k"
            if j < n and (src[j].isalpha() or src[j] == "_"):
                toks.append(("op", "*", j))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            toks.append(("name", src[i:j], i))
            i = j
            continue
        if ch in _PUNCT:
            toks.append(("op", ch, i))
            i += 1
            continue
        raise DslError(f"unexpected character {ch!r}", i)
    toks.append(("end", None, n))
    return toks


class _Stream:
    def __init__(self, src: str):
        self.src = src
        self.toks = tokenize(src)
        self.i = 0

    def peek(self, ahead: int = 0):
        return self.toks[min(self.i + ahead, len(self.toks) - 1)]

    def next(self):
        t = self.toks[self.i]
        if t[0] != "end":
            self.i += 1
        return t

    def expect(self, kind: str, value=None):
        t = self.next()
        if t[0] != kind or (value is not None and t[1] != value):
            want = value if value is not None else kind
            raise DslError(f"expected {want!r}, found {t[1]!r}", t[2])
        return t

    def at_op(self, value: str) -> bool:
        t = self.peek()
        return t[0] == "op" and t[1] == value

    def accept_op(self, value: str) -> bool:
        if self.at_op(value):
            self.next()
            return True
        return False

    def done(self) -> bool:
        return self.peek()[0] == "end"

    def require_done(self):
        t = self.peek()
        if t[0] != "end":
            raise DslError(f"trailing input {t[1]!r}", t[2])


# ---------------------------------------------------------------------------
# expression parser (shared by linear forms, rat() bodies and closed forms)
# ---------------------------------------------------------------------------
#
# AST nodes: ('int', i) | ('var', name) | ('neg', a)
#            | ('add'|'sub'|'mul'|'div'|'pow', a, b)
#            | ('call', fname, (args...))

_BIN_OPS = {"+": ("add", 10), "-": ("sub", 10), "*": ("mul", 20), "/": ("div", 20)}


def _parse_expr(ts: _Stream, min_bp: int = 0):
    lhs = _parse_unary(ts)
    while True:
        t = ts.peek()
        if t[0] != "op":
            break
        if t[1] == "^":
            if 40 < min_bp:
                break
            ts.next()
            rhs = _parse_expr(ts, 40)  # right associative
            lhs = ("pow", lhs, rhs)
            continue
        info = _BIN_OPS.get(t[1])
        if info is None or info[1] < min_bp:
            break
        ts.next()
        rhs = _parse_expr(ts, info[1] + 1)
        lhs = (info[0], lhs, rhs)
    return lhs


def _parse_unary(ts: _Stream):
    if ts.accept_op("-"):
        return ("neg", _parse_expr(ts, 30))
    if ts.accept_op("+"):
        return _parse_expr(ts, 30)
    return _parse_primary(ts)


def _parse_primary(ts: _Stream):
    t = ts.next()
    if t[0] == "int":
        return ("int", t[1])
    if t[0] == "name":
        if ts.at_op("("):
            ts.next()
            args = []
            if not ts.at_op(")"):
                args.append(_parse_expr(ts))
                while ts.accept_op(",") or ts.accept_op(";"):
                    args.append(_parse_expr(ts))
            ts.expect("op", ")")
            return ("call", t[1], tuple(args))
        return ("var", t[1])
    if t[0] == "op" and t[1] == "(":
        e = _parse_expr(ts)
        ts.expect("op", ")")
        return e
    if t[0] == "end":
        raise DslError("unexpected end of input", t[2])
    raise DslError(f"unexpected token {t[1]!r}", t[2])


def parse_expr(src: str):
    ts = _Stream(src)
    e = _parse_expr(ts)
    ts.require_done()
    return e


def render_expr(ast) -> str:
    return _render_expr(ast, 0)


def _render_expr(ast, parent_bp: int) -> str:
    kind = ast[0]
    if kind == "int":
        return str(ast[1])
    if kind == "var":
        return ast[1]
    if kind == "neg":
        s = "-" + _render_expr(ast[1], 30)
        return f"({s})" if parent_bp > 10 else s
    if kind == "call":
        return f"{ast[1]}({', '.join(_render_expr(a, 0) for a in ast[2])})"
    if kind == "pow":
        s = f"{_render_expr(ast[1], 41)}^{_render_expr(ast[2], 41)}"
        return f"({s})" if parent_bp > 40 else s
    op, bp = {"add": ("+", 10), "sub": ("-", 10), "mul": ("*", 20), "div": ("/", 20)}[
        kind
    ]
    s = f"{_render_expr(ast[1], bp)} {op} {_render_expr(ast[2], bp + 1)}"
    return f"({s})" if parent_bp > bp else s


# ---------------------------------------------------------------------------
# lowering helpers
# ---------------------------------------------------------------------------


def _lookup(name: str, params: dict) -> Rat:
    if name not in params:
        raise DslError(f"unbound parameter {name!r} (bind it with --param)")
    return mpq(params[name])


def lower_scalar(ast, params: dict) -> Rat:
    """Evaluate an expression over integers and bound parameters only."""
    kind = ast[0]
    if kind == "int":
        return mpq(ast[1])
    if kind == "var":
        return _lookup(ast[1], params)
    if kind == "neg":
        return -lower_scalar(ast[1], params)
    if kind in ("add", "sub", "mul", "div", "pow"):
        a = lower_scalar(ast[1], params)
        b = lower_scalar(ast[2], params)
        if kind == "add":
            return a + b
        if kind == "sub":
            return a - b
        if kind == "mul":
            return a * b
        if kind == "div":
            if not b:
                raise DslError("division by zero in scalar expression")
            return a / b
        if not is_integral(b):
            raise DslError("scalar exponent must be an integer")
        return a ** as_int(b)
    raise DslError(f"calls are not allowed in a scalar here: {ast[1]!r}")


def lower_linform(ast, params: dict) -> LinearForm:
    """Integer-linear form in n and k; parameters fold into the constant
    (or into the n/k coefficients when they multiply a variable)."""
    cn, ck, c = _linear_parts(ast, params)
    for name, coef in (("n", cn), ("k", ck)):
        if not is_integral(coef):
            raise DslError(f"coefficient of {name} must be an integer, got {coef}")
    return LinearForm(as_int(cn), as_int(ck), c)


def _linear_parts(ast, params: dict):
    """(coeff of n, coeff of k, constant) of a linear expression."""
    kind = ast[0]
    if kind == "int":
        return mpq(0), mpq(0), mpq(ast[1])
    if kind == "var":
        if ast[1] == "n":
            return mpq(1), mpq(0), mpq(0)
        if ast[1] == "k":
            return mpq(0), mpq(1), mpq(0)
        return mpq(0), mpq(0), _lookup(ast[1], params)
    if kind == "neg":
        a, b, c = _linear_parts(ast[1], params)
        return -a, -b, -c
    if kind in ("add", "sub"):
        a1, b1, c1 = _linear_parts(ast[1], params)
        a2, b2, c2 = _linear_parts(ast[2], params)
        if kind == "sub":
            a2, b2, c2 = -a2, -b2, -c2
        return a1 + a2, b1 + b2, c1 + c2
    if kind == "mul":
        l = _linear_parts(ast[1], params)
        r = _linear_parts(ast[2], params)
        if l[0] == 0 and l[1] == 0:
            return r[0] * l[2], r[1] * l[2], r[2] * l[2]
        if r[0] == 0 and r[1] == 0:
            return l[0] * r[2], l[1] * r[2], l[2] * r[2]
        raise DslError("nonlinear product in a linear form")
    if kind == "div":
        l = _linear_parts(ast[1], params)
        r = _linear_parts(ast[2], params)
        if r[0] or r[1]:
            raise DslError("division by a variable in a linear form")
        if not r[2]:
            raise DslError("division by zero in a linear form")
        return l[0] / r[2], l[1] / r[2], l[2] / r[2]
    raise DslError("expression is not a linear form in n and k")


# rational functions of k over QQ(n): evaluate the expression tree in that
# field with n and k mapped to the generators

_RF2_N = RatFunc.const(QN, RatFunc.from_poly(UniPoly.var(QQ)))
_RF2_K = RatFunc.from_poly(UniPoly.var(QN))


def lower_ratfunc(ast, params: dict) -> RatFunc:
    kind = ast[0]
    if kind == "int":
        return RatFunc.const(QN, QN.of(mpq(ast[1])))
    if kind == "var":
        if ast[1] == "n":
            return _RF2_N
        if ast[1] == "k":
            return _RF2_K
        return RatFunc.const(QN, QN.of(_lookup(ast[1], params)))
    if kind == "neg":
        return -lower_ratfunc(ast[1], params)
    if kind in ("add", "sub", "mul", "div"):
        a = lower_ratfunc(ast[1], params)
        b = lower_ratfunc(ast[2], params)
        if kind == "add":
            return a + b
        if kind == "sub":
            return a - b
        if kind == "mul":
            return a * b
        if b.is_zero():
            raise DslError("division by zero in rational factor")
        return a / b
    if kind == "pow":
        base = lower_ratfunc(ast[1], params)
        e = lower_scalar(ast[2], params)
        if not is_integral(e):
            raise DslError("rational-factor exponent must be an integer")
        return base ** as_int(e)
    raise DslError("calls are not allowed inside rat(...)")


def render_ratfunc(r: RatFunc) -> str:
    num = _render_qn_poly(r.numer)
    if r.denom.degree == 0 and r.denom.coeff(0) == QN.one:
        return num
    return f"({num})/({_render_qn_poly(r.denom)})"


def _render_qn_poly(p: UniPoly) -> str:
    parts = []
    for i in range(p.degree, -1, -1):
        c = p.coeff(i)
        if (
            isinstance(c, RatFunc)
            and c.is_zero()
            or not isinstance(c, RatFunc)
            and not c
        ):
            continue
        cs = _render_qq_ratfunc(c)
        if i == 0:
            parts.append(cs)
        else:
            kpow = "k" if i == 1 else f"k^{i}"
            parts.append(kpow if cs == "1" else f"({cs})*{kpow}")
    return " + ".join(parts) if parts else "0"


def render_poly_n(p: UniPoly) -> str:
    """Render a QQ-coefficient polynomial in the variable n."""
    return _render_qq_poly(p)


def _render_qq_ratfunc(c: RatFunc) -> str:
    num = _render_qq_poly(c.numer)
    if c.denom.degree == 0 and c.denom.coeff(0) == mpq(1):
        return num
    return f"({num})/({_render_qq_poly(c.denom)})"


def _render_qq_poly(p: UniPoly) -> str:
    parts = []
    for i in range(p.degree, -1, -1):
        c = p.coeff(i)
        if not c:
            continue
        if i == 0:
            parts.append(str(c))
        else:
            npow = "n" if i == 1 else f"n^{i}"
            parts.append(npow if c == 1 else f"({c})*{npow}")
    return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# term language
# ---------------------------------------------------------------------------
#
# factor nodes:
#   ('sign', linexpr)               (-1)^(L)
#   ('cpow', base_expr, linexpr)    c^(L) with c a rational/parameter scalar
#   ('binom', L1, L2, p)            C(L1, L2)^p
#   ('fact', L, p)                  fact(L)^p
#   ('poch', base_expr, L, p)       poch(c, L)^p
#   ('rat', expr, p)                rat(R)^p

_TERM_CALLS = {"C", "fact", "poch", "rat"}


def parse_term_ast(src: str):
    ts = _Stream(src)
    factors = [_parse_term_factor(ts)]
    while ts.accept_op("*"):
        factors.append(_parse_term_factor(ts))
    ts.require_done()
    return ("term", tuple(factors))


def _parse_exponent(ts: _Stream) -> int:
    """Optional trailing ^p with p a (possibly negative) integer literal."""
    if not ts.at_op("^"):
        return 1
    # a "^(" here belongs to a power factor, not a trailing exponent
    if ts.peek(1)[:2] == ("op", "("):
        return 1
    ts.next()
    neg = ts.accept_op("-")
    t = ts.expect("int")
    return -t[1] if neg else t[1]


def _parse_term_factor(ts: _Stream):
    t = ts.peek()
    if t[0] == "name" and t[1] in _TERM_CALLS:
        ts.next()
        ts.expect("op", "(")
        if t[1] == "C":
            a = _parse_expr(ts)
            ts.expect("op", ",")
            b = _parse_expr(ts)
            ts.expect("op", ")")
            return ("binom", a, b, _parse_exponent(ts))
        if t[1] == "fact":
            a = _parse_expr(ts)
            ts.expect("op", ")")
            return ("fact", a, _parse_exponent(ts))
        if t[1] == "poch":
            base = _parse_expr(ts)
            ts.expect("op", ",")
            ln = _parse_expr(ts)
            ts.expect("op", ")")
            return ("poch", base, ln, _parse_exponent(ts))
        a = _parse_expr(ts)
        ts.expect("op", ")")
        return ("rat", a, _parse_exponent(ts))
    # scalar base raised to a linear form: (-1)^(k-1), 2^(n-k), l^(n-k)
    base = _parse_term_base(ts)
    ts.expect("op", "^")
    ts.expect("op", "(")
    ln = _parse_expr(ts)
    ts.expect("op", ")")
    if base == ("neg", ("int", 1)):
        return ("sign", ln)
    return ("cpow", base, ln)


def _parse_term_base(ts: _Stream):
    t = ts.peek()
    if t[0] == "op" and t[1] == "(":
        ts.next()
        e = _parse_expr(ts)
        ts.expect("op", ")")
        return e
    if t[0] == "int":
        ts.next()
        if ts.accept_op("/"):
            d = ts.expect("int")
            return ("div", ("int", t[1]), ("int", d[1]))
        return ("int", t[1])
    if t[0] == "name":
        ts.next()
        return ("var", t[1])
    raise DslError(f"expected a term factor, found {t[1]!r}", t[2])


def lower_term(ast, params: dict | None = None) -> TermExpr:
    params = params or {}
    out = TermExpr()
    for f in ast[1]:
        kind = f[0]
        if kind == "sign":
            ln = lower_linform(f[1], params)
            piece = TermExpr(sign=ln)
        elif kind == "cpow":
            base = lower_scalar(f[1], params)
            ln = lower_linform(f[2], params)
            piece = TermExpr(powers=((base, ln),))
        elif kind == "binom":
            top = lower_linform(f[1], params)
            bot = lower_linform(f[2], params)
            piece = TermExpr(binomials=((top, bot, f[3]),))
        elif kind == "fact":
            piece = TermExpr(factorials=((lower_linform(f[1], params), f[2]),))
        elif kind == "poch":
            base = lower_scalar(f[1], params)
            ln = lower_linform(f[2], params)
            piece = TermExpr(pochhammers=((base, ln, f[3]),))
        else:  # rat
            r = lower_ratfunc(f[1], params)
            p = f[2]
            if p < 0:
                if r.is_zero():
                    raise DslError("zero rational factor in a denominator")
                r = r.inverse() ** (-p)
            else:
                r = r ** p
            piece = TermExpr(rational=r)
        out = out.mul(piece)
    return out


def parse_term(src: str, params: dict | None = None) -> TermExpr:
    return lower_term(parse_term_ast(src), params)


def render_term_ast(ast) -> str:
    parts = []
    for f in ast[1]:
        kind = f[0]
        if kind == "sign":
            parts.append(f"(-1)^({render_expr(f[1])})")
        elif kind == "cpow":
            parts.append(f"{_render_base(f[1])}^({render_expr(f[2])})")
        elif kind == "binom":
            parts.append(
                _with_exp(f"C({render_expr(f[1])}, {render_expr(f[2])})", f[3])
            )
        elif kind == "fact":
            parts.append(_with_exp(f"fact({render_expr(f[1])})", f[2]))
        elif kind == "poch":
            parts.append(
                _with_exp(f"poch({render_expr(f[1])}, {render_expr(f[2])})", f[3])
            )
        else:
            parts.append(_with_exp(f"rat({render_expr(f[1])})", f[2]))
    return " * ".join(parts)


def _render_base(ast) -> str:
    if ast[0] in ("int", "var"):
        return render_expr(ast)
    if ast[0] == "div" and ast[1][0] == "int" and ast[2][0] == "int":
        return f"{ast[1][1]}/{ast[2][1]}"
    return f"({render_expr(ast)})"


def _with_exp(s: str, p: int) -> str:
    return s if p == 1 else f"{s}^{p}"


# ---------------------------------------------------------------------------
# weight language
# ---------------------------------------------------------------------------
#
# weight := mono { '+' mono } ; mono := atom { '*' atom }
# atom nodes:
#   ('H', r, linexpr, xexpr|None, p)   harmonic atoms, all flavors
#   ('wrat', expr, p)                  rational coefficient factor
#   ('one',)                           the weight 1


def parse_weight_ast(src: str):
    ts = _Stream(src)
    monos = [_parse_weight_mono(ts)]
    while ts.accept_op("+"):
        monos.append(_parse_weight_mono(ts))
    ts.require_done()
    return ("weight", tuple(monos))


def _parse_weight_mono(ts: _Stream):
    atoms = [_parse_weight_atom(ts)]
    while ts.accept_op("*"):
        atoms.append(_parse_weight_atom(ts))
    return tuple(atoms)


def _parse_weight_atom(ts: _Stream):
    t = ts.peek()
    if t[0] == "int" and t[1] == 1:
        ts.next()
        return ("one",)
    if t[0] != "name":
        raise DslError(f"expected a weight atom, found {t[1]!r}", t[2])
    name = t[1]
    if name == "rat":
        ts.next()
        ts.expect("op", "(")
        e = _parse_expr(ts)
        ts.expect("op", ")")
        return ("wrat", e, _parse_exponent(ts))
    if name not in ("H", "Hx"):
        raise DslError(f"unknown weight atom {name!r}", t[2])
    ts.next()
    r = ("int", 1)
    if ts.at_op("^") and ts.peek(1)[:2] == ("op", "("):
        ts.next()
        ts.expect("op", "(")
        r = _parse_expr(ts)
        ts.expect("op", ")")
    ts.expect("op", "(")
    ln = _parse_expr(ts)
    x = None
    if name == "Hx":
        ts.expect("op", ";")
        x = _parse_expr(ts)
    ts.expect("op", ")")
    return ("H", r, ln, x, _parse_exponent(ts))


def lower_weight(ast, params: dict | None = None) -> WeightExpr:
    params = params or {}
    total = None
    for mono in ast[1]:
        atoms = []
        coeff = None
        for a in mono:
            if a[0] == "one":
                continue
            if a[0] == "wrat":
                r = lower_ratfunc(a[1], params)
                if a[2] != 1:
                    if a[2] < 0 and r.is_zero():
                        raise DslError("zero coefficient in a denominator")
                    r = r.inverse() ** (-a[2]) if a[2] < 0 else r ** a[2]
                coeff = r if coeff is None else coeff * r
                continue
            _, rexpr, lnexpr, xexpr, p = a
            rv = lower_scalar(rexpr, params)
            if not is_integral(rv):
                raise DslError("harmonic power must be an integer")
            ln = lower_linform(lnexpr, params)
            if not is_integral(ln.c):
                raise DslError("harmonic index shift must be an integer")
            x = lower_scalar(xexpr, params) if xexpr is not None else mpq(0)
            atom = HarmonicAtom(r=as_int(rv), m=ln.k, s=as_int(ln.c), x=x, mn=ln.n)
            atoms.extend([atom] * p)
        w = WeightExpr.from_atoms(*atoms)
        if coeff is not None:
            w = w.scale(coeff)
        total = w if total is None else total + w
    if total is None:
        raise DslError("empty weight")
    return total


def parse_weight(src: str, params: dict | None = None) -> WeightExpr:
    return lower_weight(parse_weight_ast(src), params)


def render_weight_ast(ast) -> str:
    monos = []
    for mono in ast[1]:
        parts = []
        for a in mono:
            if a[0] == "one":
                parts.append("1")
            elif a[0] == "wrat":
                parts.append(_with_exp(f"rat({render_expr(a[1])})", a[2]))
            else:
                _, r, ln, x, p = a
                head = "Hx" if x is not None else "H"
                if r != ("int", 1):
                    head += f"^({render_expr(r)})"
                if x is not None:
                    parts.append(
                        _with_exp(f"{head}({render_expr(ln)}; {render_expr(x)})", p)
                    )
                else:
                    parts.append(_with_exp(f"{head}({render_expr(ln)})", p))
        monos.append(" * ".join(parts))
    return " + ".join(monos)


# ---------------------------------------------------------------------------
# closed-form expressions
# ---------------------------------------------------------------------------


def parse_closed(src: str):
    return parse_expr(src)


_LAZY_CALLS = {"sum", "prod", "ifgt", "ifeq"}


def eval_closed(ast, env: dict) -> Rat:
    """Exact value of a closed-form expression.

    env maps variable names (n, parameters, loop indices) to rationals.
    Supported calls: C, fact, poch, H, Hr, Hx, floor, dsum, sum, prod,
    ifgt, ifeq.
    """
    kind = ast[0]
    if kind == "int":
        return mpq(ast[1])
    if kind == "var":
        if ast[1] not in env:
            raise DslEvalError(f"unbound variable {ast[1]!r}")
        return mpq(env[ast[1]])
    if kind == "neg":
        return -eval_closed(ast[1], env)
    if kind in ("add", "sub", "mul", "div"):
        a = eval_closed(ast[1], env)
        b = eval_closed(ast[2], env)
        if kind == "add":
            return a + b
        if kind == "sub":
            return a - b
        if kind == "mul":
            return a * b
        if not b:
            raise DslEvalError("division by zero")
        return a / b
    if kind == "pow":
        a = eval_closed(ast[1], env)
        b = eval_closed(ast[2], env)
        if not is_integral(b):
            raise DslEvalError(f"non-integer exponent {b}")
        e = as_int(b)
        if not a and e < 0:
            raise DslEvalError("zero base with negative exponent")
        return a ** e
    return _eval_call(ast, env)


def _int_arg(v: Rat, what: str) -> int:
    if not is_integral(v):
        raise DslEvalError(f"{what} must be an integer, got {v}")
    return as_int(v)


def _eval_call(ast, env: dict) -> Rat:
    name, args = ast[1], ast[2]
    if name in _LAZY_CALLS:
        return _eval_lazy(name, args, env)
    vals = [eval_closed(a, env) for a in args]
    if name == "C":
        _expect_arity(name, args, 2)
        top = _int_arg(vals[0], "binomial top")
        bot = _int_arg(vals[1], "binomial bottom")
        if top < 0:
            raise DslEvalError(f"binomial with negative top {top}")
        import math

        return mpq(math.comb(top, bot)) if 0 <= bot <= top else mpq(0)
    if name == "fact":
        _expect_arity(name, args, 1)
        a = _int_arg(vals[0], "factorial argument")
        if a < 0:
            raise DslEvalError(f"factorial of negative integer {a}")
        import math

        return mpq(math.factorial(a))
    if name == "poch":
        _expect_arity(name, args, 2)
        ln = _int_arg(vals[1], "Pochhammer length")
        if ln < 0:
            raise DslEvalError(f"Pochhammer of negative length {ln}")
        v = mpq(1)
        for i in range(ln):
            v *= vals[0] + i
        return v
    if name == "H":
        _expect_arity(name, args, 1)
        return harmonic_number(_int_arg(vals[0], "harmonic index"))
    if name == "Hr":
        _expect_arity(name, args, 2)
        return harmonic_number(
            _int_arg(vals[1], "harmonic index"), r=_int_arg(vals[0], "harmonic power")
        )
    if name == "Hx":
        _expect_arity(name, args, 2)
        return harmonic_number(_int_arg(vals[0], "harmonic index"), x=vals[1])
    if name == "floor":
        _expect_arity(name, args, 1)
        v = vals[0]
        return mpq(v.numerator // v.denominator)
    if name == "dsum":
        _expect_arity(name, args, 2)
        return _dilcher_sum(
            _int_arg(vals[0], "chain length"), _int_arg(vals[1], "upper index")
        )
    raise DslEvalError(f"unknown function {name!r}")


def _expect_arity(name, args, want):
    if len(args) != want:
        raise DslEvalError(f"{name} expects {want} argument(s), got {len(args)}")


def _eval_lazy(name: str, args, env: dict) -> Rat:
    if name in ("ifgt", "ifeq"):
        _expect_arity(name, args, 4)
        a = eval_closed(args[0], env)
        b = eval_closed(args[1], env)
        taken = a > b if name == "ifgt" else a == b
        return eval_closed(args[2] if taken else args[3], env)
    # sum(var, lo, hi, body) / prod(var, lo, hi, body)
    _expect_arity(name, args, 4)
    if args[0][0] != "var":
        raise DslEvalError(f"{name} needs a variable name as its first argument")
    var = args[0][1]
    lo = _int_arg(eval_closed(args[1], env), f"{name} lower bound")
    hi = _int_arg(eval_closed(args[2], env), f"{name} upper bound")
    inner = dict(env)
    acc = mpq(0) if name == "sum" else mpq(1)
    for j in range(lo, hi + 1):
        inner[var] = mpq(j)
        v = eval_closed(args[3], inner)
        acc = acc + v if name == "sum" else acc * v
    return acc


def _dilcher_sum(m: int, n: int) -> Rat:
    """sum over weakly increasing chains 1 <= j_1 <= ... <= j_m <= n of
    1/(j_1 ... j_m), by dynamic programming over chain length."""
    if m < 0 or n < 0:
        raise DslEvalError("dsum arguments must be nonnegative")
    # A_t(j) = A_t(j-1) + A_{t-1}(j)/j, A_0 = 1
    prev = [mpq(1)] * (n + 1)
    for _ in range(m):
        cur = [mpq(0)] * (n + 1)
        for j in range(1, n + 1):
            cur[j] = cur[j - 1] + prev[j] / j
        prev = cur
    return prev[n]
