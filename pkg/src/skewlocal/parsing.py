"""Expression and rule-file parsing shared by the command line tools.

One tokenizer and one precedence parser serve every grammar; what differs
is the evaluation domain, which says what the names mean and how values
combine.  Precision markers are written O(var^N) and evaluate to a zero
of that precision, so `t + O(t^5)` comes out right through ordinary
addition.
"""

from .coeff import Field
from .dubrovin import Descriptor, HeisenbergElement
from .errors import ParseError
from .psido import PsiDO, psido_compose, psido_invert
from .series import LaurentSeries
from .skew import CommutationRule, build_from_rule

_OPS = set("+-*/^(),=")


def tokenize(text):
    toks = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(("int", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(("name", text[i:j], i))
            i = j
            continue
        if ch in _OPS:
            toks.append(("op", ch, i))
            i += 1
            continue
        raise ParseError("unexpected character %r at position %d" % (ch, i))
    toks.append(("end", "", n))
    return toks


class _Parser:
    """Recursive-descent parser producing a small AST.

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := '-' factor | primary ['^' ['-'] INT]
    primary:= INT | NAME | 'O' '(' expr ')' | '(' expr ')'
    """

    def __init__(self, text):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, text, pos = self.next()
        if kind != "op" or text != op:
            raise ParseError("expected %r at position %d" % (op, pos))

    def at_op(self, op):
        kind, text, _ = self.peek()
        return kind == "op" and text == op

    def parse(self):
        ast = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise ParseError("unexpected %r at position %d" % (text, pos))
        return ast

    def expr(self):
        node = self.term()
        while self.at_op("+") or self.at_op("-"):
            op = self.next()[1]
            rhs = self.term()
            node = ("bin", op, node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.at_op("*") or self.at_op("/"):
            op = self.next()[1]
            rhs = self.factor()
            node = ("bin", op, node, rhs)
        return node

    def factor(self):
        if self.at_op("-"):
            pos = self.next()[2]
            return ("neg", self.factor(), pos)
        node = self.primary()
        if self.at_op("^"):
            self.next()
            sign = 1
            if self.at_op("-"):
                self.next()
                sign = -1
            kind, text, pos = self.next()
            if kind != "int":
                raise ParseError("expected an integer exponent at position %d" % pos)
            node = ("pow", node, sign * int(text), pos)
        return node

    def primary(self):
        kind, text, pos = self.next()
        if kind == "int":
            return ("int", int(text), pos)
        if kind == "name":
            if text == "O":
                self.expect_op("(")
                inner = self.expr()
                self.expect_op(")")
                return ("O", inner, pos)
            return ("name", text, pos)
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise ParseError("unexpected %r at position %d" % (text or "end of input", pos))


def _eval(ast, dom):
    tag = ast[0]
    if tag == "int":
        return dom.from_int(ast[1])
    if tag == "name":
        return dom.atom(ast[1], ast[2])
    if tag == "neg":
        return dom.neg(_eval(ast[1], dom))
    if tag == "pow":
        return dom.power(_eval(ast[1], dom), ast[2], ast[3])
    if tag == "O":
        return dom.o_marker(ast[1], ast[2])
    _, op, l, r = ast
    a = _eval(l, dom)
    b = _eval(r, dom)
    if op == "+":
        return dom.add(a, b)
    if op == "-":
        return dom.add(a, dom.neg(b))
    if op == "*":
        return dom.mul(a, b)
    return dom.div(a, b)


def _o_shape(ast):
    """The (variable name, exponent) of a precision marker argument."""
    if ast[0] == "name":
        return ast[1], 1
    if ast[0] == "pow" and ast[1][0] == "name":
        return ast[1][1], ast[2]
    return None, None


def _generic_power(dom, v, k, pos):
    if k < 0:
        v = dom.invert(v, pos)
        k = -k
    out = dom.one()
    for _ in range(k):
        out = dom.mul(out, v)
    return out


class ScalarDomain:
    """Field elements; `zeta` names the root of unity of a cyclotomic field."""

    def __init__(self, field):
        self.field = field

    def from_int(self, n):
        return self.field.from_int(n)

    def one(self):
        return self.field.one()

    def atom(self, name, pos):
        if name == "zeta" and self.field.kind == "cyclotomic":
            return self.field.zeta()
        raise ParseError("unknown name %r at position %d" % (name, pos))

    def add(self, a, b):
        return self.field.add(a, b)

    def neg(self, a):
        return self.field.neg(a)

    def mul(self, a, b):
        return self.field.mul(a, b)

    def div(self, a, b):
        return self.field.div(a, b)

    def invert(self, a, pos):
        return self.field.inv(a)

    def power(self, v, k, pos):
        return self.field.pow(v, k)

    def o_marker(self, ast, pos):
        raise ParseError("precision markers make no sense here (position %d)" % pos)


class SeriesDomain:
    """Laurent series in one variable."""

    def __init__(self, field, var="t"):
        self.field = field
        self.var = var

    def from_int(self, n):
        return LaurentSeries.const(self.field, self.field.from_int(n))

    def one(self):
        return LaurentSeries.const(self.field, self.field.one())

    def atom(self, name, pos):
        if name == self.var:
            return LaurentSeries.variable(self.field)
        if name == "zeta" and self.field.kind == "cyclotomic":
            return LaurentSeries.const(self.field, self.field.zeta())
        raise ParseError("unknown name %r at position %d" % (name, pos))

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        return a / b

    def invert(self, a, pos):
        return a.mul_invert()

    def power(self, v, k, pos):
        return _generic_power(self, v, k, pos)

    def o_marker(self, ast, pos):
        name, exp = _o_shape(ast)
        if name != self.var:
            raise ParseError(
                "precision marker must be O(%s^N) (position %d)" % (self.var, pos)
            )
        return LaurentSeries.zero(self.field, exp)


class RuleDomain:
    """Two-variable series sum_j c_j(t1) t2^j, coefficients written on the
    left; this is notation for the coefficient map, so evaluation commutes."""

    class Value:
        __slots__ = ("coeffs", "gprec")

        def __init__(self, coeffs, gprec=None):
            # zero-to-precision coefficients stay: they carry O(t1^N) markers
            self.coeffs = {j: s for j, s in coeffs.items() if not s.is_exact_zero()}
            self.gprec = gprec

    def __init__(self, field):
        self.field = field

    def _const(self, s):
        return RuleDomain.Value({0: s})

    def from_int(self, n):
        return self._const(LaurentSeries.const(self.field, self.field.from_int(n)))

    def one(self):
        return self._const(LaurentSeries.const(self.field, self.field.one()))

    def atom(self, name, pos):
        if name == "t1":
            return self._const(LaurentSeries.variable(self.field))
        if name == "t2":
            return RuleDomain.Value({1: LaurentSeries.const(self.field, self.field.one())})
        if name == "zeta" and self.field.kind == "cyclotomic":
            return self._const(LaurentSeries.const(self.field, self.field.zeta()))
        raise ParseError("unknown name %r at position %d" % (name, pos))

    @staticmethod
    def _gmin(a, b):
        if a is None:
            return b
        if b is None:
            return a
        return min(a, b)

    def add(self, a, b):
        out = dict(a.coeffs)
        for j, s in b.coeffs.items():
            out[j] = out[j] + s if j in out else s
        return RuleDomain.Value(out, self._gmin(a.gprec, b.gprec))

    def neg(self, a):
        return RuleDomain.Value({j: -s for j, s in a.coeffs.items()}, a.gprec)

    def mul(self, a, b):
        out = {}
        for j, s in a.coeffs.items():
            for l, w in b.coeffs.items():
                m = j + l
                p = s * w
                out[m] = out[m] + p if m in out else p
        gp = None
        if a.gprec is not None:
            gp = a.gprec + (min(b.coeffs) if b.coeffs else 0)
        if b.gprec is not None:
            g2 = b.gprec + (min(a.coeffs) if a.coeffs else 0)
            gp = g2 if gp is None else min(gp, g2)
        return RuleDomain.Value(out, gp)

    def div(self, a, b):
        return self.mul(a, self.invert(b, 0))

    def invert(self, a, pos):
        if list(a.coeffs) != [0]:
            raise ParseError(
                "only t2-free factors can be inverted in a rule (position %d)" % pos
            )
        return self._const(a.coeffs[0].mul_invert())

    def power(self, v, k, pos):
        return _generic_power(self, v, k, pos)

    def o_marker(self, ast, pos):
        name, exp = _o_shape(ast)
        if name == "t2":
            return RuleDomain.Value({}, exp)
        if name == "t1":
            return self._const(LaurentSeries.zero(self.field, exp))
        raise ParseError(
            "precision marker must be O(t1^N) or O(t2^N) (position %d)" % pos
        )


class PsidoDomain:
    """Operators in X and D; products go through the composition rule."""

    def __init__(self, field, depth=None):
        self.field = field
        self.depth = depth

    def from_int(self, n):
        return PsiDO.from_series(
            self.field, LaurentSeries.const(self.field, self.field.from_int(n))
        )

    def one(self):
        return PsiDO.one(self.field)

    def atom(self, name, pos):
        if name == "X":
            return PsiDO.x(self.field)
        if name == "D":
            return PsiDO.d(self.field)
        if name == "zeta" and self.field.kind == "cyclotomic":
            return PsiDO.from_series(
                self.field, LaurentSeries.const(self.field, self.field.zeta())
            )
        raise ParseError("unknown name %r at position %d" % (name, pos))

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return psido_compose(a, b, self.depth)

    def div(self, a, b):
        return self.mul(a, self.invert(b, 0))

    def invert(self, a, pos):
        return psido_invert(a, self.depth)

    def power(self, v, k, pos):
        return _generic_power(self, v, k, pos)

    def o_marker(self, ast, pos):
        name, exp = _o_shape(ast)
        if name != "D":
            raise ParseError("precision marker must be O(D^N) (position %d)" % pos)
        return PsiDO.zero(self.field, exp)


class HeisDomain:
    """Words in x, y, z over a descriptor."""

    def __init__(self, descriptor):
        self.descriptor = descriptor

    def from_int(self, n):
        return HeisenbergElement.monomial(
            self.descriptor, coeff=self.descriptor.from_int(n)
        )

    def one(self):
        return HeisenbergElement.one(self.descriptor)

    def atom(self, name, pos):
        if name == "x":
            return HeisenbergElement.x(self.descriptor)
        if name == "y":
            return HeisenbergElement.y(self.descriptor)
        if name == "z":
            return HeisenbergElement.z(self.descriptor)
        if name == "u" and self.descriptor.series:
            return HeisenbergElement.monomial(
                self.descriptor, coeff=LaurentSeries.variable(self.descriptor.field)
            )
        raise ParseError("unknown name %r at position %d" % (name, pos))

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def _as_scalar(self, v):
        if list(v.levels) == [0] and list(v.levels[0]) == [(0, 0)]:
            return v.levels[0][(0, 0)]
        return None

    def div(self, a, b):
        c = self._as_scalar(b)
        if c is None:
            raise ParseError("only scalars can be divided by in this algebra")
        return a.scale(self.descriptor.inv(c))

    def invert(self, a, pos):
        c = self._as_scalar(a)
        if c is None:
            raise ParseError(
                "negative powers are not available in this algebra (position %d)" % pos
            )
        return HeisenbergElement.monomial(self.descriptor, coeff=self.descriptor.inv(c))

    def power(self, v, k, pos):
        return _generic_power(self, v, k, pos)

    def o_marker(self, ast, pos):
        raise ParseError("precision markers make no sense here (position %d)" % pos)


def _run(text, dom):
    return _eval(_Parser(text).parse(), dom)


def parse_scalar(text, field):
    return _run(text, ScalarDomain(field))


def parse_series(text, field, var="t", prec=None):
    s = _run(text, SeriesDomain(field, var))
    if prec is not None:
        s = s.truncate(prec)
    return s


def parse_psido(text, field, depth=None):
    return _run(text, PsidoDomain(field, depth))


def parse_heis(text, descriptor):
    return _run(text, HeisDomain(descriptor))


# -- rule files ---------------------------------------------------------------


def _prec_token(value):
    return "exact" if value is None else str(value)


def _parse_prec_token(text, pos):
    if text == "exact":
        return None
    try:
        return int(text)
    except ValueError:
        raise ParseError("bad precision %r at position %d" % (text, pos))


def parse_rule_text(text):
    """Read a rule from its three-line textual form:

        field: Q
        prec: t1=exact t2=8
        C = t1 + t2
    """
    field = None
    t1_prec = None
    t2_prec = None
    saw_prec = False
    c_value = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("field:"):
            field = Field.from_text(line[len("field:"):])
            continue
        if line.startswith("prec:"):
            saw_prec = True
            for part in line[len("prec:"):].split():
                if "=" not in part:
                    raise ParseError("bad precision entry %r" % part)
                key, val = part.split("=", 1)
                if key == "t1":
                    t1_prec = _parse_prec_token(val, 0)
                elif key == "t2":
                    t2_prec = _parse_prec_token(val, 0)
                else:
                    raise ParseError("unknown precision key %r" % key)
            continue
        if line.startswith("C") and line.lstrip("C").lstrip().startswith("="):
            if field is None:
                raise ParseError("rule file must name its field before C")
            expr = line.split("=", 1)[1]
            c_value = _run(expr, RuleDomain(field))
            continue
        raise ParseError("unrecognized rule line %r" % line)
    if field is None:
        raise ParseError("rule file has no field line")
    if c_value is None:
        raise ParseError("rule file has no C line")
    gp = c_value.gprec
    if saw_prec and t2_prec is not None:
        gp = t2_prec if gp is None else min(gp, t2_prec)
    coeffs = c_value.coeffs
    if saw_prec and t1_prec is not None:
        coeffs = {j: s.truncate(t1_prec) for j, s in coeffs.items()}
    return build_from_rule(field, coeffs, gp)


def rule_to_text(rule):
    # coefficient precision travels inside the C line as O(t1^N) markers,
    # so the prec line only repeats the t2 bound and caps nothing new
    lines = [
        "field: %s" % rule.field.name(),
        "prec: t1=exact t2=%s" % _prec_token(rule.t2_prec),
        "C = %s" % rule.format(),
    ]
    return "\n".join(lines) + "\n"
