"""Recursive-descent parser for polynomial forms and vector fields.

Grammar (whitespace is ignored)::

    expr     := ['-'] term (('+' | '-') term)*
    term     := factor ('*' factor)*
    factor   := rational | 'x<i>' ['**' int] | wedge | 'd<i>'
    wedge    := 'dx<i>' ('^' 'dx<j>')*
    rational := ['-'] int ['/' int]

A rational may only open a term, and a wedge or a ``d<i>`` must close it.
``^`` is reserved for wedges and ``**`` for scalar powers.  The canonical
renderers of :class:`PolyForm` and :class:`PolyVectorField` produce strings
in this grammar.
"""

import re
from fractions import Fraction

from .errors import ParseError
from .forms import Poly, PolyForm, PolyVectorField, basis_form, coordinate, partial

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<dx>dx(?P<dxi>\d+))|(?P<d>d(?P<di>\d+))"
                    r"|(?P<x>x(?P<xi>\d+))|(?P<op>\*\*|[-+*/^]))")


def tokenize(src):
    """List of ``(kind, value, position)``; kinds are num, dx, d, x and op."""
    out = []
    pos = 0
    src = src.rstrip()
    while pos < len(src):
        while src[pos].isspace():
            pos += 1
        m = _TOKEN.match(src, pos)
        if m is None:
            raise ParseError(f"unexpected character {src[pos]!r}", pos)
        if m.group("num"):
            out.append(("num", int(m.group("num")), m.start("num")))
        elif m.group("dx"):
            out.append(("dx", int(m.group("dxi")), m.start("dx")))
        elif m.group("d"):
            out.append(("d", int(m.group("di")), m.start("d")))
        elif m.group("x"):
            out.append(("x", int(m.group("xi")), m.start("x")))
        else:
            out.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    out.append(("end", None, len(src)))
    return out


class _Parser:
    def __init__(self, src, dim, kind):
        if dim < 1:
            raise ParseError("dimension must be positive")
        self.toks = tokenize(src)
        self.i = 0
        self.dim = dim
        self.kind = kind

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t


    def index(self, i, pos):
        if not 1 <= i <= self.dim:
            raise ParseError(f"index {i} out of range 1..{self.dim}", pos)
        return i

    def expr(self):
        zero = PolyForm(self.dim) if self.kind == "form" else PolyVectorField(self.dim)
        if self.peek()[0] == "end":
            raise ParseError("empty expression", self.peek()[2])
        total = zero
        sign = 1
        t = self.peek()
        if t[0] == "op" and t[1] == "-" and self._sign_is_operator():
            self.take()
            sign = -1
        total = total + sign * self.term()
        while True:
            t = self.peek()
            if t[0] == "end":
                return total
            if t[0] == "op" and t[1] in "+-":
                self.take()
                sign = 1 if t[1] == "+" else -1
                total = total + sign * self.term()
                continue
            raise ParseError(f"unexpected {t[1]!r}", t[2])

    def _sign_is_operator(self):
        # a leading '-' before a number belongs to the rational
        return self.toks[self.i + 1][0] != "num"

    def term(self):
        coef = Fraction(1)
        scalar = Poly.const(self.dim, 1)
        tail = None
        first = True
        while True:
            t = self.peek()
            if tail is not None:
                raise ParseError("nothing may follow a wedge or a partial", t[2])
            if t[0] == "num" or (t[0] == "op" and t[1] == "-" and self.toks[self.i + 1][0] == "num"):
                if not first:
                    raise ParseError("a rational may only open a term", t[2])
                coef = self.rational()
            elif t[0] == "x":
                self.take()
                v = coordinate(self.dim, self.index(t[1], t[2]))
                power = 1
                if self.peek()[0] == "op" and self.peek()[1] == "**":
                    self.take()
                    p = self.take()
                    if p[0] != "num":
                        raise ParseError("expected an integer exponent", p[2])
                    power = p[1]
                for _ in range(power):
                    scalar = scalar * v
            elif t[0] == "dx":
                if self.kind != "form":
                    raise ParseError("'dx' is not allowed in a vector field", t[2])
                tail = self.wedge()
            elif t[0] == "d":
                if self.kind != "field":
                    raise ParseError("'d<i>' is only allowed in a vector field", t[2])
                self.take()
                tail = partial(self.dim, self.index(t[1], t[2]))
            else:
                raise ParseError("expected a factor", t[2])
            first = False
            nxt = self.peek()
            if nxt[0] == "op" and nxt[1] == "*":
                self.take()
                continue
            break
        c = coef.numerator if coef.denominator == 1 else coef
        if self.kind == "form":
            base = tail if tail is not None else PolyForm.from_scalar(Poly.const(self.dim, 1))
            return c * (base * scalar)
        if tail is None:
            raise ParseError("a field term must end in 'd<i>'", self.peek()[2])
        return c * (tail * scalar)

    def rational(self):
        neg = False
        t = self.take()
        if t[0] == "op":
            neg = True
            t = self.take()
        num = t[1]
        den = 1
        if self.peek()[0] == "op" and self.peek()[1] == "/":
            self.take()
            d = self.take()
            if d[0] != "num":
                raise ParseError("expected a denominator", d[2])
            if d[1] == 0:
                raise ParseError("zero denominator", d[2])
            den = d[1]
        q = Fraction(num, den)
        return -q if neg else q

    def wedge(self):
        idx = []
        t = self.take()
        idx.append(self.index(t[1], t[2]))
        while self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            t = self.take()
            if t[0] != "dx":
                raise ParseError("expected 'dx<i>' after '^'", t[2])
            idx.append(self.index(t[1], t[2]))
        return basis_form(self.dim, *idx)


def parse_form(src, dim, degree=None):
    """Parse a polynomial form on R^dim; ``degree`` enforces homogeneity."""
    out = _Parser(src, dim, "form").expr()
    if degree is not None and out and out.degrees() != {degree}:
        raise ParseError(f"expected a homogeneous {degree}-form, got degrees {sorted(out.degrees())}")
    return out


def parse_field(src, dim):
    """Parse a polynomial vector field written with ``d1, d2, ...``; ``0`` is the zero field."""
    parser = _Parser(src, dim, "field")
    if src.strip() == "0":
        return PolyVectorField(dim)
    return parser.expr()
