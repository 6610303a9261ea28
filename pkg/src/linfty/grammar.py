"""Text grammar for polynomials, poly vector fields and operators.

    poly    := term (('+'|'-') term)*
    term    := rational ['*' monomial] | monomial
    monomial:= tVar ('^' exp)? ('*' tVar ('^' exp)?)*
    vecterm := [term '*'] dword | term          dword := 'd'i ('/\\'|'∧') 'd'j ...
    opterm  := [term '*'] 'D[' mi (';' mi)* ']' | term

Parsing is inverse to the canonical ``text()`` serializers; errors carry the
offending position and distinguish syntax from arity/range problems.
"""

from __future__ import annotations

from fractions import Fraction

from .diffop import PolyDiffOp
from .poly import Poly
from .polyvec import PolyVec


class ParseError(ValueError):
    def __init__(self, message, pos):
        super().__init__(f"{message} (line 1, column {pos + 1})")
        self.pos = pos


class _Scanner:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def startswith(self, s):
        self.skip_ws()
        return self.text.startswith(s, self.pos)

    def take(self, s):
        if self.startswith(s):
            self.pos += len(s)
            return True
        return False

    def expect(self, s, what):
        if not self.take(s):
            raise ParseError(f"expected {what}", self.pos)

    def integer(self, what="integer"):
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise ParseError(f"expected {what}", start)
        return int(self.text[start:self.pos])

    def done(self):
        self.skip_ws()
        return self.pos >= len(self.text)


def _parse_rational(sc: _Scanner) -> Fraction:
    num = sc.integer("number")
    if sc.take("/"):
        den = sc.integer("denominator")
        if den == 0:
            raise ParseError("zero denominator", sc.pos)
        return Fraction(num, den)
    return Fraction(num)


def _parse_var(sc: _Scanner, n):
    sc.expect("t", "a variable t<i>")
    i = sc.integer("variable index")
    if not 1 <= i <= n:
        raise ParseError(f"variable t{i} out of range 1..{n}", sc.pos)
    k = 1
    if sc.take("^"):
        k = sc.integer("exponent")
    return i, k


def _parse_poly_term(sc: _Scanner, n):
    """One signed product of a rational and t-powers, as (coeff, exponents)."""
    coeff = Fraction(1)
    exps = [0] * n
    seen = False
    if sc.peek().isdigit():
        coeff = _parse_rational(sc)
        seen = True
        if not sc.take("*"):
            return coeff, tuple(exps)
        mark = sc.pos - 1  # position of the consumed '*'
        if sc.peek() in ("d", "D"):
            sc.pos = mark  # the '*' belongs to the vec/op word
            return coeff, tuple(exps)
        if sc.peek() != "t":
            raise ParseError("expected a factor after '*'", sc.pos)
    while True:
        if sc.peek() == "t":
            i, k = _parse_var(sc, n)
            exps[i - 1] += k
            seen = True
            if sc.take("*"):
                mark = sc.pos - 1
                if sc.peek() in ("d", "D"):
                    sc.pos = mark  # the '*' belongs to the vec/op word
                    break
                if sc.peek() != "t":
                    raise ParseError("expected a factor after '*'", sc.pos)
                continue
            break
        break
    if not seen:
        raise ParseError("expected a term", sc.pos)
    return coeff, tuple(exps)


def parse_poly(text, n) -> Poly:
    sc = _Scanner(text)
    out = Poly.zero(n)
    sign = 1
    if sc.take("-"):
        sign = -1
    elif sc.take("+"):
        pass
    while True:
        coeff, exps = _parse_poly_term(sc, n)
        out = out + Poly.monomial(exps, coeff * sign)
        if sc.take("+"):
            sign = 1
        elif sc.take("-"):
            sign = -1
        else:
            break
    if not sc.done():
        raise ParseError("trailing input", sc.pos)
    return out


def _parse_dword(sc: _Scanner, n):
    word = []
    while True:
        sc.expect("d", "a derivation d<i>")
        i = sc.integer("derivation index")
        if not 1 <= i <= n:
            raise ParseError(f"derivation d{i} out of range 1..{n}", sc.pos)
        word.append(i)
        if sc.take("/\\") or sc.take("∧"):
            continue
        break
    return tuple(word)


def parse_polyvec(text, n) -> PolyVec:
    sc = _Scanner(text)
    out = PolyVec.zero(n)
    sign = 1
    if sc.take("-"):
        sign = -1
    elif sc.take("+"):
        pass
    while True:
        coeff = Fraction(1)
        exps = tuple([0] * n)
        if sc.peek() != "d":
            coeff, exps = _parse_poly_term(sc, n)
            if not sc.take("*"):
                out = out + PolyVec.from_function(Poly.monomial(exps, coeff * sign))
                if sc.take("+"):
                    sign = 1
                    continue
                if sc.take("-"):
                    sign = -1
                    continue
                break
        word = _parse_dword(sc, n)
        out = out + PolyVec(n, {word: Poly.monomial(exps, coeff * sign)})
        if sc.take("+"):
            sign = 1
        elif sc.take("-"):
            sign = -1
        else:
            break
    if not sc.done():
        raise ParseError("trailing input", sc.pos)
    return out


def _parse_multi_index(sc: _Scanner, n):
    mi = [sc.integer("derivative order")]
    while sc.take(","):
        mi.append(sc.integer("derivative order"))
    if len(mi) != n:
        raise ParseError(f"multi-index needs {n} entries, got {len(mi)}", sc.pos)
    return tuple(mi)


def parse_polydiffop(text, n) -> PolyDiffOp:
    sc = _Scanner(text)
    out = PolyDiffOp.zero(n)
    sign = 1
    if sc.take("-"):
        sign = -1
    elif sc.take("+"):
        pass
    while True:
        coeff = Fraction(1)
        exps = tuple([0] * n)
        if sc.peek() != "D":
            coeff, exps = _parse_poly_term(sc, n)
            if not sc.take("*"):
                out = out + PolyDiffOp.from_function(Poly.monomial(exps, coeff * sign))
                if sc.take("+"):
                    sign = 1
                    continue
                if sc.take("-"):
                    sign = -1
                    continue
                break
        sc.expect("D[", "an operator word D[...]")
        word = [_parse_multi_index(sc, n)]
        while sc.take(";"):
            word.append(_parse_multi_index(sc, n))
        sc.expect("]", "closing ]")
        out = out + PolyDiffOp(n, {tuple(word): Poly.monomial(exps, coeff * sign)})
        if sc.take("+"):
            sign = 1
        elif sc.take("-"):
            sign = -1
        else:
            break
    if not sc.done():
        raise ParseError("trailing input", sc.pos)
    return out


def parse_element(text, kind, n):
    """Dispatch by kind: 'poly' | 'polyvec' | 'polydiffop'."""
    if kind == "poly":
        return parse_poly(text, n)
    if kind == "polyvec":
        return parse_polyvec(text, n)
    if kind == "polydiffop":
        return parse_polydiffop(text, n)
    raise ValueError(f"unknown element kind {kind!r}")
