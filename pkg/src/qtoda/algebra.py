"""Exact rational functions in ``q`` and the torus variables ``Λ1..Λr``.

Every value lives in a :class:`Field` of a fixed rank ``r``.  The field is
Q(Λ1, ..., Λr, q); the extra torus coordinate is eliminated through
``Λ0 = (Λ1···Λr)^-1``.  Elements are stored as a reduced pair of integer
polynomials (python-flint ``fmpz_mpoly``), so equality of canonical forms is
equality of values.  Laurent monomials sit in the denominator internally and
move to the numerator when printed.

Canonical text: terms of a Laurent polynomial sorted by graded-lex order on
the exponent vector ``(Λ1, ..., Λr, q)`` (largest first), factors written
``Λ1^e1*Λ2^e2*q^k`` and coefficients as ``p/q``.  A fraction prints as
``(num)/(den)`` where ``den`` is a primitive integer polynomial with no
monomial factor.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable

import flint

__all__ = [
    "Field",
    "RationalFunction",
    "TermLimitExceeded",
    "parse",
    "set_term_limit",
    "term_limit",
]

_term_limit: int | None = None


class TermLimitExceeded(ArithmeticError):
    """An intermediate polynomial grew past the configured ``--max-terms`` cap."""


def set_term_limit(limit: int | None) -> int | None:
    """Install a global cap on polynomial term counts; returns the previous cap."""
    global _term_limit
    previous, _term_limit = _term_limit, limit
    return previous


class term_limit:
    """Context manager form of :func:`set_term_limit`."""

    def __init__(self, limit: int | None):
        self.limit = limit

    def __enter__(self):
        self._previous = set_term_limit(self.limit)
        return self

    def __exit__(self, *exc):
        set_term_limit(self._previous)
        return False


class Field:
    """The field Q(Λ1..Λr, q) for a given rank ``r`` (``r = 0`` gives Q(q)).

    Instances are cached per rank, so ``Field(2) is Field(2)``.
    """

    _instances: dict[int, "Field"] = {}

    def __new__(cls, rank: int):
        rank = int(rank)
        if rank < 0:
            raise ValueError(f"rank must be >= 0, got {rank}")
        inst = cls._instances.get(rank)
        if inst is None:
            inst = super().__new__(cls)
            inst.rank = rank
            inst.names = tuple(f"L{i}" for i in range(1, rank + 1)) + ("q",)
            inst.ctx = flint.fmpz_mpoly_ctx.get(inst.names, "lex")
            inst._one_poly = inst.ctx.from_dict({(0,) * (rank + 1): 1})
            inst._zero_poly = inst.ctx.from_dict({})
            cls._instances[rank] = inst
        return inst

    def __reduce__(self):
        return (Field, (self.rank,))

    def __repr__(self):
        return f"Field({self.rank})"

    @property
    def nvars(self) -> int:
        return self.rank + 1

    # constructors -----------------------------------------------------

    def _poly_monomial(self, exps: Iterable[int], coeff: int = 1):
        return self.ctx.from_dict({tuple(exps): coeff})

    def _wrap(self, num, den=None) -> "RationalFunction":
        return RationalFunction(self, num, self._one_poly if den is None else den)

    def constant(self, value) -> "RationalFunction":
        value = Fraction(value)
        return RationalFunction(
            self,
            self.ctx.from_dict({(0,) * self.nvars: value.numerator}),
            self.ctx.from_dict({(0,) * self.nvars: value.denominator}),
            _reduced=True,
        )

    @property
    def zero(self) -> "RationalFunction":
        return RationalFunction(self, self._zero_poly, self._one_poly, _reduced=True)

    @property
    def one(self) -> "RationalFunction":
        return RationalFunction(self, self._one_poly, self._one_poly, _reduced=True)

    @property
    def q(self) -> "RationalFunction":
        return self.monomial((0,) * self.rank, 1)

    def monomial(self, lam_exps: Iterable[int] = (), q_exp: int = 0, coeff=1) -> "RationalFunction":
        """Return ``coeff * Λ1^e1 ··· Λr^er * q^k`` (negative exponents allowed)."""
        exps = tuple(int(e) for e in lam_exps)
        if len(exps) != self.rank:
            raise ValueError(f"expected {self.rank} Λ-exponents, got {len(exps)}")
        exps = exps + (int(q_exp),)
        coeff = Fraction(coeff)
        pos = tuple(max(e, 0) for e in exps)
        neg = tuple(max(-e, 0) for e in exps)
        return RationalFunction(
            self,
            self._poly_monomial(pos, coeff.numerator),
            self._poly_monomial(neg, coeff.denominator),
            _reduced=coeff.numerator != 0,
        )

    def lam(self, j: int, power: int = 1) -> "RationalFunction":
        """Return ``Λj^power`` for ``0 <= j <= r``; ``Λ0`` is ``(Λ1···Λr)^-1``."""
        if not 0 <= j <= self.rank:
            raise IndexError(f"Λ index {j} out of range 0..{self.rank}")
        if j == 0:
            return self.monomial((-power,) * self.rank)
        exps = [0] * self.rank
        exps[j - 1] = power
        return self.monomial(exps)

    def lam_monomial(self, exps0: Iterable[int], q_exp: int = 0) -> "RationalFunction":
        """Monomial from exponents of ``Λ0..Λr`` (length ``r+1``), eliminating Λ0."""
        exps0 = tuple(exps0)
        if len(exps0) != self.rank + 1:
            raise ValueError(f"expected {self.rank + 1} exponents, got {len(exps0)}")
        e0 = exps0[0]
        return self.monomial([e - e0 for e in exps0[1:]], q_exp)

    def from_laurent(self, terms: dict) -> "RationalFunction":
        """Build a Laurent polynomial from ``{(e1..er, k): coeff}``."""
        result = self.zero
        for exps, c in terms.items():
            result = result + self.monomial(exps[:-1], exps[-1], c)
        return result

    def __call__(self, value) -> "RationalFunction":
        if isinstance(value, RationalFunction):
            if value.field is not self:
                raise ValueError(f"value belongs to {value.field!r}, not {self!r}")
            return value
        if isinstance(value, str):
            return parse(value, self)
        if isinstance(value, (int, Fraction)):
            return self.constant(value)
        raise TypeError(f"cannot coerce {type(value).__name__} into {self!r}")


def _lc_sign(poly) -> int:
    return 1 if poly.leading_coefficient() > 0 else -1


class RationalFunction:
    """An element of :class:`Field`: a reduced fraction of integer polynomials.

    Immutable.  Arithmetic accepts ints and Fractions as well as elements of
    the same field.
    """

    __slots__ = ("field", "num", "den", "_hash")

    def __init__(self, field: Field, num, den, _reduced: bool = False):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not _reduced:
            if num.is_zero():
                den = field._one_poly
            else:
                g = num.gcd(den)
                if not g.is_one():
                    num = num / g
                    den = den / g
        if _lc_sign(den) < 0:
            num, den = -num, -den
        if _term_limit is not None and max(len(num), len(den)) > _term_limit:
            raise TermLimitExceeded(
                f"polynomial with {max(len(num), len(den))} terms exceeds --max-terms {_term_limit}"
            )
        self.field = field
        self.num = num
        self.den = den
        self._hash = None

    # coercion ---------------------------------------------------------

    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            if other.field is not self.field:
                raise ValueError(f"mixing {self.field!r} and {other.field!r}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.constant(other)
        return NotImplemented

    # arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, c, d = self.num, self.den, other.num, other.den
        if a.is_zero():
            return other
        if c.is_zero():
            return self
        if b == d:
            t = a + c
            g = t.gcd(b)
            if g.is_one():
                return RationalFunction(self.field, t, b, _reduced=True)
            return RationalFunction(self.field, t / g, b / g, _reduced=True)
        g = b.gcd(d)
        if g.is_one():
            return RationalFunction(self.field, a * d + c * b, b * d, _reduced=True)
        b1, d1 = b / g, d / g
        t = a * d1 + c * b1
        if t.is_zero():
            return self.field.zero
        g2 = t.gcd(g)
        if g2.is_one():
            return RationalFunction(self.field, t, b1 * d, _reduced=True)
        return RationalFunction(self.field, t / g2, b1 * (d / g2), _reduced=True)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(self.field, -self.num, self.den, _reduced=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, c, d = self.num, self.den, other.num, other.den
        if a.is_zero() or c.is_zero():
            return self.field.zero
        g1 = a.gcd(d)
        g2 = c.gcd(b)
        if not g1.is_one():
            a, d = a / g1, d / g1
        if not g2.is_one():
            c, b = c / g2, b / g2
        return RationalFunction(self.field, a * c, b * d, _reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.num.is_zero():
            raise ZeroDivisionError("div: division by zero")
        return RationalFunction(self.field, self.den, self.num, _reduced=True)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.num.is_zero():
            raise ZeroDivisionError("div: division by zero")
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, n: int):
        n = int(n)
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return self.field.one
        return RationalFunction(self.field, self.num**n, self.den**n, _reduced=True)

    # comparison -------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.constant(other)
        if not isinstance(other, RationalFunction) or other.field is not self.field:
            return NotImplemented
        # cross-multiplication is the ground truth, independent of reduction
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field.rank, str(self.num), str(self.den)))
        return self._hash

    def __bool__(self):
        return not self.num.is_zero()

    # structure --------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        """True when the value is a Laurent polynomial with rational coefficients."""
        return len(self.den) == 1

    is_laurent = is_polynomial

    def term_count(self) -> int:
        return len(self.num) + len(self.den)

    def depends_on_q(self) -> bool:
        return self.q_degrees() != (0, 0)

    def q_degrees(self) -> tuple[int, int]:
        """Degrees in ``q`` of the reduced numerator and denominator."""
        return int(self.num.degrees()[-1]), int(self.den.degrees()[-1])

    def q_degree_gap(self) -> int:
        """``deg_q(den) - deg_q(num)`` of the reduced fraction."""
        if self.num.is_zero():
            raise ValueError("q_degree_gap: undefined for the zero function")
        dn, dd = self.q_degrees()
        return dd - dn

    def _split_den(self):
        tc = self.den.term_content()
        c = int(tc.coeffs()[0])
        e = tuple(int(x) for x in tc.monoms()[0])
        return c, e, self.den / tc

    def laurent_terms(self) -> dict[tuple[int, ...], Fraction]:
        """Terms ``{(e1..er, k): coeff}`` of a Laurent polynomial, canonically ordered."""
        if not self.is_polynomial():
            raise ValueError(f"not a Laurent polynomial: {self}")
        return _laurent_dict(self.num, self.den)

    def numerator_terms(self) -> dict[tuple[int, ...], Fraction]:
        """Laurent terms of the printed numerator (denominator's monomial moved up)."""
        c, e, _ = self._split_den()
        return _shift_terms(self.num, c, e)

    def denominator_poly(self) -> "RationalFunction":
        """The printed denominator as a polynomial in this field."""
        _, _, rest = self._split_den()
        return RationalFunction(self.field, rest, self.field._one_poly, _reduced=True)

    def numerator_poly(self) -> "RationalFunction":
        return self * self.denominator_poly()

    # substitution -----------------------------------------------------

    def _q_coefficients(self, poly) -> dict[int, "RationalFunction"]:
        field = self.field
        parts: dict[int, dict] = {}
        for exps, c in _terms(poly):
            parts.setdefault(exps[-1], {})[exps[:-1] + (0,)] = int(c)
        return {k: field._wrap(field.ctx.from_dict(t)) for k, t in parts.items()}

    def q_coefficients(self) -> tuple[dict[int, "RationalFunction"], dict[int, "RationalFunction"]]:
        """Numerator and denominator as ``{power of q: Λ-coefficient}`` maps."""
        return self._q_coefficients(self.num), self._q_coefficients(self.den)

    def substitute_q(self, value) -> "RationalFunction":
        """Compose with ``q -> value``; ``value`` is any element of the field."""
        value = self._coerce(value)
        if value == self.field.q**-1:
            return self.invert_variables(lam=False, q=True)
        num = _horner(self._q_coefficients(self.num), value, self.field)
        den = _horner(self._q_coefficients(self.den), value, self.field)
        if den.is_zero():
            raise ZeroDivisionError(f"substitute_q: q -> {value} hits a pole of denominator {self.den}")
        return num / den

    def invert_variables(self, lam: bool = True, q: bool = True) -> "RationalFunction":
        """Substitute ``Λi -> Λi^-1`` (when ``lam``) and ``q -> q^-1`` (when ``q``)."""
        mask = (lam,) * self.field.rank + (q,)
        num, dn = _reverse_poly(self.num, mask, self.field)
        den, dd = _reverse_poly(self.den, mask, self.field)
        # P(x^-1) = x^-deg(P) * rev(P)
        num = num * self.field._poly_monomial(dd)
        den = den * self.field._poly_monomial(dn)
        return RationalFunction(self.field, num, den)

    def map_lambda(self, images: list["RationalFunction"]) -> "RationalFunction":
        """Substitute ``Λi -> images[i-1]`` (each image a Laurent monomial or any element)."""
        field = self.field
        if isinstance(images, dict):
            raise TypeError("map_lambda takes a sequence of images, not a mapping")
        if len(images) != field.rank:
            raise ValueError("one image per Λ1..Λr required")

        def ev(poly):
            total = field.zero
            for exps, c in _terms(poly):
                term = field.monomial((0,) * field.rank, exps[-1], int(c))
                for img, e in zip(images, exps[:-1]):
                    if e:
                        term = term * img**e
                total = total + term
            return total

        return ev(self.num) / ev(self.den)

    def evaluate(self, q=None, lam: dict | None = None) -> "RationalFunction | Fraction":
        """Specialize ``q`` and/or some ``Λi`` (``lam={i: value}``, i >= 1) to rationals.

        Returns a Fraction when every variable is specialized.
        """
        values: dict[str, object] = {}
        if q is not None:
            values["q"] = Fraction(q)
        for i, v in (lam or {}).items():
            if not 1 <= i <= self.field.rank:
                raise IndexError(f"Λ index {i} cannot be specialized")
            values[f"L{i}"] = Fraction(v)
        num = _subs(self.num, values, self.field)
        den = _subs(self.den, values, self.field)
        if den.is_zero():
            raise ZeroDivisionError(f"evaluate: denominator vanishes at {values}")
        result = num / den
        if result.num.is_constant() and result.den.is_constant():
            return Fraction(int(result.num.leading_coefficient() if not result.num.is_zero() else 0),
                            int(result.den.leading_coefficient()))
        return result

    # text -------------------------------------------------------------

    def num_str(self) -> str:
        return format_terms(self.numerator_terms(), self.field.rank)

    def den_str(self) -> str:
        return format_terms(_laurent_dict(self.denominator_poly().num, self.field._one_poly), self.field.rank)

    def __str__(self):
        den = self.den_str()
        if den == "1":
            return self.num_str()
        return f"({self.num_str()})/({den})"

    def __repr__(self):
        return f"RationalFunction[{self.field.rank}]({self})"


# helpers -------------------------------------------------------------


def _terms(poly):
    return [(tuple(int(e) for e in k), int(c)) for k, c in poly.to_dict().items()]


def _laurent_dict(num, den) -> dict[tuple[int, ...], Fraction]:
    c = int(den.leading_coefficient())
    e = tuple(int(x) for x in den.monoms()[0])
    return _shift_terms(num, c, e)


def _shift_terms(num, c, e):
    out = {}
    for exps, coeff in _terms(num):
        key = tuple(a - b for a, b in zip(exps, e))
        out[key] = Fraction(int(coeff), c)
    return dict(sorted(out.items(), key=_order_key, reverse=True))


def _order_key(item):
    exps = item[0]
    return (sum(exps), exps)


def _reverse_poly(poly, mask, field):
    degs = tuple(int(d) for d in poly.degrees())
    shift = tuple(d if m else 0 for d, m in zip(degs, mask))
    rev = {}
    for exps, c in _terms(poly):
        rev[tuple(d - x if m else x for x, d, m in zip(exps, degs, mask))] = c
    return field.ctx.from_dict(rev), shift


def _horner(coeffs: dict[int, RationalFunction], value: RationalFunction, field: Field):
    if not coeffs:
        return field.zero
    top = max(coeffs)
    acc = field.zero
    for k in range(top, -1, -1):
        acc = acc * value
        c = coeffs.get(k)
        if c is not None:
            acc = acc + c
    return acc


def _subs(poly, values: dict, field: Field) -> RationalFunction:
    # rational specialisation: scale each substituted variable by its denominator
    if not values:
        return field._wrap(poly)
    total = field.zero
    idx = {name: i for i, name in enumerate(field.names)}
    for exps, c in _terms(poly):
        coeff = Fraction(int(c))
        keep = list(exps)
        for name, v in values.items():
            i = idx[name]
            coeff *= Fraction(v) ** exps[i]
            keep[i] = 0
        if coeff:
            total = total + field.monomial(keep[:-1], keep[-1], coeff)
    return total


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_terms(terms: dict[tuple[int, ...], Fraction], rank: int) -> str:
    """Render ``{(e1..er, k): coeff}`` in the canonical text format."""
    if not terms:
        return "0"
    names = [f"Λ{i}" for i in range(1, rank + 1)] + ["q"]
    pieces = []
    for exps, c in terms.items():
        factors = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, exps) if e]
        mag = abs(c)
        body = "*".join(factors)
        if not body:
            body = _format_coeff(mag)
        elif mag != 1:
            body = f"{_format_coeff(mag)}*{body}"
        pieces.append(("-" if c < 0 else "+", body))
    sign, body = pieces[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


# parsing -------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([ΛL]\d+|q)|(\S))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        if m.group(1):
            tokens.append(("int", int(m.group(1))))
        elif m.group(2):
            tokens.append(("var", m.group(2)))
        else:
            tokens.append(("op", m.group(3)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str, field: Field):
        self.tokens = _tokenize(text)
        self.i = 0
        self.field = field
        self.text = text

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self, op=None):
        tok = self.peek()
        if op is not None and tok != ("op", op):
            raise ValueError(f"parse error in {self.text!r}: expected {op!r} at token {self.i}")
        self.i += 1
        return tok

    def expr(self):
        value = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.unary()
            value = value * rhs if op == "*" else value / rhs
        return value

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            kind, val = self.take()
            if kind != "int":
                raise ValueError(f"parse error in {self.text!r}: integer exponent expected")
            base = base ** (sign * val)
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "int":
            return self.field.constant(val)
        if kind == "var":
            if val == "q":
                return self.field.q
            return self.field.lam(int(val[1:]))
        if (kind, val) == ("op", "("):
            inner = self.expr()
            self.take(")")
            return inner
        raise ValueError(f"parse error in {self.text!r}: unexpected token {val!r}")


def parse(text: str, field: Field | int | None = None) -> RationalFunction:
    """Parse the canonical text format (or any +,-,*,/,^ expression in Λj and q).

    ``field`` may be a :class:`Field`, a rank, or ``None`` to infer the rank
    from the highest Λ index present.
    """
    if field is None:
        idx = [int(m) for m in re.findall(r"[ΛL](\d+)", text)]
        field = Field(max(idx, default=0))
    elif isinstance(field, int):
        field = Field(field)
    p = _Parser(text, field)
    value = p.expr()
    if p.i != len(p.tokens):
        raise ValueError(f"parse error in {text!r}: trailing input")
    return value
