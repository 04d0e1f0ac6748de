"""Exact integer polynomials, rational functions and real root isolation.

Polynomials are stored with coefficients in *ascending* degree order:
``IntPolynomial((c0, c1, c2))`` is ``c0 + c1*z + c2*z**2``.  All coefficient
arithmetic is done on Python integers, so nothing overflows; floating point
only appears in the final Newton polish of a root.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ImproperSeriesError, NoSignChangeError, SingularMatrixError

Number = int | Fraction


def _trim(coeffs: Iterable[int]) -> tuple[int, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True, init=False)
class IntPolynomial:
    """Polynomial in one variable with integer coefficients (ascending order)."""

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int] = ()):
        c = _trim(coeffs)
        for a in c:
            if not isinstance(a, int):
                raise TypeError(f"coefficients must be integers, got {a!r}")
        object.__setattr__(self, "coeffs", c)

    # -- constructors -------------------------------------------------------
    @classmethod
    def constant(cls, c: int) -> IntPolynomial:
        return cls((c,))

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> IntPolynomial:
        return cls((0,) * degree + (coeff,))

    @classmethod
    def z(cls) -> IntPolynomial:
        return cls((0, 1))

    # -- basic properties ---------------------------------------------------
    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def content(self) -> int:
        g = 0
        for a in self.coeffs:
            g = math.gcd(g, a)
        return g

    def primitive(self) -> IntPolynomial:
        """Divide out the content and make the leading coefficient positive."""
        if not self.coeffs:
            return self
        g = self.content()
        if self.leading < 0:
            g = -g
        return IntPolynomial(a // g for a in self.coeffs)

    def is_monic(self) -> bool:
        return self.leading == 1

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> IntPolynomial:
        if isinstance(other, IntPolynomial):
            return other
        if isinstance(other, int):
            return IntPolynomial((other,))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return IntPolynomial(tuple(x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)))

    __radd__ = __add__

    def __neg__(self) -> IntPolynomial:
        return IntPolynomial(-a for a in self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return IntPolynomial()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> IntPolynomial:
        if n < 0:
            raise ValueError("negative power")
        result, base = IntPolynomial((1,)), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> IntPolynomial:
        """Multiply by z**k."""
        if not self.coeffs:
            return self
        return IntPolynomial((0,) * k + self.coeffs)

    def derivative(self) -> IntPolynomial:
        return IntPolynomial(i * a for i, a in enumerate(self.coeffs) if i)

    def divmod_exact(self, divisor: IntPolynomial) -> tuple[IntPolynomial, IntPolynomial]:
        """Long division over Z; raises ArithmeticError if a quotient coefficient is not integral."""
        if not divisor:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = divisor.degree
        lc = divisor.leading
        if len(rem) - 1 < dq:
            return IntPolynomial(), self
        quot = [0] * (len(rem) - dq)
        for k in range(len(rem) - 1 - dq, -1, -1):
            c = rem[k + dq]
            if c:
                q, r = divmod(c, lc)
                if r:
                    raise ArithmeticError("division is not exact over the integers")
                quot[k] = q
                for i, d in enumerate(divisor.coeffs):
                    rem[k + i] -= q * d
        return IntPolynomial(quot), IntPolynomial(rem)

    def exquo(self, divisor: IntPolynomial) -> IntPolynomial:
        """Exact quotient; the remainder must vanish."""
        q, r = self.divmod_exact(divisor)
        if r:
            raise ArithmeticError("polynomial division leaves a remainder")
        return q

    def pseudo_remainder(self, divisor: IntPolynomial) -> IntPolynomial:
        """Remainder of ``lc(divisor)**(deg self - deg divisor + 1) * self`` by ``divisor``."""
        if not divisor:
            raise ZeroDivisionError("polynomial division by zero")
        delta = self.degree - divisor.degree
        if delta < 0:
            return self
        scaled = self * (divisor.leading ** (delta + 1))
        return scaled.divmod_exact(divisor)[1]

    # -- evaluation ---------------------------------------------------------
    def __call__(self, x):
        acc = 0 * x if not isinstance(x, int) else 0
        for a in reversed(self.coeffs):
            acc = acc * x + a
        return acc

    def eval_float(self, x: float) -> float:
        acc = 0.0
        for a in reversed(self.coeffs):
            acc = acc * x + float(a)
        return acc

    def sign_at(self, x: Number) -> int:
        """Exact sign of p(x) at a rational point."""
        x = Fraction(x)
        a, b = x.numerator, x.denominator
        d = self.degree
        if d < 0:
            return 0
        total, bp = 0, 1
        # b**d * p(a/b) = sum c_i a^i b^(d-i)
        ap = [1]
        for _ in range(d):
            ap.append(ap[-1] * a)
        for i in range(d, -1, -1):
            total += self.coeffs[i] * ap[i] * bp
            bp *= b
        return (total > 0) - (total < 0)

    # -- display ------------------------------------------------------------
    def format(self, var: str = "z") -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if i == 0:
                body = str(mag)
            else:
                body = ("" if mag == 1 else str(mag)) + var + (f"^{i}" if i > 1 else "")
            terms.append((sign, body))
        first_sign, first_body = terms[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self) -> str:
        return self.format()


ZERO = IntPolynomial()
ONE = IntPolynomial((1,))
Z = IntPolynomial((0, 1))


def poly_gcd(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    """Primitive gcd over Z[z] (positive leading coefficient)."""
    if not a:
        return b.primitive()
    if not b:
        return a.primitive()
    c = math.gcd(a.content(), b.content())
    a, b = a.primitive(), b.primitive()
    if a.degree < b.degree:
        a, b = b, a
    while b:
        r = a.pseudo_remainder(b)
        a, b = b, (r.primitive() if r else r)
    return a.primitive() * c if a.degree > 0 else IntPolynomial((c,))


@dataclass(frozen=True, init=False)
class RationalFunction:
    """Quotient of integer polynomials kept in lowest terms.

    Canonical form: gcd(num, den) is constant, the integer contents share no
    common factor and the denominator has a positive leading coefficient, so
    structural equality is mathematical equality.
    """

    numerator: IntPolynomial
    denominator: IntPolynomial

    def __init__(self, numerator: IntPolynomial | int, denominator: IntPolynomial | int = 1):
        num = numerator if isinstance(numerator, IntPolynomial) else IntPolynomial((numerator,))
        den = denominator if isinstance(denominator, IntPolynomial) else IntPolynomial((denominator,))
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not num:
            num, den = IntPolynomial(), IntPolynomial((1,))
        else:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num.exquo(g), den.exquo(g)
            c = math.gcd(num.content(), den.content())
            if den.leading < 0:
                c = -c
            num = IntPolynomial(a // c for a in num.coeffs)
            den = IntPolynomial(a // c for a in den.coeffs)
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denominator", den)

    @classmethod
    def parse(cls, text: str) -> RationalFunction:
        return parse_rational(text)

    def _coerce(self, other) -> RationalFunction:
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (IntPolynomial, int)):
            return RationalFunction(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RationalFunction(
            self.numerator * o.denominator + o.numerator * self.denominator,
            self.denominator * o.denominator,
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.numerator, self.denominator)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RationalFunction(self.numerator * o.numerator, self.denominator * o.denominator)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not o.numerator:
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.numerator * o.denominator, self.denominator * o.numerator)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __call__(self, x: Number) -> Fraction:
        x = Fraction(x)
        den = self.denominator(x)
        if den == 0:
            raise ZeroDivisionError(f"pole at {x}")
        return Fraction(self.numerator(x)) / den

    def is_proper(self) -> bool:
        """True when the expansion in powers of 1/z has no positive powers of z."""
        return self.numerator.degree <= self.denominator.degree

    def format(self, var: str = "z") -> str:
        num = self.numerator.format(var)
        if self.denominator == ONE:
            return num
        den = self.denominator.format(var)
        if len(self.numerator.coeffs) > 1 and sum(1 for c in self.numerator.coeffs if c) > 1:
            num = f"({num})"
        if sum(1 for c in self.denominator.coeffs if c) > 1 or self.denominator.leading != 1:
            den = f"({den})"
        return f"{num}/{den}"

    def __str__(self) -> str:
        return self.format()


# ---------------------------------------------------------------------------
# tiny expression parser, used for data files and the command line
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([a-zA-Z])|(.))")


def parse_rational(text: str, var: str = "z") -> RationalFunction:
    """Parse expressions such as ``(2z+1)/(z(z+1))`` or ``z^2 - 6z + 2``."""
    tokens = []
    for num, name, op in _TOKEN.findall(text):
        if num:
            tokens.append(("num", int(num)))
        elif name:
            if name != var:
                raise ValueError(f"unknown variable {name!r} in {text!r}")
            tokens.append(("var", name))
        elif op.strip():
            tokens.append(("op", op))
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else ("end", None)

    def take():
        nonlocal pos
        tok = peek()
        pos += 1
        return tok

    def expr():
        sign = 1
        if peek() == ("op", "-"):
            take()
            sign = -1
        elif peek() == ("op", "+"):
            take()
        val = term() * sign
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            rhs = term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term():
        val = power()
        while True:
            tok = peek()
            if tok == ("op", "*"):
                take()
                val = val * power()
            elif tok == ("op", "/"):
                take()
                val = val / power()
            elif tok[0] in ("num", "var") or tok == ("op", "("):
                val = val * power()  # implicit multiplication: 2z, z(z+1)
            else:
                return val

    def power():
        base = atom()
        if peek() == ("op", "^"):
            take()
            kind, exp = take()
            if kind != "num":
                raise ValueError(f"exponent must be an integer in {text!r}")
            num, den = base.numerator ** exp, base.denominator ** exp
            base = RationalFunction(num, den)
        return base

    def atom():
        kind, val = take()
        if kind == "num":
            return RationalFunction(val)
        if kind == "var":
            return RationalFunction(Z)
        if (kind, val) == ("op", "("):
            inner = expr()
            if take() != ("op", ")"):
                raise ValueError(f"unbalanced parentheses in {text!r}")
            return inner
        raise ValueError(f"unexpected token {val!r} in {text!r}")

    result = expr()
    if pos != len(tokens):
        raise ValueError(f"trailing input in {text!r}")
    return result


# ---------------------------------------------------------------------------
# fraction-free linear algebra over Z[z]
# ---------------------------------------------------------------------------

PolyMatrix = Sequence[Sequence[IntPolynomial]]


def _as_poly(x) -> IntPolynomial:
    return x if isinstance(x, IntPolynomial) else IntPolynomial((x,))


def _bareiss_upper(rows: list[list[IntPolynomial]], ncols: int) -> tuple[list[list[IntPolynomial]], int]:
    """Bareiss elimination in place on the first ``len(rows)`` columns.

    Returns the upper-triangular rows and the sign of the row permutation.
    Raises SingularMatrixError when a column has no usable pivot.
    """
    n = len(rows)
    sign = 1
    prev = ONE
    for k in range(n):
        pivot_row = None
        best = None
        for i in range(k, n):
            entry = rows[i][k]
            if entry and (best is None or entry.degree < best):
                pivot_row, best = i, entry.degree
        if pivot_row is None:
            raise SingularMatrixError("matrix is singular (determinant is the zero polynomial)")
        if pivot_row != k:
            rows[k], rows[pivot_row] = rows[pivot_row], rows[k]
            sign = -sign
        pk = rows[k][k]
        for i in range(k + 1, n):
            aik = rows[i][k]
            row_i, row_k = rows[i], rows[k]
            for j in range(k + 1, ncols):
                val = pk * row_i[j] - aik * row_k[j]
                row_i[j] = val.exquo(prev) if prev != ONE else val
            row_i[k] = ZERO
        prev = pk
    return rows, sign


def determinant(matrix: PolyMatrix) -> IntPolynomial:
    """Determinant of a square polynomial matrix by Bareiss elimination."""
    n = len(matrix)
    if n == 0:
        return ONE
    if any(len(r) != n for r in matrix):
        raise ValueError("determinant needs a square matrix")
    rows = [[_as_poly(x) for x in r] for r in matrix]
    try:
        rows, sign = _bareiss_upper(rows, n)
    except SingularMatrixError:
        return ZERO
    return rows[-1][-1] if sign > 0 else -rows[-1][-1]


def solve_fraction_free(matrix: PolyMatrix, rhs: Sequence[IntPolynomial]) -> tuple[list[IntPolynomial], IntPolynomial]:
    """Solve ``matrix @ x = rhs`` over Q(z).

    Returns ``(y, d)`` with ``x = y / d``; ``d`` is ``det(matrix)`` and every
    ``y_i`` is a polynomial (it equals ``(adj(matrix) @ rhs)_i``).
    """
    n = len(matrix)
    if any(len(r) != n for r in matrix) or len(rhs) != n:
        raise ValueError("solve_fraction_free needs a square system")
    rows = [[_as_poly(x) for x in r] + [_as_poly(b)] for r, b in zip(matrix, rhs)]
    rows, sign = _bareiss_upper(rows, n + 1)
    det = rows[-1][n - 1]
    y: list[IntPolynomial] = [ZERO] * n
    for i in range(n - 1, -1, -1):
        acc = det * rows[i][n]
        for j in range(i + 1, n):
            acc = acc - rows[i][j] * y[j]
        y[i] = acc.exquo(rows[i][i])
    if sign < 0:
        det = -det
        y = [-v for v in y]
    return y, det


def rational_matrix_inverse_sum(matrix: PolyMatrix) -> RationalFunction:
    """Sum of all entries of ``matrix**-1`` as a reduced rational function.

    Computed as ``1^T adj(M) 1 / det(M)`` from a single fraction-free solve of
    ``M x = 1``.
    """
    n = len(matrix)
    if n == 0:
        raise ValueError("empty matrix")
    y, det = solve_fraction_free(matrix, [ONE] * n)
    total = ZERO
    for v in y:
        total = total + v
    return RationalFunction(total, det)


def characteristic_polynomial(int_matrix: Sequence[Sequence[int]]) -> IntPolynomial:
    """det(z*I - A) for an integer matrix."""
    n = len(int_matrix)
    m = [
        [(Z if i == j else ZERO) - IntPolynomial((int(int_matrix[i][j]),)) for j in range(n)]
        for i in range(n)
    ]
    return determinant(m)


# ---------------------------------------------------------------------------
# real roots
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RootBracket:
    """Open interval (lo, hi) across which ``polynomial`` strictly changes sign."""

    lo: Fraction
    hi: Fraction
    polynomial: IntPolynomial

    def __post_init__(self):
        lo, hi = Fraction(self.lo), Fraction(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if not lo < hi:
            raise ValueError(f"bracket needs lo < hi, got ({lo}, {hi})")
        if self.polynomial.sign_at(lo) * self.polynomial.sign_at(hi) >= 0:
            raise NoSignChangeError(
                f"{self.polynomial} does not change sign on ({float(lo)}, {float(hi)})"
            )


def _newton_polish(p: IntPolynomial, x: float, lo: float, hi: float, steps: int) -> float:
    dp = p.derivative()
    for _ in range(steps):
        d = dp.eval_float(x)
        if d == 0.0:
            break
        nxt = x - p.eval_float(x) / d
        if not lo <= nxt <= hi or abs(p.eval_float(nxt)) > abs(p.eval_float(x)):
            break
        x = nxt
    return x


def isolate_dominant_positive_root(
    p: IntPolynomial,
    bracket: RootBracket | tuple[Number, Number],
    tol: float = 1e-13,
    newton_steps: int = 3,
) -> float:
    """Root of ``p`` inside a sign-changing bracket.

    Bisection at exact rational midpoints until the bracket is narrower than
    ``tol``, then a guarded Newton polish that never leaves the final bracket.
    """
    if not isinstance(bracket, RootBracket):
        bracket = RootBracket(Fraction(bracket[0]), Fraction(bracket[1]), p)
    elif bracket.polynomial != p:
        bracket = RootBracket(bracket.lo, bracket.hi, p)
    lo, hi = bracket.lo, bracket.hi
    s_lo = p.sign_at(lo)
    width = Fraction(tol)
    while hi - lo > width:
        mid = (lo + hi) / 2
        s = p.sign_at(mid)
        if s == 0:
            return float(mid)
        if s == s_lo:
            lo = mid
        else:
            hi = mid
    x = float((lo + hi) / 2)
    return _newton_polish(p, x, float(lo), float(hi), newton_steps)


def squarefree_part(p: IntPolynomial) -> IntPolynomial:
    g = poly_gcd(p, p.derivative())
    if g.degree <= 0:
        return p.primitive()
    return p.primitive().exquo(g.primitive()).primitive()


def _drop_content(p: IntPolynomial) -> IntPolynomial:
    """Divide by the positive content, keeping the sign."""
    c = p.content()
    return IntPolynomial(a // c for a in p.coeffs) if c > 1 else p


def sturm_sequence(p: IntPolynomial) -> list[IntPolynomial]:
    """Sturm chain from sign-corrected pseudo-remainders (positive rescaling only)."""
    s = p.primitive()
    chain = [s, _drop_content(s.derivative())]
    while chain[-1].degree > 0:
        a, b = chain[-2], chain[-1]
        r = a.pseudo_remainder(b)
        if not r:
            break
        # prem scales the true remainder by lc(b)**(deg a - deg b + 1)
        if b.leading < 0 and (a.degree - b.degree + 1) % 2 == 1:
            r = -r
        chain.append(_drop_content(-r))
    return chain


def _sign_changes(chain: list[IntPolynomial], x: Fraction) -> int:
    signs = [s for s in (q.sign_at(x) for q in chain) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(p: IntPolynomial, lo: Number, hi: Number) -> int:
    """Number of distinct real roots of ``p`` in the half-open interval (lo, hi]."""
    chain = sturm_sequence(squarefree_part(p))
    return _sign_changes(chain, Fraction(lo)) - _sign_changes(chain, Fraction(hi))


def cauchy_bound(p: IntPolynomial) -> Fraction:
    lc = abs(p.leading)
    return 1 + Fraction(max((abs(c) for c in p.coeffs[:-1]), default=0), lc)


def largest_real_root(p: IntPolynomial, tol: float = 1e-13) -> float | None:
    """Largest real root of ``p`` or None when ``p`` has no real root.

    Sturm counting isolates an interval containing only the largest root,
    then ``isolate_dominant_positive_root`` refines it.
    """
    if p.degree < 1:
        return None
    s = squarefree_part(p)
    chain = sturm_sequence(s)
    hi = cauchy_bound(s)
    lo = -hi
    v_hi = _sign_changes(chain, hi)
    if _sign_changes(chain, lo) - v_hi == 0:
        return None
    while _sign_changes(chain, lo) - v_hi > 1:
        mid = (lo + hi) / 2
        if _sign_changes(chain, mid) - v_hi >= 1:
            lo = mid
        else:
            hi = mid
            v_hi = _sign_changes(chain, hi)
    if s.sign_at(hi) == 0:
        return float(hi)
    if s.sign_at(lo) == 0:
        # lo is a smaller root; step right without losing the isolated one
        step = (hi - lo) / 2
        while s.sign_at(lo + step) == 0 or _sign_changes(chain, lo + step) - v_hi != 1:
            step /= 2
        lo = lo + step
    return isolate_dominant_positive_root(s, (lo, hi), tol)


# ---------------------------------------------------------------------------
# generating functions and linear recurrences
# ---------------------------------------------------------------------------

def _normalise_number(x: Fraction) -> Number:
    return x.numerator if x.denominator == 1 else x


def series_coefficients(f: RationalFunction, count: int) -> list[Number]:
    """First ``count`` coefficients f_0, f_1, ... of ``f`` expanded in powers of 1/z."""
    if not f.is_proper():
        raise ImproperSeriesError(f"{f} has no expansion in 1/z (numerator degree too large)")
    d = f.denominator.degree
    den = f.denominator.coeffs
    num = f.numerator.coeffs
    c0 = den[d]
    out: list[Fraction] = []
    for k in range(count):
        # coefficient of z^(d-k) on both sides of num = den * sum f_k z^-k
        pk = num[d - k] if 0 <= d - k < len(num) else 0
        acc = Fraction(pk)
        for i in range(1, min(k, d) + 1):
            acc -= den[d - i] * out[k - i]
        out.append(acc / c0)
    return [_normalise_number(x) for x in out]


@dataclass(frozen=True)
class LinearRecurrence:
    """``f_k = sum_i coefficients[i-1] * f_{k-i}`` for ``k >= len(initial)``."""

    coefficients: tuple[Number, ...]
    initial: tuple[Number, ...]

    @property
    def order(self) -> int:
        return len(self.coefficients)

    def terms(self, count: int) -> list[Number]:
        out = list(self.initial[:count])
        while len(out) < count:
            k = len(out)
            acc = 0
            for i, c in enumerate(self.coefficients, start=1):
                if c and k - i >= 0:
                    acc += c * out[k - i]
            out.append(_normalise_number(Fraction(acc)) if isinstance(acc, Fraction) else acc)
        return out

    def characteristic_polynomial(self) -> IntPolynomial:
        """r^d - c_1 r^(d-1) - ... - c_d, scaled to integer coefficients."""
        d = self.order
        fr = [Fraction(1)] + [-Fraction(c) for c in self.coefficients]
        lcm = 1
        for x in fr:
            lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
        return IntPolynomial(int(fr[d - i] * lcm) for i in range(d + 1))

    def describe(self, name: str = "f") -> str:
        parts = []
        for i, c in enumerate(self.coefficients, start=1):
            if not c:
                continue
            idx = f"{name}_{{k-{i}}}" if i > 1 else f"{name}_{{k-1}}"
            parts.append((c, idx))
        if not parts:
            return f"{name}_k = 0"
        text = ""
        for j, (c, idx) in enumerate(parts):
            mag = abs(c)
            coef = "" if mag == 1 else f"{mag}"
            if j == 0:
                text += ("-" if c < 0 else "") + coef + idx
            else:
                text += (" - " if c < 0 else " + ") + coef + idx
        return f"{name}_k = {text}"


def recurrence_from_rational(f: RationalFunction) -> LinearRecurrence:
    """Linear recurrence and initial terms reproducing the 1/z series of ``f``."""
    if not f.is_proper():
        raise ImproperSeriesError(f"{f} has no expansion in 1/z (numerator degree too large)")
    den = f.denominator
    d = den.degree
    c0 = Fraction(den.leading)
    coeffs = tuple(_normalise_number(-Fraction(den.coeffs[d - i]) / c0) for i in range(1, d + 1))
    # the homogeneous relation holds from k = d+1 on, and from k = d when the
    # numerator has no constant term
    n_init = d + 1 if (f.numerator.coeffs and f.numerator.coeffs[0] != 0 and d > 0) else d
    n_init = max(n_init, 1)
    initial = tuple(series_coefficients(f, n_init))
    return LinearRecurrence(coeffs, initial)
