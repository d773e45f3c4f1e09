"""Truncated Taylor jets and exact rational polynomial arithmetic.

Derivatives in this package are never taken by finite differences when a
jet can carry them exactly: curves, frames and surfaces all evaluate to
``Jet`` values, and the algebraic identity checks run on ``RationalPoly``
with arbitrary-precision rational coefficients.
"""

from __future__ import annotations

import math
from fractions import Fraction

DEFAULT_ORDER = 8


class BasepointMismatch(ValueError):
    """Raised when combining jets expanded at different basepoints."""


class JetDivisionError(ZeroDivisionError):
    """Raised when dividing by a jet whose value vanishes."""


class Jet:
    """Truncated Taylor expansion of a scalar quantity at a basepoint.

    ``coeffs[k]`` holds the Taylor coefficient f^(k)(t0)/k!, not the raw
    derivative, so the convolution in ``__mul__`` stays overflow-safe; raw
    derivatives are recovered through :meth:`derivative_value`.

    Coefficients are floats or :class:`~fractions.Fraction`; the two should
    not be mixed inside one expression.  Binary operations truncate to the
    smaller operand order and require equal basepoints.
    """

    __slots__ = ("t0", "coeffs")

    def __init__(self, t0, coeffs):
        self.t0 = t0
        self.coeffs = tuple(coeffs)
        if not self.coeffs:
            raise ValueError("a jet needs at least its value coefficient")

    @classmethod
    def constant(cls, value, order=DEFAULT_ORDER, t0=0.0):
        zero = value * 0
        return cls(t0, (value,) + (zero,) * order)

    @classmethod
    def variable(cls, t0, order=DEFAULT_ORDER):
        """Jet of the identity function t -> t at ``t0``."""
        zero = t0 * 0
        one = zero + 1
        coeffs = [t0, one] + [zero] * (order - 1)
        return cls(t0, coeffs[: order + 1])

    @property
    def order(self):
        return len(self.coeffs) - 1

    @property
    def value(self):
        return self.coeffs[0]

    def derivative_value(self, k):
        """Raw k-th derivative f^(k)(t0) = k! * coeffs[k]."""
        return self.coeffs[k] * math.factorial(k)

    def derivative(self):
        """Jet of f', one order lower."""
        if self.order == 0:
            raise ValueError("jet order exhausted; request a deeper jet")
        return Jet(self.t0, tuple((k + 1) * c for k, c in enumerate(self.coeffs[1:])))

    def antiderivative(self, value):
        """Jet of the primitive with prescribed value at the basepoint."""
        return Jet(self.t0, (value,) + tuple(c / (k + 1) for k, c in enumerate(self.coeffs)))

    def truncated(self, order):
        if order >= self.order:
            return self
        return Jet(self.t0, self.coeffs[: order + 1])

    def eval_at(self, t):
        """Evaluate the truncated expansion at parameter ``t`` (Horner)."""
        h = t - self.t0
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * h + c
        return acc

    # -- arithmetic -------------------------------------------------------

    def _pair(self, other):
        if isinstance(other, Jet):
            if other.t0 != self.t0:
                raise BasepointMismatch(
                    f"jets expanded at {self.t0} and {other.t0} cannot be combined"
                )
            return other
        return Jet.constant(other, self.order, self.t0)

    def __add__(self, other):
        o = self._pair(other)
        n = min(self.order, o.order)
        return Jet(self.t0, tuple(a + b for a, b in zip(self.coeffs[: n + 1], o.coeffs[: n + 1])))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._pair(other)
        n = min(self.order, o.order)
        return Jet(self.t0, tuple(a - b for a, b in zip(self.coeffs[: n + 1], o.coeffs[: n + 1])))

    def __rsub__(self, other):
        return self._pair(other).__sub__(self)

    def __neg__(self):
        return Jet(self.t0, tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.t0, tuple(c * other for c in self.coeffs))
        o = self._pair(other)
        n = min(self.order, o.order)
        a, b = self.coeffs, o.coeffs
        out = []
        for k in range(n + 1):
            s = a[0] * b[k]
            for j in range(1, k + 1):
                s += a[j] * b[k - j]
            out.append(s)
        return Jet(self.t0, out)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.t0, tuple(c / other for c in self.coeffs))
        o = self._pair(other)
        if o.value == 0:
            raise JetDivisionError(f"division by jet with zero value at t0={self.t0}")
        n = min(self.order, o.order)
        a, b = self.coeffs, o.coeffs
        out = [a[0] / b[0]]
        for k in range(1, n + 1):
            s = a[k]
            for j in range(1, k + 1):
                s -= b[j] * out[k - j]
            out.append(s / b[0])
        return Jet(self.t0, out)

    def __rtruediv__(self, other):
        return Jet.constant(other, self.order, self.t0).__truediv__(self)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("jet powers must be non-negative integers")
        one = self.coeffs[0] * 0 + 1
        acc = Jet.constant(one, self.order, self.t0)
        base = self
        k = n
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    # -- elementary functions ----------------------------------------------

    def sqrt(self):
        v = self.value
        if isinstance(v, Fraction):
            r0 = _fraction_sqrt(v)
        else:
            if v <= 0:
                raise JetDivisionError(f"sqrt of non-positive jet value {v}")
            r0 = math.sqrt(v)
        out = [r0]
        for k in range(1, self.order + 1):
            s = self.coeffs[k]
            for j in range(1, k):
                s -= out[j] * out[k - j]
            out.append(s / (2 * r0))
        return Jet(self.t0, out)

    def exp(self):
        g = self.coeffs
        out = [math.exp(g[0])]
        for k in range(1, self.order + 1):
            s = 0.0
            for j in range(1, k + 1):
                s += j * g[j] * out[k - j]
            out.append(s / k)
        return Jet(self.t0, out)

    def sin_cos(self):
        """Jets of sin(f) and cos(f), computed jointly."""
        g = self.coeffs
        s = [math.sin(g[0])]
        c = [math.cos(g[0])]
        for k in range(1, self.order + 1):
            ds = 0.0
            dc = 0.0
            for j in range(1, k + 1):
                ds += j * g[j] * c[k - j]
                dc += j * g[j] * s[k - j]
            s.append(ds / k)
            c.append(-dc / k)
        return Jet(self.t0, s), Jet(self.t0, c)

    def sin(self):
        return self.sin_cos()[0]

    def cos(self):
        return self.sin_cos()[1]

    def __repr__(self):
        return f"Jet(t0={self.t0!r}, coeffs={self.coeffs!r})"


def _fraction_sqrt(q):
    """Exact square root of a perfect-square Fraction, else TypeError."""
    if q < 0:
        raise JetDivisionError(f"sqrt of negative rational {q}")
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn != n or rd * rd != d:
        raise TypeError(f"{q} is not a perfect square; use float jets")
    return Fraction(rn, rd)


def jet_dot(u, v):
    acc = u[0] * v[0]
    for a, b in zip(u[1:], v[1:]):
        acc = acc + a * b
    return acc


def jet_norm_sq(v):
    return jet_dot(v, v)


def inverse_norm(v):
    """Jet of 1/|v| for a vector of jets; the unit-frame normalizer."""
    n2 = jet_norm_sq(v)
    if n2.value == 0:
        raise JetDivisionError(f"vector jet has zero norm at t0={v[0].t0}")
    return 1 / n2.sqrt()


# ---------------------------------------------------------------------------
# Exact rational polynomials
# ---------------------------------------------------------------------------


def _fr(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"exact arithmetic needs int/Fraction/str coefficients, got {type(x).__name__}")


class RationalPoly:
    """Sparse polynomial with exact rational coefficients in named variables.

    ``vars`` fixes variable names and exponent order; ``terms`` maps exponent
    tuples to nonzero coefficients.  No operation here ever rounds, and zero
    coefficients are never stored.  The workhorse instances are bivariate in
    (t, u) for surface normal forms and univariate in t for curve components,
    but any variable tuple works (the envelope checks need (t, x1, x2)).
    """

    __slots__ = ("vars", "terms")

    def __init__(self, vars, terms):
        self.vars = tuple(vars)
        clean = {}
        for exps, c in terms.items():
            exps = tuple(exps)
            if len(exps) != len(self.vars):
                raise ValueError(f"exponent tuple {exps} does not match vars {self.vars}")
            c = _fr(c)
            if c != 0:
                clean[exps] = clean.get(exps, Fraction(0)) + c
        self.terms = {e: c for e, c in clean.items() if c != 0}

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, vars=("t", "u")):
        return cls(vars, {})

    @classmethod
    def const(cls, c, vars=("t", "u")):
        return cls(vars, {(0,) * len(vars): _fr(c)})

    @classmethod
    def var(cls, name, vars=("t", "u")):
        i = tuple(vars).index(name)
        e = [0] * len(vars)
        e[i] = 1
        return cls(vars, {tuple(e): Fraction(1)})

    @classmethod
    def from_coeffs(cls, coeffs, var="t"):
        """Univariate polynomial from a low-to-high coefficient list."""
        return cls((var,), {(k,): _fr(c) for k, c in enumerate(coeffs) if _fr(c) != 0})

    # -- queries -------------------------------------------------------------

    @property
    def is_zero(self):
        return not self.terms

    def degree(self, var=None):
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        i = self.vars.index(var)
        return max(e[i] for e in self.terms)

    def coefficient(self, *exps):
        return self.terms.get(tuple(exps), Fraction(0))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalPoly.const(other, self.vars)
        if not isinstance(other, RationalPoly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    __hash__ = None

    # -- arithmetic -----------------------------------------------------------

    def _pair(self, other):
        if isinstance(other, RationalPoly):
            if other.vars != self.vars:
                raise ValueError(f"variable mismatch: {self.vars} vs {other.vars}")
            return other
        return RationalPoly.const(other, self.vars)

    def __add__(self, other):
        o = self._pair(other)
        terms = dict(self.terms)
        for e, c in o.terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return RationalPoly(self.vars, terms)

    __radd__ = __add__

    def __sub__(self, other):
        return self.__add__(self._pair(other).__neg__())

    def __rsub__(self, other):
        return self._pair(other).__sub__(self)

    def __neg__(self):
        return RationalPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, RationalPoly):
            c = _fr(other)
            return RationalPoly(self.vars, {e: v * c for e, v in self.terms.items()})
        o = self._pair(other)
        terms = {}
        for ea, ca in self.terms.items():
            for eb, cb in o.terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                terms[e] = terms.get(e, Fraction(0)) + ca * cb
        return RationalPoly(self.vars, terms)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        c = _fr(other)
        if c == 0:
            raise ZeroDivisionError("division of a polynomial by zero")
        return RationalPoly(self.vars, {e: v / c for e, v in self.terms.items()})

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        acc = RationalPoly.const(1, self.vars)
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    # -- calculus --------------------------------------------------------------

    def derivative(self, var="t"):
        i = self.vars.index(var)
        terms = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            ne = list(e)
            ne[i] -= 1
            terms[tuple(ne)] = terms.get(tuple(ne), Fraction(0)) + c * e[i]
        return RationalPoly(self.vars, terms)

    def integrate(self, var="t"):
        """Antiderivative in ``var`` with integration constant fixed to 0."""
        i = self.vars.index(var)
        terms = {}
        for e, c in self.terms.items():
            ne = list(e)
            ne[i] += 1
            terms[tuple(ne)] = c / (e[i] + 1)
        return RationalPoly(self.vars, terms)

    def substitute(self, var, value):
        """Substitute a constant or a polynomial (same vars) for ``var``."""
        i = self.vars.index(var)
        if not isinstance(value, RationalPoly):
            value = RationalPoly.const(_fr(value), self.vars)
        value = self._pair(value)
        # group by the exponent of var, then Horner in the substituted value
        by_exp = {}
        for e, c in self.terms.items():
            rest = list(e)
            rest[i] = 0
            by_exp.setdefault(e[i], {})[tuple(rest)] = c
        result = RationalPoly.zero(self.vars)
        top = max(by_exp) if by_exp else 0
        for k in range(top, -1, -1):
            result = result * value
            if k in by_exp:
                result = result + RationalPoly(self.vars, by_exp[k])
        return result

    def eval(self, **values):
        vals = [_fr(values[v]) for v in self.vars]
        acc = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for x, k in zip(vals, e):
                term *= x ** k
            acc += term
        return acc

    # -- univariate helpers -----------------------------------------------------

    def _require_univariate(self):
        if len(self.vars) != 1:
            raise ValueError(f"operation needs a univariate polynomial, got vars {self.vars}")

    def coeff_list(self):
        """Low-to-high dense coefficient list of a univariate polynomial."""
        self._require_univariate()
        if not self.terms:
            return [Fraction(0)]
        n = max(e[0] for e in self.terms)
        out = [Fraction(0)] * (n + 1)
        for (k,), c in self.terms.items():
            out[k] = c
        return out

    def eval_at(self, x):
        self._require_univariate()
        x = _fr(x)
        acc = Fraction(0)
        for c in reversed(self.coeff_list()):
            acc = acc * x + c
        return acc

    def taylor_coeffs(self, t0, order):
        """Exact Taylor coefficients at ``t0`` by repeated synthetic division."""
        self._require_univariate()
        return _taylor_shift(self.coeff_list(), _fr(t0), order)

    def jet(self, t0, order, exact=False):
        """Jet of a univariate polynomial at ``t0`` (float by default)."""
        self._require_univariate()
        if exact:
            t0 = _fr(t0)
            return Jet(t0, self.taylor_coeffs(t0, order))
        t0 = float(t0)
        return Jet(t0, _taylor_shift([float(c) for c in self.coeff_list()], t0, order))

    def multiplicity_at(self, x0):
        """Multiplicity of ``x0`` as a root (0 when the value is nonzero)."""
        self._require_univariate()
        if self.is_zero:
            raise ValueError("the zero polynomial vanishes to every order")
        x0 = _fr(x0)
        m = 0
        work = self
        while work.eval_at(x0) == 0:
            m += 1
            work = work.derivative(self.vars[0])
        return m

    # -- formatting ---------------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            factors = []
            for name, k in zip(self.vars, e):
                if k == 1:
                    factors.append(name)
                elif k > 1:
                    factors.append(f"{name}^{k}")
            body = "*".join(factors)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{c}*{body}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self):
        return f"RationalPoly({self})"


def _taylor_shift(coeffs, t0, order):
    """Taylor coefficients of a dense polynomial about ``t0``.

    Repeated synthetic division; works for float or Fraction coefficients.
    """
    zero = t0 * 0
    work = list(coeffs)
    out = []
    for _ in range(order + 1):
        if not work:
            out.append(zero)
            continue
        rem = zero
        quot = [zero] * (len(work) - 1)
        for k in range(len(work) - 1, -1, -1):
            cur = work[k] + rem * t0
            if k > 0:
                quot[k - 1] = cur
                rem = cur
            else:
                out.append(cur)
        work = quot
    return out


def univariate_gcd(a, b):
    """Monic greatest common divisor of two univariate polynomials."""
    if a.vars != b.vars:
        raise ValueError("gcd needs matching variables")
    var = a.vars[0]
    pa, pb = a.coeff_list(), b.coeff_list()

    def trim(p):
        while len(p) > 1 and p[-1] == 0:
            p.pop()
        return p

    pa, pb = trim(list(pa)), trim(list(pb))
    while not (len(pb) == 1 and pb[0] == 0):
        # remainder of pa modulo pb
        r = list(pa)
        while len(r) >= len(pb) and not (len(r) == 1 and r[0] == 0):
            factor = r[-1] / pb[-1]
            shift = len(r) - len(pb)
            for i, c in enumerate(pb):
                r[i + shift] -= factor * c
            r = trim(r)
            if len(r) < len(pb):
                break
        pa, pb = pb, r
    lead = pa[-1]
    monic = [c / lead for c in pa]
    return RationalPoly.from_coeffs(monic, var)


def univariate_gcd_list(polys):
    nonzero = [p for p in polys if not p.is_zero]
    if not nonzero:
        raise ValueError("gcd of all-zero polynomials is undefined")
    g = nonzero[0]
    lead = g.coeff_list()[-1]
    g = g * (1 / lead)
    for p in nonzero[1:]:
        g = univariate_gcd(g, p)
        if g.degree() == 0:
            break
    return g


def univariate_divexact(a, b):
    """Exact quotient a/b of univariate polynomials; error on nonzero remainder."""
    if a.vars != b.vars:
        raise ValueError("division needs matching variables")
    var = a.vars[0]
    ra = list(a.coeff_list())
    rb = b.coeff_list()
    while len(rb) > 1 and rb[-1] == 0:
        rb = rb[:-1]
    if len(rb) == 1 and rb[0] == 0:
        raise ZeroDivisionError("division by the zero polynomial")
    if a.is_zero:
        return RationalPoly.zero((var,))
    q = [Fraction(0)] * max(len(ra) - len(rb) + 1, 0)
    for k in range(len(ra) - len(rb), -1, -1):
        c = ra[k + len(rb) - 1] / rb[-1]
        q[k] = c
        if c != 0:
            for i, bc in enumerate(rb):
                ra[k + i] -= c * bc
    if any(c != 0 for c in ra):
        raise ValueError("polynomial division left a nonzero remainder")
    return RationalPoly.from_coeffs(q, var)
