"""Forward-mode jets and finite-difference stencils.

Two tiny automatic-differentiation carriers power every residual check in
this package:

* ``Jet2`` -- value plus all first and second partial derivatives with
  respect to three coordinates (called t, x, y throughout, though reduced
  equations reuse the slots for their own variables, e.g. (t, r) or
  (omega1, omega2)).

* ``Jet1`` -- value plus first, second and third derivative with respect to
  a single variable; third order is needed because one of the reduced
  stationary equations is third order.

Components may be python floats or numpy arrays (broadcasting does the right
thing), so a single formula transcription serves three backends: scalar
evaluation, pointwise exact derivatives, and vectorized grid evaluation.

The elementary functions (sin, exp, log, ...) live at module level and
dispatch on the argument type: jets get the chain rule, everything else is
handed to numpy.  Writing solution formulas against these wrappers is what
keeps the catalog's "one formula, three backends" promise.

Independent of the jets, ``fd_jet`` builds the same second-order jet from
fourth-order central finite differences of a black-box callable.  It is the
cross-check oracle: it shares no code path with the algebraic jets, so
agreement between the two is meaningful evidence of a correct transcription.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError

__all__ = [
    "Jet2", "Jet1", "fd_jet", "fd_jet1", "fd_d1", "fd_d2", "fd_d3",
    "sin", "cos", "tan", "sec", "sinh", "cosh", "tanh", "sech", "coth",
    "exp", "log", "sqrt", "arctan",
]


def _is_zero(v):
    """True if v (scalar or array) contains an exact zero."""
    return bool(np.any(np.asarray(v) == 0.0))


class Jet2:
    """Order-2 jet in three variables.

    Slots: f; ft, fx, fy; ftt, ftx, fty, fxx, fxy, fyy.
    Construct constants with ``Jet2.const`` and seeded coordinates with
    ``Jet2.vars_at``; everything else comes out of arithmetic.
    """

    __slots__ = ("f", "ft", "fx", "fy", "ftt", "ftx", "fty", "fxx", "fxy", "fyy")

    def __init__(self, f, ft=0.0, fx=0.0, fy=0.0,
                 ftt=0.0, ftx=0.0, fty=0.0, fxx=0.0, fxy=0.0, fyy=0.0):
        self.f = f
        self.ft, self.fx, self.fy = ft, fx, fy
        self.ftt, self.ftx, self.fty = ftt, ftx, fty
        self.fxx, self.fxy, self.fyy = fxx, fxy, fyy

    # -- constructors -----------------------------------------------------

    @staticmethod
    def const(v):
        return Jet2(v)

    @staticmethod
    def vars_at(t, x, y):
        """Seeded coordinate jets (T, X, Y) at a point (scalars or arrays)."""
        T = Jet2(t, ft=1.0)
        X = Jet2(x, fx=1.0)
        Y = Jet2(y, fy=1.0)
        return T, X, Y

    # -- helpers -----------------------------------------------------------

    @property
    def lap_xy(self):
        """Spatial Laplacian fxx + fyy."""
        return self.fxx + self.fyy

    def as_tuple(self):
        return (self.f, self.ft, self.fx, self.fy,
                self.ftt, self.ftx, self.fty, self.fxx, self.fxy, self.fyy)

    def __repr__(self):
        return ("Jet2(f={0.f!r}, ft={0.ft!r}, fx={0.fx!r}, fy={0.fy!r}, "
                "ftt={0.ftt!r}, ftx={0.ftx!r}, fty={0.fty!r}, "
                "fxx={0.fxx!r}, fxy={0.fxy!r}, fyy={0.fyy!r})").format(self)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, o):
        if isinstance(o, Jet2):
            return Jet2(self.f + o.f, self.ft + o.ft, self.fx + o.fx,
                        self.fy + o.fy, self.ftt + o.ftt, self.ftx + o.ftx,
                        self.fty + o.fty, self.fxx + o.fxx, self.fxy + o.fxy,
                        self.fyy + o.fyy)
        return Jet2(self.f + o, self.ft, self.fx, self.fy,
                    self.ftt, self.ftx, self.fty, self.fxx, self.fxy, self.fyy)

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.f, -self.ft, -self.fx, -self.fy,
                    -self.ftt, -self.ftx, -self.fty,
                    -self.fxx, -self.fxy, -self.fyy)

    def __sub__(self, o):
        return self + (-o if isinstance(o, Jet2) else -o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if isinstance(o, Jet2):
            a, b = self, o
            return Jet2(
                a.f * b.f,
                a.ft * b.f + a.f * b.ft,
                a.fx * b.f + a.f * b.fx,
                a.fy * b.f + a.f * b.fy,
                a.ftt * b.f + 2.0 * a.ft * b.ft + a.f * b.ftt,
                a.ftx * b.f + a.ft * b.fx + a.fx * b.ft + a.f * b.ftx,
                a.fty * b.f + a.ft * b.fy + a.fy * b.ft + a.f * b.fty,
                a.fxx * b.f + 2.0 * a.fx * b.fx + a.f * b.fxx,
                a.fxy * b.f + a.fx * b.fy + a.fy * b.fx + a.f * b.fxy,
                a.fyy * b.f + 2.0 * a.fy * b.fy + a.f * b.fyy,
            )
        return Jet2(self.f * o, self.ft * o, self.fx * o, self.fy * o,
                    self.ftt * o, self.ftx * o, self.fty * o,
                    self.fxx * o, self.fxy * o, self.fyy * o)

    __rmul__ = __mul__

    def __truediv__(self, o):
        if not isinstance(o, Jet2):
            return self * (1.0 / o)
        a, b = self, o
        if _is_zero(b.f):
            raise DomainError("jet division by zero")
        q = a.f / b.f
        qt = (a.ft - q * b.ft) / b.f
        qx = (a.fx - q * b.fx) / b.f
        qy = (a.fy - q * b.fy) / b.f
        return Jet2(
            q, qt, qx, qy,
            (a.ftt - 2.0 * qt * b.ft - q * b.ftt) / b.f,
            (a.ftx - qt * b.fx - qx * b.ft - q * b.ftx) / b.f,
            (a.fty - qt * b.fy - qy * b.ft - q * b.fty) / b.f,
            (a.fxx - 2.0 * qx * b.fx - q * b.fxx) / b.f,
            (a.fxy - qx * b.fy - qy * b.fx - q * b.fxy) / b.f,
            (a.fyy - 2.0 * qy * b.fy - q * b.fyy) / b.f,
        )

    def __rtruediv__(self, o):
        return Jet2.const(o) / self

    def __pow__(self, p):
        if isinstance(p, int) or (isinstance(p, float) and p.is_integer()):
            n = int(p)
            if n == 0:
                return Jet2.const(1.0 + 0.0 * self.f)
            if n < 0:
                return 1.0 / (self ** (-n))
            r = self
            for _ in range(n - 1):
                r = r * self
            return r
        v = self.f
        if bool(np.any(np.asarray(v) <= 0.0)):
            raise DomainError("jet x**p needs x > 0 for non-integer p")
        f0 = v ** p
        return _compose2(self, f0, p * v ** (p - 1.0), p * (p - 1.0) * v ** (p - 2.0))


class Jet1:
    """Order-3 jet in one variable: f, d (f'), dd (f''), ddd (f''')."""

    __slots__ = ("f", "d", "dd", "ddd")

    def __init__(self, f, d=0.0, dd=0.0, ddd=0.0):
        self.f, self.d, self.dd, self.ddd = f, d, dd, ddd

    @staticmethod
    def const(v):
        return Jet1(v)

    @staticmethod
    def var_at(z):
        return Jet1(z, d=1.0)

    def as_tuple(self):
        return (self.f, self.d, self.dd, self.ddd)

    def __repr__(self):
        return "Jet1(f={0.f!r}, d={0.d!r}, dd={0.dd!r}, ddd={0.ddd!r})".format(self)

    def __add__(self, o):
        if isinstance(o, Jet1):
            return Jet1(self.f + o.f, self.d + o.d, self.dd + o.dd, self.ddd + o.ddd)
        return Jet1(self.f + o, self.d, self.dd, self.ddd)

    __radd__ = __add__

    def __neg__(self):
        return Jet1(-self.f, -self.d, -self.dd, -self.ddd)

    def __sub__(self, o):
        return self + (-o if isinstance(o, Jet1) else -o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if isinstance(o, Jet1):
            a, b = self, o
            return Jet1(
                a.f * b.f,
                a.d * b.f + a.f * b.d,
                a.dd * b.f + 2.0 * a.d * b.d + a.f * b.dd,
                a.ddd * b.f + 3.0 * a.dd * b.d + 3.0 * a.d * b.dd + a.f * b.ddd,
            )
        return Jet1(self.f * o, self.d * o, self.dd * o, self.ddd * o)

    __rmul__ = __mul__

    def __truediv__(self, o):
        if not isinstance(o, Jet1):
            return self * (1.0 / o)
        a, b = self, o
        if _is_zero(b.f):
            raise DomainError("jet division by zero")
        q = a.f / b.f
        q1 = (a.d - q * b.d) / b.f
        q2 = (a.dd - 2.0 * q1 * b.d - q * b.dd) / b.f
        q3 = (a.ddd - 3.0 * q2 * b.d - 3.0 * q1 * b.dd - q * b.ddd) / b.f
        return Jet1(q, q1, q2, q3)

    def __rtruediv__(self, o):
        return Jet1.const(o) / self

    def __pow__(self, p):
        if isinstance(p, int) or (isinstance(p, float) and p.is_integer()):
            n = int(p)
            if n == 0:
                return Jet1.const(1.0 + 0.0 * self.f)
            if n < 0:
                return 1.0 / (self ** (-n))
            r = self
            for _ in range(n - 1):
                r = r * self
            return r
        v = self.f
        if bool(np.any(np.asarray(v) <= 0.0)):
            raise DomainError("jet x**p needs x > 0 for non-integer p")
        return _compose1(self, v ** p, p * v ** (p - 1.0),
                         p * (p - 1.0) * v ** (p - 2.0),
                         p * (p - 1.0) * (p - 2.0) * v ** (p - 3.0))


def _compose2(a: Jet2, f0, f1, f2) -> Jet2:
    """Chain rule g(a) for Jet2 given g, g', g'' at a.f."""
    return Jet2(
        f0,
        f1 * a.ft, f1 * a.fx, f1 * a.fy,
        f2 * a.ft * a.ft + f1 * a.ftt,
        f2 * a.ft * a.fx + f1 * a.ftx,
        f2 * a.ft * a.fy + f1 * a.fty,
        f2 * a.fx * a.fx + f1 * a.fxx,
        f2 * a.fx * a.fy + f1 * a.fxy,
        f2 * a.fy * a.fy + f1 * a.fyy,
    )


def _compose1(a: Jet1, f0, f1, f2, f3) -> Jet1:
    """Chain rule g(a) for Jet1 given g, g', g'', g''' at a.f."""
    return Jet1(
        f0,
        f1 * a.d,
        f2 * a.d * a.d + f1 * a.dd,
        f3 * a.d * a.d * a.d + 3.0 * f2 * a.d * a.dd + f1 * a.ddd,
    )


def compose(a, derivs):
    """Compose an outer function (given by its derivatives at a's value)
    with a jet.  ``derivs`` is (f, f', f'') for Jet2 or (f, f', f'', f''')
    for Jet1.  Exposed so special-function modules can chain through jets
    without reimplementing the rule."""
    if isinstance(a, Jet2):
        return _compose2(a, derivs[0], derivs[1], derivs[2])
    if isinstance(a, Jet1):
        return _compose1(a, derivs[0], derivs[1], derivs[2], derivs[3])
    raise TypeError("compose expects a jet")


# ---------------------------------------------------------------------------
# elementary functions, jet-aware
# ---------------------------------------------------------------------------

def sin(z):
    if isinstance(z, Jet2):
        s, c = np.sin(z.f), np.cos(z.f)
        return _compose2(z, s, c, -s)
    if isinstance(z, Jet1):
        s, c = np.sin(z.f), np.cos(z.f)
        return _compose1(z, s, c, -s, -c)
    return np.sin(z)


def cos(z):
    if isinstance(z, Jet2):
        s, c = np.sin(z.f), np.cos(z.f)
        return _compose2(z, c, -s, -c)
    if isinstance(z, Jet1):
        s, c = np.sin(z.f), np.cos(z.f)
        return _compose1(z, c, -s, -c, s)
    return np.cos(z)


def tan(z):
    # tan' = 1 + tan^2, tan'' = 2 tan (1+tan^2), tan''' = (1+tan^2)(2+6tan^2)
    if isinstance(z, (Jet2, Jet1)):
        T = np.tan(z.f)
        S = 1.0 + T * T
        if isinstance(z, Jet2):
            return _compose2(z, T, S, 2.0 * T * S)
        return _compose1(z, T, S, 2.0 * T * S, S * (2.0 + 6.0 * T * T))
    return np.tan(z)


def sec(z):
    # sec' = sec tan, sec'' = sec (1 + 2 tan^2), sec''' = sec tan (5 + 6 tan^2)
    if isinstance(z, (Jet2, Jet1)):
        c = np.cos(z.f)
        if _is_zero(c):
            raise DomainError("sec at a pole of 1/cos")
        s = 1.0 / c
        T = np.tan(z.f)
        if isinstance(z, Jet2):
            return _compose2(z, s, s * T, s * (1.0 + 2.0 * T * T))
        return _compose1(z, s, s * T, s * (1.0 + 2.0 * T * T),
                         s * T * (5.0 + 6.0 * T * T))
    return 1.0 / np.cos(z)


def sinh(z):
    if isinstance(z, Jet2):
        s, c = np.sinh(z.f), np.cosh(z.f)
        return _compose2(z, s, c, s)
    if isinstance(z, Jet1):
        s, c = np.sinh(z.f), np.cosh(z.f)
        return _compose1(z, s, c, s, c)
    return np.sinh(z)


def cosh(z):
    if isinstance(z, Jet2):
        s, c = np.sinh(z.f), np.cosh(z.f)
        return _compose2(z, c, s, c)
    if isinstance(z, Jet1):
        s, c = np.sinh(z.f), np.cosh(z.f)
        return _compose1(z, c, s, c, s)
    return np.cosh(z)


def tanh(z):
    # T' = 1-T^2, T'' = -2T(1-T^2), T''' = (1-T^2)(6T^2-2)
    if isinstance(z, (Jet2, Jet1)):
        T = np.tanh(z.f)
        S = 1.0 - T * T
        if isinstance(z, Jet2):
            return _compose2(z, T, S, -2.0 * T * S)
        return _compose1(z, T, S, -2.0 * T * S, S * (6.0 * T * T - 2.0))
    return np.tanh(z)


def sech(z):
    # h' = -h tanh, h'' = h - 2h^3, h''' = -tanh * h * (1 - 6h^2)
    if isinstance(z, (Jet2, Jet1)):
        h = 1.0 / np.cosh(z.f)
        T = np.tanh(z.f)
        if isinstance(z, Jet2):
            return _compose2(z, h, -h * T, h - 2.0 * h ** 3)
        return _compose1(z, h, -h * T, h - 2.0 * h ** 3,
                         -h * T * (1.0 - 6.0 * h * h))
    return 1.0 / np.cosh(z)


def coth(z):
    # c' = 1-c^2, c'' = -2c(1-c^2), c''' = (1-c^2)(6c^2-2)
    if isinstance(z, (Jet2, Jet1)):
        if _is_zero(z.f):
            raise DomainError("coth at its pole z = 0")
        C = 1.0 / np.tanh(z.f)
        S = 1.0 - C * C
        if isinstance(z, Jet2):
            return _compose2(z, C, S, -2.0 * C * S)
        return _compose1(z, C, S, -2.0 * C * S, S * (6.0 * C * C - 2.0))
    return 1.0 / np.tanh(z)


def exp(z):
    if isinstance(z, Jet2):
        e = np.exp(z.f)
        return _compose2(z, e, e, e)
    if isinstance(z, Jet1):
        e = np.exp(z.f)
        return _compose1(z, e, e, e, e)
    return np.exp(z)


def log(z):
    if isinstance(z, (Jet2, Jet1)):
        v = z.f
        if bool(np.any(np.asarray(v) <= 0.0)):
            raise DomainError("log of a non-positive value")
        if isinstance(z, Jet2):
            return _compose2(z, np.log(v), 1.0 / v, -1.0 / (v * v))
        return _compose1(z, np.log(v), 1.0 / v, -1.0 / (v * v),
                         2.0 / (v * v * v))
    if bool(np.any(np.asarray(z) <= 0.0)):
        raise DomainError("log of a non-positive value")
    return np.log(z)


def sqrt(z):
    if isinstance(z, (Jet2, Jet1)):
        v = z.f
        if bool(np.any(np.asarray(v) <= 0.0)):
            raise DomainError("sqrt of a non-positive value (jets need v > 0)")
        r = np.sqrt(v)
        if isinstance(z, Jet2):
            return _compose2(z, r, 0.5 / r, -0.25 / (r * v))
        return _compose1(z, r, 0.5 / r, -0.25 / (r * v), 0.375 / (r * v * v))
    return np.sqrt(z)


def arctan(z):
    # a' = 1/(1+v^2), a'' = -2v a'^2, a''' = (6v^2-2) a'^3
    if isinstance(z, (Jet2, Jet1)):
        v = z.f
        g = 1.0 / (1.0 + v * v)
        if isinstance(z, Jet2):
            return _compose2(z, np.arctan(v), g, -2.0 * v * g * g)
        return _compose1(z, np.arctan(v), g, -2.0 * v * g * g,
                         (6.0 * v * v - 2.0) * g * g * g)
    return np.arctan(z)


# ---------------------------------------------------------------------------
# finite-difference oracle (independent of the jets above)
# ---------------------------------------------------------------------------

def _steps(h, coord):
    """Relative step: h * (1 + |coord|)."""
    return h * (1.0 + abs(coord))


def fd_d1(f, z, h=1e-3):
    """Fourth-order central first derivative of a scalar callable."""
    hh = _steps(h, z)
    return (-f(z + 2 * hh) + 8.0 * f(z + hh) - 8.0 * f(z - hh) + f(z - 2 * hh)) / (12.0 * hh)


def fd_d2(f, z, h=1e-3):
    """Fourth-order central second derivative of a scalar callable."""
    hh = _steps(h, z)
    return (-f(z + 2 * hh) + 16.0 * f(z + hh) - 30.0 * f(z)
            + 16.0 * f(z - hh) - f(z - 2 * hh)) / (12.0 * hh * hh)


def fd_d3(f, z, h=1e-3):
    """Fourth-order central third derivative (6-point stencil)."""
    hh = _steps(h, z)
    return (-(f(z + 3 * hh) - f(z - 3 * hh))
            + 8.0 * (f(z + 2 * hh) - f(z - 2 * hh))
            - 13.0 * (f(z + hh) - f(z - hh))) / (8.0 * hh ** 3)


def fd_jet1(f, z, h=1e-3):
    """Jet1 of a scalar callable via fourth-order central differences."""
    return Jet1(f(z), fd_d1(f, z, h), fd_d2(f, z, h), fd_d3(f, z, h))


def fd_jet(func, t, x, y, h=1e-3):
    """Second-order jet of ``func(t, x, y)`` from 4th-order central stencils.

    Steps scale with coordinate magnitude: h_i = h * (1 + |c_i|).  The mixed
    partials nest two first-derivative stencils (16 evaluations per pair).
    This shares no code with Jet2 arithmetic on purpose.  Coordinates may be
    scalars or same-shape arrays (the jet entries then hold arrays).
    """
    c = tuple(np.asarray(v, dtype=float) for v in (t, x, y))
    hs = tuple(_steps(h, ci) for ci in c)

    def ev(i0, i1, i2):
        return func(c[0] + i0 * hs[0], c[1] + i1 * hs[1], c[2] + i2 * hs[2])

    f0 = ev(0, 0, 0)
    d1 = [0.0] * 3
    d2 = [0.0] * 3
    for ax in range(3):
        off = [0, 0, 0]

        def at(k, ax=ax, off=off):
            off[ax] = k
            try:
                return ev(*off)
            finally:
                off[ax] = 0

        fp1, fp2, fm1, fm2 = at(1), at(2), at(-1), at(-2)
        hh = hs[ax]
        d1[ax] = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * hh)
        d2[ax] = (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * hh * hh)

    def mixed(ai, aj):
        hi, hj = hs[ai], hs[aj]

        def g(k):
            # first derivative along ai at offset k along aj
            off = [0, 0, 0]
            off[aj] = k

            def shift(m):
                off[ai] = m
                try:
                    return ev(*off)
                finally:
                    off[ai] = 0

            return (-shift(2) + 8.0 * shift(1) - 8.0 * shift(-1) + shift(-2)) / (12.0 * hi)

        return (-g(2) + 8.0 * g(1) - 8.0 * g(-1) + g(-2)) / (12.0 * hj)

    return Jet2(f0, d1[0], d1[1], d1[2],
                d2[0], mixed(0, 1), mixed(0, 2), d2[1], mixed(1, 2), d2[2])
