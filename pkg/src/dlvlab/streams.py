"""Catalog of planar stream functions psi(x, y).

The governing system transports the three components with the
divergence-free velocity U = (psi_y, -psi_x).  Eleven parametric shapes of
psi are special: each admits extra point symmetries beyond time translation
(see symmetry.py for the verification machinery).  This module only knows
the geometry: formulas, parameter side conditions, singular sets, jets,
velocities, and a small JSON schema for configuration files.

Shapes (free smooth profile F where stated; all parameters real):

  case1   F(x^2+y^2) + (alpha + beta (x^2+y^2)) arctan(x/y)
  case2   F(a1 x + a2 y) + beta x (a1 x + a2 y) + gamma x
  case3   F(x/y) + alpha ln x
  case4   F(arctan(x/y) + a0 ln(x^2+y^2)) + alpha arctan(x/y),  a0 != 0
  case5   alpha arctan(x/y) + beta ln(x^2+y^2) + gamma (x^2+y^2),
          alpha^2+beta^2+gamma^2 != 0
  case6   sign ln(a1 x + a2 y) + gamma (a1 x + a2 y),  a1^2+a2^2 != 0
  case7   a0 x^2 + y^2/(4 a0),  a0 not in {0, 1/2, -1/2}
  case8   a0 x^2 - y^2/(4 a0),  a0 != 0
  case9   x^2 + alpha y
  case10  x^2 + y^2
  case11  a1 x + a2 y

arctan(x/y) is taken literally (principal branch of atan of the ratio, not
atan2): the validity region keeps y away from zero, and crossing y = 0
changes branch on purpose -- the symmetry checks differentiate locally, so
only the local branch matters.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import jets as jm
from .errors import ParameterError, SchemaError
from .jets import Jet2

__all__ = ["FChoice", "StreamFunction", "make_stream", "example_stream",
           "stream_from_json", "CASES", "F_KINDS"]

F_KINDS = ("identity", "square", "sin", "ln", "exp", "poly")

CASES = tuple("case%d" % i for i in range(1, 12))

_PARAM_NAMES = {
    "case1": ("alpha", "beta"),
    "case2": ("a1", "a2", "beta", "gamma"),
    "case3": ("alpha",),
    "case4": ("a0", "alpha"),
    "case5": ("alpha", "beta", "gamma"),
    "case6": ("a1", "a2", "gamma", "sign"),
    "case7": ("a0",),
    "case8": ("a0",),
    "case9": ("alpha",),
    "case10": (),
    "case11": ("a1", "a2"),
}

_HAS_F = ("case1", "case2", "case3", "case4")


@dataclass(frozen=True)
class FChoice:
    """A concrete choice for the free profile F appearing in cases 1-4."""

    kind: str = "identity"
    coeffs: tuple = ()

    def __post_init__(self):
        if self.kind not in F_KINDS:
            raise ParameterError("unknown F kind %r (choose from %s)"
                                 % (self.kind, ", ".join(F_KINDS)))
        if self.kind == "poly":
            if len(self.coeffs) == 0:
                raise ParameterError("poly F needs at least one coefficient")
            object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))
        elif self.coeffs:
            raise ParameterError("coeffs are only meaningful for kind='poly'")

    def __call__(self, s):
        k = self.kind
        if k == "identity":
            return s
        if k == "square":
            return s * s
        if k == "sin":
            return jm.sin(s)
        if k == "ln":
            return jm.log(s)
        if k == "exp":
            return jm.exp(s)
        # poly, Horner; the 0*s keeps jet arguments jet-typed for degree 0
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * s + c
        return acc + 0.0 * s

    def to_json(self):
        d = {"kind": self.kind}
        if self.kind == "poly":
            d["coeffs"] = list(self.coeffs)
        return d


class StreamFunction:
    """One member of the catalog: psi plus its side conditions and jets."""

    def __init__(self, case, params=None, F=None):
        if case not in CASES:
            raise ParameterError("unknown stream case %r" % (case,))
        names = _PARAM_NAMES[case]
        params = dict(params or {})
        unknown = set(params) - set(names)
        if unknown:
            raise ParameterError("%s does not take parameters %s" % (case, sorted(unknown)))
        missing = set(names) - set(params)
        if missing:
            raise ParameterError("%s needs parameters %s" % (case, sorted(missing)))
        self.case = case
        self.params = {k: float(params[k]) for k in names}
        if case in _HAS_F:
            self.F = F if F is not None else FChoice("identity")
        else:
            if F is not None:
                raise ParameterError("%s has no free profile F" % case)
            self.F = None
        self._check_side_conditions()

    def _check_side_conditions(self):
        p = self.params
        c = self.case
        if c == "case4" and p["a0"] == 0.0:
            raise ParameterError("case4 requires a0 != 0")
        if c == "case5" and p["alpha"] == 0.0 and p["beta"] == 0.0 and p["gamma"] == 0.0:
            raise ParameterError("case5 requires (alpha, beta, gamma) != 0")
        if c == "case6":
            if p["a1"] == 0.0 and p["a2"] == 0.0:
                raise ParameterError("case6 requires (a1, a2) != 0")
            if p["sign"] not in (1.0, -1.0):
                raise ParameterError("case6 sign must be +1 or -1")
        if c == "case7" and p["a0"] in (0.0, 0.5, -0.5):
            raise ParameterError("case7 requires a0 not in {0, 1/2, -1/2}")
        if c == "case8" and p["a0"] == 0.0:
            raise ParameterError("case8 requires a0 != 0")

    # -- evaluation ---------------------------------------------------------

    def psi(self, x, y):
        """psi at (x, y); accepts floats, arrays or jets transparently."""
        p = self.params
        c = self.case
        F = self.F
        if c == "case1":
            s = x * x + y * y
            out = F(s)
            if p["alpha"] != 0.0 or p["beta"] != 0.0:
                out = out + (p["alpha"] + p["beta"] * s) * jm.arctan(x / y)
            return out
        if c == "case2":
            z = p["a1"] * x + p["a2"] * y
            return F(z) + p["beta"] * x * z + p["gamma"] * x
        if c == "case3":
            return F(x / y) + p["alpha"] * jm.log(x)
        if c == "case4":
            arg = jm.arctan(x / y) + p["a0"] * jm.log(x * x + y * y)
            return F(arg) + p["alpha"] * jm.arctan(x / y)
        if c == "case5":
            s = x * x + y * y
            out = p["gamma"] * s
            if p["alpha"] != 0.0:
                out = out + p["alpha"] * jm.arctan(x / y)
            if p["beta"] != 0.0:
                out = out + p["beta"] * jm.log(s)
            return out
        if c == "case6":
            z = p["a1"] * x + p["a2"] * y
            return p["sign"] * jm.log(z) + p["gamma"] * z
        if c == "case7":
            return p["a0"] * x * x + y * y / (4.0 * p["a0"])
        if c == "case8":
            return p["a0"] * x * x - y * y / (4.0 * p["a0"])
        if c == "case9":
            return x * x + p["alpha"] * y
        if c == "case10":
            return x * x + y * y
        # case11
        return p["a1"] * x + p["a2"] * y

    def jet(self, x, y) -> Jet2:
        """Full second-order jet of psi at (x, y) (t-slots are zero)."""
        _, X, Y = Jet2.vars_at(0.0, x, y)
        out = self.psi(X, Y)
        if not isinstance(out, Jet2):
            out = Jet2.const(out)
        return out

    def velocity(self, x, y):
        """U = (psi_y, -psi_x); floats or arrays."""
        j = self.jet(x, y)
        return j.fy, -j.fx

    # -- domain --------------------------------------------------------------

    def is_valid(self, x, y, margin=1e-2):
        """True where (x, y) keeps clear of every singular set of this psi."""
        p = self.params
        c = self.case
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        ok = np.ones(np.broadcast(x, y).shape, dtype=bool)
        r2 = x * x + y * y

        def needs_ratio():
            return np.abs(y) >= margin

        if c == "case1":
            if p["alpha"] != 0.0 or p["beta"] != 0.0:
                ok &= needs_ratio()
            ok &= _f_mask(self.F, r2, margin)
        elif c == "case2":
            z = p["a1"] * x + p["a2"] * y
            ok &= _f_mask(self.F, z, margin)
        elif c == "case3":
            ok &= (x >= margin) & needs_ratio()
            ok &= _f_mask(self.F, x / np.where(np.abs(y) > 0, y, np.nan), margin)
        elif c == "case4":
            ok &= needs_ratio() & (r2 >= margin * margin)
            with np.errstate(divide="ignore", invalid="ignore"):
                arg = np.arctan(x / np.where(np.abs(y) > 0, y, np.nan)) \
                    + p["a0"] * np.log(np.where(r2 > 0, r2, np.nan))
            ok &= _f_mask(self.F, arg, margin)
        elif c == "case5":
            if p["alpha"] != 0.0:
                ok &= needs_ratio()
            if p["alpha"] != 0.0 or p["beta"] != 0.0:
                ok &= r2 >= margin * margin
        elif c == "case6":
            z = p["a1"] * x + p["a2"] * y
            ok &= z >= margin
        # cases 7-11 are entire
        if ok.ndim == 0:
            return bool(ok)
        return ok

    def domain_note(self):
        notes = {
            "case1": "needs y != 0 when the angular part is active; F domain applies to x^2+y^2",
            "case2": "F domain applies to a1 x + a2 y",
            "case3": "needs x > 0 and y != 0",
            "case4": "needs y != 0 and (x, y) != 0; F domain applies to its argument",
            "case5": "needs y != 0 when alpha != 0; origin excluded when alpha or beta != 0",
            "case6": "needs a1 x + a2 y > 0",
        }
        return notes.get(self.case, "entire plane")

    # -- serialization --------------------------------------------------------

    def to_json(self):
        d = {"case": self.case, "params": dict(self.params)}
        if self.F is not None:
            d["F"] = self.F.to_json()
        return d

    def __repr__(self):
        bits = ", ".join("%s=%g" % kv for kv in sorted(self.params.items()))
        if self.F is not None:
            bits += ", F=%s" % (self.F.kind,)
        return "StreamFunction(%s%s)" % (self.case, (": " + bits) if bits else "")


def _f_mask(F: FChoice, s, margin):
    if F is None or F.kind != "ln":
        return True
    s = np.asarray(s, dtype=float)
    return (~np.isnan(s)) & (s >= margin)


def make_stream(case, params=None, F=None) -> StreamFunction:
    return StreamFunction(case, params, F)


def example_stream(case) -> StreamFunction:
    """A concrete representative of each case, used by the CLI catalog and
    the classification checks.  Parameters are generic (no accidental zeros)
    so every listed symmetry is exercised, including the time-dependent
    pieces."""
    ex = {
        "case1": (dict(alpha=0.7, beta=0.3), FChoice("sin")),
        "case2": (dict(a1=1.0, a2=0.5, beta=0.4, gamma=0.8), FChoice("square")),
        "case3": (dict(alpha=1.2), FChoice("identity")),
        "case4": (dict(a0=0.6, alpha=0.9), FChoice("sin")),
        "case5": (dict(alpha=0.8, beta=0.5, gamma=0.3), None),
        "case6": (dict(a1=0.8, a2=0.6, gamma=0.5, sign=1.0), None),
        "case7": (dict(a0=0.8), None),
        "case8": (dict(a0=0.7), None),
        "case9": (dict(alpha=1.3), None),
        "case10": (dict(), None),
        "case11": (dict(a1=0.9, a2=0.4), None),
    }
    if case not in ex:
        raise ParameterError("unknown stream case %r" % (case,))
    params, F = ex[case]
    return StreamFunction(case, params, F)


def stream_from_json(obj) -> StreamFunction:
    """Build a stream from a dict or JSON string like
    {"case": "case3", "params": {"alpha": 1.0}, "F": {"kind": "ln"}}."""
    if isinstance(obj, str):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as e:
            raise SchemaError("invalid JSON: %s" % e) from None
    if not isinstance(obj, dict):
        raise SchemaError("stream description must be a JSON object")
    extra = set(obj) - {"case", "params", "F"}
    if extra:
        raise SchemaError("unknown stream keys %s" % sorted(extra))
    if "case" not in obj:
        raise SchemaError("stream description needs a 'case' key")
    case = obj["case"]
    params = obj.get("params", {})
    if not isinstance(params, dict):
        raise SchemaError("'params' must be an object")
    F = None
    if obj.get("F") is not None:
        fd = obj["F"]
        if not isinstance(fd, dict) or "kind" not in fd:
            raise SchemaError("'F' must be an object with a 'kind'")
        extra = set(fd) - {"kind", "coeffs"}
        if extra:
            raise SchemaError("unknown F keys %s" % sorted(extra))
        F = FChoice(fd["kind"], tuple(fd.get("coeffs", ())))
    return StreamFunction(case, params, F)
