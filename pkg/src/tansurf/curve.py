"""Frontal curves, Wronskian rank profiles, and curve-type detection.

A frontal curve is carried as the pair (a, tau) with f' = a*tau and |tau| = 1.
Component-defined curves factor their velocity exactly when the components
are polynomials (f' = g * w with g the monic gcd and w a never-vanishing
polynomial direction field); data-defined curves take (a, tau) directly and
integrate their position.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import vectors as vec
from .expressions import Expr, parse_expression
from .jets import (
    DEFAULT_ORDER,
    RationalPoly,
    inverse_norm,
    jet_norm_sq,
    univariate_divexact,
    univariate_gcd_list,
)

DEFAULT_RANK_EPS = 1e-8
UNIT_FRAME_TOL = 1e-9
VALIDATION_SAMPLES = 65


class NotFrontalError(ValueError):
    """The given data does not define a frontal curve (no continuous unit tangent)."""

    def __init__(self, message, t=None):
        self.t = t
        if t is not None:
            message = f"{message} at t={t}"
        super().__init__(message)


class TypeUndeterminedError(RuntimeError):
    """Wronskian ranks did not reach full rank within the order budget."""

    def __init__(self, max_order, reached):
        self.max_order = max_order
        self.reached = reached
        super().__init__(
            f"type undetermined at order {max_order} (rank reached {reached})"
        )


class CurveSpecError(ValueError):
    """Malformed curve-spec JSON."""


@dataclass(frozen=True)
class CurveType:
    """Strictly increasing tuple of derivative counts at which the Wronskian
    gains each rank, together with how it was detected."""

    entries: tuple
    detected_at: float
    tolerance_used: float
    mode: str

    def __post_init__(self):
        e = self.entries
        if not e or any(int(a) != a or a < 1 for a in e):
            raise ValueError(f"curve type entries must be positive integers, got {e}")
        if any(b <= a for a, b in zip(e, e[1:])):
            raise ValueError(f"curve type entries must strictly increase, got {e}")

    def __str__(self):
        return "(" + ", ".join(str(a) for a in self.entries) + ")"


def _as_fraction(t):
    """Exact parameter value; floats are read by their shortest decimal repr."""
    if isinstance(t, (int, Fraction)):
        return Fraction(t)
    if isinstance(t, float):
        return Fraction(str(t))
    raise TypeError(f"cannot interpret {t!r} as an exact parameter")


class FrontalCurve:
    """Base class; see ComponentCurve and DataCurve."""

    is_polynomial = False

    def __init__(self, dim, domain, name=None):
        self.dim = dim
        t0, t1 = float(domain[0]), float(domain[1])
        if not t0 < t1:
            raise ValueError(f"empty parameter domain {domain}")
        self.domain = (t0, t1)
        self.name = name

    # subclasses provide jets; everything else evaluates through them
    def position_jet(self, t, order=DEFAULT_ORDER):
        raise NotImplementedError

    def velocity_jet(self, t, order=DEFAULT_ORDER):
        raise NotImplementedError

    def tau_jet(self, t, order=DEFAULT_ORDER):
        raise NotImplementedError

    def a_jet(self, t, order=DEFAULT_ORDER):
        raise NotImplementedError

    def position(self, t):
        return tuple(j.value for j in self.position_jet(t, 0))

    def velocity(self, t):
        return tuple(j.value for j in self.velocity_jet(t, 0))

    def tau(self, t):
        return tuple(j.value for j in self.tau_jet(t, 0))

    def a(self, t):
        return self.a_jet(t, 0).value

    def sample_ts(self, n):
        t0, t1 = self.domain
        if n == 1:
            return [0.5 * (t0 + t1)]
        h = (t1 - t0) / (n - 1)
        return [t0 + i * h for i in range(n)]

    # exact accessors; only polynomial component curves implement them
    def component_polys(self):
        raise NotFrontalError("curve has no exact polynomial form")

    def velocity_polys(self):
        raise NotFrontalError("curve has no exact polynomial form")

    def direction_polys(self):
        raise NotFrontalError("curve has no exact polynomial form")

    def scale_poly(self):
        raise NotFrontalError("curve has no exact polynomial form")

    def _validate_unit_frame(self):
        for t in self.sample_ts(VALIDATION_SAMPLES):
            tau = self.tau(t)
            if abs(vec.norm(tau) - 1.0) > UNIT_FRAME_TOL:
                raise NotFrontalError(
                    f"tangent frame is not unit (|tau|={vec.norm(tau)!r})", t=t
                )

    def __repr__(self):
        label = self.name or "curve"
        return f"<FrontalCurve {label} dim={self.dim} domain={self.domain}>"


class ComponentCurve(FrontalCurve):
    """Curve given by components: expression strings, parsed expressions,
    or exact polynomials.  The exact factorization path engages when every
    component is polynomial."""

    def __init__(self, components, domain, name=None):
        if len(components) < 2:
            raise NotFrontalError("a curve needs at least two components")
        super().__init__(len(components), domain, name)
        exprs = []
        polys = []
        for comp in components:
            if isinstance(comp, RationalPoly):
                exprs.append(None)
                polys.append(comp)
            else:
                e = comp if isinstance(comp, Expr) else parse_expression(comp)
                exprs.append(e)
                polys.append(e.polynomial)
        self.exprs = exprs
        if all(p is not None for p in polys):
            self._polys = polys
            self._vel = [p.derivative("t") for p in polys]
            if all(v.is_zero for v in self._vel):
                raise NotFrontalError("constant curve: velocity vanishes identically")
            self._g = univariate_gcd_list(self._vel)
            self._w = [univariate_divexact(v, self._g) for v in self._vel]
            self.is_polynomial = True
        else:
            if any(e is None for e in exprs):
                raise NotFrontalError(
                    "cannot mix exact polynomial components with analytic expressions"
                )
            self._polys = None
            self._vel = None
            self._g = None
            self._w = None
        self._validate_unit_frame()

    # -- exact accessors ---------------------------------------------------

    def _require_poly(self):
        if not self.is_polynomial:
            raise NotFrontalError("curve components are not all polynomial")

    def component_polys(self):
        self._require_poly()
        return list(self._polys)

    def velocity_polys(self):
        self._require_poly()
        return list(self._vel)

    def direction_polys(self):
        """Polynomial direction field w with f' = g*w and w never zero."""
        self._require_poly()
        return list(self._w)

    def scale_poly(self):
        """Monic polynomial factor g of the velocity (f' = g*w)."""
        self._require_poly()
        return self._g

    # -- jets ----------------------------------------------------------------

    def position_jet(self, t, order=DEFAULT_ORDER):
        if self.is_polynomial:
            return [p.jet(t, order) for p in self._polys]
        return [e.jet(t, order) for e in self.exprs]

    def velocity_jet(self, t, order=DEFAULT_ORDER):
        if self.is_polynomial:
            return [p.jet(t, order) for p in self._vel]
        return [e.jet(t, order + 1).derivative() for e in self.exprs]

    def tau_jet(self, t, order=DEFAULT_ORDER):
        if self.is_polynomial:
            w = [p.jet(t, order) for p in self._w]
        else:
            w = self.velocity_jet(t, order)
            if vec.norm([j.value for j in w]) < 1e-12:
                raise NotFrontalError(
                    "velocity vanishes and no polynomial factorization is available", t=t
                )
        inv = inverse_norm(w)
        return [c * inv for c in w]

    def a_jet(self, t, order=DEFAULT_ORDER):
        if self.is_polynomial:
            w = [p.jet(t, order) for p in self._w]
            return self._g.jet(t, order) * jet_norm_sq(w).sqrt()
        v = self.velocity_jet(t, order)
        return jet_norm_sq(v).sqrt()


class DataCurve(FrontalCurve):
    """Curve given by (a, tau) jet providers; position is integrated.

    The position is accumulated once over a fixed node grid with high-order
    Taylor steps of f' = a*tau (local error far below 1e-10 at the default
    density) and then continued off-grid from the nearest node.
    """

    def __init__(self, a_fn, tau_fn, f0, domain, name=None, nodes_per_unit=2001, step_order=8):
        dim = len(f0)
        super().__init__(dim, domain, name)
        self._a_fn = a_fn
        self._tau_fn = tau_fn
        self.f0 = tuple(float(x) for x in f0)
        span = self.domain[1] - self.domain[0]
        self._n_nodes = max(17, int(math.ceil(span * nodes_per_unit)) + 1)
        self._step_order = step_order
        self._nodes = None
        self._validate_unit_frame()

    def tau_jet(self, t, order=DEFAULT_ORDER):
        return [j.truncated(order) for j in self._tau_fn(t, order)]

    def a_jet(self, t, order=DEFAULT_ORDER):
        return self._a_fn(t, order).truncated(order)

    def velocity_jet(self, t, order=DEFAULT_ORDER):
        a = self.a_jet(t, order)
        return [comp * a for comp in self.tau_jet(t, order)]

    def _node_ts(self):
        t0, t1 = self.domain
        h = (t1 - t0) / (self._n_nodes - 1)
        return [t0 + i * h for i in range(self._n_nodes)], h

    def _ensure_nodes(self):
        if self._nodes is not None:
            return
        ts, h = self._node_ts()
        pos = [self.f0]
        cur = self.f0
        for t in ts[:-1]:
            vel = self.velocity_jet(t, self._step_order)
            cur = tuple(
                comp.antiderivative(x).eval_at(t + h) for comp, x in zip(vel, cur)
            )
            pos.append(cur)
        self._nodes = (ts, h, pos)

    def position(self, t):
        self._ensure_nodes()
        ts, h, pos = self._nodes
        i = int(round((t - ts[0]) / h))
        i = min(max(i, 0), len(ts) - 1)
        vel = self.velocity_jet(ts[i], self._step_order)
        return tuple(
            comp.antiderivative(x).eval_at(t) for comp, x in zip(vel, pos[i])
        )

    def position_jet(self, t, order=DEFAULT_ORDER):
        base = self.position(t)
        vel = self.velocity_jet(t, max(order - 1, 0))
        return [comp.antiderivative(x).truncated(order) for comp, x in zip(vel, base)]


def curve_from_components(components, domain, name=None):
    """Build a frontal curve from component expressions (strings or Expr)."""
    return ComponentCurve(components, domain, name=name)


def curve_from_polynomials(polys, domain, name=None):
    """Build a frontal curve directly from exact univariate polynomials."""
    return ComponentCurve(list(polys), domain, name=name)


def curve_from_frame_data(a_fn, tau_fn, f0, domain, name=None, **kwargs):
    """Build a frontal curve from (a, tau) jet providers."""
    return DataCurve(a_fn, tau_fn, f0, domain, name=name, **kwargs)


# ---------------------------------------------------------------------------
# Wronskian ranks and curve types
# ---------------------------------------------------------------------------


class _ExactRank:
    """Incremental rank of a growing set of exact rational columns."""

    def __init__(self):
        self._pivots = []

    def add(self, col):
        v = list(col)
        for idx, piv in self._pivots:
            c = v[idx]
            if c != 0:
                v = [a - c * b for a, b in zip(v, piv)]
        for i, a in enumerate(v):
            if a != 0:
                self._pivots.append((i, [x / a for x in v]))
                break
        return len(self._pivots)

    @property
    def rank(self):
        return len(self._pivots)


def _numeric_rank(matrix, eps):
    if matrix.size == 0:
        return 0
    sigma = np.linalg.svd(matrix, compute_uv=False)
    top = sigma[0]
    if top == 0.0:
        return 0
    return int(np.sum(sigma > eps * top))


def wronskian(curve, t, k, mode="numeric"):
    """Matrix (f', f'', ..., f^(k)) at t; numpy array or exact columns."""
    if mode == "exact":
        t0 = _as_fraction(t)
        cols = []
        deriv = curve.velocity_polys()
        for _ in range(k):
            cols.append(tuple(p.eval_at(t0) for p in deriv))
            deriv = [p.derivative("t") for p in deriv]
        return cols
    vel = curve.velocity_jet(t, k - 1)
    mat = np.empty((curve.dim, k))
    for j in range(k):
        for i, comp in enumerate(vel):
            mat[i, j] = comp.derivative_value(j)
    return mat


def _resolve_mode(curve, mode):
    if mode == "auto":
        return "exact" if curve.is_polynomial else "numeric"
    if mode == "exact" and not curve.is_polynomial:
        raise NotFrontalError("exact mode needs polynomial components")
    if mode not in ("exact", "numeric"):
        raise ValueError(f"unknown mode {mode!r}")
    return mode


def _profile_exact(columns, dim, max_order):
    tracker = _ExactRank()
    profile = []
    for k, col in enumerate(columns, start=1):
        if k > max_order:
            break
        r = tracker.add(col)
        while len(profile) < r:
            profile.append(k)
        if r == dim:
            return profile
    raise TypeUndeterminedError(max_order, tracker.rank)


def _profile_numeric(column_fn, dim, max_order, eps):
    cols = []
    profile = []
    for k in range(1, max_order + 1):
        cols.append(column_fn(k))
        r = _numeric_rank(np.array(cols).T, eps)
        while len(profile) < r:
            profile.append(k)
        if r == dim:
            return profile
    raise TypeUndeterminedError(max_order, len(profile))


def detect_type(curve, t, mode="auto", rank_eps=DEFAULT_RANK_EPS, max_order=DEFAULT_ORDER):
    """Curve type at t: the derivative counts where rank(W_k) first hits each i."""
    mode = _resolve_mode(curve, mode)
    if mode == "exact":
        t0 = _as_fraction(t)

        def columns():
            deriv = curve.velocity_polys()
            while True:
                yield tuple(p.eval_at(t0) for p in deriv)
                deriv = [p.derivative("t") for p in deriv]

        profile = _profile_exact(columns(), curve.dim, max_order)
        return CurveType(tuple(profile), float(t0), 0.0, "exact")

    vel = curve.velocity_jet(t, max_order - 1)

    def column(k):
        return [comp.derivative_value(k - 1) for comp in vel]

    profile = _profile_numeric(column, curve.dim, max_order, rank_eps)
    return CurveType(tuple(profile), float(t), rank_eps, "numeric")


def detect_primitive_type(curve, t, mode="auto", rank_eps=DEFAULT_RANK_EPS, max_order=DEFAULT_ORDER):
    """Type of the tangent frame itself, from ranks of (tau, tau', ...).

    In exact mode the ranks are taken on the unnormalized polynomial
    direction field w: the normalized frame differs from w by the smooth
    nonvanishing scalar 1/|w|, an invertible triangular change of columns,
    so the rank profile is identical.
    """
    mode = _resolve_mode(curve, mode)
    if mode == "exact":
        t0 = _as_fraction(t)

        def columns():
            deriv = curve.direction_polys()
            while True:
                yield tuple(p.eval_at(t0) for p in deriv)
                deriv = [p.derivative("t") for p in deriv]

        profile = _profile_exact(columns(), curve.dim, max_order)
        return CurveType(tuple(profile), float(t0), 0.0, "exact")

    tau = curve.tau_jet(t, max_order - 1)

    def column(k):
        return [comp.derivative_value(k - 1) for comp in tau]

    profile = _profile_numeric(column, curve.dim, max_order, rank_eps)
    return CurveType(tuple(profile), float(t), rank_eps, "numeric")


@dataclass(frozen=True)
class TypeShiftReport:
    """Order of the scale factor a, frame type, full type, and whether the
    full type equals the frame type shifted by ord(a)."""

    t: float
    vanishing_order: int
    primitive_type: CurveType
    detected_type: CurveType
    holds: bool


def type_shift_check(curve, t, mode="auto", rank_eps=DEFAULT_RANK_EPS, max_order=DEFAULT_ORDER):
    mode = _resolve_mode(curve, mode)
    primitive = detect_primitive_type(curve, t, mode, rank_eps, max_order)
    if mode == "exact":
        m = curve.scale_poly().multiplicity_at(_as_fraction(t))
    else:
        a = curve.a_jet(t, max_order)
        scale = max(1.0, max(abs(c) for c in a.coeffs))
        m = 0
        while m <= a.order and abs(a.derivative_value(m)) <= 1e-9 * scale:
            m += 1
    budget = max(max_order, primitive.entries[-1] + m + 1)
    detected = detect_type(curve, t, mode, rank_eps, budget)
    expected = tuple(b + m for b in primitive.entries)
    return TypeShiftReport(
        t=float(t),
        vanishing_order=m,
        primitive_type=primitive,
        detected_type=detected,
        holds=detected.entries == expected,
    )


def find_inflections(curve, samples=2001, kappa_tol=1e-7, refine_steps=200):
    """Parameters where the tangent frame is singular (|tau'| ~ 0).

    Scans |tau'|^2 on a grid and refines each interior local minimum by
    bisection on its derivative; since kappa^2 = |tau'|^2 for a unit frame,
    hits below kappa_tol are inflection points.
    """

    def q_value(t):
        tau = curve.tau_jet(t, 1)
        return sum(j.derivative_value(1) ** 2 for j in tau)

    def q_prime(t):
        tau = curve.tau_jet(t, 2)
        taup = [j.derivative() for j in tau]
        q = jet_norm_sq(taup)
        return q.derivative_value(1)

    ts = curve.sample_ts(samples)
    qs = [q_value(t) for t in ts]
    found = []

    def consider(t):
        if q_value(t) < kappa_tol * kappa_tol:
            found.append(t)

    consider(ts[0])
    consider(ts[-1])
    for i in range(1, len(ts) - 1):
        if qs[i] <= qs[i - 1] and qs[i] <= qs[i + 1]:
            lo, hi = ts[i - 1], ts[i + 1]
            dlo, dhi = q_prime(lo), q_prime(hi)
            if dlo < 0.0 < dhi:
                for _ in range(refine_steps):
                    mid = 0.5 * (lo + hi)
                    if hi - lo < 1e-15 * max(1.0, abs(mid)):
                        break
                    if q_prime(mid) < 0.0:
                        lo = mid
                    else:
                        hi = mid
                consider(0.5 * (lo + hi))
            else:
                consider(ts[i])

    found.sort()
    spacing = (curve.domain[1] - curve.domain[0]) / samples
    out = []
    for t in found:
        if not out or abs(t - out[-1]) > spacing:
            out.append(t)
    return out


# ---------------------------------------------------------------------------
# Curve-spec JSON and builtin fixtures
# ---------------------------------------------------------------------------


def _unit_tangent_fn(components):
    exprs = [parse_expression(c) for c in components]

    def tau_fn(t, order):
        v = [e.jet(t, order + 1).derivative() for e in exprs]
        inv = inverse_norm(v)
        return [c * inv for c in v]

    return tau_fn


def torsion_curvature_ratio_jet(tau_fn, t, order):
    """Jet of ell/kappa for a 3-space tangent frame, via the pointwise
    normal nu = tau x mu.  Needs tau jets three orders deeper."""
    tau = tau_fn(t, order + 3)
    taup = [j.derivative() for j in tau]
    kappa = jet_norm_sq(taup).sqrt()
    inv_kappa = 1 / kappa
    mu = [c * inv_kappa for c in taup]
    mup = [j.derivative() for j in mu]
    nu = vec.cross3(tau, mu)
    ell = vec.dot(mup, nu)
    return (ell * (1 / kappa.truncated(ell.order))).truncated(order)


def cone_fixture(domain=(0.3, 1.5), name="cone"):
    """Frontal curve whose unit-offset parallel degenerates to a cone.

    The tangent frame is the unit tangent of a fixed space curve with a
    nonconstant torsion-to-curvature ratio; the scale factor is chosen as
    a = -(ell/kappa)' so that the offset directrix has zero velocity.  The
    sign convention matches the default transported normal seed.
    """
    tau_fn = _unit_tangent_fn(["t", "t^2/2", "t^4/12"])
    t0 = float(domain[0])
    tau0_j = tau_fn(t0, 1)
    tau0 = tuple(j.value for j in tau0_j)
    mu0 = vec.normalize([j.derivative_value(1) for j in tau0_j])
    seed = vec.normal_seed(tau0, mu0, 1)[0]
    sigma = 1.0 if vec.dot(seed, vec.cross3(tau0, mu0)) >= 0 else -1.0

    def a_fn(t, order):
        ratio = torsion_curvature_ratio_jet(tau_fn, t, order + 1)
        return -(sigma * ratio.derivative())

    return DataCurve(a_fn, tau_fn, (0.0, 0.0, 0.0), domain, name=name)


def _component_builtin(components, default_domain):
    def build(name, domain=None):
        return ComponentCurve(components, domain or default_domain, name=name)

    return build


BUILTIN_CURVES = {
    "mond": _component_builtin(["t", "t^3/6", "t^4/24"], (-1.0, 1.0)),
    "helix": _component_builtin(["cos(t)", "sin(t)", "t"], (0.0, 6.3)),
    "cubic": _component_builtin(["t", "t^2/2", "t^3/6"], (-1.0, 1.0)),
    "csw-directrix": _component_builtin(["t^3", "t^4", "t^5", "t^6"], (-1.0, 1.0)),
    "usw-directrix": _component_builtin(["t^2", "t^3", "t^4", "t^6 + t^7"], (-1.0, 1.0)),
    "moment-r3": _component_builtin(["t", "t^2", "t^3"], (-1.0, 1.0)),
    "moment-r4": _component_builtin(["t", "t^2", "t^3", "t^4"], (-1.0, 1.0)),
    "cone": lambda name, domain=None: cone_fixture(domain=domain or (0.3, 1.5), name=name),
}


def builtin_curve(name, domain=None):
    try:
        factory = BUILTIN_CURVES[name]
    except KeyError:
        known = ", ".join(sorted(BUILTIN_CURVES))
        raise CurveSpecError(f"unknown builtin curve {name!r} (known: {known})") from None
    return factory(name, domain)


def curve_from_spec(spec):
    """Build a curve from its JSON spec dict.

    Either {"builtin": name} or {"components": [...], "domain": [a, b]},
    optionally with a "dim" cross-check.
    """
    if not isinstance(spec, dict):
        raise CurveSpecError(f"curve spec must be an object, got {type(spec).__name__}")
    if "builtin" in spec:
        domain = None
        if "domain" in spec:
            lo, hi = spec["domain"]
            domain = (float(lo), float(hi))
        return builtin_curve(spec["builtin"], domain)
    if "components" not in spec:
        raise CurveSpecError('curve spec needs "components" or "builtin"')
    components = spec["components"]
    if not isinstance(components, list) or not all(isinstance(c, str) for c in components):
        raise CurveSpecError('"components" must be a list of expression strings')
    domain = spec.get("domain", [-1.0, 1.0])
    if not (isinstance(domain, list) and len(domain) == 2):
        raise CurveSpecError('"domain" must be [t_start, t_end]')
    if "dim" in spec and spec["dim"] != len(components):
        raise CurveSpecError(
            f'"dim" is {spec["dim"]} but {len(components)} components were given'
        )
    try:
        return ComponentCurve(components, tuple(domain), name=spec.get("name"))
    except (ValueError, NotFrontalError) as exc:
        raise CurveSpecError(str(exc)) from exc
