"""Adapted moving frames along frontal curves.

The frame {tau, mu, nu_1..nu_{p-1}} satisfies tau' = kappa*mu,
mu' = -kappa*tau + sum ell_i*nu_i, nu_i' = -ell_i*mu.  tau, mu and kappa
are pointwise jet computations; the normal frame is parallel-transported
by RK4 with per-step modified Gram-Schmidt, and off-grid values are
continued from the nearest node through the transport ODE's own Taylor
recurrence, so invariant jets carry no finite-difference noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import vectors as vec
from .curve import DEFAULT_RANK_EPS, FrontalCurve, _as_fraction, detect_type
from .jets import DEFAULT_ORDER, Jet, inverse_norm, jet_norm_sq, univariate_divexact, univariate_gcd_list

# |tau'| below this is treated as an inflection; the offset/directrix
# machinery aborts there instead of regularizing.
INFLECTION_TOL = 1e-6
CONTINUATION_ORDER = 8


class InflectionError(RuntimeError):
    """The frame degenerates (kappa ~ 0) at the reported parameter."""

    def __init__(self, t, kappa=None):
        self.t = t
        self.kappa = kappa
        detail = f" (kappa={kappa:.3e})" if kappa is not None else ""
        super().__init__(f"inflection point at t={t}{detail}")


@dataclass(frozen=True)
class FrameState:
    t: float
    tau: tuple
    mu: tuple
    nu: tuple  # tuple of p-1 unit normal vectors
    kappa: float
    ell: tuple


@dataclass(frozen=True)
class FrameJets:
    """Jets of the frame at one parameter; orders step down as noted."""

    t: float
    tau: list      # order n
    mu: list       # order n-1
    kappa: Jet     # order n-1
    nu: list       # list of vectors of jets, order n-1
    ell: list      # order n-2
    ratio: list    # ell_i/kappa, order n-2
    ratio_prime: list  # (ell_i/kappa)', order n-3


def _point_jets(curve, t, tau_order, tol=INFLECTION_TOL):
    """tau jets plus mu and kappa jets one order lower; inflection-checked."""
    tau = curve.tau_jet(t, tau_order)
    taup = [j.derivative() for j in tau]
    n2 = jet_norm_sq(taup)
    if n2.value < tol * tol:
        raise InflectionError(t, math.sqrt(max(n2.value, 0.0)))
    kappa = n2.sqrt()
    inv = 1 / kappa
    mu = [c * inv for c in taup]
    return tau, mu, kappa


def principal_normal(curve, t, tol=INFLECTION_TOL):
    """(mu, kappa) with mu = tau'/|tau'| and kappa = |tau'| > 0."""
    _, mu, kappa = _point_jets(curve, t, 1, tol)
    return tuple(j.value for j in mu), kappa.value


def _nu_taylor(mu_jets, nu_value):
    """Taylor coefficients of a transported normal from its value at the
    basepoint, via nu' = -(mu'.nu) mu; returns one coefficient vector per
    order up to the mu jet order."""
    dim = len(mu_jets)
    m = mu_jets[0].order
    M = [[mu_jets[i].coeffs[k] for i in range(dim)] for k in range(m + 1)]
    P = [[(k + 1) * M[k + 1][i] for i in range(dim)] for k in range(m)]
    V = [list(nu_value)]
    L = []
    for k in range(m):
        lk = 0.0
        for a in range(k + 1):
            if a < len(P):
                lk += sum(P[a][i] * V[k - a][i] for i in range(dim))
        L.append(lk)
        nxt = []
        for i in range(dim):
            rhs = 0.0
            for a in range(k + 1):
                rhs += L[a] * M[k - a][i]
            nxt.append(-rhs / (k + 1))
        V.append(nxt)
    return V


def _eval_coeff_vectors(V, h):
    dim = len(V[0])
    out = []
    for i in range(dim):
        acc = V[-1][i]
        for k in range(len(V) - 2, -1, -1):
            acc = acc * h + V[k][i]
        out.append(acc)
    return tuple(out)


class FrameTrace:
    """Transported frame data over a grid, with off-grid continuation."""

    def __init__(self, curve, ts, taus, mus, nus, kappas, ells, defects, tol):
        self.curve = curve
        self.ts = list(ts)
        self.taus = taus
        self.mus = mus
        self.nus = nus  # [node][i] -> vector
        self.kappas = kappas
        self.ells = ells
        self.defects = defects
        self.drift = max(defects) if defects else 0.0
        self.tol = tol
        self._state_cache = {}

    @property
    def t_range(self):
        return (self.ts[0], self.ts[-1])

    @property
    def normal_count(self):
        return len(self.nus[0])

    def _nearest_index(self, t):
        h = (self.ts[-1] - self.ts[0]) / (len(self.ts) - 1)
        i = int(round((t - self.ts[0]) / h))
        return min(max(i, 0), len(self.ts) - 1)

    def nu_at(self, t):
        """Transported normal vectors at t, continued from the nearest node."""
        i = self._nearest_index(t)
        ti = self.ts[i]
        if t == ti:
            return self.nus[i]
        _, mu, _ = _point_jets(self.curve, ti, CONTINUATION_ORDER + 1, self.tol)
        h = t - ti
        return tuple(
            _eval_coeff_vectors(_nu_taylor(mu, nu0), h) for nu0 in self.nus[i]
        )

    def state_at(self, t):
        cached = self._state_cache.get(t)
        if cached is not None:
            return cached
        nus = self.nu_at(t)
        tau, mu, kappa = _point_jets(self.curve, t, 2, self.tol)
        mu_val = tuple(j.value for j in mu)
        mup_val = tuple(j.derivative_value(1) for j in mu)
        ells = tuple(vec.dot(mup_val, nu) for nu in nus)
        state = FrameState(
            t=float(t),
            tau=tuple(j.value for j in tau),
            mu=mu_val,
            nu=tuple(tuple(v) for v in nus),
            kappa=kappa.value,
            ell=ells,
        )
        self._state_cache[t] = state
        return state

    def frame_jets(self, t, order=DEFAULT_ORDER):
        """Frame jets at t; tau to ``order``, invariants stepping down.

        Orders below 3 are raised to 3 so that (ell/kappa)' always exists.
        """
        order = max(order, 3)
        tau, mu, kappa = _point_jets(self.curve, t, order, self.tol)
        nus = self.nu_at(t)
        mup = [j.derivative() for j in mu]
        nu_jets = []
        ell_jets = []
        ratio = []
        ratio_prime = []
        for nu0 in nus:
            V = _nu_taylor(mu, nu0)
            jets = [Jet(float(t), [V[k][i] for k in range(len(V))]) for i in range(len(nu0))]
            nu_jets.append(jets)
            ell = vec.dot(mup, jets)
            ell_jets.append(ell)
            q = ell / kappa.truncated(ell.order)
            ratio.append(q)
            ratio_prime.append(q.derivative())
        return FrameJets(
            t=float(t),
            tau=tau,
            mu=mu,
            kappa=kappa,
            nu=nu_jets,
            ell=ell_jets,
            ratio=ratio,
            ratio_prime=ratio_prime,
        )

    def invariant_jets(self, t, order=4):
        """kappa, ell, ell/kappa and (ell/kappa)' jets, all at >= ``order``."""
        return self.frame_jets(t, order + 3)

    def to_csv(self, path):
        dim = self.curve.dim
        cols = ["t", "kappa"]
        cols += [f"ell_{i + 1}" for i in range(self.normal_count)]
        cols += [f"tau_{j}" for j in range(dim)]
        cols += [f"mu_{j}" for j in range(dim)]
        for i in range(self.normal_count):
            cols += [f"nu_{i + 1}_{j}" for j in range(dim)]
        cols.append("drift")
        lines = [",".join(cols)]
        for k, t in enumerate(self.ts):
            row = [repr(t), repr(self.kappas[k])]
            row += [repr(x) for x in self.ells[k]]
            row += [repr(x) for x in self.taus[k]]
            row += [repr(x) for x in self.mus[k]]
            for nu in self.nus[k]:
                row += [repr(x) for x in nu]
            row.append(repr(self.defects[k]))
            lines.append(",".join(row))
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
        return path


def transport_bishop(curve, grid=None, nu0=None, steps=None, points_per_unit=2001, tol=INFLECTION_TOL):
    """Parallel-transport an orthonormal normal frame along the curve.

    RK4 on nu' = -(mu'.nu) mu with modified Gram-Schmidt against the fresh
    {tau, mu} after every step.  The recorded per-step defect is measured
    before re-orthonormalization, so the reported drift is honest.
    """
    if curve.dim < 3:
        raise ValueError("normal transport needs ambient dimension >= 3")
    if grid is None:
        t0, t1 = curve.domain
        n = (steps + 1) if steps else max(17, int(math.ceil((t1 - t0) * points_per_unit)) + 1)
        h = (t1 - t0) / (n - 1)
        grid = [t0 + i * h for i in range(n)]
    else:
        grid = [float(t) for t in grid]
        if len(grid) < 2:
            raise ValueError("transport grid needs at least two points")

    def mu_and_prime(t):
        _, mu, _ = _point_jets(curve, t, 2, tol)
        return (
            tuple(j.value for j in mu),
            tuple(j.derivative_value(1) for j in mu),
        )

    def tau_val(t):
        return tuple(j.value for j in curve.tau_jet(t, 0))

    count = curve.dim - 2
    tau0 = tau_val(grid[0])
    mu0, mup0 = mu_and_prime(grid[0])
    if nu0 is None:
        rows = vec.normal_seed(tau0, mu0, count)
    else:
        rows = [tuple(float(x) for x in v) for v in nu0]
        if len(rows) != count:
            raise ValueError(f"need {count} initial normal vectors, got {len(rows)}")
        if vec.orthonormality_defect([tau0, mu0, *rows]) > 1e-8:
            raise ValueError("initial normal frame is not orthonormal to the tangent plane")

    def field(mu, mup, rows):
        out = []
        for nu in rows:
            ell = vec.dot(mup, nu)
            out.append(tuple(-ell * m for m in mu))
        return out

    ts, taus, mus, nus, kappas, ells, defects = [], [], [], [], [], [], []

    def record(t, tau, mu, mup, kappa, rows, defect):
        ts.append(t)
        taus.append(tau)
        mus.append(mu)
        nus.append(tuple(rows))
        kappas.append(kappa)
        ells.append(tuple(vec.dot(mup, nu) for nu in rows))
        defects.append(defect)

    def kappa_val(t):
        _, _, kappa = _point_jets(curve, t, 1, tol)
        return kappa.value

    record(grid[0], tau0, mu0, mup0, kappa_val(grid[0]), rows, vec.orthonormality_defect([tau0, mu0, *rows]))
    mu_cur, mup_cur = mu0, mup0
    for i in range(len(grid) - 1):
        t, t_next = grid[i], grid[i + 1]
        h = t_next - t
        t_mid = t + 0.5 * h
        mu_m, mup_m = mu_and_prime(t_mid)
        mu_n, mup_n = mu_and_prime(t_next)
        k1 = field(mu_cur, mup_cur, rows)
        k2 = field(mu_m, mup_m, [vec.add(r, vec.scale(k, 0.5 * h)) for r, k in zip(rows, k1)])
        k3 = field(mu_m, mup_m, [vec.add(r, vec.scale(k, 0.5 * h)) for r, k in zip(rows, k2)])
        k4 = field(mu_n, mup_n, [vec.add(r, vec.scale(k, h)) for r, k in zip(rows, k3)])
        rows = [
            vec.add(r, vec.scale(vec.add(vec.add(a, vec.scale(vec.add(b, c), 2.0)), d), h / 6.0))
            for r, a, b, c, d in zip(rows, k1, k2, k3, k4)
        ]
        tau_n = tau_val(t_next)
        defect = vec.orthonormality_defect([tau_n, mu_n, *rows])
        rows = vec.mgs(rows, against=(tau_n, mu_n), drop_tol=1e-6)
        if len(rows) != count:
            raise RuntimeError(f"normal frame collapsed during transport near t={t_next}")
        record(t_next, tau_n, mu_n, mup_n, kappa_val(t_next), rows, defect)
        mu_cur, mup_cur = mu_n, mup_n

    return FrameTrace(curve, ts, taus, mus, nus, kappas, ells, defects, tol)


# ---------------------------------------------------------------------------
# Curvature vanishing order
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KappaOrderReport:
    t: float
    kappa_order: int
    type_gap: int  # a2 - a1 - 1
    matches: bool
    mode: str
    detected_type: tuple


def kappa_order_check(curve, t0, mode="auto", rank_eps=DEFAULT_RANK_EPS, max_order=DEFAULT_ORDER):
    """Vanishing order of kappa at t0 against the type gap a2 - a1 - 1.

    kappa^2 = (|w'|^2 |w|^2 - (w.w')^2) / |w|^4 is rational in t for
    polynomial curves, so the order comes out exactly there; numeric mode
    reads it off a |tau'|^2 jet.
    """
    if mode == "auto":
        mode = "exact" if curve.is_polynomial else "numeric"
    ct = detect_type(curve, t0, mode, rank_eps, max_order)
    gap = ct.entries[1] - ct.entries[0] - 1
    if mode == "exact":
        w = curve.direction_polys()
        wp = [p.derivative("t") for p in w]
        n2 = sum((p * p for p in w[1:]), w[0] * w[0])
        np2 = sum((p * p for p in wp[1:]), wp[0] * wp[0])
        wwp = sum((a * b for a, b in zip(w[1:], wp[1:])), w[0] * wp[0])
        numerator = np2 * n2 - wwp * wwp
        if numerator.is_zero:
            raise InflectionError(float(t0), 0.0)
        m = numerator.multiplicity_at(_as_fraction(t0))
        if m % 2:
            raise RuntimeError(f"kappa^2 vanishes to odd order {m}; not a square")
        order = m // 2
    else:
        tau = curve.tau_jet(t0, max_order + 1)
        taup = [j.derivative() for j in tau]
        q = jet_norm_sq(taup)
        scale = max(abs(c) for c in q.coeffs)
        if scale == 0.0:
            raise InflectionError(float(t0), 0.0)
        k = 0
        while abs(q.coeffs[k]) <= 1e-9 * scale:
            k += 1
        if k % 2:
            raise RuntimeError(f"|tau'|^2 jet starts at odd order {k}")
        order = k // 2
    return KappaOrderReport(
        t=float(t0),
        kappa_order=order,
        type_gap=gap,
        matches=order == gap,
        mode=mode,
        detected_type=ct.entries,
    )


# ---------------------------------------------------------------------------
# Pointwise unit normal field for curves in 3-space
# ---------------------------------------------------------------------------


class NormalField:
    """Unit normal to the tangent surface of a curve in 3-space.

    For polynomial curves the direction is the content-free cross product
    w x w', which stays smooth across inflection points; otherwise it is
    tau x mu and inflection points raise.
    """

    def __init__(self, curve, tol=INFLECTION_TOL):
        if curve.dim != 3:
            raise ValueError("pointwise normal fields only exist in 3-space")
        self.curve = curve
        self.tol = tol
        self._polys = None
        if curve.is_polynomial:
            w = curve.direction_polys()
            wp = [p.derivative("t") for p in w]
            cross = list(vec.cross3(w, wp))
            if all(p.is_zero for p in cross):
                raise ValueError("tangent direction is constant; the normal is undetermined")
            content = univariate_gcd_list(cross)
            reduced = [
                p if p.is_zero else univariate_divexact(p, content) for p in cross
            ]
            for p in reduced:
                if p.is_zero:
                    continue
                low = min(e[0] for e in p.terms)
                if p.coefficient(low) < 0:
                    reduced = [-q for q in reduced]
                break
            self._polys = reduced

    def jet(self, t, order=DEFAULT_ORDER):
        if self._polys is not None:
            n = [p.jet(t, order) for p in self._polys]
            inv = inverse_norm(n)
            return [c * inv for c in n]
        tau, mu, _ = _point_jets(self.curve, t, order + 1, self.tol)
        return list(vec.cross3(tau, mu))

    def __call__(self, t):
        return tuple(j.value for j in self.jet(t, 0))

    @property
    def direction_polys(self):
        return None if self._polys is None else list(self._polys)


def unit_normal_field(curve, tol=INFLECTION_TOL):
    return NormalField(curve, tol)
