"""Tangent developables, parallels, directrix curves and singular loci.

The tangent surface of a frontal curve is (t, s) -> f(t) + s*tau(t); a
parallel offsets it by a fixed combination of transported normals.  The
directrix of a parallel is the frontal curve g with the same tangent frame
whose tangent surface reproduces the parallel after the ruling shift
s -> s - sum_i r_i ell_i/kappa; building g independently (its position is
re-integrated from the velocity formula) turns that statement into a
checkable equality rather than a tautology.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import vectors as vec
from .curve import DataCurve
from .frame import FrameTrace
from .jets import Jet

JACOBIAN_STEP = 1e-5
DIRECTRIX_NODES_PER_UNIT = 501


@dataclass(frozen=True)
class ParallelSpec:
    """Offset coefficients r and the frame trace that carries the normals."""

    r: tuple
    trace: FrameTrace

    def __post_init__(self):
        object.__setattr__(self, "r", tuple(float(x) for x in self.r))
        if any(not np.isfinite(x) for x in self.r):
            raise ValueError(f"offset coefficients must be finite, got {self.r}")
        if len(self.r) != self.trace.normal_count:
            raise ValueError(
                f"need {self.trace.normal_count} offset coefficients, got {len(self.r)}"
            )


class ParametricSurface:
    """Surface (t, s) -> R^dim with pointwise and jet-free derivative access.

    The Jacobian is taken by central differences of the point map on
    purpose: the singular-locus verification must not reuse the structure
    equations it is checking.
    """

    def __init__(self, dim, point_fn, kind, t_range, s_range=(-1.0, 1.0), dds_fn=None,
                 jet_t_fn=None, jet_s_fn=None, provenance=None):
        self.dim = dim
        self._point_fn = point_fn
        self.kind = kind
        self.t_range = (float(t_range[0]), float(t_range[1]))
        self.s_range = (float(s_range[0]), float(s_range[1]))
        self._dds_fn = dds_fn
        self._jet_t_fn = jet_t_fn
        self._jet_s_fn = jet_s_fn
        self.provenance = provenance or {}

    def point(self, t, s):
        return self._point_fn(t, s)

    def jet_t(self, t, s, order=4):
        """Jets of t -> F(t, s) at fixed s."""
        if self._jet_t_fn is None:
            raise NotImplementedError(f"{self.kind} surface carries no t-jets")
        return self._jet_t_fn(t, s, order)

    def jet_s(self, t, s, order=4):
        """Jets of s -> F(t, s) at fixed t."""
        if self._jet_s_fn is None:
            raise NotImplementedError(f"{self.kind} surface carries no s-jets")
        return self._jet_s_fn(t, s, order)

    def jacobian(self, t, s, step=JACOBIAN_STEP):
        pt_plus = self._point_fn(t + step, s)
        pt_minus = self._point_fn(t - step, s)
        col_t = tuple((a - b) / (2.0 * step) for a, b in zip(pt_plus, pt_minus))
        if self._dds_fn is not None:
            col_s = self._dds_fn(t, s)
        else:
            ps_plus = self._point_fn(t, s + step)
            ps_minus = self._point_fn(t, s - step)
            col_s = tuple((a - b) / (2.0 * step) for a, b in zip(ps_plus, ps_minus))
        return col_t, col_s

    def singular_values(self, t, s, step=JACOBIAN_STEP):
        """(sigma_max, sigma_min) of the 2-column Jacobian."""
        col_t, col_s = self.jacobian(t, s, step)
        sigma = np.linalg.svd(np.column_stack([col_t, col_s]), compute_uv=False)
        return float(sigma[0]), float(sigma[1])

    def grid_ts(self, nt):
        t0, t1 = self.t_range
        return [t0 + i * (t1 - t0) / (nt - 1) for i in range(nt)]

    def grid_ss(self, ns):
        s0, s1 = self.s_range
        return [s0 + j * (s1 - s0) / (ns - 1) for j in range(ns)]


def _ruling_jets(curve, offset_jet_fn=None):
    """Jet providers for ruled surfaces f(t) + s*tau(t) + offset(t).

    t-jets combine the curve jets; s-jets are linear with direction tau.
    """

    def jet_t(t, s, order):
        f = curve.position_jet(t, order)
        tau = curve.tau_jet(t, order)
        out = [fi + taui * s for fi, taui in zip(f, tau)]
        if offset_jet_fn is not None:
            out = [a + o for a, o in zip(out, offset_jet_fn(t, order))]
        return out

    def jet_s(t, s, order):
        base = jet_t(t, s, 0)
        tau = curve.tau(t)
        zeros = (0.0,) * max(order - 1, 0)
        return [
            Jet(float(s), (b.value, v) + zeros) for b, v in zip(base, tau)
        ]

    return jet_t, jet_s


def tangent_surface(curve, s_range=(-1.0, 1.0)):
    """Ruled surface of tangent lines: (t, s) -> f(t) + s*tau(t)."""

    def point(t, s):
        f = curve.position(t)
        tau = curve.tau(t)
        return tuple(x + s * v for x, v in zip(f, tau))

    jet_t, jet_s = _ruling_jets(curve)
    return ParametricSurface(
        curve.dim,
        point,
        kind="tangent_surface",
        t_range=curve.domain,
        s_range=s_range,
        dds_fn=lambda t, s: curve.tau(t),
        jet_t_fn=jet_t,
        jet_s_fn=jet_s,
        provenance={"curve": curve},
    )


def parallel_surface(base, spec, s_range=None):
    """Parallel of a tangent surface along the transported normal frame."""
    if isinstance(base, ParametricSurface):
        curve = base.provenance.get("curve")
        if curve is None:
            raise ValueError("base surface does not carry its generating curve")
        if s_range is None:
            s_range = base.s_range
    else:
        curve = base
    if s_range is None:
        s_range = (-1.0, 1.0)
    trace = spec.trace

    def offset(t):
        state = trace.state_at(t)
        off = (0.0,) * curve.dim
        for ri, nu in zip(spec.r, state.nu):
            off = vec.add(off, vec.scale(nu, ri))
        return off

    moving = any(x != 0.0 for x in spec.r)

    def point(t, s):
        f = curve.position(t)
        tau = curve.tau(t)
        if not moving:
            return tuple(x + s * v for x, v in zip(f, tau))
        off = offset(t)
        return tuple(x + s * v + o for x, v, o in zip(f, tau, off))

    def offset_jets(t, order):
        jets = trace.frame_jets(t, order + 1)
        out = None
        for ri, nu in zip(spec.r, jets.nu):
            scaled = [c * ri for c in nu]
            out = scaled if out is None else [a + b for a, b in zip(out, scaled)]
        return [c.truncated(order) for c in out]

    jet_t, jet_s = _ruling_jets(curve, offset_jets if moving else None)
    return ParametricSurface(
        curve.dim,
        point,
        kind="parallel",
        t_range=trace.t_range,
        s_range=s_range,
        dds_fn=lambda t, s: curve.tau(t),
        jet_t_fn=jet_t,
        jet_s_fn=jet_s,
        provenance={"curve": curve, "spec": spec},
    )


def parallel_surface_pointwise(curve, r, normal_field, s_range=(-1.0, 1.0)):
    """Parallel built from a pointwise unit normal (curves in 3-space only).

    This stays well-defined across inflection points, where transported
    frames do not exist; it is how surfaces with inflectional directrices
    still get meshed.
    """

    def point(t, s):
        f = curve.position(t)
        tau = curve.tau(t)
        nu = normal_field(t)
        return tuple(x + s * v + r * n for x, v, n in zip(f, tau, nu))

    def offset_jets(t, order):
        return [c * r for c in normal_field.jet(t, order)]

    jet_t, jet_s = _ruling_jets(curve, offset_jets)
    return ParametricSurface(
        curve.dim,
        point,
        kind="parallel",
        t_range=curve.domain,
        s_range=s_range,
        dds_fn=lambda t, s: curve.tau(t),
        jet_t_fn=jet_t,
        jet_s_fn=jet_s,
        provenance={"curve": curve, "r": (float(r),), "normal_field": "pointwise"},
    )


# ---------------------------------------------------------------------------
# Singular locus
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SingularLocusResult:
    """Graph s*(t) of the singular locus with independent SVD verification."""

    ts: tuple
    s_star: tuple
    sigma_min: tuple      # smallest singular value on the locus
    sigma_scale: tuple    # largest singular value on the locus
    sigma_min_offset: tuple  # smallest singular value at s* +/- offset (worst side)
    offset: float


def singular_locus(surface, ts=None, offset=0.05, nt=101):
    spec = surface.provenance.get("spec")
    if spec is None:
        raise ValueError("singular locus needs a parallel with a frame trace")
    trace = spec.trace
    if ts is None:
        ts = surface.grid_ts(nt)
    s_star, smin, sscale, soff = [], [], [], []
    for t in ts:
        state = trace.state_at(t)
        star = sum(ri * ell for ri, ell in zip(spec.r, state.ell)) / state.kappa
        hi, lo = surface.singular_values(t, star)
        s_star.append(star)
        smin.append(lo)
        sscale.append(hi)
        worst = min(
            surface.singular_values(t, star + offset)[1],
            surface.singular_values(t, star - offset)[1],
        )
        soff.append(worst)
    return SingularLocusResult(
        ts=tuple(ts),
        s_star=tuple(s_star),
        sigma_min=tuple(smin),
        sigma_scale=tuple(sscale),
        sigma_min_offset=tuple(soff),
        offset=float(offset),
    )


def locus_to_csv(result, path):
    lines = ["t,s_star,sigma_min,sigma_scale,sigma_min_offset"]
    for row in zip(result.ts, result.s_star, result.sigma_min, result.sigma_scale, result.sigma_min_offset):
        lines.append(",".join(repr(x) for x in row))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


# ---------------------------------------------------------------------------
# Directrix
# ---------------------------------------------------------------------------


def directrix_point_formula(curve, spec, t):
    """g(t) = f(t) + sum_i r_i (ell_i/kappa tau + nu_i), evaluated pointwise."""
    state = spec.trace.state_at(t)
    g = curve.position(t)
    for ri, ell, nu in zip(spec.r, state.ell, state.nu):
        g = vec.add(g, vec.scale(state.tau, ri * ell / state.kappa))
        g = vec.add(g, vec.scale(nu, ri))
    return g


def directrix(curve, spec, name=None):
    """Directrix of the parallel as an independent frontal curve.

    Returns the curve (b, tau) with b = a + sum_i r_i (ell_i/kappa)'; the
    base point comes from the offset formula at the start of the trace and
    the position is re-integrated from b*tau, so comparing the parallel
    with the tangent surface of the result exercises the velocity formula
    instead of restating it.
    """
    trace = spec.trace
    t_start, t_end = trace.t_range

    def b_fn(t, order):
        jets = trace.frame_jets(t, order + 3)
        b = curve.a_jet(t, order)
        for ri, rp in zip(spec.r, jets.ratio_prime):
            b = b + rp.truncated(order) * ri
        return b

    f0 = directrix_point_formula(curve, spec, t_start)
    return DataCurve(
        b_fn,
        curve.tau_jet,
        f0,
        (t_start, t_end),
        name=name or (f"{curve.name}-directrix" if curve.name else "directrix"),
        nodes_per_unit=DIRECTRIX_NODES_PER_UNIT,
        step_order=5,
    )


def directrix_velocity_sup(curve, spec, samples=201):
    """sup |b(t)| over the trace range; ~0 flags conical degeneration."""
    trace = spec.trace
    t0, t1 = trace.t_range
    worst = 0.0
    for i in range(samples):
        t = t0 + i * (t1 - t0) / (samples - 1)
        jets = trace.frame_jets(t, 3)
        b = curve.a_jet(t, 0).value + sum(
            ri * rp.value for ri, rp in zip(spec.r, jets.ratio_prime)
        )
        worst = max(worst, abs(b))
    return worst


@dataclass(frozen=True)
class EquivalenceReport:
    """Result of comparing a parallel against the shifted tangent surface
    of its independently integrated directrix."""

    sup_diff: float
    velocity_residual: float
    tol: float
    passes: bool
    grid: tuple


def parallel_equals_tangent_of_directrix(curve, spec, nt=101, ns=101, s_range=(-1.0, 1.0), tol=1e-7):
    trace = spec.trace
    g = directrix(curve, spec)
    par = parallel_surface(curve, spec, s_range=s_range)
    t0, t1 = trace.t_range
    ts = [t0 + i * (t1 - t0) / (nt - 1) for i in range(nt)]
    ss = [s_range[0] + j * (s_range[1] - s_range[0]) / (ns - 1) for j in range(ns)]
    sup = 0.0
    for t in ts:
        state = trace.state_at(t)
        star = sum(ri * ell for ri, ell in zip(spec.r, state.ell)) / state.kappa
        gt = g.position(t)
        tau = state.tau
        for s in ss:
            p = par.point(t, s)
            q = tuple(x + (s - star) * v for x, v in zip(gt, tau))
            sup = max(sup, vec.norm(vec.sub(p, q)))

    # velocity formula |g' - b tau| with g' from a 5-point stencil of the
    # pointwise offset formula (independent of b)
    h = (t1 - t0) / (len(trace.ts) - 1)
    vres = 0.0
    for t in ts:
        if t - 2 * h < t0 or t + 2 * h > t1:
            continue
        pts = [directrix_point_formula(curve, spec, t + k * h) for k in (-2, -1, 1, 2)]
        deriv = tuple(
            (pts[0][i] - 8.0 * pts[1][i] + 8.0 * pts[2][i] - pts[3][i]) / (12.0 * h)
            for i in range(curve.dim)
        )
        jets = trace.frame_jets(t, 3)
        b = curve.a_jet(t, 0).value + sum(
            ri * rp.value for ri, rp in zip(spec.r, jets.ratio_prime)
        )
        tau = trace.state_at(t).tau
        vres = max(vres, vec.norm(vec.sub(deriv, vec.scale(tau, b))))

    return EquivalenceReport(
        sup_diff=sup,
        velocity_residual=vres,
        tol=tol,
        passes=sup < tol and vres < tol,
        grid=(nt, ns),
    )


# ---------------------------------------------------------------------------
# Mesh export
# ---------------------------------------------------------------------------


def export_obj(surface, path, nt=201, ns=201):
    """Triangulated OBJ mesh of the surface; 3-space surfaces only.

    Row-major vertices over the (t, s) grid, two counterclockwise
    triangles per cell; floats are written with shortest round-trip repr
    so identical inputs give byte-identical files.
    """
    if surface.dim != 3:
        raise ValueError(f"OBJ export needs a surface in 3-space, got dim={surface.dim}")
    ts = surface.grid_ts(nt)
    ss = surface.grid_ss(ns)
    lines = [f"# parametric surface mesh kind={surface.kind} nt={nt} ns={ns}"]
    for t in ts:
        for s in ss:
            x, y, z = surface.point(t, s)
            lines.append(f"v {x!r} {y!r} {z!r}")
    for i in range(nt - 1):
        for j in range(ns - 1):
            v00 = i * ns + j + 1
            v10 = (i + 1) * ns + j + 1
            v11 = (i + 1) * ns + j + 2
            v01 = i * ns + j + 2
            lines.append(f"f {v00} {v10} {v11}")
            lines.append(f"f {v00} {v11} {v01}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    return path
