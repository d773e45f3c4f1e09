"""Machine-checked algebra behind the surface catalog, plus numeric
structure-equation consistency.

Every algebraic check here is an exact identity of rational polynomials:
the primitive-sequence identities, the hyperplane-envelope derivation of
the cuspidal swallowtail normal form, and the reduction of the sextic
curve family to the embedded/unfurled swallowtail.  A failure is an
implementation or transcription bug, never a tolerance issue.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import vectors as vec
from .classify import NORMAL_FORMS, SingularityName, swallowtail_primitive
from .curve import curve_from_components
from .frame import transport_bishop
from .jets import RationalPoly


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    details: str
    data: dict | None = None


@dataclass
class SuiteReport:
    suite: str
    results: list = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self):
        return all(r.passed for r in self.results)

    def to_dict(self):
        return {
            "suite": self.suite,
            "passed": self.passed,
            "elapsed_seconds": self.elapsed,
            "checks": [
                {"name": r.name, "passed": r.passed, "details": r.details, "data": r.data}
                for r in self.results
            ],
        }

    def to_markdown(self):
        lines = [f"# verification suite: {self.suite}", ""]
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'} ({self.elapsed:.2f}s)")
        lines.append("")
        for r in self.results:
            mark = "PASS" if r.passed else "FAIL"
            lines.append(f"- [{mark}] {r.name}: {r.details}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Primitive-sequence identities
# ---------------------------------------------------------------------------


def check_primitive_identity(j):
    """P_(2j+1) = (j+2)/6 P_(j-1)^2 - (j+2)/(3j) u P_(2j-1), exactly."""
    if j < 1:
        raise ValueError("identity index must be >= 1")
    u = RationalPoly.var("u", ("t", "u"))
    lhs = swallowtail_primitive(2 * j + 1)
    rhs = swallowtail_primitive(j - 1) ** 2 * Fraction(j + 2, 6) - u * swallowtail_primitive(
        2 * j - 1
    ) * Fraction(j + 2, 3 * j)
    ok = lhs == rhs
    return CheckResult(
        name=f"primitive-identity j={j}",
        passed=ok,
        details=f"lhs = {lhs}; rhs = {rhs}",
    )


def check_primitive_identities(max_j=50):
    return [check_primitive_identity(j) for j in range(1, max_j + 1)]


# ---------------------------------------------------------------------------
# Envelope derivation of the cuspidal swallowtail in 4-space
# ---------------------------------------------------------------------------

_TXX = ("t", "x1", "x2")


def _x1_to_5u(poly):
    """Reinterpret a (t, x1, x2)-polynomial with no x2 dependence in
    (t, u) coordinates via x1 = 5u."""
    terms = {}
    for (i, j, k), c in poly.terms.items():
        if k != 0:
            raise ValueError("polynomial still depends on x2")
        terms[(i, j)] = c * Fraction(5) ** j
    return RationalPoly(("t", "u"), terms)


def check_cuspidal_envelope():
    """Derive the envelope of t^6 + x1 t^3 + x2 t^2 + x3 t + x4 = 0 and its
    singular locus, and match the cuspidal swallowtail normal form exactly."""
    t = RationalPoly.var("t", _TXX)
    x1 = RationalPoly.var("x1", _TXX)
    x2 = RationalPoly.var("x2", _TXX)
    base = t ** 6 + x1 * t ** 3 + x2 * t ** 2

    # envelope: family = 0 and d(family)/dt = 0 solved for x3 then x4
    x3 = -base.derivative("t")
    x4 = -(base + x3 * t)
    family_on_envelope = base + x3 * t + x4
    stated_x3 = -6 * t ** 5 - 3 * x1 * t ** 2 - 2 * x2 * t
    stated_x4 = 5 * t ** 6 + 2 * x1 * t ** 3 + x2 * t ** 2
    res1 = CheckResult(
        name="envelope solves the hyperplane family",
        passed=(x3 == stated_x3) and (x4 == stated_x4) and family_on_envelope.is_zero,
        details=f"x3 = {x3}; x4 = {x4}; family residue = {family_on_envelope}",
    )

    # singular locus of (x1, x2, t) -> (x1, x2, x3, x4): both t-partials
    # must vanish, and the x4 one is -t times the x3 one
    dx3 = x3.derivative("t")
    dx4 = x4.derivative("t")
    coupled = dx4 == -(t * dx3)
    c = dx3.coefficient(0, 0, 1)  # coefficient of x2 in dx3
    x2_star = -(dx3.substitute("x2", 0)) / c
    stated_x2 = -15 * t ** 4 - 3 * x1 * t
    res2 = CheckResult(
        name="singular locus of the envelope",
        passed=coupled and (x2_star == stated_x2),
        details=f"d x4/dt == -t d x3/dt: {coupled}; x2 = {x2_star}",
    )

    # locus parametrization and the rescaling onto the normal form
    x3_star = x3.substitute("x2", x2_star)
    x4_star = x4.substitute("x2", x2_star)
    stated_locus = (
        x1,
        stated_x2,
        24 * t ** 5 + 3 * x1 * t ** 2,
        -10 * t ** 6 - x1 * t ** 3,
    )
    locus = (x1, x2_star, x3_star, x4_star)
    locus_ok = all(a == b for a, b in zip(locus, stated_locus))
    form = NORMAL_FORMS[SingularityName.CSW24].components
    scales = (Fraction(5), Fraction(-15), Fraction(30), Fraction(-15))
    rescale_ok = all(
        _x1_to_5u(comp) == target * s
        for comp, target, s in zip(locus, form, scales)
    )
    res3 = CheckResult(
        name="locus rescales to the cuspidal swallowtail form",
        passed=locus_ok and rescale_ok,
        details=(
            "locus (x1,t) -> "
            + "(" + ", ".join(str(p) for p in locus) + "); "
            "with u = x1/5 it equals diag(5, -15, 30, -15) of the normal form"
        ),
    )
    return [res1, res2, res3]


# ---------------------------------------------------------------------------
# Reduction of the sextic curve family in 4-space
# ---------------------------------------------------------------------------


def _embed_t(poly):
    """Lift a univariate t-polynomial into (t, u)."""
    return RationalPoly(("t", "u"), {(e[0], 0): c for e, c in poly.terms.items()})


def check_unfurled_reduction(lam):
    """Reduce the tangent surface of (t^2, t^3, t^4, t^6 + lam t^7) to the
    psi-family: lam = 0 gives the embedded swallowtail, lam != 0 the
    unfurled one, through exact polynomial elimination."""
    lam = Fraction(lam)
    TU = ("t", "u")
    t = RationalPoly.var("t", TU)
    u = RationalPoly.var("u", TU)
    T = swallowtail_primitive

    results = []
    elim_ok = T(3) == T(0) ** 2 * Fraction(1, 2) - u * T(1)
    results.append(
        CheckResult(
            name=f"elimination identity (lam={lam})",
            passed=elim_ok,
            details=f"T3 = {T(3)} equals (1/2)T0^2 - u T1",
        )
    )

    t1 = RationalPoly.var("t", ("t",))
    comps = [t1 ** 2, t1 ** 3, t1 ** 4, t1 ** 6 + t1 ** 7 * lam]
    frame = [p.derivative("t") / 2 for p in comps]  # f' = 2t * frame
    from .jets import univariate_divexact

    frame = [univariate_divexact(p, t1) for p in frame]
    s_poly = -(t ** 2) - u * Fraction(1, 3)
    ruled = [
        _embed_t(f) + s_poly * _embed_t(tf) for f, tf in zip(comps, frame)
    ]
    scales = (Fraction(-3), Fraction(-2), Fraction(-3, 4), Fraction(-1, 4))
    Y = [comp * s for comp, s in zip(ruled, scales)]
    target = (u, T(0), T(1), T(3) + T(4) * (lam * Fraction(35, 24)))
    sheared_ok = all(a == b for a, b in zip(Y, target))
    results.append(
        CheckResult(
            name=f"ruled-coordinate reduction (lam={lam})",
            passed=sheared_ok,
            details="surface in sheared coordinates equals "
            "(u, T0, T1, T3 + (35/24) lam T4) after diag(-3, -2, -3/4, -1/4)",
        )
    )

    reduced = Y[3] - (Y[1] ** 2 * Fraction(1, 2) - Y[0] * Y[2])
    expect = T(4) * (lam * Fraction(35, 24))
    final = reduced * Fraction(24, 35)
    reduced_ok = reduced == expect and final == T(4) * lam
    if lam == 0:
        reduced_ok = reduced_ok and reduced.is_zero
    results.append(
        CheckResult(
            name=f"fourth-component reduction (lam={lam})",
            passed=reduced_ok,
            details=(
                f"after eliminating the quadratic part the fourth component is {reduced}"
                + ("; identically zero (embedded swallowtail)" if lam == 0 else
                   "; proportional to the unfurled swallowtail component")
            ),
        )
    )
    return results


# ---------------------------------------------------------------------------
# Structure-equation consistency (numeric)
# ---------------------------------------------------------------------------


def check_structure_equations(curve, steps=4000, stride=37, tol=1e-8, label=None):
    """Reconstruct the frame connection from the transported trace by
    5-point stencils and measure its antisymmetry defect.

    The stencil derivatives are independent of the jet pipeline that
    produced kappa and ell, so this closes the loop on the transport.
    """
    trace = transport_bishop(curve, steps=steps)
    n = len(trace.ts)
    h = (trace.ts[-1] - trace.ts[0]) / (n - 1)
    defect = 0.0
    kappa_res = 0.0
    ell_res = 0.0
    max_ell = 0.0

    def frame_rows(i):
        return [trace.taus[i], trace.mus[i], *trace.nus[i]]

    for i in range(2, n - 2, stride):
        rows = frame_rows(i)
        m2, m1, p1, p2 = (frame_rows(i + k) for k in (-2, -1, 1, 2))
        deriv = [
            tuple(
                (a[j] - 8.0 * b[j] + 8.0 * c[j] - d[j]) / (12.0 * h)
                for j in range(curve.dim)
            )
            for a, b, c, d in zip(m2, m1, p1, p2)
        ]
        k = len(rows)
        conn = [[vec.dot(deriv[a], rows[b]) for b in range(k)] for a in range(k)]
        for a in range(k):
            for b in range(a, k):
                defect = max(defect, abs(conn[a][b] + conn[b][a]))
        kappa_res = max(kappa_res, abs(conn[0][1] - trace.kappas[i]))
        for idx in range(len(trace.nus[i])):
            ell_res = max(ell_res, abs(conn[1][2 + idx] - trace.ells[i][idx]))
            max_ell = max(max_ell, abs(trace.ells[i][idx]))

    name = label or curve.name or "curve"
    ok = defect < tol and kappa_res < 1e-6 and ell_res < 1e-6
    return CheckResult(
        name=f"structure equations on {name}",
        passed=ok,
        details=(
            f"antisymmetry defect {defect:.3e} (tol {tol:.1e}), "
            f"kappa residual {kappa_res:.3e}, ell residual {ell_res:.3e}"
        ),
        data={
            "defect": defect,
            "kappa_residual": kappa_res,
            "ell_residual": ell_res,
            "max_ell": max_ell,
            "drift": trace.drift,
        },
    )


def _frames_fixtures():
    from .curve import builtin_curve

    helix = builtin_curve("helix")
    circle = curve_from_components(["cos(t)", "sin(t)", "0"], (0.0, 6.3), name="planar-circle")
    poly = curve_from_components(
        ["t", "t^2 - t^3/3", "t^3/2 + t^4/5"], (0.2, 1.0), name="poly-fixture"
    )
    return [(helix, 1e-10), (circle, 1e-10), (poly, 1e-8)]


def run_suite(which="all"):
    """Run a verification suite: "algebra", "frames" or "all"."""
    if which not in ("algebra", "frames", "all"):
        raise ValueError(f'unknown suite {which!r} (use "algebra", "frames" or "all")')
    start = time.perf_counter()
    results = []
    if which in ("algebra", "all"):
        results.extend(check_primitive_identities(50))
        results.extend(check_cuspidal_envelope())
        results.extend(check_unfurled_reduction(0))
        results.extend(check_unfurled_reduction(1))
    if which in ("frames", "all"):
        for fixture, tol in _frames_fixtures():
            res = check_structure_equations(fixture, tol=tol)
            results.append(res)
            if fixture.name == "planar-circle":
                flat = res.data["max_ell"] < 1e-8
                results.append(
                    CheckResult(
                        name="planar curve has vanishing torsion",
                        passed=flat,
                        details=f"max |ell| = {res.data['max_ell']:.3e}",
                    )
                )
    report = SuiteReport(suite=which, results=results)
    report.elapsed = time.perf_counter() - start
    return report
