"""Singularity labels for parallels of tangent developables, and the exact
polynomial normal forms behind them.

Directrix curve types map to singularity names through fixed tables for
curves in 3- and 4-space; for general ambient dimension only the stratum
codimension of the five generic type patterns is reported.  The catalog
normal forms are stored coefficient-exact and each knows its singular
parameter line, so its own edge curve can be extracted and type-checked.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .jets import Jet, RationalPoly, _taylor_shift
from .curve import _ExactRank
from .surface import ParametricSurface


class SingularityName(str, Enum):
    CE23 = "CE23"
    FU23 = "FU23"
    SW23 = "SW23"
    FP23 = "FP23"
    CSW23 = "CSW23"
    CE24 = "CE24"
    OSW24 = "OSW24"
    USW24 = "USW24"
    CSW24 = "CSW24"
    SW24_EMBEDDED = "SW24_embedded"
    REGULAR = "regular"


LONG_NAMES = {
    SingularityName.CE23: "cuspidal edge",
    SingularityName.FU23: "folded umbrella",
    SingularityName.SW23: "swallowtail",
    SingularityName.FP23: "folded pleat",
    SingularityName.CSW23: "cuspidal swallowtail",
    SingularityName.CE24: "cuspidal edge",
    SingularityName.OSW24: "open swallowtail",
    SingularityName.USW24: "unfurled swallowtail",
    SingularityName.CSW24: "cuspidal swallowtail",
    SingularityName.SW24_EMBEDDED: "embedded swallowtail",
    SingularityName.REGULAR: "regular point",
}


def generic_type_patterns(p):
    """The five generic directrix-type patterns for curves in R^(1+p),
    with the codimension of each type locus in the (t, r) plane."""
    if p < 2:
        raise ValueError("pattern table needs p >= 2")
    return [
        (tuple(range(1, p + 2)), 0),
        (tuple(range(1, p + 1)) + (p + 2,), 1),
        (tuple(range(2, p + 3)), 1),
        (tuple(range(2, p + 2)) + (p + 3,), 2),
        (tuple(range(3, p + 4)), 2),
    ]


# name and codimension of the singular locus in (t, s; r) space
R3_TABLE = {
    (1, 2, 3): (SingularityName.CE23, 1),
    (1, 2, 4): (SingularityName.FU23, 2),
    (2, 3, 4): (SingularityName.SW23, 2),
    (2, 3, 5): (SingularityName.FP23, 3),
    (3, 4, 5): (SingularityName.CSW23, 3),
}

R4_TABLE = {
    (1, 2, 3, 4): (SingularityName.CE24, 1),
    (1, 2, 3, 5): (SingularityName.CE24, 2),
    (2, 3, 4, 5): (SingularityName.OSW24, 2),
    (2, 3, 4, 6): (SingularityName.USW24, 3),
    (3, 4, 5, 6): (SingularityName.CSW24, 3),
}


@dataclass(frozen=True)
class SingularityLabel:
    """Classification of the singularity carried by a directrix type.

    ``codim`` is the codimension of the singularity locus in (t, s; r)
    space (named tables, ambient 3 and 4 only); ``stratum_codim`` is the
    codimension of the type locus in the (t, r) plane and exists for every
    generic pattern.  ``generic`` is False for types outside the generic
    list, which is a result, not an error.
    """

    name: SingularityName | None
    codim: int | None
    stratum_codim: int | None
    p: int
    source_type: tuple | None
    generic: bool

    @property
    def long_name(self):
        return LONG_NAMES.get(self.name)

    def to_dict(self):
        return {
            "name": None if self.name is None else self.name.value,
            "long_name": self.long_name,
            "codim": self.codim,
            "stratum_codim": self.stratum_codim,
            "p": self.p,
            "source_type": None if self.source_type is None else list(self.source_type),
            "generic": self.generic,
        }


def regular_label(p):
    """Label for a surface point off the singular locus."""
    return SingularityLabel(
        name=SingularityName.REGULAR,
        codim=0,
        stratum_codim=None,
        p=p,
        source_type=None,
        generic=True,
    )


def classify_type(entries, p=None):
    """Look up the singularity label of a directrix curve type.

    Types outside the generic five-pattern list come back with
    ``generic=False`` rather than raising.
    """
    entries = tuple(int(a) for a in entries)
    if p is None:
        p = len(entries) - 1
    elif len(entries) != p + 1:
        raise ValueError(f"type {entries} does not match p={p} (need {p + 1} entries)")
    stratum = None
    for pattern, codim in generic_type_patterns(p):
        if entries == pattern:
            stratum = codim
            break
    name = None
    table_codim = None
    if p == 2 and entries in R3_TABLE:
        name, table_codim = R3_TABLE[entries]
    elif p == 3 and entries in R4_TABLE:
        name, table_codim = R4_TABLE[entries]
    return SingularityLabel(
        name=name,
        codim=table_codim,
        stratum_codim=stratum,
        p=p,
        source_type=entries,
        generic=stratum is not None,
    )


# ---------------------------------------------------------------------------
# Exact normal forms
# ---------------------------------------------------------------------------

_TU = ("t", "u")


def _tu(value):
    return RationalPoly.const(value, _TU)


def _t():
    return RationalPoly.var("t", _TU)


def _u():
    return RationalPoly.var("u", _TU)


def swallowtail_primitive(i):
    """P_i = integral of t^i (3t^2 + u) dt with integration constant 0,
    i.e. 3/(i+3) t^(i+3) + 1/(i+1) u t^(i+1)."""
    if i < 0:
        raise ValueError("primitive index must be >= 0")
    integrand = (_t() ** i) * (3 * _t() ** 2 + _u())
    return integrand.integrate("t")


def cusp_quartic_primitive(i):
    """Integral of t^i (4t^3 + u) dt; the quartic analogue of the
    swallowtail primitives."""
    if i < 0:
        raise ValueError("primitive index must be >= 0")
    integrand = (_t() ** i) * (4 * _t() ** 3 + _u())
    return integrand.integrate("t")


@dataclass(frozen=True)
class NormalForm:
    """Exact polynomial surface germ (t, u) -> R^dim from the catalog.

    ``singular_u`` parametrizes the singular line u = u*(t) (the zero set
    of ``discriminant``, which is monic and linear in u); substituting it
    into the components yields the edge curve whose exact type is
    ``directrix_type``.  ``ambient_rank`` is the dimension of the span of
    that curve's derivatives (smaller than dim exactly for the
    hyperplane-confined embedded swallowtail).  ``source_type`` is the
    directrix type whose tangent surfaces the form classifies in the
    tables; for the unfurled swallowtail the two differ: the form itself
    is the tangent surface of a (2,3,4,7)-type curve.
    """

    name: SingularityName
    components: tuple
    discriminant: RationalPoly
    singular_u: RationalPoly  # univariate in t
    directrix_type: tuple
    ambient_rank: int
    source_type: tuple | None

    @property
    def dim(self):
        return len(self.components)


def _build_catalog():
    T = swallowtail_primitive
    S = cusp_quartic_primitive
    u = _u()
    t = _t()
    sw_disc = 3 * t ** 2 + u
    sw_line = RationalPoly.from_coeffs([0, 0, -3], "t")
    cs_disc = 4 * t ** 3 + u
    cs_line = RationalPoly.from_coeffs([0, 0, 0, -4], "t")
    return {
        SingularityName.SW23: NormalForm(
            SingularityName.SW23,
            (u, T(0), T(1)),
            sw_disc,
            sw_line,
            (2, 3, 4),
            3,
            (2, 3, 4),
        ),
        SingularityName.FP23: NormalForm(
            SingularityName.FP23,
            (u, T(0) + T(1), T(2) + T(3)),
            sw_disc,
            sw_line,
            (2, 3, 5),
            3,
            (2, 3, 5),
        ),
        SingularityName.OSW24: NormalForm(
            SingularityName.OSW24,
            (u, T(0), T(1), T(2)),
            sw_disc,
            sw_line,
            (2, 3, 4, 5),
            4,
            (2, 3, 4, 5),
        ),
        SingularityName.USW24: NormalForm(
            SingularityName.USW24,
            (u, T(0), T(1), T(4)),
            sw_disc,
            sw_line,
            (2, 3, 4, 7),
            4,
            (2, 3, 4, 6),
        ),
        SingularityName.SW24_EMBEDDED: NormalForm(
            SingularityName.SW24_EMBEDDED,
            (u, T(0), T(1), RationalPoly.zero(_TU)),
            sw_disc,
            sw_line,
            (2, 3, 4),
            3,
            None,
        ),
        SingularityName.CSW24: NormalForm(
            SingularityName.CSW24,
            (u, S(0), S(1), S(2)),
            cs_disc,
            cs_line,
            (3, 4, 5, 6),
            4,
            (3, 4, 5, 6),
        ),
    }


NORMAL_FORMS = _build_catalog()


def normal_form(name):
    """Catalog lookup; accepts the enum or its string value."""
    if isinstance(name, str) and not isinstance(name, SingularityName):
        try:
            name = SingularityName(name)
        except ValueError:
            known = ", ".join(sorted(n.value for n in NORMAL_FORMS))
            raise KeyError(f"unknown normal form {name!r} (catalog: {known})") from None
    if name not in NORMAL_FORMS:
        known = ", ".join(sorted(n.value for n in NORMAL_FORMS))
        raise KeyError(f"no exact normal form in the catalog for {name.value} (catalog: {known})")
    return NORMAL_FORMS[name]


def normal_form_surface(name, t_range=(-1.0, 1.0), u_range=(-1.0, 1.0)):
    """Float-evaluable surface for a catalog form; parameters are (t, u)."""
    nf = normal_form(name)
    compiled = [
        [(e[0], e[1], float(c)) for e, c in comp.terms.items()] for comp in nf.components
    ]

    def point(t, u):
        return tuple(
            sum(c * t ** i * u ** j for i, j, c in comp) for comp in compiled
        )

    def _partial_coeffs(comp, along_t, t, u):
        deg = max((e[0] if along_t else e[1] for e in comp), default=0) if comp else 0
        coeffs = [0.0] * (deg + 1)
        for i, j, c in comp:
            if along_t:
                coeffs[i] += c * u ** j
            else:
                coeffs[j] += c * t ** i
        return coeffs

    def jet_t(t, u, order):
        return [
            Jet(float(t), _taylor_shift(_partial_coeffs(comp, True, t, u), float(t), order))
            for comp in compiled
        ]

    def jet_s(t, u, order):
        return [
            Jet(float(u), _taylor_shift(_partial_coeffs(comp, False, t, u), float(u), order))
            for comp in compiled
        ]

    return ParametricSurface(
        nf.dim,
        point,
        kind="normal_form",
        t_range=t_range,
        s_range=u_range,
        jet_t_fn=jet_t,
        jet_s_fn=jet_s,
        provenance={"normal_form": nf.name.value},
    )


def _project_to_t(poly):
    """Drop the u variable from a (t, u) polynomial with no u dependence."""
    terms = {}
    for (i, j), c in poly.terms.items():
        if j != 0:
            raise ValueError(f"polynomial still depends on u: {poly}")
        terms[(i,)] = c
    return RationalPoly(("t",), terms)


def directrix_polys(name):
    """Edge curve of a catalog form: components restricted to u = u*(t)."""
    nf = normal_form(name)
    u_star = RationalPoly(
        _TU, {(e[0], 0): c for e, c in nf.singular_u.terms.items()}
    )
    return [_project_to_t(comp.substitute("u", u_star)) for comp in nf.components]


def _coefficient_rank_profile(polys, max_order):
    """Exact Wronskian rank profile at t=0 of a polynomial curve, read off
    the coefficient vectors (the k-th derivative at 0 is k! times the
    degree-k coefficient vector)."""
    tracker = _ExactRank()
    profile = []
    for k in range(1, max_order + 1):
        col = [p.coefficient(k) for p in polys]
        r = tracker.add(col)
        while len(profile) < r:
            profile.append(k)
    top_degree = max((p.degree() for p in polys if not p.is_zero), default=0)
    span = _ExactRank()
    for k in range(top_degree + 1):
        span.add([p.coefficient(k) for p in polys])
    return tuple(profile), span.rank


@dataclass(frozen=True)
class NormalFormReport:
    name: SingularityName
    expected_type: tuple
    computed_profile: tuple
    expected_rank: int
    span_rank: int
    singular_line_ok: bool
    passes: bool


def normal_form_consistency(name):
    """Check a catalog form against its own geometry, all exactly.

    Verifies that every t-derivative of the form vanishes on the singular
    line u = u*(t), extracts the edge curve there, and compares its exact
    rank profile (and the dimension it spans) with the catalog entry.
    """
    nf = normal_form(name)
    u_star = RationalPoly(_TU, {(e[0], 0): c for e, c in nf.singular_u.terms.items()})
    line_ok = nf.discriminant.substitute("u", u_star).is_zero
    for comp in nf.components:
        if not comp.derivative("t").substitute("u", u_star).is_zero:
            line_ok = False
    edge = directrix_polys(name)
    budget = max(8, nf.directrix_type[-1] + 1)
    profile, span = _coefficient_rank_profile(edge, budget)
    passes = (
        line_ok
        and profile == nf.directrix_type
        and span == nf.ambient_rank
    )
    return NormalFormReport(
        name=nf.name,
        expected_type=nf.directrix_type,
        computed_profile=profile,
        expected_rank=nf.ambient_rank,
        span_rank=span,
        singular_line_ok=line_ok,
        passes=passes,
    )


# ---------------------------------------------------------------------------
# The psi-family of swallowtail openings in 4-space
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UnfurledFamily:
    """Surface (u, P0, P1, psi(u, P0) * P4) for a polynomial psi; the
    label predicate reads psi's behaviour at the origin: identically zero
    gives the embedded swallowtail, nonzero constant term the unfurled
    one, and anything else is left unresolved."""

    psi: RationalPoly
    components: tuple
    label: SingularityName | None


def unfurled_family(psi):
    """Build the psi-family member; psi is a polynomial in two slots
    (vars named ("u", "w")) applied to (u, t^3 + u t)."""
    if tuple(psi.vars) != ("u", "w"):
        raise ValueError('psi must use vars ("u", "w")')
    u = _u()
    p0 = swallowtail_primitive(0)
    composed = RationalPoly.zero(_TU)
    for (a, b), c in psi.terms.items():
        composed = composed + (u ** a) * (p0 ** b) * c
    comps = (u, p0, swallowtail_primitive(1), composed * swallowtail_primitive(4))
    if psi.is_zero:
        label = SingularityName.SW24_EMBEDDED
    elif psi.coefficient(0, 0) != 0:
        label = SingularityName.USW24
    else:
        label = None  # partial openings: classification left open
    return UnfurledFamily(psi=psi, components=comps, label=label)
