"""Logarithmic spirals under Moebius maps, parametrised by cycle triples.

The model curve with parameter ``lambda = lambda_tilde + 2 pi i`` is the
two-branch orbit ``{+-exp(lambda t)}`` of the point 1 under the diagonal
flow ``diag(+-exp(lambda t / 2), exp(-lambda t / 2))``; a loxodrome is
any Moebius image of it.  ``lambda_tilde`` is the conformal invariant:
``exp(lambda_tilde)`` is the modulus gained per full counterclockwise
turn.

A loxodrome is encoded by an ordered triple of cycles plus a chirality
sign: ``c1`` is a cycle of the elliptic pencil through the two
asymptotic endpoints, ``c2`` and ``c3`` span the orthogonal hyperbolic
pencil and sit one full turn apart on the curve.  The inverse hyperbolic
cosine of their normalised product recovers ``|lambda_tilde|``; the sign
cannot be read off the cycles (mirror spirals share them), so the triple
carries it explicitly.

All congruence tests here work modulo 1/2 with a sign fold.  Cycles are
projective, so normalised products carry a residual +- ambiguity, lines
are undirected, and the model curve has two branches; folding makes the
checks well defined on exactly the data a triple carries.  A strict
modulo-1 variant is available for comparison via ``strict_mod1``.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .cycles import (
    Cycle,
    CycleKind,
    ExtendedPoint,
    MoebiusMap,
    _point_sort_key,
    apply_to_cycle,
    apply_to_point,
    canonicalize,
    center_radius,
    classify,
    combine,
    from_line,
    intersect,
    is_orthogonal,
    map_to_zero_one_inf,
    normalized_product,
    passes,
    pencil_discriminant,
    point_of,
    product,
    projectively_equal,
    self_product,
    zero_radius_at,
)
from .errors import (
    C1NotInOrthogonalPencil,
    DegenerateTriple,
    InvalidInput,
    NotDisjoint,
    NotFinite,
    NotOrthogonal,
    OnRadicalLocus,
    PointNotOnBoth,
    PointNotOnCurve,
    RankDeficient,
    ZeroRadiusCandidate,
    ZeroRadiusOperand,
)
from .numerics import (
    DEFAULT_TOLERANCES,
    Tolerances,
    clamped_acos,
    clamped_acosh,
    congruent_mod,
)
from .pencils import Pencil, orthogonal_cycle_through, zero_radius_members

TWO_PI = 2.0 * math.pi

_REAL_AXIS = Cycle(0.0, 0.0, 1.0, 0.0)
_UNIT_CIRCLE = Cycle(1.0, 0.0, 0.0, -1.0)

#: Branch-swapping reflection z -> -1/z; together with the diagonal flow
#: it generates the stabiliser of the model curve.
BRANCH_SWAP = MoebiusMap(0.0, -1.0, 1.0, 0.0)


# ---------------------------------------------------------------------------
# the spiral parameter
# ---------------------------------------------------------------------------

class SlsKind(Enum):
    FINITE = "finite"
    INFINITE = "infinite"
    POINT = "point"


class SlsClass(Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class SlsParameter:
    """Extended real parameter of a spiral: finite value, infinity, or the
    fully degenerate point case."""

    kind: SlsKind
    lambda_tilde: float = 0.0

    def __post_init__(self):
        if self.kind != SlsKind.FINITE and self.lambda_tilde != 0.0:
            raise InvalidInput("only the finite kind carries a value")
        if not math.isfinite(self.lambda_tilde):
            raise InvalidInput("finite parameter must be a finite float")

    @classmethod
    def finite(cls, lambda_tilde: float) -> "SlsParameter":
        return cls(SlsKind.FINITE, float(lambda_tilde))

    @classmethod
    def infinite(cls) -> "SlsParameter":
        return cls(SlsKind.INFINITE)

    @classmethod
    def point(cls) -> "SlsParameter":
        return cls(SlsKind.POINT)

    @property
    def rate(self) -> complex:
        """Normalised complex exponent lambda_tilde + 2 pi i."""
        if self.kind != SlsKind.FINITE:
            raise NotFinite(f"{self.kind.value} parameter has no finite exponent")
        return complex(self.lambda_tilde, TWO_PI)

    @property
    def a(self) -> float:
        """Modulus gained per full turn: exp(lambda_tilde), or infinity."""
        if self.kind == SlsKind.INFINITE:
            return math.inf
        if self.kind == SlsKind.POINT:
            raise NotFinite("the point case has no turn modulus")
        return math.exp(self.lambda_tilde)


def classify_sls(lam: complex) -> SlsClass:
    """Sign of Re(lambda) * Im(lambda): positive spirals unwind
    counterclockwise, negative clockwise, zero product degenerates."""
    p = complex(lam).real * complex(lam).imag
    if p > 0:
        return SlsClass.POSITIVE
    if p < 0:
        return SlsClass.NEGATIVE
    return SlsClass.DEGENERATE


def lambda_tilde(lam: complex) -> SlsParameter:
    """Reduce a complex exponent to the conformal invariant 2 pi Re/Im."""
    lam = complex(lam)
    if lam.imag != 0:
        return SlsParameter.finite(TWO_PI * lam.real / lam.imag)
    if lam.real != 0:
        return SlsParameter.infinite()
    return SlsParameter.point()


def diagonal_flow(lam: complex, t: float, branch: int = 1) -> MoebiusMap:
    """diag(branch * exp(lam t / 2), exp(-lam t / 2)); acts on points as
    z -> branch * exp(lam t) z."""
    if branch not in (1, -1):
        raise InvalidInput("branch must be +1 or -1")
    lam = complex(lam)
    return MoebiusMap(
        branch * cmath.exp(lam * t / 2.0), 0.0, 0.0, cmath.exp(-lam * t / 2.0)
    )


def sample_sls(param: SlsParameter, t: float) -> tuple[ExtendedPoint, ExtendedPoint]:
    """Both branch points {+exp(lambda t), -exp(lambda t)} of the model curve."""
    w = cmath.exp(param.rate * t)
    return ExtendedPoint.from_complex(w), ExtendedPoint.from_complex(-w)


# ---------------------------------------------------------------------------
# triples
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LoxodromeTriple:
    """Ordered cycles (c1, c2, c3) plus the chirality sign in {+1, -1}."""

    c1: Cycle
    c2: Cycle
    c3: Cycle
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise InvalidInput(f"sign must be +1 or -1, got {self.sign!r}")

    def to_json(self):
        return {
            "c1": self.c1.to_json(),
            "c2": self.c2.to_json(),
            "c3": self.c3.to_json(),
            "sign": self.sign,
        }

    @classmethod
    def from_json(cls, data) -> "LoxodromeTriple":
        if not isinstance(data, dict):
            raise InvalidInput("triple JSON must be an object")
        try:
            return cls(
                Cycle.from_json(data["c1"]),
                Cycle.from_json(data["c2"]),
                Cycle.from_json(data["c3"]),
                int(data.get("sign", 1)),
            )
        except KeyError as exc:
            raise InvalidInput(f"triple JSON missing field {exc}") from exc


def standard_triple(param: SlsParameter) -> LoxodromeTriple:
    """Standard-position triple: real axis, unit circle, and the circle of
    radius exp(lambda_tilde).

    Degenerate cases: a zero parameter duplicates the unit circle, the
    infinite parameter uses the point cycle at infinity as third member.
    """
    if param.kind == SlsKind.POINT:
        raise DegenerateTriple("the single-point curve has no three-cycle form")
    if param.kind == SlsKind.INFINITE:
        return LoxodromeTriple(_REAL_AXIS, _UNIT_CIRCLE, Cycle(0.0, 0.0, 0.0, 1.0), 1)
    lt = param.lambda_tilde
    if lt == 0.0:
        return LoxodromeTriple(_REAL_AXIS, _UNIT_CIRCLE, _UNIT_CIRCLE, 1)
    c3 = Cycle(1.0, 0.0, 0.0, -math.exp(2.0 * lt))
    return LoxodromeTriple(_REAL_AXIS, _UNIT_CIRCLE, c3, 1 if lt > 0 else -1)


def triple_violations(
    c1: Cycle,
    c2: Cycle,
    c3: Cycle,
    sign: int = 1,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> list:
    """All invariant violations of a candidate triple, empty when valid."""
    out = []
    s1 = self_product(c1)
    if s1 <= tol.eps_product * c1.scale() ** 2:
        out.append(
            C1NotInOrthogonalPencil("first cycle must be a line or proper circle", s1)
        )
    s2 = self_product(c2)
    if s2 <= tol.eps_product * c2.scale() ** 2:
        out.append(NotDisjoint("second cycle must be a line or proper circle", s2))
    s3 = self_product(c3)
    if s3 < -tol.eps_product * c3.scale() ** 2:
        out.append(NotDisjoint("third cycle has no real locus", s3))

    r12 = product(c1, c2)
    if abs(r12) > tol.eps_product * 4.0 * c1.scale() * c2.scale():
        out.append(
            NotOrthogonal("first and second cycle are not orthogonal", abs(r12))
        )
    r13 = product(c1, c3)
    if abs(r13) > tol.eps_product * 4.0 * c1.scale() * c3.scale():
        out.append(
            NotOrthogonal("first and third cycle are not orthogonal", abs(r13))
        )

    coincident = projectively_equal(c2, c3, tol)
    pencil_ok = coincident
    if not coincident:
        if classify(c3, tol) == CycleKind.POINT:
            # degenerate extension: the pencil of a cycle and an off-cycle
            # point is disjoint exactly when the point misses the cycle
            if is_orthogonal(c2, c3, tol):
                out.append(
                    NotDisjoint("third (point) cycle lies on the second cycle")
                )
            else:
                pencil_ok = True
        else:
            q, qs = pencil_discriminant(c2, c3, tol)
            if q <= tol.eps_product * qs:
                out.append(
                    NotDisjoint("second and third cycle neither disjoint nor equal", q)
                )
            else:
                pencil_ok = True
    if pencil_ok and not coincident:
        z1, z2 = zero_radius_members(Pencil(c2, c3), tol)
        for z in (z1, z2):
            r = product(c1, z)
            if abs(r) > tol.eps_product * 4.0 * c1.scale() * z.scale():
                out.append(
                    C1NotInOrthogonalPencil(
                        "first cycle misses a limit point of the pencil", abs(r)
                    )
                )
    return out


def validate_triple(
    c1: Cycle,
    c2: Cycle,
    c3: Cycle,
    sign: int = 1,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> LoxodromeTriple:
    """Checked triple; raises the first invariant violation otherwise."""
    if sign not in (1, -1):
        raise InvalidInput(f"sign must be +1 or -1, got {sign!r}")
    violations = triple_violations(c1, c2, c3, sign, tol)
    if violations:
        raise violations[0]
    return LoxodromeTriple(c1, c2, c3, sign)


def lambda_from_triple(
    T: LoxodromeTriple, tol: Tolerances = DEFAULT_TOLERANCES
) -> SlsParameter:
    """Recover the spiral parameter: acosh of the normalised product of
    the spanning pair, signed by the triple's chirality.

    Coincident c2, c3 give the zero parameter, a point c3 the infinite
    one.  The absolute value of the product is taken first: the
    canonical representatives of a disjoint pair may pair negatively.
    """
    if projectively_equal(T.c2, T.c3, tol):
        return SlsParameter.finite(0.0)
    if classify(T.c3, tol) == CycleKind.POINT:
        return SlsParameter.infinite()
    x = abs(normalized_product(T.c2, T.c3, tol))
    return SlsParameter.finite(T.sign * clamped_acosh(x, tol))


# ---------------------------------------------------------------------------
# normal form
# ---------------------------------------------------------------------------

def standard_map(T: LoxodromeTriple, tol: Tolerances = DEFAULT_TOLERANCES) -> MoebiusMap:
    """The Moebius map carrying a non-degenerate triple to standard position.

    The two point members of the pencil of (c2, c3) go to 0 and
    infinity, a deterministically chosen crossing of c1 and c2 goes
    to 1.  Which limit point becomes the origin is fixed by chirality:
    the image of c3 must have radius above 1 for sign +1 and below 1
    for sign -1.  Either crossing of c1 and c2 would do (the two
    choices differ by the branch swap); the tie-break picks the
    lexicographically larger point, infinity last.
    """
    if projectively_equal(T.c2, T.c3, tol) or classify(T.c3, tol) == CycleKind.POINT:
        raise DegenerateTriple("normal form needs a distinct, non-point third cycle")
    z1, z2 = zero_radius_members(Pencil(T.c2, T.c3), tol)
    p, q = point_of(z1, tol), point_of(z2, tol)
    crossings = intersect(T.c1, T.c2, tol)
    if len(crossings) != 2:
        raise DegenerateTriple("first and second cycle must cross at two points")
    u = max(crossings, key=_point_sort_key)
    M = map_to_zero_one_inf(p, u, q, tol)
    img3 = canonicalize(apply_to_cycle(M, T.c3, tol), tol)
    _, r3 = center_radius(img3, tol)
    if (r3 > 1.0) != (T.sign > 0):
        M = map_to_zero_one_inf(q, u, p, tol)
    return M


def _map_cycle_to_unit_circle(C: Cycle, tol: Tolerances) -> MoebiusMap:
    kind = classify(C, tol)
    if kind == CycleKind.CIRCLE:
        c, r = center_radius(C, tol)
        return MoebiusMap(1.0, -c, 0.0, r).normalized()
    if kind == CycleKind.LINE:
        line = canonicalize(C, tol)
        normal = complex(line.l, line.n)
        anchor = (line.m / 2.0) * normal
        direction = 1j * normal
        to_axis = MoebiusMap(1.0, -anchor, 0.0, direction)
        cayley = MoebiusMap(1.0, -1j, 1.0, 1j)
        return (cayley @ to_axis).normalized()
    raise DegenerateTriple("curve cycle is a point")


def _normalising_map(T: LoxodromeTriple, tol: Tolerances) -> MoebiusMap:
    """Map to standard position, covering the degenerate kinds too."""
    param = lambda_from_triple(T, tol)
    if param.kind == SlsKind.FINITE and param.lambda_tilde != 0.0:
        return standard_map(T, tol)
    if param.kind == SlsKind.FINITE:
        return _map_cycle_to_unit_circle(T.c2, tol)
    z1, z2 = zero_radius_members(Pencil(T.c2, T.c3), tol)
    crossings = intersect(T.c1, T.c2, tol)
    if len(crossings) != 2:
        raise DegenerateTriple("first and second cycle must cross at two points")
    u = max(crossings, key=_point_sort_key)
    return map_to_zero_one_inf(point_of(z1, tol), u, point_of(z2, tol), tol)


@dataclass(frozen=True)
class Loxodrome:
    """Curve as (parameter, normalising map); interconvertible with triples."""

    param: SlsParameter
    map: MoebiusMap

    @classmethod
    def from_triple(
        cls, T: LoxodromeTriple, tol: Tolerances = DEFAULT_TOLERANCES
    ) -> "Loxodrome":
        return cls(lambda_from_triple(T, tol), _normalising_map(T, tol))

    def to_triple(self, tol: Tolerances = DEFAULT_TOLERANCES) -> LoxodromeTriple:
        return apply_map(self.map.inverse(), standard_triple(self.param), tol)


# ---------------------------------------------------------------------------
# equivalence
# ---------------------------------------------------------------------------

def _in_span(A: Cycle, B: Cycle, X: Cycle, tol: Tolerances) -> bool:
    S = np.array(
        [canonicalize(A, tol).to_json(), canonicalize(B, tol).to_json()], dtype=float
    ).T
    v = np.array(canonicalize(X, tol).to_json(), dtype=float)
    coef, *_ = np.linalg.lstsq(S, v, rcond=None)
    residual = float(np.linalg.norm(S @ coef - v))
    return residual <= tol.eps_product * max(1.0, float(np.linalg.norm(v)))


def _congruent_folded(
    lhs: float, rhs: float, strict_mod1: bool, tol: Tolerances
) -> bool:
    if strict_mod1:
        return congruent_mod(lhs, rhs, 1.0, tol)
    return congruent_mod(lhs, rhs, 0.5, tol) or congruent_mod(lhs, -rhs, 0.5, tol)


def equivalent(
    T: LoxodromeTriple,
    Tp: LoxodromeTriple,
    tol: Tolerances = DEFAULT_TOLERANCES,
    strict_mod1: bool = False,
) -> bool:
    """Do two non-degenerate triples parametrise the same curve?

    Checks, in order: equal chirality; mutual span membership of the
    hyperbolic pairs; equal recovered parameter; and the coupling
    congruence (hyperbolic shift over the parameter against the elliptic
    rotation in turns).  The congruence is decided on the second cycles
    and cross-checked on the third, warning on disagreement.
    """
    for X in (T, Tp):
        if projectively_equal(X.c2, X.c3, tol) or classify(X.c3, tol) == CycleKind.POINT:
            raise DegenerateTriple("equivalence needs non-degenerate triples")
    if T.sign != Tp.sign:
        return False
    if not (
        _in_span(T.c2, T.c3, Tp.c2, tol)
        and _in_span(T.c2, T.c3, Tp.c3, tol)
        and _in_span(Tp.c2, Tp.c3, T.c2, tol)
        and _in_span(Tp.c2, Tp.c3, T.c3, tol)
    ):
        return False
    x = abs(normalized_product(T.c2, T.c3, tol))
    xp = abs(normalized_product(Tp.c2, Tp.c3, tol))
    if abs(x - xp) > tol.eps_product * max(1.0, x, xp):
        return False
    lam = clamped_acosh(x, tol)
    rhs = clamped_acos(normalized_product(T.c1, Tp.c1, tol), tol) / TWO_PI
    lhs2 = clamped_acosh(abs(normalized_product(T.c2, Tp.c2, tol)), tol) / lam
    ok2 = _congruent_folded(lhs2, rhs, strict_mod1, tol)
    lhs3 = clamped_acosh(abs(normalized_product(T.c3, Tp.c3, tol)), tol) / lam
    ok3 = _congruent_folded(lhs3, rhs, strict_mod1, tol)
    if ok2 != ok3:
        warnings.warn(
            "coupling congruence disagrees between second and third cycles",
            RuntimeWarning,
            stacklevel=2,
        )
    return ok2


# ---------------------------------------------------------------------------
# membership
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MembershipReport:
    member: bool
    t_coeff: float | None = None
    lhs: float | None = None
    rhs: float | None = None
    flags: tuple[str, ...] = ()
    ch: Cycle | None = None
    ce: Cycle | None = None

    def to_json(self):
        return {
            "member": self.member,
            "t_coeff": self.t_coeff,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "flags": list(self.flags),
        }


def _as_point(p) -> ExtendedPoint:
    if isinstance(p, ExtendedPoint):
        return p
    return ExtendedPoint.from_complex(complex(p))


def _member_through(
    c2: Cycle, c3: Cycle, c0: Cycle, tol: Tolerances
) -> tuple[Cycle, float | None]:
    """Pencil member through the point of c0, in homogeneous form.

    Equivalent to the affine combination t c2 + (1 - t) c3 with
    t = -<c0,c3>/<c0,c2-c3>, but stays defined on the member where that
    t diverges; there the affine coefficient is reported as None.
    """
    a2 = canonicalize(c2, tol)
    a3 = canonicalize(c3, tol)
    a0 = canonicalize(c0, tol)
    alpha = product(a3, a0)
    beta = -product(a2, a0)
    scale = 4.0 * a0.scale() * max(a2.scale(), a3.scale(), 1e-300)
    if max(abs(alpha), abs(beta)) <= tol.eps_product * scale:
        raise OnRadicalLocus("point is incident with both spanning cycles")
    ch = combine(alpha, a2, beta, a3)
    s = alpha + beta
    t = alpha / s if abs(s) > tol.eps_product * (abs(alpha) + abs(beta)) else None
    return ch, t


def _limit_point_hit(
    T: LoxodromeTriple, p: ExtendedPoint, tol: Tolerances
) -> bool:
    z1, z2 = zero_radius_members(Pencil(T.c2, T.c3), tol)
    return p.approx_eq(point_of(z1, tol), tol) or p.approx_eq(point_of(z2, tol), tol)


def contains_point(
    T: LoxodromeTriple,
    p,
    tol: Tolerances = DEFAULT_TOLERANCES,
    strict_mod1: bool = False,
) -> MembershipReport:
    """Decide curve membership from pencil data alone.

    For the generic case the report carries the pencil member through
    the point (ch), the orthogonal cycle through it (ce), the hyperbolic
    shift over the parameter (lhs) and the elliptic rotation in turns
    (rhs); membership is their congruence modulo 1/2 with sign fold
    (modulo 1 without fold under ``strict_mod1``).

    The two asymptotic endpoints are not on the curve: those report
    False with a ``limit_point`` flag.  Degenerate triples dispatch to
    plain incidence with the curve cycle.
    """
    p = _as_point(p)
    param = lambda_from_triple(T, tol)
    base_flags = ("strict_mod1",) if strict_mod1 else ()

    if param.kind == SlsKind.FINITE and param.lambda_tilde == 0.0:
        return MembershipReport(member=passes(T.c2, p, tol), flags=base_flags)

    if param.kind == SlsKind.INFINITE:
        if _limit_point_hit(T, p, tol):
            return MembershipReport(False, flags=base_flags + ("limit_point",))
        return MembershipReport(
            member=passes(T.c1, p, tol),
            flags=base_flags + ("degenerate_arc_unchecked",),
        )

    lam = abs(param.lambda_tilde)
    if _limit_point_hit(T, p, tol):
        return MembershipReport(False, flags=base_flags + ("limit_point",))
    c0 = zero_radius_at(p)
    flags = base_flags
    ch, t = _member_through(T.c2, T.c3, c0, tol)
    if t is None:
        flags = flags + ("radical_member",)
    if classify(ch, tol) == CycleKind.POINT:
        return MembershipReport(False, t, flags=flags + ("limit_point",), ch=ch)
    try:
        ce = orthogonal_cycle_through(T.c2, T.c3, c0, tol)
        lhs = clamped_acosh(abs(normalized_product(ch, T.c2, tol)), tol) / lam
        rhs = clamped_acos(normalized_product(ce, T.c1, tol), tol) / TWO_PI
    except (RankDeficient, ZeroRadiusOperand):
        return MembershipReport(False, t, flags=flags + ("limit_point",), ch=ch)
    member = _congruent_folded(lhs, rhs, strict_mod1, tol)
    return MembershipReport(member, t, lhs, rhs, flags, ch, ce)


def contains_point_oracle(
    T: LoxodromeTriple, p, tol: Tolerances = DEFAULT_TOLERANCES
) -> bool:
    """Ground truth by normalising: map the point to standard position and
    test it against the model curve directly.

    In standard position a point w is on the curve when its log modulus
    over the parameter agrees with its argument in turns modulo 1/2
    (the two branches differ by half a turn)."""
    p = _as_point(p)
    param = lambda_from_triple(T, tol)
    M = _normalising_map(T, tol)
    w = apply_to_point(M, p)
    if w.is_infinity:
        return False
    z = w.as_complex()
    if z == 0:
        return False
    if param.kind == SlsKind.FINITE and param.lambda_tilde == 0.0:
        return abs(math.log(abs(z))) <= tol.eps_mod
    if param.kind == SlsKind.INFINITE:
        return abs(math.remainder(cmath.phase(z), math.pi)) <= TWO_PI * tol.eps_mod
    rho = math.log(abs(z)) / param.lambda_tilde
    phi = cmath.phase(z) / TWO_PI
    return congruent_mod(rho, phi, 0.5, tol)


# ---------------------------------------------------------------------------
# angles and tangency
# ---------------------------------------------------------------------------

def _pencil_member_at(T: LoxodromeTriple, p: ExtendedPoint, tol: Tolerances) -> Cycle:
    param = lambda_from_triple(T, tol)
    if param.kind == SlsKind.FINITE and param.lambda_tilde == 0.0:
        return canonicalize(T.c2, tol)
    ch, _ = _member_through(T.c2, T.c3, zero_radius_at(p), tol)
    if classify(ch, tol) == CycleKind.POINT:
        raise PointNotOnCurve("pencil member degenerates at a limit point")
    return ch


def _lambda_value(T: LoxodromeTriple, tol: Tolerances) -> float:
    param = lambda_from_triple(T, tol)
    return param.lambda_tilde if param.kind == SlsKind.FINITE else math.inf


def _fold_half_open(x: float) -> float:
    """Fold an angle modulo pi into (-pi/2, pi/2]."""
    r = math.remainder(x, math.pi)
    if r <= -math.pi / 2.0:
        r += math.pi
    return r


def _cycle_tangent_direction(C: Cycle, p: ExtendedPoint, tol: Tolerances) -> complex:
    """A tangent direction (either orientation) of a cycle at a finite
    point on it."""
    if classify(C, tol) == CycleKind.LINE:
        return complex(-C.n, C.l)
    c, _ = center_radius(C, tol)
    return 1j * (p.as_complex() - c)


def intersection_angle(
    T: LoxodromeTriple,
    Tp: LoxodromeTriple,
    p,
    tol: Tolerances = DEFAULT_TOLERANCES,
    check_membership: bool = True,
) -> float:
    """Crossing angle of two curves at a common point.

    The angle between the pencil members through the point, corrected by
    each curve's fixed crossing angle arctan(lambda_tilde / 2 pi)
    against its own pencil; folded modulo pi into (-pi/2, pi/2].

    The cycle-cycle term is the arc cosine of the members' normalised
    product with its branch pinned by their tangent directions at the
    point; the cosine alone cannot separate an angle from its
    supplement once representatives are canonicalised.
    """
    p = _as_point(p)
    if check_membership:
        if not (
            contains_point(T, p, tol).member and contains_point(Tp, p, tol).member
        ):
            raise PointNotOnBoth(f"point {p.format()} is not on both curves")
    if p.is_infinity:
        # angles are preserved by conformal maps: move the point into view
        swap = MoebiusMap(0.0, 1.0, 1.0, 0.0)
        return intersection_angle(
            apply_map(swap, T, tol),
            apply_map(swap, Tp, tol),
            apply_to_point(swap, p),
            tol,
            check_membership=False,
        )
    ch = _pencil_member_at(T, p, tol)
    chp = _pencil_member_at(Tp, p, tol)
    psi = cmath.phase(
        _cycle_tangent_direction(chp, p, tol) / _cycle_tangent_direction(ch, p, tol)
    )
    ang = -psi
    ang -= math.atan(_lambda_value(T, tol) / TWO_PI)
    ang += math.atan(_lambda_value(Tp, tol) / TWO_PI)
    return _fold_half_open(ang)


def tangent_check(
    T: LoxodromeTriple, C: Cycle, p, tol: Tolerances = DEFAULT_TOLERANCES
) -> bool:
    """Is the cycle tangent to the curve at the given curve point?

    Two conditions: the cycle passes the point, and its crossing angle
    with the pencil member through the point equals the curve's fixed
    angle arctan(lambda_tilde / 2 pi) (both sign-folded)."""
    if classify(C, tol) == CycleKind.POINT:
        raise ZeroRadiusCandidate("tangency candidate must not be a point cycle")
    p = _as_point(p)
    if not contains_point(T, p, tol).member:
        raise PointNotOnCurve(f"point {p.format()} is not on the curve")
    if not passes(C, p, tol):
        return False
    ch = _pencil_member_at(T, p, tol)
    crossing = abs(
        math.remainder(clamped_acos(normalized_product(C, ch, tol), tol), math.pi)
    )
    target = abs(math.atan(_lambda_value(T, tol) / TWO_PI))
    return abs(crossing - target) <= tol.eps_angle


def _tangent_of_cycle_at(C: Cycle, p: ExtendedPoint, tol: Tolerances) -> Cycle:
    if not passes(C, p, tol):
        raise PointNotOnCurve("cycle does not pass the point")
    if classify(C, tol) == CycleKind.LINE:
        return canonicalize(C, tol)
    c, _ = center_radius(C, tol)
    u = p.as_complex() - c
    u /= abs(u)
    return from_line(p.as_complex(), p.as_complex() + 1j * u, tol)


def tangent_line_at(
    T: LoxodromeTriple, p, tol: Tolerances = DEFAULT_TOLERANCES
) -> Cycle:
    """Tangent line of the curve at a finite curve point, from the exact
    derivative of the normalised parametrisation."""
    p = _as_point(p)
    if p.is_infinity:
        raise InvalidInput("tangent line is constructed at finite points only")
    if not contains_point(T, p, tol).member:
        raise PointNotOnCurve(f"point {p.format()} is not on the curve")
    param = lambda_from_triple(T, tol)
    if param.kind == SlsKind.INFINITE:
        return _tangent_of_cycle_at(T.c1, p, tol)
    if param.lambda_tilde == 0.0:
        return _tangent_of_cycle_at(T.c2, p, tol)
    M = standard_map(T, tol)
    w = apply_to_point(M, p)
    if w.is_infinity:
        raise PointNotOnCurve("point maps to infinity under the normal form")
    z = w.as_complex()
    inv = M.inverse()
    denom = inv.c * z + inv.d
    velocity = (inv.det / (denom * denom)) * (param.rate * z)
    speed = abs(velocity)
    if speed == 0 or not math.isfinite(speed):
        raise PointNotOnCurve("curve direction is undefined at this point")
    velocity /= speed
    return from_line(p.as_complex(), p.as_complex() + velocity, tol)


# ---------------------------------------------------------------------------
# sampling and transport
# ---------------------------------------------------------------------------

def sample_curve(
    T: LoxodromeTriple,
    t_min: float,
    t_max: float,
    count: int,
    branch: str = "+",
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> list[ExtendedPoint]:
    """Curve points on a uniform parameter grid, per branch.

    Points that leave the finite plane come back as the infinity point,
    which doubles as the break marker for polyline rendering.  For the
    line-degenerate curve the real exponential at unit rate is used as
    the model parametrisation.
    """
    if count < 2:
        raise InvalidInput(f"need at least two samples, got {count!r}")
    if not t_max >= t_min:
        raise InvalidInput("empty parameter range")
    param = lambda_from_triple(T, tol)
    if param.kind == SlsKind.POINT:
        raise DegenerateTriple("the single-point curve cannot be sampled")
    rate = param.rate if param.kind == SlsKind.FINITE else complex(1.0, 0.0)
    back = _normalising_map(T, tol).inverse()
    signs = {"+": (1.0,), "-": (-1.0,), "both": (1.0, -1.0)}.get(branch)
    if signs is None:
        raise InvalidInput(f"branch must be '+', '-' or 'both', got {branch!r}")
    step = (t_max - t_min) / (count - 1)
    out: list[ExtendedPoint] = []
    for sgn in signs:
        for i in range(count):
            try:
                w = sgn * cmath.exp(rate * (t_min + step * i))
            except OverflowError:
                out.append(ExtendedPoint.infinity())
                continue
            out.append(apply_to_point(back, ExtendedPoint.from_complex(w)))
    return out


def apply_map(
    M: MoebiusMap, T: LoxodromeTriple, tol: Tolerances = DEFAULT_TOLERANCES
) -> LoxodromeTriple:
    """Transport a triple by a Moebius map; chirality is preserved and the
    image is re-validated."""
    return validate_triple(
        apply_to_cycle(M, T.c1, tol),
        apply_to_cycle(M, T.c2, tol),
        apply_to_cycle(M, T.c3, tol),
        T.sign,
        tol,
    )
