"""Profile functions for the boundary open book and their verification.

Three constructions live here, each a concrete realization of a pair
of plateau conditions joined by a polynomial blend:

  * ContactProfile: a plane curve r -> (f(r), g(r)) with f = C0 and
    g = C1 r^2 near 0, and f = e^(1-r), g = K past r = 1.  The contact
    condition for the associated 1-form f*lambda + g*dphi reduces to
    positivity of f^(n-1) (f g' - f' g), so the curve must never be
    parallel to its own tangent.
  * CornerCurve: the corner-rounding arc from (eps, 1-eps) to (-eps, 1),
    monotone in both coordinates.
  * BaseProfile: a radial weight h(s) with h = K s^2 near 0 and
    h = K e^(s-1) near 1, strictly increasing away from 0.

The blends are Hermite polynomials (quintic where two derivatives must
match, cubic where one does).  The plateau bullets pin endpoint values
and derivatives but not the shape in between; the realization here is
one admissible representative, and every strict inequality is verified
on a sampling grid rather than assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

# Mapping-cylinder Hamiltonian value held constant near the boundary.
BOUNDARY_HAMILTONIAN = 2.0 * math.pi


# ---------------------------------------------------------------------------
# Hermite blends


def _quintic(tau: float, p0: float, m0: float, s0: float,
             p1: float, m1: float, s1: float, w: float) -> float:
    """Quintic Hermite value: endpoint values, slopes, curvatures given.

    Slopes and curvatures are with respect to the original variable,
    over an interval of width w; tau runs over [0, 1].
    """
    t2 = tau * tau
    t3 = t2 * tau
    t4 = t3 * tau
    t5 = t4 * tau
    h00 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5
    h10 = tau - 6.0 * t3 + 8.0 * t4 - 3.0 * t5
    h20 = 0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5)
    h01 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5
    h11 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5
    h21 = 0.5 * (t3 - 2.0 * t4 + t5)
    return (p0 * h00 + w * m0 * h10 + w * w * s0 * h20
            + p1 * h01 + w * m1 * h11 + w * w * s1 * h21)


def _quintic_d(tau: float, p0: float, m0: float, s0: float,
               p1: float, m1: float, s1: float, w: float) -> float:
    """Derivative of _quintic with respect to the original variable."""
    t2 = tau * tau
    t3 = t2 * tau
    t4 = t3 * tau
    d00 = -30.0 * t2 + 60.0 * t3 - 30.0 * t4
    d10 = 1.0 - 18.0 * t2 + 32.0 * t3 - 15.0 * t4
    d20 = 0.5 * (2.0 * tau - 9.0 * t2 + 12.0 * t3 - 5.0 * t4)
    d01 = 30.0 * t2 - 60.0 * t3 + 30.0 * t4
    d11 = -12.0 * t2 + 28.0 * t3 - 15.0 * t4
    d21 = 0.5 * (3.0 * t2 - 8.0 * t3 + 5.0 * t4)
    dtau = (p0 * d00 + w * m0 * d10 + w * w * s0 * d20
            + p1 * d01 + w * m1 * d11 + w * w * s1 * d21)
    return dtau / w


def _cubic(tau: float, p0: float, m0: float, p1: float, m1: float, w: float) -> float:
    t2 = tau * tau
    t3 = t2 * tau
    h00 = 2.0 * t3 - 3.0 * t2 + 1.0
    h10 = t3 - 2.0 * t2 + tau
    h01 = -2.0 * t3 + 3.0 * t2
    h11 = t3 - t2
    return p0 * h00 + w * m0 * h10 + p1 * h01 + w * m1 * h11


def _cubic_d(tau: float, p0: float, m0: float, p1: float, m1: float, w: float) -> float:
    t2 = tau * tau
    d00 = 6.0 * t2 - 6.0 * tau
    d10 = 3.0 * t2 - 4.0 * tau + 1.0
    d01 = -6.0 * t2 + 6.0 * tau
    d11 = 3.0 * t2 - 2.0 * tau
    return (p0 * d00 + w * m0 * d10 + p1 * d01 + w * m1 * d11) / w


def _cell(x: float) -> str:
    return repr(float(x))


# ---------------------------------------------------------------------------
# contact profile


@dataclass(frozen=True)
class ContactProfile:
    """Plane profile curve with exact plateaus and a C2 quintic blend.

    Domain of r is [0, 1 + eps].  The blend occupies (eps/2, 1) and
    matches value, slope, and curvature of both plateaus, so f and g
    are C2 throughout.
    """

    c0: float
    c1: float
    k: float
    eps: float

    @property
    def r_max(self) -> float:
        return 1.0 + self.eps

    def _blend_tau(self, r: float) -> tuple[float, float]:
        a = self.eps / 2.0
        w = 1.0 - a
        return (r - a) / w, w

    def _check_domain(self, r: float) -> None:
        if not 0.0 <= r <= self.r_max:
            raise ValueError(f"r={r} outside the profile domain [0, {self.r_max}]")

    def f(self, r: float) -> float:
        self._check_domain(r)
        if r <= self.eps / 2.0:
            return self.c0
        if r >= 1.0:
            return math.exp(1.0 - r)
        tau, w = self._blend_tau(r)
        return _quintic(tau, self.c0, 0.0, 0.0, 1.0, -1.0, 1.0, w)

    def f_prime(self, r: float) -> float:
        self._check_domain(r)
        if r <= self.eps / 2.0:
            return 0.0
        if r >= 1.0:
            return -math.exp(1.0 - r)
        tau, w = self._blend_tau(r)
        return _quintic_d(tau, self.c0, 0.0, 0.0, 1.0, -1.0, 1.0, w)

    def g(self, r: float) -> float:
        self._check_domain(r)
        a = self.eps / 2.0
        if r <= a:
            return self.c1 * r * r
        if r >= 1.0:
            return self.k
        tau, w = self._blend_tau(r)
        return _quintic(tau, self.c1 * a * a, 2.0 * self.c1 * a, 2.0 * self.c1,
                        self.k, 0.0, 0.0, w)

    def g_prime(self, r: float) -> float:
        self._check_domain(r)
        a = self.eps / 2.0
        if r <= a:
            return 2.0 * self.c1 * r
        if r >= 1.0:
            return 0.0
        tau, w = self._blend_tau(r)
        return _quintic_d(tau, self.c1 * a * a, 2.0 * self.c1 * a, 2.0 * self.c1,
                          self.k, 0.0, 0.0, w)

    def determinant(self, r: float) -> float:
        """f g' - f' g: positive exactly when the curve misses its tangent."""
        return self.f(r) * self.g_prime(r) - self.f_prime(r) * self.g(r)

    def params(self) -> dict[str, float]:
        return {"c0": self.c0, "c1": self.c1, "k": self.k, "eps": self.eps}


def make_profile(c0: float = 2.0, c1: float = 1.0, k: float = 1.0,
                 eps: float = 0.1) -> ContactProfile:
    """Build the profile after validating the plateau constants."""
    if not c0 > 1.0:
        raise ValueError(f"c0 must exceed 1, got {c0}")
    if not c1 > 0.0:
        raise ValueError(f"c1 must be positive, got {c1}")
    if not k > 0.0:
        raise ValueError(f"k must be positive, got {k}")
    if not 0.0 < eps < 0.5:
        raise ValueError(f"eps must lie in (0, 1/2), got {eps}")
    return ContactProfile(c0=c0, c1=c1, k=k, eps=eps)


@dataclass(frozen=True)
class ProfileReport:
    """Grid minimum of f^(n-1) (f g' - f' g) over (0, 1+eps]."""

    n: int
    grid: int
    min_value: float
    argmin: float
    passed: bool
    params: dict[str, float] = field(default_factory=dict)
    notes: tuple[str, ...] = ()

    def as_dict(self) -> dict[str, object]:
        return {
            "n": self.n,
            "grid": self.grid,
            "min_value": self.min_value,
            "argmin": self.argmin,
            "passed": self.passed,
            "params": dict(self.params),
            "notes": list(self.notes),
        }


def verify_profile(profile: ContactProfile, n: int = 2, grid: int = 10_000) -> ProfileReport:
    """Sample the contact positivity quantity on (0, 1+eps].

    Works on anything exposing f, f_prime, g, g_prime, and r_max, so a
    deliberately degenerate profile can be fed in to watch it fail.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if grid < 2:
        raise ValueError(f"grid must be >= 2, got {grid}")
    r_max = profile.r_max
    best = math.inf
    best_r = float("nan")
    for i in range(1, grid + 1):
        r = r_max * i / grid
        fv = profile.f(r)
        value = fv ** (n - 1) * (fv * profile.g_prime(r) - profile.f_prime(r) * profile.g(r))
        if value < best:
            best = value
            best_r = r
    params = profile.params() if hasattr(profile, "params") else {}
    return ProfileReport(
        n=n,
        grid=grid,
        min_value=best,
        argmin=best_r,
        passed=best > 0.0,
        params=params,
        notes=("blend regularity: C2 quintic joins, not C-infinity",),
    )


def profile_csv(profile: ContactProfile, samples: int = 512) -> str:
    """CSV of (r, f, g, determinant) for plotting, r from 0 to 1+eps."""
    if samples < 2:
        raise ValueError(f"samples must be >= 2, got {samples}")
    lines = ["r,f,g,determinant"]
    for i in range(samples + 1):
        r = profile.r_max * i / samples
        lines.append(",".join(_cell(v) for v in
                              (r, profile.f(r), profile.g(r), profile.determinant(r))))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# corner curve


@dataclass(frozen=True)
class CornerCurve:
    """Corner-rounding arc r -> (f, g) on [-eps, eps], C1 at the joins.

    Straight pieces (eps, 1+r) for r <= -eps/2 and (-r, 1) for r >= 0;
    a cubic Hermite bridge in between with f strictly falling and g
    strictly rising.
    """

    eps: float

    def _tau(self, r: float) -> tuple[float, float]:
        w = self.eps / 2.0
        return (r + w) / w, w

    def _check_domain(self, r: float) -> None:
        if not -self.eps <= r <= self.eps:
            raise ValueError(f"r={r} outside [-{self.eps}, {self.eps}]")

    def f(self, r: float) -> float:
        self._check_domain(r)
        if r <= -self.eps / 2.0:
            return self.eps
        if r >= 0.0:
            return -r
        tau, w = self._tau(r)
        return _cubic(tau, self.eps, 0.0, 0.0, -1.0, w)

    def f_prime(self, r: float) -> float:
        self._check_domain(r)
        if r <= -self.eps / 2.0:
            return 0.0
        if r >= 0.0:
            return -1.0
        tau, w = self._tau(r)
        return _cubic_d(tau, self.eps, 0.0, 0.0, -1.0, w)

    def g(self, r: float) -> float:
        self._check_domain(r)
        if r <= -self.eps / 2.0:
            return 1.0 + r
        if r >= 0.0:
            return 1.0
        tau, w = self._tau(r)
        return _cubic(tau, 1.0 - self.eps / 2.0, 1.0, 1.0, 0.0, w)

    def g_prime(self, r: float) -> float:
        self._check_domain(r)
        if r <= -self.eps / 2.0:
            return 1.0
        if r >= 0.0:
            return 0.0
        tau, w = self._tau(r)
        return _cubic_d(tau, 1.0 - self.eps / 2.0, 1.0, 1.0, 0.0, w)

    def determinant(self, r: float) -> float:
        return self.f(r) * self.g_prime(r) - self.f_prime(r) * self.g(r)


@dataclass(frozen=True)
class CornerReport:
    eps: float
    samples: int
    endpoints_exact: bool
    interior_signs_ok: bool
    f_nonincreasing: bool
    g_nondecreasing: bool
    joins_c1: bool
    passed: bool

    def as_dict(self) -> dict[str, object]:
        return {
            "eps": self.eps,
            "samples": self.samples,
            "endpoints_exact": self.endpoints_exact,
            "interior_signs_ok": self.interior_signs_ok,
            "f_nonincreasing": self.f_nonincreasing,
            "g_nondecreasing": self.g_nondecreasing,
            "joins_c1": self.joins_c1,
            "passed": self.passed,
        }


def make_corner_curve(eps: float, samples: int = 2_000) -> tuple[CornerCurve, CornerReport]:
    """Build the corner arc and verify its three bullet conditions.

    Endpoint identities are checked exactly; the strict interior signs
    and the global monotonicity are sampled (samples >= 1000).
    """
    if not 0.0 < eps < 0.5:
        raise ValueError(f"eps must lie in (0, 1/2), got {eps}")
    if samples < 1_000:
        raise ValueError(f"need at least 1000 sample points, got {samples}")
    curve = CornerCurve(eps=eps)

    endpoints_exact = (
        curve.f(-eps) == eps
        and curve.g(-eps) == 1.0 - eps
        and curve.f(eps) == -eps
        and curve.g(eps) == 1.0
        and curve.f(0.0) == 0.0
        and curve.g(0.0) == 1.0
    )

    interior = True
    half = eps / 2.0
    for i in range(1, samples):
        r = -half + half * i / samples
        if not (curve.f_prime(r) < 0.0 and curve.g_prime(r) > 0.0):
            interior = False
            break

    f_noninc = True
    g_nondec = True
    prev_f = curve.f(-eps)
    prev_g = curve.g(-eps)
    for i in range(1, samples + 1):
        r = -eps + 2.0 * eps * i / samples
        fv, gv = curve.f(r), curve.g(r)
        if fv > prev_f + 1e-15:
            f_noninc = False
        if gv < prev_g - 1e-15:
            g_nondec = False
        prev_f, prev_g = fv, gv

    # One-sided limits of the bridge at tau = 0, 1 against the plateau
    # values and slopes; all closed forms, so 1e-12 is generous.
    w = half
    join_residuals = (
        _cubic(0.0, eps, 0.0, 0.0, -1.0, w) - eps,
        _cubic(1.0, eps, 0.0, 0.0, -1.0, w) - 0.0,
        _cubic_d(0.0, eps, 0.0, 0.0, -1.0, w) - 0.0,
        _cubic_d(1.0, eps, 0.0, 0.0, -1.0, w) - (-1.0),
        _cubic(0.0, 1.0 - half, 1.0, 1.0, 0.0, w) - (1.0 - half),
        _cubic(1.0, 1.0 - half, 1.0, 1.0, 0.0, w) - 1.0,
        _cubic_d(0.0, 1.0 - half, 1.0, 1.0, 0.0, w) - 1.0,
        _cubic_d(1.0, 1.0 - half, 1.0, 1.0, 0.0, w) - 0.0,
    )
    joins = max(abs(v) for v in join_residuals) < 1e-12

    report = CornerReport(
        eps=eps,
        samples=samples,
        endpoints_exact=endpoints_exact,
        interior_signs_ok=interior,
        f_nonincreasing=f_noninc,
        g_nondecreasing=g_nondec,
        joins_c1=joins,
        passed=endpoints_exact and interior and f_noninc and g_nondec and joins,
    )
    return curve, report


def corner_csv(curve: CornerCurve, samples: int = 512) -> str:
    """CSV of (r, f, g, determinant) along the corner arc."""
    if samples < 2:
        raise ValueError(f"samples must be >= 2, got {samples}")
    lines = ["r,f,g,determinant"]
    for i in range(samples + 1):
        r = -curve.eps + 2.0 * curve.eps * i / samples
        lines.append(",".join(_cell(v) for v in
                              (r, curve.f(r), curve.g(r), curve.determinant(r))))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# base profile


@dataclass(frozen=True)
class BaseProfile:
    """Radial weight h(s) on [0, 1]: K s^2 near 0, K e^(s-1) near 1.

    The quintic bridge on (eps, 1-eps) matches two derivatives at both
    ends.  The boundary Hamiltonian constant rides along for report
    embedding; nothing here recomputes it.
    """

    k: float
    eps: float
    boundary_hamiltonian: float = BOUNDARY_HAMILTONIAN

    def _check_domain(self, s: float) -> None:
        if not 0.0 <= s <= 1.0:
            raise ValueError(f"s={s} outside [0, 1]")

    def _blend(self, s: float) -> tuple[float, float]:
        w = 1.0 - 2.0 * self.eps
        return (s - self.eps) / w, w

    def h(self, s: float) -> float:
        self._check_domain(s)
        if s <= self.eps:
            return self.k * s * s
        if s >= 1.0 - self.eps:
            return self.k * math.exp(s - 1.0)
        tau, w = self._blend(s)
        e = self.k * math.exp(-self.eps)
        return _quintic(tau, self.k * self.eps ** 2, 2.0 * self.k * self.eps,
                        2.0 * self.k, e, e, e, w)

    def h_prime(self, s: float) -> float:
        self._check_domain(s)
        if s <= self.eps:
            return 2.0 * self.k * s
        if s >= 1.0 - self.eps:
            return self.k * math.exp(s - 1.0)
        tau, w = self._blend(s)
        e = self.k * math.exp(-self.eps)
        return _quintic_d(tau, self.k * self.eps ** 2, 2.0 * self.k * self.eps,
                          2.0 * self.k, e, e, e, w)


@dataclass(frozen=True)
class BaseReport:
    k: float
    eps: float
    samples: int
    zero_at_origin: bool
    plateaus_exact: bool
    increasing: bool
    passed: bool

    def as_dict(self) -> dict[str, object]:
        return {
            "k": self.k,
            "eps": self.eps,
            "samples": self.samples,
            "zero_at_origin": self.zero_at_origin,
            "plateaus_exact": self.plateaus_exact,
            "increasing": self.increasing,
            "passed": self.passed,
        }


def make_base_profile(k: float = 1.0, eps: float = 0.1) -> BaseProfile:
    if not k > 0.0:
        raise ValueError(f"k must be positive, got {k}")
    if not 0.0 < eps < 0.5:
        raise ValueError(f"eps must lie in (0, 1/2), got {eps}")
    return BaseProfile(k=k, eps=eps)


def verify_base_profile(bp: BaseProfile, samples: int = 2_000) -> BaseReport:
    """Check h(0) = 0, the two plateau formulas, and h' > 0 off the origin."""
    if samples < 100:
        raise ValueError(f"samples must be >= 100, got {samples}")
    zero = bp.h(0.0) == 0.0

    plateaus = True
    for i in range(1, 11):
        s = bp.eps * i / 10.0
        if bp.h(s) != bp.k * s * s:
            plateaus = False
        s = 1.0 - bp.eps + bp.eps * i / 10.0
        if bp.h(s) != bp.k * math.exp(s - 1.0):
            plateaus = False

    increasing = all(
        bp.h_prime(i / samples) > 0.0 for i in range(1, samples + 1)
    )
    return BaseReport(
        k=bp.k,
        eps=bp.eps,
        samples=samples,
        zero_at_origin=zero,
        plateaus_exact=plateaus,
        increasing=increasing,
        passed=zero and plateaus and increasing,
    )
