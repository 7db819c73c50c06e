"""Perfect-state-transfer detection and its necessary-condition pipeline.

Numeric search results are evidence, not proof: an empty search never claims
non-existence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import partitions, walkalg
from .spectral import (
    SUPPORT_TOL_DEFAULT,
    char_poly_exact,
    decompose,
    eigenvalue_gap,
    eigenvalue_support,
    transition_matrix,
)
from .polys import poly_divmod, poly_gcd, poly_degree

THRESHOLD_DEFAULT = 1 - 1e-9
T_MAX_DEFAULT = 50.0
DEN_BOUND_DEFAULT = 10**6

_GOLDEN = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class PstEvent:
    u: int
    v: int
    tau: float
    gamma: complex
    fidelity: float


def fidelity(sd, u, v, t):
    """|H(t)_{u,v}|, clamped to [0, 1]."""
    amp = sum(
        np.exp(1j * theta * t) * e[u, v]
        for theta, e in zip(sd.eigenvalues, sd.idempotents)
    )
    return min(abs(amp), 1.0)


# ---------------------------------------------------------------------------
# Time search

def _amplitude(thetas, coeffs, t):
    return np.sum(coeffs * np.exp(1j * np.multiply.outer(t, thetas)), axis=-1)


def _golden_max(f, lo, hi, xtol=1e-12):
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xtol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    x = (a + b) / 2
    return x, f(x)


def _polish_peak(thetas, coeffs, tau, halfwidth):
    """Sharpen a fidelity maximum by bisecting d/dt |amplitude|^2.

    Golden section alone bottoms out near sqrt(eps) in time because the
    fidelity is flat at a true peak; the derivative crosses zero linearly.
    """

    def deriv(t):
        h = _amplitude(thetas, coeffs, t)
        hp = np.sum(1j * thetas * coeffs * np.exp(1j * thetas * t))
        return 2 * (np.conj(h) * hp).real

    lo, hi = tau - halfwidth, tau + halfwidth
    dlo, dhi = deriv(lo), deriv(hi)
    if not (dlo > 0 > dhi):
        return tau
    for _ in range(200):
        mid = (lo + hi) / 2
        dm = deriv(mid)
        if dm == 0 or hi - lo < 1e-14:
            return mid
        if dm > 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def _search_amplitude(thetas, coeffs, t_max, threshold, rho):
    """Earliest t in (0, t_max] with |sum_r c_r exp(i theta_r t)| >= threshold."""
    if t_max <= 0:
        raise ValueError("t_max must be positive")
    step = math.pi / (100 * max(rho, 1.0))
    ts = np.arange(step, t_max + step / 2, step)
    if len(ts) == 0:
        ts = np.array([t_max])
    vals = np.abs(_amplitude(thetas, coeffs, ts))

    # a true peak can drop by at most (step/2) * rho * sum|c_r| <= pi/200
    # between grid samples; 0.02 leaves slack
    floor = threshold - 0.02
    peaks = []
    for i in range(len(ts)):
        if i == 0:
            # only the flat |amplitude| == 1 case (single support eigenvalue)
            # peaks at the first grid point; a merely decreasing start is the
            # trivial t -> 0 plateau of a diagonal entry
            ok = len(ts) == 1 or abs(vals[0] - vals[1]) < 1e-12
        else:
            ok = vals[i] >= vals[i - 1] and (i == len(ts) - 1 or vals[i] >= vals[i + 1])
        if ok and vals[i] >= floor:
            peaks.append(i)

    f = lambda t: abs(_amplitude(thetas, coeffs, t))
    for i in peaks:
        lo = max(ts[i] - step, step * 1e-9)
        hi = min(ts[i] + step, t_max)
        tau, fid = _golden_max(f, lo, hi)
        tau = _polish_peak(thetas, coeffs, tau, min(step, 1e-4))
        fid = f(tau)
        if fid >= threshold:
            return tau, min(fid, 1.0)
    return None


def search_pst(sd, u, v, t_max=T_MAX_DEFAULT, threshold=THRESHOLD_DEFAULT):
    """Grid scan plus local refinement for the earliest time with
    |H(t)_{u,v}| >= threshold; returns None when nothing reaches it."""
    if not 0 < threshold < 1:
        raise ValueError("threshold must lie in (0, 1)")
    thetas = np.asarray(sd.eigenvalues)
    coeffs = np.array([e[u, v] for e in sd.idempotents], dtype=complex)
    hit = _search_amplitude(thetas, coeffs, t_max, threshold, sd.spectral_radius)
    if hit is None:
        return None
    tau, fid = hit
    amp = _amplitude(thetas, coeffs, tau)
    return PstEvent(u=u, v=v, tau=float(tau), gamma=complex(amp / abs(amp)),
                    fidelity=float(fid))


def check_periodicity(sd, u, t_max=T_MAX_DEFAULT, threshold=THRESHOLD_DEFAULT,
                      support_class=None):
    """Earliest time with |H(t)_{u,u}| >= threshold, or None.

    When the support class is known, the closed-form period candidates
    (2*pi for integer supports, 2*pi/sqrt(delta) for quadratic ones with
    a = 0) are tested before the scan.
    """
    thetas = np.asarray(sd.eigenvalues)
    coeffs = np.array([e[u, u] for e in sd.idempotents], dtype=complex)

    candidates = []
    if support_class is not None:
        if support_class.kind == "Integer":
            candidates.append(2 * math.pi)
        elif support_class.kind == "Quadratic" and support_class.a == 0:
            candidates.append(2 * math.pi / math.sqrt(support_class.delta))
    hits = []
    for cand in candidates:
        if abs(_amplitude(thetas, coeffs, cand)) >= threshold:
            hits.append(cand)
    found = _search_amplitude(thetas, coeffs, t_max, threshold, sd.spectral_radius)
    if found is not None:
        hits.append(found[0])
    return min(hits) if hits else None


@dataclass(frozen=True)
class PstVerification:
    """Structural checks of a PST event against the spectral decomposition."""

    maps_u_to_v: bool
    maps_v_to_u: bool
    periodic_u: bool
    periodic_v: bool
    diag_phase_matches: bool
    sign_pattern: tuple  # (support index, +1 or -1) pairs
    f_plus_f_minus_zero: bool
    f_plus_nonzero: bool
    f_minus_nonzero: bool

    @property
    def passed(self):
        return all((
            self.maps_u_to_v, self.maps_v_to_u, self.periodic_u, self.periodic_v,
            self.diag_phase_matches, self.f_plus_f_minus_zero,
            self.f_plus_nonzero, self.f_minus_nonzero,
        ))


def verify_pst_event(sd, event, support_tolerance=SUPPORT_TOL_DEFAULT, tol=1e-8):
    """Re-verify a PST event: swap action, period 2*tau, and the signed
    idempotent split F+ / F- with F+ F- = 0."""
    u, v, tau, gamma = event.u, event.v, event.tau, event.gamma
    h = transition_matrix(sd, tau)
    if abs(h[v, u]) < event.fidelity - 1e-6:
        raise ValueError("event fails re-verification against this decomposition")
    n = sd.n
    eu = np.zeros(n)
    eu[u] = 1
    ev = np.zeros(n)
    ev[v] = 1
    maps_u_to_v = np.max(np.abs(h @ eu - gamma * ev)) < tol
    maps_v_to_u = np.max(np.abs(h @ ev - gamma * eu)) < tol
    h2 = transition_matrix(sd, 2 * tau)
    periodic_u = abs(abs(h2[u, u]) - 1) < tol
    periodic_v = abs(abs(h2[v, v]) - 1) < tol
    diag_phase_matches = abs(h2[u, u] - gamma**2) < tol

    support = sorted(eigenvalue_support(sd, u, support_tolerance))
    signs = []
    for r in support:
        ratio = np.exp(1j * sd.eigenvalues[r] * tau) / gamma
        signs.append((r, 1 if ratio.real >= 0 else -1))
    f_plus = sum(sd.idempotents[r] for r, s in signs if s == 1)
    f_minus = sum(sd.idempotents[r] for r, s in signs if s == -1)
    plus_nonzero = any(s == 1 for _, s in signs)
    minus_nonzero = any(s == -1 for _, s in signs)
    if plus_nonzero and minus_nonzero:
        prod_zero = bool(np.max(np.abs(f_plus @ f_minus)) < tol)
    else:
        prod_zero = True
    return PstVerification(
        maps_u_to_v=maps_u_to_v,
        maps_v_to_u=maps_v_to_u,
        periodic_u=periodic_u,
        periodic_v=periodic_v,
        diag_phase_matches=diag_phase_matches,
        sign_pattern=tuple(signs),
        f_plus_f_minus_zero=prod_zero,
        f_plus_nonzero=plus_nonzero,
        f_minus_nonzero=minus_nonzero,
    )


# ---------------------------------------------------------------------------
# Arithmetic conditions

@dataclass(frozen=True)
class RatioResult:
    holds: bool
    witness: tuple = None  # failing (theta_k, theta_l, theta_r, theta_s)


def reconstruct_rational(x, denominator_bound=DEN_BOUND_DEFAULT,
                         residual_tol=1e-9):
    """Continued-fraction rational reconstruction of a float.

    Expands x and accepts a convergent only when the expansion effectively
    terminates (a partial quotient beyond the denominator bound); a float
    that is a small-height rational plus rounding noise terminates almost
    immediately, while a genuinely irrational x runs its denominator past
    the bound first. Returns a Fraction or None.
    """
    frac = Fraction(x)
    a = math.floor(frac)
    h0, k0 = 1, 0
    h1, k1 = a, 1
    rem = frac - a
    while True:
        if rem == 0 or Fraction(1, 1) / rem > denominator_bound:
            cand = Fraction(h1, k1)
            if k1 <= denominator_bound and abs(x - float(cand)) < residual_tol:
                return cand
            return None
        rem = 1 / rem
        a = math.floor(rem)
        rem -= a
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        if k1 > denominator_bound:
            return None


def ratio_condition(support_values, denominator_bound=DEN_BOUND_DEFAULT,
                    residual_tol=1e-9):
    """All ratios (theta_k - theta_l)/(theta_r - theta_s) over the support must
    be rational; the largest-gap pair fixes the denominator."""
    vals = sorted(set(float(v) for v in support_values), reverse=True)
    if len(vals) < 2:
        raise ValueError("ratio condition needs at least two distinct values")
    tr, ts = vals[0], vals[-1]
    den = tr - ts
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            ratio = (vals[i] - vals[j]) / den
            if reconstruct_rational(ratio, denominator_bound, residual_tol) is None:
                return RatioResult(holds=False, witness=(vals[i], vals[j], tr, ts))
    return RatioResult(holds=True)


@dataclass(frozen=True)
class SupportClass:
    """Arithmetic type of an eigenvalue support: all integers, all of the form
    (a + b_i sqrt(delta))/2, or neither."""

    kind: str  # "Integer" | "Quadratic" | "Neither"
    a: Fraction = None
    delta: int = None
    b_values: tuple = None


def squarefree_part(m):
    if m <= 0:
        raise ValueError("need a positive integer")
    out = 1
    d = 2
    while d * d <= m:
        e = 0
        while m % d == 0:
            m //= d
            e += 1
        if e % 2:
            out *= d
        d += 1
    return out * m


def _is_exact_root(poly, x):
    return poly(Fraction(x)) == 0


def classify_support(support_values, exact_poly, tol=1e-8):
    """Classify a support as Integer / Quadratic / Neither, with exact
    verification of every fitted value against the characteristic polynomial."""
    vals = [float(v) for v in support_values]
    roots = np.roots([float(c) for c in exact_poly.coeffs])
    for v in vals:
        # loose: np.roots loses accuracy at repeated roots; this only guards
        # against values unrelated to the polynomial
        if np.min(np.abs(roots - v)) > 1e-3:
            raise ValueError(f"value {v} is not a root of the polynomial")

    if all(abs(v - round(v)) < tol for v in vals):
        if all(_is_exact_root(exact_poly, round(v)) for v in set(vals)):
            return SupportClass(kind="Integer")

    irrational = [v for v in vals if abs(v - round(v)) >= tol]
    if irrational:
        deltas = set()
        for i in range(len(irrational)):
            for j in range(i + 1, len(irrational)):
                d2 = (irrational[i] - irrational[j]) ** 2
                if d2 > tol and abs(d2 - round(d2)) < tol:
                    sf = squarefree_part(round(d2))
                    if sf > 1:
                        deltas.add(sf)
        a_cands = set()
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                s = vals[i] + vals[j]
                a_cands.add(Fraction(round(2 * s), 2))
        for delta in sorted(deltas):
            sq = math.sqrt(delta)
            for a in sorted(a_cands):
                fit = _fit_quadratic(vals, exact_poly, a, delta, sq, tol)
                if fit is not None:
                    return fit
    return SupportClass(kind="Neither")


def _fit_quadratic(vals, exact_poly, a, delta, sq, tol):
    bs = []
    for v in vals:
        b2 = (2 * v - float(a)) / sq * 2  # 2*b_i must be an integer
        if abs(b2 - round(b2)) >= tol:
            return None
        b = Fraction(round(b2), 2)
        if abs(v - (float(a) + float(b) * sq) / 2) >= tol:
            return None
        bs.append(b)
    for b in set(bs):
        if b == 0:
            if not _is_exact_root(exact_poly, a / 2):
                return None
        else:
            # minimal polynomial of (a + b sqrt(delta))/2 must divide phi
            quad = [Fraction(1), -a, (a * a - b * b * delta) / 4]
            _, rem = poly_divmod([Fraction(c) for c in exact_poly.coeffs], quad)
            if poly_degree(rem) >= 0:
                return None
    return SupportClass(kind="Quadratic", a=a, delta=delta, b_values=tuple(bs))


def rho_squared_integer(sd, exact_poly, tol=1e-8):
    """True iff the squared spectral radius is an integer, verified exactly."""
    rho = sd.spectral_radius
    r2 = rho * rho
    m = round(r2)
    if abs(r2 - m) > tol:
        return False
    if abs(rho - round(rho)) < tol:
        return _is_exact_root(exact_poly, round(rho))
    # rho = sqrt(m): check gcd(phi, t^2 - m) is nontrivial
    g = poly_gcd(exact_poly.coeffs, [1, 0, -m])
    return poly_degree(g) > 0


# ---------------------------------------------------------------------------
# Aggregated pipeline

@dataclass(frozen=True)
class TransferReport:
    """Every necessary-condition verdict for a vertex pair, plus any numeric
    PST event (all conditions evaluated, no short-circuiting)."""

    u: int
    v: int
    n: int
    cospectral: bool
    equal_supports: bool
    sign_condition: bool
    ratio: RatioResult
    support_class: SupportClass
    rho_squared_is_integer: bool
    delta_partition_equal: bool
    v_singleton_in_delta_u: bool
    controllable_u: bool
    controllable_v: bool
    stabilizer_equal: bool  # None when n exceeds the brute-force cap
    gap: object
    pst_found: PstEvent = None
    verification: PstVerification = None

    @property
    def controllability_ok(self):
        # controllability only forbids PST on >= 4 vertices
        if self.n < 4:
            return True
        return not (self.controllable_u or self.controllable_v)

    def verdicts(self):
        out = {
            "cospectral": self.cospectral,
            "equal_supports": self.equal_supports,
            "sign_condition": self.sign_condition,
            "ratio_condition": self.ratio.holds,
            "support_class_not_neither": self.support_class.kind != "Neither",
            "rho_squared_integer": self.rho_squared_is_integer,
            "delta_partition_equal": self.delta_partition_equal,
            "controllability": self.controllability_ok,
        }
        if self.stabilizer_equal is not None:
            out["automorphism_stabilizer_equal"] = self.stabilizer_equal
        return out

    @property
    def all_pass(self):
        return all(self.verdicts().values())


def necessary_conditions(g, u, v, grouping_tolerance=None,
                         support_tolerance=SUPPORT_TOL_DEFAULT,
                         denominator_bound=DEN_BOUND_DEFAULT,
                         exact_cap=64, brute_force_cap=10,
                         run_stabilizer_check=True):
    """Evaluate every necessary condition for PST between u and v."""
    if u == v:
        raise ValueError("vertices must be distinct")
    if not (0 <= u < g.n and 0 <= v < g.n):
        raise ValueError("vertex out of range")
    if not g.is_connected():
        raise ValueError("necessary-condition pipeline requires a connected graph")

    sd = decompose(g, grouping_tolerance)
    phi = char_poly_exact(g, cap=exact_cap)

    cosp_poly = walkalg.cospectral_via_charpoly(g, u, v, cap=exact_cap)
    cosp_gram = walkalg.cospectral_via_gram(g, u, v, cap=exact_cap)
    if cosp_poly != cosp_gram:
        raise walkalg.InternalCheckError(
            f"cospectrality routes disagree on pair ({u}, {v})"
        )

    sup_u = eigenvalue_support(sd, u, support_tolerance)
    sup_v = eigenvalue_support(sd, v, support_tolerance)
    equal_supports = sup_u == sup_v

    sign_ok = True
    for r in sorted(sup_u | sup_v):
        x = sd.idempotents[r][:, u]
        y = sd.idempotents[r][:, v]
        if min(np.max(np.abs(x - y)), np.max(np.abs(x + y))) >= 1e-7:
            sign_ok = False
            break

    common = sorted(sup_u & sup_v)
    common_values = [float(sd.eigenvalues[r]) for r in common]
    if len(common_values) >= 2:
        ratio = ratio_condition(common_values, denominator_bound)
    else:
        ratio = RatioResult(holds=True)

    sup_values = [float(sd.eigenvalues[r]) for r in sorted(sup_u)]
    sclass = classify_support(sup_values, phi)
    rho_ok = rho_squared_integer(sd, phi)

    du = partitions.delta_u(g, u)
    dv = partitions.delta_u(g, v)
    delta_equal = du == dv
    v_singleton = (v,) in du.cells

    if g.n >= 2:
        ctrl_u = walkalg.is_controllable(g, u, cap=exact_cap)
        ctrl_v = walkalg.is_controllable(g, v, cap=exact_cap)
    else:
        ctrl_u = ctrl_v = False

    stab_equal = None
    if run_stabilizer_check and g.n <= brute_force_cap:
        stab_equal = partitions.stabilizers_equal(g, u, v, n_cap=brute_force_cap)

    return TransferReport(
        u=u, v=v, n=g.n,
        cospectral=cosp_poly,
        equal_supports=equal_supports,
        sign_condition=sign_ok,
        ratio=ratio,
        support_class=sclass,
        rho_squared_is_integer=rho_ok,
        delta_partition_equal=delta_equal,
        v_singleton_in_delta_u=v_singleton,
        controllable_u=ctrl_u,
        controllable_v=ctrl_v,
        stabilizer_equal=stab_equal,
        gap=eigenvalue_gap(g, grouping_tolerance) if g.n >= 2 else None,
    )


def analyze_pair(g, u, v, t_max=T_MAX_DEFAULT, threshold=THRESHOLD_DEFAULT,
                 **kwargs):
    """necessary_conditions plus the numeric time search and, when a PST event
    is found, its structural verification."""
    report = necessary_conditions(g, u, v, **kwargs)
    sd = decompose(g, kwargs.get("grouping_tolerance"))
    event = search_pst(sd, u, v, t_max=t_max, threshold=threshold)
    verification = None
    if event is not None:
        verification = verify_pst_event(
            sd, event, kwargs.get("support_tolerance", SUPPORT_TOL_DEFAULT)
        )
    return TransferReport(
        **{**report.__dict__, "pst_found": event, "verification": verification}
    )


def finiteness_bound(k):
    """Bounds behind the finiteness result for maximum valency k: support size,
    eccentricity, and vertex count."""
    if k < 1:
        raise ValueError("valency bound must be >= 1")
    s = 2 * k + 1
    support_bound = math.isqrt(2 * s * s - 1) + 1  # ceil(s * sqrt(2)), exact
    eccentricity_bound = support_bound
    vertex_bound = 1 + sum(k * (k - 1) ** (d - 1) for d in range(1, eccentricity_bound + 1))
    return support_bound, eccentricity_bound, vertex_bound
