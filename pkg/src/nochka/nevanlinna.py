"""Nevanlinna functionals for explicit curves.

Characteristic and proximity are circle averages computed by doubling
trapezoid quadrature (spectrally accurate for periodic integrands); zero
divisors are exact for polynomial data and argument-principle counts for
exponential sums; counting functions are closed forms over divisors.
The report builders evaluate both sides of the main inequalities and
record slack per radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from .curves import ComposedTarget, CurveCoordinate, ProjectiveCurve, compose_polynomial
from .errors import QuadratureError, VerificationError
from .geometry import Arrangement, PositionReport, check_subgeneral_position
from .linalg import Echelon
from .poly import Polynomial, monomials_of_degree
from .rootfind import poly_roots_with_multiplicity, zeros_in_disk
from .univar import QQi, UnivariatePoly, poly_gcd_many

DEFAULT_QUAD_TOL = 1e-9
QUAD_K0 = 6
QUAD_KMAX = 20
PERTURB_FACTOR = 1 + 1e-6
VALUE_FLOOR = 1e-250


class _NearCircleZero(Exception):
    """A quadrature sample landed on (numerically) a zero of the integrand's argument."""


def _circle_average(sample, r: float, *, tol: float = DEFAULT_QUAD_TOL) -> float:
    """Mean over the circle of radius r by doubling uniform samples.

    `sample(thetas, r)` returns integrand values.  Uniform-sample means on
    a periodic integrand are the trapezoid rule; doubling stops once two
    successive levels agree within `tol`.
    """
    n = 1 << QUAD_K0
    thetas = np.arange(n) * (2 * np.pi / n)
    current = float(np.mean(sample(thetas, r)))
    diff = math.inf
    for k in range(QUAD_K0 + 1, QUAD_KMAX + 1):
        n2 = 1 << k
        fresh = np.arange(1, n2, 2) * (2 * np.pi / n2)
        nxt = 0.5 * (current + float(np.mean(sample(fresh, r))))
        diff = abs(nxt - current)
        current = nxt
        if diff < tol:
            return current
    raise QuadratureError("circle quadrature did not converge", achieved=diff)


def _averaged_with_perturbation(sample, r: float, *, tol: float) -> tuple[float, float]:
    """Run `_circle_average`, inflating r by relative 1e-6 steps on near-zero hits.

    Returns (value, radius actually used).
    """
    r_eff = r
    for _ in range(6):
        try:
            return _circle_average(sample, r_eff, tol=tol), r_eff
        except _NearCircleZero:
            r_eff *= PERTURB_FACTOR
    raise QuadratureError(f"integrand stayed singular near radius {r} after perturbations")


@dataclass(frozen=True)
class ZeroDivisor:
    """Zeros with multiplicities; complete for |z| < radius_of_validity."""

    entries: tuple[tuple[complex, int], ...]
    radius_of_validity: float

    def counting(self, r: float, truncation: int | None = None) -> float:
        return counting_function(self, r, truncation)

    def total_multiplicity(self, within: float | None = None) -> int:
        return sum(k for z, k in self.entries
                   if within is None or abs(z) < within)

    def as_dict(self) -> dict:
        return {
            "entries": [{"z": [z.real, z.imag], "multiplicity": k} for z, k in self.entries],
            "radius_of_validity": self.radius_of_validity,
        }


def characteristic(curve: ProjectiveCurve, r: float, *, tol: float = DEFAULT_QUAD_TOL) -> float:
    """Circle average of log max_i |f_i| at radius r."""
    if r < 1:
        raise ValueError("radius must be >= 1")

    def sample(thetas, rr):
        L, _ = curve.circle_values(rr, thetas)
        if not np.all(np.isfinite(L)):
            raise _NearCircleZero
        return L

    value, _ = _averaged_with_perturbation(sample, r, tol=tol)
    return value


def zero_divisor(obj, radius: float | None = None) -> ZeroDivisor:
    """Zero divisor of a polynomial (exact, valid everywhere) or of an
    exponential sum / composed target inside |z| < radius (argument principle)."""
    if isinstance(obj, CurveCoordinate) and obj.is_polynomial:
        obj = obj.poly
    if isinstance(obj, UnivariatePoly):
        if obj.is_zero:
            raise ValueError("zero function has no zero divisor")
        return ZeroDivisor(tuple(poly_roots_with_multiplicity(obj)), math.inf)
    if radius is None:
        raise ValueError("a radius is required for non-polynomial functions")
    if isinstance(obj, CurveCoordinate):
        fn, dfn = obj.eval_array, obj.derivative().eval_array
    elif isinstance(obj, ComposedTarget):
        fn, dfn = obj.value, obj.deriv
    else:
        raise TypeError(f"cannot take the zero divisor of {type(obj).__name__}")
    result = zeros_in_disk(fn, dfn, radius)
    return ZeroDivisor(tuple(result.zeros), result.radius_used)


def counting_function(divisor: ZeroDivisor, r: float, truncation: int | None = None) -> float:
    """Logarithmically weighted zero count from radius 1: zeros inside the
    unit disk contribute log r, others log(r/|z|), multiplicities capped at
    the truncation level."""
    if r < 1:
        raise ValueError("radius must be >= 1")
    if r > divisor.radius_of_validity * (1 + 1e-12):
        raise ValueError(f"radius {r} exceeds divisor validity {divisor.radius_of_validity}")
    finite_level = truncation is not None and truncation != math.inf
    if finite_level and truncation < 1:
        raise ValueError("truncation level must be >= 1")
    total = 0.0
    for z, k in divisor.entries:
        if finite_level:
            k = min(k, int(truncation))
        a = abs(z)
        if a < 1:
            total += k * math.log(r)
        elif a < r:
            total += k * math.log(r / a)
    return total


def proximity(curve: ProjectiveCurve, target: Polynomial, r: float, *,
              tol: float = DEFAULT_QUAD_TOL) -> float:
    """Circle average of log(||f||^d ||Q|| / |Q(f)|) for a homogeneous target Q."""
    if r < 1:
        raise ValueError("radius must be >= 1")
    value, _ = _proximity_impl(curve, target, r, tol)
    return value


def _proximity_impl(curve, target: Polynomial, r: float, tol: float) -> tuple[float, float]:
    if target.is_zero or not target.is_homogeneous:
        raise ValueError("target must be nonzero homogeneous")
    if target.nvars != curve.ambient_dim + 1:
        raise ValueError("variable count mismatch between target and curve")
    if curve.all_polynomial and compose_polynomial(target, curve).is_zero:
        raise ValueError("target vanishes identically on the curve")
    log_norm = math.log(float(target.max_abs_coeff()))

    def sample(thetas, rr):
        _, W = curve.circle_values(rr, thetas)
        qv = target.evaluate_array(list(W))
        av = np.abs(qv)
        if not np.all(np.isfinite(av)) or np.any(av < VALUE_FLOOR):
            raise _NearCircleZero
        return log_norm - np.log(av)

    return _averaged_with_perturbation(sample, r, tol=tol)


@dataclass(frozen=True)
class ConstancyReport:
    """Per-radius difference between a circle integral and a counting function."""

    radii: tuple[float, ...]
    radii_used: tuple[float, ...]
    integrals: tuple[float, ...]
    countings: tuple[float, ...]
    constant: float
    max_deviation: float

    def as_dict(self) -> dict:
        return {
            "radii": list(self.radii),
            "radii_used": list(self.radii_used),
            "integrals": list(self.integrals),
            "countings": list(self.countings),
            "constant": self.constant,
            "max_deviation": self.max_deviation,
        }


def jensen_check(phi: CurveCoordinate | UnivariatePoly, radii: Sequence[float], *,
                 tol: float = DEFAULT_QUAD_TOL) -> ConstancyReport:
    """Check that the circle average of log|phi| minus the counting function
    of phi's zeros is constant across the given radii."""
    if isinstance(phi, UnivariatePoly):
        phi = CurveCoordinate.from_poly(phi)
    if phi.is_zero:
        raise ValueError("phi must be nonzero")
    radii = sorted(float(r) for r in radii)
    if not radii or radii[0] < 1:
        raise ValueError("radii must be >= 1")
    at_zero = phi.eval_array(np.array([0.0 + 0.0j]))[0]
    if abs(at_zero) < 1e-15:
        raise ValueError("phi(0) = 0: factor out the vanishing power of z first")
    divisor = zero_divisor(phi, radii[-1] * 1.001 if not phi.is_polynomial else None)

    def sample(thetas, rr):
        z = rr * np.exp(1j * thetas)
        values = phi.log_abs_array(z)
        if not np.all(np.isfinite(values)):
            raise _NearCircleZero
        return values

    used, integrals, countings, diffs = [], [], [], []
    for r in radii:
        integral, r_eff = _averaged_with_perturbation(sample, r, tol=tol)
        used.append(r_eff)
        integrals.append(integral)
        countings.append(counting_function(divisor, r_eff))
        diffs.append(integral - countings[-1])
    constant = sum(diffs) / len(diffs)
    max_dev = max(abs(d - constant) for d in diffs)
    return ConstancyReport(tuple(radii), tuple(used), tuple(integrals),
                           tuple(countings), constant, max_dev)


def wronskian(functions: Sequence[UnivariatePoly | CurveCoordinate]) -> UnivariatePoly:
    """Determinant of the derivative matrix of polynomial functions, exactly."""
    polys = [f.poly if isinstance(f, CurveCoordinate) else f for f in functions]
    if any(p is None for p in polys):
        raise ValueError("the Wronskian here requires polynomial inputs")
    k = len(polys)
    if k == 0:
        raise ValueError("need at least one function")
    derivs: list[list[UnivariatePoly]] = []
    for p in polys:
        row = [p]
        for _ in range(k - 1):
            row.append(row[-1].derivative())
        derivs.append(row)
    full = (1 << k) - 1
    memo: dict[int, UnivariatePoly] = {0: UnivariatePoly([1])}

    def det(mask: int) -> UnivariatePoly:
        if mask in memo:
            return memo[mask]
        col = k - mask.bit_count()
        total = UnivariatePoly()
        sign = 1
        m = mask
        while m:
            low = m & -m
            i = low.bit_length() - 1
            sub = det(mask ^ low)
            term = derivs[i][col] * sub
            total = total + term if sign > 0 else total - term
            sign = -sign
            m ^= low
        memo[mask] = total
        return total

    return det(full)


@dataclass(frozen=True)
class WronskianPointCheck:
    point: complex
    coordinate_orders: tuple[int, ...]
    product_order: int
    wronskian_order: int
    bound: int
    ok: bool


@dataclass(frozen=True)
class WronskianReport:
    points: tuple[WronskianPointCheck, ...]
    ok: bool

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "points": [
                {"z": [p.point.real, p.point.imag],
                 "coordinate_orders": list(p.coordinate_orders),
                 "product_order": p.product_order,
                 "wronskian_order": p.wronskian_order,
                 "bound": p.bound, "ok": p.ok}
                for p in self.points
            ],
        }


def wronskian_divisor_check(coordinates: Sequence[UnivariatePoly | CurveCoordinate]) -> WronskianReport:
    """At every zero of the coordinate product, check
    ord(product) - ord(W) <= sum_i min(ord f_i, M) with exact multiplicities."""
    polys = [c.poly if isinstance(c, CurveCoordinate) else c for c in coordinates]
    if any(p is None or p.is_zero for p in polys):
        raise ValueError("coordinates must be nonzero polynomials")
    M = len(polys) - 1
    if poly_gcd_many(polys).degree > 0:
        raise ValueError("coordinates share a common factor; representation is not reduced")
    w = wronskian(polys)
    if w.is_zero:
        raise ValueError("linearly dependent coordinates")

    tol = 1e-8
    clusters: list[list] = []  # [center, orders per coordinate, wronskian order]

    def locate(z: complex) -> list | None:
        for cl in clusters:
            if abs(z - cl[0]) <= tol * (1 + abs(cl[0])):
                return cl
        return None

    for i, p in enumerate(polys):
        if p.degree < 1:
            continue
        for z, k in poly_roots_with_multiplicity(p):
            cl = locate(z)
            if cl is None:
                cl = [z, [0] * len(polys), 0]
                clusters.append(cl)
            cl[1][i] += k
    if w.degree >= 1:
        for z, k in poly_roots_with_multiplicity(w):
            cl = locate(z)
            if cl is not None:
                cl[2] += k
    points = []
    for center, orders, word in clusters:
        product_order = sum(orders)
        bound = sum(min(o, M) for o in orders)
        points.append(WronskianPointCheck(center, tuple(orders), product_order,
                                          word, bound, product_order - word <= bound))
    points.sort(key=lambda p: (round(abs(p.point), 9), round(np.angle(p.point), 9)))
    return WronskianReport(tuple(points), all(p.ok for p in points))


@dataclass(frozen=True)
class CartanRadiusRow:
    r: float
    T: float
    max_sum_integral: float
    wronskian_counting: float
    lhs: float
    rhs: float
    slack: float


@dataclass(frozen=True)
class CartanReport:
    epsilon: float
    general_position_subsets: int
    rows: tuple[CartanRadiusRow, ...]
    caveat: str

    def as_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "general_position_subsets": self.general_position_subsets,
            "caveat": self.caveat,
            "rows": [vars(r) | {} for r in self.rows],
        }


def cartan_ru_check(curve: ProjectiveCurve, hyperplanes: Sequence[Polynomial],
                    epsilon, radii: Sequence[float], *,
                    tol: float = DEFAULT_QUAD_TOL) -> CartanReport:
    """Evaluate max-sum proximity over general-position (n+1)-subsets plus the
    Wronskian counting function against (n+1+eps) T(r), per radius.

    A vacuous max (no general-position subset) contributes zero.  Negative
    slack at isolated radii is reported, not failed: the inequality allows
    an exceptional radius set of finite measure.
    """
    if not curve.all_polynomial:
        raise ValueError("this check needs a polynomial curve")
    n = curve.ambient_dim
    eps = float(epsilon)
    radii = sorted(float(r) for r in radii)
    if not radii or radii[0] < 1:
        raise ValueError("radii must be >= 1")
    for h in hyperplanes:
        if h.is_zero or h.degree != 1 or not h.is_homogeneous:
            raise ValueError("hyperplanes must be nonzero linear forms")
        if h.nvars != n + 1:
            raise ValueError("hyperplane variable count mismatch")
    w = wronskian([c.poly for c in curve.coordinates])
    if w.is_zero:
        raise ValueError("degenerate curve: vanishing Wronskian")
    wdiv = zero_divisor(w) if w.degree >= 1 else ZeroDivisor((), math.inf)

    def coeff_vector(h: Polynomial) -> list[Fraction]:
        vec = [Fraction(0)] * (n + 1)
        for mono, c in h.terms.items():
            vec[mono.index(1)] = c
        return vec

    vectors = [coeff_vector(h) for h in hyperplanes]
    ksets = []
    for combo in combinations(range(len(hyperplanes)), n + 1):
        ech = Echelon()
        if all(ech.insert(vectors[i]) for i in combo):
            ksets.append(combo)
    log_norms = [math.log(float(h.max_abs_coeff())) for h in hyperplanes]

    def sample(thetas, rr):
        L, W = curve.circle_values(rr, thetas)
        if not ksets:
            return np.zeros(thetas.shape)
        terms = []
        for h, ln in zip(hyperplanes, log_norms):
            hv = np.abs(h.evaluate_array(list(W)))
            if not np.all(np.isfinite(hv)) or np.any(hv < VALUE_FLOOR):
                raise _NearCircleZero
            terms.append(ln - np.log(hv))
        stacked = np.stack(terms)
        best = None
        for combo in ksets:
            s = stacked[list(combo)].sum(axis=0)
            best = s if best is None else np.maximum(best, s)
        return best

    rows = []
    for r in radii:
        T = characteristic(curve, r, tol=tol)
        integral, r_eff = _averaged_with_perturbation(sample, r, tol=tol)
        ncount = counting_function(wdiv, r_eff)
        lhs = integral + ncount
        rhs = (n + 1 + eps) * T
        rows.append(CartanRadiusRow(r, T, integral, ncount, lhs, rhs, rhs - lhs))
    caveat = ("the inequality admits an exceptional radius set of finite measure; "
              "negative slack at isolated radii is recorded, not failed")
    return CartanReport(eps, len(ksets), tuple(rows), caveat)


@dataclass(frozen=True)
class LiftResult:
    """Monomial lift of degree m: coordinates and the dimension of linear relations."""

    coordinates: tuple[UnivariatePoly, ...]
    q_m: int
    rank: int
    relation_dim: int
    degenerate: bool

    def as_dict(self) -> dict:
        return {"q_m": self.q_m, "rank": self.rank,
                "relation_dim": self.relation_dim, "degenerate": self.degenerate}


def lift_curve(curve: ProjectiveCurve, arr: Arrangement, m: int) -> LiftResult:
    """Compose all degree-m monomials in the normalized forms with the curve and
    measure the space of linear forms vanishing on the lifted coordinates."""
    if not curve.all_polynomial:
        raise ValueError("lifting needs a polynomial curve")
    if curve.ambient_dim != arr.M:
        raise ValueError("curve and arrangement ambient dimensions differ")
    if m < 1:
        raise ValueError("m must be >= 1")
    composed = [compose_polynomial(f, curve) for f in arr.normalized_forms()]
    exps = list(monomials_of_degree(arr.q, m))
    coords: list[UnivariatePoly] = []
    for exp in exps:
        prod = UnivariatePoly([1])
        for c, e in zip(composed, exp):
            if e:
                prod = prod * c ** e
        coords.append(prod)
    width = max((c.degree for c in coords), default=-1) + 1
    ech = Echelon()
    for c in coords:
        vec = list(c.coeffs) + [QQi(0)] * (width - len(c.coeffs))
        ech.insert(vec)
    rank = ech.rank
    q_m = len(exps)
    return LiftResult(tuple(coords), q_m, rank, q_m - rank, q_m - rank >= q_m - 1)


@dataclass(frozen=True)
class SMTTargetRow:
    name: str
    degree: int
    truncation: int | None
    N_truncated: float
    N_full: float
    proximity: float
    fmt_value: float
    r_used: float


@dataclass(frozen=True)
class SMTRadiusRow:
    r: float
    T: float
    lhs: float
    rhs: float
    slack: float
    targets: tuple[SMTTargetRow, ...]


@dataclass(frozen=True)
class SMTReport:
    """Per-radius evaluation of (q-2N+n-1-eps) T(r) <= sum (1/d_j) N^{[L_j]}(r, D_j)."""

    mode: str
    q: int
    n: int
    N: int
    epsilon: float
    coefficient: float
    truncations: tuple[int | None, ...]
    quad_tol: float
    rows: tuple[SMTRadiusRow, ...]
    fmt_deviation: dict
    caveats: tuple[str, ...]

    def as_dict(self) -> dict:
        return {
            "mode": self.mode,
            "q": self.q, "n": self.n, "N": self.N,
            "epsilon": self.epsilon,
            "coefficient": self.coefficient,
            "truncations": ["inf" if t is None else t for t in self.truncations],
            "quad_tol": self.quad_tol,
            "caveats": list(self.caveats),
            "fmt_deviation": dict(self.fmt_deviation),
            "rows": [
                {
                    "r": row.r, "T": row.T, "lhs": row.lhs, "rhs": row.rhs,
                    "slack": row.slack,
                    "targets": [
                        {"name": t.name, "degree": t.degree,
                         "truncation": "inf" if t.truncation is None else t.truncation,
                         "N_truncated": t.N_truncated, "N_full": t.N_full,
                         "proximity": t.proximity, "fmt_value": t.fmt_value,
                         "r_used": t.r_used}
                        for t in row.targets
                    ],
                }
                for row in self.rows
            ],
        }

    def as_tsv(self) -> str:
        lines = ["r\tT\tlhs\trhs\tslack"]
        for row in self.rows:
            lines.append(f"{row.r:.6g}\t{row.T:.12g}\t{row.lhs:.12g}"
                         f"\t{row.rhs:.12g}\t{row.slack:.12g}")
        return "\n".join(lines) + "\n"


def smt_report(curve: ProjectiveCurve, arr: Arrangement, epsilon, radii: Sequence[float], *,
               truncations=None, tol: float = DEFAULT_QUAD_TOL,
               position: PositionReport | None = None) -> SMTReport:
    """Evaluate the subgeneral-position main inequality on explicit data.

    Mode is `hyperplane` when every target is a linear form on the full
    space (truncation defaults to n there) and `hypersurface` otherwise
    (untruncated by default).  The report carries per-target consistency
    values d_j T(r) - N(r) - m(r), whose constancy across radii is the
    first-main-theorem check, and explicit caveat notes.
    """
    radii = sorted(float(r) for r in radii)
    if not radii or radii[0] < 1:
        raise ValueError("radii must be >= 1")
    if position is None:
        position = check_subgeneral_position(arr)
    if not position.ok:
        raise VerificationError("arrangement fails the subgeneral-position check")
    if curve.ambient_dim != arr.M:
        raise ValueError("curve and arrangement ambient dimensions differ")
    q, n, N = arr.q, arr.n, arr.N
    eps = float(epsilon)
    mode = ("hyperplane" if all(d == 1 for d in arr.degrees) and not arr.variety_generators
            else "hypersurface")
    if truncations is None:
        trunc_list: list[int | None] = [n if mode == "hyperplane" else None] * q
    elif truncations == math.inf:
        trunc_list = [None] * q
    elif isinstance(truncations, int):
        trunc_list = [truncations] * q
    else:
        trunc_list = [None if t in (None, math.inf) else int(t) for t in truncations]
        if len(trunc_list) != q:
            raise ValueError(f"need {q} truncation levels")

    targets = []
    rmax = radii[-1] * 1.001
    for name, form in arr.hypersurfaces:
        if curve.all_polynomial:
            comp = compose_polynomial(form, curve)
            if comp.is_zero:
                raise ValueError(f"target {name} vanishes identically on the curve")
            div = zero_divisor(comp)
        else:
            target = ComposedTarget(form, curve, label=name)
            probe = target.value(np.array([0.31 + 0.17j, -1.12 + 0.53j, 0.77 - 0.91j]))
            if np.all(np.abs(probe) < 1e-200):
                raise ValueError(f"target {name} appears to vanish identically on the curve")
            div = zero_divisor(target, rmax)
        targets.append((name, form, div))

    coefficient = q - 2 * N + n - 1 - eps
    rows = []
    fmt_values: dict[str, list[float]] = {name: [] for name, _, _ in targets}
    t_cache: dict[float, float] = {}

    def char_at(rr: float) -> float:
        if rr not in t_cache:
            t_cache[rr] = characteristic(curve, rr, tol=tol)
        return t_cache[rr]

    for r in radii:
        T = char_at(r)
        target_rows = []
        rhs = 0.0
        for (name, form, div), trunc in zip(targets, trunc_list):
            d = form.degree
            prox, r_eff = _proximity_impl(curve, form, r, tol)
            n_full = counting_function(div, r_eff)
            n_trunc = counting_function(div, r, trunc)
            T_eff = T if r_eff == r else char_at(r_eff)
            fmt = d * T_eff - n_full - prox
            fmt_values[name].append(fmt)
            rhs += n_trunc / d
            target_rows.append(SMTTargetRow(name, d, trunc, n_trunc, n_full,
                                            prox, fmt, r_eff))
        lhs = coefficient * T
        rows.append(SMTRadiusRow(r, T, lhs, rhs, rhs - lhs, tuple(target_rows)))

    fmt_deviation = {}
    for name, values in fmt_values.items():
        mean = sum(values) / len(values)
        fmt_deviation[name] = max(abs(v - mean) for v in values)

    caveats = ["the inequality admits an exceptional radius set of finite measure; "
               "slack is recorded per radius"]
    if mode == "hypersurface" and curve.all_polynomial:
        caveats.append("polynomial curves have algebraic image, so hypersurface-mode "
                       "slack is a sanity evaluation, not a hypothesis-satisfying test")
    return SMTReport(mode, q, n, N, eps, coefficient, tuple(trunc_list), tol,
                     tuple(rows), fmt_deviation, tuple(caveats))
