"""Numerical evaluation of the theta-type sums near rational points, the
principal-value Gaussian integral that measures the obstruction to modularity
of the sign-weighted sums, and the auxiliary integral families used to
approximate it.

Conventions shared by everything below:

* an arc point is z = k (1/N^2 - i Phi) with Re z > 0; tau = (h + i z)/k;
* the Gaussian weight of the principal-value integral is exp(-pi x^2 V) with
  V = 1 / (4 M k alpha_j z), Re V > 0;
* complex square roots are principal (Re sqrt > 0 whenever Re of the
  argument is > 0), which is forced here since Re z > 0.

Three routes to the principal-value integral are provided:

* ``pv_integral``         -- the split form: residue term + a smooth middle
                             integral + two half-line tails (quadrature);
* ``pv_integral_direct``  -- symmetric-excision principal-value quadrature of
                             the defining integral (the independent oracle);
* ``pv_closed_form``      -- Faddeeva-function closed form (fast; used by the
                             nu-sums and the contour assembly).

The first two are kept deliberately independent; tests require them to agree.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import integrate
from scipy.special import digamma, wofz, zeta

from .arith import gauss_sum_table

__all__ = [
    "ArcPoint",
    "PVIntegralParams",
    "QuadratureError",
    "complex_quad",
    "theta_eval_direct",
    "false_theta_eval_direct",
    "theta_eval_direct_arc",
    "false_theta_eval_direct_arc",
    "theta_eval_transformed",
    "false_theta_eval_transformed",
    "pv_integral",
    "pv_integral_direct",
    "pv_closed_form",
    "pv_closed_form_batch",
    "j_integral",
    "j_trivial_bound",
    "j_recursion_residual",
    "lattice_window",
    "nu_sum",
    "nu_sum_batch",
    "cot_main_term",
]


class QuadratureError(RuntimeError):
    """A quadrature failed to reach the requested accuracy."""


def resolved_relative_error(a: complex, b: complex,
                            zero_floor: float = 1e-5) -> float:
    """|a - b| relative to max(|a|, |b|), floored for numerical zeros.

    The theta-type sums vanish identically at some cusps; both evaluation
    routes then cancel O(1) terms down to roundoff and the ratio of two
    numerical zeros is meaningless.  Values below the floor are compared
    absolutely against the floor instead (genuine values on the verification
    grids sit orders of magnitude above it).
    """
    return abs(a - b) / max(abs(a), abs(b), zero_floor)


@dataclass(frozen=True)
class ArcPoint:
    """A point z = k (1/N^2 - i Phi) on the order-N arc at denominator k."""

    k: int
    N: int
    Phi: float

    def __post_init__(self) -> None:
        if not (1 <= self.k <= self.N):
            raise ValueError(f"need 1 <= k <= N, got k={self.k}, N={self.N}")

    @property
    def z(self) -> complex:
        return self.k * (1.0 / self.N**2 - 1j * self.Phi)

    def tau(self, h: int) -> complex:
        return (h + 1j * self.z) / self.k


@dataclass(frozen=True)
class PVIntegralParams:
    """Parameters of the principal-value Gaussian integral."""

    mu: int
    M: int
    alpha_j: int
    k: int
    z: complex
    delta: float | None = None

    def __post_init__(self) -> None:
        if self.mu == 0:
            raise ValueError("mu must be a nonzero integer")
        if self.M < 1 or self.alpha_j < 1 or self.k < 1:
            raise ValueError("M, alpha_j, k must be positive integers")
        if self.z.real <= 0:
            raise ValueError(f"need Re z > 0, got z={self.z}")
        if self.delta is not None and not (0 < self.delta < abs(self.mu) / 2):
            raise ValueError(
                f"splitting parameter must satisfy 0 < delta < |mu|/2, got {self.delta}"
            )

    @property
    def gaussian_weight(self) -> complex:
        """V with integrand exp(-pi x^2 V); Re V > 0."""
        return 1.0 / (4.0 * self.M * self.k * self.alpha_j * self.z)

    @property
    def A(self) -> float:
        """pi mu^2 / (4 M k alpha_j |z|)."""
        return math.pi * self.mu**2 / (4.0 * self.M * self.k * self.alpha_j * abs(self.z))


def complex_quad(f, a: float, b: float, *, points: Sequence[float] | None = None,
                 limit: int = 200, tol: float = 1e-11) -> tuple[complex, float]:
    """Adaptive quadrature of a complex integrand; returns (value, error est)."""
    kw = {"limit": limit, "epsabs": tol, "epsrel": tol, "full_output": 1}
    if points is not None:
        pts = [p for p in points if a < p < b]
        if pts:
            kw["points"] = pts
    res_re = integrate.quad(lambda x: f(x).real, a, b, **kw)
    res_im = integrate.quad(lambda x: f(x).imag, a, b, **kw)
    return res_re[0] + 1j * res_im[0], res_re[1] + res_im[1]


def _unit_phase(num: int, den: int) -> complex:
    """exp(2 pi i num/den) with the angle reduced exactly in integers."""
    return cmath.exp(2j * cmath.pi * (num % den) / den)


# ---------------------------------------------------------------------------
# direct summation of the defining series
# ---------------------------------------------------------------------------

def theta_eval_direct(r: int, M: int, scale: int, tau: complex,
                      tol: float = 1e-15) -> complex:
    """Two-sided theta sum (exponents nu^2/(2M), class nu = r mod M) at
    argument scale * tau, by direct summation with a certified Gaussian tail."""
    y = (scale * tau).imag
    if y <= 0:
        raise ValueError(f"need Im(scale*tau) > 0, got {scale * tau}")
    r %= M
    total = 0.0 + 0.0j
    for start, step in ((r, M), (r - M, -M)):
        nu = start
        while True:
            term = cmath.exp(2j * cmath.pi * scale * tau * nu * nu / (2 * M))
            total += term
            if abs(term) < tol and abs(nu) > M:
                break
            nu += step
            if abs(nu) > 10**7:
                raise QuadratureError("theta tail failed to decay")
    return total


def false_theta_eval_direct(r: int, M: int, scale: int, tau: complex,
                            tol: float = 1e-15) -> complex:
    """Sign-weighted theta sum (exponents nu^2/(4M), class nu = r mod 2M) at
    argument scale * tau, by direct summation."""
    y = (scale * tau).imag
    if y <= 0:
        raise ValueError(f"need Im(scale*tau) > 0, got {scale * tau}")
    r %= 2 * M
    total = 0.0 + 0.0j
    for start, step in ((r, 2 * M), (r - 2 * M, -2 * M)):
        nu = start
        while True:
            term = cmath.exp(2j * cmath.pi * scale * tau * nu * nu / (4 * M))
            if nu:
                total += term if nu > 0 else -term
            if abs(term) < tol and abs(nu) > 2 * M:
                break
            nu += step
            if abs(nu) > 10**7:
                raise QuadratureError("false theta tail failed to decay")
    return total


def theta_eval_direct_arc(r: int, M: int, scale: int, h: int, k: int,
                          z: complex, tol: float = 1e-16) -> complex:
    """Same sum as theta_eval_direct at tau = (h + i z)/k, with the rational
    part of every phase reduced exactly in integer arithmetic."""
    if z.real <= 0:
        raise ValueError(f"need Re z > 0, got z={z}")
    r %= M
    den = 2 * M * k
    total = 0.0 + 0.0j
    for start, step in ((r, M), (r - M, -M)):
        nu = start
        while True:
            damp = cmath.exp(-2 * cmath.pi * scale * nu * nu * z / den)
            total += _unit_phase(scale * nu * nu * h, den) * damp
            if abs(damp) < tol and abs(nu) > M:
                break
            nu += step
            if abs(nu) > 10**7:
                raise QuadratureError("theta tail failed to decay")
    return total


def false_theta_eval_direct_arc(r: int, M: int, scale: int, h: int, k: int,
                                z: complex, tol: float = 1e-16) -> complex:
    """Same sum as false_theta_eval_direct at tau = (h + i z)/k with exact
    phase reduction."""
    if z.real <= 0:
        raise ValueError(f"need Re z > 0, got z={z}")
    r %= 2 * M
    den = 4 * M * k
    total = 0.0 + 0.0j
    for start, step in ((r, 2 * M), (r - 2 * M, -2 * M)):
        nu = start
        while True:
            damp = cmath.exp(-2 * cmath.pi * scale * nu * nu * z / den)
            if nu:
                term = _unit_phase(scale * nu * nu * h, den) * damp
                total += term if nu > 0 else -term
            if abs(damp) < tol and abs(nu) > 2 * M:
                break
            nu += step
            if abs(nu) > 10**7:
                raise QuadratureError("false theta tail failed to decay")
    return total


# ---------------------------------------------------------------------------
# transformed evaluation (Gauss-sum expansions valid near the cusp h/k)
# ---------------------------------------------------------------------------

def _theta_nu_terms(M: int, alpha_j: int, k: int, z: complex, tol: float):
    """Yield nu and exp(-pi nu^2/(4 M k alpha_j z)) until the envelope dies."""
    w = cmath.pi / (4 * M * k * alpha_j * z)
    decay = w.real  # envelope exp(-decay * nu^2)
    if decay <= 0:
        raise QuadratureError("Gaussian envelope does not decay (Re z <= 0?)")
    nu = 0
    while True:
        g = cmath.exp(-w * nu * nu)
        yield nu, g
        if abs(g) < tol and nu > 8:
            return
        nu += 1
        if nu > 10**7:
            raise QuadratureError("nu-sum truncation failure")


def theta_eval_transformed(r: int, M: int, alpha_j: int, h: int, k: int,
                           z: complex, tol: float = 1e-18) -> complex:
    """Gauss-sum expansion of the two-sided theta sum for the class r mod 2M,
    at argument 2 alpha_j (h + i z)/k.

    Matches theta_eval_direct(r, 2M, 2*alpha_j, (h+iz)/k) up to the Gaussian
    tail cutoff; cost is O(k) Gauss-sum table setup plus a handful of terms.
    """
    if math.gcd(h, k) != 1:
        raise ValueError(f"need gcd(h,k)=1, got h={h}, k={k}")
    gtab = gauss_sum_table((2 * M * alpha_j * h) % k, k)
    pref = _unit_phase(alpha_j * h * r * r, 2 * M * k) / (
        2 * cmath.sqrt(M * k * alpha_j * z))
    b0 = 2 * r * alpha_j * h
    total = 0.0 + 0.0j
    for nu, g in _theta_nu_terms(M, alpha_j, k, z, tol):
        for s in ((1,) if nu == 0 else (1, -1)):
            v = s * nu
            total += g * _unit_phase(r * v, 2 * M * k) * gtab[(b0 + v) % k]
    return pref * total


def false_theta_eval_transformed(r: int, M: int, alpha_j: int, h: int, k: int,
                                 z: complex, tol: float = 1e-18,
                                 nu_terms: int = 24) -> complex:
    """Gauss-sum expansion of the sign-weighted theta sum for the class
    r mod 2M, at argument 2 alpha_j (h + i z)/k.

    The sign-weighted sum is not modular; the expansion carries, besides the
    theta-like Gauss-sum part, a correction assembled from principal-value
    integrals (one nu-sum per window index l).  The Gauss-sum second argument
    is 2 r alpha_j h + l, matching the quadratic-completion bookkeeping of the
    full product expansion.
    """
    if math.gcd(h, k) != 1:
        raise ValueError(f"need gcd(h,k)=1, got h={h}, k={k}")
    gtab = gauss_sum_table((2 * M * alpha_j * h) % k, k)
    pref = _unit_phase(alpha_j * h * r * r, 2 * M * k) / (
        2 * cmath.sqrt(M * k * alpha_j * z))
    b0 = 2 * r * alpha_j * h
    part1 = 0.0 + 0.0j
    for nu, g in _theta_nu_terms(M, alpha_j, k, z, tol):
        if nu == 0:
            continue
        for s in (1, -1):
            v = s * nu
            part1 += s * g * _unit_phase(r * v, 2 * M * k) * gtab[(b0 + v) % k]
    window = lattice_window(M * k)
    sums = nu_sum_batch(window, M, alpha_j, k, z, terms=nu_terms)
    part2 = 0.0 + 0.0j
    for ell, s in zip(window, sums):
        part2 += _unit_phase(r * ell, 2 * M * k) * gtab[(b0 + ell) % k] * s
    return pref * (part1 + (1j / math.pi) * part2)


# ---------------------------------------------------------------------------
# the principal-value integral
# ---------------------------------------------------------------------------

def _expm1_over(u: complex) -> complex:
    """(exp(u) - 1)/u, stable near u = 0."""
    if abs(u) < 1e-5:
        return 1 + u / 2 + u * u / 6 + u * u * u / 24
    return (cmath.exp(u) - 1) / u


def pv_integral(params: PVIntegralParams, tol: float = 1e-11) -> complex:
    """Principal-value Gaussian integral by the split route.

    Pieces: the half-residue sgn(mu) pi i exp(-pi mu^2 V); the middle integral
    of (g(x) - g(0))/x over [-delta, delta] with g(x) = exp(-pi (x+mu)^2 V)
    (smooth; the removable singularity is handled analytically); and the two
    half-line tails sgn(mu) [int_delta^inf exp(-pi (x+|mu|)^2 V)/x dx -
    int_delta^inf exp(-pi (x-|mu|)^2 V)/x dx].
    """
    mu, z = params.mu, params.z
    w = cmath.pi * params.gaussian_weight  # integrand exp(-w x^2)
    delta = params.delta if params.delta is not None else abs(mu) / 4.0
    if not (0 < delta < abs(mu) / 2):
        raise ValueError(f"need 0 < delta < |mu|/2, got delta={delta}")
    sgn = 1 if mu > 0 else -1
    g0 = cmath.exp(-w * mu * mu)
    residue = sgn * cmath.pi * 1j * g0

    def middle(x: float) -> complex:
        # (g(x) - g(0))/x with g(x) = exp(-w (x+mu)^2); the factored expm1
        # form handles the cancellation near x = 0, the plain difference
        # avoids overflow of exp(u) elsewhere
        u = -w * x * (2 * mu + x)
        if abs(u) < 1.0:
            return g0 * (-w) * (2 * mu + x) * _expm1_over(u)
        return (cmath.exp(-w * (x + mu) ** 2) - g0) / x

    mid, err_mid = complex_quad(middle, -delta, delta, tol=tol)

    amu = abs(mu)
    reach = math.sqrt(50.0 / w.real)

    def tail_plus(x: float) -> complex:
        return cmath.exp(-w * (x + amu) ** 2) / x

    def tail_minus(x: float) -> complex:
        return cmath.exp(-w * (x - amu) ** 2) / x

    up_plus = max(2 * delta, reach)  # (x + |mu|)^2 >= 50/Re w beyond this
    up_minus = amu + reach
    t_plus, err_p = complex_quad(tail_plus, delta, up_plus, tol=tol)
    t_minus, err_m = complex_quad(tail_minus, delta, up_minus,
                                  points=[amu], tol=tol)
    total_err = err_mid + err_p + err_m
    if total_err > 1e-6:
        raise QuadratureError(
            f"pv_integral quadrature error estimate {total_err:.2e} too large")
    return residue + mid + sgn * (t_plus - t_minus)


def pv_integral_direct(params: PVIntegralParams, tol: float = 1e-11) -> complex:
    """Independent oracle: symmetric-excision principal-value quadrature of
    the defining integral, plus the same half-residue term."""
    mu, z = params.mu, params.z
    w = cmath.pi * params.gaussian_weight
    L = max(math.sqrt(60.0 / w.real), 3.0 * abs(mu))
    kw = {"limit": 400, "epsabs": tol, "epsrel": tol,
          "weight": "cauchy", "wvar": float(mu), "full_output": 1}
    pv_re = integrate.quad(lambda x: cmath.exp(-w * x * x).real, -L, L, **kw)
    pv_im = integrate.quad(lambda x: cmath.exp(-w * x * x).imag, -L, L, **kw)
    pv = pv_re[0] + 1j * pv_im[0]
    sgn = 1 if mu > 0 else -1
    return pv + sgn * cmath.pi * 1j * cmath.exp(-w * mu * mu)


def pv_closed_form(mu: int, M: int, alpha_j: int, k: int, z: complex) -> complex:
    """Faddeeva-function closed form of the principal-value integral.

    With a = mu sqrt(pi V): pi i [(sgn(mu) + 1) exp(-a^2) - wofz(-a)].
    Odd in mu; asymptotically -2 sqrt(M k alpha_j z)/mu for large |mu|.
    """
    if mu == 0:
        raise ValueError("mu must be nonzero")
    V = 1.0 / (4.0 * M * k * alpha_j * z)
    a = mu * np.sqrt(np.pi * V)
    if mu > 0:
        return complex(np.pi * 1j * (2 * np.exp(-a * a) - wofz(-a)))
    return complex(-np.pi * 1j * wofz(-a))


def pv_closed_form_batch(mus: np.ndarray, M: int, alpha_j: int, k: int,
                         z: complex) -> np.ndarray:
    """Vectorized pv_closed_form over an integer array of nonzero mu."""
    V = 1.0 / (4.0 * M * k * alpha_j * z)
    s = np.sqrt(np.pi * V)
    a = mus * s
    vals = -np.pi * 1j * wofz(-a)
    pos = mus > 0
    if np.any(pos):
        vals[pos] += 2j * np.pi * np.exp(-a[pos] * a[pos])
    return vals


# ---------------------------------------------------------------------------
# the auxiliary half-line integral family
# ---------------------------------------------------------------------------

def _factorial_c(d: int) -> int:
    return math.factorial(d - 1) if d >= 1 else 1


def j_integral(d: int, sign: int, A: float, z: complex,
               tol: float = 1e-12) -> complex:
    """C_d (z/(2A|z|))^(d-1) int_{1/2}^inf x^(-d) exp(-A (|z|/z)(x + sign)^2) dx.

    sign is +1 or -1; A > 0; Re z > 0.  Evaluated by adaptive quadrature with
    a cutoff where the Gaussian envelope falls below exp(-50).
    """
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    if A <= 0 or d < 0:
        raise ValueError(f"need A > 0 and d >= 0, got A={A}, d={d}")
    if z.real <= 0:
        raise ValueError(f"need Re z > 0, got {z}")
    B = A * abs(z) / z  # Re B = A Re(z)/|z| > 0
    reach = math.sqrt(50.0 / B.real)
    upper = max(2.0, reach + (1.0 if sign == -1 else 0.0))

    def f(x: float) -> complex:
        return x ** (-d) * cmath.exp(-B * (x + sign) ** 2)

    val, err = complex_quad(f, 0.5, upper, points=[1.0] if sign == -1 else None,
                            tol=tol)
    if err > 1e-7:
        raise QuadratureError(f"j_integral error estimate {err:.2e} too large")
    pref = _factorial_c(d) * (z / (2 * A * abs(z))) ** (d - 1)
    return pref * val


def j_trivial_bound(d: int, A: float, z: complex) -> float:
    """2 sqrt(pi) C_d A^(1/2-d) / sqrt(|z| Re(1/z)) -- an absolute bound."""
    return 2 * math.sqrt(math.pi) * _factorial_c(d) * A ** (0.5 - d) / math.sqrt(
        abs(z) * (1 / z).real)


def j_recursion_residual(d: int, sign: int, A: float, z: complex) -> float:
    """Residual of the integration-by-parts recursion linking the d-1, d, d+1
    members of the family; zero in exact arithmetic."""
    if d < 1:
        raise ValueError(f"recursion needs d >= 1, got {d}")
    B = A * abs(z) / z
    jd = j_integral(d, sign, A, z)
    jdp = j_integral(d + 1, sign, A, z)
    jdm = j_integral(d - 1, sign, A, z)
    boundary = -math.factorial(d - 1) * (z / (A * abs(z))) ** d * cmath.exp(
        -B * (0.5 + sign) ** 2)
    rhs = -sign * (boundary + jdp + max(d - 1, 1) * (z / (2 * A * abs(z))) * jdm)
    scale = max(abs(jd), abs(jdp), abs(jdm), 1e-300)
    return abs(jd - rhs) / scale


# ---------------------------------------------------------------------------
# summing the principal-value integrals over the shifted lattice
# ---------------------------------------------------------------------------

def lattice_window(d: int) -> list[int]:
    """The index window [1-d, -1] union [1, d]."""
    if d < 1:
        raise ValueError(f"need d >= 1, got {d}")
    return list(range(1 - d, 0)) + list(range(1, d + 1))


def nu_sum_batch(ells: Sequence[int], M: int, alpha_j: int, k: int, z: complex,
                 terms: int = 24) -> np.ndarray:
    """For each l in ells: the nu=0-halved sum over nu >= 0 and both signs of
    the principal-value integrals at arguments l +- 2 M k nu.

    The first ``terms`` shifted pairs are evaluated with the closed form; the
    remainder is summed analytically from the 1/mu and 1/mu^3 asymptotics
    (digamma and Hurwitz-zeta tails).  The residual error decays like
    terms^(-4).
    """
    ells = np.asarray(list(ells), dtype=np.int64)
    if np.any(ells == 0) or np.any(np.abs(ells) > M * k) or np.any(ells < 1 - M * k):
        raise ValueError("window indices must lie in [1-Mk, -1] or [1, Mk]")
    step = 2 * M * k
    nu = np.arange(1, terms + 1, dtype=np.int64)
    # arguments: l itself, then the +- pairs for nu = 1..terms
    mus = np.concatenate([
        ells[:, None],
        ells[:, None] + step * nu[None, :],
        ells[:, None] - step * nu[None, :],
    ], axis=1)
    vals = pv_closed_form_batch(mus.astype(np.float64), M, alpha_j, k, z)
    partial = vals.sum(axis=1)
    # analytic tails from the large-mu expansion: mainC/mu + cubicC/mu^3 +
    # quinticC/mu^5 + O(mu^-7); paired tails reduce to digamma and
    # Hurwitz-zeta differences
    Vc = 1.0 / (4.0 * M * k * alpha_j * z)
    sqVc = np.sqrt(Vc)
    mainC = -1.0 / sqVc
    cubicC = -1.0 / (2.0 * np.pi * Vc * sqVc)
    quinticC = -3.0 / (4.0 * np.pi**2 * Vc * Vc * sqVc)
    x = ells / step
    V1 = terms + 1
    tail = mainC / step * (digamma(V1 - x) - digamma(V1 + x))
    tail += cubicC / step**3 * (zeta(3, V1 + x) - zeta(3, V1 - x))
    tail += quinticC / step**5 * (zeta(5, V1 + x) - zeta(5, V1 - x))
    return partial + tail


def nu_sum(ell: int, M: int, alpha_j: int, k: int, z: complex,
           terms: int = 24) -> complex:
    """Scalar wrapper around nu_sum_batch for a single window index."""
    return complex(nu_sum_batch([ell], M, alpha_j, k, z, terms=terms)[0])


def cot_main_term(ell: int, M: int, alpha_j: int, k: int, z: complex) -> complex:
    """-pi sqrt(alpha_j z/(M k)) cot(pi l/(2 M k)): the leading behavior of
    the nu-sum; finite for every admissible window index."""
    x = math.pi * ell / (2 * M * k)
    return -math.pi * cmath.sqrt(alpha_j * z / (M * k)) * (math.cos(x) / math.sin(x))
