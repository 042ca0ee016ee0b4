"""Isotropic covariance models for smooth stationary planar Gaussian fields.

A centered stationary isotropic Gaussian field psi on the plane is
determined by its reduced covariance Gamma(z - w) = E[psi(z) psi(w)],
which is radial: Gamma(t) = sigma(|t|^2) for a smooth profile sigma.
Equivalently, by Bochner's theorem, Gamma is the Fourier transform of a
finite symmetric spectral measure F,

    Gamma(t) = int exp(-i lam . t) F(dlam),

and isotropy makes F rotation invariant, so it is described by its
radial part: a finite measure mu on [0, inf) with moments

    R_n = int l^n mu(dl),        R_0 = sigma(0) = Var(psi).

Every quantity downstream (critical-point intensity, repulsion factor,
Kac-Rice integrands) is driven by the derivatives of sigma at 0 and the
plane moments of F.  Writing J0 for the Bessel function,

    sigma(x)      = int J0(l sqrt(x)) mu(dl)
    sigma^(j)(0)  = (-1)^j R_{2j} / (4^j j!)

so eta0 = sigma'(0) = -R_2/4 < 0, mu0 = sigma''(0) = R_4/32 > 0,
nu0 = sigma'''(0) = -R_6/384 < 0 for every non-trivial model, and the
plane moments

    m_{a,b} = int lam_1^a lam_2^b F(dlam)
            = R_{a+b} (a-1)!! (b-1)!! / (a+b)!!     (a, b even)

vanish whenever a or b is odd and satisfy the isotropy relations
m_{4,0} = 3 m_{2,2} and m_{6,0} = 5 m_{4,2}.

Five families are implemented, all exposing exact (or quadrature-exact)
sigma derivatives at arbitrary argument, radial moments, and spectral
frequency sampling:

    BargmannFock(k)            sigma(x) = exp(-k x); F = N(0, 2k I)
    RandomWave(k)              sigma(x) = J0(k sqrt(x)); F uniform on
                               the circle of radius k
    ShiftedRandomWave(tau,s,k) F = tau^2 delta_0 + s^2 (circle k)
    PowerLawTruncated(t)       planar density |lam|^-7 on 1 <= |lam| <= t,
                               normalized so sigma(0) = 1; t = inf allowed
                               (then R_n diverges for n >= 5)
    Interpolation(s, l, r)     spectral mixture s F_l + (1-s) F_r
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate, special

__all__ = [
    "CovarianceModel",
    "BargmannFock",
    "RandomWave",
    "ShiftedRandomWave",
    "PowerLawTruncated",
    "Interpolation",
    "SigmaDerivatives",
    "MomentDivergenceError",
    "sigma_derivatives",
    "spectral_moment",
    "derivative_covariance",
    "is_shifted_random_wave",
    "model_from_config",
    "model_to_config",
]

# Relative tolerance for adaptive radial quadrature (Gauss-Kronrod).
_QUAD_RTOL = 1e-10

# Highest total derivative order supported per point.
MAX_DERIVATIVE_ORDER = 4

# Fixed Gauss-Legendre order for extended-precision radial integrals.
# With the power-law substitution the integrand is smooth, and a fixed
# rule is itself an exact discrete spectral measure, which keeps every
# covariance entry mutually consistent (what near-degenerate Schur
# complements actually require).
_GL_ORDER = 64


class MomentDivergenceError(ArithmeticError):
    """A required spectral moment is infinite for this model."""


@dataclass(frozen=True)
class SigmaDerivatives:
    """Derivatives of the radial covariance profile at the origin.

    Attributes
    ----------
    eta0 : float
        sigma'(0), strictly negative; Var(d_i psi) = -2 eta0.
    mu0 : float
        sigma''(0), strictly positive; Var(d_12 psi) = 4 mu0.
    nu0 : float
        sigma'''(0), strictly negative (-inf when the 6th radial moment
        diverges); Var(d_iii psi) = -120 nu0.
    upsilon : float
        sigma''''(0); finite only when the model has 8 spectral moments.
    """

    eta0: float
    mu0: float
    nu0: float
    upsilon: float

    def __post_init__(self) -> None:
        if not (self.eta0 < 0 < self.mu0) or not (self.nu0 < 0):
            raise ValueError(
                f"sign invariants eta0 < 0 < mu0, nu0 < 0 violated: "
                f"({self.eta0}, {self.mu0}, {self.nu0})"
            )


class CovarianceModel:
    """Base class: an isotropic covariance family with exact derivatives.

    Subclasses implement the radial profile derivatives sigma^(j), the
    radial spectral moments R_n, and frequency sampling from the
    continuous part of F.  Instances are immutable and hashable; it is
    safe to share them across concurrent workers.
    """

    family: str = ""

    # -- radial profile -------------------------------------------------

    def sigma_derivative(self, j: int, x) -> np.ndarray | float:
        """j-th derivative of sigma evaluated at x (vectorized in x)."""
        raise NotImplementedError

    def _sigma_derivative_ld(self, j: int, x) -> np.longdouble:
        """Scalar sigma^(j)(x) in extended precision.

        Conditioning a derivative vector on a near-degenerate event
        cancels up to ~13 leading digits, so the covariance assembly
        offers an 80-bit path.  The default is a precision-limited cast
        of the double evaluation; stock families override it.
        """
        return np.longdouble(self.sigma_derivative(j, float(x)))

    def covariance(self, lag) -> float:
        """Gamma(lag) = sigma(|lag|^2) for a planar lag vector."""
        lag = np.asarray(lag, dtype=float)
        return float(self.sigma_derivative(0, float(lag @ lag)))

    # -- spectral measure -----------------------------------------------

    def radial_moment(self, n: int) -> float:
        """R_n = int l^n mu(dl); returns inf on divergence."""
        raise NotImplementedError

    def total_mass(self) -> float:
        """sigma(0) = Var(psi), the total mass of F."""
        return self.radial_moment(0)

    def atom_mass(self) -> float:
        """Mass of the spectral atom at the origin (0 for most families)."""
        return 0.0

    def sample_frequencies(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Draw `size` iid frequencies from the normalized continuous part of F."""
        raise NotImplementedError

    def _circle_decomposition(self):
        """(atom mass, {radius: mass}) if F = atom + circles, else None."""
        return None

    # -- serialization ---------------------------------------------------

    def params(self) -> dict:
        """Flat parameter mapping (numbers only; nested models use dotted keys)."""
        raise NotImplementedError


@dataclass(frozen=True)
class BargmannFock(CovarianceModel):
    """sigma(x) = exp(-k x); Gaussian spectral measure N(0, 2k I)."""

    k: float
    family = "bargmannfock"

    def __post_init__(self) -> None:
        if not self.k > 0:
            raise ValueError(f"k must be positive, got {self.k}")

    def sigma_derivative(self, j, x):
        return (-self.k) ** j * np.exp(-self.k * np.asarray(x, dtype=float))

    def _sigma_derivative_ld(self, j, x):
        k = np.longdouble(self.k)
        return (-k) ** j * np.exp(-k * np.longdouble(x))

    def radial_moment(self, n):
        # |lam| for lam ~ N(0, 2k I) is Rayleigh; R_{2j} = (4k)^j j! and the
        # odd moments follow from the chi distribution with 2 dof.
        return (4.0 * self.k) ** (n / 2.0) * special.gamma(n / 2.0 + 1.0)

    def sample_frequencies(self, rng, size):
        return rng.normal(0.0, math.sqrt(2.0 * self.k), size=(size, 2))

    def params(self):
        return {"k": self.k}


def _bessel_profile_derivative(j, x, k):
    """j-th x-derivative of J0(k sqrt(x)), via the 0F1 representation.

    J0(k sqrt(x)) = 0F1(1; -k^2 x / 4), and each x-derivative shifts the
    0F1 parameter up by one, so the result stays exact at x = 0.
    """
    x = np.asarray(x, dtype=float)
    c = -0.25 * k * k
    return c**j / special.factorial(j) * special.hyp0f1(j + 1.0, c * x)


def _bessel_profile_derivative_ld(j, x, k) -> np.longdouble:
    """Extended-precision twin of _bessel_profile_derivative (scalar x).

    The 0F1 power series is summed in 80-bit arithmetic.  It is
    alternating, so for very large arguments the summation itself
    cancels; past |k^2 x / 4| = 1e4 the extra bits are spent and the
    double-precision evaluation is returned instead (at such lags the
    conditioning problem this path exists for is well-posed in doubles
    anyway).
    """
    z = -np.longdouble(k) * np.longdouble(k) * np.longdouble(x) / 4
    if abs(z) > 1e4:
        return np.longdouble(_bessel_profile_derivative(j, float(x), float(k)))
    term = np.longdouble(1.0)
    total = term
    m = 0
    while True:
        m += 1
        term = term * z / (np.longdouble(m) * np.longdouble(j + m))
        total += term
        if abs(term) <= np.longdouble(1e-25) * abs(total) and m > 4:
            break
    pref = (-np.longdouble(k) * np.longdouble(k) / 4) ** j
    for i in range(2, j + 1):
        pref /= np.longdouble(i)
    return pref * total


@dataclass(frozen=True)
class RandomWave(CovarianceModel):
    """sigma(x) = J0(k sqrt(x)); spectral measure uniform on the circle |lam| = k."""

    k: float
    family = "randomwave"

    def __post_init__(self) -> None:
        if not self.k > 0:
            raise ValueError(f"k must be positive, got {self.k}")

    def sigma_derivative(self, j, x):
        return _bessel_profile_derivative(j, x, self.k)

    def _sigma_derivative_ld(self, j, x):
        return _bessel_profile_derivative_ld(j, x, self.k)

    def radial_moment(self, n):
        return self.k**n

    def sample_frequencies(self, rng, size):
        theta = rng.uniform(0.0, 2.0 * math.pi, size=size)
        return self.k * np.column_stack([np.cos(theta), np.sin(theta)])

    def _circle_decomposition(self):
        return 0.0, {self.k: 1.0}

    def params(self):
        return {"k": self.k}


@dataclass(frozen=True)
class ShiftedRandomWave(CovarianceModel):
    """Random wave plus an independent constant Gaussian shift.

    Spectral measure tau^2 delta_0 + s^2 (uniform circle at radius k), so
    sigma(x) = tau^2 + s^2 J0(k sqrt(x)).  The atom leaves every radial
    moment R_n with n >= 1 untouched; it only raises the variance.
    """

    tau: float
    s: float
    k: float
    family = "shiftedrandomwave"

    def __post_init__(self) -> None:
        if self.tau < 0:
            raise ValueError(f"tau must be nonnegative, got {self.tau}")
        if not self.s > 0:
            raise ValueError(f"s must be positive, got {self.s}")
        if not self.k > 0:
            raise ValueError(f"k must be positive, got {self.k}")

    def sigma_derivative(self, j, x):
        wave = self.s**2 * _bessel_profile_derivative(j, x, self.k)
        if j == 0:
            return wave + self.tau**2
        return wave

    def _sigma_derivative_ld(self, j, x):
        wave = np.longdouble(self.s) ** 2 * _bessel_profile_derivative_ld(j, x, self.k)
        if j == 0:
            return wave + np.longdouble(self.tau) ** 2
        return wave

    def radial_moment(self, n):
        if n == 0:
            return self.tau**2 + self.s**2
        return self.s**2 * self.k**n

    def atom_mass(self):
        return self.tau**2

    def sample_frequencies(self, rng, size):
        theta = rng.uniform(0.0, 2.0 * math.pi, size=size)
        return self.k * np.column_stack([np.cos(theta), np.sin(theta)])

    def _circle_decomposition(self):
        return self.tau**2, {self.k: self.s**2}

    def params(self):
        return {"tau": self.tau, "s": self.s, "k": self.k}


@dataclass(frozen=True)
class PowerLawTruncated(CovarianceModel):
    """Normalized planar spectral density |lam|^-7 on the annulus 1 <= |lam| <= t.

    Radialized and normalized to unit mass, the radius density is
    g(l) = 5 l^-6 / (1 - t^-5) on [1, t].  The family sweeps the
    repulsion factor across its whole range as t grows; t = inf is
    accepted and makes R_n diverge for n >= 5 (so nu0 = -inf).
    """

    t: float
    family = "powerlawtruncated"

    def __post_init__(self) -> None:
        if not self.t > 1:
            raise ValueError(f"t must exceed 1, got {self.t}")

    def _norm(self) -> float:
        # 1 - t^-5, the unnormalized mass up to the factor 5.
        return 1.0 - (0.0 if math.isinf(self.t) else self.t**-5)

    def sigma_derivative(self, j, x):
        if math.isinf(self.t) and j >= 3:
            raise MomentDivergenceError(
                "sigma derivative of order >= 3 diverges for the untruncated tail"
            )
        norm = self._norm()

        def at(x0: float) -> float:
            val, _ = integrate.quad(
                lambda l: _bessel_profile_derivative(j, x0, l) * 5.0 * l**-6 / norm,
                1.0,
                self.t,
                epsrel=_QUAD_RTOL,
                epsabs=0.0,
                limit=200,
            )
            return val

        x = np.asarray(x, dtype=float)
        if x.ndim == 0:
            return at(float(x))
        return np.array([at(float(v)) for v in x.ravel()]).reshape(x.shape)

    def _sigma_derivative_ld(self, j, x):
        if math.isinf(self.t):
            # The untruncated tail has no smooth substitution; outside
            # the divergent orders the double evaluation is returned.
            return CovarianceModel._sigma_derivative_ld(self, j, x)
        # Substituting w = l^-5 makes the radius density uniform on
        # [t^-5, 1], so a fixed Gauss-Legendre rule integrates a smooth
        # function: this path is exactly the 64-ring discretization of
        # the spectral measure, evaluated in 80-bit arithmetic.
        nodes, weights = _leggauss_ld(_GL_ORDER)
        lo = np.longdouble(self.t) ** -5
        w = 0.5 * (1 - lo) * nodes + 0.5 * (1 + lo)
        radii = w ** np.longdouble(-0.2)
        vals = np.array([_bessel_profile_derivative_ld(j, x, r) for r in radii])
        jacobian = 0.5 * (1 - lo)
        norm = np.longdouble(1.0) - np.longdouble(self.t) ** -5
        return jacobian * (vals * weights).sum() / norm

    def radial_moment(self, n):
        if math.isinf(self.t) and n >= 5:
            return math.inf
        norm = self._norm()
        val, _ = integrate.quad(
            lambda l: l**n * 5.0 * l**-6 / norm,
            1.0,
            self.t,
            epsrel=_QUAD_RTOL,
            epsabs=0.0,
            limit=200,
        )
        return val

    def sample_frequencies(self, rng, size):
        # Inverse CDF on the radius: P(L <= l) = (1 - l^-5) / (1 - t^-5).
        u = rng.uniform(0.0, 1.0, size=size)
        radius = (1.0 - u * self._norm()) ** (-0.2)
        theta = rng.uniform(0.0, 2.0 * math.pi, size=size)
        return radius[:, None] * np.column_stack([np.cos(theta), np.sin(theta)])

    def params(self):
        return {"t": self.t}


@dataclass(frozen=True)
class Interpolation(CovarianceModel):
    """Spectral mixture s F_left + (1-s) F_right of two models."""

    s: float
    left: CovarianceModel
    right: CovarianceModel
    family = "interpolation"

    def __post_init__(self) -> None:
        if not 0.0 <= self.s <= 1.0:
            raise ValueError(f"mixture weight s must lie in [0, 1], got {self.s}")

    def sigma_derivative(self, j, x):
        return self.s * self.left.sigma_derivative(j, x) + (
            1.0 - self.s
        ) * self.right.sigma_derivative(j, x)

    def _sigma_derivative_ld(self, j, x):
        s = np.longdouble(self.s)
        return s * self.left._sigma_derivative_ld(j, x) + (1 - s) * self.right._sigma_derivative_ld(j, x)

    def radial_moment(self, n):
        return self.s * self.left.radial_moment(n) + (1.0 - self.s) * self.right.radial_moment(n)

    def atom_mass(self):
        return self.s * self.left.atom_mass() + (1.0 - self.s) * self.right.atom_mass()

    def sample_frequencies(self, rng, size):
        wl = self.s * (self.left.total_mass() - self.left.atom_mass())
        wr = (1.0 - self.s) * (self.right.total_mass() - self.right.atom_mass())
        from_left = rng.uniform(size=size) < wl / (wl + wr)
        out = np.empty((size, 2))
        nl = int(from_left.sum())
        if nl:
            out[from_left] = self.left.sample_frequencies(rng, nl)
        if size - nl:
            out[~from_left] = self.right.sample_frequencies(rng, size - nl)
        return out

    def _circle_decomposition(self):
        dl = self.left._circle_decomposition()
        dr = self.right._circle_decomposition()
        if dl is None or dr is None:
            return None
        atom = self.s * dl[0] + (1.0 - self.s) * dr[0]
        circles: dict[float, float] = {}
        for weight, dec in ((self.s, dl[1]), (1.0 - self.s, dr[1])):
            for radius, mass in dec.items():
                if weight * mass > 0.0:
                    circles[radius] = circles.get(radius, 0.0) + weight * mass
        return atom, circles

    def params(self):
        flat = {"s": self.s, "left.family": self.left.family, "right.family": self.right.family}
        for key, val in self.left.params().items():
            flat[f"left.{key}"] = val
        for key, val in self.right.params().items():
            flat[f"right.{key}"] = val
        return flat


# ---------------------------------------------------------------------------
# Derived quantities
# ---------------------------------------------------------------------------


def sigma_derivatives(model: CovarianceModel) -> SigmaDerivatives:
    """Exact derivatives of the radial profile at 0, from radial moments.

    Uses sigma^(j)(0) = (-1)^j R_{2j} / (4^j j!).  For families without
    closed-form moments (PowerLawTruncated, Interpolation of such) the
    R_{2j} come from adaptive quadrature at relative tolerance 1e-10.

    Returns
    -------
    SigmaDerivatives
        (eta0, mu0, nu0, upsilon).  nu0 is -inf (and upsilon +inf) when
        the corresponding radial moment diverges, so callers can map the
        divergence to a distinguished infinite repulsion factor instead
        of failing.

    Raises
    ------
    ValueError
        If the computed values violate the sign invariants (possible
        only through a broken model, never for the stock families).
    """
    r2 = model.radial_moment(2)
    r4 = model.radial_moment(4)
    r6 = model.radial_moment(6)
    r8 = model.radial_moment(8)
    return SigmaDerivatives(
        eta0=-r2 / 4.0,
        mu0=r4 / 32.0,
        nu0=-r6 / 384.0,
        upsilon=r8 / 6144.0,
    )


def spectral_moment(model: CovarianceModel, a: int, b: int) -> float:
    """Plane spectral moment m_{a,b} = int lam_1^a lam_2^b F(dlam).

    Parameters
    ----------
    model : CovarianceModel
    a, b : int
        Nonnegative exponents with a + b <= 8.

    Returns
    -------
    float
        Zero when a or b is odd (F is symmetric); otherwise
        R_{a+b} (a-1)!! (b-1)!! / (a+b)!!.

    Raises
    ------
    MomentDivergenceError
        If the radial moment R_{a+b} is infinite.
    """
    if a < 0 or b < 0:
        raise ValueError(f"exponents must be nonnegative, got ({a}, {b})")
    if a + b > 2 * MAX_DERIVATIVE_ORDER:
        raise ValueError(f"moment order {a + b} exceeds the supported maximum 8")
    if a % 2 or b % 2:
        return 0.0
    r = model.radial_moment(a + b)
    if math.isinf(r):
        raise MomentDivergenceError(f"radial moment R_{a + b} diverges for {model.family}")
    if a + b == 0:
        return r
    return r * _dfact(a - 1) * _dfact(b - 1) / _dfact(a + b)


def _dfact(n: int) -> int:
    """Double factorial with the empty-product convention (-1)!! = 0!! = 1."""
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


@lru_cache(maxsize=None)
def _leggauss_ld(n: int):
    """Gauss-Legendre nodes/weights cast to longdouble (fixed rule)."""
    nodes, weights = np.polynomial.legendre.leggauss(n)
    return nodes.astype(np.longdouble), weights.astype(np.longdouble)


@lru_cache(maxsize=None)
def _gamma_partial_terms(a: int, b: int) -> tuple[tuple[int, int, int, int], ...]:
    """Expansion of the Gamma partial d^{(a,b)} Gamma at lag u.

    Gamma(u) = sigma(u1^2 + u2^2), so each partial is a finite sum
    sum c * sigma^(j)(|u|^2) u1^p u2^q.  Terms are (j, p, q, c) with
    integer coefficients, built by recursion on the differentiation
    order: d/du1 maps (j,p,q,c) to (j+1,p+1,q,2c) + (j,p-1,q,pc).
    """
    if a == 0 and b == 0:
        return ((0, 0, 0, 1),)
    if a > 0:
        prev = _gamma_partial_terms(a - 1, b)
        axis = 0
    else:
        prev = _gamma_partial_terms(a, b - 1)
        axis = 1
    acc: dict[tuple[int, int, int], int] = {}
    for j, p, q, c in prev:
        pq = [p, q]
        pq[axis] += 1
        acc[(j + 1, pq[0], pq[1])] = acc.get((j + 1, pq[0], pq[1]), 0) + 2 * c
        power = (p, q)[axis]
        if power > 0:
            pq = [p, q]
            pq[axis] -= 1
            acc[(j, pq[0], pq[1])] = acc.get((j, pq[0], pq[1]), 0) + power * c
    return tuple((j, p, q, c) for (j, p, q), c in acc.items() if c != 0)


def _gamma_partial(model: CovarianceModel, a: int, b: int, u: np.ndarray, sigma=None):
    """(d^a_1 d^b_2 Gamma)(u) for a planar lag u.

    sigma overrides the profile-derivative evaluator (used for memoized
    or extended-precision assembly).
    """
    if sigma is None:
        sigma = lambda j, x: float(model.sigma_derivative(j, float(x)))
    x = u[0] * u[0] + u[1] * u[1]
    total = 0.0
    for j, p, q, c in _gamma_partial_terms(a, b):
        if x == 0.0 and (p or q):
            continue
        total = total + c * sigma(j, x) * u[0] ** p * u[1] ** q
    return total


def derivative_covariance(model: CovarianceModel, specs, extended: bool = False) -> np.ndarray:
    """Exact covariance matrix of a list of field derivatives.

    Parameters
    ----------
    model : CovarianceModel
    specs : sequence of (point, alpha)
        Each entry names one scalar variable d^alpha psi(point), where
        point is a planar coordinate and alpha = (order in x1, order in
        x2) is a multi-index of total order <= 4.
    extended : bool
        Assemble in 80-bit arithmetic (longdouble dtype).  Needed when
        the matrix feeds a conditioning step whose result is many orders
        of magnitude below the entries, e.g. derivative pairs at small
        separation.

    Returns
    -------
    ndarray
        Symmetric covariance matrix, one row/column per spec, from the
        identity E[d^a psi(t) d^b psi(s)] = (-1)^{|b|} (d^{a+b} Gamma)(t - s)
        with the Gamma partials evaluated in closed form per family.

    Raises
    ------
    ValueError
        If any multi-index exceeds total order 4.
    MomentDivergenceError
        If a required sigma derivative does not exist for the model.
    """
    dtype = np.longdouble if extended else float
    parsed = []
    for point, alpha in specs:
        a1, a2 = int(alpha[0]), int(alpha[1])
        if a1 < 0 or a2 < 0 or a1 + a2 > MAX_DERIVATIVE_ORDER:
            raise ValueError(f"multi-index {alpha} exceeds total order {MAX_DERIVATIVE_ORDER}")
        parsed.append((np.asarray(point, dtype=dtype), (a1, a2)))

    # Few distinct (j, |lag|^2) pairs occur across the matrix; memoize
    # the profile evaluations (the power-law family integrates per call).
    cache: dict = {}

    def sigma(j, x):
        key = (j, float(x))
        if key not in cache:
            cache[key] = (
                model._sigma_derivative_ld(j, x)
                if extended
                else float(model.sigma_derivative(j, float(x)))
            )
        return cache[key]

    n = len(parsed)
    cov = np.empty((n, n), dtype=dtype)
    for i in range(n):
        pi, (ai1, ai2) = parsed[i]
        for j in range(i, n):
            pj, (aj1, aj2) = parsed[j]
            sign = -1.0 if (aj1 + aj2) % 2 else 1.0
            cov[i, j] = cov[j, i] = sign * _gamma_partial(
                model, ai1 + aj1, ai2 + aj2, pi - pj, sigma
            )
    return cov


def is_shifted_random_wave(model: CovarianceModel):
    """Whether the spectral measure is an atom at 0 plus one uniform circle.

    Returns
    -------
    (bool, float or None)
        (True, circle radius) for random waves, shifted random waves,
        and mixtures that collapse to a single circle; (False, None)
        otherwise.  Drives the degenerate-conditioning branch of the
        Kac-Rice expansion operations, where the third derivatives of a
        wave field satisfy an exact linear relation.
    """
    dec = model._circle_decomposition()
    if dec is None:
        return False, None
    _, circles = dec
    if len(circles) != 1:
        return False, None
    return True, next(iter(circles))


# ---------------------------------------------------------------------------
# Config round-trip
# ---------------------------------------------------------------------------

_FAMILIES = {
    "bargmannfock": BargmannFock,
    "randomwave": RandomWave,
    "shiftedrandomwave": ShiftedRandomWave,
    "powerlawtruncated": PowerLawTruncated,
    "interpolation": Interpolation,
}


def model_to_config(model: CovarianceModel) -> dict:
    """Serialize to a flat {key: value} mapping with a 'family' entry."""
    config = {"family": model.family}
    config.update(model.params())
    return config


def model_from_config(config: dict) -> CovarianceModel:
    """Build a model from a flat mapping as produced by model_to_config.

    Nested models (Interpolation children) use dotted keys, e.g.
    left.family = randomwave, left.k = 1.  Values may be strings; they
    are coerced to float where a number is expected.
    """
    config = {str(k): v for k, v in config.items()}
    family = str(config.get("family", "")).lower()
    if family not in _FAMILIES:
        raise ValueError(f"unknown model family {family!r}; expected one of {sorted(_FAMILIES)}")
    if family == "interpolation":
        left = model_from_config(_sub_config(config, "left"))
        right = model_from_config(_sub_config(config, "right"))
        return Interpolation(s=float(config["s"]), left=left, right=right)
    cls = _FAMILIES[family]
    kwargs = {
        key: float(val)
        for key, val in config.items()
        if key != "family" and "." not in key
    }
    return cls(**kwargs)


def _sub_config(config: dict, prefix: str) -> dict:
    dot = prefix + "."
    return {key[len(dot):]: val for key, val in config.items() if key.startswith(dot)}
