"""Floating-point instantiation and independent numerical checks.

The deformed radial operator -sqrt(f) d/dr f d/dr sqrt(f) + V becomes
-d^2/dx^2 + V(r(x)) under x = arcsin(sqrt(k) r)/sqrt(k), phi = sqrt(f) psi,
so a plain three-point stencil on (0, pi/(2 sqrt(k))) discretizes it.

The extended potentials blow up like 1/f^(2m) at r = 1/sqrt(k), which
confines their states to that half-range.  The pure Kepler-Coulomb term
-Q f/r is regular there and its bound states continue onto the whole
polar range x in (0, pi/sqrt(k)) with the signed f = cos(sqrt(k) x); the
solver uses that range for m = 0 and calls V(r, f) with the signed f.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import gfm
from .curvedalg import CurvedExpr


class NonFiniteV(ValueError):
    pass


class DomainError(ValueError):
    pass


class NormalizationFailure(ValueError):
    pass


@dataclass(frozen=True)
class ModelParams:
    kappa: float
    L: float
    Q: float
    m: int = 0

    def __post_init__(self):
        if not self.kappa > 0:
            raise ValueError("kappa must be positive")
        if not self.Q > 0:
            raise ValueError("Q must be positive")
        if self.L < -0.5:
            raise ValueError("L must be >= -1/2")
        if self.m < 0:
            raise ValueError("m must be non-negative")

    @classmethod
    def from_dl(cls, kappa, d: int, l: int, Q, m: int = 0):
        if d < 2 or l < 0:
            raise ValueError("need d >= 2 and l >= 0")
        return cls(kappa, l + (d - 3) / 2, Q, m)

    @classmethod
    def from_calq(cls, kappa, L, calQ, m: int = 0):
        return cls(kappa, L, 2 * (L + 1) * (L + 2) * calQ, m)

    @property
    def calQ(self) -> float:
        return self.Q / (2 * (self.L + 1) * (self.L + 2))

    @property
    def r_max(self) -> float:
        return 1 / math.sqrt(self.kappa)

    @property
    def x_max(self) -> float:
        return math.pi / (2 * math.sqrt(self.kappa))

    def symbol_values(self) -> dict:
        return {"q": self.calQ, "k": self.kappa, "L": self.L, "Q": self.Q}


@dataclass(frozen=True)
class GridSpec:
    n: int = 4000
    eps: float = 1e-4

    def __post_init__(self):
        if self.n < 100:
            raise ValueError("grid needs n >= 100")
        if not 0 < self.eps < 0.1:
            raise ValueError("inset must satisfy 0 < eps < 0.1")

    def x_nodes(self, params: ModelParams, full_sphere: bool = False):
        """Interior points and spacing; Dirichlet at the inset endpoints.

        The inset is eps * pi/(2 sqrt(k)) at each end, also on the full range.
        """
        X = params.x_max
        a, b = self.eps * X, (2 if full_sphere else 1) * X - self.eps * X
        h = (b - a) / (self.n + 1)
        return a + h * np.arange(1, self.n + 1), h


def r_of_x(x, kappa):
    sk = math.sqrt(kappa)
    return np.sin(sk * x) / sk


def f_of_r(r, kappa):
    return np.sqrt(1 - kappa * np.asarray(r) ** 2)


# ---------------------------------------------------------------------------
# models


@dataclass
class Model:
    params: ModelParams
    B: list  # numeric B_1 .. B_2m
    E0: float
    E1: float
    psi0: gfm.WaveDescriptor | None = None
    psi1: gfm.WaveDescriptor | None = None
    a_m: float | None = None
    exact: gfm.PotentialSpec | None = field(default=None, repr=False)

    def V(self, r, f=None):
        return potential_values(self.params, self.B, r, f)


def potential_values(params: ModelParams, B, r, f=None):
    """L(L+1)/r^2 - Q f/r + k sum_j (B_{2j-1} r/f^(2j-1) + B_{2j}/f^(2j)).

    ``f`` defaults to the positive root sqrt(1 - k r^2).
    """
    r = np.asarray(r, dtype=float)
    f = f_of_r(r, params.kappa) if f is None else np.asarray(f, dtype=float)
    v = params.L * (params.L + 1) / r**2 - params.Q * f / r
    for idx, b in enumerate(B):
        j = idx // 2 + 1
        if idx % 2 == 0:
            v = v + params.kappa * b * r / f ** (2 * j - 1)
        else:
            v = v + params.kappa * b / f ** (2 * j)
    return v


@lru_cache(maxsize=None)
def _exact_family(m: int):
    sol = gfm.solve_coeffs(m)
    pot = gfm.assemble_potential(sol)
    psi0, psi1 = gfm.wavefunctions(sol)
    return sol, pot, psi0, psi1


def build_model(params: ModelParams) -> Model:
    """Numeric potential, exact energies and closed-form states for the given family member."""
    if params.m == 0:
        return Model(params, [], kc_spectrum(params, 0), kc_spectrum(params, 1))
    sol, pot, psi0, psi1 = _exact_family(params.m)
    vals = params.symbol_values()
    B = [float(b.evaluate(vals)) for b in pot.B]
    return Model(
        params,
        B,
        float(pot.E0.evaluate(vals)),
        float(pot.E1.evaluate(vals)),
        psi0,
        psi1,
        float(sol.a[params.m].evaluate(vals)),
        pot,
    )


def kc_spectrum(params: ModelParams, n_r: int) -> float:
    """Closed-form eigenvalue -Q^2/(4 n^2) + k n^2 with n = n_r + L + 1."""
    n = n_r + params.L + 1
    if n <= 0:
        raise ValueError("principal number must be positive")
    return -params.Q**2 / (4 * n**2) + params.kappa * n**2


# ---------------------------------------------------------------------------
# tridiagonal eigenvalues by Sturm counting


def _sturm_counts(diag, off2, lams):
    """Number of eigenvalues < lam for each lam (LDL^T pivot signs)."""
    lams = np.asarray(lams, dtype=float)
    tiny = np.finfo(float).tiny ** 0.5
    d = diag[0] - lams
    count = (d < 0).astype(np.int64)
    for i in range(1, len(diag)):
        d = np.where(d == 0, tiny, d)
        d = (diag[i] - lams) - off2[i - 1] / d
        count += d < 0
    return count


def tridiag_eigvals_lowest(diag, off, n_states: int, rtol=1e-13, points=31):
    """Lowest ``n_states`` eigenvalues of a symmetric tridiagonal matrix by multisection."""
    diag = np.asarray(diag, dtype=float)
    off = np.asarray(off, dtype=float)
    n = len(diag)
    if not 1 <= n_states <= n:
        raise ValueError("n_states out of range")
    off2 = off**2
    rad = np.zeros(n)
    rad[:-1] += np.abs(off)
    rad[1:] += np.abs(off)
    lo0 = float(np.min(diag - rad))
    # upper bracket: grow until it holds n_states eigenvalues
    hi0 = max(abs(lo0), 1.0)
    while _sturm_counts(diag, off2, [hi0])[0] < n_states:
        hi0 *= 4
    lo = np.full(n_states, lo0)
    hi = np.full(n_states, hi0)
    ks = np.arange(n_states)
    frac = np.arange(1, points + 1) / (points + 1)
    while True:
        width = hi - lo
        scale = np.maximum(np.abs(lo), np.abs(hi))
        active = width > rtol * np.maximum(scale, 1.0)
        if not active.any():
            break
        idx = ks[active]
        pts = lo[idx, None] + width[idx, None] * frac[None, :]
        cnt = _sturm_counts(diag, off2, pts.ravel()).reshape(pts.shape)
        for row, kk in enumerate(idx):
            below = cnt[row] <= kk
            if below.any():
                lo[kk] = pts[row][below].max()
            above = ~below
            if above.any():
                hi[kk] = pts[row][above].min()
    return (lo + hi) / 2


def fd_matrix(V, params: ModelParams, grid: GridSpec, full_sphere: bool = False):
    x, h = grid.x_nodes(params, full_sphere)
    r = r_of_x(x, params.kappa)
    with np.errstate(all="ignore"):
        if full_sphere:
            v = np.asarray(V(r, np.cos(math.sqrt(params.kappa) * x)), dtype=float)
        else:
            v = np.asarray(V(r), dtype=float)
    if v.shape != x.shape or not np.all(np.isfinite(v)):
        raise NonFiniteV("potential is not finite on the inset grid")
    diag = 2 / h**2 + v
    off = np.full(len(x) - 1, -1 / h**2)
    return diag, off


def eigensolve_fd(V, params: ModelParams, grid: GridSpec, n_states: int = 2, full_sphere=None) -> np.ndarray:
    """Lowest eigenvalues of -d^2/dx^2 + V(r(x)) with Dirichlet ends at the inset.

    ``full_sphere`` defaults to ``params.m == 0`` (see the module docstring).
    """
    if full_sphere is None:
        full_sphere = params.m == 0
    diag, off = fd_matrix(V, params, grid, full_sphere)
    return tridiag_eigvals_lowest(diag, off, n_states)


# ---------------------------------------------------------------------------
# wavefunctions


@dataclass
class _NumericDescriptor:
    r_exp: float
    f_exp: float
    arcsin_coeff: float
    inv_f_even: dict
    r_f_odd: dict
    prefactor: CurvedExpr | None


def _numeric(desc: gfm.WaveDescriptor, params: ModelParams) -> _NumericDescriptor:
    vals = params.symbol_values()

    def ev(c):
        return float(c.evaluate(vals))

    return _NumericDescriptor(
        ev(desc.r_exp),
        ev(desc.f_exp),
        ev(desc.arcsin_coeff),
        {j: ev(c) for j, c in desc.inv_f_even.items()},
        {j: ev(c) for j, c in desc.r_f_odd.items()},
        desc.prefactor,
    )


def log_wavefunction(desc: gfm.WaveDescriptor, params: ModelParams, r):
    """``(log|exponential part|, prefactor)`` so that psi = prefactor * exp(log part)."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0) or np.any(r >= params.r_max):
        raise DomainError("r must lie in (0, 1/sqrt(kappa))")
    nd = _numeric(desc, params)
    kappa = params.kappa
    sk = math.sqrt(kappa)
    f = f_of_r(r, kappa)
    logv = nd.r_exp * np.log(r) + nd.f_exp * np.log(f) + nd.arcsin_coeff * np.arcsin(sk * r) / sk
    for j, c in nd.inv_f_even.items():
        logv = logv + c / f ** (2 * j)
    for j, c in nd.r_f_odd.items():
        logv = logv + c * r / f ** (2 * j - 1)
    if nd.prefactor is None:
        pre = np.ones_like(r)
    else:
        pre = np.asarray(nd.prefactor.evaluate(params.symbol_values(), r, kappa), dtype=float)
        pre = np.broadcast_to(pre, r.shape).astype(float)
    return logv, pre


def eval_wavefunction(desc: gfm.WaveDescriptor, params: ModelParams, r):
    """Unnormalized psi(r); for the excited state the W+ prefactor is included."""
    logv, pre = log_wavefunction(desc, params, r)
    out = pre * np.exp(logv)
    return float(out) if np.ndim(out) == 0 else out


def _scaled(desc, params, r):
    """psi on ``r`` rescaled by a common positive factor (overflow-safe)."""
    logv, pre = log_wavefunction(desc, params, r)
    top = np.max(logv + np.log(np.maximum(np.abs(pre), np.finfo(float).tiny)))
    return pre * np.exp(logv - top)


def count_nodes(values, floor=1e-12) -> int:
    v = np.asarray(values, dtype=float)
    big = np.max(np.abs(v))
    keep = v[np.abs(v) > floor * big]
    s = np.sign(keep)
    return int(np.count_nonzero(s[1:] != s[:-1]))


def _gauss_x(params: ModelParams, eps: float, panels: int, order: int = 16):
    X = params.x_max
    a, b = eps * X, (1 - eps) * X
    t, wts = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    mid = (edges[1:] + edges[:-1]) / 2
    half = (edges[1:] - edges[:-1]) / 2
    x = (mid[:, None] + half[:, None] * t[None, :]).ravel()
    w = (half[:, None] * wts[None, :]).ravel()
    return x, w


def overlap_and_nodes(psi_a, psi_b, params: ModelParams, grid: GridSpec, panels: int = 400, node_points: int = 100_000):
    """Normalized int psi_a psi_b dr and the sign-change counts of both states."""
    x, w = _gauss_x(params, grid.eps, panels)
    r = r_of_x(x, params.kappa)
    f = f_of_r(r, params.kappa)
    with np.errstate(all="ignore"):
        ua = _scaled(psi_a, params, r)
        ub = _scaled(psi_b, params, r)
    # dr = f dx
    na = np.sum(w * f * ua * ua)
    nb = np.sum(w * f * ub * ub)
    if not (np.isfinite(na) and np.isfinite(nb)) or na <= 0 or nb <= 0:
        raise NormalizationFailure("wavefunction norm is not finite")
    ov = np.sum(w * f * ua * ub) / math.sqrt(na * nb)
    xs = np.linspace(grid.eps * params.x_max, (1 - grid.eps) * params.x_max, node_points)
    rs = r_of_x(xs, params.kappa)
    with np.errstate(all="ignore"):
        nodes = (count_nodes(_scaled(psi_a, params, rs)), count_nodes(_scaled(psi_b, params, rs)))
    return float(ov), nodes


def operator_residual(desc, E: float, V, params: ModelParams, grid: GridSpec) -> float:
    """max |-phi'' + V phi - E phi| / max|phi| on the grid, phi = sqrt(f) psi, 4th-order phi''."""
    x, h = grid.x_nodes(params)
    # two extra points on each side feed the five-point stencil
    xe = np.concatenate([x[0] - h * np.arange(2, 0, -1), x, x[-1] + h * np.arange(1, 3)])
    re = r_of_x(xe, params.kappa)
    with np.errstate(all="ignore"):
        phi = np.sqrt(f_of_r(re, params.kappa)) * _scaled(desc, params, re)
        v = np.asarray(V(re[2:-2]), dtype=float)
    d2 = (-phi[:-4] + 16 * phi[1:-3] - 30 * phi[2:-2] + 16 * phi[3:-1] - phi[4:]) / (12 * h * h)
    core = phi[2:-2]
    res = -d2 + v * core - E * core
    return float(np.max(np.abs(res)) / np.max(np.abs(core)))


def locate_node(desc, params: ModelParams, grid: GridSpec, node_points: int = 100_000) -> float:
    """Position of the single sign change of ``desc`` (brentq on the bracketing cell)."""
    from scipy.optimize import brentq

    xs = np.linspace(grid.eps * params.x_max, (1 - grid.eps) * params.x_max, node_points)
    rs = r_of_x(xs, params.kappa)
    with np.errstate(all="ignore"):
        v = _scaled(desc, params, rs)
    s = np.sign(v)
    idx = np.nonzero(s[1:] * s[:-1] < 0)[0]
    if len(idx) != 1:
        raise ValueError(f"expected one sign change, found {len(idx)}")
    i = idx[0]
    return brentq(lambda r: eval_wavefunction(desc, params, r), rs[i], rs[i + 1], xtol=1e-15, rtol=1e-15)


def observed_order(residuals, ns) -> float:
    """Least-squares slope of log residual against log h (h ~ 1/n)."""
    lh = -np.log(np.asarray(ns, dtype=float))
    lr = np.log(np.asarray(residuals, dtype=float))
    return float(np.polyfit(lh, lr, 1)[0])
