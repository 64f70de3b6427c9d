"""Boundary families of the relative-potential planes and region tests.

Five named families bound the reachable (negativity, concurrence, REE)
combinations of beam-splitter outputs of single-photon states:

* P - pure inputs, balanced lossless splitter;
* D - completely dephased inputs (singlet/vacuum mixtures);
* Z - optimally dephased inputs: largest negativity at fixed REE among
      balanced-lossless outputs (found numerically);
* A - generalized singlet/vacuum mixtures from unbalanced splitting:
      largest REE at fixed negativity (found numerically);
* B - phase-damped Bell-diagonal states: outer bound on the negativity at
      fixed REE.

In the (REE, N) plane the band between min(P, D) and Z is reachable with a
balanced lossless splitter ("yellow"); between Z and B only with damping
("cyan-upper"); between A and min(P, D) only with unbalanced splitting
("cyan-lower"); everything else is unreachable for these states.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import EplabError, ValidationError
from .linalg import binary_entropy
from .measures import (
    concurrence,
    negativity,
    ree_closed_horodecki,
    ree_closed_pure,
)
from .parallel import run_tasks
from .ree import solve_ree_batch
from .states import bs_output_matrix, generalized_horodecki, rho_b, rho_b_weights

PLANES = ("cp-np", "cp-reep", "np-reep")
FAMILY_PLANES = {
    "P": PLANES,
    "D": PLANES,
    "Z": ("np-reep",),
    "A": ("np-reep",),
    "B": ("np-reep", "cp-reep"),
}
_BALANCED_R = 1.0 / np.sqrt(2.0)
REGION_BAND = 1e-9  # boundary tolerance, resolved toward the inner region


@dataclass(frozen=True)
class BoundaryCurve:
    """Ordered samples of one boundary family in one plane.

    Every sample carries the state parameters it was computed from, so the
    (abscissa, ordinate) pair can be reproduced through the measures module.
    """

    family: str
    plane: str
    abscissa: np.ndarray
    ordinate: np.ndarray
    params: tuple[dict, ...]

    def __post_init__(self):
        if self.family not in FAMILY_PLANES:
            raise ValidationError(f"unknown family {self.family!r}")
        if self.plane not in FAMILY_PLANES[self.family]:
            raise ValidationError(f"family {self.family} has no {self.plane} curve")
        a = np.asarray(self.abscissa)
        if np.any(np.diff(a) <= 0):
            raise ValidationError("curve abscissa must be strictly increasing")
        for arr in (self.abscissa, self.ordinate):
            if np.min(arr) < -1e-12 or np.max(arr) > 1.0 + 1e-12:
                raise ValidationError("curve values must lie in [0, 1]")

    @property
    def samples(self):
        return list(zip(self.abscissa, self.ordinate, self.params))

    def __len__(self):
        return len(self.abscissa)


@dataclass(frozen=True)
class RegionVerdict:
    """Region assignment of one (REE, negativity) point with distances to
    the curves delimiting that region."""

    region: str
    margins: dict

    def __post_init__(self):
        if self.region not in ("yellow", "cyan-upper", "cyan-lower", "unphysical"):
            raise ValidationError(f"unknown region {self.region!r}")
        if any(v < 0 for v in self.margins.values()):
            raise ValidationError("margins must be non-negative")


def cosine_grid(n: int, lo: float = 0.0, hi: float = 1.0) -> np.ndarray:
    """n points on [lo, hi] concentrated toward both endpoints."""
    t = np.linspace(0.0, np.pi, n)
    return lo + (hi - lo) * 0.5 * (1.0 - np.cos(t))


def _resolve_grid(grid, lo, hi, default_n=400) -> np.ndarray:
    if grid is None:
        return cosine_grid(default_n, lo, hi)
    if np.isscalar(grid):
        return cosine_grid(int(grid), lo, hi)
    g = np.asarray(grid, dtype=float)
    if np.any(np.diff(g) <= 0):
        raise ValidationError("grid must be strictly increasing")
    return g


def _strictly_increasing(abscissa, ordinate, params):
    order = np.argsort(abscissa, kind="stable")
    abscissa = np.asarray(abscissa)[order]
    ordinate = np.asarray(ordinate)[order]
    params = [params[i] for i in order]
    keep = np.concatenate([[True], np.diff(abscissa) > 1e-15])
    idx = np.flatnonzero(keep)
    return abscissa[idx], ordinate[idx], tuple(params[i] for i in idx)


def _clip_unit(arr, slack=1e-6):
    arr = np.asarray(arr, dtype=float)
    if np.min(arr) < -slack or np.max(arr) > 1.0 + slack:
        raise ValidationError("curve values stray outside [0, 1]")
    return np.clip(arr, 0.0, 1.0)


def _make_curve(family, plane, values, params):
    """values: dict with any of "np", "cp", "reep" arrays for the plane axes."""
    axis_a, axis_o = {"cp-np": ("np", "cp"), "cp-reep": ("reep", "cp"),
                      "np-reep": ("reep", "np")}[plane]
    a, o, params = _strictly_increasing(_clip_unit(values[axis_a]),
                                        _clip_unit(values[axis_o]), params)
    return BoundaryCurve(family=family, plane=plane, abscissa=a,
                         ordinate=o, params=params)


def dephased_negativity(p) -> np.ndarray:
    """Negativity of the singlet/vacuum mixture: sqrt((1-p)^2 + p^2) - (1-p)."""
    p = np.asarray(p, dtype=float)
    return np.sqrt((1.0 - p) ** 2 + p ** 2) - (1.0 - p)


def _dephased_p_at_negativity(n) -> np.ndarray:
    """Inverse of dephased_negativity: p = sqrt(2 n (n+1)) - n."""
    n = np.asarray(n, dtype=float)
    return np.sqrt(2.0 * n * (n + 1.0)) - n


def _reep_pure(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    return binary_entropy(0.5 * (1.0 + np.sqrt(np.clip(1.0 - p * p, 0.0, None))))


def _reep_dephased(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    out = (p - 2.0) * np.log2(1.0 - p / 2.0)
    inner = np.where(p < 1.0, 1.0 - p, 1.0)
    return out + (1.0 - p) * np.log2(inner)


def curve_pure(grid=None, plane: str = "np-reep") -> BoundaryCurve:
    """Pure-input family: NP = CP = p, REEP = h((1 + sqrt(1-p^2))/2)."""
    p = _resolve_grid(grid, 0.0, 1.0)
    values = {"np": p, "cp": p, "reep": _reep_pure(p)}
    params = tuple({"p": float(v), "x": float(np.sqrt(v * (1 - v)))} for v in p)
    return _make_curve("P", plane, values, params)


def curve_dephased(grid=None, plane: str = "np-reep") -> BoundaryCurve:
    """Completely dephased family: CP = p with the singlet/vacuum closed forms."""
    p = _resolve_grid(grid, 0.0, 1.0)
    values = {"np": dephased_negativity(p), "cp": p, "reep": _reep_dephased(p)}
    params = tuple({"p": float(v), "x": 0.0} for v in p)
    return _make_curve("D", plane, values, params)


def curve_b(grid=None, plane: str = "np-reep", tol: float = 1e-6) -> BoundaryCurve:
    """Phase-damped Bell-diagonal family on a kappa grid (kappa1 = kappa2).

    The negativity is evaluated numerically and checked against the Bell
    weights 2 lambda_+ - 1; the REE comes from the numerical solver (its
    agreement with 1 - h(lambda_+) is a test-suite oracle).
    """
    kappa = _resolve_grid(grid, 0.0, 1.0)
    states = np.stack([rho_b(k, k) for k in kappa])
    n = negativity(states)
    for k, nv in zip(kappa, n):
        expect = 2.0 * rho_b_weights(k, k)[1] - 1.0
        if abs(nv - expect) > 1e-10:
            raise EplabError(f"negativity {nv} differs from Bell weights at kappa={k}")
    ree = solve_ree_batch(states, tol=tol).values
    c = concurrence(states)
    values = {"np": n, "cp": c, "reep": ree}
    params = tuple({"kappa": float(k)} for k in kappa)
    return _make_curve("B", plane, values, params)


# --- optimally dephased family (Z) -------------------------------------------

def sigma_z_coherence(p, n_bar) -> np.ndarray:
    """Coherence magnitude that keeps the balanced-lossless negativity at
    n_bar: x = 1/2 sqrt((1 + p/n)(2n(n+1) - (n+p)^2))."""
    p = np.asarray(p, dtype=float)
    inner = (1.0 + p / n_bar) * (2.0 * n_bar * (n_bar + 1.0) - (n_bar + p) ** 2)
    x = 0.5 * np.sqrt(np.clip(inner, 0.0, None))
    return np.minimum(x, np.sqrt(np.clip(p * (1.0 - p), 0.0, None)))


def sigma_z_bracket(n_bar: float) -> tuple[float, float]:
    """Probability range over which the n_bar negativity level set exists,
    from the pure end (p = n_bar) to the dephased end."""
    return float(n_bar), float(np.sqrt(2.0 * n_bar * (n_bar + 1.0)) - n_bar)


def _reep_of_level_set(ps, n_bar, tol, warm=None):
    xs = sigma_z_coherence(ps, n_bar)
    rhos = bs_output_matrix(ps, xs, _BALANCED_R, 1.0)
    res = solve_ree_batch(rhos, tol=tol, warm_sigmas=warm)
    return res.values, res.sigmas


def _golden_min(eval_fn, lo: float, hi: float, steps: int):
    """Scalar golden-section minimization; eval_fn returns (value, warm)."""
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    c = hi - invphi * (hi - lo)
    d = lo + invphi * (hi - lo)
    fc, _ = eval_fn(c)
    fd, _ = eval_fn(d)
    for _ in range(steps):
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - invphi * (hi - lo)
            fc, _ = eval_fn(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + invphi * (hi - lo)
            fd, _ = eval_fn(d)
    return (c, fc) if fc < fd else (d, fd)


_SCAN_POINTS = 64
_GOLDEN_STEPS = 34  # shrinks any unit bracket below 1e-7


def sigma_z_optimize(n_bar: float, tol: float = 1e-6):
    """Minimize the REE potential over the negativity-n_bar level set.

    Returns (p_opt, x_opt, reep). Scans the bracket, refines by golden
    section to 1e-7 in p, and verifies that the resulting state indeed has
    negativity n_bar within 1e-4.
    """
    if not 0.0 < n_bar < 1.0:
        raise ValidationError(f"target negativity {n_bar} outside (0, 1)")
    lo, hi = sigma_z_bracket(n_bar)
    if hi <= lo:
        raise EplabError(f"empty probability bracket for n_bar={n_bar}")
    scan_tol = max(tol, 1e-5)
    ps = np.linspace(lo, hi, _SCAN_POINTS)
    vals, sigmas = _reep_of_level_set(ps, n_bar, scan_tol)
    i = int(np.argmin(vals))
    warm = {"sigma": sigmas[i]}

    def eval_one(p):
        v, s = _reep_of_level_set(np.array([p]), n_bar, scan_tol,
                                  warm=warm["sigma"][None])
        warm["sigma"] = s[0]
        return float(v[0]), s[0]

    glo = ps[max(i - 1, 0)]
    ghi = ps[min(i + 1, len(ps) - 1)]
    p_opt, _ = _golden_min(eval_one, glo, ghi, _GOLDEN_STEPS)
    x_opt = float(sigma_z_coherence(p_opt, n_bar))
    rho = bs_output_matrix(p_opt, x_opt, _BALANCED_R, 1.0)
    n_check = negativity(rho)
    if abs(n_check - n_bar) > 1e-4:
        raise EplabError(
            f"level-set construction drifted: negativity {n_check} vs target {n_bar}")
    reep = float(solve_ree_batch(rho[None], tol=tol,
                                 warm_sigmas=warm["sigma"][None]).values[0])
    return float(p_opt), x_opt, reep


# --- unbalanced-splitting family (A) ------------------------------------------

def rho_a_weight(p, n_bar, branch: int = +1) -> np.ndarray:
    """Schmidt weight of the generalized singlet/vacuum mixture with
    negativity n_bar: q = (p +/- sqrt(p^2 - n^2 - 2n(1-p))) / (2p)."""
    p = np.asarray(p, dtype=float)
    disc = p * p - n_bar * n_bar - 2.0 * n_bar * (1.0 - p)
    s = np.sqrt(np.clip(disc, 0.0, None))
    return np.clip((p + branch * s) / (2.0 * p), 0.0, 1.0)


def _ree_of_gh(ps, n_bar, tol, warm=None, branch=+1):
    qs = rho_a_weight(ps, n_bar, branch)
    rhos = np.stack([generalized_horodecki(float(p), float(q))
                     for p, q in zip(np.atleast_1d(ps), np.atleast_1d(qs))])
    res = solve_ree_batch(rhos, tol=tol, warm_sigmas=warm)
    return res.values, res.sigmas


def rho_a_optimize(n_bar: float, tol: float = 1e-6):
    """Maximize the REE over generalized singlet/vacuum mixtures with
    negativity n_bar; returns (p_opt, q_opt, ree).

    Feasible mixing probabilities run from the dephased end (where the
    branch discriminant vanishes) up to p = 1; both weight branches give
    swap-equivalent states, so the '+' branch is canonical.
    """
    if not 0.0 < n_bar < 0.62:
        raise ValidationError(
            f"target negativity {n_bar} outside the family domain (0, ~0.53)")
    lo, hi = sigma_z_bracket(n_bar)[1], 1.0
    if hi <= lo:
        raise EplabError(f"no feasible branch for n_bar={n_bar}")
    scan_tol = max(tol, 1e-5)
    ps = np.linspace(lo, hi, _SCAN_POINTS)
    vals, sigmas = _ree_of_gh(ps, n_bar, scan_tol)
    i = int(np.argmax(vals))
    warm = {"sigma": sigmas[i]}

    def eval_neg(p):
        v, s = _ree_of_gh(np.array([p]), n_bar, scan_tol, warm=warm["sigma"][None])
        warm["sigma"] = s[0]
        return -float(v[0]), s[0]

    glo = ps[max(i - 1, 0)]
    ghi = ps[min(i + 1, len(ps) - 1)]
    p_opt, _ = _golden_min(eval_neg, glo, ghi, _GOLDEN_STEPS)
    q_plus = float(rho_a_weight(p_opt, n_bar, +1))
    q_minus = float(rho_a_weight(p_opt, n_bar, -1))
    ree_b = {}
    for q in (q_plus, q_minus):
        rho = generalized_horodecki(float(p_opt), q)
        ree_b[q] = float(solve_ree_batch(rho[None], tol=tol).values[0])
    q_opt = max(ree_b, key=ree_b.get)
    rho = generalized_horodecki(float(p_opt), q_opt)
    n_check = negativity(rho)
    if abs(n_check - n_bar) > 1e-4:
        raise EplabError(
            f"constraint drifted: negativity {n_check} vs target {n_bar}")
    return float(p_opt), q_opt, ree_b[q_opt]


# --- numerically optimized curves ----------------------------------------------

def _golden_min_lockstep(f, lo, hi, steps):
    """Vectorized golden-section minimization; one batched eval per step."""
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    c = hi - invphi * (hi - lo)
    d = lo + invphi * (hi - lo)
    fc = f(c)
    fd = f(d)
    for _ in range(steps):
        take = fc < fd  # minimum in [lo, d]
        lo = np.where(take, lo, c)
        hi = np.where(take, d, hi)
        c_new = hi - invphi * (hi - lo)
        d_new = lo + invphi * (hi - lo)
        # One interior point carries over (d_new == c where take, c_new == d
        # elsewhere); only the other needs evaluating.
        probe = np.where(take, c_new, d_new)
        fp = f(probe)
        fc, fd = np.where(take, fp, fd), np.where(take, fc, fp)
        c, d = c_new, d_new
    p = np.where(fc < fd, c, d)
    v = np.where(fc < fd, fc, fd)
    return p, v, lo, hi


def _optimized_curve(n_grid, eval_batch, maximize, tol,
                     coarse_n=17, fine_steps=16):
    """Shared driver for the Z and A curves.

    Runs full bracketing scans on a coarse n_bar subgrid, interpolates the
    optimal probability to the full grid, then refines every grid point in
    lockstep by golden section on a narrow bracket (re-widened if the
    optimum lands on a bracket edge). eval_batch(ps, n_bars, warm, tol)
    returns (values, warm_sigmas) for elementwise (p, n_bar) pairs.
    """
    n_grid = np.asarray(n_grid, dtype=float)
    sign = -1.0 if maximize else 1.0
    scan_tol = max(tol, 1e-5)

    coarse = np.unique(np.concatenate([
        np.interp(np.linspace(0, 1, coarse_n),
                  np.linspace(0, 1, len(n_grid)), n_grid),
        n_grid[[0, -1]]]))
    brackets = np.array([_family_bracket(n, maximize) for n in coarse])
    ps = np.linspace(brackets[:, 0], brackets[:, 1], _SCAN_POINTS, axis=1)
    vals, _ = eval_batch(ps.ravel(), np.repeat(coarse, _SCAN_POINTS), None, scan_tol)
    vals = sign * vals.reshape(len(coarse), _SCAN_POINTS)
    p_coarse = ps[np.arange(len(coarse)), np.argmin(vals, axis=1)]

    full_br = np.array([_family_bracket(n, maximize) for n in n_grid])
    span = full_br[:, 1] - full_br[:, 0]
    p0 = np.clip(np.interp(n_grid, coarse, p_coarse), full_br[:, 0], full_br[:, 1])

    warm = {"sig": None}

    def f(p):
        v, s = eval_batch(p, n_grid, warm["sig"], scan_tol)
        warm["sig"] = s
        return sign * v

    width = span * 0.08
    for _attempt in range(3):
        lo = np.clip(p0 - width, full_br[:, 0], full_br[:, 1])
        hi = np.clip(p0 + width, full_br[:, 0], full_br[:, 1])
        p_fin, _, lo_f, hi_f = _golden_min_lockstep(f, lo, hi, fine_steps)
        interior_lo = (p_fin - lo > 1e-9) | (lo <= full_br[:, 0] + 1e-12)
        interior_hi = (hi - p_fin > 1e-9) | (hi >= full_br[:, 1] - 1e-12)
        stuck = ~(interior_lo & interior_hi)
        if not stuck.any():
            break
        p0 = np.where(stuck, p_fin, p0)
        width = np.where(stuck, width * 4.0, width)
    v_fin, _ = eval_batch(p_fin, n_grid, warm["sig"], tol)
    return p_fin, v_fin


def _family_bracket(n_bar, maximize):
    lo, hi = sigma_z_bracket(n_bar)
    return (hi, 1.0) if maximize else (lo, hi)


def _z_eval(ps, n_bars, warm, tol):
    xs = sigma_z_coherence(ps, n_bars)
    rhos = bs_output_matrix(ps, xs, _BALANCED_R, 1.0)
    res = solve_ree_batch(rhos, tol=tol, warm_sigmas=warm)
    return res.values, res.sigmas


def _a_eval(ps, n_bars, warm, tol):
    qs = rho_a_weight(ps, n_bars, +1)
    rhos = np.stack([generalized_horodecki(float(p), float(q))
                     for p, q in zip(ps, qs)])
    res = solve_ree_batch(rhos, tol=tol, warm_sigmas=warm)
    return res.values, res.sigmas


def curve_sigma_z(grid=None, tol: float = 1e-6) -> BoundaryCurve:
    """Optimally dephased (Z) boundary in the (REE, N) plane."""
    n_grid = _resolve_grid(grid, 1e-3, 1.0 - 1e-3)
    p_opt, reep = _optimized_curve(n_grid, _z_eval, maximize=False, tol=tol)
    xs = sigma_z_coherence(p_opt, n_grid)
    params = tuple({"p": float(p), "x": float(x)} for p, x in zip(p_opt, xs))
    return _make_curve("Z", "np-reep", {"np": n_grid, "reep": reep}, params)


def curve_rho_a(grid=None, tol: float = 1e-6) -> BoundaryCurve:
    """Unbalanced-splitting (A) boundary in the (REE, N) plane."""
    n_grid = _resolve_grid(grid, 5e-3, 0.56)
    p_opt, ree = _optimized_curve(n_grid, _a_eval, maximize=True, tol=tol)
    qs = rho_a_weight(p_opt, n_grid, +1)
    params = tuple({"p": float(p), "q": float(q)} for p, q in zip(p_opt, qs))
    return _make_curve("A", "np-reep", {"np": n_grid, "reep": ree}, params)


def boundary_curve(family: str, plane: str = "np-reep", samples: int = 400,
                   tol: float = 1e-6) -> BoundaryCurve:
    """Dispatch a family letter to its curve builder."""
    builders = {
        "P": lambda: curve_pure(samples, plane),
        "D": lambda: curve_dephased(samples, plane),
        "B": lambda: curve_b(samples, plane, tol),
        "Z": lambda: curve_sigma_z(samples, tol),
        "A": lambda: curve_rho_a(samples, tol),
    }
    if family not in builders:
        raise ValidationError(f"unknown family {family!r}")
    return builders[family]()


# --- characteristic points ------------------------------------------------------

def _reep_dephased_at_negativity(n):
    return _reep_dephased(_dephased_p_at_negativity(n))


def _bisect(fn, lo, hi, iters=60):
    flo = fn(lo)
    if flo * fn(hi) > 0:
        raise EplabError("bisection interval does not bracket a sign change")
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if fn(mid) * flo <= 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


# The Z/pure curves never coincide exactly, so N0 uses a resolution
# threshold: their REE split reaches typical figure resolution (~3e-3 bits)
# at negativity ~0.2. The Z/dephased and A/pure pairs DO merge exactly (the
# inner optimizer reaches its bracket end), detected to 1e-6 in probability.
_PLOT_RESOLUTION = 3e-3
_END_TOL = 1e-6


@lru_cache(maxsize=None)
def characteristic_points(tol: float = 1e-6) -> dict:
    """Crossing and merge points of the boundary curves in the (REE, N) plane.

    N1/E1: crossing of the pure and dephased curves at equal negativity.
    N2/E2: where the A family collapses onto pure states (its optimizer
           reaches the p = 1 end of its bracket).
    N3/E3: where the Z family collapses onto the dephased one (its optimizer
           reaches the zero-coherence end of its bracket).
    N0:    upper edge of the range where Z is indistinguishable from pure
           at plotting resolution.
    """
    e1_fn = lambda n: float(_reep_pure(n) - _reep_dephased_at_negativity(n))
    n1 = _bisect(e1_fn, 0.25, 0.5)
    e1 = float(_reep_pure(n1))

    def a_merged(n):
        p_opt, _, _ = rho_a_optimize(n, tol=tol)
        return 1.0 if p_opt > 1.0 - _END_TOL else -1.0

    n2 = _bisect(a_merged, 0.45, 0.615, iters=16)
    e2 = float(_reep_pure(n2))

    def z_merged(n):
        p_opt, _, _ = sigma_z_optimize(n, tol=tol)
        hi = sigma_z_bracket(n)[1]
        return 1.0 if p_opt > hi - _END_TOL else -1.0

    n3 = _bisect(z_merged, 0.45, 0.75, iters=16)
    e3 = float(_reep_dephased_at_negativity(n3))

    def p_gap(n):
        _, _, reep = sigma_z_optimize(n, tol=tol)
        return float(_reep_pure(n) - reep) - _PLOT_RESOLUTION

    n0 = _bisect(p_gap, 0.05, 0.45, iters=16)

    return {"N0": float(n0), "N1": float(n1), "N2": float(n2), "N3": float(n3),
            "E1": e1, "E2": e2, "E3": e3}


# --- region classification -------------------------------------------------------

@dataclass(frozen=True)
class RegionCurves:
    """Interpolation tables of the four region-bounding curves, all as
    negativity versus REE."""

    reep_lower: np.ndarray
    np_lower: np.ndarray
    curve_z: BoundaryCurve
    curve_a: BoundaryCurve
    curve_outer: BoundaryCurve

    def lower_np(self, e):
        return np.interp(e, self.reep_lower, self.np_lower)

    def upper_np(self, e):
        return np.interp(e, self.curve_z.abscissa, self.curve_z.ordinate)

    def outer_np(self, e):
        return np.interp(e, self.curve_outer.abscissa, self.curve_outer.ordinate)

    def a_np(self, e):
        return np.interp(e, self.curve_a.abscissa, self.curve_a.ordinate)

    @property
    def a_reach(self) -> float:
        return float(self.curve_a.abscissa[-1])


@lru_cache(maxsize=4)
def region_curves(samples: int = 400, tol: float = 1e-6) -> RegionCurves:
    """Build (once) the curves needed by classify, at >= 400 samples.

    The three solver-heavy curves run on separate worker threads when
    EPLAB_THREADS allows.
    """
    samples = max(int(samples), 400)
    p_dense = cosine_grid(4 * samples, 0.0, 1.0)
    e_pure = _reep_pure(p_dense)
    e_deph = _reep_dephased(p_dense)
    n_deph = dephased_negativity(p_dense)
    e_axis = np.linspace(0.0, 1.0, 4 * samples)
    np_p = np.interp(e_axis, e_pure, p_dense)
    np_d = np.interp(e_axis, e_deph, n_deph)
    lower = np.minimum(np_p, np_d)

    z_curve, a_curve, b_curve = run_tasks([
        lambda: curve_sigma_z(samples, tol),
        lambda: curve_rho_a(samples, tol),
        lambda: curve_b(samples, "np-reep", tol),
    ])
    return RegionCurves(reep_lower=e_axis, np_lower=lower, curve_z=z_curve,
                        curve_a=a_curve, curve_outer=b_curve)


def classify(reep: float, np_value: float,
             curves: RegionCurves | None = None) -> RegionVerdict:
    """Assign a (REE, negativity) pair to its reachability region.

    Boundaries are resolved toward the yellow (balanced-lossless) region
    with a 1e-9 tolerance band.
    """
    if not 0.0 <= reep <= 1.0 or not 0.0 <= np_value <= 1.0:
        raise ValidationError("classify expects values in [0, 1]")
    if curves is None:
        curves = region_curves()
    lo = float(curves.lower_np(reep))
    up = float(curves.upper_np(reep))
    outer = float(curves.outer_np(reep))
    band = REGION_BAND
    if lo - band <= np_value <= up + band:
        return RegionVerdict("yellow", {
            "lower": max(0.0, np_value - lo), "upper": max(0.0, up - np_value)})
    if np_value > up:
        if np_value <= outer + band:
            return RegionVerdict("cyan-upper", {
                "lower": max(0.0, np_value - up), "outer": max(0.0, outer - np_value)})
        return RegionVerdict("unphysical", {"beyond_outer": np_value - outer})
    # below the yellow band
    if reep <= curves.a_reach:
        a_bound = float(curves.a_np(reep))
        if np_value >= a_bound - band:
            return RegionVerdict("cyan-lower", {
                "lower": max(0.0, np_value - a_bound),
                "upper": max(0.0, lo - np_value)})
        return RegionVerdict("unphysical", {"below_a": a_bound - np_value})
    return RegionVerdict("unphysical", {"below_lower": lo - np_value})


# --- CSV export -------------------------------------------------------------------

_CSV_HEADER = "family,plane,param_p,param_q_or_x,param_kappa,abscissa,ordinate"


def _fmt(v) -> str:
    return "" if v is None else f"{v:.9g}"


def curve_to_csv(curve: BoundaryCurve) -> str:
    """Serialize a curve with a mandatory header and 9 significant digits."""
    lines = [_CSV_HEADER]
    for a, o, prm in curve.samples:
        qx = prm.get("q", prm.get("x"))
        lines.append(",".join([
            curve.family, curve.plane, _fmt(prm.get("p")), _fmt(qx),
            _fmt(prm.get("kappa")), _fmt(a), _fmt(o)]))
    return "\n".join(lines) + "\n"


def write_curve_csv(curve: BoundaryCurve, path) -> None:
    with open(path, "w") as fh:
        fh.write(curve_to_csv(curve))
