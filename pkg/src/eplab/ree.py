"""Relative entropy of entanglement (REE) for two-qubit states.

REE(rho) = min over separable sigma of S(rho||sigma), in bits. For two qubits
the separable set equals the PPT set {sigma >= 0, Tr sigma = 1, sigma^PT >= 0}
(positive partial transpose), whose extreme points are pure product states.

The minimization runs in two phases:

1. Descent: a damped-Newton barrier (interior-point) method on
   F(sigma) = -Tr(rho log2 sigma) plus log-det barriers for both cones,
   following a shrinking central path. This converges quadratically per
   stage and is immune to the boundary degeneracies that stall first-order
   methods on this problem.
2. Certification: a conditional-gradient (Frank-Wolfe) gap computed with a
   product-state linear minimization oracle,
   gap = Tr(G sigma) - min_{|ab>} <ab|G|ab>,  G = grad F(sigma),
   which upper-bounds the remaining suboptimality by convexity. If the gap
   exceeds the requested tolerance the solver deepens the central path and,
   as a last resort, runs plain Frank-Wolfe steps with exact line search.

The linear oracle minimizes the bilinear form <a|<b| G |a>|b> by alternating
closed-form 2x2 eigenvector updates from a spread of deterministic starts.

Everything is vectorized over a batch of states; `ree_numeric` is the
single-state wrapper. The independent cross-check used by the test suite,
`ree_caratheodory_oracle`, minimizes the same objective over an explicit
four-term product decomposition with a quasi-Newton optimizer and shares no
machinery with the main path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, ValidationError
from .linalg import LN2, dagger, entropy_bits, herm, partial_transpose

DEFAULT_TOL = 1e-6
MAX_ITER = 100_000
_EYE4 = np.eye(4, dtype=complex)
_MIX = _EYE4 / 4.0
_INTERIOR_FLOOR = 1e-9    # minimum eigenvalue kept on iterates outside the IPM
_LOG_CLAMP = 1e-14        # safety floor inside logs; never active on iterates


@dataclass
class ReeSolution:
    """Result of one REE minimization.

    ree_value is S(rho||sigma*) in bits for the returned closest separable
    state; gap_bound upper-bounds ree_value - REE(rho).
    """

    ree_value: float
    closest_separable: np.ndarray
    iterations: int
    gap_bound: float


@dataclass
class BatchResult:
    values: np.ndarray        # (B,) REE in bits
    gaps: np.ndarray          # (B,) conditional-gradient gap certificates
    iterations: np.ndarray    # (B,) Newton + polish iterations
    sigmas: np.ndarray        # (B, 4, 4) closest separable states found
    converged: np.ndarray     # (B,) bool


# --- objective ---------------------------------------------------------------

def _value_and_grad(rho: np.ndarray, sigma: np.ndarray):
    """F(sigma) = -Tr(rho log2 sigma) and its gradient, batched.

    The gradient uses the Daleckii-Krein divided-difference form of D log.
    Iterates are kept strictly interior, so the clamp below is a safety net
    that never distorts the certificate in normal operation.
    """
    lam, u = np.linalg.eigh(sigma)
    lam = np.maximum(lam, _LOG_CLAMP)
    ln_lam = np.log(lam)
    rho_t = dagger(u) @ rho @ u
    diag = np.real(np.einsum("...ii->...i", rho_t))
    value = -(diag * ln_lam).sum(-1) / LN2
    den = lam[..., :, None] - lam[..., None, :]
    num = ln_lam[..., :, None] - ln_lam[..., None, :]
    mean = 0.5 * (lam[..., :, None] + lam[..., None, :])
    near = np.abs(den) < 1e-12 * mean
    dd = np.where(near, 1.0 / mean, num / np.where(near, 1.0, den))
    grad = -(u @ (rho_t * dd) @ dagger(u)) / LN2
    return value, herm(grad)


def _dir_deriv(rho: np.ndarray, sigma: np.ndarray, d: np.ndarray) -> np.ndarray:
    _, g = _value_and_grad(rho, sigma)
    return np.real(np.einsum("...ij,...ji->...", g, d))


def _log_dd2(lam: np.ndarray) -> np.ndarray:
    """Second divided differences ln[lam_i, lam_k, lam_j], batched (..., 4,4,4).

    Symmetric in all three arguments; coincidence limits handled by switching
    to an equivalent argument ordering or the analytic limit -1/(2 a^2).
    """
    a = lam[..., :, None, None]
    b = lam[..., None, :, None]
    c = lam[..., None, None, :]

    def d1(x, y):
        den = x - y
        mean = 0.5 * (x + y)
        near = np.abs(den) < 1e-10 * mean
        return np.where(near, 1.0 / mean, (np.log(x) - np.log(y)) / np.where(near, 1.0, den))

    scale = (a + b + c) / 3.0
    ac = np.abs(a - c) > 1e-8 * scale
    ab = np.abs(a - b) > 1e-8 * scale
    bc = np.abs(b - c) > 1e-8 * scale
    safe = lambda den: np.where(np.abs(den) > 0, den, 1.0)
    v_ac = (d1(a, b) - d1(b, c)) / safe(a - c)     # valid when a != c
    v_ab = (d1(a, c) - d1(c, b)) / safe(a - b)     # valid when a != b
    v_bc = (d1(b, a) - d1(a, c)) / safe(b - c)     # valid when b != c
    v_eq = -0.5 / (scale * scale)                  # all three coincide
    return np.where(ac, v_ac, np.where(ab, v_ab, np.where(bc, v_bc, v_eq)))


# --- product-state linear minimization oracle --------------------------------

def _min_eigvec_2x2(m: np.ndarray):
    """Eigenvector of the smaller eigenvalue of Hermitian 2x2 blocks.

    Accepts any leading batch shape; returns (vectors, eigenvalues).
    """
    a = np.real(m[..., 0, 0])
    d = np.real(m[..., 1, 1])
    b = m[..., 0, 1]
    half = 0.5 * (a + d)
    rad = np.sqrt(0.25 * (a - d) ** 2 + np.abs(b) ** 2)
    mu = half - rad
    v1 = np.stack([b, (mu - a).astype(complex)], axis=-1)
    v2 = np.stack([(mu - d).astype(complex), np.conj(b)], axis=-1)
    n1 = np.linalg.norm(v1, axis=-1)
    n2 = np.linalg.norm(v2, axis=-1)
    use2 = n2 > n1
    v = np.where(use2[..., None], v2, v1)
    n = np.where(use2, n2, n1)
    degen = n < 1e-300
    e = np.zeros_like(v)
    first = a <= d
    e[..., 0] = np.where(first, 1.0, 0.0)
    e[..., 1] = np.where(first, 0.0, 1.0)
    v = np.where(degen[..., None], e, v / np.where(degen, 1.0, n)[..., None])
    return v, mu


def _schmidt_b_start(g: np.ndarray) -> np.ndarray:
    """Second-qubit factor of the closest product state to the lowest
    eigenvector of G; a high-quality start for the alternating oracle."""
    _, u = np.linalg.eigh(g)
    v = u[..., :, 0].reshape(g.shape[:-2] + (2, 2))
    _, _, vh = np.linalg.svd(v)
    return vh[..., 0, :]


def _lmo_product(g: np.ndarray, b_starts: np.ndarray, rounds: int):
    """min <ab|G|ab> over product states by alternating eigenvector descent.

    Each alternation fixes one factor and solves the 2x2 eigenproblem for the
    other in closed form, so every round decreases the value. Returns the
    best product ket per problem and its value.
    """
    g4 = g.reshape(g.shape[:-2] + (2, 2, 2, 2))
    bv = b_starts
    av = None
    for _ in range(rounds):
        ma = np.einsum("bsk,bikjl,bsl->bsij", np.conj(bv), g4, bv)
        av, _ = _min_eigvec_2x2(ma)
        mb = np.einsum("bsi,bikjl,bsj->bskl", np.conj(av), g4, av)
        bv, _ = _min_eigvec_2x2(mb)
    ma = np.einsum("bsk,bikjl,bsl->bsij", np.conj(bv), g4, bv)
    av, vals = _min_eigvec_2x2(ma)
    best = np.argmin(vals, axis=1)
    rows = np.arange(g.shape[0])
    a = av[rows, best]
    b = bv[rows, best]
    ket = np.einsum("bi,bk->bik", a, b).reshape(-1, 4)
    return ket, vals[rows, best]


def _fib_sphere_starts(n: int) -> np.ndarray:
    """n qubit states spread over the Bloch sphere (golden-angle grid)."""
    i = np.arange(n)
    z = 1.0 - (2.0 * i + 1.0) / n
    theta = np.arccos(np.clip(z, -1.0, 1.0))
    phi = np.pi * (1.0 + np.sqrt(5.0)) * i
    return np.stack([np.cos(theta / 2.0),
                     np.exp(1j * phi) * np.sin(theta / 2.0)], axis=-1)


_E0 = np.array([1.0, 0.0], dtype=complex)
_E1 = np.array([0.0, 1.0], dtype=complex)
_SQ2 = 1.0 / np.sqrt(2.0)
# Superposition starts matter: computational products are fixed points of the
# alternating iteration, so axis starts alone can lock onto a local minimum.
_PLUS = np.array([_SQ2, _SQ2], dtype=complex)
_PLUS_I = np.array([_SQ2, 1j * _SQ2], dtype=complex)
_MINUS = np.array([_SQ2, -_SQ2], dtype=complex)
_RICH_GRID = _fib_sphere_starts(24)


def _lmo(g: np.ndarray, warm_b: np.ndarray | None = None, rich: bool = True):
    B = g.shape[0]
    base = [np.broadcast_to(_E0, (B, 2)), np.broadcast_to(_E1, (B, 2)),
            np.broadcast_to(_PLUS, (B, 2)), np.broadcast_to(_PLUS_I, (B, 2)),
            np.broadcast_to(_MINUS, (B, 2)), _schmidt_b_start(g)]
    if warm_b is not None:
        base.append(warm_b)
    starts = np.stack(base, axis=1)
    rounds = 6
    if rich:
        starts = np.concatenate(
            [starts, np.broadcast_to(_RICH_GRID[None], (B,) + _RICH_GRID.shape)], axis=1)
        rounds = 12
    return _lmo_product(g, starts, rounds)


# --- exact line search (used by the Frank-Wolfe polish) ----------------------

def _line_search(rho, sigma, d, gmax, h0, n_iter=14):
    """argmin_{0<=g<=gmax} F(sigma + g d) by Illinois root finding on F'.

    h0 = F'(0) must be negative (descent direction). Rows where F'(gmax) <= 0
    take the full step. The returned point always has F'(g) <= 0, so descent
    is guaranteed even when the derivative at the far end is huge.
    """
    h_hi = _dir_deriv(rho, sigma + gmax[..., None, None] * d, d)
    full = h_hi <= 0.0
    lo = np.zeros_like(gmax)
    hi = gmax.copy()
    h_lo = h0.copy()
    side = np.zeros_like(gmax, dtype=np.int8)
    for _ in range(n_iter):
        denom = h_hi - h_lo
        safe = np.abs(denom) > 1e-300
        g = np.where(safe, (lo * h_hi - hi * h_lo) / np.where(safe, denom, 1.0),
                     0.5 * (lo + hi))
        width = hi - lo
        g = np.clip(g, lo + 1e-6 * width, hi - 1e-6 * width)
        h = _dir_deriv(rho, sigma + g[..., None, None] * d, d)
        pos = h > 0.0
        # Illinois: halve the retained endpoint's slope when the same side
        # is kept twice, preventing one-sided stalls.
        h_lo = np.where(pos & (side == 1), 0.5 * h_lo, h_lo)
        h_hi = np.where(~pos & (side == -1), 0.5 * h_hi, h_hi)
        hi = np.where(pos, g, hi)
        h_hi = np.where(pos, h, h_hi)
        lo = np.where(pos, lo, g)
        h_lo = np.where(pos, h_lo, h)
        side = np.where(pos, 1, -1).astype(np.int8)
    return np.where(full, gmax, lo)


# --- interior-point descent ---------------------------------------------------

def _hermitian_basis() -> np.ndarray:
    """Orthonormal basis of 4x4 Hermitian matrices under Tr(A B)."""
    es = []
    for i in range(4):
        e = np.zeros((4, 4), dtype=complex)
        e[i, i] = 1.0
        es.append(e)
    for i in range(4):
        for j in range(i + 1, 4):
            e = np.zeros((4, 4), dtype=complex)
            e[i, j] = e[j, i] = _SQ2
            es.append(e)
            e = np.zeros((4, 4), dtype=complex)
            e[i, j] = -1j * _SQ2
            e[j, i] = 1j * _SQ2
            es.append(e)
    return np.stack(es)


_BASIS = _hermitian_basis()                    # (16, 4, 4)
_BASIS_PT = partial_transpose(_BASIS)          # (16, 4, 4)
_TRACE_VEC = np.array([np.trace(e).real for e in _BASIS])


def _coords(sigma: np.ndarray) -> np.ndarray:
    return np.real(np.einsum("aij,...ji->...a", _BASIS, sigma))


def _from_coords(x: np.ndarray) -> np.ndarray:
    return np.einsum("...a,aij->...ij", x, _BASIS)


def _hess_f(rho_t, lam, u):
    """Hessian of F in the Hermitian basis, from second divided differences."""
    f2 = _log_dd2(lam)                                         # (B, 4, 4, 4)
    et = np.einsum("bpi,aij,bjq->bapq", dagger(u), _BASIS, u)  # (B, 16, 4, 4)
    h = np.einsum("bji,baik,bckj,bikj->bac", rho_t, et, et, f2, optimize=True)
    h = h + np.swapaxes(h, 1, 2).conj()
    return -np.real(h) / LN2


def _barrier_terms(sigma):
    """Value, gradient matrix, and Hessian (basis coords) of the two log-det
    barriers -ln det sigma - ln det sigma^PT."""
    out_val = np.zeros(sigma.shape[0])
    grad = np.zeros_like(sigma)
    hess = np.zeros((sigma.shape[0], 16, 16))
    for mats, basis in ((sigma, _BASIS), (partial_transpose(sigma), _BASIS_PT)):
        lam, u = np.linalg.eigh(mats)
        out_val -= np.log(lam).sum(-1)
        inv = (u / lam[..., None, :]) @ dagger(u)
        g = -inv
        if basis is _BASIS_PT:
            g = partial_transpose(g)
        grad += g
        # Tr(inv E_a inv E_c) assembled in the eigenframe for symmetry.
        et = np.einsum("bpi,aij,bjq->bapq", dagger(u), basis, u)
        w = 1.0 / lam
        hess += np.real(np.einsum("bapq,bcqp,bp,bq->bac", et, et, w, w))
    return out_val, herm(grad), hess


def _interior_blend(sigma, floor=_INTERIOR_FLOOR):
    """Blend toward the maximally mixed state until both cones are strictly
    satisfied with margin `floor`."""
    lam1 = np.linalg.eigvalsh(sigma)[..., 0]
    lam2 = np.linalg.eigvalsh(partial_transpose(sigma))[..., 0]
    lam = np.minimum(lam1, lam2)
    beta = np.clip((floor - lam) / (0.25 - np.minimum(lam, 0.24)), 0.0, 1.0)
    return (1.0 - beta)[..., None, None] * sigma + beta[..., None, None] * _MIX


def _newton_stage(rho, sigma, mu, active, max_newton=30, dec_tol=1e-11):
    """Damped Newton iterations for one barrier weight mu (batched, masked)."""
    B = rho.shape[0]
    newtons = np.zeros(B, dtype=int)
    act = active.copy()
    for _ in range(max_newton):
        if not act.any():
            break
        idx = np.flatnonzero(act)
        sig = sigma[idx]
        rho_i = rho[idx]
        lam, u = np.linalg.eigh(sig)
        lam_c = np.maximum(lam, _LOG_CLAMP)
        rho_t = dagger(u) @ rho_i @ u
        f_val = -(np.real(np.einsum("bii->bi", rho_t)) * np.log(lam_c)).sum(-1) / LN2
        den = lam_c[..., :, None] - lam_c[..., None, :]
        num = np.log(lam_c)[..., :, None] - np.log(lam_c)[..., None, :]
        mean = 0.5 * (lam_c[..., :, None] + lam_c[..., None, :])
        near = np.abs(den) < 1e-12 * mean
        dd = np.where(near, 1.0 / mean, num / np.where(near, 1.0, den))
        grad_f = herm(-(u @ (rho_t * dd) @ dagger(u)) / LN2)
        hess_f = _hess_f(rho_t, lam_c, u)

        bar_val, bar_grad, bar_hess = _barrier_terms(sig)
        g_mat = grad_f + mu * bar_grad
        g_vec = np.real(np.einsum("aij,bji->ba", _BASIS, g_mat))
        h = hess_f + mu * bar_hess
        # Tiny ridge keeps the KKT system well posed if rho is singular.
        h = h + 1e-12 * np.eye(16)

        nb = len(idx)
        kkt = np.zeros((nb, 17, 17))
        kkt[:, :16, :16] = h
        kkt[:, :16, 16] = _TRACE_VEC
        kkt[:, 16, :16] = _TRACE_VEC
        rhs = np.zeros((nb, 17, 1))
        rhs[:, :16, 0] = -g_vec
        try:
            sol = np.linalg.solve(kkt, rhs)[..., 0]
        except np.linalg.LinAlgError:
            kkt[:, :16, :16] += 1e-8 * np.eye(16)
            sol = np.linalg.solve(kkt, rhs)[..., 0]
        dx = sol[:, :16]
        step = _from_coords(dx)
        slope = np.einsum("ba,ba->b", g_vec, dx)
        decrement = -slope

        # Backtracking with positivity of both cones and Armijo decrease.
        f_mu = f_val + mu * bar_val
        alpha = np.ones(nb)
        remaining = np.ones(nb, dtype=bool)
        new_sig = sig.copy()
        for _bt in range(40):
            if not remaining.any():
                break
            r = np.flatnonzero(remaining)
            cand = sig[r] + alpha[r, None, None] * step[r]
            lam_min = np.linalg.eigvalsh(cand)[:, 0]
            pt_min = np.linalg.eigvalsh(partial_transpose(cand))[:, 0]
            feas = (lam_min > 0) & (pt_min > 0)
            ok = np.zeros(len(r), dtype=bool)
            if feas.any():
                fr = r[feas]
                c = cand[feas]
                v, _ = _value_and_grad(rho_i[fr], c)
                bv, _, _ = _barrier_terms(c)
                good = v + mu * bv <= f_mu[fr] + 1e-4 * alpha[fr] * slope[fr]
                gidx = fr[good]
                new_sig[gidx] = c[good]
                ok[feas] = good
            remaining[r[ok]] = False
            alpha[r[~ok]] *= 0.4
        stalled = remaining
        sigma[idx] = herm(new_sig)
        newtons[idx] += 1
        conv = (decrement <= dec_tol) | stalled
        act[idx[conv]] = False
    return sigma, newtons


def _ipm_descent(rho, sigma, tol, mu_start=0.1):
    """Follow the central path down to a barrier weight matched to tol."""
    mu_final = max(tol / 30.0, 2e-10)
    mu = mu_start
    total = np.zeros(rho.shape[0], dtype=int)
    active = np.ones(rho.shape[0], dtype=bool)
    while True:
        sigma, n = _newton_stage(rho, sigma, mu, active)
        total += n
        if mu <= mu_final:
            break
        mu = max(mu * 0.03, mu_final)
    return sigma, total


# --- public API ----------------------------------------------------------------

def solve_ree_batch(rhos: np.ndarray, tol: float = DEFAULT_TOL,
                    max_iter: int = MAX_ITER,
                    warm_sigmas: np.ndarray | None = None) -> BatchResult:
    """Minimize S(rho||sigma) over separable sigma for a batch of states.

    rhos: (B, 4, 4) valid density matrices. PPT inputs short-circuit to
    REE = 0 with sigma = rho. `warm_sigmas` from a previous solve on nearby
    states lets the central path start much closer to the optimum.
    """
    rhos = np.asarray(rhos, dtype=complex)
    if rhos.ndim == 2:
        rhos = rhos[None]
    B = rhos.shape[0]
    if tol < 1e-8:
        raise ValidationError(f"tol={tol} below the supported minimum 1e-8")

    ent = np.array([entropy_bits(r) for r in rhos])
    pt_min = np.linalg.eigvalsh(herm(partial_transpose(rhos)))[:, 0]
    ppt = pt_min >= -1e-12

    sigmas = np.broadcast_to(_MIX, rhos.shape).copy()
    mu_start = 0.1
    if warm_sigmas is not None:
        # A nearby previous solution sits close to the new central point at
        # the final barrier weight, so the path can start there directly.
        sigmas = _interior_blend(np.asarray(warm_sigmas, dtype=complex).copy(),
                                 floor=1e-8)
        mu_start = max(tol / 30.0, 2e-10)
    sigmas[ppt] = rhos[ppt]

    values = np.zeros(B)
    gaps = np.zeros(B)
    iters = np.zeros(B, dtype=int)
    converged = ppt.copy()

    todo = np.flatnonzero(~ppt)
    if len(todo):
        sig = sigmas[todo]
        rho_t = rhos[todo]
        sig, n_it = _ipm_descent(rho_t, sig, tol, mu_start=mu_start)
        val, grad = _value_and_grad(rho_t, sig)
        _, fw_val = _lmo(grad, rich=True)
        gap = np.real(np.einsum("bij,bji->b", grad, sig)) - fw_val

        # A warm start that was not close enough can leave the path badly
        # off-center; restart those rows from scratch before anything else.
        if warm_sigmas is not None and (gap > tol).any():
            rows = np.flatnonzero(gap > tol)
            cold = np.broadcast_to(_MIX, (len(rows), 4, 4)).copy()
            sub, extra = _ipm_descent(rho_t[rows], cold, tol, mu_start=0.1)
            sig[rows] = sub
            n_it[rows] += extra
            v2, g2 = _value_and_grad(rho_t[rows], sub)
            _, fv2 = _lmo(g2, rich=True)
            val[rows] = v2
            gap[rows] = np.real(np.einsum("bij,bji->b", g2, sub)) - fv2

        # Deepen the central path for rows whose certificate is not yet tight.
        deepen = 0
        while (gap > tol).any() and deepen < 3:
            deepen += 1
            hard = gap > tol
            rows = np.flatnonzero(hard)
            mu_deep = max(tol / (30.0 * 5.0 ** deepen), 1e-10)
            sub, extra = _newton_stage(rho_t[rows], sig[rows], mu_deep,
                                       np.ones(len(rows), dtype=bool))
            sig[rows] = sub
            n_it[rows] += extra
            v2, g2 = _value_and_grad(rho_t[rows], sub)
            _, fv2 = _lmo(g2, rich=True)
            val[rows] = v2
            gap[rows] = np.real(np.einsum("bij,bji->b", g2, sub)) - fv2

        # Last resort: plain conditional-gradient polish with exact line search.
        hard = np.flatnonzero(gap > tol)
        if len(hard):
            s_h = sig[hard]
            r_h = rho_t[hard]
            g_h = gap[hard]
            polish_cap = min(max_iter, 5000)
            done = np.zeros(len(hard), dtype=bool)
            for k in range(polish_cap):
                live = np.flatnonzero(~done)
                if not len(live):
                    break
                v, g = _value_and_grad(r_h[live], s_h[live])
                ket, fw_val = _lmo(g, rich=True)
                score = np.real(np.einsum("bij,bji->b", g, s_h[live]))
                g_h[live] = score - fw_val
                n_it[hard[live]] += 1
                newly = g_h[live] <= tol
                done[live[newly]] = True
                live = live[~newly]
                if not len(live):
                    break
                p = np.einsum("bi,bj->bij", ket[~newly], np.conj(ket[~newly]))
                d = p - s_h[live]
                h0 = fw_val[~newly] - score[~newly]
                mask = h0 < -1e-15
                if mask.any():
                    m = live[mask]
                    gam = _line_search(r_h[m], s_h[m], d[mask],
                                       np.full(mask.sum(), 1.0 - 1e-4), h0[mask])
                    s_h[m] = _interior_blend(s_h[m] + gam[:, None, None] * d[mask])
            v, g = _value_and_grad(r_h, s_h)
            _, fw_val = _lmo(g, rich=True)
            gap[hard] = np.real(np.einsum("bij,bji->b", g, s_h)) - fw_val
            val[hard] = v
            sig[hard] = s_h

        sigmas[todo] = herm(sig)
        values[todo] = val - ent[todo]
        gaps[todo] = gap
        iters[todo] = n_it
        converged[todo] = gap <= tol

    return BatchResult(values=np.maximum(values, 0.0), gaps=gaps,
                       iterations=iters, sigmas=sigmas, converged=converged)


def ree_numeric(rho: np.ndarray, tol: float = DEFAULT_TOL,
                max_iter: int = MAX_ITER) -> ReeSolution:
    """REE of a single two-qubit state with a certified gap bound.

    Raises ConvergenceError (carrying the best value and gap) if the
    certificate has not reached tol within the iteration budget.
    """
    res = solve_ree_batch(rho[None], tol=tol, max_iter=max_iter)
    if not res.converged[0]:
        raise ConvergenceError(
            f"REE solver did not certify gap {tol:g} "
            f"(value={res.values[0]:.8f}, gap={res.gaps[0]:.2e})",
            value=float(res.values[0]), gap=float(res.gaps[0]))
    return ReeSolution(ree_value=float(res.values[0]),
                       closest_separable=res.sigmas[0],
                       iterations=int(res.iterations[0]),
                       gap_bound=float(res.gaps[0]))


# --- independent cross-check ---------------------------------------------------

def ree_caratheodory_oracle(rho: np.ndarray, n_starts: int = 8, seed: int = 0,
                            maxiter: int = 400) -> float:
    """REE via direct minimization over four-term product decompositions.

    sigma(theta) = sum_k w_k |a_k><a_k| x |b_k><b_k| with softmax weights and
    Bloch-angle factors, minimized with L-BFGS-B from several random starts.
    Four product terms suffice for any separable two-qubit state. Used by the
    tests as an oracle for the main solver; never called by it.
    """
    from scipy.optimize import minimize

    rho = np.asarray(rho, dtype=complex)
    ent = entropy_bits(rho)
    rng = np.random.default_rng(seed)

    def unpack(params):
        z = params[:4]
        ang = params[4:].reshape(4, 4)  # theta_a, phi_a, theta_b, phi_b
        ez = np.exp(z - z.max())
        w = ez / ez.sum()
        a = np.stack([np.cos(ang[:, 0] / 2), np.exp(1j * ang[:, 1]) * np.sin(ang[:, 0] / 2)], axis=1)
        b = np.stack([np.cos(ang[:, 2] / 2), np.exp(1j * ang[:, 3]) * np.sin(ang[:, 2] / 2)], axis=1)
        kets = np.einsum("ki,kj->kij", a, b).reshape(4, 4)
        return w, a, b, kets

    def objective(params):
        w, a, b, kets = unpack(params)
        sigma = np.einsum("k,ki,kj->ij", w, kets, np.conj(kets))
        val, grad = _value_and_grad(rho[None], sigma[None])
        g = grad[0]
        scores = np.real(np.einsum("ki,ij,kj->k", np.conj(kets), g, kets))
        dz = w * (scores - float(w @ scores))
        dang = np.zeros((4, 4))
        ang = params[4:].reshape(4, 4)
        for kk in range(4):
            ta, pa, tb, pb = ang[kk]
            da_t = np.array([-np.sin(ta / 2) / 2, np.exp(1j * pa) * np.cos(ta / 2) / 2])
            da_p = np.array([0.0, 1j * np.exp(1j * pa) * np.sin(ta / 2)])
            db_t = np.array([-np.sin(tb / 2) / 2, np.exp(1j * pb) * np.cos(tb / 2) / 2])
            db_p = np.array([0.0, 1j * np.exp(1j * pb) * np.sin(tb / 2)])
            ket = kets[kk]
            for col, dv in enumerate((np.kron(da_t, b[kk]), np.kron(da_p, b[kk]),
                                      np.kron(a[kk], db_t), np.kron(a[kk], db_p))):
                dang[kk, col] = 2.0 * w[kk] * np.real(np.conj(dv) @ g @ ket)
        return float(val[0]), np.concatenate([dz, dang.ravel()])

    best = np.inf
    for _ in range(n_starts):
        x0 = np.concatenate([rng.normal(scale=0.5, size=4),
                             rng.uniform(0, np.pi, 4 * 4) * np.tile([1, 2, 1, 2], 4)])
        res = minimize(objective, x0, jac=True, method="L-BFGS-B",
                       options={"maxiter": maxiter})
        best = min(best, float(res.fun))
    return max(0.0, best - ent)
