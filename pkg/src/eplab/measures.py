"""Two-qubit entanglement measures and the beam-splitter potentials.

Negativity and concurrence are closed-form spectral quantities. The relative
entropy of entanglement (REE) is numerical in general (see
:mod:`eplab.ree`); closed forms are used for the three families where they
are known exactly (pure states, singlet/vacuum mixtures, Bell-diagonal
states), which also covers the fast paths of :func:`potentials`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .linalg import (
    BETA_1,
    BETA_2,
    PHI_MINUS,
    PHI_PLUS,
    PAULI_Y,
    binary_entropy,
    dagger,
    herm,
    matrix_sqrt_psd,
    partial_transpose,
)
from .ree import DEFAULT_TOL, ReeSolution, ree_numeric, solve_ree_batch
from .states import BsSetting, VopsState, bs_transform, horodecki_state

__all__ = [
    "PotentialTriple",
    "ReeSolution",
    "concurrence",
    "negativity",
    "potentials",
    "ree_closed_bell_diagonal",
    "ree_closed_horodecki",
    "ree_closed_pure",
    "ree_numeric",
    "state_measures",
]

_YY = np.kron(PAULI_Y, PAULI_Y)
_BELL = np.stack([PHI_PLUS, PHI_MINUS, BETA_2, BETA_1]).T  # columns are Bell kets


@dataclass(frozen=True)
class PotentialTriple:
    """Negativity, concurrence, and REE potentials of one input state."""

    np_value: float
    cp_value: float
    reep_value: float

    def __post_init__(self):
        if self.np_value > self.cp_value + 1e-8:
            raise ValidationError(
                f"negativity {self.np_value} exceeds concurrence {self.cp_value}")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.np_value, self.cp_value, self.reep_value)


def negativity(rho: np.ndarray) -> float | np.ndarray:
    """max(0, -2 min eig(rho^PT)); batched over leading axes."""
    w = np.linalg.eigvalsh(herm(partial_transpose(rho)))
    out = np.maximum(0.0, -2.0 * w[..., 0])
    return float(out) if out.ndim == 0 else out


def concurrence(rho: np.ndarray) -> float | np.ndarray:
    """Wootters concurrence.

    Computed from the Hermitian form sqrt(rho) (YxY) rho* (YxY) sqrt(rho),
    whose eigenvalues equal those of the usual non-Hermitian product; tiny
    negative eigenvalues from round-off are clipped at -1e-12.
    """
    rho = np.asarray(rho, dtype=complex)
    batched = rho.ndim > 2
    rs = rho if batched else rho[None]
    s = np.stack([matrix_sqrt_psd(r) for r in rs])
    flipped = _YY @ np.conj(rs) @ _YY
    m = s @ flipped @ s
    w = np.linalg.eigvalsh(herm(m))
    if np.min(w) < -1e-12:
        raise ValidationError("concurrence spectrum has a large negative eigenvalue")
    lam = np.sqrt(np.clip(w, 0.0, None))
    c = np.maximum(0.0, 2.0 * lam[..., -1] - lam.sum(-1))
    return float(c[0]) if not batched else c


def ree_closed_pure(p: float) -> float:
    """REE potential of the pure input family: h((1 + sqrt(1-p^2))/2)."""
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"photon probability p={p} outside [0, 1]")
    return float(binary_entropy(0.5 * (1.0 + np.sqrt(1.0 - p * p))))


def ree_closed_horodecki(p: float) -> float:
    """REE of p|Psi-><Psi-| + (1-p)|00><00|:
    (p-2) log2(1 - p/2) + (1-p) log2(1-p)."""
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"mixing probability p={p} outside [0, 1]")
    out = (p - 2.0) * np.log2(1.0 - p / 2.0) if p < 2.0 else 0.0
    if p < 1.0:
        out += (1.0 - p) * np.log2(1.0 - p)
    return float(out)


def ree_closed_bell_diagonal(weights: np.ndarray) -> float:
    """REE of a Bell-diagonal state: 1 - h(w_max) for w_max >= 1/2, else 0."""
    w = np.asarray(weights, dtype=float)
    wmax = w.max()
    if wmax <= 0.5:
        return 0.0
    return float(1.0 - binary_entropy(wmax))


def _bell_weights_if_diagonal(rho: np.ndarray, tol: float) -> np.ndarray | None:
    m = dagger(_BELL) @ rho @ _BELL
    off = m - np.diag(np.diagonal(m))
    if np.max(np.abs(off)) <= tol:
        return np.real(np.diagonal(m))
    return None


def _ree_dispatch(rho: np.ndarray, c_value: float, tol: float,
                  family_tol: float = 1e-10) -> float:
    """REE via a closed form when rho matches a known family, else numeric."""
    purity = float(np.real(np.trace(rho @ rho)))
    if purity >= 1.0 - family_tol:
        # Pure two-qubit state: REE equals the entropy of entanglement,
        # determined by the concurrence alone.
        return float(binary_entropy(0.5 * (1.0 + np.sqrt(max(0.0, 1.0 - c_value ** 2)))))
    p_mix = float(np.clip(1.0 - np.real(rho[0, 0]), 0.0, 1.0))
    if np.max(np.abs(rho - horodecki_state(p_mix))) <= family_tol:
        return ree_closed_horodecki(p_mix)
    bell = _bell_weights_if_diagonal(rho, family_tol)
    if bell is not None:
        return ree_closed_bell_diagonal(bell)
    return ree_numeric(rho, tol=tol).ree_value


def state_measures(rho: np.ndarray, tol: float = DEFAULT_TOL,
                   use_closed_forms: bool = True) -> PotentialTriple:
    """All three measures of a two-qubit state.

    With use_closed_forms (default) the REE dispatches to exact expressions
    for pure, singlet/vacuum, and Bell-diagonal states (matched within
    1e-10) and to the certified numerical solver otherwise.
    """
    n = negativity(rho)
    c = concurrence(rho)
    if use_closed_forms:
        r = _ree_dispatch(rho, c, tol)
    else:
        r = ree_numeric(rho, tol=tol).ree_value
    return PotentialTriple(np_value=float(n), cp_value=float(c), reep_value=float(r))


def potentials(state: VopsState, setting: BsSetting,
               tol: float = DEFAULT_TOL) -> PotentialTriple:
    """Entanglement potentials of a single-qubit state for one interaction.

    Applies the beam-splitter map and evaluates negativity, concurrence, and
    REE of the two-qubit output.
    """
    rho = bs_transform(state, setting)
    return state_measures(rho, tol=tol)


def measures_batch(rhos: np.ndarray, tol: float = DEFAULT_TOL):
    """(negativity, concurrence, ree) arrays for a batch of states.

    The REE runs through the batched solver without closed-form dispatch;
    intended for bootstrap resamples and curve generation.
    """
    rhos = np.asarray(rhos, dtype=complex)
    n = negativity(rhos)
    c = concurrence(rhos)
    r = solve_ree_batch(rhos, tol=tol).values
    return n, c, r
