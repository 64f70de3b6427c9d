"""Vacuum/one-photon superposition states, the beam-splitter map, damping
channels, and the named two-qubit state families built from them.

Single-qubit states live in the {|0>, |1>} photon-number basis. Two-qubit
matrices use |00>, |01>, |10>, |11>. All constructors return plain 4x4
complex arrays that pass :func:`eplab.linalg.assert_density_matrix`; a
single-photon input can never populate |11>, so those outputs have an exactly
zero fourth row and column.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .linalg import (
    BETA_1,
    BETA_2,
    assert_density_matrix,
    dagger,
    herm,
    ket2dm,
)


@dataclass(frozen=True)
class VopsState:
    """Vacuum/one-photon superposition with density matrix [[1-p, x], [x*, p]].

    Parameters
    ----------
    p : float
        Single-photon probability, in [0, 1].
    dephasing : float
        Coherence scale D in [0, 1]; the coherence is x = D * x_max * e^{i phi}
        with x_max = sqrt(p (1-p)). D = |1 - 2 f| for a phase flip applied with
        probability f.
    phi : float
        Coherence phase in radians.
    """

    p: float
    dephasing: float = 1.0
    phi: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValidationError(f"photon probability p={self.p} outside [0, 1]")
        if not 0.0 <= self.dephasing <= 1.0:
            raise ValidationError(f"dephasing factor D={self.dephasing} outside [0, 1]")

    @property
    def x_max(self) -> float:
        return float(np.sqrt(self.p * (1.0 - self.p)))

    @property
    def x(self) -> complex:
        # At p in {0, 1} the coherence vanishes identically; keeping that exact
        # (rather than erroring) keeps parameter sweeps continuous.
        return complex(np.exp(1j * self.phi) * self.dephasing * self.x_max)

    def density_matrix(self) -> np.ndarray:
        x = self.x
        return np.array([[1.0 - self.p, x], [np.conj(x), self.p]], dtype=complex)


def make_vops(p: float, dephasing: float = 1.0, phi: float = 0.0) -> VopsState:
    """Build a VOPS state from (p, D, phi); out-of-range inputs raise."""
    return VopsState(p=float(p), dephasing=float(dephasing), phi=float(phi))


@dataclass(frozen=True)
class BsSetting:
    """Beam-splitter interaction: reflection amplitude r and coherence w.

    t = sqrt(1 - r^2) is derived; w = 1 is a fully coherent interaction and
    kappa = 1 - w^2 is the equivalent phase-damping strength on both outputs.
    """

    r: float
    w: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.r <= 1.0:
            raise ValidationError(f"reflection amplitude r={self.r} outside [0, 1]")
        if not 0.0 <= self.w <= 1.0:
            raise ValidationError(f"coherence parameter w={self.w} outside [0, 1]")

    @property
    def t(self) -> float:
        return float(np.sqrt(max(0.0, 1.0 - self.r * self.r)))

    @property
    def kappa(self) -> float:
        return 1.0 - self.w * self.w

    @classmethod
    def balanced(cls, w: float = 1.0) -> "BsSetting":
        return cls(r=1.0 / np.sqrt(2.0), w=w)


def bs_output_matrix(p, x, r, w) -> np.ndarray:
    """Two-qubit output of a single-photon state meeting the vacuum on a
    beam splitter; broadcasts over array inputs (leading batch axes).

    The matrix is
        [[1-p, -w r x,  w t x,      0],
         [ . ,  p r^2, -p w^2 r t,  0],
         [ . ,   .   ,  p t^2,      0],
         [ 0 ,   0   ,  0,          0]]
    with t = sqrt(1 - r^2) and Hermitian conjugates below the diagonal.
    Negative r is accepted (reflection phase of a mirrored splitter).
    """
    p = np.asarray(p, dtype=float)
    x = np.asarray(x, dtype=complex)
    r = np.asarray(r, dtype=float)
    w = np.asarray(w, dtype=float)
    t = np.sqrt(np.clip(1.0 - r * r, 0.0, None))
    shape = np.broadcast_shapes(p.shape, x.shape, r.shape, w.shape)
    out = np.zeros(shape + (4, 4), dtype=complex)
    out[..., 0, 0] = 1.0 - p
    out[..., 1, 1] = p * r * r
    out[..., 2, 2] = p * t * t
    out[..., 0, 1] = -w * r * x
    out[..., 0, 2] = w * t * x
    out[..., 1, 2] = -p * w * w * r * t
    out[..., 1, 0] = np.conj(out[..., 0, 1])
    out[..., 2, 0] = np.conj(out[..., 0, 2])
    out[..., 2, 1] = np.conj(out[..., 1, 2])
    return out


def bs_transform(state: VopsState, setting: BsSetting) -> np.ndarray:
    """Apply the beam-splitter map to a VOPS state; validates the output."""
    rho = bs_output_matrix(state.p, state.x, setting.r, setting.w)
    return assert_density_matrix(rho)


@dataclass(frozen=True)
class KrausPair:
    """A single-qubit channel given by two Kraus operators.

    Completeness E0^dag E0 + E1^dag E1 = I is enforced at construction to
    1e-12. Use :func:`amplitude_damping` / :func:`phase_damping`.
    """

    kind: str
    coefficient: float
    e0: np.ndarray = field(repr=False)
    e1: np.ndarray = field(repr=False)

    def __post_init__(self):
        ident = self.e0.conj().T @ self.e0 + self.e1.conj().T @ self.e1
        if np.max(np.abs(ident - np.eye(2))) > 1e-12:
            raise ValidationError("Kraus operators do not satisfy completeness")


def amplitude_damping(gamma: float) -> KrausPair:
    """Amplitude damping: |1> decays to |0> with probability gamma."""
    if not 0.0 <= gamma <= 1.0:
        raise ValidationError(f"damping coefficient gamma={gamma} outside [0, 1]")
    e0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - gamma)]], dtype=complex)
    e1 = np.array([[0.0, np.sqrt(gamma)], [0.0, 0.0]], dtype=complex)
    return KrausPair(kind="amplitude", coefficient=float(gamma), e0=e0, e1=e1)


def phase_damping(kappa: float) -> KrausPair:
    """Phase damping: the |0><1| coherence shrinks by sqrt(1 - kappa)."""
    if not 0.0 <= kappa <= 1.0:
        raise ValidationError(f"damping coefficient kappa={kappa} outside [0, 1]")
    e0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - kappa)]], dtype=complex)
    e1 = np.array([[0.0, 0.0], [0.0, np.sqrt(kappa)]], dtype=complex)
    return KrausPair(kind="phase", coefficient=float(kappa), e0=e0, e1=e1)


def apply_kraus(rho: np.ndarray, qubit_index: int, pair: KrausPair) -> np.ndarray:
    """Apply a single-qubit channel to qubit 1 or 2 of a two-qubit state."""
    if qubit_index not in (1, 2):
        raise ValidationError(f"qubit_index must be 1 or 2, got {qubit_index}")
    eye = np.eye(2, dtype=complex)
    out = np.zeros_like(rho, dtype=complex)
    for e in (pair.e0, pair.e1):
        op = np.kron(e, eye) if qubit_index == 1 else np.kron(eye, e)
        out += op @ rho @ dagger(op)
    return herm(out)


def psi_out(p: float) -> np.ndarray:
    """Projector of sqrt(1-p)|00> + sqrt(p/2)(|10> - |01>).

    This is the pure output of a balanced lossless splitter fed with the pure
    single-qubit state of photon probability p; at p = 1 it is the singlet.
    """
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"photon probability p={p} outside [0, 1]")
    psi = np.array([np.sqrt(1.0 - p), -np.sqrt(p / 2.0), np.sqrt(p / 2.0), 0.0], dtype=complex)
    return ket2dm(psi)


def q_of_p(p: float) -> float:
    """Weight q of the Schmidt form |Psi_q> equivalent to psi_out(p)."""
    return float((1.0 - np.sqrt(max(0.0, 1.0 - p * p))) / 2.0)


def psi_q(q: float) -> np.ndarray:
    """Projector of sqrt(q)|01> - sqrt(1-q)|10>; concurrence 2 sqrt(q(1-q))."""
    if not 0.0 <= q <= 1.0:
        raise ValidationError(f"weight q={q} outside [0, 1]")
    psi = np.array([0.0, np.sqrt(q), -np.sqrt(1.0 - q), 0.0], dtype=complex)
    return ket2dm(psi)


def horodecki_state(p: float) -> np.ndarray:
    """p |Psi^-><Psi^-| + (1-p) |00><00| (singlet mixed with the vacuum)."""
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"mixing probability p={p} outside [0, 1]")
    out = p * ket2dm(BETA_1)
    out[0, 0] += 1.0 - p
    return herm(out)


def generalized_horodecki(p: float, q: float) -> np.ndarray:
    """p |Psi_q><Psi_q| + (1-p) |00><00|."""
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"mixing probability p={p} outside [0, 1]")
    out = p * psi_q(q)
    out[0, 0] += 1.0 - p
    return herm(out)


def rho_pdc(q: float, kappa1: float, kappa2: float) -> np.ndarray:
    """|Psi_q> after phase damping (kappa1, kappa2) on its two qubits.

    In the Bell pair basis {beta1, beta2} = {(|10> -/+ |01>)/sqrt 2} the state
    has weights 1/2 -/+ y and cross terms q - 1/2, with
    y = sqrt(q (1-q) (1-kappa1) (1-kappa2)).
    """
    for name, v in (("q", q), ("kappa1", kappa1), ("kappa2", kappa2)):
        if not 0.0 <= v <= 1.0:
            raise ValidationError(f"{name}={v} outside [0, 1]")
    y = np.sqrt(q * (1.0 - q) * (1.0 - kappa1) * (1.0 - kappa2))
    b1 = ket2dm(BETA_1)
    b2 = ket2dm(BETA_2)
    cross = np.outer(BETA_1, BETA_2.conj())
    out = (0.5 - y) * b1 + (0.5 + y) * b2 + (q - 0.5) * (cross + dagger(cross))
    return herm(out)


def rho_b(kappa1: float, kappa2: float) -> np.ndarray:
    """Bell-diagonal state from phase-damping the q = 1/2 case of rho_pdc.

    Weights lambda_-/+ = [1 -/+ sqrt((1-kappa1)(1-kappa2))]/2 on beta1/beta2.
    """
    return rho_pdc(0.5, kappa1, kappa2)


def rho_b_weights(kappa1: float, kappa2: float) -> tuple[float, float]:
    """(lambda_minus, lambda_plus) Bell weights of rho_b."""
    s = np.sqrt((1.0 - kappa1) * (1.0 - kappa2))
    return (1.0 - s) / 2.0, (1.0 + s) / 2.0


# --- JSON wire format ------------------------------------------------------

def state_to_json(obj) -> str:
    """Serialize a VopsState or a 4x4 density matrix to the JSON wire format."""
    if isinstance(obj, VopsState):
        payload = {"kind": "vops", "p": obj.p, "D": obj.dephasing, "phi": obj.phi}
    else:
        rho = np.asarray(obj, dtype=complex)
        payload = {
            "kind": "two_qubit",
            "matrix_re": np.real(rho).tolist(),
            "matrix_im": np.imag(rho).tolist(),
        }
    return json.dumps(payload, indent=2)


def state_from_json(text: str):
    """Parse the JSON wire format; validates invariants on read.

    Returns a :class:`VopsState` for kind "vops" and a validated 4x4 array
    for kind "two_qubit".
    """
    data = json.loads(text)
    kind = data.get("kind")
    if kind == "vops":
        return make_vops(data["p"], data.get("D", 1.0), data.get("phi", 0.0))
    if kind == "two_qubit":
        re = np.asarray(data["matrix_re"], dtype=float)
        im = np.asarray(data.get("matrix_im", np.zeros_like(re)), dtype=float)
        return assert_density_matrix(re + 1j * im)
    raise ValidationError(f"unknown state kind {kind!r}")
