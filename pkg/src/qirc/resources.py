"""The three operational resource coordinates and the entropy toolbox.

q1: teleportation advantage of rho_AB, from the maximal singlet fraction.
q2: transfer capacity of the state-induced A -> C channel, scored on its
    Choi state exactly like q1 (default mode), or the Uhlmann fidelity of
    the A and C marginals (diagnostic mode).
q3: Fisher-information utility of rho_A for phase estimation along a fixed
    Hermitian generator, normalized by the best pure state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import channels, linalg
from .generators import CoherenceGenerator, default_generator
from .states import DensityMatrix, Seed, _haar_unitary_from_rng, max_entangled_ket
from .tolerances import EPS_PSD, EPS_QFI

# Reference constants for report annotations (qubit teleportation benchmarks
# and the universal-cloner ceiling). None of these enter the q2 score.
F_CLASSICAL_QUBIT = 2.0 / 3.0
F_QUANTUM = 1.0
UNIVERSAL_CLONER_QUBIT = 5.0 / 6.0


def universal_cloner_fidelity(d: int) -> float:
    """Optimal symmetric 1->2 cloner average fidelity, (d+3)/(2(d+1))."""
    return (d + 3) / (2.0 * (d + 1))


@dataclass(frozen=True)
class OptimizerSettings:
    """Multi-start settings for the singlet-fraction maximization.

    The default engine refines each start with a monotone polar-projected
    power iteration (each step maximizes the linearized objective over the
    unitary group, which never decreases the true objective). ``powell``
    selects a scalar derivative-free refinement instead; it finds the same
    optima but is far slower, so it is kept for cross-validation.
    """

    starts: int = 32
    tol: float = 1e-9
    max_iter: int = 400
    seed: int = 20240817
    method: str = "power"


@dataclass(frozen=True)
class FidelityBreakdown:
    """Raw fidelities behind a profile, before clamping."""

    f_max: float
    f_tele: float
    f_trans: float
    f_q: float
    f_q_max: float
    q1_raw: float
    q2_raw: float
    d: int

    def to_dict(self) -> dict:
        return {
            "f_max": self.f_max,
            "f_tele": self.f_tele,
            "f_trans": self.f_trans,
            "f_q": self.f_q,
            "f_q_max": self.f_q_max,
            "q1_raw": self.q1_raw,
            "q2_raw": self.q2_raw,
            "d": self.d,
        }


@dataclass(frozen=True)
class ResourceProfile:
    q1: float
    q2: float
    q3: float
    norm: float
    breakdown: FidelityBreakdown
    q2_mode: str
    generator: CoherenceGenerator

    def coords(self) -> tuple[float, float, float]:
        return (self.q1, self.q2, self.q3)

    def to_dict(self) -> dict:
        return {
            "q1": self.q1,
            "q2": self.q2,
            "q3": self.q3,
            "norm": self.norm,
            "q2_mode": self.q2_mode,
            "breakdown": self.breakdown.to_dict(),
        }


@dataclass(frozen=True)
class EntropyReport:
    """Entropy summary for the A subsystem of a tripartite state (natural log)."""

    s: float
    h_meas: float
    i_ab: float
    i_ac: float
    d_rel: float
    c_coh: float


@dataclass(frozen=True)
class ProfileConfig:
    generator: CoherenceGenerator | None = None
    q2_mode: str = "transfer"
    optimizer: OptimizerSettings = field(default_factory=OptimizerSettings)


# ---------------------------------------------------------------------------
# Maximal singlet fraction


def _objective_batch(rho: np.ndarray, w_batch: np.ndarray, d: int) -> np.ndarray:
    y = w_batch @ rho.conj()  # rows y_i = (rho @ w_i)^T since rho is Hermitian
    return np.einsum("ij,ij->i", w_batch.conj(), y).real / d


def _polar_batch(g: np.ndarray) -> np.ndarray:
    u, _, vh = np.linalg.svd(g)
    return u @ vh


def _power_refine(rho: np.ndarray, w0: np.ndarray, d: int,
                  settings: OptimizerSettings) -> tuple[np.ndarray, np.ndarray]:
    """Monotone ascent on f(W) = vec(W)† rho vec(W)/d over unitary W."""
    w = w0.copy()
    vals = _objective_batch(rho, w, d)
    for _ in range(settings.max_iter):
        y = w @ rho.conj()
        w_next = _polar_batch(y.reshape(-1, d, d)).reshape(-1, d * d)
        new_vals = _objective_batch(rho, w_next, d)
        w = w_next
        if float(np.max(new_vals - vals)) <= 1e-14:
            vals = new_vals
            break
        vals = new_vals
    return vals, w


def _powell_refine(rho: np.ndarray, w0: np.ndarray, d: int,
                   settings: OptimizerSettings) -> tuple[np.ndarray, np.ndarray]:
    from scipy.optimize import minimize

    n = d * d
    iu = np.triu_indices(d, k=1)

    def build(theta: np.ndarray, base: np.ndarray) -> np.ndarray:
        h = np.zeros((d, d), dtype=complex)
        h[np.diag_indices(d)] = theta[:d]
        off = theta[d:d + len(iu[0])] + 1j * theta[d + len(iu[0]):]
        h[iu] = off
        h += linalg.dagger(np.triu(h, k=1))
        hw, hv = np.linalg.eigh(h)
        u = (hv * np.exp(1j * hw)) @ linalg.dagger(hv)
        return u @ base

    vals = []
    ws = []
    for row in w0:
        base = row.reshape(d, d)

        def neg(theta):
            w = build(theta, base).reshape(1, n)
            return -float(_objective_batch(rho, w, d)[0])

        res = minimize(neg, np.zeros(n), method="Powell",
                       options={"ftol": settings.tol * 1e-2, "xtol": 1e-10,
                                "maxiter": settings.max_iter})
        ws.append(build(res.x, base).reshape(n))
        vals.append(-float(res.fun))
    return np.asarray(vals), np.asarray(ws)


def _start_batch(rho: np.ndarray, d: int, settings: OptimizerSettings) -> np.ndarray:
    rng = Seed(settings.seed, 0).rng()
    starts = [np.eye(d, dtype=complex)]
    # Spectral hint: the closest maximally entangled state to the dominant
    # eigenvector is given by the polar unitary of its matrix reshape.
    top = linalg.hermitian_eigen(rho).vectors[:, -1].reshape(d, d)
    u, _, vh = np.linalg.svd(top)
    starts.append(u @ vh)
    for _ in range(max(0, settings.starts)):
        starts.append(_haar_unitary_from_rng(d, rng))
    return np.stack([s.reshape(d * d) for s in starts])


def fully_entangled_fraction(rho: DensityMatrix,
                             settings: OptimizerSettings | None = None,
                             ) -> tuple[float, np.ndarray]:
    """max_U <Phi+| (U ⊗ I) rho (U ⊗ I)† |Phi+> and the maximizing U.

    Multi-start local maximization over one-sided unitaries; the identity and
    a spectral warm start are always included alongside the Haar starts.
    """
    if len(rho.dims) != 2 or rho.dims[0] != rho.dims[1]:
        raise ValueError(f"expected equal local dims, got {rho.dims}")
    settings = settings or OptimizerSettings()
    d = rho.dims[0]
    w0 = _start_batch(rho.matrix, d, settings)
    if settings.method == "power":
        vals, ws = _power_refine(rho.matrix, w0, d, settings)
    elif settings.method == "powell":
        vals, ws = _powell_refine(rho.matrix, w0, d, settings)
    else:
        raise ValueError(f"unknown optimizer method {settings.method!r}")
    best = int(np.argmax(vals))
    # W parameterizes U† of the physical rotation.
    u = linalg.dagger(ws[best].reshape(d, d))
    return float(min(1.0, vals[best])), u


def singlet_overlap(rho: DensityMatrix) -> float:
    """Unoptimized overlap <Phi+| rho |Phi+>."""
    v = max_entangled_ket(rho.dims[0])
    return float((v.conj() @ rho.matrix @ v).real)


def teleportation_fidelity(f_max: float, d: int) -> float:
    """(d f + 1)/(d + 1); the qubit case is the familiar (2f + 1)/3."""
    if d < 2:
        raise ValueError(f"local dimension d={d} must be >= 2")
    return (d * f_max + 1.0) / (d + 1.0)


def _clamp01(x: float) -> float:
    return float(min(1.0, max(0.0, x)))


def coord_q1(rho_ab: DensityMatrix,
             settings: OptimizerSettings | None = None) -> tuple[float, float]:
    """Teleportation advantage: raw (d+1) F_tele - d, clamped to [0, 1]."""
    f, _ = fully_entangled_fraction(rho_ab, settings)
    d = rho_ab.dims[0]
    raw = (d + 1) * teleportation_fidelity(f, d) - d
    return _clamp01(raw), float(raw)


def induced_transfer_channel(rho_ac: DensityMatrix,
                             support_cutoff: float = EPS_PSD) -> channels.KrausChannel:
    """State-induced channel A -> C via the pretty-good recovery construction.

    L(X) = Tr_A[(rho_A^{-1/2} P X^T P rho_A^{-1/2} ⊗ I) rho_AC], with P the
    support projector of rho_A and X^T the transpose in the computational
    basis; input weight falling outside the support is replaced by rho_C.
    Maximally entangled rho_AC induces the identity channel; product states
    induce replacement with rho_C.
    """
    if len(rho_ac.dims) != 2:
        raise ValueError(f"expected a bipartite state, got dims {rho_ac.dims}")
    d_a, d_c = rho_ac.dims
    rho_a = rho_ac.marginal([0]).matrix
    rho_c = rho_ac.marginal([1]).matrix
    b = linalg.psd_power(rho_a, -0.5, support_cutoff)
    proj = linalg.support_projector(rho_a, support_cutoff)
    hole = np.eye(d_a, dtype=complex) - proj
    eye_c = np.eye(d_c, dtype=complex)
    j = np.zeros((d_a * d_c, d_a * d_c), dtype=complex)
    for i in range(d_a):
        for k in range(d_a):
            x_t = np.zeros((d_a, d_a), dtype=complex)
            x_t[k, i] = 1.0  # transpose of |i><k|
            body = linalg.kron(b @ x_t @ b, eye_c) @ rho_ac.matrix
            block = linalg.partial_trace(body, (d_a, d_c), keep=[1])
            block = block + hole[i, k] * rho_c
            j[i * d_c:(i + 1) * d_c, k * d_c:(k + 1) * d_c] = block
    return channels.kraus_from_choi(j, d_in=d_a, d_out=d_c, cutoff=1e-12)


def coord_q2(rho_ac: DensityMatrix, mode: str = "transfer",
             settings: OptimizerSettings | None = None) -> tuple[float, float]:
    """Transfer capacity of rho_AC (or marginal Uhlmann fidelity, diagnostic)."""
    if mode == "transfer":
        if rho_ac.dims[0] != rho_ac.dims[1]:
            raise ValueError(f"transfer mode needs equal local dims, got {rho_ac.dims}")
        ch = induced_transfer_channel(rho_ac)
        choi_state = channels.choi(ch).state
        f, _ = fully_entangled_fraction(choi_state, settings)
        d = rho_ac.dims[0]
        raw = (d + 1) * teleportation_fidelity(f, d) - d
        return _clamp01(raw), float(raw)
    if mode == "uhlmann-marginal":
        f = linalg.uhlmann_fidelity(rho_ac.marginal([0]), rho_ac.marginal([1]))
        return _clamp01(f), float(f)
    raise ValueError(f"unknown q2 mode {mode!r}")


# ---------------------------------------------------------------------------
# Fisher information


def quantum_fisher_information(rho: DensityMatrix | np.ndarray,
                               g: CoherenceGenerator) -> float:
    """Spectral formula 2 sum_{ij} (l_i - l_j)^2/(l_i + l_j) |<i|H|j>|^2."""
    m = getattr(rho, "matrix", rho)
    m = linalg.as_complex(m)
    if m.shape != g.h.shape:
        raise ValueError(f"state dim {m.shape} does not match generator {g.h.shape}")
    w, v = np.linalg.eigh((m + linalg.dagger(m)) / 2)
    hp = linalg.dagger(v) @ g.h @ v
    li = w[:, None]
    lj = w[None, :]
    denom = li + lj
    mask = denom > EPS_QFI
    num = (li - lj) ** 2
    ratio = np.where(mask, num / np.where(mask, denom, 1.0), 0.0)
    return float(2.0 * np.sum(ratio * np.abs(hp) ** 2))


def variance(rho: DensityMatrix | np.ndarray, g: CoherenceGenerator) -> float:
    m = getattr(rho, "matrix", rho)
    h = g.h
    mean_sq = float(np.trace(h @ h @ m).real)
    mean = float(np.trace(h @ m).real)
    return mean_sq - mean * mean


def fq_max(g: CoherenceGenerator) -> float:
    """(l_max - l_min)^2, reached by the equal superposition of the extremes."""
    return g.spread ** 2


def coord_q3(rho_a: DensityMatrix, g: CoherenceGenerator) -> float:
    return _clamp01(quantum_fisher_information(rho_a, g) / fq_max(g))


# ---------------------------------------------------------------------------
# Profile assembly


def profile(rho: DensityMatrix, cfg: ProfileConfig | None = None) -> ResourceProfile:
    """Map a tripartite state to its resource coordinates and norm.

    Subsystem layouts: dims (d, d, d) compute all three coordinates; a trivial
    B (d, 1, d) or C (d, d, 1) factor pins the corresponding coordinate to 0
    by convention, with the floor fidelity 1/d^2 recorded in the breakdown.
    """
    cfg = cfg or ProfileConfig()
    if len(rho.dims) != 3:
        raise ValueError(f"profile needs a tripartite state, got dims {rho.dims}")
    d_a, d_b, d_c = rho.dims
    if d_b > 1 and d_b != d_a:
        raise ValueError(f"unsupported dims {rho.dims}: need d_B == d_A or d_B == 1")
    if d_c > 1 and d_c != d_a:
        raise ValueError(f"unsupported dims {rho.dims}: need d_C == d_A or d_C == 1")
    g = cfg.generator or default_generator(d_a)
    if g.dim != d_a:
        raise ValueError(f"generator dimension {g.dim} does not match d_A={d_a}")

    floor = 1.0 / (d_a * d_a)
    if d_b > 1:
        f_ab, _ = fully_entangled_fraction(rho.marginal([0, 1]), cfg.optimizer)
    else:
        f_ab = floor
    f_tele = teleportation_fidelity(f_ab, d_a)
    q1_raw = (d_a + 1) * f_tele - d_a
    q1 = _clamp01(q1_raw)

    if d_c > 1:
        q2, q2_raw = coord_q2(rho.marginal([0, 2]), cfg.q2_mode, cfg.optimizer)
        if cfg.q2_mode == "transfer":
            f_trans = (q2_raw + d_a) / (d_a + 1)
        else:
            f_trans = q2_raw
    else:
        q2_raw = (d_a + 1) * teleportation_fidelity(floor, d_a) - d_a
        q2 = 0.0
        f_trans = teleportation_fidelity(floor, d_a)

    rho_a = rho.marginal([0])
    f_q = quantum_fisher_information(rho_a, g)
    f_q_top = fq_max(g)
    q3 = _clamp01(f_q / f_q_top)

    breakdown = FidelityBreakdown(
        f_max=float(f_ab), f_tele=float(f_tele), f_trans=float(f_trans),
        f_q=float(f_q), f_q_max=float(f_q_top),
        q1_raw=float(q1_raw), q2_raw=float(q2_raw), d=d_a)
    norm = q1 * q1 + q2 * q2 + q3 * q3
    return ResourceProfile(q1=q1, q2=q2, q3=q3, norm=float(norm),
                           breakdown=breakdown, q2_mode=cfg.q2_mode, generator=g)


def resource_norm(p: ResourceProfile) -> float:
    return p.q1 ** 2 + p.q2 ** 2 + p.q3 ** 2


# ---------------------------------------------------------------------------
# Entropy toolbox (natural logarithms throughout)


def _entropy_from_eigs(w: np.ndarray) -> float:
    w = w[w > EPS_PSD]
    return float(-(w * np.log(w)).sum()) if w.size else 0.0


def von_neumann_entropy(rho: DensityMatrix | np.ndarray) -> float:
    m = getattr(rho, "matrix", rho)
    w = np.linalg.eigvalsh(linalg.as_complex(m))
    return max(0.0, _entropy_from_eigs(np.clip(w, 0.0, None)))


def mutual_information(rho: DensityMatrix) -> float:
    """I(A:B) = S(A) + S(B) - S(AB) for a bipartite state."""
    if len(rho.dims) != 2:
        raise ValueError(f"mutual information needs a bipartite state, got {rho.dims}")
    s_a = von_neumann_entropy(rho.marginal([0]))
    s_b = von_neumann_entropy(rho.marginal([1]))
    s_ab = von_neumann_entropy(rho)
    return max(0.0, s_a + s_b - s_ab)


def measurement_entropy(rho: DensityMatrix | np.ndarray, g: CoherenceGenerator) -> float:
    """Shannon entropy of outcomes when measuring in the generator eigenbasis."""
    m = getattr(rho, "matrix", rho)
    v = g.eigen.vectors
    p = np.real(np.einsum("ij,jk,ki->i", linalg.dagger(v), m, v))
    p = np.clip(p, 0.0, None)
    return max(0.0, _entropy_from_eigs(p))


def relative_entropy(rho: DensityMatrix | np.ndarray,
                     sigma: DensityMatrix | np.ndarray) -> float:
    """D(rho || sigma); +inf when rho has weight outside sigma's support."""
    r = linalg.as_complex(getattr(rho, "matrix", rho))
    s = linalg.as_complex(getattr(sigma, "matrix", sigma))
    if r.shape != s.shape:
        raise ValueError(f"dimension mismatch: {r.shape} vs {s.shape}")
    ws, vs = np.linalg.eigh((s + linalg.dagger(s)) / 2)
    probs = np.real(np.einsum("ij,jk,ki->i", linalg.dagger(vs), r, vs))
    outside = float(probs[ws <= EPS_PSD].sum())
    if outside > 1e-9:
        return math.inf
    wr = np.clip(np.linalg.eigvalsh((r + linalg.dagger(r)) / 2), 0.0, None)
    tr_r_log_r = float((wr[wr > EPS_PSD] * np.log(wr[wr > EPS_PSD])).sum())
    keep = ws > EPS_PSD
    tr_r_log_s = float((np.clip(probs[keep], 0.0, None) * np.log(ws[keep])).sum())
    return max(0.0, tr_r_log_r - tr_r_log_s)


def coherence_rel_ent(rho: DensityMatrix | np.ndarray, g: CoherenceGenerator) -> float:
    """Relative entropy of coherence, closed form S(diag(rho)) - S(rho)."""
    return max(0.0, measurement_entropy(rho, g) - von_neumann_entropy(rho))


def entropy_report(rho: DensityMatrix, g: CoherenceGenerator | None = None,
                   sigma: DensityMatrix | None = None) -> EntropyReport:
    """Entropy summary for the A subsystem of a tripartite state."""
    if len(rho.dims) != 3:
        raise ValueError(f"entropy report needs a tripartite state, got {rho.dims}")
    g = g or default_generator(rho.dims[0])
    rho_a = rho.marginal([0])
    d_rel = relative_entropy(rho_a, sigma) if sigma is not None else 0.0
    return EntropyReport(
        s=von_neumann_entropy(rho_a),
        h_meas=measurement_entropy(rho_a, g),
        i_ab=mutual_information(rho.marginal([0, 1])),
        i_ac=mutual_information(rho.marginal([0, 2])),
        d_rel=d_rel,
        c_coh=coherence_rel_ent(rho_a, g),
    )
