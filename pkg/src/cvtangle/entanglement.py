"""Bipartite entanglement measures for Gaussian states.

Implements the PPT separability test and logarithmic negativity for 1xN
cuts, the squared-log-negativity contangle for pure states, the closed form
for symmetric two-mode states, the m-function closed form for two-mode
states of partial minimum uncertainty (nu_min = 1, the class produced by
tracing one mode out of a pure three-mode state), and a constrained
multi-start minimizer for the Gaussian contangle of arbitrary two-mode
states: the infimum of the pure-state contangle over pure CMs sigma_p with
sigma - sigma_p >= 0.

Contangle values are in nats^2; log-negativity in nats.
"""

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.optimize import minimize

from .errors import (
    NotPure,
    NotSymmetricState,
    OptimizerFailure,
    RegionViolation,
    UnsupportedCut,
)
from .symplectic import (
    PHYSICALITY_TOL,
    PURITY_TOL,
    Bipartition,
    CovarianceMatrix,
    partial_transpose,
    purity,
    reduce,
    symplectic_form,
    symplectic_spectrum,
)

REGION_TOL = 1e-9
FEASIBILITY_TOL = 1e-9   # smallest eigenvalue of sigma - sigma_p allowed
ZERO_M_TOL = 1e-12       # m <= 1 + ZERO_M_TOL counts as zero entanglement


@dataclass(frozen=True)
class EntanglementValue:
    """A computed measure: tag, non-negative value and the cut it refers to."""

    measure: str  # "log_negativity" | "contangle" | "gaussian_contangle"
    value: float
    cut: Bipartition


def _cut_state(cm: CovarianceMatrix, cut: Bipartition):
    """Reduce to the modes named by the cut and reindex the cut accordingly."""
    cut.check(cm.modes)
    union = cut.all_modes
    if len(union) == cm.modes:
        return cm, cut
    pos = {m: k for k, m in enumerate(union)}
    reduced = reduce(cm, union)
    return reduced, Bipartition(
        tuple(pos[m] for m in cut.party_a), tuple(pos[m] for m in cut.party_b)
    )


def _require_one_sided(cut: Bipartition) -> None:
    if min(len(cut.party_a), len(cut.party_b)) != 1:
        raise UnsupportedCut(
            "PPT is necessary and sufficient only for 1xN cuts; "
            f"got {len(cut.party_a)}x{len(cut.party_b)}"
        )


def _pt_spectrum(cm: CovarianceMatrix, cut: Bipartition) -> np.ndarray:
    state, local_cut = _cut_state(cm, cut)
    _require_one_sided(local_cut)
    return np.asarray(symplectic_spectrum(partial_transpose(state, local_cut)).values)


def ppt_separable(cm: CovarianceMatrix, cut: Bipartition) -> bool:
    """PPT test across a 1xN cut: separable iff every nu of the partially
    transposed CM stays >= 1 (within tolerance).  Modes outside the cut are
    traced out first."""
    return bool(np.min(_pt_spectrum(cm, cut)) >= 1.0 - PHYSICALITY_TOL)


def log_negativity(cm: CovarianceMatrix, cut: Bipartition) -> EntanglementValue:
    """Logarithmic negativity across a 1xN cut: -sum of ln(nu) over the
    partially transposed symplectic eigenvalues below 1."""
    nus = _pt_spectrum(cm, cut)
    below = nus[nus < 1.0 - PHYSICALITY_TOL]
    value = float(-np.sum(np.log(below))) if below.size else 0.0
    return EntanglementValue("log_negativity", value, cut)


def _log_sq(x: float) -> float:
    """ln^2(x - sqrt(x^2 - 1)) for x >= 1, computed stably as arccosh(x)^2."""
    return math.acosh(max(x, 1.0)) ** 2


def contangle_pure(cm: CovarianceMatrix, cut: Bipartition) -> EntanglementValue:
    """Pure-state contangle across a single-mode-vs-rest cut.

    Equals ln^2(1/mu_1 - sqrt(1/mu_1^2 - 1)) with mu_1 the purity of the
    single-mode reduction, i.e. the squared logarithmic negativity.
    """
    cut.check(cm.modes)
    if len(cut.all_modes) != cm.modes:
        raise UnsupportedCut("the cut must bipartition all modes of the pure state")
    if len(cut.party_a) == 1:
        single = cut.party_a[0]
    elif len(cut.party_b) == 1:
        single = cut.party_b[0]
    else:
        raise UnsupportedCut("one party must consist of exactly one mode")
    mu = purity(cm)
    if abs(mu - 1.0) > PURITY_TOL:
        raise NotPure(f"state has purity {mu:.12g}, not pure within {PURITY_TOL:.0e}")
    block = cm.matrix[2 * single : 2 * single + 2, 2 * single : 2 * single + 2]
    a_loc = math.sqrt(max(float(np.linalg.det(block)), 1.0))
    return EntanglementValue("contangle", _log_sq(a_loc), cut)


def contangle_symmetric_two_mode(cm: CovarianceMatrix) -> EntanglementValue:
    """Contangle of a symmetric (equal local determinants) two-mode state:
    [max(0, -ln nu_min(PT))]^2, where the Gaussian decomposition is optimal."""
    if cm.modes != 2:
        raise UnsupportedCut(f"expected a two-mode state, got {cm.modes} modes")
    det1 = float(np.linalg.det(cm.matrix[0:2, 0:2]))
    det2 = float(np.linalg.det(cm.matrix[2:4, 2:4]))
    if abs(det1 - det2) > 1e-7:
        raise NotSymmetricState(
            f"local determinants differ: {det1:.12g} vs {det2:.12g}"
        )
    cut = Bipartition((0,), (1,))
    nu_min = float(np.min(_pt_spectrum(cm, cut)))
    value = max(0.0, -math.log(nu_min)) ** 2
    return EntanglementValue("contangle", value, cut)


# ---------------------------------------------------------------------------
# Closed form for two-mode states of partial minimum uncertainty (nu_min = 1),
# parametrized by the reference-mode mixedness a and the half-sum/difference
# (s, d) of the other two mixednesses of the parent pure three-mode state.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GlemsParams:
    """Parameters (a, s, d) with s >= (a+1)/2 and |d| <= (a^2-1)/(4s).

    The region bounds express that both two-mode reductions of the parent
    pure state are entangled; the boundaries are separability thresholds.
    """

    a: float
    s: float
    d: float

    def __post_init__(self):
        if self.a < 1.0 - 1e-12:
            raise RegionViolation(f"reference mixedness must be >= 1, got {self.a}")
        if self.s < (self.a + 1.0) / 2.0 - REGION_TOL:
            raise RegionViolation(
                f"s = {self.s} below s_min = {(self.a + 1.0) / 2.0} for a = {self.a}"
            )
        bound = (self.a * self.a - 1.0) / (4.0 * self.s)
        if abs(self.d) > bound + REGION_TOL:
            raise RegionViolation(
                f"|d| = {abs(self.d)} exceeds (a^2-1)/(4s) = {bound} for a = {self.a}, s = {self.s}"
            )


def _glems_m_raw(a: float, s: float, d: float) -> float:
    # The corner s - d -> 1 (traced mode approaching the vacuum) makes the
    # generic m_- expression 0/0; the boundary-reduced form is exact there.
    if s - d <= 1.0 + REGION_TOL:
        return (1.0 + 3.0 * a + 2.0 * d) / (3.0 + a - 2.0 * d)
    kp = a * a + (s + d) ** 2
    km = a * a - (s + d) ** 2
    branch = 2.0 * (s - d) - math.sqrt(
        2.0 * (km * km + 2.0 * kp + abs(km) * math.sqrt(km * km + 8.0 * kp)) / kp
    )
    if branch <= 0.0:
        return abs(km) / ((s - d) ** 2 - 1.0)
    delta = (
        (a - 2 * d - 1.0) * (a - 2 * d + 1.0) * (a + 2 * d - 1.0) * (a + 2 * d + 1.0)
        * (a - 2 * s - 1.0) * (a - 2 * s + 1.0) * (a + 2 * s - 1.0) * (a + 2 * s + 1.0)
    )
    bracket = 2.0 * (
        2.0 * a * a * (1.0 + 2.0 * s * s + 2.0 * d * d)
        - (4.0 * s * s - 1.0) * (4.0 * d * d - 1.0)
        - a ** 4
        - math.sqrt(max(delta, 0.0))
    )
    return math.sqrt(max(bracket, 0.0)) / (4.0 * (s - d))


def glems_m(p: GlemsParams) -> float:
    """The m function whose value determines the pair contangle: m = m_- when
    the branch discriminant D <= 0, m = m_+ otherwise."""
    return _glems_m_raw(p.a, p.s, p.d)


def glems_contangle(p: GlemsParams) -> float:
    """One pair term ln^2[m - sqrt(m^2 - 1)], clamped to zero for m <= 1."""
    m = glems_m(p)
    if m <= 1.0 + ZERO_M_TOL:
        return 0.0
    return _log_sq(m)


def glems_pair_contangle(alpha: float, beta: float, gamma: float) -> float:
    """Gaussian contangle of the two-mode reduction of a pure three-mode state,
    from its local mixednesses (alpha, beta) and the traced mode's gamma.

    Separability of the pair is equivalent to alpha^2 + beta^2 <= gamma^2 + 1;
    otherwise the closed form applies with a = alpha, s + d = beta, s - d =
    gamma (the expression is symmetric in alpha and beta).
    """
    if alpha * alpha + beta * beta <= gamma * gamma + 1.0 + 1e-12:
        return 0.0
    m = _glems_m_raw(alpha, (beta + gamma) / 2.0, (beta - gamma) / 2.0)
    if m <= 1.0 + ZERO_M_TOL:
        return 0.0
    return _log_sq(m)


# ---------------------------------------------------------------------------
# Gaussian contangle of an arbitrary two-mode state: constrained minimization
# over pure two-mode CMs sigma_p <= sigma.
# ---------------------------------------------------------------------------


def _rot(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, s], [-s, c]])


def _squeeze(t: float) -> np.ndarray:
    return np.array([[math.exp(t), 0.0], [0.0, math.exp(-t)]])


def _tms_matrix(r: float) -> np.ndarray:
    ch, sh = math.cosh(2 * r), math.sinh(2 * r)
    return np.array(
        [
            [ch, 0.0, sh, 0.0],
            [0.0, ch, 0.0, -sh],
            [sh, 0.0, ch, 0.0],
            [0.0, -sh, 0.0, ch],
        ]
    )


def _pure_two_mode(x: np.ndarray) -> np.ndarray:
    """Pure two-mode CM from (t1, th1, t2, th2, phi, r).

    (R(th_i) Z(t_i)) locals around a phase-rotated two-mode squeezed core;
    with the shared inner phase phi this covers every pure two-mode CM.
    """
    t1, th1, t2, th2, phi, r = x
    core = _tms_matrix(r)
    rphi = np.eye(4)
    rphi[0:2, 0:2] = _rot(phi)
    core = rphi @ core @ rphi.T
    loc = np.zeros((4, 4))
    loc[0:2, 0:2] = _rot(th1) @ _squeeze(t1)
    loc[2:4, 2:4] = _rot(th2) @ _squeeze(t2)
    return loc @ core @ loc.T


def _euler_angles(m: np.ndarray) -> tuple[float, float, float]:
    """Euler decomposition of a single-mode symplectic: m = R(alpha) Z(u) R(beta)."""
    w, v = np.linalg.eigh(m @ m.T)
    u = 0.25 * math.log(w[1] / w[0])
    vec = v[:, 1]  # eigenvector of the larger eigenvalue e^{2u}
    alpha = math.atan2(-vec[1], vec[0])
    rest = _squeeze(-u) @ _rot(alpha).T @ m
    beta = math.atan2(rest[0, 1], rest[0, 0])
    return u, alpha, beta


def _two_mode_standard_form(sigma: np.ndarray):
    """Local symplectic L = L1 (+) L2 with L sigma L^T in standard form
    [[alpha I, diag(c+, c-)], [diag(c+, c-), beta I]].  Returns (L, std)."""
    locals_ = []
    for k in (0, 2):
        block = sigma[k : k + 2, k : k + 2]
        w, v = np.linalg.eigh(block)
        if np.linalg.det(v) < 0:
            v = v[:, ::-1]
            w = w[::-1]
        z = np.diag([(w[1] / w[0]) ** 0.25, (w[0] / w[1]) ** 0.25])
        locals_.append(z @ v.T)
    l_mat = np.zeros((4, 4))
    l_mat[0:2, 0:2] = locals_[0]
    l_mat[2:4, 2:4] = locals_[1]
    work = l_mat @ sigma @ l_mat.T
    u_svd, sv, vt = np.linalg.svd(work[0:2, 2:4])
    if np.linalg.det(u_svd) < 0:
        u_svd[:, 1] *= -1.0
        sv = sv.copy()
        sv[1] *= -1.0
    if np.linalg.det(vt) < 0:
        vt[1, :] *= -1.0
        sv = sv.copy()
        sv[1] *= -1.0
    rot = np.zeros((4, 4))
    rot[0:2, 0:2] = u_svd.T
    rot[2:4, 2:4] = vt
    l_mat = rot @ l_mat
    return l_mat, l_mat @ sigma @ l_mat.T


def _williamson_pure_bound(sigma: np.ndarray) -> float | None:
    """Contangle of the pure state S S^T from the Williamson form sigma =
    S diag(nu) S^T: a feasible point, hence an upper bound on the infimum.
    Used only as a fallback bound and for scaling the start heuristics."""
    n = sigma.shape[0] // 2
    omega = symplectic_form(n)
    w, v = np.linalg.eigh(sigma)
    if w[0] <= 0:
        return None
    root = (v * np.sqrt(w)) @ v.T
    rooti = (v / np.sqrt(w)) @ v.T
    anti = rooti @ omega @ rooti
    t_mat, orth = scipy.linalg.schur(anti)
    for i in range(n):
        if t_mat[2 * i, 2 * i + 1] < 0:
            orth[:, [2 * i, 2 * i + 1]] = orth[:, [2 * i + 1, 2 * i]]
    s_mat = root @ orth
    pure = s_mat @ s_mat.T
    gap = float(np.min(np.linalg.eigvalsh(sigma - pure)))
    if gap < -FEASIBILITY_TOL:
        return None
    a_loc = math.sqrt(max(float(np.linalg.det(pure[0:2, 0:2])), 1.0))
    return _log_sq(a_loc)


def gaussian_contangle_two_mode(
    cm: CovarianceMatrix,
    *,
    starts: int = 16,
    seed: int = 20240,
    tol: float = 1e-9,
    maxiter: int = 500,
    patience: int = 5,
) -> EntanglementValue:
    """Gaussian contangle of a two-mode state by constrained minimization.

    Pure candidates are parametrized by six numbers (two local squeeze/angle
    pairs, a shared inner phase and the squeezing r of the two-mode squeezed
    core); the objective is the pure-state contangle 4 r^2 and feasibility
    requires the smallest eigenvalue of sigma - sigma_p to stay above
    -FEASIBILITY_TOL.  Multi-start COBYLA with seeded starts; deterministic
    for fixed arguments.
    """
    if cm.modes != 2:
        raise UnsupportedCut(f"expected a two-mode state, got {cm.modes} modes")
    cut = Bipartition((0,), (1,))
    sigma = cm.matrix
    nus = _pt_spectrum(cm, cut)
    nu_min = float(np.min(nus))
    if nu_min >= 1.0 - PHYSICALITY_TOL:
        return EntanglementValue("gaussian_contangle", 0.0, cut)

    def constraint(x):
        return float(np.min(np.linalg.eigvalsh(sigma - _pure_two_mode(x)))) + FEASIBILITY_TOL

    def objective(x):
        return 4.0 * x[5] * x[5]

    # Informed start: the standard-form frame of sigma with the two-mode
    # squeezed core matched to the smallest PT eigenvalue.  For symmetric
    # states this is the known optimum.
    l_mat, _ = _two_mode_standard_form(sigma)
    l_inv = np.linalg.inv(l_mat)
    u1, a1, b1 = _euler_angles(l_inv[0:2, 0:2])
    u2, a2, b2 = _euler_angles(l_inv[2:4, 2:4])
    r0 = max(-0.5 * math.log(nu_min), 1e-6)
    informed = np.array([u1, a1, u2, a2, b1 + b2, r0])

    bound = _williamson_pure_bound(sigma)
    r_hi = 2.0 * r0 + 0.5
    if bound is not None:
        r_hi = max(r_hi, 0.5 * math.sqrt(bound) + 0.1)

    rng = np.random.default_rng(seed)
    start_list = [informed]
    for scale in (1.3, 1.8):
        bumped = informed.copy()
        bumped[5] = scale * r0
        start_list.append(bumped)
    while len(start_list) < starts:
        jitter = rng.normal(scale=0.35, size=6)
        x0 = informed + jitter
        x0[5] = rng.uniform(0.5 * r0, r_hi)
        start_list.append(x0)

    cons = [{"type": "ineq", "fun": constraint}]
    best_val, best_x, stale = None, None, 0
    for k, x0 in enumerate(start_list[:starts]):
        res = minimize(
            objective,
            x0,
            method="COBYLA",
            constraints=cons,
            options={"rhobeg": 0.3, "maxiter": maxiter, "tol": 1e-10},
        )
        val = objective(res.x)
        if constraint(res.x) >= 0.0 and (best_val is None or val < best_val - 1e-15):
            improved = best_val is None or val < best_val - max(tol, 1e-12)
            best_val, best_x = val, np.array(res.x)
            stale = 0 if improved else stale + 1
        else:
            stale += 1
        if best_val is not None and k >= 5 and stale >= patience:
            break

    if best_x is not None:
        res = minimize(
            objective,
            best_x,
            method="COBYLA",
            constraints=cons,
            options={"rhobeg": 0.05, "maxiter": 2 * maxiter, "tol": min(1e-11, tol)},
        )
        if constraint(res.x) >= 0.0 and objective(res.x) < best_val:
            best_val = objective(res.x)

    if best_val is None:
        if bound is not None:
            return EntanglementValue("gaussian_contangle", bound, cut)
        raise OptimizerFailure(
            "no feasible pure decomposition found", best_value=None
        )
    if bound is not None and bound < best_val:
        best_val = bound
    return EntanglementValue("gaussian_contangle", float(best_val), cut)
