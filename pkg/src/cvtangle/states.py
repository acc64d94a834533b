"""Constructors and samplers for the Gaussian state families under study.

All constructors return interleaved-ordering covariance matrices (vacuum CM =
identity) and produce states that pass :func:`cvtangle.symplectic.validate`.
Randomness is driven exclusively by caller-supplied seeds; identical seeds
give bitwise-identical states.
"""

import math
from dataclasses import dataclass
from itertools import product

import numpy as np
from scipy.optimize import least_squares

from .errors import NoSolution, TriangleViolation
from .symplectic import CovarianceMatrix, symplectic_form

TRIANGLE_SLACK = 1e-9


def vacuum(modes: int) -> CovarianceMatrix:
    """Vacuum (or any coherent) state of ``modes`` modes: the identity CM."""
    return CovarianceMatrix(modes, np.eye(2 * modes))


def two_mode_squeezed(r: float) -> CovarianceMatrix:
    """Two-mode squeezed state with squeezing parameter r, standard form.

    Diagonal blocks cosh(2r) I, off-diagonal block diag(sinh 2r, -sinh 2r).
    The smallest partially transposed symplectic eigenvalue is exp(-2|r|).
    """
    if not math.isfinite(r):
        raise NoSolution(f"squeezing parameter must be finite, got {r}")
    ch, sh = math.cosh(2 * r), math.sinh(2 * r)
    mat = np.array(
        [
            [ch, 0.0, sh, 0.0],
            [0.0, ch, 0.0, -sh],
            [sh, 0.0, ch, 0.0],
            [0.0, -sh, 0.0, ch],
        ]
    )
    return CovarianceMatrix(2, mat)


@dataclass(frozen=True)
class FullySymmetricSpec:
    """Fully symmetric pure N-mode state, parametrized by the single-mode
    mixedness a_loc = 1/mu_loc (a_loc = 1 is the vacuum product state)."""

    modes: int
    a_loc: float

    def __post_init__(self):
        if self.modes < 2:
            raise NoSolution(f"fully symmetric family needs >= 2 modes, got {self.modes}")
        if not math.isfinite(self.a_loc) or self.a_loc < 1.0 - 1e-12:
            raise NoSolution(f"local mixedness must be >= 1, got {self.a_loc}")


def fully_symmetric_pure(spec: FullySymmetricSpec) -> CovarianceMatrix:
    """Pure N-mode CM with identical blocks: diag(a, a) on the diagonal and
    diag(e_plus, e_minus) everywhere off the diagonal.

    (e_plus, e_minus) solve the two purity conditions
    (a - e+)(a - e-) = 1 and (a + (N-1) e+)(a + (N-1) e-) = 1,
    which have the closed-form sum/product
    u = (a^2 - 1)(N - 2) / (a (N - 1)),  v = -(a^2 - 1)/(N - 1).
    """
    n, a = spec.modes, max(spec.a_loc, 1.0)
    u = (a * a - 1.0) * (n - 2) / (a * (n - 1))
    v = -(a * a - 1.0) / (n - 1)
    disc = u * u - 4.0 * v
    if disc < 0:  # impossible for a >= 1; guard for rounding
        raise NoSolution(f"no real correlation pair for a_loc={a}, modes={n}")
    root = math.sqrt(disc)
    e_plus, e_minus = (u + root) / 2.0, (u - root) / 2.0
    mat = np.zeros((2 * n, 2 * n))
    for i in range(n):
        mat[2 * i, 2 * i] = a
        mat[2 * i + 1, 2 * i + 1] = a
        for j in range(n):
            if i != j:
                mat[2 * i, 2 * j] = e_plus
                mat[2 * i + 1, 2 * j + 1] = e_minus
    return CovarianceMatrix(n, mat)


@dataclass(frozen=True)
class ThreeModePureSpec:
    """Local mixednesses (a1, a2, a3) of a pure three-mode Gaussian state.

    Valid specs satisfy the triangle inequality
    |a_j - a_k| + 1 <= a_i <= a_j + a_k - 1 for every permutation.
    """

    a1: float
    a2: float
    a3: float

    def __post_init__(self):
        for v in (self.a1, self.a2, self.a3):
            if not math.isfinite(v) or v < 1.0 - TRIANGLE_SLACK:
                raise TriangleViolation(f"local mixednesses must be >= 1, got {self.as_tuple()}")
        defect = triangle_defect(self.a1, self.a2, self.a3)
        if defect > TRIANGLE_SLACK:
            raise TriangleViolation(
                f"triangle inequality violated by {defect:.3e} for {self.as_tuple()}"
            )

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.a1, self.a2, self.a3)


def triangle_defect(a1: float, a2: float, a3: float) -> float:
    """Largest violation of a_i <= a_j + a_k - 1 over the three choices.

    Non-positive for valid triples.  The lower bounds |a_j - a_k| + 1 <= a_i
    are equivalent to the upper bounds with the roles permuted, so checking
    the three upper bounds covers the full triangle condition.
    """
    return max(a1 - (a2 + a3 - 1.0), a2 - (a1 + a3 - 1.0), a3 - (a1 + a2 - 1.0))


def _pair_dets(a1: float, a2: float, a3: float) -> tuple[float, float, float]:
    # det eps_ij of the standard-form off-diagonal blocks: fixed by the
    # two-mode reductions having symplectic spectrum {1, a_k}.
    p12 = (1.0 + a3 * a3 - a1 * a1 - a2 * a2) / 2.0
    p13 = (1.0 + a2 * a2 - a1 * a1 - a3 * a3) / 2.0
    p23 = (1.0 + a1 * a1 - a2 * a2 - a3 * a3) / 2.0
    return p12, p13, p23


def _three_mode_matrix(a: tuple[float, float, float], x: np.ndarray) -> np.ndarray:
    """Assemble the standard-form CM from the six correlation entries
    x = (e12+, e12-, e13+, e13-, e23+, e23-)."""
    mat = np.zeros((6, 6))
    for i in range(3):
        mat[2 * i, 2 * i] = a[i]
        mat[2 * i + 1, 2 * i + 1] = a[i]
    pairs = ((0, 1, 0), (0, 2, 2), (1, 2, 4))
    for i, j, k in pairs:
        mat[2 * i, 2 * j] = mat[2 * j, 2 * i] = x[k]
        mat[2 * i + 1, 2 * j + 1] = mat[2 * j + 1, 2 * i + 1] = x[k + 1]
    return mat


def _three_mode_system(a: tuple[float, float, float]):
    """Residuals and Jacobian of the purity constraints sigma Omega sigma = Omega
    restricted to the standard-form ansatz.

    Nine equations in six unknowns: the three block products e+ e- = p_ij and,
    for each ordered pair (i, j) with third mode k, the two bilinear relations
    a_i e-_ij + a_j e+_ij + e+_ik e-_kj = 0 and
    a_i e+_ij + a_j e-_ij + e-_ik e+_kj = 0.
    """
    a1, a2, a3 = a
    p12, p13, p23 = _pair_dets(a1, a2, a3)

    def residuals(x):
        e12p, e12m, e13p, e13m, e23p, e23m = x
        return np.array(
            [
                e12p * e12m - p12,
                e13p * e13m - p13,
                e23p * e23m - p23,
                a1 * e12m + a2 * e12p + e13p * e23m,
                a1 * e12p + a2 * e12m + e13m * e23p,
                a1 * e13m + a3 * e13p + e12p * e23m,
                a1 * e13p + a3 * e13m + e12m * e23p,
                a2 * e23m + a3 * e23p + e12p * e13m,
                a2 * e23p + a3 * e23m + e12m * e13p,
            ]
        )

    def jacobian(x):
        e12p, e12m, e13p, e13m, e23p, e23m = x
        return np.array(
            [
                [e12m, e12p, 0.0, 0.0, 0.0, 0.0],
                [0.0, 0.0, e13m, e13p, 0.0, 0.0],
                [0.0, 0.0, 0.0, 0.0, e23m, e23p],
                [a2, a1, e23m, 0.0, 0.0, e13p],
                [a1, a2, 0.0, e23p, e13m, 0.0],
                [e23m, 0.0, a3, a1, 0.0, e12p],
                [0.0, e23p, a1, a3, e12m, 0.0],
                [e13m, 0.0, 0.0, e12p, a3, a2],
                [0.0, e13p, e12m, 0.0, a2, a3],
            ]
        )

    return residuals, jacobian


def _three_mode_starts(a: tuple[float, float, float], seed: int, extra: int):
    """Deterministic sign-pattern starts followed by seeded random ones."""
    dets = _pair_dets(*a)
    base = [math.sqrt(abs(p)) for p in dets]
    starts = []
    for signs in product((1.0, -1.0), repeat=3):
        x0 = np.empty(6)
        for k, (p, b, s) in enumerate(zip(dets, base, signs)):
            if p <= 0.0:
                x0[2 * k] = b
                x0[2 * k + 1] = -b
            else:
                x0[2 * k] = s * b
                x0[2 * k + 1] = s * b
        starts.append(x0)
    rng = np.random.default_rng(seed)
    scale = max(1.0, max(base))
    for _ in range(extra):
        starts.append(rng.uniform(-scale, scale, size=6))
    return starts


def three_mode_pure(
    spec: ThreeModePureSpec, *, seed: int = 7, extra_starts: int = 24
) -> CovarianceMatrix:
    """Pure three-mode CM in standard form with local mixednesses (a1, a2, a3).

    The six off-diagonal entries are found by seeded multi-start least squares
    on the purity constraint system; the accepted residual is 1e-10.  The
    solution is unique up to local symplectics, which leave every exported
    entanglement measure unchanged.
    """
    a = spec.as_tuple()
    residuals, jacobian = _three_mode_system(a)
    omega = symplectic_form(3)
    best = None
    for x0 in _three_mode_starts(a, seed, extra_starts):
        sol = least_squares(residuals, x0, jac=jacobian, method="lm", xtol=1e-15, ftol=1e-15)
        mat = _three_mode_matrix(a, sol.x)
        defect = np.max(np.abs(mat @ omega @ mat - omega))
        if best is None or defect < best[0]:
            best = (defect, sol.x)
        if defect <= 1e-10:
            return CovarianceMatrix(3, mat)
    raise NoSolution(
        f"three-mode construction failed for {a}: best purity residual {best[0]:.3e}"
    )


@dataclass(frozen=True)
class SamplerConfig:
    """Reproducible sampling configuration for random pure states.

    ``squeeze_max`` caps the single-mode squeezing magnitudes |r_i| of the
    Euler decomposition (0 produces unentangled rotated vacua).  Identical
    configs produce identical sample streams; sample ``index`` selects an
    independent substream, so batches can be generated in any order.
    """

    modes: int
    seed: int
    squeeze_max: float = 1.5

    def __post_init__(self):
        if self.modes < 1:
            raise NoSolution(f"mode count must be >= 1, got {self.modes}")
        if not (0 <= self.seed < 2**64):
            raise NoSolution("seed must fit in 64 unsigned bits")
        if not math.isfinite(self.squeeze_max) or self.squeeze_max < 0:
            raise NoSolution(f"squeeze_max must be finite and >= 0, got {self.squeeze_max}")


def _random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-ish random unitary: QR of a complex Gaussian matrix with the
    phase convention fixed so the result is deterministic per stream."""
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def _interleave(n: int) -> np.ndarray:
    """Permutation matrix T with vec_xxpp = T @ vec_interleaved."""
    t = np.zeros((2 * n, 2 * n))
    for k in range(n):
        t[k, 2 * k] = 1.0
        t[n + k, 2 * k + 1] = 1.0
    return t


def _passive_symplectic(rng: np.random.Generator, n: int) -> np.ndarray:
    """Random passive (orthogonal symplectic) matrix in interleaved ordering."""
    u = _random_unitary(rng, n)
    a, b = u.real, u.imag
    s_xxpp = np.block([[a, -b], [b, a]])
    t = _interleave(n)
    return t.T @ s_xxpp @ t


def _squeezer(rs: np.ndarray) -> np.ndarray:
    diag = np.empty(2 * len(rs))
    diag[0::2] = np.exp(rs)
    diag[1::2] = np.exp(-rs)
    return np.diag(diag)


def random_symplectic(modes: int, seed: int) -> np.ndarray:
    """Seeded random symplectic matrix (Euler form P1 Z P2, |r_i| <= 1)."""
    rng = np.random.default_rng(np.random.SeedSequence((int(seed), 0x5F0C)))
    p1 = _passive_symplectic(rng, modes)
    p2 = _passive_symplectic(rng, modes)
    z = _squeezer(rng.uniform(-1.0, 1.0, size=modes))
    return p1 @ z @ p2


def random_pure(config: SamplerConfig, index: int = 0) -> CovarianceMatrix:
    """Random pure Gaussian state: sigma = S^T S with S = P1 Z P2.

    The substream for each ``index`` is derived from (seed, index) so samples
    are reproducible independently of generation order.
    """
    rng = np.random.default_rng(np.random.SeedSequence((int(config.seed), int(index))))
    n = config.modes
    p1 = _passive_symplectic(rng, n)
    p2 = _passive_symplectic(rng, n)
    rs = rng.uniform(-config.squeeze_max, config.squeeze_max, size=n)
    s = p1 @ _squeezer(rs) @ p2
    sigma = s.T @ s
    return CovarianceMatrix(n, (sigma + sigma.T) / 2.0)
