"""Covariance-matrix core: validation, symplectic spectra, reductions and
phase-space partial transposition.

Conventions used throughout the package:

* quadratures are interleaved, ``(x1, p1, x2, p2, ..., xN, pN)``;
* the vacuum has unit variance, so the vacuum CM is the identity;
* the single-mode symplectic form is ``omega = [[0, 1], [-1, 0]]`` and the
  N-mode form is its direct sum (any global sign choice for omega leaves
  every exported spectrum unchanged).
"""

import json
from dataclasses import dataclass

import numpy as np

from .errors import (
    AsymmetricMatrix,
    DimensionMismatch,
    IndexOutOfRange,
    NonPositiveDeterminant,
    NumericalFailure,
)

# Tolerances.  None of these are physics inputs; they separate numerical noise
# from genuine violations.
SYMMETRY_TOL = 1e-10      # max |sigma - sigma^T| accepted at construction
PHYSICALITY_TOL = 1e-8    # physical iff nu_min >= 1 - PHYSICALITY_TOL
PURITY_TOL = 1e-7         # |purity - 1| <= PURITY_TOL declares the state pure
PAIRING_TOL = 1e-9        # matching the doubled eigenvalues of (Omega sigma)^2


@dataclass(frozen=True, eq=False)
class CovarianceMatrix:
    """Real symmetric 2N x 2N covariance matrix of an N-mode Gaussian state.

    Construction enforces shape and symmetry (within ``SYMMETRY_TOL``);
    physicality is a separate, reportable property checked by :func:`validate`.
    The stored array is read-only, so instances are safe to share.
    """

    modes: int
    matrix: np.ndarray

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=float, copy=True)
        if self.modes < 1:
            raise DimensionMismatch(f"mode count must be >= 1, got {self.modes}")
        dim = 2 * self.modes
        if mat.ndim != 2 or mat.shape != (dim, dim):
            raise DimensionMismatch(
                f"expected a {dim}x{dim} matrix for {self.modes} modes, got {mat.shape}"
            )
        if not np.all(np.isfinite(mat)):
            raise AsymmetricMatrix("matrix contains non-finite entries")
        skew = np.max(np.abs(mat - mat.T))
        if skew > SYMMETRY_TOL:
            raise AsymmetricMatrix(
                f"matrix asymmetric: max |sigma - sigma^T| = {skew:.3e} > {SYMMETRY_TOL:.0e}"
            )
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def from_matrix(cls, matrix) -> "CovarianceMatrix":
        mat = np.asarray(matrix, dtype=float)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] % 2:
            raise DimensionMismatch(f"expected a square 2Nx2N matrix, got {mat.shape}")
        return cls(mat.shape[0] // 2, mat)

    def to_dict(self) -> dict:
        return {"modes": self.modes, "matrix": self.matrix.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "CovarianceMatrix":
        try:
            modes = int(data["modes"])
            matrix = data["matrix"]
        except (KeyError, TypeError, ValueError) as exc:
            raise DimensionMismatch(f"malformed CM document: {exc}") from exc
        return cls(modes, np.asarray(matrix, dtype=float))


def save_cm(cm: CovarianceMatrix, path) -> None:
    """Write a CM as the JSON interchange document {"modes": N, "matrix": ...}."""
    with open(path, "w") as fh:
        json.dump(cm.to_dict(), fh)
        fh.write("\n")


def load_cm(path) -> CovarianceMatrix:
    """Read a CM JSON document, rejecting malformed or asymmetric input."""
    with open(path) as fh:
        return CovarianceMatrix.from_dict(json.load(fh))


@dataclass(frozen=True)
class Bipartition:
    """Ordered pair of disjoint, non-empty mode-index sets defining a cut."""

    party_a: tuple[int, ...]
    party_b: tuple[int, ...]

    def __post_init__(self):
        a = tuple(sorted(set(int(i) for i in self.party_a)))
        b = tuple(sorted(set(int(i) for i in self.party_b)))
        if not a or not b:
            raise IndexOutOfRange("both parties of a bipartition must be non-empty")
        if min(a + b) < 0:
            raise IndexOutOfRange("mode indices must be non-negative")
        if set(a) & set(b):
            raise IndexOutOfRange(f"parties overlap: {set(a) & set(b)}")
        object.__setattr__(self, "party_a", a)
        object.__setattr__(self, "party_b", b)

    @classmethod
    def parse(cls, text: str) -> "Bipartition":
        """Parse the CLI cut syntax ``A:B``, e.g. ``0:1,2`` (0-indexed)."""
        parts = text.split(":")
        if len(parts) != 2:
            raise IndexOutOfRange(f"cut must look like 'A:B', got {text!r}")
        try:
            a = tuple(int(tok) for tok in parts[0].split(",") if tok != "")
            b = tuple(int(tok) for tok in parts[1].split(",") if tok != "")
        except ValueError as exc:
            raise IndexOutOfRange(f"cut contains a non-integer mode index: {text!r}") from exc
        return cls(a, b)

    @property
    def all_modes(self) -> tuple[int, ...]:
        return tuple(sorted(self.party_a + self.party_b))

    def check(self, modes: int) -> None:
        if max(self.all_modes) >= modes:
            raise IndexOutOfRange(
                f"cut references mode {max(self.all_modes)} but the state has {modes} modes"
            )


@dataclass(frozen=True)
class SymplecticSpectrum:
    """Symplectic eigenvalues nu_i of a CM, sorted ascending."""

    values: tuple[float, ...]

    @property
    def minimum(self) -> float:
        return self.values[0]

    @property
    def product(self) -> float:
        return float(np.prod(self.values))


@dataclass(frozen=True)
class ValidationReport:
    symmetric: bool
    physical: bool
    pure: bool
    min_symplectic_eigenvalue: float | None = None
    offending_eigenvalue: float | None = None


def symplectic_form(modes: int) -> np.ndarray:
    """Return the 2N x 2N symplectic form, block-diag of [[0, 1], [-1, 0]]."""
    if modes < 1:
        raise DimensionMismatch(f"mode count must be >= 1, got {modes}")
    omega = np.zeros((2 * modes, 2 * modes))
    for k in range(modes):
        omega[2 * k, 2 * k + 1] = 1.0
        omega[2 * k + 1, 2 * k] = -1.0
    return omega


def _spectrum_values(matrix: np.ndarray) -> np.ndarray:
    """Symplectic eigenvalues of a symmetric matrix, ascending.

    Works on the real matrix (Omega sigma)^2, whose eigenvalues are -nu_i^2,
    each doubled; this avoids complex arithmetic.  Sub-vacuum or indefinite
    input yields values below 1 (clipped at 0) rather than an exception, so
    unphysical matrices can still be classified.
    """
    dim = matrix.shape[0]
    omega = symplectic_form(dim // 2)
    mo = omega @ matrix
    try:
        lam = np.linalg.eigvals(mo @ mo)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"eigensolve failed: {exc}") from exc
    if not np.all(np.isfinite(lam)):
        raise NumericalFailure("eigensolve produced non-finite eigenvalues")
    scale = max(1.0, float(np.max(np.abs(lam))))
    if np.max(np.abs(lam.imag)) > 1e-6 * scale:
        raise NumericalFailure(
            f"(Omega sigma)^2 has significantly complex spectrum "
            f"(max imag {np.max(np.abs(lam.imag)):.3e}); input is not a valid CM"
        )
    nu = np.sqrt(np.clip(-lam.real, 0.0, None))
    nu.sort()
    lo, hi = nu[0::2], nu[1::2]
    gaps = hi - lo
    tol = PAIRING_TOL * np.maximum(1.0, (lo + hi) / 2.0)
    if np.any(gaps > tol):
        raise NumericalFailure(
            f"could not pair the doubled symplectic eigenvalues "
            f"(worst gap {np.max(gaps):.3e})"
        )
    return (lo + hi) / 2.0


def symplectic_spectrum(cm: CovarianceMatrix) -> SymplecticSpectrum:
    """Symplectic spectrum {nu_i} of a CM (eigenvalues of |i Omega sigma|)."""
    return SymplecticSpectrum(tuple(float(v) for v in _spectrum_values(cm.matrix)))


def validate(cm) -> ValidationReport:
    """Classify a matrix: symmetric / physical (nu_min >= 1) / pure.

    Accepts a :class:`CovarianceMatrix` or a raw array, so that rejected
    matrices can still be reported on.  Classification uses tolerance bands;
    borderline eigenvalues never raise.
    """
    if isinstance(cm, CovarianceMatrix):
        matrix = cm.matrix
    else:
        matrix = np.asarray(cm, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] % 2:
            raise DimensionMismatch(f"expected a square 2Nx2N matrix, got {matrix.shape}")
        if np.max(np.abs(matrix - matrix.T)) > SYMMETRY_TOL:
            return ValidationReport(symmetric=False, physical=False, pure=False)
    try:
        nu = _spectrum_values(matrix)
    except NumericalFailure:
        return ValidationReport(symmetric=True, physical=False, pure=False)
    nu_min = float(nu[0])
    physical = nu_min >= 1.0 - PHYSICALITY_TOL
    sign, logdet = np.linalg.slogdet(matrix)
    pure = False
    if physical and sign > 0:
        pure = bool(abs(np.exp(-0.5 * logdet) - 1.0) <= PURITY_TOL)
    return ValidationReport(
        symmetric=True,
        physical=physical,
        pure=pure,
        min_symplectic_eigenvalue=nu_min,
        offending_eigenvalue=None if physical else nu_min,
    )


def purity(cm: CovarianceMatrix) -> float:
    """Purity mu = 1/sqrt(det sigma); equals 1 exactly for pure states."""
    sign, logdet = np.linalg.slogdet(cm.matrix)
    if sign <= 0:
        raise NonPositiveDeterminant("det(sigma) <= 0: not a physical covariance matrix")
    return float(np.exp(-0.5 * logdet))


def is_pure(cm: CovarianceMatrix) -> bool:
    return abs(purity(cm) - 1.0) <= PURITY_TOL


def reduce(cm: CovarianceMatrix, modes) -> CovarianceMatrix:
    """Principal submatrix on the selected modes (ascending original order)."""
    sel = sorted(set(int(m) for m in modes))
    if not sel:
        raise IndexOutOfRange("cannot reduce onto an empty mode set")
    if sel[0] < 0 or sel[-1] >= cm.modes:
        raise IndexOutOfRange(f"mode selection {sel} out of range for {cm.modes} modes")
    rows = [2 * m + q for m in sel for q in (0, 1)]
    sub = cm.matrix[np.ix_(rows, rows)]
    return CovarianceMatrix(len(sel), sub)


def partial_transpose(cm: CovarianceMatrix, cut: Bipartition) -> CovarianceMatrix:
    """Partial transpose in phase space: mirror the p-quadratures of one party.

    The smaller party is reflected (ties go to party A); reflecting either
    party yields the same spectrum of the transposed CM.
    """
    cut.check(cm.modes)
    flip = cut.party_a if len(cut.party_a) <= len(cut.party_b) else cut.party_b
    lam = np.ones(2 * cm.modes)
    for m in flip:
        lam[2 * m + 1] = -1.0
    return CovarianceMatrix(cm.modes, cm.matrix * np.outer(lam, lam))
