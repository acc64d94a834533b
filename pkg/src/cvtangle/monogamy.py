"""Residual (tripartite) contangle, monogamy-inequality evaluation, the
log-negativity violation scan and the Monte Carlo verification harness.

The monogamy inequality compares the contangle between a reference mode and
all remaining modes against the sum of the pairwise contangles with each of
them; the residual is the difference, minimized over the reference choice
for three-mode states.
"""

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .entanglement import (
    Bipartition,
    contangle_pure,
    contangle_symmetric_two_mode,
    gaussian_contangle_two_mode,
    glems_pair_contangle,
    log_negativity,
)
from .errors import RegionViolation
from .states import (
    FullySymmetricSpec,
    SamplerConfig,
    ThreeModePureSpec,
    fully_symmetric_pure,
    random_pure,
)
from .symplectic import CovarianceMatrix, reduce, symplectic_spectrum

MONOGAMY_TOL = 1e-6          # residual < -MONOGAMY_TOL counts as a violation
GLEMS_NU_TOL = 1e-6          # nu_min within this of 1 enables the closed form
SYMMETRIC_DET_TOL = 1e-7     # local-det gap for the symmetric closed form


@dataclass(frozen=True)
class MonogamyRecord:
    """One evaluation of the monogamy inequality for a fixed reference mode."""

    reference_mode: int
    global_contangle: float
    pair_contangles: tuple[float, ...]
    residual: float
    violated: bool
    seed: int | None = None


@dataclass(frozen=True)
class ResidualResult:
    """Residual contangle of a three-mode pure state: the minimum over the
    three reference-mode choices."""

    value: float
    argmin_reference: int
    per_reference: tuple[MonogamyRecord, MonogamyRecord, MonogamyRecord]


def _log_sq(x: float) -> float:
    return math.acosh(max(x, 1.0)) ** 2


def _pair_value(
    cm: CovarianceMatrix,
    ref: int,
    other: int,
    method: str,
    starts: int,
    tol: float,
    seed: int,
) -> float:
    pair = reduce(cm, (ref, other))
    if method == "auto":
        det1 = float(np.linalg.det(pair.matrix[0:2, 0:2]))
        det2 = float(np.linalg.det(pair.matrix[2:4, 2:4]))
        if abs(det1 - det2) <= SYMMETRIC_DET_TOL:
            return contangle_symmetric_two_mode(pair).value
        nu_min = symplectic_spectrum(pair).minimum
        if abs(nu_min - 1.0) <= GLEMS_NU_TOL:
            gamma = math.sqrt(max(float(np.linalg.det(pair.matrix)), 1.0))
            return glems_pair_contangle(math.sqrt(det1), math.sqrt(det2), gamma)
    return gaussian_contangle_two_mode(pair, starts=starts, tol=tol, seed=seed).value


def monogamy_record(
    cm: CovarianceMatrix,
    reference: int,
    *,
    seed: int | None = None,
    method: str = "auto",
    optimizer_starts: int = 16,
    optimizer_tol: float = 1e-9,
    optimizer_seed: int = 20240,
) -> MonogamyRecord:
    """Evaluate the monogamy inequality for a pure state and reference mode.

    The global term is the pure-state contangle across reference|rest; pair
    terms are Gaussian contangles of the two-mode reductions.  With
    ``method="auto"`` the symmetric and partial-minimum-uncertainty closed
    forms are used when they apply, otherwise (or with
    ``method="optimizer"``) the constrained minimizer runs.
    """
    if not 0 <= reference < cm.modes:
        raise RegionViolation(f"reference mode {reference} out of range")
    others = [m for m in range(cm.modes) if m != reference]
    cut = Bipartition((reference,), tuple(others))
    global_term = contangle_pure(cm, cut).value
    pairs = tuple(
        _pair_value(cm, reference, j, method, optimizer_starts, optimizer_tol, optimizer_seed)
        for j in others
    )
    residual = global_term - sum(pairs)
    return MonogamyRecord(
        reference_mode=reference,
        global_contangle=global_term,
        pair_contangles=pairs,
        residual=residual,
        violated=residual < -MONOGAMY_TOL,
        seed=seed,
    )


def _record_from_mixedness(a: tuple[float, float, float], ref: int) -> MonogamyRecord:
    """Closed-form monogamy record of a pure three-mode state given its local
    mixednesses; no covariance matrix is constructed."""
    others = [m for m in range(3) if m != ref]
    global_term = _log_sq(a[ref])
    pairs = []
    for j in others:
        k = 3 - ref - j
        pairs.append(glems_pair_contangle(a[ref], a[j], a[k]))
    residual = global_term - sum(pairs)
    return MonogamyRecord(
        reference_mode=ref,
        global_contangle=global_term,
        pair_contangles=tuple(pairs),
        residual=residual,
        violated=residual < -MONOGAMY_TOL,
    )


def residual_contangle(spec: ThreeModePureSpec) -> ResidualResult:
    """Minimum residual contangle over the three reference choices.

    Pure three-mode states are fully determined by their local mixednesses,
    so everything is evaluated through the closed forms; ties resolve to the
    lowest reference index.
    """
    a = spec.as_tuple()
    records = tuple(_record_from_mixedness(a, ref) for ref in range(3))
    argmin = min(range(3), key=lambda i: (records[i].residual, i))
    return ResidualResult(
        value=records[argmin].residual,
        argmin_reference=argmin,
        per_reference=records,
    )


def symmetric_global_contangle(a_loc: float, n: int) -> float:
    """Contangle between one mode and the other n modes of a fully symmetric
    pure (n+1)-mode state: ln^2(a - sqrt(a^2 - 1)), independent of n."""
    if n < 1:
        raise RegionViolation(f"partner count must be >= 1, got {n}")
    return _log_sq(max(a_loc, 1.0))


def symmetric_total_pairwise(a_loc: float, n: int) -> float:
    """Total pairwise contangle n * E(i|j) of a fully symmetric pure
    (n+1)-mode state:

        (n/4) ln^2{ [a^2(n+1) - 1 - sqrt((a^2-1)(a^2(n+1)^2 - (n-1)^2))] / n }.

    The bracket is evaluated in rationalized form (X^2 - Y)/(n (X + sqrt(Y)))
    to avoid cancellation; at n = 1 it reduces exactly to the global value.
    """
    if n < 1:
        raise RegionViolation(f"partner count must be >= 1, got {n}")
    a = max(a_loc, 1.0)
    if a == 1.0:
        return 0.0
    x = a * a * (n + 1) - 1.0
    y = (a * a - 1.0) * (a * a * (n + 1) ** 2 - (n - 1) ** 2)
    # x^2 - y simplifies to 2 n (n-1) a^2 + 1 - (n-1)^2
    num = 2.0 * n * (n - 1) * a * a + 1.0 - (n - 1) ** 2
    inner = num / (n * (x + math.sqrt(y)))
    return (n / 4.0) * math.log(inner) ** 2


def symmetric_monogamy_residual(a_loc: float, n: int) -> float:
    """Residual of the symmetric-family monogamy inequality (global minus
    total pairwise); non-negative for every a_loc >= 1 and n >= 1."""
    return symmetric_global_contangle(a_loc, n) - symmetric_total_pairwise(a_loc, n)


@dataclass(frozen=True)
class ScanPoint:
    a_loc: float
    lhs: float
    rhs: float
    violated: bool


def logneg_violation_scan(
    a_from: float, a_to: float, steps: int, measure: str = "logneg"
) -> list[ScanPoint]:
    """Scan fully symmetric pure three-mode states for failures of the CKW
    form E(1|23) >= 2 E(1|2).

    With ``measure="logneg"`` the comparison uses the logarithmic negativity
    and fails near a_loc -> 1; with ``measure="contangle"`` it uses the
    squared form and never fails.
    """
    if measure not in ("logneg", "contangle"):
        raise RegionViolation(f"unknown measure {measure!r}")
    if steps < 1:
        raise RegionViolation("need at least one grid point")
    grid = np.linspace(a_from, a_to, steps)
    cut_global = Bipartition((0,), (1, 2))
    points = []
    for a in grid:
        cm = fully_symmetric_pure(FullySymmetricSpec(3, float(a)))
        pair = reduce(cm, (0, 1))
        if measure == "logneg":
            lhs = log_negativity(cm, cut_global).value
            rhs = 2.0 * log_negativity(pair, Bipartition((0,), (1,))).value
        else:
            lhs = contangle_pure(cm, cut_global).value
            rhs = 2.0 * contangle_symmetric_two_mode(pair).value
        points.append(ScanPoint(float(a), lhs, rhs, lhs < rhs - 1e-12))
    return points


def glocc_monotonicity_probe(spec: ThreeModePureSpec, h: float) -> float:
    """Central-difference slope of the fixed-reference residual with respect
    to the smallest local mixedness.

    The reference is the mode of smallest mixedness (lowest index on ties);
    the perturbed triples must stay inside the triangle region and keep the
    reference minimal, with margin 2h.
    """
    a = list(spec.as_tuple())
    ref = min(range(3), key=lambda i: (a[i], i))
    others = [m for m in range(3) if m != ref]
    if a[ref] > min(a[j] for j in others) + 1e-12:
        raise RegionViolation("reference mode must have the smallest mixedness")
    if a[ref] + 2 * h > min(a[j] for j in others):
        # keep the reference minimal after the +h bump; a fully symmetric
        # spec is the allowed boundary case
        if abs(a[ref] - min(a[j] for j in others)) > 1e-12:
            raise RegionViolation("perturbation would change the minimizing reference")
    for x in (a[ref] - 2 * h, a[ref] + 2 * h):
        trial = list(a)
        trial[ref] = x
        if x < 1.0 or max(
            trial[0] - (trial[1] + trial[2] - 1.0),
            trial[1] - (trial[0] + trial[2] - 1.0),
            trial[2] - (trial[0] + trial[1] - 1.0),
        ) > 0.0:
            raise RegionViolation(
                f"spec {tuple(a)} is closer than 2h = {2 * h} to the triangle boundary"
            )

    def fixed_ref_residual(x: float) -> float:
        trial = list(a)
        trial[ref] = x
        return _record_from_mixedness(tuple(trial), ref).residual

    return (fixed_ref_residual(a[ref] + h) - fixed_ref_residual(a[ref] - h)) / (2.0 * h)


# ---------------------------------------------------------------------------
# Monte Carlo harness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MonteCarloResult:
    records: tuple[MonogamyRecord, ...]
    count: int
    violations: int
    min_residual: float
    config: SamplerConfig

    def summary(self) -> dict:
        return {
            "count": self.count,
            "violations": self.violations,
            "min_residual": self.min_residual,
            "config": {
                "modes": self.config.modes,
                "seed": self.config.seed,
                "squeeze_max": self.config.squeeze_max,
            },
        }


def _mc_record(args) -> MonogamyRecord:
    config, index, starts, tol = args
    cm = random_pure(config, index)
    record = monogamy_record(
        cm,
        0,
        seed=config.seed,
        method="optimizer",
        optimizer_starts=starts,
        optimizer_tol=tol,
        optimizer_seed=int((config.seed + 0x9E3779B9 * (index + 1)) % 2**32),
    )
    if record.violated:
        # re-verify at tightened optimizer settings before reporting
        record = monogamy_record(
            cm,
            0,
            seed=config.seed,
            method="optimizer",
            optimizer_starts=64,
            optimizer_tol=1e-11,
            optimizer_seed=int((config.seed + 0x9E3779B9 * (index + 1)) % 2**32),
        )
    return record


def monte_carlo(
    config: SamplerConfig,
    count: int,
    *,
    jobs: int = 1,
    start_index: int = 0,
    optimizer_starts: int = 16,
    optimizer_tol: float = 1e-9,
    progress=None,
) -> MonteCarloResult:
    """Sample ``count`` random pure states and evaluate the monogamy record
    with reference mode 0 for each (pair terms through the optimizer).

    Records are keyed by sample index, so any ``jobs`` level and any
    ``start_index`` chunking produce identical results for a given config.
    """
    if count < 1:
        raise RegionViolation("count must be >= 1")
    tasks = [
        (config, index, optimizer_starts, optimizer_tol)
        for index in range(start_index, start_index + count)
    ]
    records: list[MonogamyRecord] = []
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for record in pool.map(_mc_record, tasks, chunksize=8):
                records.append(record)
                if progress is not None:
                    progress(len(records), record)
    else:
        for task in tasks:
            records.append(_mc_record(task))
            if progress is not None:
                progress(len(records), records[-1])
    violations = sum(1 for r in records if r.violated)
    min_residual = min(r.residual for r in records)
    return MonteCarloResult(
        records=tuple(records),
        count=count,
        violations=violations,
        min_residual=min_residual,
        config=config,
    )


def record_csv_header(pair_columns: int = 3) -> list[str]:
    cols = ["index", "seed", "global"]
    cols += [f"pair{i + 1}" for i in range(pair_columns)]
    cols += ["residual", "violated"]
    return cols


def record_csv_row(index: int, record: MonogamyRecord, pair_columns: int = 3) -> list[str]:
    pairs = list(record.pair_contangles) + [0.0] * (pair_columns - len(record.pair_contangles))
    row = [str(index), str(record.seed if record.seed is not None else "")]
    row.append(f"{record.global_contangle:.12g}")
    row += [f"{p:.12g}" for p in pairs]
    row.append(f"{record.residual:.12g}")
    row.append("1" if record.violated else "0")
    return row


def write_records_csv(records, fh, *, first_index: int = 0, pair_columns: int | None = None,
                      header: bool = True) -> None:
    """Emit monogamy records with the schema
    index,seed,global,pair1,...,residual,violated (pairs zero-padded)."""
    records = list(records)
    if pair_columns is None:
        width = max((len(r.pair_contangles) for r in records), default=3)
        pair_columns = max(3, width)
    writer = csv.writer(fh, lineterminator="\n")
    if header:
        writer.writerow(record_csv_header(pair_columns))
    for offset, record in enumerate(records):
        writer.writerow(record_csv_row(first_index + offset, record, pair_columns))


def records_csv_text(records, **kwargs) -> str:
    buf = io.StringIO()
    write_records_csv(records, buf, **kwargs)
    return buf.getvalue()


def summary_json(result: MonteCarloResult) -> str:
    return json.dumps(result.summary(), sort_keys=True)
