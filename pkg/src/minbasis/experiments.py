"""Seeded Monte Carlo harnesses for genericity and perturbation radii.

Every trial draws from its own generator, spawned from
``numpy.random.SeedSequence(seed)``, so results do not depend on the number
of worker threads (``MINBASIS_THREADS``, default 1) or on scheduling.
"""
from __future__ import annotations

import csv
import io
import json
import os
import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dualbasis import compute_dual, dual_radius, perturb_dual
from .eigenstructure import (certify_minimal_basis_full_rank, generic_eigenstructure, is_ftsr,
                             minimal_indices)
from .errors import BoundViolation, HypothesisError, InputError, NumericalError
from .polymat import DegreeProfile, PolyMatrix, distance_spectral, random_matrix, spectral_norm
from .rank import svd_rank
from .robustness import ftsr_radius, minimal_basis_radius

DEFAULT_SUITE = (
    DegreeProfile.from_mn(1, 1, (1,)),
    DegreeProfile.from_mn(2, 2, (1, 3)),
    DegreeProfile.from_mn(4, 3, (0, 1, 1, 2)),
    DegreeProfile.from_mn(3, 2, (1, 2, 4)),
    DegreeProfile.from_mn(2, 5, (2, 2)),
)

CHECKS = ("ftsr", "minimal", "dual")


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("MINBASIS_THREADS", "1")))
    except ValueError:
        return 1


def _run(fn, items, threads=None):
    threads = thread_count() if threads is None else threads
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))   # map preserves input order


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, (tuple, list)):
        return " ".join(str(v) for v in x)
    return str(x)


@dataclass
class TrialBatchResult:
    kind: str
    profile: str
    trials: int
    seed: int
    records: list[dict]
    ftsr_count: int = 0
    index_histogram: dict = field(default_factory=dict)
    bound_violations: dict = field(default_factory=dict)
    borderline: int = 0
    kept_count: int | None = None
    elapsed: float = field(default=0.0, compare=False)

    @property
    def clean(self) -> bool:
        return not any(self.bound_violations.values())

    def summary(self) -> dict:
        """Deterministic summary (timing is left out on purpose)."""
        total = len(self.records)
        doc = {"kind": self.kind, "profile": self.profile, "trials": self.trials, "seed": self.seed}
        if self.kept_count is None:
            doc.update({
                "ftsrCount": self.ftsr_count,
                "ftsrRate": self.ftsr_count / total if total else 0.0,
                "indexHistogram": dict(sorted(self.index_histogram.items())),
                "borderline": self.borderline,
            })
        else:
            doc.update({
                "samples": total,
                "keptCount": self.kept_count,
                "keptRate": self.kept_count / total if total else 0.0,
            })
        doc["boundViolations"] = dict(sorted(self.bound_violations.items()))
        return doc

    def summary_json(self) -> str:
        return json.dumps(self.summary(), indent=2, sort_keys=False) + "\n"

    def to_csv(self) -> str:
        if not self.records:
            return ""
        buf = io.StringIO()
        cols = list(self.records[0])
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(cols)
        for rec in self.records:
            writer.writerow([_fmt(rec[c]) for c in cols])
        return buf.getvalue()


def genericity_experiment(profile: DegreeProfile, trials: int, seed: int = 0,
                          field: str = "real", threads: int | None = None,
                          tol: float | None = None) -> TrialBatchResult:
    """Draw random matrices and tally FTSR and right minimal indices.

    A non-FTSR draw is classed as borderline when some rank decision had a gap
    ratio below 1e3.  An FTSR draw whose indices differ from the generic
    prediction counts as a violation.
    """
    if trials < 1:
        raise InputError("trials must be at least 1")
    profile.check_standing()
    predicted = generic_eigenstructure(profile).indices
    seeds = np.random.SeedSequence(seed).spawn(trials)

    def one(idx):
        ss = seeds[idx]
        M = random_matrix(profile, np.random.default_rng(ss), field=field)
        ftsr = bool(is_ftsr(M, tol))
        try:
            rep = minimal_indices(M, tol)
            indices, gap = rep.minimal_indices, rep.min_gap_ratio
        except (NumericalError, HypothesisError):  # recorded, not fatal
            indices, gap = None, 0.0
        return {
            "profile": profile.label(),
            "trial": idx,
            "seed": seed,
            "ftsr": int(ftsr),
            "indices": indices,
            "matches_generic": int(indices == predicted),
            "min_gap_ratio": None if gap == float("inf") else float(gap),
        }

    start = time.perf_counter()
    records = _run(one, list(range(trials)), threads)
    hist = Counter(" ".join(map(str, r["indices"])) if r["indices"] is not None else "failed"
                   for r in records)
    violations = sum(1 for r in records if r["ftsr"] and not r["matches_generic"])
    borderline = sum(1 for r in records if not r["ftsr"] and r["min_gap_ratio"] is not None
                     and r["min_gap_ratio"] < 1e3)
    return TrialBatchResult("genericity", profile.label(), trials, seed, records,
                            ftsr_count=sum(r["ftsr"] for r in records),
                            index_histogram=dict(hist),
                            bound_violations={"generic_indices": violations},
                            borderline=borderline,
                            elapsed=time.perf_counter() - start)


def scaled_direction(profile: DegreeProfile, rng, target: float, field: str = "real") -> PolyMatrix:
    """Random coefficient stack rescaled so that ``||T_1(E)||_2 = target``."""
    E = random_matrix(profile, rng, field=field)
    if target == 0:
        return E.scaled(0.0)
    return E.scaled(target / spectral_norm(E))


def _radius(M, check, dual, tol):
    if check == "ftsr":
        return ftsr_radius(M, tol).value
    if check == "minimal":
        return minimal_basis_radius(M, tol).value
    return dual_radius(M, dual, tol)


def perturbation_experiment(M: PolyMatrix, trials: int, seed: int = 0,
                            radius_fractions=(0.5, 0.9, 0.99), check: str = "ftsr",
                            threads: int | None = None, raise_on_violation: bool = True,
                            tol: float | None = None) -> TrialBatchResult:
    """Sample ``Mt = M + E`` with ``||T_1(E)||_2 = f * radius`` and check the preserved property.

    ``check`` selects the property: ``"ftsr"`` (FTSR survives), ``"minimal"``
    (``Mt`` is a minimal basis with full-rank ``Mt_dbar``, certified by a
    full-row-rank ``T_k``) or ``"dual"`` (the corrected dual basis obeys the
    relative-change bound and stays dual to ``Mt``).

    Raises
    ------
    BoundViolation
        Some trial with ``f < 1`` lost the property (when ``raise_on_violation``).
    """
    if trials < 1:
        raise InputError("trials must be at least 1")
    if check not in CHECKS:
        raise InputError(f"check must be one of {CHECKS}, got {check!r}")
    fractions = [float(f) for f in radius_fractions]
    if not fractions or any(f < 0 for f in fractions):
        raise InputError("radius fractions must be nonnegative")
    dual = compute_dual(M, tol=tol) if check == "dual" else None
    radius = _radius(M, check, dual, tol)
    jobs = [(fi, f, t) for fi, f in enumerate(fractions) for t in range(trials)]
    seeds = np.random.SeedSequence(seed).spawn(len(jobs))

    def one(j):
        fi, f, t = jobs[j]
        rng = np.random.default_rng(seeds[j])
        Mt = M + scaled_direction(M.profile, rng, f * radius, M.field)
        rho2 = distance_spectral(M, Mt)
        slack = None
        if check == "ftsr":
            kept = bool(is_ftsr(Mt, tol))
        elif check == "minimal":
            kept = bool(certify_minimal_basis_full_rank(Mt, tol)) and \
                svd_rank(Mt.leading_rowwise, tol).rank == Mt.m
        else:
            try:
                pd = perturb_dual(M, dual, Mt, tol)
                kept, slack = True, pd.slack
            except (NumericalError, HypothesisError):
                kept = False
        return {
            "profile": M.profile.label(),
            "check": check,
            "fraction": f,
            "trial": t,
            "seed": seed,
            "radius": radius,
            "rho2": rho2,
            "kept": int(kept),
            "bound_slack": slack,
        }

    start = time.perf_counter()
    records = _run(one, list(range(len(jobs))), threads)
    bad = [r for r in records if r["fraction"] < 1 and not r["kept"]]
    result = TrialBatchResult(f"perturbation-{check}", M.profile.label(), trials, seed, records,
                              kept_count=sum(r["kept"] for r in records),
                              bound_violations={check: len(bad)},
                              elapsed=time.perf_counter() - start)
    if bad and raise_on_violation:
        raise BoundViolation(f"{len(bad)} in-radius trials lost the {check} property "
                             f"(first: fraction {bad[0]['fraction']}, trial {bad[0]['trial']})")
    return result


__all__ = [
    "DEFAULT_SUITE", "CHECKS", "TrialBatchResult", "genericity_experiment",
    "perturbation_experiment", "scaled_direction", "thread_count",
]
