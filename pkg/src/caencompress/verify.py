"""Reproducible audit of the algebraic and MACA claims over a range of grids."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import audit
from .bitmatrix import is_permutation, states_to_vectors, vectors_to_states
from .maca import MAX_ENUM_CELLS, MacaProfile, build_std, maca_profile, pef_positions
from .rules import BOUNDARIES, FUNDAMENTALS, PERIODIC, RuleSpec, fundamental_matrix


def check_maca(profile: MacaProfile) -> list[str]:
    """Violations of the MACA properties for one profile, found by exhaustive
    enumeration of the state space.  Empty for a consistent profile."""
    spec = profile.spec
    if not profile.is_maca:
        return []
    if spec.cells > MAX_ENUM_CELLS:
        raise ValueError("exhaustive check limited to 20 cells")
    tag = f"rule {spec.rule_number} {spec.boundary} {spec.m}x{spec.n}"
    problems = []
    k = profile.k
    if k & (k - 1):
        problems.append(f"{tag}: k={k} is not a power of two")

    std = build_std(spec)
    fixed = np.nonzero(std.successor == np.arange(std.successor.size))[0].tolist()
    if std.attractors != fixed:
        problems.append(f"{tag}: attractors are not exactly the fixed points")
    if len(std.attractors) != k:
        problems.append(f"{tag}: {len(std.attractors)} attractors enumerated, profile says k={k}")
    if std.max_depth != profile.depth:
        problems.append(f"{tag}: max depth {std.max_depth} != d={profile.depth}")

    hits = np.bincount(std.successor, minlength=std.successor.size)
    expected = 1 << (spec.cells - profile.rank)
    if not np.isin(hits, (0, expected)).all():
        problems.append(f"{tag}: predecessor counts {sorted(set(hits.tolist()))} violate 0 or 2^(mn-r)={expected}")

    attractors = states_to_vectors(np.array(std.attractors), spec.cells)
    for strategy in ("linear_algebra", "brute_force"):
        pos = pef_positions(profile.attractor_basis, strategy)
        if (1 << len(pos)) != k:
            problems.append(f"{tag}: {strategy} PEF has {len(pos)} bits for k={k}")
        elif np.unique(vectors_to_states(attractors[:, pos])).size != k:
            problems.append(f"{tag}: {strategy} PEF {pos} is not pseudo-exhaustive")
    return problems


@dataclass
class VerifyResult:
    lines: list[str] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def run_verification(max_m: int = 3, max_n: int = 3, maca_cells: int = 6) -> VerifyResult:
    """Audit every grid up to ``max_m x max_n``; sweep all 512 rules on grids
    with at most ``maca_cells`` cells."""
    result = VerifyResult()
    out = result.lines.append

    bad = [(f, m, n) for m in range(1, max_m + 1) for n in range(1, max_n + 1) for f in FUNDAMENTALS
           if not is_permutation(fundamental_matrix(f, PERIODIC, m, n))]
    out(f"[fundamental periodic matrices are permutations] {'ok' if not bad else 'FAIL ' + repr(bad)}")
    if bad:
        result.failures.append("periodic fundamental matrix is not a permutation")

    for boundary in BOUNDARIES:
        for m in range(1, max_m + 1):
            for n in range(1, max_n + 1):
                _, report = audit(boundary, m, n)
                out(f"[algebra {boundary} {m}x{n}] " + " ".join(report.lines()[:6]))
                for claim in report.verdicts:
                    out(f"  {claim}")
                result.failures.extend(f"{boundary} {m}x{n}: {c}" for c in report.failed_claims)

    checked = 0
    for boundary in BOUNDARIES:
        for m in range(1, maca_cells + 1):
            for n in range(1, maca_cells // m + 1):
                for rule in range(512):
                    profile = maca_profile(RuleSpec(rule, boundary, m, n))
                    if profile.is_maca:
                        checked += 1
                        result.failures.extend(check_maca(profile))
    maca_failures = [f for f in result.failures if f.startswith("rule ")]
    out(f"[maca sweep mn<={maca_cells}] {checked} MACA profiles checked, {len(maca_failures)} violations")
    out(f"verdict: {'all claims hold' if result.ok else f'{len(result.failures)} claim(s) fail'}")
    return result
