"""Exact checks of the SD/TD equivalence over discrete (SS, TT, ST) joints.

Under E[SS] = E[TT], Var[SS] = Var[TT] and Cov[SS, TT] = 0, with
x = Var[SS] and y = Cov[TT, ST] - Cov[SS, ST], the following share the sign of y:

    Cov[IDD, SD]^2 - Cov[IDD, TD]^2
    Var[SD] - Var[TD]
    E[SD^2] - E[TD^2]

E[|SD|] - E[|TD|] is measured alongside and never asserted.

Example:
    joint = build_domain_space_joint(space, PairMode.INDEPENDENT)
    check = check_joint(joint)
    check.equivalence.all_agree_proved
"""

from __future__ import annotations

import csv
import logging
from collections.abc import Iterable
from pathlib import Path
from typing import TYPE_CHECKING, Optional, Union

import numpy as np
from pydantic import ValidationError

from robustness_metrics.core.errors import (
    EmptyInputError,
    InvalidProbabilitiesError,
    SchemaError,
    TooFewDomainsError,
)
from robustness_metrics.models.theorem import (
    DiscreteJoint,
    DomainSpace,
    EquivalenceReport,
    HypothesisReport,
    IdentityCheck,
    IdentityReport,
    JointAtom,
    MomentSet,
    PairMode,
    TheoremCheck,
    TheoremSweepReport,
)

if TYPE_CHECKING:
    from robustness_metrics.config.simulation_config import SimConfig

logger = logging.getLogger(__name__)

EXACT_TOLERANCE = 1e-12
MARGIN_THRESHOLD = 1e-9
PROB_SUM_TOLERANCE = 1e-12
ATOM_COLUMNS = ("ss", "tt", "st", "prob")

SWEEP_MIN_DOMAINS = 2
SWEEP_MAX_DOMAINS = 8


def compute_moments(
    ss: np.ndarray,
    tt: np.ndarray,
    st: np.ndarray,
    probs: Optional[np.ndarray] = None,  # noqa: UP045
) -> MomentSet:
    """Moments of (SS, TT, ST) and of the drops derived per observation.

    With ``probs`` the moments are exact population moments of the weighted
    atoms; without, they are sample moments with the n - 1 denominator for
    variances and covariances.
    """
    n = len(ss)
    if probs is None:
        weights = np.full(n, 1.0 / n)
        correction = n / (n - 1)
    else:
        weights = probs
        correction = 1.0

    sd = ss - st
    td = tt - st
    idd = ss - tt

    def mean(v: np.ndarray) -> float:
        return float(np.dot(weights, v))

    series = {"ss": ss, "tt": tt, "st": st, "sd": sd, "td": td, "idd": idd}
    centered = {name: v - mean(v) for name, v in series.items()}

    def cov(a: str, b: str) -> float:
        return float(np.dot(weights, centered[a] * centered[b]) * correction)

    var_ss = cov("ss", "ss")
    cov_ss_st = cov("ss", "st")
    cov_tt_st = cov("tt", "st")
    return MomentSet(
        e_ss=mean(ss),
        e_tt=mean(tt),
        e_st=mean(st),
        var_ss=var_ss,
        var_tt=cov("tt", "tt"),
        var_st=cov("st", "st"),
        cov_ss_tt=cov("ss", "tt"),
        cov_ss_st=cov_ss_st,
        cov_tt_st=cov_tt_st,
        e_ss_st=mean(ss * st),
        e_tt_st=mean(tt * st),
        e_ss2=mean(ss * ss),
        e_tt2=mean(tt * tt),
        x=var_ss,
        y=cov_tt_st - cov_ss_st,
        cov_idd_sd=cov("idd", "sd"),
        cov_idd_td=cov("idd", "td"),
        var_sd=cov("sd", "sd"),
        var_td=cov("td", "td"),
        e_sd=mean(sd),
        e_td=mean(td),
        e_sd2=mean(sd * sd),
        e_td2=mean(td * td),
        e_abs_sd=mean(np.abs(sd)),
        e_abs_td=mean(np.abs(td)),
    )


def exact_moments(joint: DiscreteJoint) -> MomentSet:
    """Exact population moments of a discrete joint.

    Raises:
        InvalidProbabilitiesError: A probability outside (0, 1] or a total
            that differs from 1 by more than 1e-12
    """
    probs = np.array([atom.prob for atom in joint.atoms])
    if np.any(probs <= 0.0) or np.any(probs > 1.0) or not np.all(np.isfinite(probs)):
        raise InvalidProbabilitiesError("atom probabilities must lie in (0, 1]")
    total = float(np.sum(probs))
    if abs(total - 1.0) > PROB_SUM_TOLERANCE:
        raise InvalidProbabilitiesError(f"atom probabilities sum to {total!r}, not 1")

    ss = np.array([atom.ss for atom in joint.atoms])
    tt = np.array([atom.tt for atom in joint.atoms])
    st = np.array([atom.st for atom in joint.atoms])
    return compute_moments(ss, tt, st, probs)


def check_hypotheses(m: MomentSet, tol: float = EXACT_TOLERANCE) -> HypothesisReport:
    """Check E[SS] = E[TT], Var[SS] = Var[TT] and Cov[SS, TT] = 0.

    The tolerance is scaled by the magnitude of the moments.
    """
    effective = tol * m.scale()
    mean_residual = abs(m.e_ss - m.e_tt)
    var_residual = abs(m.var_ss - m.var_tt)
    cov_residual = abs(m.cov_ss_tt)
    return HypothesisReport(
        mean_equal=mean_residual <= effective,
        mean_residual=mean_residual,
        var_equal=var_residual <= effective,
        var_residual=var_residual,
        cov_zero=cov_residual <= effective,
        cov_residual=cov_residual,
        tolerance=effective,
    )


def verify_identities(m: MomentSet, tol: float = EXACT_TOLERANCE) -> IdentityReport:
    """Check the identities the equivalence is derived from.

    Each identity is skipped, with a note, when a hypothesis it needs fails.
    """
    hypotheses = check_hypotheses(m, tol)
    effective = hypotheses.tolerance
    candidates = (
        (
            "cov_idd_sd = x + y",
            m.cov_idd_sd - (m.x + m.y),
            hypotheses.cov_zero,
            "needs Cov[SS, TT] = 0",
        ),
        (
            "cov_idd_td = -x + y",
            m.cov_idd_td - (-m.x + m.y),
            hypotheses.var_equal and hypotheses.cov_zero,
            "needs Var[SS] = Var[TT] and Cov[SS, TT] = 0",
        ),
        (
            "var_sd - var_td = 2y",
            (m.var_sd - m.var_td) - 2.0 * m.y,
            hypotheses.var_equal,
            "needs Var[SS] = Var[TT]",
        ),
        (
            "e_sd2 - e_td2 = 2(e_tt_st - e_ss_st)",
            (m.e_sd2 - m.e_td2) - 2.0 * (m.e_tt_st - m.e_ss_st),
            hypotheses.mean_equal and hypotheses.var_equal,
            "needs E[SS] = E[TT] and Var[SS] = Var[TT]",
        ),
    )

    checks = []
    for name, difference, applicable, requirement in candidates:
        if not applicable:
            checks.append(IdentityCheck(name=name, note=f"skipped: {requirement}"))
            continue
        residual = abs(difference)
        passed = residual <= effective
        if not passed:
            logger.warning(f"Identity {name} fails: residual {residual:.3e} > {effective:.3e}")
        checks.append(IdentityCheck(name=name, residual=residual, passed=passed))
    return IdentityReport(checks=checks, tolerance=effective)


def _sign(value: float) -> int:
    return int(np.sign(value))


def check_equivalence(
    m: MomentSet,
    tol: float = EXACT_TOLERANCE,
    margin_threshold: float = MARGIN_THRESHOLD,
) -> EquivalenceReport:
    """Signs of the equivalent conditions and whether they agree.

    Agreement is asserted only when the hypotheses hold within ``tol`` and
    |y| exceeds ``margin_threshold``; both are scaled by the moments' magnitude.
    """
    hypotheses = check_hypotheses(m, tol)
    c1 = _sign(m.cov_tt_st - m.cov_ss_st)
    c2 = _sign(m.cov_idd_sd**2 - m.cov_idd_td**2)
    c3 = _sign(m.var_sd - m.var_td)
    c4_sq = _sign(m.e_sd2 - m.e_td2)
    c4_abs = _sign(m.e_abs_sd - m.e_abs_td)
    margin = abs(m.y)
    effective_margin = margin_threshold * m.scale()

    if c4_abs != c4_sq:
        logger.warning(
            f"E[|SD|] - E[|TD|] has sign {c4_abs} while E[SD^2] - E[TD^2] has sign {c4_sq}"
        )
    return EquivalenceReport(
        c1=c1,
        c2=c2,
        c3=c3,
        c4_sq=c4_sq,
        c4_abs=c4_abs,
        margin=margin,
        all_agree_proved=c1 == c2 == c3 == c4_sq,
        abs_variant_agrees=c4_abs == c4_sq,
        asserted=hypotheses.all_hold and margin > effective_margin,
        tolerance=effective_margin,
    )


def check_joint(
    joint: DiscreteJoint,
    tol: float = EXACT_TOLERANCE,
    margin_threshold: float = MARGIN_THRESHOLD,
) -> TheoremCheck:
    """Run hypotheses, identities and equivalence on one joint."""
    moments = exact_moments(joint)
    return TheoremCheck(
        moments=moments,
        hypotheses=check_hypotheses(moments, tol),
        identities=verify_identities(moments, tol),
        equivalence=check_equivalence(moments, tol, margin_threshold),
    )


def pair_scores(space: DomainSpace, source: int, target: int) -> tuple[float, float, float]:
    """(SS, TT, ST) of one ordered pair; a (d, d) pair scores its in-domain value."""
    ss = space.base - space.difficulty[source]
    tt = space.base - space.difficulty[target]
    if source == target:
        return ss, ss, ss
    st = (
        space.base
        - space.w_s * space.difficulty[source]
        - space.w_t * space.difficulty[target]
        - space.transfer_penalty[source][target]
    )
    return ss, tt, st


def build_domain_space_joint(
    space: DomainSpace, pair_mode: PairMode = PairMode.INDEPENDENT
) -> DiscreteJoint:
    """Enumerate the (SS, TT, ST) joint of a domain space.

    Args:
        space: Score model
        pair_mode: INDEPENDENT for all n^2 pairs, DISTINCT for the n(n-1)
            ordered pairs of different domains

    Raises:
        TooFewDomainsError: Fewer than two domains
    """
    n = space.n
    if n < 2:
        raise TooFewDomainsError(f"a domain space needs at least 2 domains, got {n}")

    if pair_mode is PairMode.DISTINCT:
        pairs = [(s, t) for s in range(n) for t in range(n) if s != t]
    else:
        pairs = [(s, t) for s in range(n) for t in range(n)]
    prob = 1.0 / len(pairs)

    atoms = []
    for source, target in pairs:
        ss, tt, st = pair_scores(space, source, target)
        atoms.append(JointAtom(ss=ss, tt=tt, st=st, prob=prob))
    return DiscreteJoint(atoms=atoms)


def sample_domain_space(config: SimConfig, rng: np.random.Generator) -> DomainSpace:
    """Draw a domain space from the generator parameters of a SimConfig.

    Difficulties ~ N(mu_delta, sigma_delta); penalties are penalty_mean plus
    |N(0, penalty_sigma)| off the diagonal and zero on it.
    """
    n = config.n_domains
    difficulty = rng.normal(config.mu_delta, config.sigma_delta, size=n)
    penalty = config.penalty_mean + np.abs(rng.normal(0.0, config.penalty_sigma, size=(n, n)))
    np.fill_diagonal(penalty, 0.0)
    return DomainSpace(
        difficulty=difficulty.tolist(),
        base=config.base,
        transfer_penalty=penalty.tolist(),
        w_s=config.w_s,
        w_t=config.w_t,
    )


def _random_space(rng: np.random.Generator) -> DomainSpace:
    n = int(rng.integers(SWEEP_MIN_DOMAINS, SWEEP_MAX_DOMAINS + 1))
    penalty = np.abs(rng.normal(0.0, 1.0, size=(n, n)))
    np.fill_diagonal(penalty, 0.0)
    return DomainSpace(
        difficulty=rng.normal(0.0, 1.0, size=n).tolist(),
        base=0.0,
        transfer_penalty=penalty.tolist(),
        w_s=float(rng.uniform(0.0, 1.0)),
        w_t=float(rng.uniform(0.0, 1.0)),
    )


def sweep(
    seeds: Iterable[int],
    tol: float = EXACT_TOLERANCE,
    margin_threshold: float = MARGIN_THRESHOLD,
) -> TheoremSweepReport:
    """Check the theorem on one random domain space per seed.

    Spaces have 2-8 domains, N(0, 1) difficulties, |N(0, 1)| penalties and
    uniform weights, enumerated with independent pair sampling.
    """
    checked = asserted = 0
    failures: list[int] = []
    abs_disagreements: list[int] = []
    margins: list[float] = []
    max_residual = 0.0

    for seed in seeds:
        space = _random_space(np.random.default_rng(seed))
        check = check_joint(build_domain_space_joint(space), tol, margin_threshold)
        checked += 1
        asserted += int(check.equivalence.asserted)
        margins.append(check.equivalence.margin)
        for identity in check.identities.checks:
            if identity.residual is not None:
                max_residual = max(max_residual, identity.residual)
        if not check.passed:
            logger.warning(f"Theorem check failed for seed {seed}")
            failures.append(seed)
        if not check.equivalence.abs_variant_agrees:
            abs_disagreements.append(seed)

    logger.info(
        f"Sweep: {checked} checked, {asserted} asserted, {len(failures)} failure(s), "
        f"{len(abs_disagreements)} E[|.|] disagreement(s)"
    )
    return TheoremSweepReport(
        checked=checked,
        asserted=asserted,
        failures=failures,
        abs_disagreements=abs_disagreements,
        min_margin=min(margins, default=0.0),
        max_margin=max(margins, default=0.0),
        max_identity_residual=max_residual,
    )


def load_joint_csv(path: Union[str, Path]) -> DiscreteJoint:
    """Load atoms from a CSV with header ss,tt,st,prob.

    Raises:
        FileNotFoundError: File does not exist
        SchemaError: Bad header or row
        EmptyInputError: No atoms
    """
    file_path = Path(path)
    if not file_path.exists():
        raise FileNotFoundError(f"Atom file not found: {file_path}")

    atoms = []
    with file_path.open(newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None or tuple(c.strip() for c in header) != ATOM_COLUMNS:
            raise SchemaError(1, f"header must be {','.join(ATOM_COLUMNS)}")
        for line, row in enumerate(reader, start=2):
            if not any(cell.strip() for cell in row):
                continue
            if len(row) != len(ATOM_COLUMNS):
                raise SchemaError(line, f"expected {len(ATOM_COLUMNS)} fields, got {len(row)}")
            try:
                atoms.append(JointAtom(**dict(zip(ATOM_COLUMNS, (c.strip() for c in row)))))
            except ValidationError as e:
                raise SchemaError(line, str(e.errors()[0]["msg"])) from e

    if not atoms:
        raise EmptyInputError(f"no atoms in {file_path}")
    logger.debug(f"Loaded {len(atoms)} atoms from {file_path}")
    return DiscreteJoint(atoms=atoms)
