"""DET curve, equal error rate, and normalized minimum tandem detection cost.

Score polarity is fixed: higher scores mean more bona fide. The DET curve is
the staircase of (p_miss, p_fa) over all distinct score thresholds; the EER
is where miss and false-alarm rates meet, computed on the lower convex
envelope of the DET operating points with linear interpolation between the
two achievable points bracketing the miss = false-alarm diagonal.
"""

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CoefficientDegeneracyError,
    DegenerateSignalError,
    MissingInputError,
    ScoreFileError,
    SingleClassError,
)

LABELS = ("bonafide", "spoof")


@dataclass(frozen=True)
class ScoreRecord:
    """One scored trial: id, class label, attack id, detector score."""

    utterance_id: str
    label: str
    attack_id: str
    score: float

    def __post_init__(self):
        if self.label not in LABELS:
            raise DegenerateSignalError(f"label must be one of {LABELS}, got {self.label!r}")
        if not np.isfinite(self.score):
            raise DegenerateSignalError(
                f"score for {self.utterance_id!r} is not finite: {self.score}"
            )


@dataclass(frozen=True)
class TdcfParams:
    """Priors, costs, and ASV operating point for the tandem cost.

    asv_pmiss / asv_pfa are the ASV miss and false-alarm rates on target and
    nontarget trials; asv_pmiss_spoof is the ASV miss rate on spoof trials
    (the fraction of spoofs the ASV already rejects on its own).
    """

    p_target: float
    p_nontarget: float
    p_spoof: float
    c_miss: float
    c_fa: float
    c_fa_spoof: float
    asv_pmiss: float
    asv_pfa: float
    asv_pmiss_spoof: float

    def __post_init__(self):
        total = self.p_target + self.p_nontarget + self.p_spoof
        if abs(total - 1.0) > 1e-9:
            raise DegenerateSignalError(f"priors must sum to 1, got {total}")
        for name in ("p_target", "p_nontarget", "p_spoof"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise DegenerateSignalError(f"{name} must lie in [0, 1], got {v}")
        for name in ("c_miss", "c_fa", "c_fa_spoof"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v >= 0.0):
                raise DegenerateSignalError(f"{name} must be finite and >= 0, got {v}")
        for name in ("asv_pmiss", "asv_pfa", "asv_pmiss_spoof"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise DegenerateSignalError(f"{name} must lie in [0, 1], got {v}")


def _split_scores(records):
    bona = np.sort(np.array([r.score for r in records if r.label == "bonafide"], dtype=np.float64))
    spoof = np.sort(np.array([r.score for r in records if r.label == "spoof"], dtype=np.float64))
    if bona.size == 0 or spoof.size == 0:
        raise SingleClassError(
            f"need both classes, got {bona.size} bonafide and {spoof.size} spoof"
        )
    return bona, spoof


def _det_arrays(bona, spoof):
    """Thresholds (distinct scores plus +inf) with p_miss and p_fa arrays."""
    thresholds = np.concatenate([np.unique(np.concatenate([bona, spoof])), [np.inf]])
    p_miss = np.searchsorted(bona, thresholds, side="left") / bona.size
    p_fa = (spoof.size - np.searchsorted(spoof, thresholds, side="left")) / spoof.size
    return thresholds, p_miss, p_fa


def det_curve(records):
    """Operating points (threshold, p_miss, p_fa) over all distinct thresholds.

    p_miss is the fraction of bona fide scores below the threshold, p_fa the
    fraction of spoof scores at or above it; the final point at threshold
    +inf is (1, 0).
    """
    bona, spoof = _split_scores(records)
    thresholds, p_miss, p_fa = _det_arrays(bona, spoof)
    return [(float(t), float(m), float(f)) for t, m, f in zip(thresholds, p_miss, p_fa)]


def _lower_hull(points):
    """Lower convex hull of (x, y) points sorted by ascending x."""
    hull = []
    for p in points:
        while len(hull) >= 2:
            ox, oy = hull[-2]
            ax, ay = hull[-1]
            cross = (ax - ox) * (p[1] - oy) - (ay - oy) * (p[0] - ox)
            if cross <= 0.0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def eer(records):
    """Equal error rate on the lower convex envelope of the DET points."""
    bona, spoof = _split_scores(records)
    _, p_miss, p_fa = _det_arrays(bona, spoof)
    # keep the best (lowest) miss rate at each distinct false-alarm rate
    best = {}
    for f, m in zip(p_fa, p_miss):
        if f not in best or m < best[f]:
            best[f] = m
    points = sorted(best.items())
    hull = _lower_hull(points)
    # walk hull edges for the sign change of (p_miss - p_fa)
    prev = None
    for f, m in hull:
        d = m - f
        if d == 0.0:
            return float(f)
        if prev is not None:
            f0, m0, d0 = prev
            if d0 > 0.0 > d:
                t = d0 / (d0 - d)
                return float(f0 + t * (f - f0))
        prev = (f, m, d)
    raise SingleClassError("DET curve does not cross the miss = false-alarm diagonal")


def tdcf_coefficients(params):
    """Constant, miss, and false-alarm coefficients of the tandem cost.

    C0 is the cost floor set by the ASV system's own errors; C1 scales the
    countermeasure's miss rate on bona fide trials and C2 its false-alarm
    rate on spoof trials.
    """
    c0 = (
        params.p_target * params.c_miss * params.asv_pmiss
        + params.p_nontarget * params.c_fa * params.asv_pfa
    )
    c1 = params.p_target * params.c_miss - c0
    c2 = params.p_spoof * params.c_fa_spoof * (1.0 - params.asv_pmiss_spoof)
    return c0, c1, c2


def min_tdcf(records, params):
    """Normalized minimum tandem detection cost over all thresholds.

    min over thresholds of C0 + C1*p_miss + C2*p_fa, divided by the default
    decision cost C0 + min(C1, C2).

    Raises
    ------
    SingleClassError, CoefficientDegeneracyError
    """
    bona, spoof = _split_scores(records)
    c0, c1, c2 = tdcf_coefficients(params)
    if c1 <= 0.0 or c2 <= 0.0:
        raise CoefficientDegeneracyError(
            f"tandem cost coefficients degenerate: C1={c1}, C2={c2}"
        )
    _, p_miss, p_fa = _det_arrays(bona, spoof)
    costs = c0 + c1 * p_miss + c2 * p_fa
    return float(np.min(costs) / (c0 + min(c1, c2)))


@dataclass(frozen=True)
class Report:
    """Pooled and per-attack evaluation results."""

    eer: float
    min_tdcf: float
    n_bonafide: int
    n_spoof: int
    per_attack_eer: dict = field(default_factory=dict)

    def csv_rows(self):
        """Machine-readable rows (scope, metric, value)."""
        rows = [
            ("pooled", "eer_percent", 100.0 * self.eer),
            ("pooled", "min_tdcf", self.min_tdcf),
        ]
        for attack in sorted(self.per_attack_eer):
            rows.append((f"attack:{attack}", "eer_percent", 100.0 * self.per_attack_eer[attack]))
        return rows

    def csv_text(self):
        lines = ["scope,metric,value"]
        for scope, metric, value in self.csv_rows():
            lines.append(f"{scope},{metric},{value:.6f}")
        return "\n".join(lines) + "\n"

    def text(self):
        lines = [
            f"trials: {self.n_bonafide} bonafide, {self.n_spoof} spoof",
            f"pooled EER: {100.0 * self.eer:.4f} %",
            f"pooled min t-DCF: {self.min_tdcf:.6f}",
        ]
        for attack in sorted(self.per_attack_eer):
            lines.append(f"attack {attack} EER: {100.0 * self.per_attack_eer[attack]:.4f} %")
        return "\n".join(lines) + "\n"


def report(records, params, group_by_attack=False):
    """Pooled EER and min t-DCF, optionally with per-attack EER.

    Each attack's EER pools that attack's spoof scores against all bona fide
    scores.
    """
    records = list(records)
    pooled_eer = eer(records)
    pooled_tdcf = min_tdcf(records, params)
    n_bona = sum(1 for r in records if r.label == "bonafide")
    n_spoof = len(records) - n_bona
    per_attack = {}
    if group_by_attack:
        bona_records = [r for r in records if r.label == "bonafide"]
        attacks = sorted({r.attack_id for r in records if r.label == "spoof"})
        for attack in attacks:
            subset = bona_records + [
                r for r in records if r.label == "spoof" and r.attack_id == attack
            ]
            per_attack[attack] = eer(subset)
    return Report(
        eer=pooled_eer,
        min_tdcf=pooled_tdcf,
        n_bonafide=n_bona,
        n_spoof=n_spoof,
        per_attack_eer=per_attack,
    )


@dataclass(frozen=True)
class ScoreFile:
    """Parsed score file: raw rows plus any embedded config hash."""

    rows: list  # (utterance_id, attack_id or None, label or None, score)
    config_hash: str | None


def parse_score_file(path):
    """Read a score file with 4-column (id attack label score) or 2-column
    (id score) whitespace-separated lines. Lines starting with '#' are
    comments; '# config_hash=<hex>' is captured for merge checking."""
    if not os.path.isfile(path):
        raise MissingInputError(f"no such score file: {path}")
    rows = []
    config_hash = None
    with open(path, "r", encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("config_hash="):
                    config_hash = body.split("=", 1)[1].strip()
                continue
            tokens = line.split()
            if len(tokens) == 4:
                utt, attack, label, score_s = tokens
                if label not in LABELS:
                    raise ScoreFileError(
                        f"{path}:{lineno}: unknown label {label!r} (expected one of {LABELS})"
                    )
            elif len(tokens) == 2:
                utt, score_s = tokens
                attack, label = None, None
            else:
                raise ScoreFileError(
                    f"{path}:{lineno}: expected 2 or 4 whitespace-separated fields, "
                    f"got {len(tokens)}"
                )
            try:
                score = float(score_s)
            except ValueError as e:
                raise ScoreFileError(f"{path}:{lineno}: bad score {score_s!r}") from e
            if not np.isfinite(score):
                raise ScoreFileError(f"{path}:{lineno}: non-finite score {score_s!r}")
            rows.append((utt, attack, label, score))
    return ScoreFile(rows=rows, config_hash=config_hash)


def write_score_file(path, records, config_hash=None):
    """Write records as 4-column score lines, with an optional config hash
    comment header."""
    with open(path, "w", encoding="utf-8") as f:
        if config_hash:
            f.write(f"# config_hash={config_hash}\n")
        for r in records:
            f.write(f"{r.utterance_id} {r.attack_id} {r.label} {r.score!r}\n")
