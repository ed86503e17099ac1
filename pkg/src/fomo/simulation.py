"""Shuffle-and-scan experiments over a corpus.

Scanning a corpus in some order, each document either repeats topics
already seen or contributes new ones; the completion position is where
the last unseen topic finally appears. :func:`scan_accession` traces
that coverage curve for the corpus's own order. :func:`run_shuffles`
repeats the scan under many random document orders, each order standing
in for a different case history, and summarizes the completion
positions as a histogram, nearest-rank percentiles, and the recall
level each percentile corresponds to.

Determinism contract: trial i permutes with a Fisher-Yates shuffle
driven by the SplitMix64 stream keyed by (master_seed, i). Results are
merged by trial index, so the summary is byte-for-byte identical no
matter how many workers run the trials. A shuffle is generated lazily
front to back and abandoned at the completion position; the emitted
prefix is identical to what a full shuffle would have produced.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping, Sequence

from .collector import completion_quantile, expected_draws_unequal_sum
from .corpus import Corpus
from .prng import SplitMix64, derive_key

__all__ = [
    "CoverageCurve",
    "TrialResult",
    "HistogramBin",
    "SimulationSummary",
    "AnalyticComparison",
    "scan_accession",
    "shuffle_trial",
    "run_trials",
    "run_shuffles",
    "completion_topics",
    "completion_vs_analytic",
    "summary_from_json",
]

SUMMARY_FORMAT = "fomo-summary"
SUMMARY_VERSION = 1

DEFAULT_QUANTILES = (0.10, 0.20, 0.50, 0.95)
DEFAULT_BIN_COUNT = 20


@dataclass(frozen=True)
class CoverageCurve:
    """Distinct topics seen versus documents scanned, in a fixed order.

    ``points`` records (documents_scanned, distinct_topics_seen) at each
    position where the count increased; the final point reaches every
    topic that occurs in the corpus.
    """

    points: tuple[tuple[int, int], ...]
    total_documents: int
    total_topics_present: int


@dataclass(frozen=True)
class TrialResult:
    """Outcome of scanning one random document order.

    ``first_seen`` maps each topic that occurs in the corpus to the
    1-based position where it first appeared; ``completion_position`` is
    the maximum of those. Topic ids below the corpus's declared count
    that never occur at all are listed in ``absent_topics``.
    """

    completion_position: int
    first_seen: Mapping[int, int]
    absent_topics: tuple[int, ...]


@dataclass(frozen=True)
class HistogramBin:
    lower: float
    upper: float
    count: int


@dataclass(frozen=True)
class SimulationSummary:
    """Aggregate of many shuffle trials.

    ``percentiles[q]`` is the nearest-rank q-quantile of the completion
    positions; ``recall_at[q]`` divides it by the corpus size: the share
    of documents a review would need before all topics are covered in a
    fraction q of cases.
    """

    trial_count: int
    seed: int
    histogram: tuple[HistogramBin, ...]
    percentiles: dict[float, int]
    min_completion: int
    max_completion: int
    mean_completion: float
    recall_at: dict[float, float]

    def to_json(self) -> str:
        """Canonical single-line JSON; byte-identical for identical runs."""
        payload = {
            "format": SUMMARY_FORMAT,
            "version": SUMMARY_VERSION,
            "trial_count": self.trial_count,
            "seed": self.seed,
            "min_completion": self.min_completion,
            "max_completion": self.max_completion,
            "mean_completion": self.mean_completion,
            "percentiles": {repr(q): v for q, v in self.percentiles.items()},
            "recall_at": {repr(q): v for q, v in self.recall_at.items()},
            "histogram": [
                {"lower": b.lower, "upper": b.upper, "count": b.count}
                for b in self.histogram
            ],
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def summary_from_json(text: str) -> SimulationSummary:
    """Parse a summary produced by :meth:`SimulationSummary.to_json`."""
    payload = json.loads(text)
    if payload.get("format") != SUMMARY_FORMAT:
        raise ValueError(f"not a {SUMMARY_FORMAT} document")
    if payload.get("version") != SUMMARY_VERSION:
        raise ValueError(f"unsupported summary version {payload.get('version')!r}")
    return SimulationSummary(
        trial_count=payload["trial_count"],
        seed=payload["seed"],
        histogram=tuple(
            HistogramBin(b["lower"], b["upper"], b["count"])
            for b in payload["histogram"]
        ),
        percentiles={float(q): v for q, v in payload["percentiles"].items()},
        min_completion=payload["min_completion"],
        max_completion=payload["max_completion"],
        mean_completion=payload["mean_completion"],
        recall_at={float(q): v for q, v in payload["recall_at"].items()},
    )


@dataclass(frozen=True)
class AnalyticComparison:
    """Simulated completion versus the independent-sightings model.

    The analytic side feeds the corpus's observed prevalences to the
    collector's scan approximations; the empirical side comes from the
    shuffles. Scanning without replacement finds things slightly sooner,
    so the analytic figures sit at or above the empirical ones, and the
    gap shrinks as completion becomes small next to the corpus.
    """

    corpus_documents: int
    topics_present: int
    empirical_median: int
    analytic_median: int
    median_relative_difference: float
    empirical_mean: float
    analytic_mean: float
    mean_relative_difference: float


def scan_accession(corpus: Corpus) -> CoverageCurve:
    """Coverage curve for the corpus's own document order."""
    seen: set[int] = set()
    points: list[tuple[int, int]] = []
    for position, doc in enumerate(corpus.documents, start=1):
        before = len(seen)
        seen.update(doc.topics)
        if len(seen) > before:
            points.append((position, len(seen)))
    return CoverageCurve(
        points=tuple(points),
        total_documents=len(corpus.documents),
        total_topics_present=len(corpus.topics_present),
    )


def shuffle_trial(corpus: Corpus, trial_seed: int) -> TrialResult:
    """Scan the corpus in one uniformly random order.

    The order is a Fisher-Yates permutation driven by ``trial_seed``,
    generated lazily: position i is fixed by swapping in a uniform choice
    from the remaining documents, scanned, and the loop stops once every
    topic present has been seen. Only topic sets are read; document
    payloads never matter here.
    """
    docs = corpus.documents
    n = len(docs)
    needed = len(corpus.topics_present)
    rng = SplitMix64(trial_seed)
    order = list(range(n))
    first_seen: dict[int, int] = {}
    completion = n
    for i in range(n):
        remaining = n - i
        if remaining > 1:
            j = i + rng.next_below(remaining)
            order[i], order[j] = order[j], order[i]
        position = i + 1
        for topic in docs[order[i]].topics:
            if topic not in first_seen:
                first_seen[topic] = position
        if len(first_seen) == needed:
            completion = position
            break
    absent = tuple(sorted(set(range(corpus.topic_count)) - corpus.topics_present))
    return TrialResult(
        completion_position=completion, first_seen=first_seen, absent_topics=absent
    )


def completion_topics(result: TrialResult) -> tuple[int, ...]:
    """Topics first sighted exactly at the completion position (the ones
    that kept the scan going; usually a single rare topic)."""
    return tuple(
        sorted(
            t
            for t, pos in result.first_seen.items()
            if pos == result.completion_position
        )
    )


def run_trials(
    corpus: Corpus, trial_count: int, master_seed: int, workers: int = 1
) -> tuple[TrialResult, ...]:
    """Run independent shuffle trials; trial i is keyed by (master_seed, i).

    ``workers`` only sets the thread pool size; results are ordered by
    trial index, so the output never depends on it.
    """
    if trial_count < 1:
        raise ValueError(f"trial_count must be >= 1, got {trial_count}")
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")

    def one(index: int) -> TrialResult:
        return shuffle_trial(corpus, derive_key(master_seed, index))

    if workers == 1:
        return tuple(one(i) for i in range(trial_count))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return tuple(pool.map(one, range(trial_count)))


def _nearest_rank(sorted_values: Sequence[int], q: float) -> int:
    rank = max(1, math.ceil(q * len(sorted_values)))
    return sorted_values[rank - 1]


def _equal_width_histogram(
    completions: Sequence[int], bin_count: int
) -> tuple[HistogramBin, ...]:
    lo = float(min(completions))
    hi = float(max(completions))
    width = (hi - lo) / bin_count
    counts = [0] * bin_count
    for value in completions:
        if width == 0.0:
            index = 0
        else:
            index = min(int((value - lo) / width), bin_count - 1)
        counts[index] += 1
    return tuple(
        HistogramBin(lower=lo + k * width, upper=lo + (k + 1) * width, count=counts[k])
        for k in range(bin_count)
    )


def run_shuffles(
    corpus: Corpus,
    trial_count: int,
    master_seed: int,
    quantiles: Sequence[float] = DEFAULT_QUANTILES,
    bin_count: int = DEFAULT_BIN_COUNT,
    workers: int = 1,
) -> SimulationSummary:
    """Shuffle, scan, and summarize.

    Builds an equal-width histogram of the completion positions over
    [min, max], nearest-rank percentiles for the requested quantiles,
    and the corresponding recall fractions.
    """
    quantiles = tuple(quantiles)
    if not quantiles:
        raise ValueError("need at least one quantile")
    for q in quantiles:
        if not 0.0 < q < 1.0:
            raise ValueError(f"quantiles must be in (0, 1), got {q}")
    if bin_count < 1:
        raise ValueError(f"bin_count must be >= 1, got {bin_count}")

    results = run_trials(corpus, trial_count, master_seed, workers=workers)
    completions = sorted(r.completion_position for r in results)
    percentiles = {q: _nearest_rank(completions, q) for q in quantiles}
    n_docs = len(corpus.documents)
    return SimulationSummary(
        trial_count=trial_count,
        seed=master_seed,
        histogram=_equal_width_histogram(completions, bin_count),
        percentiles=percentiles,
        min_completion=completions[0],
        max_completion=completions[-1],
        mean_completion=sum(completions) / trial_count,
        recall_at={q: percentiles[q] / n_docs for q in quantiles},
    )


def completion_vs_analytic(
    corpus: Corpus, summary: SimulationSummary
) -> AnalyticComparison:
    """Put simulated completion next to the independent-sightings model.

    Requires the summary to carry the 0.5 quantile (the default set
    does). The analytic median inverts the with-replacement coverage
    product at the corpus's observed prevalences; the analytic mean is
    the collector expectation for the same prevalence vector.
    """
    if 0.5 not in summary.percentiles:
        raise ValueError("summary must include the 0.5 quantile for comparison")
    prevalences = [
        fraction for _, fraction in sorted(corpus.empirical_prevalences().items())
    ]
    analytic_median = completion_quantile(prevalences, 0.5)
    analytic_mean = expected_draws_unequal_sum(prevalences, 1e-9)
    empirical_median = summary.percentiles[0.5]
    empirical_mean = summary.mean_completion
    return AnalyticComparison(
        corpus_documents=len(corpus.documents),
        topics_present=len(corpus.topics_present),
        empirical_median=empirical_median,
        analytic_median=analytic_median,
        median_relative_difference=abs(analytic_median - empirical_median)
        / empirical_median,
        empirical_mean=empirical_mean,
        analytic_mean=analytic_mean,
        mean_relative_difference=abs(analytic_mean - empirical_mean) / empirical_mean,
    )
