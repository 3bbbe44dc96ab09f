"""Word-frequency distributions and Jensen-Shannon divergence between domains.

Each domain pair gets its own shared support: the top-k non-stopword words by
combined raw frequency in both corpora, ties broken alphabetically.

Example:
    matrix = divergence_matrix(corpora, DivergenceConfig(top_k=5000))
    matrix.get("books", "dvd").jsd
"""

from __future__ import annotations

import logging
import re
from collections import Counter
from collections.abc import Sequence
from itertools import combinations
from typing import Optional

import numpy as np

from robustness_metrics.config.divergence_config import DivergenceConfig
from robustness_metrics.core.corpus_loader import load_stopwords
from robustness_metrics.core.errors import (
    DataError,
    EmptyAfterFilteringError,
    SupportMismatchError,
    TooFewDomainsError,
)
from robustness_metrics.models.divergence import (
    Corpus,
    DivergenceFailure,
    DivergenceMatrix,
    DivergenceResult,
    TokenDistribution,
)

logger = logging.getLogger(__name__)

# Maximal runs of letters and digits; underscore counts as a separator
TOKEN_PATTERN = re.compile(r"[^\W_]+")

_LOG = {"2": np.log2, "e": np.log}
_MAX_JSD = {"2": 1.0, "e": float(np.log(2.0))}


def tokenize(text: str, min_token_length: int = 1) -> list[str]:
    """Lowercase text and split it on runs of non-alphanumeric characters.

    Example:
        tokenize("don't stop") -> ["don", "t", "stop"]
    """
    return [
        token for token in TOKEN_PATTERN.findall(text.lower()) if len(token) >= min_token_length
    ]


class TokenCounter:
    """Per-corpus token counts, computed once per (domain, min_token_length)."""

    def __init__(self, min_token_length: int = 1):
        self.min_token_length = min_token_length
        self._cache: dict[str, Counter[str]] = {}

    def count(self, corpus: Corpus) -> Counter[str]:
        """Get the token counts of a corpus."""
        counts = self._cache.get(corpus.domain)
        if counts is None:
            counts = Counter()
            for document in corpus.documents:
                counts.update(tokenize(document, self.min_token_length))
            self._cache[corpus.domain] = counts
            logger.debug(
                f"Corpus {corpus.domain}: {sum(counts.values())} tokens, {len(counts)} types"
            )
        return counts


def stopword_set(config: DivergenceConfig) -> frozenset[str]:
    """Stopwords excluded under the given config.

    Returns:
        Empty set when stopwords are disabled, otherwise the user list or
        the bundled English list.
    """
    if not config.use_stopwords:
        return frozenset()
    return load_stopwords(config.stopwords_path)


def _restrict(
    counts: Counter[str], support: Sequence[str], domain: str
) -> TokenDistribution:
    values = np.array([counts.get(word, 0) for word in support], dtype=float)
    total = values.sum()
    if total == 0:
        raise EmptyAfterFilteringError(domain)
    return TokenDistribution(support=tuple(support), probs=tuple((values / total).tolist()))


def _pair_from_counts(
    a: Corpus,
    counts_a: Counter[str],
    b: Corpus,
    counts_b: Counter[str],
    top_k: int,
    stopwords: frozenset[str],
) -> tuple[TokenDistribution, TokenDistribution]:
    for corpus, counts in ((a, counts_a), (b, counts_b)):
        if not any(word not in stopwords for word in counts):
            raise EmptyAfterFilteringError(corpus.domain)

    combined = counts_a + counts_b
    ranked = sorted(
        (word for word in combined if word not in stopwords),
        key=lambda word: (-combined[word], word),
    )
    support = ranked[:top_k]
    return _restrict(counts_a, support, a.domain), _restrict(counts_b, support, b.domain)


def pair_distributions(
    a: Corpus,
    b: Corpus,
    config: Optional[DivergenceConfig] = None,  # noqa: UP045
) -> tuple[TokenDistribution, TokenDistribution]:
    """Word distributions of two corpora over their shared top-k support.

    Raises:
        EmptyAfterFilteringError: A corpus has no probability mass left
    """
    config = config or DivergenceConfig()
    counter = TokenCounter(config.min_token_length)
    return _pair_from_counts(
        a, counter.count(a), b, counter.count(b), config.top_k, stopword_set(config)
    )


def js_divergence(p: TokenDistribution, q: TokenDistribution, log_base: str = "2") -> float:
    """Jensen-Shannon divergence, 0.5 KL(P||M) + 0.5 KL(Q||M) with M = (P + Q) / 2.

    Terms with zero probability contribute nothing, so no smoothing is applied.

    Raises:
        SupportMismatchError: Supports differ (in content or order)
    """
    if p.support != q.support:
        raise SupportMismatchError("distributions must share an identically ordered support")
    if log_base not in _LOG:
        raise ValueError(f"log_base must be '2' or 'e', got {log_base!r}")
    log = _LOG[log_base]

    pv = np.asarray(p.probs, dtype=float)
    qv = np.asarray(q.probs, dtype=float)
    m = 0.5 * (pv + qv)

    def kl_to_m(v: np.ndarray) -> float:
        mask = v > 0
        return float(np.sum(v[mask] * log(v[mask] / m[mask])))

    jsd = 0.5 * (kl_to_m(pv) + kl_to_m(qv))
    return min(max(jsd, 0.0), _MAX_JSD[log_base])


def divergence_matrix(
    corpora: Sequence[Corpus],
    config: Optional[DivergenceConfig] = None,  # noqa: UP045
) -> DivergenceMatrix:
    """Divergence of every unordered pair of domain corpora.

    A pair that fails is recorded in the matrix's failures and the rest are
    still computed.

    Raises:
        TooFewDomainsError: Fewer than two corpora
    """
    config = config or DivergenceConfig()
    if len(corpora) < 2:
        raise TooFewDomainsError(f"divergence needs at least 2 corpora, got {len(corpora)}")

    stopwords = stopword_set(config)
    counter = TokenCounter(config.min_token_length)
    ordered = sorted(corpora, key=lambda corpus: corpus.domain)

    results = []
    failures = []
    for a, b in combinations(ordered, 2):
        pair = (a.domain, b.domain)
        try:
            p, q = _pair_from_counts(
                a, counter.count(a), b, counter.count(b), config.top_k, stopwords
            )
            jsd = js_divergence(p, q, config.log_base)
        except DataError as e:
            logger.warning(f"Divergence {pair[0]}/{pair[1]} failed: {e}")
            failures.append(DivergenceFailure(pair=pair, error=str(e)))
            continue
        logger.debug(f"JSD {pair[0]}/{pair[1]} = {jsd:.6f} over {len(p.support)} words")
        results.append(
            DivergenceResult(
                pair=pair, jsd=jsd, vocab_size_used=len(p.support), log_base=config.log_base
            )
        )

    logger.info(f"Computed {len(results)} divergence(s), {len(failures)} failure(s)")
    return DivergenceMatrix(
        results=results,
        failures=failures,
        corpus_sources={c.domain: c.source for c in ordered if c.source is not None},
    )
