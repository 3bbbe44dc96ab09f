"""Loading of domain corpora and stopword lists."""

from __future__ import annotations

import json
import logging
from collections import defaultdict
from importlib import resources
from pathlib import Path
from typing import Optional, Union

from pydantic import ValidationError

from robustness_metrics.core.errors import EmptyInputError, SchemaError
from robustness_metrics.models.divergence import Corpus

logger = logging.getLogger(__name__)

BUNDLED_STOPWORDS = "stopwords_en.txt"
TEXT_SUFFIX = ".txt"


def _parse_stopwords(text: str) -> frozenset[str]:
    words = set()
    for line in text.splitlines():
        word = line.strip().lower()
        if word and not word.startswith("#"):
            words.add(word)
    return frozenset(words)


def load_stopwords(path: Optional[Union[str, Path]] = None) -> frozenset[str]:  # noqa: UP045
    """Load a stopword list, one word per line.

    Blank lines and lines starting with '#' are ignored; words are lowercased.

    Args:
        path: Stopword file, or None for the bundled English list

    Raises:
        FileNotFoundError: File does not exist
    """
    if path is None:
        text = (
            resources.files("robustness_metrics")
            .joinpath("data")
            .joinpath(BUNDLED_STOPWORDS)
            .read_text(encoding="utf-8")
        )
        return _parse_stopwords(text)

    file_path = Path(path)
    if not file_path.exists():
        raise FileNotFoundError(f"Stopword file not found: {file_path}")
    words = _parse_stopwords(file_path.read_text(encoding="utf-8"))
    logger.debug(f"Loaded {len(words)} stopwords from {file_path}")
    return words


def _load_directory(directory: Path) -> list[Corpus]:
    corpora = []
    for domain_dir in sorted(p for p in directory.iterdir() if p.is_dir()):
        files = sorted(domain_dir.glob(f"*{TEXT_SUFFIX}"))
        documents = [f.read_text(encoding="utf-8") for f in files]
        if not documents:
            logger.warning(f"Skipping {domain_dir}: no {TEXT_SUFFIX} documents")
            continue
        corpora.append(
            Corpus(domain=domain_dir.name, documents=documents, source=str(domain_dir))
        )
    return corpora


def _load_jsonl(path: Path) -> list[Corpus]:
    documents: dict[str, list[str]] = defaultdict(list)
    with path.open(encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                row = json.loads(line)
            except json.JSONDecodeError as e:
                raise SchemaError(line_number, f"invalid JSON: {e.msg}") from e
            if not isinstance(row, dict):
                raise SchemaError(line_number, "expected an object with domain and text")
            domain = row.get("domain")
            text = row.get("text")
            if not isinstance(domain, str) or not domain.strip():
                raise SchemaError(line_number, "missing or empty 'domain'")
            if not isinstance(text, str):
                raise SchemaError(line_number, "missing or non-string 'text'")
            documents[domain.strip()].append(text)

    try:
        return [
            Corpus(domain=domain, documents=texts, source=f"{path}#{domain}")
            for domain, texts in sorted(documents.items())
        ]
    except ValidationError as e:
        raise SchemaError(0, str(e)) from e


def load_corpora(path: Union[str, Path]) -> list[Corpus]:
    """Load domain corpora from a directory or a JSONL file.

    A directory holds one sub-directory per domain with one ``.txt`` document
    per file. A JSONL file holds ``{"domain": ..., "text": ...}`` lines.

    Returns:
        Corpora sorted by domain

    Raises:
        FileNotFoundError: Path does not exist
        SchemaError: Malformed JSONL line
        EmptyInputError: No documents found
    """
    corpus_path = Path(path)
    if not corpus_path.exists():
        raise FileNotFoundError(f"Corpus path not found: {corpus_path}")

    if corpus_path.is_dir():
        corpora = _load_directory(corpus_path)
    else:
        corpora = _load_jsonl(corpus_path)

    if not corpora:
        raise EmptyInputError(f"no corpora found in {corpus_path}")
    logger.info(f"Loaded {len(corpora)} corpora from {corpus_path}")
    return corpora
