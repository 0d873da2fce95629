"""Corpus ingestion and storage.

Raw document sources (most importantly MediaWiki XML exports) are
normalized into :class:`Document` records: a stable integer id, a title,
and a deduplicated set of lowercase tokens. Documents live in a sharded
:class:`Corpus`; category membership is kept separately in a
:class:`CategoryIndex` that maps a category name to the ids of its
*direct* members only.
"""

from __future__ import annotations

import json
import re
import string
import unicodedata
import xml.etree.ElementTree as ET
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Iterator
from urllib.parse import quote, unquote

__all__ = [
    "Document",
    "Corpus",
    "CategoryIndex",
    "IngestError",
    "CorpusFormatError",
    "tokenize",
    "ingest_wiki_dump",
    "store_corpus",
    "load_corpus",
]


class IngestError(Exception):
    """Raised when a raw document source cannot be parsed."""


class CorpusFormatError(Exception):
    """Raised when a stored corpus is missing or corrupt."""


_ASCII_PUNCT = set(string.punctuation)


def _is_punct(ch: str) -> bool:
    return ch in _ASCII_PUNCT or unicodedata.category(ch).startswith("P")


def _strip_punct(piece: str) -> str:
    start, end = 0, len(piece)
    while start < end and _is_punct(piece[start]):
        start += 1
    while end > start and _is_punct(piece[end - 1]):
        end -= 1
    return piece[start:end]


def tokenize(text: str) -> set[str]:
    """Split ``text`` into its set of normalized tokens.

    Pieces are split on whitespace; leading and trailing punctuation is
    stripped from each piece (interior punctuation survives, so ``2.0``
    and ``don't`` stay intact); everything is lowercased; pieces that
    become empty are dropped. The result is a set: each token appears
    once regardless of frequency. No stemming or lemmatization.
    """
    tokens = set()
    for piece in text.split():
        stripped = _strip_punct(piece)
        if stripped:
            tokens.add(stripped.lower())
    return tokens


@dataclass(frozen=True)
class Document:
    """One normalized document: stable id, title, Boolean token set."""

    id: int
    title: str
    tokens: frozenset[str]


@dataclass(frozen=True)
class Corpus:
    """An immutable collection of documents partitioned into shards.

    Shard assignment is ``id % shard_count`` so the on-disk layout is
    deterministic and language-neutral. The corpus is safe to share
    read-only across any number of workers.
    """

    shard_count: int
    _by_id: dict[int, Document] = field(repr=False)

    @classmethod
    def from_documents(cls, documents: Iterable[Document], shard_count: int = 1000) -> "Corpus":
        if shard_count < 1:
            raise ValueError("shard_count must be >= 1")
        by_id: dict[int, Document] = {}
        for doc in documents:
            if doc.id in by_id:
                raise ValueError(f"duplicate document id {doc.id}")
            by_id[doc.id] = doc
        return cls(shard_count=shard_count, _by_id=by_id)

    @property
    def doc_count(self) -> int:
        return len(self._by_id)

    def __len__(self) -> int:
        return len(self._by_id)

    def __contains__(self, doc_id: int) -> bool:
        return doc_id in self._by_id

    def __iter__(self) -> Iterator[Document]:
        """Iterate documents in ascending id order."""
        for doc_id in sorted(self._by_id):
            yield self._by_id[doc_id]

    def get(self, doc_id: int) -> Document:
        try:
            return self._by_id[doc_id]
        except KeyError:
            raise KeyError(f"no document with id {doc_id}") from None

    def ids(self) -> list[int]:
        return sorted(self._by_id)

    def shard_of(self, doc_id: int) -> int:
        return doc_id % self.shard_count

    def shard_documents(self, shard: int) -> list[Document]:
        """Documents of one shard, ascending by id."""
        if not 0 <= shard < self.shard_count:
            raise ValueError(f"shard {shard} out of range 0..{self.shard_count - 1}")
        return [self._by_id[i] for i in sorted(self._by_id) if i % self.shard_count == shard]


@dataclass(frozen=True)
class CategoryIndex:
    """Category name -> ids of documents tagged with it directly.

    Membership through subcategories is deliberately *not* folded in;
    subcategory trees are too unreliable to trust for training data.
    """

    _members: dict[str, frozenset[int]] = field(repr=False)

    @classmethod
    def from_mapping(cls, mapping: dict[str, Iterable[int]]) -> "CategoryIndex":
        return cls(_members={name: frozenset(ids) for name, ids in mapping.items()})

    def categories(self) -> list[str]:
        return sorted(self._members)

    def __contains__(self, name: str) -> bool:
        return name in self._members

    def members(self, name: str) -> frozenset[int]:
        try:
            return self._members[name]
        except KeyError:
            raise KeyError(f"unknown category {name!r}") from None

    def items(self) -> list[tuple[str, frozenset[int]]]:
        return [(name, self._members[name]) for name in sorted(self._members)]

    def validate_against(self, corpus: Corpus) -> None:
        """Check that every referenced id resolves to a stored document."""
        for name, ids in self._members.items():
            for doc_id in ids:
                if doc_id not in corpus:
                    raise ValueError(f"category {name!r} references unknown document id {doc_id}")


# --- MediaWiki dump ingestion ------------------------------------------------

_CATEGORY_RE = re.compile(r"\[\[\s*Category\s*:\s*([^\]|#]+)", re.IGNORECASE)
_HEADING_RE = re.compile(r"^\s*=+\s*(.*?)\s*=+\s*$")
_REDIRECT_RE = re.compile(r"^\s*#REDIRECT", re.IGNORECASE)
_DISAMBIG_RE = re.compile(r"\{\{\s*(disambiguation|disambig|dab)\s*[|}]", re.IGNORECASE)


def _local_name(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _direct_child(elem: ET.Element, name: str) -> ET.Element | None:
    for child in elem:
        if _local_name(child.tag) == name:
            return child
    return None


def _page_text(page: ET.Element) -> str:
    revision = _direct_child(page, "revision")
    if revision is None:
        return ""
    text = _direct_child(revision, "text")
    return text.text or "" if text is not None else ""


def _normalize_title(raw: str) -> str:
    return " ".join(raw.split())


def _normalize_category(raw: str) -> str:
    return " ".join(raw.replace("_", " ").split())


def extract_categories(text: str) -> list[str]:
    """Category names linked from wikitext, normalized, in order of appearance."""
    seen = []
    for match in _CATEGORY_RE.finditer(text):
        name = _normalize_category(match.group(1))
        if name and name not in seen:
            seen.append(name)
    return seen


def truncate_at_references(text: str) -> str:
    """Drop the first heading titled "references" and everything after it.

    The match is case-insensitive on the heading title with surrounding
    ``=`` markers and whitespace ignored. Articles without such a heading
    are kept whole.
    """
    lines = text.splitlines(keepends=True)
    for i, line in enumerate(lines):
        m = _HEADING_RE.match(line)
        if m and m.group(1).strip().lower() == "references":
            return "".join(lines[:i])
    return text


class _CountingReader:
    """File wrapper that tracks bytes consumed, for parse-error reporting."""

    def __init__(self, stream: IO[bytes]):
        self._stream = stream
        self.bytes_read = 0

    def read(self, size: int = -1) -> bytes:
        data = self._stream.read(size)
        self.bytes_read += len(data)
        return data


def ingest_wiki_dump(
    stream: IO[bytes],
    min_bytes: int = 300,
    shard_count: int = 1000,
    skipped: Counter | None = None,
) -> tuple[Corpus, CategoryIndex]:
    """Ingest a MediaWiki pages XML export into a corpus and category index.

    Only article pages (namespace 0) are kept; redirects and pages
    carrying a disambiguation template are skipped. Category links are
    extracted from the full wikitext, then the body is truncated at its
    "References" heading and tokenized. Articles whose retained body is
    shorter than ``min_bytes`` (UTF-8 bytes, measured after truncation)
    are excluded.

    ``skipped``, when given, is filled with per-reason skip counts
    (``namespace:N``, ``redirect``, ``disambiguation``,
    ``below_min_bytes``).

    Raises :class:`IngestError` on malformed XML, naming the byte offset
    reached in the input.
    """
    if skipped is None:
        skipped = Counter()
    reader = _CountingReader(stream)
    documents: list[Document] = []
    categories: dict[str, set[int]] = {}
    try:
        for _, elem in ET.iterparse(reader, events=("end",)):
            if _local_name(elem.tag) != "page":
                continue
            _ingest_page(elem, min_bytes, documents, categories, skipped)
            elem.clear()
    except ET.ParseError as exc:
        raise IngestError(f"malformed XML near byte {reader.bytes_read}: {exc}") from exc

    corpus = Corpus.from_documents(documents, shard_count=shard_count)
    kept = {doc.id for doc in documents}
    index = CategoryIndex.from_mapping(
        {name: ids & kept for name, ids in categories.items() if ids & kept}
    )
    return corpus, index


def _ingest_page(
    page: ET.Element,
    min_bytes: int,
    documents: list[Document],
    categories: dict[str, set[int]],
    skipped: Counter,
) -> None:
    ns_elem = _direct_child(page, "ns")
    ns = ns_elem.text.strip() if ns_elem is not None and ns_elem.text else "0"
    if ns != "0":
        skipped[f"namespace:{ns}"] += 1
        return

    text = _page_text(page)
    if _direct_child(page, "redirect") is not None or _REDIRECT_RE.match(text):
        skipped["redirect"] += 1
        return
    if _DISAMBIG_RE.search(text):
        skipped["disambiguation"] += 1
        return

    id_elem = _direct_child(page, "id")
    title_elem = _direct_child(page, "title")
    if id_elem is None or id_elem.text is None or title_elem is None or title_elem.text is None:
        skipped["incomplete_page"] += 1
        return
    doc_id = int(id_elem.text.strip())
    title = _normalize_title(title_elem.text)

    page_categories = extract_categories(text)
    body = truncate_at_references(text)
    if len(body.encode("utf-8")) < min_bytes:
        skipped["below_min_bytes"] += 1
        return

    documents.append(Document(id=doc_id, title=title, tokens=frozenset(tokenize(body))))
    for name in page_categories:
        categories.setdefault(name, set()).add(doc_id)


# --- On-disk store ------------------------------------------------------------

_FORMAT_VERSION = 1


def _shard_path(root: Path, shard: int) -> Path:
    return root / "shards" / f"shard-{shard:05d}.tsv"


def _category_path(root: Path, name: str) -> Path:
    return root / "categories" / (quote(name, safe="") + ".txt")


def store_corpus(corpus: Corpus, categories: CategoryIndex, path: str | Path) -> None:
    """Write a corpus and its category index under ``path``.

    Layout: ``manifest.json`` with counts, one newline-delimited shard
    file per shard (``id<TAB>title<TAB>space-joined sorted tokens``),
    and one file per category listing member ids ascending. Everything
    is sorted, so storing the same corpus twice yields identical bytes.
    """
    root = Path(path)
    (root / "shards").mkdir(parents=True, exist_ok=True)
    (root / "categories").mkdir(parents=True, exist_ok=True)

    manifest = {
        "format_version": _FORMAT_VERSION,
        "doc_count": corpus.doc_count,
        "shard_count": corpus.shard_count,
    }
    (root / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")

    for shard in range(corpus.shard_count):
        lines = []
        for doc in corpus.shard_documents(shard):
            if "\t" in doc.title or "\n" in doc.title:
                raise CorpusFormatError(f"document {doc.id}: title contains tab or newline")
            lines.append(f"{doc.id}\t{doc.title}\t{' '.join(sorted(doc.tokens))}\n")
        _shard_path(root, shard).write_text("".join(lines), encoding="utf-8")

    for name, ids in categories.items():
        text = "".join(f"{doc_id}\n" for doc_id in sorted(ids))
        _category_path(root, name).write_text(text, encoding="utf-8")


def load_corpus(path: str | Path) -> tuple[Corpus, CategoryIndex]:
    """Load a corpus stored by :func:`store_corpus`.

    Raises :class:`CorpusFormatError` naming the offending shard when a
    shard file is missing or malformed.
    """
    root = Path(path)
    manifest_path = root / "manifest.json"
    if not manifest_path.is_file():
        raise CorpusFormatError(f"missing manifest: {manifest_path}")
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    if manifest.get("format_version") != _FORMAT_VERSION:
        raise CorpusFormatError(f"unsupported format version {manifest.get('format_version')!r}")
    shard_count = int(manifest["shard_count"])

    documents: list[Document] = []
    for shard in range(shard_count):
        shard_file = _shard_path(root, shard)
        if not shard_file.is_file():
            raise CorpusFormatError(f"missing shard: {shard_file}")
        for lineno, line in enumerate(shard_file.read_text(encoding="utf-8").splitlines(), 1):
            parts = line.split("\t")
            if len(parts) != 3:
                raise CorpusFormatError(f"corrupt shard {shard_file} at line {lineno}")
            raw_id, title, token_text = parts
            try:
                doc_id = int(raw_id)
            except ValueError:
                raise CorpusFormatError(
                    f"corrupt shard {shard_file} at line {lineno}: bad id {raw_id!r}"
                ) from None
            if doc_id % shard_count != shard:
                raise CorpusFormatError(
                    f"corrupt shard {shard_file} at line {lineno}: id {doc_id} belongs elsewhere"
                )
            documents.append(Document(id=doc_id, title=title, tokens=frozenset(token_text.split())))

    corpus = Corpus.from_documents(documents, shard_count=shard_count)
    if corpus.doc_count != int(manifest["doc_count"]):
        raise CorpusFormatError(
            f"manifest doc_count {manifest['doc_count']} != stored {corpus.doc_count}"
        )

    mapping: dict[str, list[int]] = {}
    categories_dir = root / "categories"
    if categories_dir.is_dir():
        for cat_file in sorted(categories_dir.glob("*.txt")):
            name = unquote(cat_file.stem)
            ids = [int(line) for line in cat_file.read_text(encoding="utf-8").split()]
            mapping[name] = ids
    index = CategoryIndex.from_mapping(mapping)
    index.validate_against(corpus)
    return corpus, index
