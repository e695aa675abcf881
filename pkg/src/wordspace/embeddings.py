"""Pretrained word-embedding I/O.

Two on-disk formats are supported:

binary (``.bin``):
  Header: one ASCII line ``"<vocab_count> <dimension>\\n"``.
  Body per record: the word's bytes up to a single ASCII space,
  then ``dimension`` 32-bit little-endian IEEE-754 floats, optionally
  followed by one ``\\n``.  Any newlines before a word are consumed.

text (``.txt`` / ``.vec``):
  Optional header line ``"<count> <dim>"`` (two integer tokens).
  Each subsequent line: ``word c1 c2 ... cdim`` with decimal reals,
  space-separated, UTF-8.  Without a header the dimension is inferred
  from the first data line.

Vectors are stored as float64 exactly as parsed; no normalization or
case folding happens here.  Tables are immutable after construction
and safe for concurrent reads.
"""

import re

import numpy as np

from .errors import (
    DataError,
    DuplicateWordError,
    FormatError,
    TruncationError,
)

_ROMAN_WORD = re.compile(r"[A-Za-z0-9_\-'.]+\Z")


class EmbeddingTable:
    """Immutable word -> vector map with a fixed dimension.

    Parameters
    ----------
    words : sequence of str
        Unique, non-empty keys (case-sensitive).
    matrix : (n, dimension) array
        One row per word; all entries must be finite.
    """

    def __init__(self, words, matrix):
        matrix = np.asarray(matrix, dtype=np.float64)
        if matrix.ndim != 2:
            raise DataError("embedding matrix must be 2-D (one row per word)")
        if matrix.shape[0] != len(words):
            raise DataError(
                f"row count {matrix.shape[0]} does not match word count {len(words)}"
            )
        if matrix.shape[1] < 1:
            raise DataError("embedding dimension must be a positive integer")
        if not np.all(np.isfinite(matrix)):
            raise DataError("embedding matrix contains non-finite values")
        index = {}
        for i, word in enumerate(words):
            if word == "":
                raise DataError("empty string is not a valid word key")
            if word in index:
                raise DuplicateWordError(word)
            index[word] = i
        self._words = tuple(words)
        self._index = index
        self._matrix = matrix
        self._matrix.setflags(write=False)

    @property
    def dimension(self):
        return self._matrix.shape[1]

    @property
    def words(self):
        return self._words

    def __len__(self):
        return len(self._words)

    def __contains__(self, word):
        return word in self._index

    def vector(self, word):
        """Return a read-only view of the vector stored for ``word``."""
        return self._matrix[self._index[word]]


def _is_int(token):
    try:
        int(token)
    except ValueError:
        return False
    return True


def _parse_header_tokens(tokens, where):
    if len(tokens) != 2:
        raise FormatError(f"malformed header in {where}: expected '<count> <dim>'")
    try:
        count, dim = int(tokens[0]), int(tokens[1])
    except ValueError:
        raise FormatError(f"malformed header in {where}: non-integer field") from None
    if count < 0 or dim < 1:
        raise FormatError(
            f"malformed header in {where}: count must be >= 0 and dimension >= 1"
        )
    return count, dim


def load_binary(source) -> EmbeddingTable:
    """Parse the binary embedding format.

    ``source`` is a file path or a binary file object.  The whole
    table is held in memory (float64), so the full 3M-word pretrained
    model takes several GB; filter afterwards with `filter_roman`.
    """
    if hasattr(source, "read"):
        buf = source.read()
    else:
        with open(source, "rb") as fh:
            buf = fh.read()

    newline = buf.find(b"\n")
    if newline < 0:
        raise FormatError("malformed header in binary embedding stream: no newline")
    try:
        header = buf[:newline].decode("ascii")
    except UnicodeDecodeError:
        raise FormatError(
            "malformed header in binary embedding stream: not ASCII"
        ) from None
    count, dim = _parse_header_tokens(header.split(), "binary embedding stream")

    words = []
    vectors = np.empty((count, dim), dtype=np.float64)
    seen = set()
    pos = newline + 1
    record_bytes = 4 * dim
    for i in range(count):
        while pos < len(buf) and buf[pos] == 0x0A:  # consume newlines between records
            pos += 1
        start = pos
        sep = buf.find(b" ", pos)
        if sep < 0:
            raise TruncationError(
                f"binary embedding stream ended while reading word {i + 1} of {count}",
                start,
            )
        raw_word = buf[pos:sep]
        if raw_word == b"":
            raise FormatError(f"empty word in binary embedding record {i + 1}")
        word = raw_word.decode("utf-8", errors="replace")
        if word in seen:
            raise DuplicateWordError(word)
        seen.add(word)
        pos = sep + 1
        if pos + record_bytes > len(buf):
            raise TruncationError(
                f"binary embedding stream ended inside the vector of {word!r}",
                start,
            )
        vectors[i] = np.frombuffer(buf, dtype="<f4", count=dim, offset=pos)
        pos += record_bytes
        words.append(word)
    return EmbeddingTable(words, vectors)


def load_text(source) -> EmbeddingTable:
    """Parse the text embedding format (optional header, UTF-8)."""
    if hasattr(source, "read"):
        data = source.read()
        if isinstance(data, bytes):
            data = data.decode("utf-8")
        raw_lines = data.splitlines()
    else:
        with open(source, "r", encoding="utf-8") as fh:
            raw_lines = fh.read().splitlines()

    words = []
    rows = []
    dim = None
    declared = None
    start_line = 1
    if raw_lines:
        first = raw_lines[0].split()
        if len(first) == 2 and all(_is_int(tok) for tok in first):
            # an integer pair can only be a header; validate it strictly
            declared = _parse_header_tokens(first, "text embedding stream")
            dim = declared[1]
            start_line = 2

    for lineno, line in enumerate(raw_lines[start_line - 1 :], start=start_line):
        fields = line.split()
        if not fields:
            continue
        word, comps = fields[0], fields[1:]
        if dim is None:
            dim = len(comps)
            if dim < 1:
                raise FormatError(
                    f"text embedding line {lineno}: no vector components"
                )
        if len(comps) != dim:
            raise FormatError(
                f"text embedding line {lineno}: expected {dim} components, "
                f"got {len(comps)}"
            )
        try:
            rows.append([float(c) for c in comps])
        except ValueError:
            raise FormatError(
                f"text embedding line {lineno}: non-numeric component"
            ) from None
        words.append(word)

    if declared is not None and len(words) != declared[0]:
        raise FormatError(
            f"text embedding stream declared {declared[0]} words, found {len(words)}"
        )
    if dim is None:
        raise FormatError("text embedding stream is empty and has no header")
    matrix = np.asarray(rows, dtype=np.float64).reshape(len(words), dim)
    return EmbeddingTable(words, matrix)


def save_text(table: EmbeddingTable, destination, header: bool = True):
    """Write ``table`` in the text format.

    Components are written with ``repr`` so a reload reproduces the
    stored float64 values exactly.
    """
    own = not hasattr(destination, "write")
    fh = open(destination, "w", encoding="utf-8") if own else destination
    try:
        if header:
            fh.write(f"{len(table)} {table.dimension}\n")
        for word in table.words:
            comps = " ".join(repr(float(v)) for v in table.vector(word))
            fh.write(f"{word} {comps}\n")
    finally:
        if own:
            fh.close()


def filter_roman(table: EmbeddingTable) -> EmbeddingTable:
    """Keep only words made of ASCII letters, digits and ``_ - ' .``."""
    keep = [w for w in table.words if _ROMAN_WORD.match(w)]
    matrix = np.empty((len(keep), table.dimension), dtype=np.float64)
    for i, w in enumerate(keep):
        matrix[i] = table.vector(w)
    return EmbeddingTable(keep, matrix)


def lookup_all(table: EmbeddingTable, words):
    """Map a word multiset to a matrix of distinct in-vocabulary vectors.

    Parameters
    ----------
    table : EmbeddingTable
    words : iterable of str
        Word occurrences, order-significant.

    Returns
    -------
    matrix : (dimension, k) float64 array
        One column per distinct in-vocabulary word, in first-occurrence
        order.
    counts : (k,) int64 array
        Occurrence count of each kept word.
    oov : list of str
        Distinct out-of-vocabulary words, in first-occurrence order.
    """
    kept = {}
    oov_seen = {}
    for w in words:
        if w in table:
            if w in kept:
                kept[w] += 1
            else:
                kept[w] = 1
        elif w not in oov_seen:
            oov_seen[w] = None
    matrix = np.empty((table.dimension, len(kept)), dtype=np.float64)
    counts = np.empty(len(kept), dtype=np.int64)
    for j, (w, c) in enumerate(kept.items()):
        matrix[:, j] = table.vector(w)
        counts[j] = c
    return matrix, counts, list(oov_seen)
