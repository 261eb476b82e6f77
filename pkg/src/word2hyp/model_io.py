"""Embedding and checkpoint files.

Embeddings use the Word2Vec text and binary formats so other tools can read
them.  Text: a ``"V d"`` header line, then ``word v1 ... vd`` per line.
Binary: the same header line, then per record the word, one space, ``d``
little-endian float32 values and a newline.  Training metadata goes to a
``key=value`` sidecar at ``path + ".meta"``.
"""

import os

import numpy as np

CHECKPOINT_MAGIC = b"word2hyp-checkpoint 1\n"


class FormatError(ValueError):
    def __init__(self, path, lineno, message):
        where = f"{path}:{lineno}" if lineno is not None else str(path)
        super().__init__(f"{where}: {message}")
        self.lineno = lineno


def _check_words(words, n_rows):
    if len(words) != n_rows:
        raise ValueError(f"{len(words)} words for {n_rows} vectors")
    if len(set(words)) != len(words):
        raise ValueError("duplicate words")
    for w in words:
        if not w or any(ch.isspace() for ch in w):
            raise ValueError(f"word {w!r} is empty or contains whitespace")


def save_text(matrix, words, path):
    matrix = np.asarray(matrix)
    _check_words(words, len(matrix))
    V, d = matrix.shape if matrix.ndim == 2 else (0, 0)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{V} {d}\n")
        for word, row in zip(words, matrix):
            fh.write(word + " " + " ".join(f"{v:.9g}" for v in row.tolist()) + "\n")


def _parse_header(line, path):
    fields = line.split()
    if len(fields) != 2:
        raise FormatError(path, 1, f"malformed header {line.strip()!r}")
    try:
        V, d = int(fields[0]), int(fields[1])
    except ValueError:
        raise FormatError(path, 1, f"malformed header {line.strip()!r}") from None
    if V < 0 or d < 0:
        raise FormatError(path, 1, "negative sizes in header")
    return V, d


def load_text(path, dtype=np.float32):
    """Returns ``(matrix, words)``.  Errors name the offending line."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline()
        if not header:
            raise FormatError(path, 1, "empty file")
        V, d = _parse_header(header, path)
        matrix = np.empty((V, d), dtype=dtype)
        words = []
        seen = set()
        lineno = 1
        for lineno, line in enumerate(fh, 2):
            if not line.strip():
                continue
            if len(words) == V:
                raise FormatError(path, lineno, f"more than {V} records")
            fields = line.split()
            if len(fields) != d + 1:
                raise FormatError(path, lineno, f"expected {d} values, got {len(fields) - 1}")
            word = fields[0]
            if word in seen:
                raise FormatError(path, lineno, f"duplicate word {word!r}")
            try:
                matrix[len(words)] = [float(v) for v in fields[1:]]
            except ValueError:
                raise FormatError(path, lineno, "non-numeric value") from None
            seen.add(word)
            words.append(word)
        if len(words) != V:
            raise FormatError(path, lineno + 1,
                              f"unexpected end of file: {len(words)} of {V} records")
    return matrix, words


def save_binary(matrix, words, path):
    matrix = np.asarray(matrix, dtype="<f4")
    _check_words(words, len(matrix))
    V, d = matrix.shape if matrix.ndim == 2 else (0, 0)
    with open(path, "wb") as fh:
        _write_binary_block(fh, matrix.reshape(V, d), words)


def _write_binary_block(fh, matrix, words):
    V, d = matrix.shape
    fh.write(f"{V} {d}\n".encode())
    for word, row in zip(words, matrix):
        fh.write(word.encode("utf-8") + b" ")
        fh.write(np.asarray(row, dtype="<f4").tobytes())
        fh.write(b"\n")


def _read_binary_block(buf, pos, path):
    end = buf.find(b"\n", pos)
    if end < 0:
        raise FormatError(path, 1, "missing header")
    V, d = _parse_header(buf[pos:end].decode("ascii", "replace"), path)
    pos = end + 1
    matrix = np.empty((V, d), dtype=np.float32)
    words = []
    seen = set()
    nbytes = 4 * d
    for rec in range(V):
        while pos < len(buf) and buf[pos:pos + 1] in (b"\n", b"\r"):
            pos += 1
        space = buf.find(b" ", pos)
        if space < 0:
            raise FormatError(path, rec + 2, "truncated file: missing word")
        word = buf[pos:space].decode("utf-8")
        if not word:
            raise FormatError(path, rec + 2, "empty word")
        if word in seen:
            raise FormatError(path, rec + 2, f"duplicate word {word!r}")
        pos = space + 1
        if pos + nbytes > len(buf):
            raise FormatError(path, rec + 2, f"truncated file in record {word!r}")
        matrix[rec] = np.frombuffer(buf, dtype="<f4", count=d, offset=pos)
        pos += nbytes
        seen.add(word)
        words.append(word)
    if pos < len(buf) and buf[pos:pos + 1] == b"\n":
        pos += 1
    return matrix, words, pos


def load_binary(path):
    with open(path, "rb") as fh:
        buf = fh.read()
    if not buf:
        raise FormatError(path, 1, "empty file")
    matrix, words, _ = _read_binary_block(buf, 0, path)
    return matrix, words


def is_binary(path):
    """Guess the embedding format from the first record."""
    with open(path, "rb") as fh:
        fh.readline()
        first = fh.readline()
    try:
        fields = first.decode("utf-8").split()
        [float(v) for v in fields[1:]]
    except (UnicodeDecodeError, ValueError):
        return True
    return False


def load_embedding_file(path, binary=None):
    if binary is None:
        binary = is_binary(path)
    return load_binary(path) if binary else load_text(path)


# ---------------------------------------------------------------------------
# metadata, counts, checkpoints
# ---------------------------------------------------------------------------

def write_metadata(path, meta):
    with open(path, "w", encoding="utf-8") as fh:
        for key, value in meta.items():
            fh.write(f"{key}={value}\n")


def read_metadata(path):
    meta = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line and not line.startswith("#"):
                key, _, value = line.partition("=")
                meta[key] = value
    return meta


def save_counts(vocab, path):
    with open(path, "w", encoding="utf-8") as fh:
        for word, count in zip(vocab.words, vocab.counts.tolist()):
            fh.write(f"{word}\t{count}\n")


def load_counts(path):
    counts = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            fields = line.split()
            if len(fields) != 2:
                raise FormatError(path, lineno, "expected 'word count'")
            try:
                counts[fields[0]] = int(fields[1])
            except ValueError:
                raise FormatError(path, lineno, "non-integer count") from None
    return counts


def save_embeddings(params, path, binary=False):
    """Write the emitted vectors plus the ``.meta`` sidecar."""
    words = params.vocab.words
    if binary:
        save_binary(params.emit, words, path)
    else:
        save_text(params.emit, words, path)
    meta = params.metadata()
    meta["format"] = "binary" if binary else "text"
    write_metadata(os.fspath(path) + ".meta", meta)


def save_checkpoint(params, path):
    """Both arrays, so training can resume or the other role can be emitted later."""
    words = params.vocab.words
    with open(path, "wb") as fh:
        fh.write(CHECKPOINT_MAGIC)
        fh.write(f"mode={params.mode} architecture={params.architecture}\n".encode())
        fh.write(("counts=" + " ".join(map(str, params.vocab.counts.tolist())) + "\n").encode())
        _write_binary_block(fh, np.asarray(params.emit, dtype="<f4"), words)
        _write_binary_block(fh, np.asarray(params.ctx, dtype="<f4"), words)


def load_checkpoint(path):
    from .corpus import Vocabulary
    from .trainer import ModelParams

    with open(path, "rb") as fh:
        buf = fh.read()
    if not buf.startswith(CHECKPOINT_MAGIC):
        raise FormatError(path, 1, "not a word2hyp checkpoint")
    pos = len(CHECKPOINT_MAGIC)
    lines = []
    for _ in range(2):
        end = buf.index(b"\n", pos)
        lines.append(buf[pos:end].decode())
        pos = end + 1
    tags = dict(kv.split("=", 1) for kv in lines[0].split())
    counts = [int(c) for c in lines[1][len("counts="):].split()]
    emit, words, pos = _read_binary_block(buf, pos, path)
    ctx, words2, _ = _read_binary_block(buf, pos, path)
    if words != words2:
        raise FormatError(path, None, "arrays disagree on the vocabulary")
    vocab = Vocabulary(words, counts)
    return ModelParams(emit=emit, ctx=ctx, mode=tags["mode"],
                       architecture=tags["architecture"], vocab=vocab)
