import os
import re
import tempfile
from typing import List, Sequence, Tuple

import numpy as np
import pandas as pd

from .cli.logger import hsklogger
from .constants import URL_PATTERN, PUNCTUATION, EMOJI_RANGES
from .exceptions import HSKMalformedRowException, HSKDataException
from .types import RawPost, CleanPost, TaskSpec

_url_re = re.compile(URL_PATTERN)
_emoji_re = re.compile(
    "[" + "".join(
        re.escape(chr(lo)) if lo == hi else f"{re.escape(chr(lo))}-{re.escape(chr(hi))}"
        for lo, hi in EMOJI_RANGES
    ) + "]"
)
_punct_class = "[" + re.escape(PUNCTUATION) + "]"
_punct_run_re = re.compile(f"({_punct_class})\\1+")
_punct_re = re.compile(f"({_punct_class})")
_space_re = re.compile(r"\s+")
_parser_line_re = re.compile(r"line (\d+)")

CORPUS_HEADER = ["id", "text", "label"]
CLEAN_CORPUS_HEADER = ["id", "tokens", "label"]


def clean_text(raw: str) -> str:
    """
    Normalizes a social media post.

    URLs and pictographic code points are replaced by spaces, runs of the same punctuation
    mark collapse to one mark, every punctuation mark gets a single space in front of it
    and whitespace is collapsed. Case, stopwords and word forms are left untouched.
    """
    text = _url_re.sub(" ", raw)
    text = _emoji_re.sub(" ", text)
    text = _punct_run_re.sub(r"\1", text)
    text = _punct_re.sub(r" \1", text)
    return _space_re.sub(" ", text).strip()


def tokenize(cleaned: str) -> List[str]:
    if not cleaned:
        return []
    return [token for token in cleaned.split(" ") if token]


def preprocess_post(post: RawPost, task: TaskSpec) -> CleanPost:
    return CleanPost(
        id=post.id,
        tokens=tuple(tokenize(clean_text(post.text))),
        label_id=task.label_id(post.label),
        task=task.name,
    )


def _read_frame(fpath: str, header: List[str]) -> Tuple[pd.DataFrame, np.ndarray]:
    """
    Reads a corpus CSV into a frame of strings.

    Returns the frame with the physical line each row starts at, so that errors found later
    can point into the file even when quoted fields span several lines.
    """
    try:
        frame = pd.read_csv(fpath, dtype=str, keep_default_na=False, encoding="utf-8",
                            skip_blank_lines=False)
    except OSError as e:
        raise HSKDataException(f"Cannot read `{fpath}`. {e.strerror or e}.")
    except pd.errors.EmptyDataError:
        raise HSKMalformedRowException(fpath, 1, "The file is empty, a header is required.")
    except pd.errors.ParserError as e:
        match = _parser_line_re.search(str(e))
        raise HSKMalformedRowException(fpath, int(match.group(1)) if match else 0,
                                       str(e).strip())
    except UnicodeDecodeError as e:
        raise HSKDataException(f"Cannot decode `{fpath}` as UTF-8. {e}")
    found = [str(c).strip() for c in frame.columns]
    if found != header:
        raise HSKMalformedRowException(
            fpath, 1, f"Expected header `{','.join(header)}`, found `{','.join(found)}`.")
    if not isinstance(frame.index, pd.RangeIndex):
        # every row has one field more than the header, pandas took it as an index
        raise HSKMalformedRowException(
            fpath, 2, f"Expected {len(header)} fields, found {len(header) + 1}.")
    frame.columns = header
    newlines = frame.apply(lambda column: column.str.count("\n")).sum(axis=1).to_numpy()
    lines = 2 + np.arange(len(frame)) + np.concatenate([[0], np.cumsum(newlines)[:-1]]) \
        if len(frame) else np.zeros(0, dtype=int)
    short = frame.isna().any(axis=1).to_numpy()
    if short.any():
        first = int(np.argmax(short))
        raise HSKMalformedRowException(
            fpath, int(lines[first]),
            f"Expected {len(header)} fields, found {int(frame.iloc[first].notna().sum())}.")
    empty_id = (frame["id"] == "").to_numpy()
    if empty_id.any():
        raise HSKMalformedRowException(fpath, int(lines[int(np.argmax(empty_id))]),
                                       "Empty `id` field.")
    return frame, lines


def read_raw_corpus(fpath: str, task: TaskSpec) -> List[RawPost]:
    frame, lines = _read_frame(fpath, CORPUS_HEADER)
    unknown = (~frame["label"].isin(task.labels)).to_numpy()
    if unknown.any():
        first = int(np.argmax(unknown))
        raise HSKMalformedRowException(
            fpath, int(lines[first]),
            f"Label '{frame['label'].iloc[first]}' is not one of the labels of task "
            f"'{task.name}' ({', '.join(task.labels)}).")
    posts = [RawPost(id=pid, text=text, label=label, task=task.name)
             for pid, text, label in frame.itertuples(index=False, name=None)]
    hsklogger.debug(f"Read {len(posts)} posts for task '{task.name}' from '{fpath}'.")
    return posts


def load_corpus(fpath: str, task: TaskSpec) -> List[CleanPost]:
    return [preprocess_post(post, task) for post in read_raw_corpus(fpath, task)]


def preprocess_file(in_fpath: str, out_fpath: str) -> int:
    # labels are free text here, the file is not bound to a task yet
    frame, _ = _read_frame(in_fpath, CORPUS_HEADER)
    cleaned = pd.DataFrame({
        "id": frame["id"],
        "tokens": [" ".join(tokenize(clean_text(text))) for text in frame["text"]],
        "label": frame["label"],
    }, columns=CLEAN_CORPUS_HEADER)
    out_dir = os.path.dirname(os.path.abspath(out_fpath))
    fd, tmp_fpath = tempfile.mkstemp(prefix=".clean-", suffix=".csv", dir=out_dir)
    try:
        with os.fdopen(fd, "wt", encoding="utf-8", newline="") as fout:
            cleaned.to_csv(fout, index=False, lineterminator="\n")
        os.replace(tmp_fpath, out_fpath)
    except BaseException:
        if os.path.exists(tmp_fpath):
            os.remove(tmp_fpath)
        raise
    return len(cleaned)


def load_task_corpora(tasks: Sequence[TaskSpec]) -> List[Tuple[TaskSpec, List[CleanPost]]]:
    corpora = []
    for task in tasks:
        if task.path is None:
            raise HSKDataException(f"Task '{task.name}' has no corpus file.")
        posts = load_corpus(task.path, task)
        if not posts:
            raise HSKDataException(f"The corpus of task '{task.name}' is empty.")
        corpora.append((task, posts))
    return corpora
