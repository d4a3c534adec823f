import io
import os
import os.path as osp
import re
from typing import (Dict, FrozenSet, Iterable, List, NamedTuple, Optional,
                    Sequence, Tuple)

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from driftbench.errors import CorpusError
from driftbench.utils import atomic_write, get_logger

logger = get_logger(__name__)

MANIFEST_HEADER = "sha256,label,first_seen,source"
CORPUS_HEADER = "driftbench-corpus v1"
CORPUS_MANIFEST_HEADER = MANIFEST_HEADER + ",app_id"
SEPARATOR = "::"

_SHA256 = re.compile(r"^[0-9a-f]{64}$")
_DATE = re.compile(r"^\d{4}-\d{2}-\d{2}$")
_PARSER_LINE = re.compile(r"line (\d+)")


class AppRecord(NamedTuple):
    """Identity, first-seen day and ground-truth label of one app."""
    sha256: str
    timestamp: int
    label: int
    source: Optional[str] = None
    app_id: Optional[str] = None

    @property
    def sort_key(self) -> Tuple[int, str]:
        return self.timestamp, self.sha256


def date_to_day(date: str) -> int:
    """Convert an ISO-8601 ``YYYY-MM-DD`` date to days since 1970-01-01.

    Example
    -------
    >>> date_to_day('2018-03-05')
    17595
    """
    if not _DATE.match(date):
        raise ValueError(f"not a YYYY-MM-DD date: '{date}'")
    return int(np.datetime64(date, 'D').astype(np.int64))


def day_to_date(day: int) -> str:
    return str(np.datetime64(int(day), 'D'))


class RawCorpus:
    """Temporally ordered app records with their raw feature sets.

    Records are sorted by ``(timestamp, sha256)`` on construction, feature
    sets are deduplicated ``frozenset`` objects aligned with the records.
    The corpus is immutable and safe to share between threads.

    Parameters
    ----------
    records : Sequence[AppRecord]
        the app records, in any order
    features : Sequence[Iterable[str]]
        one collection of ``category::value`` strings per record

    Example
    -------
    >>> corpus = RawCorpus(records, features)
    >>> len(corpus)
    1000
    >>> corpus.labels[:5]
    array([0, 0, 1, 0, 0], dtype=int8)
    """
    def __init__(self, records: Sequence[AppRecord],
                 features: Sequence[Iterable[str]]):
        if len(records) != len(features):
            raise CorpusError(
                f"got {len(records)} records but {len(features)} "
                "feature sets.")
        order = sorted(range(len(records)),
                       key=lambda i: records[i].sort_key)
        self._records: Tuple[AppRecord, ...] = tuple(records[i]
                                                     for i in order)
        self._features: Tuple[FrozenSet[str], ...] = tuple(
            frozenset(features[i]) for i in order)
        check_records(self._records)

    @property
    def records(self) -> Tuple[AppRecord, ...]:
        return self._records

    @property
    def features(self) -> Tuple[FrozenSet[str], ...]:
        return self._features

    @property
    def sha256(self) -> List[str]:
        return [r.sha256 for r in self._records]

    @property
    def labels(self) -> np.ndarray:
        return np.fromiter((r.label for r in self._records), dtype=np.int8,
                           count=len(self))

    @property
    def timestamps(self) -> np.ndarray:
        return np.fromiter((r.timestamp for r in self._records),
                           dtype=np.int64, count=len(self))

    def subset(self, index: Iterable[int]) -> "RawCorpus":
        """A corpus made of the rows at :obj:`index`."""
        index = list(index)
        return RawCorpus([self._records[i] for i in index],
                         [self._features[i] for i in index])

    def before(self, day: int) -> "RawCorpus":
        """Rows first seen strictly before :obj:`day`."""
        return self.subset(i for i, r in enumerate(self._records)
                           if r.timestamp < day)

    def __len__(self) -> int:
        return len(self._records)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RawCorpus):
            return NotImplemented
        return (self._records == other._records
                and self._features == other._features)

    def __repr__(self) -> str:
        n_mal = int(self.labels.sum()) if len(self) else 0
        return (f"{self.__class__.__name__}(apps={len(self)}, "
                f"malware={n_mal}, benign={len(self) - n_mal})")


def check_records(records: Sequence[AppRecord]):
    seen: Dict[str, int] = {}
    for pos, r in enumerate(records):
        if not _SHA256.match(r.sha256):
            raise CorpusError(f"malformed sha256 '{r.sha256}'.")
        if r.label not in (0, 1):
            raise CorpusError(f"label of {r.sha256} must be 0 or 1, "
                              f"got {r.label}.")
        if r.timestamp is None or r.timestamp < 0:
            raise CorpusError(
                f"timestamp of {r.sha256} must be >= 0, got {r.timestamp}.")
        for name in ('source', 'app_id'):
            value = getattr(r, name)
            if value is not None and ('\n' in value or '\r' in value):
                raise CorpusError(f"{name} of {r.sha256} must fit on one "
                                  "line.")
        if r.sha256 in seen:
            raise CorpusError(f"duplicate sha256 {r.sha256}.")
        seen[r.sha256] = pos


def load_manifest(path: str) -> List[AppRecord]:
    """Load the app manifest, a CSV file with header
    ``sha256,label,first_seen,source``.

    Parameters
    ----------
    path : str
        path of the manifest file

    Returns
    -------
    List[AppRecord]
        one record per data line, in file order

    Raises
    ------
    CorpusError
        if the header is wrong, or a line holds a malformed hash,
        an unknown label token, an unparseable date or a duplicate
        hash. The message cites the 1-based line number.
    """
    if not osp.isfile(path):
        raise CorpusError(f"manifest '{path}' does not exist.")

    with open(path, 'r', encoding='utf-8') as f:
        header = f.readline().rstrip('\r\n')
    if header != MANIFEST_HEADER:
        raise CorpusError(f"{path}:1: expected header '{MANIFEST_HEADER}', "
                          f"got '{header}'.")

    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False,
                            skip_blank_lines=False).fillna('')
    except pd.errors.ParserError as e:
        match = _PARSER_LINE.search(str(e))
        where = f"{path}:{match.group(1)}" if match else path
        raise CorpusError(
            f"{where}: malformed manifest line ({e}).") from None
    except (pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise CorpusError(f"{path}: unreadable manifest ({e}).") from None
    records = parse_manifest_rows(frame, path)
    logger.info(f"Loaded {len(records)} records from {path}.")
    return records


def parse_manifest_rows(frame: pd.DataFrame, path: str,
                        app_ids: bool = False) -> List[AppRecord]:
    records: List[AppRecord] = []
    first_line: Dict[str, int] = {}
    for pos, row in enumerate(frame.itertuples(index=False)):
        lineno = pos + 2
        where = f"{path}:{lineno}"
        sha256 = str(row.sha256).strip()
        if not _SHA256.match(sha256):
            raise CorpusError(f"{where}: malformed sha256 '{row.sha256}'.")
        if row.label not in ('0', '1'):
            raise CorpusError(f"{where}: unknown label '{row.label}'.")
        try:
            timestamp = date_to_day(row.first_seen.strip())
        except ValueError:
            raise CorpusError(
                f"{where}: unparseable date '{row.first_seen}'.") from None
        if timestamp < 0:
            raise CorpusError(f"{where}: date '{row.first_seen}' is before "
                              "1970-01-01.")
        if sha256 in first_line:
            raise CorpusError(f"{where}: duplicate sha256 {sha256} "
                              f"(first seen on line {first_line[sha256]}).")
        first_line[sha256] = lineno
        if any(c in row.source for c in '\r\n'):
            raise CorpusError(f"{where}: source must fit on one line.")
        app_id = (row.app_id or None) if app_ids else None
        records.append(
            AppRecord(sha256=sha256, timestamp=timestamp,
                      label=int(row.label), source=row.source or None,
                      app_id=app_id))
    return records


def read_feature_file(path: str) -> FrozenSet[str]:
    features = set()
    with open(path, 'r', encoding='utf-8') as f:
        for lineno, line in enumerate(f, 1):
            line = line.rstrip('\r\n')
            if not line.strip():
                continue
            if SEPARATOR not in line:
                raise CorpusError(f"{path}:{lineno}: expected "
                                  f"'category{SEPARATOR}value', got '{line}'.")
            features.add(line)
    return frozenset(features)


def load_feature_files(records: Sequence[AppRecord], dirname: str,
                       n_jobs: int = 1) -> RawCorpus:
    """Attach the per-app feature files ``<dirname>/<sha256>.txt``
    to the records.

    Parameters
    ----------
    records : Sequence[AppRecord]
        the manifest records
    dirname : str
        the directory holding one feature file per app
    n_jobs : int, optional
        number of reader threads, by default 1

    Returns
    -------
    RawCorpus
        the corpus sorted by ``(timestamp, sha256)``

    Raises
    ------
    CorpusError
        if feature files are missing (all missing hashes are listed)
        or a line lacks the ``::`` separator
    """
    paths = [osp.join(dirname, f"{r.sha256}.txt") for r in records]
    missing = [r.sha256 for r, p in zip(records, paths) if not osp.isfile(p)]
    if missing:
        raise CorpusError(f"{len(missing)} feature file(s) missing in "
                          f"'{dirname}': {', '.join(missing)}")

    features = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(read_feature_file)(p) for p in paths)
    corpus = RawCorpus(records, features)
    logger.info(f"Loaded features for {corpus}.")
    return corpus


def save_corpus(corpus: RawCorpus, path: str) -> str:
    """Persist a corpus as a single versioned text file.

    Layout::

        driftbench-corpus v1
        records=<n>
        sha256,label,first_seen,source,app_id
        <n manifest lines>
        <sha256><TAB><k>
        <k feature lines, sorted>
        ...

    Returns
    -------
    str
        the written path
    """
    with atomic_write(path) as f:
        f.write(f"{CORPUS_HEADER}\n")
        f.write(f"records={len(corpus)}\n")
        manifest_frame(corpus.records, app_ids=True).to_csv(
            f, index=False, lineterminator='\n')
        for r, feats in zip(corpus.records, corpus.features):
            f.write(f"{r.sha256}\t{len(feats)}\n")
            for feat in sorted(feats):
                f.write(f"{feat}\n")
    return path


def load_corpus(path: str) -> RawCorpus:
    """Load a corpus written by :func:`save_corpus`.

    Raises
    ------
    CorpusError
        on a version-tag mismatch or any structural corruption;
        nothing is returned unless the whole file parsed.
    """
    try:
        with open(path, 'r', encoding='utf-8') as f:
            lines = f.read().split('\n')
    except (OSError, UnicodeDecodeError) as e:
        raise CorpusError(f"cannot read corpus '{path}': {e}") from e

    if lines[0] != CORPUS_HEADER:
        raise CorpusError(f"{path}:1: expected '{CORPUS_HEADER}', "
                          f"got '{lines[0][:40]}'.")
    try:
        key, value = lines[1].split('=')
        assert key == 'records'
        n = int(value)
        assert lines[2] == CORPUS_MANIFEST_HEADER
    except (ValueError, AssertionError, IndexError):
        raise CorpusError(f"{path}: corrupted corpus preamble.") from None

    columns = CORPUS_MANIFEST_HEADER.split(',')
    block = lines[3:3 + n]
    if len(block) != n:
        raise CorpusError(f"{path}: truncated or corrupted manifest block.")
    try:
        frame = pd.read_csv(io.StringIO('\n'.join(block)), header=None,
                            names=columns, dtype=str, keep_default_na=False,
                            skip_blank_lines=False) if n else \
            pd.DataFrame(columns=columns)
    except pd.errors.ParserError:
        raise CorpusError(
            f"{path}: truncated or corrupted manifest block.") from None
    if len(frame) != n:
        raise CorpusError(f"{path}: truncated or corrupted manifest block.")
    records = parse_manifest_rows(frame.fillna(''), path, app_ids=True)

    features: List[FrozenSet[str]] = []
    pos = 3 + n
    for r in records:
        try:
            sha256, k = lines[pos].split('\t')
            k = int(k)
        except (ValueError, IndexError):
            raise CorpusError(
                f"{path}:{pos + 1}: corrupted feature block header.") from None
        if sha256 != r.sha256 or pos + 1 + k > len(lines):
            raise CorpusError(f"{path}:{pos + 1}: feature block does not "
                              f"match record {r.sha256}.")
        block = lines[pos + 1:pos + 1 + k]
        if any(SEPARATOR not in feat for feat in block):
            raise CorpusError(f"{path}:{pos + 1}: corrupted feature block.")
        features.append(frozenset(block))
        pos += 1 + k
    if any(lines[pos:]):
        raise CorpusError(f"{path}:{pos + 1}: trailing data after the "
                          "last feature block.")
    return RawCorpus(records, features)


def corpus_summary(corpus: RawCorpus) -> pd.DataFrame:
    """Per-year counts of malicious, benign and total apps.

    Example
    -------
    >>> corpus_summary(corpus)
       year  malicious  benign  total
    0  2012        300    2700   3000
    """
    years = (corpus.timestamps.astype('datetime64[D]').astype(
        'datetime64[Y]').astype(np.int64) + 1970)
    frame = pd.DataFrame({'year': years, 'malicious': corpus.labels})
    table = frame.groupby('year').agg(malicious=('malicious', 'sum'),
                                      total=('malicious', 'size'))
    table['benign'] = table['total'] - table['malicious']
    return table.reset_index()[['year', 'malicious', 'benign', 'total']]


def manifest_frame(records: Sequence[AppRecord],
                   app_ids: bool = False) -> pd.DataFrame:
    """Manifest rows as strings; :meth:`pandas.DataFrame.to_csv`
    quotes sources holding commas or quotes."""
    columns = (CORPUS_MANIFEST_HEADER if app_ids else MANIFEST_HEADER)
    rows = [(r.sha256, str(r.label), day_to_date(r.timestamp),
             r.source or '', r.app_id or '') for r in records]
    return pd.DataFrame([row[:5 if app_ids else 4] for row in rows],
                        columns=columns.split(','), dtype=str)


def write_manifest(records: Sequence[AppRecord], path: str) -> str:
    with atomic_write(path) as f:
        manifest_frame(records).to_csv(f, index=False, lineterminator='\n')
    return path


def write_feature_files(records: Sequence[AppRecord],
                        features: Sequence[Iterable[str]],
                        dirname: str) -> str:
    os.makedirs(dirname, exist_ok=True)
    for r, feats in zip(records, features):
        with atomic_write(osp.join(dirname, f"{r.sha256}.txt")) as f:
            f.writelines(f"{feat}\n" for feat in sorted(feats))
    return dirname
