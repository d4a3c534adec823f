from typing import Iterable, List, Optional, Sequence

import numpy as np
import scipy.sparse as sp

from driftbench.errors import FeatureError
from driftbench.utils import atomic_write

SPARSE_HEADER = "driftbench-sparse v1"


class SparseDataset:
    """Temporally sorted binary feature rows with labels and timestamps.

    Row ``i`` of :attr:`X` is the presence vector of app ``i`` over a
    vocabulary of :attr:`vocab_size` features; rows keep the
    ``(timestamp, sha256)`` order of the corpus they come from.

    Parameters
    ----------
    X : sp.csr_matrix
        binary matrix of shape ``[num_apps, vocab_size]``
    labels : np.ndarray
        0 (benign) / 1 (malware) per app
    timestamps : np.ndarray
        days since 1970-01-01 per app
    sha256 : Sequence[str]
        app identities

    Example
    -------
    >>> data = SparseDataset.from_rows([[0, 2], []], [1, 0], [10, 11],
    ...                                ['a' * 64, 'b' * 64], vocab_size=3)
    >>> data.rows
    [array([0, 2], dtype=int32), array([], dtype=int32)]
    >>> data.X.toarray()
    array([[1., 0., 1.],
           [0., 0., 0.]])
    """
    def __init__(self, X: sp.csr_matrix, labels: np.ndarray,
                 timestamps: np.ndarray, sha256: Sequence[str]):
        X = sp.csr_matrix(X, dtype=np.float64)
        X.sum_duplicates()
        X.sort_indices()
        labels = np.asarray(labels, dtype=np.int8).ravel()
        timestamps = np.asarray(timestamps, dtype=np.int64).ravel()
        if not (X.shape[0] == labels.size == timestamps.size == len(sha256)):
            raise FeatureError(
                f"misaligned dataset: {X.shape[0]} rows, {labels.size} "
                f"labels, {timestamps.size} timestamps, {len(sha256)} ids.")
        if X.nnz and X.data.max() != 1:
            raise FeatureError("feature matrix must be binary.")
        self.X = X
        self.labels = labels
        self.timestamps = timestamps
        self.sha256 = list(sha256)

    @classmethod
    def from_rows(cls, rows: Sequence[Iterable[int]], labels: Sequence[int],
                  timestamps: Sequence[int], sha256: Sequence[str],
                  vocab_size: int) -> "SparseDataset":
        indptr = [0]
        indices: List[int] = []
        for row in rows:
            row = sorted(set(int(i) for i in row))
            if row and (row[0] < 0 or row[-1] >= vocab_size):
                raise FeatureError(
                    f"column index out of range for vocab_size={vocab_size}.")
            indices.extend(row)
            indptr.append(len(indices))
        data = np.ones(len(indices), dtype=np.float64)
        X = sp.csr_matrix((data, np.asarray(indices, dtype=np.int32),
                           np.asarray(indptr, dtype=np.int64)),
                          shape=(len(rows), vocab_size))
        return cls(X, labels, timestamps, sha256)

    @property
    def vocab_size(self) -> int:
        return self.X.shape[1]

    @property
    def rows(self) -> List[np.ndarray]:
        X = self.X
        return [
            X.indices[X.indptr[i]:X.indptr[i + 1]].copy()
            for i in range(X.shape[0])
        ]

    @property
    def num_malware(self) -> int:
        return int(self.labels.sum())

    def subset(self, index: Iterable[int]) -> "SparseDataset":
        """A dataset made of the rows at :obj:`index`, in the given order."""
        index = np.asarray(list(index), dtype=np.int64)
        return SparseDataset(self.X[index], self.labels[index],
                             self.timestamps[index],
                             [self.sha256[i] for i in index])

    def __len__(self) -> int:
        return self.X.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseDataset):
            return NotImplemented
        return (self.X.shape == other.X.shape
                and (self.X != other.X).nnz == 0
                and np.array_equal(self.labels, other.labels)
                and np.array_equal(self.timestamps, other.timestamps)
                and self.sha256 == other.sha256)

    def __repr__(self) -> str:
        return (f"{self.__class__.__name__}(apps={len(self)}, "
                f"malware={self.num_malware}, vocab_size={self.vocab_size})")


def check_vocab_size(X: sp.spmatrix, vocab_size: int,
                     error: type = FeatureError):
    if X.shape[1] != vocab_size:
        raise error(f"expected rows over {vocab_size} features, "
                    f"got {X.shape[1]}.")


def as_matrix(rows, vocab_size: Optional[int] = None) -> sp.csr_matrix:
    """Accept a :class:`SparseDataset`, a sparse matrix or a dense
    0/1 array and return a float64 CSR matrix."""
    if isinstance(rows, SparseDataset):
        return rows.X
    if sp.issparse(rows):
        return sp.csr_matrix(rows, dtype=np.float64)
    rows = np.atleast_2d(np.asarray(rows, dtype=np.float64))
    return sp.csr_matrix(rows)


def save_sparse(dataset: SparseDataset, path: str) -> str:
    """Write ``driftbench-sparse v1 V=<vocab_size>`` followed by one
    ``<sha256> <label> <timestamp> <idx1,idx2,...>`` line per app."""
    with atomic_write(path) as f:
        f.write(f"{SPARSE_HEADER} V={dataset.vocab_size}\n")
        for sha256, label, ts, row in zip(dataset.sha256, dataset.labels,
                                          dataset.timestamps, dataset.rows):
            f.write(f"{sha256} {label} {ts} {','.join(map(str, row))}\n")
    return path


def load_sparse(path: str) -> SparseDataset:
    with open(path, 'r', encoding='utf-8') as f:
        header = f.readline().rstrip('\n')
        prefix, _, size = header.rpartition(' V=')
        if prefix != SPARSE_HEADER or not size.isdigit():
            raise FeatureError(f"{path}:1: expected '{SPARSE_HEADER} V=<n>',"
                               f" got '{header[:40]}'.")
        vocab_size = int(size)
        sha256, labels, timestamps, rows = [], [], [], []
        for lineno, line in enumerate(f, 2):
            line = line.rstrip('\n')
            if not line:
                continue
            parts = line.split(' ')
            if len(parts) != 4:
                raise FeatureError(f"{path}:{lineno}: expected 4 fields.")
            try:
                labels.append(int(parts[1]))
                timestamps.append(int(parts[2]))
                rows.append([int(i) for i in parts[3].split(',') if i])
            except ValueError:
                raise FeatureError(
                    f"{path}:{lineno}: malformed row.") from None
            sha256.append(parts[0])
    return SparseDataset.from_rows(rows, labels, timestamps, sha256,
                                   vocab_size=vocab_size)
