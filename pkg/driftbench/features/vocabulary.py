from typing import Dict, Iterable, List, NamedTuple, Sequence, Tuple

import numpy as np

from driftbench.datasets.corpus import RawCorpus
from driftbench.datasets.sparse_dataset import SparseDataset
from driftbench.errors import FeatureError
from driftbench.features.mutual_info import (contingency_table,
                                             mutual_information)
from driftbench.utils import atomic_write, get_logger

logger = get_logger(__name__)


class VocabEntry(NamedTuple):
    feature: str
    index: int
    mi: float


class FeatureVocabulary:
    """Mapping from raw feature strings to dense column indices,
    ranked by mutual information with the label.

    Entries are ordered by ``(mi descending, feature ascending)``
    and an entry's index equals its position.

    Parameters
    ----------
    entries : Sequence[Tuple[str, float]] or Sequence[VocabEntry]
        ``(feature, mi)`` pairs in rank order
    strict : bool, optional
        whether to check the feature-string tie order, which
        is lost once MI values are rounded to text, by default True

    Example
    -------
    >>> vocab = rank_and_select(train_corpus, top_n=2919)
    >>> len(vocab)
    2919
    >>> vocab['permission::SEND_SMS']
    0
    """
    def __init__(self, entries: Sequence, strict: bool = True):
        built = []
        for pos, entry in enumerate(entries):
            feature, mi = entry[0], entry[-1]
            built.append(VocabEntry(str(feature), pos, float(mi)))
        self.entries: Tuple[VocabEntry, ...] = tuple(built)
        self._index: Dict[str, int] = {e.feature: e.index for e in built}
        self.validate(strict=strict)

    def validate(self, strict: bool = True):
        if len(self._index) != len(self.entries):
            raise FeatureError("duplicate features in vocabulary.")
        for prev, cur in zip(self.entries, self.entries[1:]):
            if cur.mi > prev.mi or (strict and cur.mi == prev.mi
                                    and cur.feature < prev.feature):
                raise FeatureError(
                    f"vocabulary out of order at index {cur.index}.")
        if any(e.mi < 0 or np.isnan(e.mi) for e in self.entries):
            raise FeatureError("mutual information must be >= 0.")

    @property
    def features(self) -> List[str]:
        return [e.feature for e in self.entries]

    def __getitem__(self, feature: str) -> int:
        return self._index[feature]

    def __contains__(self, feature: str) -> bool:
        return feature in self._index

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FeatureVocabulary):
            return NotImplemented
        return self.entries == other.entries

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(size={len(self)})"


def rank_and_select(corpus: RawCorpus, top_n: int) -> FeatureVocabulary:
    """Rank the distinct features of a (training) corpus slice by
    mutual information with the label and keep the :obj:`top_n` best.

    Parameters
    ----------
    corpus : RawCorpus
        the slice the ranking is computed on
    top_n : int
        the vocabulary size, e.g., 2919

    Returns
    -------
    FeatureVocabulary
        ``min(top_n, #distinct features)`` entries; ties in MI
        are broken by ascending feature string
    """
    if top_n < 1:
        raise FeatureError(f"top_n must be >= 1, got {top_n}.")
    if len(corpus) == 0:
        raise FeatureError("cannot rank features on an empty slice.")

    features, counts = contingency_table(corpus)
    mi = mutual_information(*counts.T) if features else np.zeros(0)
    ranked = sorted(zip(features, mi.tolist()), key=lambda e: (-e[1], e[0]))
    vocab = FeatureVocabulary(ranked[:top_n])
    logger.info(f"Selected {len(vocab)} of {len(features)} features "
                f"on {len(corpus)} apps.")
    return vocab


def vectorize(corpus: RawCorpus, vocab: FeatureVocabulary) -> SparseDataset:
    """Encode every app as the sorted column indices of its
    in-vocabulary features; other features are dropped."""
    rows: List[Iterable[int]] = [
        sorted(vocab[f] for f in feats if f in vocab)
        for feats in corpus.features
    ]
    return SparseDataset.from_rows(rows, corpus.labels, corpus.timestamps,
                                   corpus.sha256, vocab_size=len(vocab))


def save_vocabulary(vocab: FeatureVocabulary, path: str) -> str:
    """TSV ``index<TAB>feature<TAB>mi``, MI with 12 significant digits."""
    with atomic_write(path) as f:
        for e in vocab.entries:
            f.write(f"{e.index}\t{e.feature}\t{e.mi:.12g}\n")
    return path


def load_vocabulary(path: str) -> FeatureVocabulary:
    entries = []
    with open(path, 'r', encoding='utf-8') as f:
        for lineno, line in enumerate(f, 1):
            parts = line.rstrip('\n').split('\t')
            try:
                index, feature, mi = int(parts[0]), parts[1], float(parts[2])
            except (ValueError, IndexError):
                raise FeatureError(f"{path}:{lineno}: malformed vocabulary "
                                   "line.") from None
            if index != lineno - 1:
                raise FeatureError(f"{path}:{lineno}: expected index "
                                   f"{lineno - 1}, got {index}.")
            entries.append((feature, mi))
    return FeatureVocabulary(entries, strict=False)
