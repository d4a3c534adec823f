import hashlib
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from joblib import Parallel, delayed

from driftbench.datasets.corpus import AppRecord, RawCorpus, date_to_day
from driftbench.errors import SynthError
from driftbench.utils import get_logger, make_rng

logger = get_logger(__name__)

CATEGORIES = ("permission", "api_call", "intent", "activity",
              "service_receiver", "url")

CHUNK_SIZE = 4096


@dataclass
class SynthSpec:
    """Description of a synthetic corpus with controllable drift.

    Each feature ``j`` is present in an app of class ``c`` with
    probability ``profiles[c][j]``. A drift event ``(day, r)`` rolls
    both profiles by ``r`` positions for apps first seen on or after
    ``day``; rotations of successive events accumulate.

    Use :meth:`build` to get the default block-structured profiles.
    """
    seed: int = 0
    n_apps: int = 10000
    malware_ratio: float = 0.10
    vocab_size: int = 200
    benign_profile: Optional[np.ndarray] = None
    malware_profile: Optional[np.ndarray] = None
    drift: List[Tuple[int, int]] = field(default_factory=list)
    start_day: int = date_to_day('2012-01-01')
    span_days: int = 730

    @classmethod
    def build(cls, seed: int = 0, n_apps: int = 10000,
              malware_ratio: float = 0.10, vocab_size: int = 200,
              n_informative: int = 20, p_informative: float = 0.6,
              p_background: float = 0.05,
              drift: Sequence[Tuple[int, int]] = (),
              start_day: int = date_to_day('2012-01-01'),
              span_days: int = 730) -> "SynthSpec":
        """Block profiles: features ``[0, K)`` are frequent in malware,
        ``[K, 2K)`` frequent in benign apps, all others appear with
        :obj:`p_background` in both classes.

        Example
        -------
        >>> spec = SynthSpec.build(seed=1, n_apps=50000,
        ...                        drift=[(date_to_day('2013-01-01'), 40)])
        """
        k = n_informative
        if 2 * k > vocab_size:
            raise SynthError(f"2 * n_informative={2 * k} exceeds "
                             f"vocab_size={vocab_size}.")
        benign = np.full(vocab_size, p_background)
        malware = np.full(vocab_size, p_background)
        malware[:k] = p_informative
        benign[k:2 * k] = p_informative
        return cls(seed=seed, n_apps=n_apps, malware_ratio=malware_ratio,
                   vocab_size=vocab_size, benign_profile=benign,
                   malware_profile=malware, drift=list(drift),
                   start_day=start_day, span_days=span_days)

    def validate(self):
        if not 0 < self.malware_ratio < 1:
            raise SynthError(
                f"malware_ratio must be in (0, 1), got {self.malware_ratio}.")
        if self.vocab_size < 2:
            raise SynthError(f"vocab_size must be >= 2, got "
                             f"{self.vocab_size}.")
        if self.n_apps < 0 or self.span_days < 1 or self.start_day < 0:
            raise SynthError("n_apps, span_days and start_day must be "
                             "non-negative (span_days >= 1).")
        for name in ('benign_profile', 'malware_profile'):
            profile = getattr(self, name)
            if profile is None or np.shape(profile) != (self.vocab_size, ):
                raise SynthError(f"{name} must hold {self.vocab_size} "
                                 "probabilities.")
            if np.any((profile < 0) | (profile > 1)):
                raise SynthError(f"{name} must lie in [0, 1].")
        for day, rotation in self.drift:
            if not 0 <= rotation < self.vocab_size:
                raise SynthError(f"rotation {rotation} must lie in "
                                 f"[0, {self.vocab_size}).")
        return self

    def rotation_at(self, days: np.ndarray) -> np.ndarray:
        """Accumulated profile rotation in effect on each day."""
        days = np.asarray(days)
        shift = np.zeros(days.shape, dtype=np.int64)
        for day, rotation in sorted(self.drift):
            shift += np.where(days >= day, rotation, 0)
        return shift % self.vocab_size

    def profiles(self, rotation: int) -> np.ndarray:
        """``[2, vocab_size]`` presence probabilities (benign, malware)."""
        base = np.stack([self.benign_profile, self.malware_profile])
        return np.roll(base, int(rotation), axis=1)


class SynthCorpus(NamedTuple):
    records: List[AppRecord]
    features: List[List[str]]

    def to_corpus(self) -> RawCorpus:
        return RawCorpus(self.records, self.features)


def feature_names(vocab_size: int) -> List[str]:
    return [
        f"{CATEGORIES[j % len(CATEGORIES)]}::f{j:05d}"
        for j in range(vocab_size)
    ]


def synthetic_sha256(seed: int, ordinal: int) -> str:
    return hashlib.sha256(f"{seed}:{ordinal}".encode('utf-8')).hexdigest()


def _sample_labels(spec: SynthSpec, rng: np.random.Generator) -> np.ndarray:
    labels = (rng.random(spec.n_apps) < spec.malware_ratio).astype(np.int8)
    target = int(np.floor(spec.n_apps * spec.malware_ratio))
    surplus = int(labels.sum()) - target
    if surplus > 0:
        flip = rng.choice(np.flatnonzero(labels == 1), surplus, replace=False)
        labels[flip] = 0
    elif surplus < 0:
        flip = rng.choice(np.flatnonzero(labels == 0), -surplus,
                          replace=False)
        labels[flip] = 1
    return labels


def _sample_chunk(spec: SynthSpec, chunk: int, labels: np.ndarray,
                  timestamps: np.ndarray) -> np.ndarray:
    rng = make_rng(spec.seed, 1, chunk)
    draws = rng.random((labels.size, spec.vocab_size))
    rotations = spec.rotation_at(timestamps)
    present = np.zeros_like(draws, dtype=bool)
    for rotation in np.unique(rotations):
        rows = rotations == rotation
        probs = spec.profiles(rotation)[labels[rows]]
        present[rows] = draws[rows] < probs
    return present


def generate(spec: SynthSpec, n_jobs: int = 1) -> SynthCorpus:
    """Generate a synthetic corpus, fully determined by :obj:`spec`.

    Timestamps are uniform over ``[start_day, start_day + span_days)``,
    exactly ``floor(n_apps * malware_ratio)`` apps are malware, and
    each app's features are drawn from the class profile in effect on
    its first-seen day. Feature sampling runs in chunks with their own
    derived seeds, so the output does not depend on :obj:`n_jobs`.

    Returns
    -------
    SynthCorpus
        records in generation order and their feature strings,
        ready for :func:`write_manifest`/:func:`write_feature_files`
    """
    spec.validate()
    rng = make_rng(spec.seed, 0)
    labels = _sample_labels(spec, rng)
    timestamps = rng.integers(spec.start_day, spec.start_day + spec.span_days,
                              size=spec.n_apps, dtype=np.int64)

    bounds = range(0, spec.n_apps, CHUNK_SIZE)
    chunks = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(_sample_chunk)(spec, i, labels[start:start + CHUNK_SIZE],
                               timestamps[start:start + CHUNK_SIZE])
        for i, start in enumerate(bounds))

    names = np.asarray(feature_names(spec.vocab_size), dtype=object)
    records, features = [], []
    ordinal = 0
    for present in chunks:
        for row in present:
            records.append(
                AppRecord(sha256=synthetic_sha256(spec.seed, ordinal),
                          timestamp=int(timestamps[ordinal]),
                          label=int(labels[ordinal]), source='synth'))
            features.append(names[row].tolist())
            ordinal += 1
    logger.info(f"Generated {len(records)} synthetic apps "
                f"({int(labels.sum())} malware, {len(spec.drift)} drift "
                "events).")
    return SynthCorpus(records, features)


def bayes_optimal_scores(spec: SynthSpec, corpus: RawCorpus) -> np.ndarray:
    """Posterior malware probability of each app under the true
    generating profiles (the Bayes-optimal scorer)."""
    index = {name: j for j, name in enumerate(feature_names(spec.vocab_size))}
    X = np.zeros((len(corpus), spec.vocab_size), dtype=bool)
    for i, feats in enumerate(corpus.features):
        X[i, [index[f] for f in feats]] = True
    rotations = spec.rotation_at(corpus.timestamps)
    prior = np.log(spec.malware_ratio) - np.log1p(-spec.malware_ratio)
    log_odds = np.full(len(corpus), prior)
    with np.errstate(divide='ignore'):
        for rotation in np.unique(rotations):
            rows = rotations == rotation
            ben, mal = spec.profiles(rotation)
            on = np.log(mal) - np.log(ben)
            off = np.log1p(-mal) - np.log1p(-ben)
            log_odds[rows] += np.where(X[rows], on, off).sum(axis=1)
    return 1. / (1. + np.exp(-log_odds))
