from .corpus import (AppRecord, RawCorpus, corpus_summary, date_to_day,
                     day_to_date, load_corpus, load_feature_files,
                     load_manifest, save_corpus, write_feature_files,
                     write_manifest)
from .sparse_dataset import SparseDataset, load_sparse, save_sparse
from .synthgen import (SynthCorpus, SynthSpec, bayes_optimal_scores,
                       feature_names, generate)

classes = __all__ = [
    "AppRecord",
    "RawCorpus",
    "load_manifest",
    "load_feature_files",
    "save_corpus",
    "load_corpus",
    "corpus_summary",
    "write_manifest",
    "write_feature_files",
    "date_to_day",
    "day_to_date",
    "SparseDataset",
    "save_sparse",
    "load_sparse",
    "SynthSpec",
    "SynthCorpus",
    "generate",
    "feature_names",
    "bayes_optimal_scores",
]
