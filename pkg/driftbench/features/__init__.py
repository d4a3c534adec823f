from .mutual_info import (Contingency, contingency_table, count_contingency,
                          mutual_information)
from .vocabulary import (FeatureVocabulary, VocabEntry, load_vocabulary,
                         rank_and_select, save_vocabulary, vectorize)

classes = __all__ = [
    "Contingency",
    "count_contingency",
    "contingency_table",
    "mutual_information",
    "FeatureVocabulary",
    "VocabEntry",
    "rank_and_select",
    "vectorize",
    "save_vocabulary",
    "load_vocabulary",
]
