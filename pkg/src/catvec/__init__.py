"""catvec: vector-space text categorization over tagged newswire corpora.

Documents and categories live in one term-weight vector space; four
strategies build the category side (direct names, lexicon expansion,
training statistics, and their normalized merge) and a recall/precision
harness with macro/micro averaging compares them.
"""

from .categorizers import (
    Approach,
    CategoryModel,
    ScoredAssignment,
    build_direct,
    build_integrated,
    build_lexicon,
    build_training,
    classify,
    cf_band,
    load_model,
    save_model,
    score_documents,
    select_training_terms,
    training_weight,
)
from .corpus import (
    Collection,
    CollectionStats,
    Document,
    ParseError,
    Split,
    collection_stats,
    parse_collection,
    preprocess,
    serialize_collection,
    split_collection,
)
from .evaluation import (
    EvalReport,
    RPAverages,
    RPPoint,
    Strategy,
    assign_by_threshold,
    assign_k_per_doc,
    gold_from_collection,
    macro_rp,
    micro_rp,
    render_report,
    sweep,
)
from .lexicon import (
    LexiconFormatError,
    SynsetMap,
    bundled_lexicon_path,
    category_name_terms,
    expand_category,
    load_lexicon,
)
from .synth import SyntheticCorpus, generate
from .vsm import (
    DfTable,
    SparseVector,
    Vocabulary,
    build_df_table,
    cosine,
    document_vector,
    match_terms,
    terms_present,
)

__version__ = "0.1.0"

__all__ = [
    "Approach",
    "CategoryModel",
    "Collection",
    "CollectionStats",
    "DfTable",
    "Document",
    "EvalReport",
    "LexiconFormatError",
    "ParseError",
    "RPAverages",
    "RPPoint",
    "ScoredAssignment",
    "SparseVector",
    "Split",
    "Strategy",
    "SynsetMap",
    "SyntheticCorpus",
    "Vocabulary",
    "assign_by_threshold",
    "assign_k_per_doc",
    "build_df_table",
    "build_direct",
    "build_integrated",
    "build_lexicon",
    "build_training",
    "bundled_lexicon_path",
    "category_name_terms",
    "cf_band",
    "classify",
    "collection_stats",
    "cosine",
    "document_vector",
    "expand_category",
    "generate",
    "gold_from_collection",
    "load_lexicon",
    "load_model",
    "macro_rp",
    "match_terms",
    "micro_rp",
    "parse_collection",
    "preprocess",
    "render_report",
    "save_model",
    "score_documents",
    "select_training_terms",
    "serialize_collection",
    "split_collection",
    "sweep",
    "terms_present",
    "training_weight",
]
