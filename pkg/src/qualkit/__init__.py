"""Topic-model pipelines and concept graphs for interview transcripts."""

from .corpus import (Corpus, Document, ParserConfig, Sentence, SpeakerRole,
                     StopWordSet, Turn, apply_stopwords, build_corpus,
                     default_stopwords, filter_interviewer, frequency_table,
                     parse_transcript, tokenize_lemmatize)
from .embeddings import EmbeddingMatrix, ProviderConfig, ProviderKind, get_embeddings
from .errors import (AlignmentError, EmptyTranscript, EmptyVocabulary, FormatError,
                     LemmatizerUnavailable, MetricUndefined, NoTopics,
                     ProviderUnavailable, QualkitError, StageError, TooFewDocuments)
from .pipeline import (METHODS, Comparison, PipelineConfig, PipelineRun, compare,
                       run)
from .topics import Topic, TopicModelResult, assemble_topics, reduce_topics, topic_diversity

__version__ = "0.1.0"

__all__ = [
    "AlignmentError", "Comparison", "Corpus", "Document", "EmbeddingMatrix",
    "EmptyTranscript", "EmptyVocabulary", "FormatError", "LemmatizerUnavailable",
    "METHODS", "MetricUndefined", "NoTopics", "ParserConfig", "PipelineConfig",
    "PipelineRun", "ProviderConfig", "ProviderKind", "ProviderUnavailable",
    "QualkitError", "Sentence", "SpeakerRole", "StageError", "StopWordSet",
    "Topic", "TopicModelResult", "TooFewDocuments", "Turn", "apply_stopwords",
    "assemble_topics", "build_corpus", "compare", "default_stopwords",
    "filter_interviewer", "frequency_table", "get_embeddings", "parse_transcript",
    "reduce_topics", "run", "tokenize_lemmatize", "topic_diversity",
]
