"""Built-in corpus of manifolds with known classifications."""

from biconf.corpus.loader import Corpus, CorpusEntry, load_corpus
from biconf.corpus.runner import EntryOutcome, run_corpus, run_entry

__all__ = ["Corpus", "CorpusEntry", "EntryOutcome", "load_corpus", "run_corpus", "run_entry"]
