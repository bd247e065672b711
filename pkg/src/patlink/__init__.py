"""patlink: link patents to the scholarly publications describing the same research.

The pipeline blocks candidate pairs on normalized inventor/author names,
scores them with thesaurus-term document embeddings and common cited DOIs,
restricts patent classes statistically, ranks the survivors, and exposes a
small review service for manual validation of the result.
"""

__version__ = "0.1.0"
