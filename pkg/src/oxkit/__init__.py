"""Dataset engineering and evaluation toolkit for aerial muskox surveys.

Covers annotation ingestion, resolution normalization, patch tiling,
dataset composition, classical augmentation, point-detection evaluation,
the statistical model-comparison procedure, and a generative-image batch
client with human curation.
"""

__version__ = "0.1.0"
