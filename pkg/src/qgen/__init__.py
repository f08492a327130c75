"""qgen: automatic generation and interactive ranking of natural-language
aggregate questions over tabular data."""

from .dataset import Dataset, IngestOptions, load_dataset
from .engine import EngineConfig, ExplorationSession, generate_questions
from .estimator import QuestionMiner
from .questions import QuestionCandidate
from .slicing import SliceConfig

__version__ = "0.1.0"

__all__ = [
    "Dataset",
    "IngestOptions",
    "load_dataset",
    "EngineConfig",
    "ExplorationSession",
    "generate_questions",
    "QuestionMiner",
    "QuestionCandidate",
    "SliceConfig",
    "__version__",
]
