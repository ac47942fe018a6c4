"""Online Grantha handwriting recognition and Malayalam script conversion.

Pen strokes are turned into 8-channel per-point feature sequences, classified
by a k-NN rule over DTW distances to clustered prototypes, and the recognized
Grantha text is converted to old- and new-script Malayalam with rule-based
conjunct handling and a lexicon-backed fallback for reform-dropped characters.
"""

from .convert import (
    ConjunctRule,
    ConversionResult,
    Lexicon,
    MalformedWordError,
    ScriptTables,
    UnknownConjunctError,
    classify,
    convert_word,
    decompose_conjunct,
    reorder_prebase,
    segment_words,
    suggest,
)
from .dtw import (
    Candidate,
    DtwConfig,
    RecognitionError,
    RecognitionModel,
    TrainingError,
    WarpingPath,
    dtw_distance,
    recognize,
    train,
    warping_path,
)
from .evaluate import ConfusionMatrix, EvalReport, evaluate, most_confused, word_accuracy
from .features import (
    DegenerateInkError,
    FeatureConfig,
    FeatureSequence,
    FeatureVector,
    extract_features,
)
from .ink import (
    InkDocument,
    InkSample,
    Point,
    Stroke,
    SymbolClass,
    UnipenError,
    parse_unipen,
    validate,
    write_unipen,
)

__version__ = "0.1.0"
