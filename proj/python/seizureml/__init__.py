"""Five-model epileptic-seizure detection benchmark.

Thin Python layer over the C++ core: dataset IO, the preprocessing pipeline,
the five classifiers, evaluation metrics, and the one-call `run` pipeline.
"""

try:
    from ._core import (  # type: ignore[attr-defined]
        ConfigError,
        DataError,
        IoError,
        Model,
        binarize_labels,
        evaluate,
        load_csv,
        load_model,
        normalize,
        oversample,
        replace_outliers,
        roc_auc,
        run,
        stratified_split,
        train,
        write_synthetic_dataset,
    )
except ImportError:  # extension built next to the sources rather than installed
    from _core import (  # type: ignore[no-redef]
        ConfigError,
        DataError,
        IoError,
        Model,
        binarize_labels,
        evaluate,
        load_csv,
        load_model,
        normalize,
        oversample,
        replace_outliers,
        roc_auc,
        run,
        stratified_split,
        train,
        write_synthetic_dataset,
    )

__version__ = "1.0.0"

__all__ = [
    "ConfigError",
    "DataError",
    "IoError",
    "Model",
    "binarize_labels",
    "evaluate",
    "load_csv",
    "load_model",
    "normalize",
    "oversample",
    "replace_outliers",
    "roc_auc",
    "run",
    "stratified_split",
    "train",
    "write_synthetic_dataset",
    "__version__",
]
