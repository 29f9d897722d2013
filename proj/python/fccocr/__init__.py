"""Freeman chain-code character recognition for single-line plates."""

import json

from ._core import (
    CHARSET,
    ParseError,
    RecognitionError,
    TemplateSet,
    TraceError,
    binarize,
    code_histogram,
    decode,
    despeckle,
    distance,
    generate_corpus,
    label_components,
    load_image,
    otsu_level,
    recognize_plate,
    render_glyph,
    render_plate,
    save_image,
    segment,
    trace_boundary,
)
from ._core import run_bench as _run_bench

__version__ = "0.1.0"


def run_bench(dir, templates, **kwargs):
    """Benchmark a corpus directory; returns the report as a dict."""
    return json.loads(_run_bench(dir, templates, **kwargs))


__all__ = [
    "CHARSET",
    "ParseError",
    "RecognitionError",
    "TemplateSet",
    "TraceError",
    "binarize",
    "code_histogram",
    "decode",
    "despeckle",
    "distance",
    "generate_corpus",
    "label_components",
    "load_image",
    "otsu_level",
    "recognize_plate",
    "render_glyph",
    "render_plate",
    "run_bench",
    "save_image",
    "segment",
    "trace_boundary",
]
