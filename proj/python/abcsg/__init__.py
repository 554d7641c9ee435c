"""ABC-SG n-gram distance on SAX strings, with ABC-tuned weights."""

import json

from ._core import (
    DataError,
    abc_minimize,
    abc_sg_distance,
    breakpoints,
    classify,
    common_gram_mass,
    dtw_distance,
    edit_distance,
    eed,
    loocv_error,
    mindist,
    mismatch_term,
    ngrams,
    paa,
    sax,
    train_json,
    z_normalize,
)


def train(labels, series, **kwargs):
    """Tune lambda on a labelled training split; returns the record as a dict."""
    return json.loads(train_json(labels, series, **kwargs))


__all__ = [
    "DataError",
    "abc_minimize",
    "abc_sg_distance",
    "breakpoints",
    "classify",
    "common_gram_mass",
    "dtw_distance",
    "edit_distance",
    "eed",
    "loocv_error",
    "mindist",
    "mismatch_term",
    "ngrams",
    "paa",
    "sax",
    "train",
    "z_normalize",
]
