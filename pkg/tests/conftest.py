"""Shared fixtures: a deterministic rendered-digit corpus written through the
real IDX files, or the official dataset when SPIKECROSS_DATA points at one."""
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from spikecross import ImageSet, load_image_set, save_idx_images, save_idx_labels, split_eval_set
from synth import make_digit_corpus

CORPUS_SEED = 20260808

DESK_TRAIN = 10_000
EVAL_COUNT = 3_000     # 1000 labeling + 2000 accuracy


def _official_dir():
    root = os.environ.get("SPIKECROSS_DATA")
    if not root:
        return None
    names = ["train-images-idx3-ubyte", "train-labels-idx1-ubyte",
             "t10k-images-idx3-ubyte", "t10k-labels-idx1-ubyte"]
    for name in names:
        if not (os.path.exists(os.path.join(root, name))
                or os.path.exists(os.path.join(root, name + ".gz"))):
            return None
    return root


def _resolve(root, name):
    path = os.path.join(str(root), name)
    return path if os.path.exists(path) else path + ".gz"


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory):
    """Directory with IDX train/test files: official data when provided,
    otherwise the rendered synthetic corpus (10k train + 3k eval)."""
    official = _official_dir()
    if official:
        return official
    root = tmp_path_factory.mktemp("corpus")
    pixels, labels = make_digit_corpus(DESK_TRAIN + EVAL_COUNT, CORPUS_SEED)
    save_idx_images(pixels[:DESK_TRAIN], root / "train-images-idx3-ubyte")
    save_idx_labels(labels[:DESK_TRAIN], root / "train-labels-idx1-ubyte")
    save_idx_images(pixels[DESK_TRAIN:], root / "t10k-images-idx3-ubyte")
    save_idx_labels(labels[DESK_TRAIN:], root / "t10k-labels-idx1-ubyte")
    return root


def _load_sets(corpus_dir, train_limit):
    train = load_image_set(_resolve(corpus_dir, "train-images-idx3-ubyte"),
                           _resolve(corpus_dir, "train-labels-idx1-ubyte"),
                           "train", limit=train_limit)
    test = load_image_set(_resolve(corpus_dir, "t10k-images-idx3-ubyte"),
                          _resolve(corpus_dir, "t10k-labels-idx1-ubyte"),
                          "test", limit=EVAL_COUNT)
    label_set, accuracy_set = split_eval_set(test, 1000)
    return {"train": train, "label": label_set, "test": accuracy_set}


@pytest.fixture(scope="session")
def desk_sets(corpus_dir) -> dict:
    """Desk-scale splits: first 10k training images, 1k labeling, 2k accuracy."""
    return _load_sets(corpus_dir, DESK_TRAIN)


@pytest.fixture(scope="session")
def small_corpus() -> ImageSet:
    """300 in-memory digits for fast module tests."""
    pixels, labels = make_digit_corpus(300, CORPUS_SEED + 1)
    return ImageSet(pixels, labels, "train")


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
