import pathlib

import pytest

import depconj

CORPUS = pathlib.Path(depconj.__file__).resolve().parent / "corpus"


def corpus_scripts() -> list[pathlib.Path]:
    return sorted(CORPUS.glob("sec*.prf"))


@pytest.fixture(scope="session")
def corpus_dir() -> pathlib.Path:
    return CORPUS
