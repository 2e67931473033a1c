import glob
import os

import pytest

HERE = os.path.dirname(__file__)
FIXTURES = os.path.join(HERE, "fixtures")
CORPUS = os.path.join(HERE, "corpus")


def fixture_path(name: str) -> str:
    return os.path.join(FIXTURES, name)


def read_fixture(name: str) -> str:
    with open(fixture_path(name), encoding="utf-8") as f:
        return f.read()


def corpus_files() -> list[str]:
    return sorted(glob.glob(os.path.join(CORPUS, "*.lisp")))


@pytest.fixture
def include_book_transcript() -> str:
    return read_fixture("include_book.txt")


@pytest.fixture
def clean_defun_transcript() -> str:
    return read_fixture("clean_defun.txt")


@pytest.fixture
def session_stream() -> str:
    return read_fixture("session_stream.txt")
