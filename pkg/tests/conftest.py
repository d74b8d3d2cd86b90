import random

import pytest

from riskatlas.keywords import KeywordProcessor
from riskatlas.taxonomy import RawRow, parse_taxonomy


@pytest.fixture
def fig_rows():
    """The lung-infection extract of the raw classification export."""
    return [
        RawRow(6856, None, "Diseases of the respiratory system"),
        RawRow(7002, None, "- Lung infections"),
        RawRow(7003, "CA40", "- - Pneumonia"),
    ]


@pytest.fixture
def fig_taxonomy(fig_rows):
    return parse_taxonomy(fig_rows)


@pytest.fixture
def rng():
    return random.Random(20240517)


def make_processor(pairs, frozen=True):
    kp = KeywordProcessor()
    for surface, key in pairs:
        kp.add_keyword(surface, key)
    return kp.freeze() if frozen else kp
