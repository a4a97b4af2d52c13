import numpy as np
import pytest

from ibreg import Axis, Channel, JointPmf


@pytest.fixture
def rng():
    return np.random.default_rng(20240521)


def random_pmf(rng, cards, names=None):
    """Dirichlet-random joint pmf over the given cardinalities."""
    names = names or [f"a{i}" for i in range(len(cards))]
    t = rng.dirichlet(np.ones(int(np.prod(cards)))).reshape(cards)
    return JointPmf(tuple(Axis(n, c) for n, c in zip(names, cards)), t)


def random_channel(rng, input_axes, input_cards, out_name, out_card):
    t = rng.dirichlet(np.ones(out_card), size=tuple(input_cards))
    return Channel(tuple(input_axes), Axis(out_name, out_card), t)
