import random

import pytest

from rdvtrees.trees import PortLabeledTree


def colored_path(n):
    """Path on n nodes whose internal ports form a proper 2-edge-coloring,
    mirror-symmetric about the middle."""
    rows = []
    for v in range(n):
        if v == 0:
            rows.append([(0, 1)])
        elif v == n - 1:
            rows.append([(0, n - 2)])
        else:
            rows.append([(v % 2, v - 1), (1 - v % 2, v + 1)])
    return PortLabeledTree.from_ports(rows)


@pytest.fixture
def rng():
    return random.Random(12345)
