import sys

import numpy as np
import pytest

from wetpaper.codes import even_weight_code, from_generator, hamming_code, nadler_code, repetition_code
from wetpaper.gf2 import BitMatrix, rank


def random_linear_codes(count, max_n=10, seed=2024):
    rng = np.random.default_rng(seed)
    codes = []
    while len(codes) < count:
        n = int(rng.integers(3, max_n + 1))
        k = int(rng.integers(1, n))
        G = BitMatrix.from_array(rng.integers(0, 2, size=(k, n)))
        if rank(G) == k:
            codes.append(from_generator(G))
    return codes


CORPUS = [hamming_code(2), hamming_code(3), repetition_code(5), even_weight_code(6), *random_linear_codes(24)]


@pytest.fixture(scope="session")
def hamming3():
    return hamming_code(3)


@pytest.fixture(scope="session")
def hamming4():
    return hamming_code(4)


@pytest.fixture(scope="session")
def nadler():
    return nadler_code()


@pytest.fixture(scope="session")
def corpus():
    return CORPUS


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(module.RESULTS):
        terminalreporter.write_line(module.RESULTS[number])
