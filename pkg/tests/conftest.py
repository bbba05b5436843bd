import pytest

from ergolab.kernels import warm_up


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # compile the jitted kernels once so timed tests measure math, not LLVM
    warm_up()
