import pytest

from qecprobe import kernels


@pytest.fixture(scope="session", autouse=True)
def compiled_kernels():
    """Compile (or no-op) the active kernel backend before any timed test."""
    kernels.warmup()
