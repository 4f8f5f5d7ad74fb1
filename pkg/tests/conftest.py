import numpy as np
import pytest

ACCEPTANCE_LINES = []


def random_hermitian(rng, n, complex_entries=True):
    m = rng.standard_normal((n, n))
    if complex_entries:
        m = m + 1j * rng.standard_normal((n, n))
    return 0.5 * (m + m.conj().T)


def random_psd(rng, n, r):
    g = rng.standard_normal((n, r)) + 1j * rng.standard_normal((n, r))
    return g @ g.conj().T


def match_multisets(a, b, tol):
    """Greedy nearest matching; relative error against max(1, |a_k|)."""
    a = [complex(x) for x in a]
    b = [complex(x) for x in b]
    if len(a) != len(b):
        return False, np.inf
    worst = 0.0
    for x in a:
        d = [abs(x - y) / max(1.0, abs(x)) for y in b]
        j = int(np.argmin(d))
        worst = max(worst, d[j])
        b.pop(j)
    return worst <= tol, worst


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # load or compile the JIT kernels once so timings measure steady state
    from pencil_persist import corpus_run

    corpus_run("example-2.9")
    corpus_run("example-2.6")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
