from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from knotconcord.exact_linalg import IntMatrix

settings.register_profile(
    "default", deadline=None, derandomize=True, suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large]
)
settings.load_profile("default")


def int_matrices(min_n=1, max_n=4, lo=-5, hi=5, square=True):
    @st.composite
    def build(draw):
        n = draw(st.integers(min_n, max_n))
        m = n if square else draw(st.integers(min_n, max_n))
        rows = draw(st.lists(st.lists(st.integers(lo, hi), min_size=m, max_size=m), min_size=n, max_size=n))
        return IntMatrix(rows, ncols=m)

    return build()


@st.composite
def unimodular(draw, n, steps=8):
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    if n > 1:
        for _ in range(draw(st.integers(0, steps))):
            i = draw(st.integers(0, n - 1))
            j = draw(st.integers(0, n - 2))
            j = j if j < i else j + 1
            c = draw(st.sampled_from([-1, 1]))
            rows[i] = [a + c * b for a, b in zip(rows[i], rows[j])]
    return IntMatrix(rows)


@st.composite
def seifert_matrices(draw, max_genus=4, entry=2):
    """``P (S + E) P^T``: ``S`` symmetric, ``E`` a sum of ``[[0,1],[0,0]]``, ``P`` unimodular.

    ``V - V^T = P (E - E^T) P^T`` is unimodular, so these are Seifert matrices.
    """
    g = draw(st.integers(1, max_genus))
    n = 2 * g
    S = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            S[i][j] = S[j][i] = draw(st.integers(-entry, entry))
    for b in range(g):
        S[2 * b][2 * b + 1] += 1
    P = draw(unimodular(n, steps=4))
    return P @ IntMatrix(S) @ P.T


# rationals with small denominators keep the cyclotomic degree manageable
small_rationals = st.builds(
    lambda N, k: Fraction(k % N, N) if k % N else Fraction(1, N),
    st.integers(2, 12),
    st.integers(1, 11),
)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.pytest_report_lines():
        terminalreporter.write_line(line)
