import itertools
from fractions import Fraction as F

from hypothesis import given, settings, strategies as st

from lmcdist.lp import LinearProgram, LpStatus, lp_feasible, lp_maximize


def test_simple_optimum():
    out = lp_maximize(LinearProgram.build([1, 0], [[1, 1]], [1]))
    assert out.status is LpStatus.OPTIMAL
    assert out.optimum == 1
    assert out.witness == (1, 0)


def test_infeasible():
    assert lp_maximize(LinearProgram.build([1], [[1]], [-1])).status is LpStatus.INFEASIBLE


def test_two_by_two():
    out = lp_maximize(LinearProgram.build([1, 1], [[1, 2], [2, 1]], [2, 2]))
    assert out.optimum == F(4, 3)
    assert out.witness == (F(2, 3), F(2, 3))


def test_unbounded():
    out = lp_maximize(LinearProgram.build([1, 0], [[1, -1]], [0]))
    assert out.status is LpStatus.UNBOUNDED


def test_feasibility_examples():
    ok, x = lp_feasible([[1, 1]], [1])
    assert ok and sum(x) == 1 and all(v >= 0 for v in x)
    assert lp_feasible([[1, 1]], [-1]) == (False, None)
    ok, x = lp_feasible([[1, -1], [1, 1]], [0, 2])
    assert ok and x == (1, 1)
    assert all(isinstance(v, F) for v in x)


def test_redundant_and_degenerate_rows():
    # duplicated constraint rows and a zero row
    out = lp_maximize(LinearProgram.build([2, 1, 0], [[1, 1, 1], [2, 2, 2], [0, 0, 0]], [1, 2, 0]))
    assert out.optimum == 2


def _solve_square(cols, A, b):
    """Exact solve of ``A[:, cols] y = b``; None unless the columns are independent and consistent."""
    m = len(A)
    M = [[A[i][j] for j in cols] + [b[i]] for i in range(m)]
    r = 0
    pivots = []
    for c in range(len(cols)):
        p = next((i for i in range(r, m) if M[i][c] != 0), None)
        if p is None:
            return None
        M[r], M[p] = M[p], M[r]
        for i in range(m):
            if i != r and M[i][c] != 0:
                f = M[i][c] / M[r][c]
                M[i] = [a - f * bb for a, bb in zip(M[i], M[r])]
        pivots.append(r)
        r += 1
    if any(M[i][-1] != 0 for i in range(r, m)):
        return None
    return [M[i][-1] / M[i][i] for i in range(r)]


def _vertex_optimum(c, A, b):
    n = len(c)
    best = None
    if all(v == 0 for v in b):
        best = F(0)
    for size in range(1, len(A) + 1):
        for cols in itertools.combinations(range(n), size):
            y = _solve_square(cols, A, b)
            if y is None or any(v < 0 for v in y):
                continue
            val = sum(c[j] * v for j, v in zip(cols, y))
            best = val if best is None else max(best, val)
    return best


small = st.integers(min_value=-3, max_value=3)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 3), st.integers(2, 4), st.data())
def test_matches_vertex_enumeration(m, n, data):
    A = [[F(data.draw(small)) for _ in range(n)] for _ in range(m)]
    x0 = [F(data.draw(st.integers(0, 3))) for _ in range(n)]
    # bounded region: total of x plus one slack is fixed
    A = [row + [F(0)] for row in A] + [[F(1)] * (n + 1)]
    b = [sum(a * x for a, x in zip(row, x0)) for row in A[:-1]] + [F(sum(x0) + 1)]
    c = [F(data.draw(small)) for _ in range(n)] + [F(0)]
    out = lp_maximize(LinearProgram.build(c, A, b))
    assert out.status is LpStatus.OPTIMAL
    assert out.optimum == _vertex_optimum(c, A, b)
    x = out.witness
    assert all(v >= 0 for v in x)
    assert all(sum(a * v for a, v in zip(row, x)) == bi for row, bi in zip(A, b))
    assert sum(ci * v for ci, v in zip(c, x)) == out.optimum


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 3), st.integers(1, 4), st.data())
def test_feasibility_agrees_with_vertices(m, n, data):
    A = [[F(data.draw(small)) for _ in range(n)] for _ in range(m)]
    b = [F(data.draw(small)) for _ in range(m)]
    ok, x = lp_feasible(A, b)
    # a feasible polyhedron in standard form always has a vertex
    assert ok == (_vertex_optimum([F(0)] * n, A, b) is not None)
    if ok:
        assert all(v >= 0 for v in x)
        assert all(sum(a * v for a, v in zip(row, x)) == bi for row, bi in zip(A, b))
