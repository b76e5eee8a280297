"""Smoke test for the qmv extension module.

Build first with `pip install --no-build-isolation -e crates/py`, then run
`python python/smoke_test.py` or `pytest python/smoke_test.py`.
"""

import qmv


def test_edge_algebra():
    a = qmv.Algebra.kronecker(1, 1, 3)
    assert a.generators() == ["x1_1", "del1_1"]
    assert a.confluent()
    x, d = a.gen("x1_1"), a.gen("del1_1")
    assert str(x**3) == "(1)*x1_1^3"
    assert x * d != d * x
    assert (x * d - x * d).is_zero()
    center = a.frobenius_center()
    assert len(center) == 2
    assert all(a.is_central(z) for z in center)
    assert not a.is_central(x)


def test_zero_fiber():
    cert = qmv.Algebra.kronecker(1, 2, 3).zero_fiber()
    assert cert["module_dim"] == 9
    assert cert["span_dim"] == 81
    assert cert["is_matrix_algebra"]


def test_abelian_reduction():
    loop = qmv.Algebra.from_quiver("loop_1")
    assert loop.reduce_abelian([2])["dim"] == 9
    assert loop.reduce_abelian([0])["dim"] == 0


def test_assumption():
    assert all(r["holds"] for r in qmv.check_assumption("GLn", 9))
    assert not all(r["holds"] for r in qmv.check_assumption("A2-adjoint", 3))


def test_classical():
    mu = qmv.classical_moment("kronecker_1x1", [[[2]]], [[[3]]])
    assert mu == [[["7"]], [["1/7"]]]
    assert qmv.big_cell_test([[2, 1], [1, 1]])
    assert not qmv.big_cell_test([[0, 1], [1, 0]])
    f = qmv.gstar_factor([[2, 1], [1, 1]])
    assert f["d"] == ["2", "1/2"]
    assert f["l"] == [["1", "0"], ["1/2", "1"]]
    assert f["needs_extension"]
    assert qmv.gstar_factor([[0, 1], [1, 0]]) is None
    rep = qmv.nondeg_identity_check(1, 1, 10, 0)
    assert rep["failures"] == []


def test_samples_reproducible():
    a = qmv.classical_samples("kronecker_2x2", 4, seed=7)
    b = qmv.classical_samples("kronecker_2x2", 4, seed=7)
    assert a == b
    assert [r["seed"] for r in a] == [7, 8, 9, 10]


def test_torus_scaling():
    rep = qmv.torus_scaling([[0, 1], [-1, 0]], [3, 5])
    assert rep["proportional"]


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_"):
            fn()
            print("ok", name)
