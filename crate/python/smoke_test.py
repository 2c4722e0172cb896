"""Smoke test for the symdiam_py extension module.

Build and install first, e.g. from the repository root:

    pip install --no-build-isolation ./crates/py
    python python/smoke_test.py
"""

import json

import symdiam_py as sd


def main() -> None:
    a = sd.Perm(3, "(1,2,3)")
    b = sd.Perm(3, "(1,2)")
    assert str(a * b) == "(2,3)", str(a * b)
    assert (a ** 3).support_size() == 0
    assert a.order() == 3
    assert a.conjugate(b) == b.inverse() * a * b

    w0 = sd.Word.w0()
    assert str(w0) == "AbaBABab" and len(w0) == 8
    x = sd.Perm(8, "(1,2,3,4,5,6,7)")
    r = sd.Perm(8, "(1,8)(2,5)")
    c = w0.evaluate(x, x.conjugate(r))
    assert c.n == 8

    root = sd.threshold("f", 0.999)
    assert abs(root - 0.632599) <= 5e-7, root
    trace = sd.iterate_map("f", 0.999, 0.63, 9)
    assert trace[-1] < 0.326

    assert sd.mixing_length(6, 1, 0.1) == 1769

    catalog = sd.enumerate_trees("AbaBABab", kappa=17, max_path=5, power_limit=5)
    assert len(json.loads(catalog)) == 52
    poly, equal, surplus, deficit = sd.compare_catalog(catalog, "f")
    assert equal and surplus == "0" and deficit == "0", (surplus, deficit)

    case, points, images = sd.select_case(sd.Perm(12, "(1,2,3,4,5,6,7,8,9)"))
    assert case == "generic_long_cycle" and len(points) == len(images)

    a0 = sd.Perm(490, "".join(f"({','.join(str(7 * i + j) for j in range(1, 8))})" for i in range(44)))
    report = json.loads(sd.reduce(a0, seed=1, target=1 / 3, trials=10))
    assert report["status"]["kind"] == "reached", report["status"]
    assert report["delta_trace"][-1] < 1 / 3

    assert json.loads(sd.verify_lemma5())["passed"]

    try:
        sd.Perm(3, "(1,4)")
    except ValueError:
        pass
    else:
        raise AssertionError("invalid cycle accepted")

    print("symdiam_py", sd.__version__, "smoke test passed")


if __name__ == "__main__":
    main()
