"""Smoke test for the pyskewinfo extension module.

Build and install first:
    maturin build --release -m crates/python/Cargo.toml
    pip install target/wheels/pyskewinfo-*.whl
"""

import json
import math

import pyskewinfo as qs


def close(a, b, tol):
    return abs(a - b) <= tol * (1.0 + abs(b))


def main():
    rho = qs.DensityMatrix.from_diag([0.9, 0.1])
    x = [[0, 1], [1, 0]]
    wy = qs.FisherFunction("wyd:0.5")
    sld = qs.FisherFunction("max")

    assert close(qs.skew_info(wy, rho, x), 0.4, 1e-12)
    assert close(qs.wyd_direct(0.5, rho, x), 0.4, 1e-12)
    assert close(qs.variance(rho, x), 1.0, 1e-12)
    assert qs.skew_info(sld, rho, x) <= qs.variance(rho, x)

    assert close(sld(3.0), 2.0, 1e-15)
    assert close(sld.check_f(3.0), 0.25, 1e-15)
    assert wy.sharp().weight(0.3) is not None
    assert qs.preceq(qs.FisherFunction("min"), sld)
    assert not qs.preceq(sld, qs.FisherFunction("min"))
    assert qs.preceq(qs.FisherFunction("wyd:0.3"), wy, method="both")

    assert close(qs.wyd_weight(0.5, 0.5), math.atan(2 * math.sqrt(2)) / math.pi, 1e-12)
    assert close(qs.reconstruct_f("wydh:0.5", 4.0), 2.25, 1e-9)
    curve = qs.figure1_curve(0.5, [0.25, 0.5, 0.75])
    assert close(curve[0][1], curve[2][1], 1e-12)

    m = qs.meet(sld, wy)
    assert m(2.0) <= min(sld(2.0), wy(2.0)) * (1 + 1e-8)

    report = json.loads(qs.run_suite("basic", wy, dims=[2, 3], trials=200, seed=7))
    assert report["passed"] and report["trials"] == 200

    try:
        qs.FisherFunction("wyd:1.5")
    except ValueError:
        pass
    else:
        raise AssertionError("invalid parameter accepted")

    print("pyskewinfo smoke test passed")


if __name__ == "__main__":
    main()
