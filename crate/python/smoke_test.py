"""Smoke test for the Python bindings.

Build and run:

    cargo build -p rhlens-py --release --features extension-module
    cp target/release/librhlens_py.so python/rhlens_py.so
    python3 python/smoke_test.py
"""

import math
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent))

import rhlens_py as rh


def main() -> None:
    # Weights round-trip through their record strings.
    w = rh.Weight.legendre()
    assert w.record() == "legendre"
    assert rh.Weight.parse(w.record()).record() == w.record()
    assert w.eval(0.25) == 1.0
    ep = rh.Weight.endpoint_power(0.1, 0.0)
    assert ep.nu_plus == 10.0 and math.isinf(ep.nu_minus)
    try:
        rh.Weight.endpoint_power(1.5, 0.0)
    except ValueError:
        pass
    else:
        raise AssertionError("endpoint exponent 1.5 must be rejected")

    # The polynomial norm approaches sqrt(pi) * D_inf.
    rec = rh.Recurrence.generate(w, 120)
    assert len(rec) == 121  # coefficients for degrees 0..=120
    assert abs(rec.alpha(3)) < 1e-12
    assert abs(rec.norm(100) / math.sqrt(math.pi) - 1.0) <= 0.01

    # Model predictions track the oracle off the interval.
    model = rh.OuterModel(w)
    assert abs(model.d_inf - 1.0) < 1e-12
    p = model.predict(40, 2.0 + 0.0j)
    assert abs(p.imag) < 1e-12 and p.real > 0.0
    assert model.splitting_defect(1.0) < 1e-12

    # Error decay at z = 2 fits at least the guaranteed rate.
    rep = rh.sweep(w, 2.0 + 0.0j, [10, 14, 20, 28, 40, 57, 80, 113, 160])
    assert rep["pass"] and rep["fitted_exponent"] >= 0.45

    # Matrix quotient on the endpoint circles decays.
    pm = rh.parametrix_check(w, [10, 14, 20, 28], delta=0.2, samples=16)
    assert pm["pass"] and pm["decreasing"] and pm["det_defect"] <= 1e-6

    # Exact exponent budget.
    b = rh.budget("10", "inf")
    assert b["admissible"] and b["lambda"] == 0.3 and b["tau"] == 2.5
    assert ("tau", "5/2") in [tuple(r) for r in b["rows"]]
    bad = rh.budget("6", "6")
    assert not bad["admissible"] and bad["lambda"] < 0.0

    # Sector-solution identity suite.
    a = rh.airy_suite()
    assert a["cyclic_exact"]
    assert max(a["connection"], a["jump"], a["second_order"]) <= 1e-8
    assert a["det_drift"] <= 1e-10

    # Integral-equation roundtrip at a modest resolution.
    r = rh.sie_roundtrip(256)
    assert max(r["residual_sie"], r["residual_phi_match"], r["residual_jump"]) <= 1e-8

    print("smoke test passed")


if __name__ == "__main__":
    main()
