"""Smoke test for the torsqueeze_py extension.

Build it first:  pip install --no-build-isolation -e crates/python
"""

import math

import torsqueeze_py as tq


def main():
    single = tq.Config.reference()
    d = tq.derive(single)
    assert d["omega_m_rad_s"] > 0 and d["calibrated_waist"]

    # Round trip through TOML keeps the fingerprint.
    again = tq.Config.from_toml(single.to_toml())
    assert again.fingerprint() == single.fingerprint()

    # Decoupled output light sits exactly at shot noise.
    sys = single.with_parameter("cavity_modes[0].kappa_over_omega_m", 3.0).system()
    vac = sys.decoupled().single_mode_spectrum(n_omega=101)
    assert max(abs(s - 1.0) for s in vac["S"]) < 1e-12

    stable, max_re, eigs = sys.stability()
    assert stable and max_re < 0 and len(eigs) == 6
    spec = sys.single_mode_spectrum()
    assert spec["min"] < 1.0 and abs(spec["argmin_omega"]) > 0.1

    # Closed form agrees with the generic solve at the optimal angle.
    w = spec["argmin_omega"]
    theta = spec["theta_opt"][spec["omega"].index(w)]
    assert math.isclose(sys.homodyne_oracle(w, theta), spec["min"], rel_tol=1e-9)

    n_mech, n_a, n_b = sys.occupations()
    assert n_mech > 0 and n_a > 0 and n_b == 0

    # kappa_A = 0.1 has no steady state at the default waist.
    try:
        single.with_parameter("cavity_modes[0].kappa_over_omega_m", 0.1).system().single_mode_spectrum()
    except tq.UnstableError:
        pass
    else:
        raise AssertionError("expected UnstableError")

    two = tq.Config.reference(two_mode=True).system()
    s2 = two.two_mode_spectrum()
    assert 0.5 - 1e-6 <= s2["min"] < 1.0

    checks = tq.verify(single.with_parameter("cavity_modes[0].kappa_over_omega_m", 3.0))
    assert all(passed for *_, passed in checks), checks

    csv = tq.run_preset("fig5")
    assert csv.startswith("# preset=fig5")
    print("smoke test ok:", len(checks), "oracle checks,", len(csv.splitlines()), "fig5 lines")


if __name__ == "__main__":
    main()
