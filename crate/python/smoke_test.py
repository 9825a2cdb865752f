"""Smoke test for the kahler_dual extension module.

Build with `cargo build --release -p kahler-py --features extension-module`,
copy target/release/libkahler_dual.so to python/kahler_dual.so, then run
`python3 python/smoke_test.py`.
"""

import json
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import kahler_dual as kd


def main():
    ball = kd.CartanDomain("CH2")
    assert (ball.rank, ball.dimension, ball.genus) == (1, 2, 3)
    assert ball.in_wallach_set("1/3")

    d = kd.CartanDomain("I:2x2")
    assert d.wallach_threshold() == "1"
    assert not d.in_wallach_set("1/3")

    dec = kd.decide("CH1", "dual_g", "2", ["1/2"])
    assert dec["verdict"] is False

    w = kd.psi_expansion(1, 2, 1)
    assert w["raw"][2] == "-1/4"
    w = kd.propalphamu_witness(1, 1, 1)
    assert w["first_negative"]["normalized"] == "-1/16"

    minors = kd.flag_minors("SU3", [1, 2])
    assert len(minors) == 2 and minors[0].startswith("1 + ")

    report = kd.verify_suite(order=8, checks=[1, 3, 4, 7])
    assert all(c["status"] != "fail" for c in report), report

    code, out, _ = kd.run_cli(["--json", "wallach", "--domain", "CH1", "--x", "1/2"])
    assert code == 0
    assert json.loads(out)["schema_version"] == kd.SCHEMA_VERSION

    try:
        kd.psi_expansion(2, 2, 1)
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError")

    print("kahler_dual smoke test: ok")


if __name__ == "__main__":
    main()
