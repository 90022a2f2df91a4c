"""Smoke test for the fibluc extension module.

Build and install first:  pip install ./crates/python  (or maturin develop)
"""

import json
from fractions import Fraction

import fibluc


def main():
    assert fibluc.fib(10) == 55 and fibluc.lucas(10) == 123
    assert fibluc.lucas_index(fibluc.lucas(1000)) == 1000
    assert fibluc.lucas_index(fibluc.lucas(1000) + 1) is None

    s = fibluc.Solution(3, 1, 1, 1)
    assert s.holds() and s.in_theorem_list(), s

    third = fibluc.CertifiedReal(1, 3, precision=128)
    assert third.lo <= float(Fraction(1, 3)) <= third.hi
    assert (third * fibluc.CertifiedReal(3)).contains(1, 1)
    a = fibluc.CertifiedReal.alpha(256)
    assert abs(float(a * a - a - fibluc.CertifiedReal(1))) < 1e-60

    assert fibluc.exhaustive_search(270, 102) == []
    assert fibluc.corollary_search(8, 5) == [(2, 1)]
    assert max(fibluc.continued_fraction(48)[1:48]) == 29

    m, x = fibluc.bound_chain()
    assert m < 518 * 10**9 and x < 832 * 10**22

    cert = fibluc.prove()
    assert cert.verdict == "verified", str(cert)
    assert cert.number(5, "solutions") == "0"
    doc = json.loads(cert.to_json())
    assert doc["verdict"] == "verified"
    assert fibluc.Certificate.from_json(cert.to_json()).verdict == "verified"
    for stage, label, verdict in cert.stages:
        print(f"{stage:>2}  {label:<34} {verdict}")
    print("smoke test passed")


if __name__ == "__main__":
    main()
