"""Smoke test for the opgeo extension module.

Build and install first, e.g. `maturin develop -m crates/py/Cargo.toml`,
then run `python crates/py/python/smoke_test.py`.
"""

import json
import math

import opgeo


def verdict(report, predicate):
    return next(v for v in report["verdicts"] if v["predicate"] == predicate)


def main():
    eye = opgeo.Element.identity([3])
    report = opgeo.classify(eye, unit="identity")
    assert all(v["holds"] for v in report["verdicts"]), report
    assert report["tool"]["name"] == "opgeo"

    half = opgeo.Element([2], [[1, 0, 0, 0.5]])
    assert math.isclose(half.norm(), 1.0)
    pi = verdict(opgeo.classify(half), "partial-isometry")
    assert pi["holds"] is False
    witness = pi["evidence"]
    assert witness["kind"] == "witness"
    assert math.isclose(witness["b"], 8.0) and math.isclose(witness["margin"], 0.5)

    # direct sum: a unitary block and a zero block span only M_2's dual
    x = opgeo.Element([2, 1], [[0, 1, 1, 0], [0]])
    assert opgeo.norming_span(x) == (4, 5)

    d = opgeo.Element([2], [[2, 0, 0, 1]])
    cert = opgeo.certify(d)
    assert cert["kind"] == "invertibility" and math.isclose(cert["epsilon"], 1.0)
    assert opgeo.verify(d, cert)["accepted"]
    assert opgeo.verify(d, json.dumps(cert))["accepted"]
    assert opgeo.certify(opgeo.Element([2], [[1, 2, 2, 4]])) is None

    w = opgeo.certify(half, "partial-isometry")
    assert opgeo.verify(half, w)["accepted"]

    z = opgeo.Element([2], [[1 + 2j, 3, -1j, 0]])
    adj = opgeo.recover_adjoint(z)
    assert adj.distance(z.adjoint()) < 1e-8

    back = opgeo.Element.from_json(z.to_json())
    assert back.blocks == z.blocks and back.shape == [2]

    h = opgeo.run_harness(seed=7, trials=4, suites=["T2", "T1B"], shapes=[[2], [2, 3]])
    assert h["passed"], h
    assert h == opgeo.run_harness(seed=7, trials=4, suites=["T2", "T1B"], shapes=[[2], [2, 3]])

    try:
        opgeo.run_harness(suites=["T9"])
    except ValueError as e:
        assert "T9" in str(e)
    else:
        raise AssertionError("unknown suite accepted")

    print(f"opgeo {opgeo.__version__}: smoke test passed")


if __name__ == "__main__":
    main()
