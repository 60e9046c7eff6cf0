"""Smoke test for the reciplab Python module.

Build and install the module first:

    pip install maturin
    maturin build --release -m crates/python/Cargo.toml -o dist
    pip install dist/reciplab-*.whl

then run `python python/smoke_test.py` (or `pytest python/smoke_test.py`).
"""

import cmath
import json
from fractions import Fraction

import reciplab


def close(x, y, tol=1e-12):
    return abs(x - y) <= tol * max(1.0, abs(y))


def test_exact_numbers():
    assert reciplab.bernoulli(2) == "1/6"
    assert reciplab.bernoulli(12) == "-691/2730"
    assert reciplab.alpha("I", 2) == ("1/3", 2)
    assert reciplab.alpha("II", 2) == ("1/6", 2)
    assert reciplab.alpha("I", 3) == ("0/1", 3)
    assert reciplab.apostol_rhs(0, 2, 3) == "-1/18"


def test_kernel_matches_closed_forms():
    z = 0.3 + 0.4j
    pi = cmath.pi
    assert close(reciplab.phi("cot", 1, z), pi / cmath.tan(pi * z))
    assert close(reciplab.phi("csc", 1, z), pi / cmath.sin(pi * z))
    assert close(reciplab.phi("cot", 2, z), (pi / cmath.sin(pi * z)) ** 2)
    assert close(reciplab.phi_at_rational("I", 2, "1/2").real, pi**2)


def test_params_and_expansion():
    p = reciplab.Params([2, 3], m=[1, 2], w=["1/3", "0"], j=(1, 1))
    assert p.w == ["1/3", "0/1"]
    assert p.case == "II"
    assert all(0 <= Fraction(rho) < 1 and k >= 1 for rho, k in p.poles())
    z = 0.17 + 0.61j
    assert close(p.eval(z), p.expand(z))


def test_reports():
    rep = reciplab.verify_identity(reciplab.Params([2, 3, 5]), samples=5, seed=7)
    assert rep.passed and rep.law == "identity" and rep.samples == 5
    assert rep.max_rel_err <= rep.tolerance
    doc = json.loads(rep.to_json())
    assert doc["law"] == "identity" and doc["params"]["a"] == [2, 3, 5]

    laws = [
        reciplab.reciprocity(reciplab.Params([2, 3, 5])),
        reciplab.laurent(reciplab.Params([2, 3]), "1/5", [0, 1, 2]),
        reciplab.multiplicity_free(reciplab.Params([2, 3, 5], w=["0", "1/3", "1/5"], j=(0, 3))),
        reciplab.zagier([2, 3, 5]),
        reciplab.apostol(1, 5, 7),
        reciplab.fukuhara(2, 2, 3, z=[0.37 + 0.21j]),
        reciplab.r2((2, 3), w=("1/2", "3/4")),
    ]
    for rep in laws:
        assert rep.passed, rep


def test_dedekind_sum():
    # s(1, 3) = 1/18 and s(2, 3) = -1/18
    assert close(reciplab.apostol_sum(1, 2, 3).real, -1 / 18)
    assert close(reciplab.apostol_sum(1, 1, 3).real, 1 / 18)


def test_errors_raise_value_error():
    for bad in (
        lambda: reciplab.Params([2, 3], w=["3/2", "0"]),
        lambda: reciplab.fukuhara(1, 2, 3),
        lambda: reciplab.phi("cot", 1, 0j),
        lambda: reciplab.zagier([2, 4, 5]),
    ):
        try:
            bad()
        except ValueError:
            continue
        raise AssertionError("expected ValueError")


def test_family_is_seeded():
    a = [repr(p) for p in reciplab.random_family(1, 6)]
    assert a == [repr(p) for p in reciplab.random_family(1, 6)]
    assert {p.case for p in reciplab.random_family(1, 6)} == {"I", "II"}


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_"):
            fn()
            print(f"ok  {name}")
    print("smoke test passed")
