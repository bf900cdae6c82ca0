"""Smoke test for the n6alg Python extension.

Build and run:

    cargo build --release -p n6alg-python --features extension-module
    cp target/release/libn6alg.so python/n6alg.so
    python3 python/smoke_test.py

Pass --corpus to also run the full corpus (about a minute).
"""

import json
import sys

import n6alg


def main():
    r = json.loads(n6alg.check("a3t-ph", m=2, n=2, p=1, q=1))
    assert r["passed"], r
    assert r["report"]["fi_discrepancies"] == 0

    r = json.loads(n6alg.check("c3-ph", two_n=4, p=1, samples=50, seed=7))
    assert r["passed"] and r["report"]["seed"] == 7

    r = json.loads(n6alg.center("a3t", m=1, n=1))
    assert len(r["center_basis"]) == 2

    r = json.loads(n6alg.tower("a3n-plus", n=2))
    assert r["passed"] and r["graded_dims"] == [4, 6, 4]

    r = json.loads(n6alg.factor("congruence", "4,0;0,-9"))
    assert r["p"] == 1 and r["residual"] == 0.0

    r = json.loads(n6alg.witness("a3n", a="2,0;0,1/2"))
    assert r["pass"] and r["residual"] == 0.0

    r = json.loads(n6alg.witness("c3", h="i,0;0,-i", alpha="2i"))
    assert r["pass"]

    try:
        n6alg.check("nope")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown family accepted")

    r = json.loads(n6alg.corpus(fault="psi-sign", towers=False, infinite=False))
    failing = r["summary"]["failing"]
    assert not r["passed"] and len(failing) == 24
    assert all(f.startswith("C3") for f in failing)

    if "--corpus" in sys.argv:
        r = json.loads(n6alg.corpus())
        assert r["passed"], r["summary"]["failing"]
        print(f"corpus: {r['summary']['passed']}/{r['summary']['instances']}")

    print("smoke test ok")


if __name__ == "__main__":
    main()
