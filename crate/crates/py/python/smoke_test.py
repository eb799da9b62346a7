"""Builds the extension with cargo and exercises each binding once.

Run from anywhere: python3 crates/py/python/smoke_test.py
"""

import shutil
import subprocess
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

ROOT = Path(__file__).resolve().parents[3]


def load_module():
    subprocess.run(
        ["cargo", "build", "--release", "-p", "qboundary-py"], cwd=ROOT, check=True
    )
    built = ROOT / "target" / "release" / "libqboundary_py.so"
    where = Path(tempfile.mkdtemp())
    shutil.copy(built, where / "qboundary_py.so")
    sys.path.insert(0, str(where))
    import qboundary_py

    return qboundary_py


def main():
    qb = load_module()

    assert qb.q_int(2, "1/2") == Fraction(5, 2)
    assert abs(qb.q_int(2, 0.5) - 2.5) < 1e-12
    assert qb.qdim("1", 2, "1/2") == Fraction(5, 2)
    assert abs(qb.asymptotic_constant(0.5) - 0.371063370492) < 1e-9

    assert qb.fusion("1", "1", 2) == {"0": 1, "2": 1}
    assert sum(m * qb.dim(nu, 3) for nu, m in qb.fusion("2,1", "1,0", 3).items()) == 24
    assert len(qb.ball(3, 4)) == 9
    assert qb.zero_weight_dim("2,1", 3) == 2
    assert qb.mult_in_self_tensor("2,1", "2,1", 3) <= qb.zero_weight_dim("2,1", 3)
    hits = 0
    for u in qb.ball(3, 4):
        for v in qb.ball(3, 4):
            if qb.equality_criterion(u, v, 3):
                hits += 1
                assert qb.mult_in_self_tensor(u, v, 3) == qb.zero_weight_dim(v, 3)
    assert hits > 0

    kernel = qb.Kernel(2, 8, "1/2", "1")
    assert kernel.eigencheck() == (Fraction(4, 5), Fraction(0))
    law = kernel.distribution(2)
    assert sum(law.values()) == 1
    assert kernel.probability("0", "1") == 1
    kernel3 = qb.Kernel(3, 8, "1/2")
    assert kernel3.eigencheck()[0] == Fraction(4, 7)
    paths = qb.Kernel(2, 60, "1/2").sample(100, 30, seed=7)
    assert paths == qb.Kernel(2, 60, "1/2").sample(100, 30, seed=7)
    assert len(paths) == 100 and len(paths[0]) == 30

    cert = qb.coset_certificate("1/2", 50)
    assert cert["lambda"] == Fraction(4, 5) and cert["residual"] == 0
    assert cert["a"][1] == Fraction(2, 3)
    measures = qb.coset_measures("1/2", 20, 5)
    assert len(measures) == 6
    assert all(sum(m) + z == 1 for m, z in measures)
    assert qb.p2s(2, "1/2") == Fraction(3) / qb.q_int(3, "1/2")

    assert qb.hecke_generator(2, "1/2", "pi")[0][0] == Fraction(1, 2)
    plus = qb.hecke_check(2, 3, "1/2", "pi_plus")
    assert plus["relations_hold"] and plus["expectation"] == Fraction(1, 10)
    pi = qb.hecke_check(2, 3, "1/2", "pi")
    assert pi["expectation_kind"] != "scalar"
    assert set(pi["expectation"]) == {Fraction(-11, 10), Fraction(2, 5)}

    try:
        qb.q_int(2, "3/2")
    except ValueError:
        pass
    else:
        raise AssertionError("q outside (0, 1) must be rejected")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
