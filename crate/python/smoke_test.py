"""Smoke test for the Python bindings.

Build and install first:

    pip install --no-build-isolation -e crates/python
    python python/smoke_test.py
"""

import json

import cr_moduli as cm


def main():
    m = cm.Model.m14("1+i", "2")
    a, b = m.parameters()
    assert (str(a), str(b)) == ("(1+i)", "2"), (a, b)

    rep = cm.invariant(m)
    assert rep.class_tag == "generic"
    assert str(rep.invariant) == "1/2"
    assert cm.InvariantReport.from_json(rep.to_json()) == rep

    both = cm.invariant(m, pipeline="both", branch="both")
    assert both.invariant == rep.invariant

    symbolic = cm.invariant(cm.Model.m14(), pipeline="lie")
    assert str(symbolic.invariant) == "a*conj(a)/b^2", symbolic.invariant

    cert = cm.decide_equivalence(cm.Model.m14("1", "2"), cm.Model.m14("2", "4"))
    assert cert.verdict == "Equivalent" and cert.equivalent
    cert = cm.decide_equivalence(cm.Model.m14("3", "0"), cm.Model.m14("5i", "0"))
    assert cert.equivalent
    assert not cm.decide_equivalence(cm.Model.m14("1", "1"), cm.Model.m14("1", "2")).equivalent

    roles = [r for r, _ in cm.frame(m)]
    assert roles == ["L", "Lbar", "T", "S", "Sbar", "U"], roles
    assert "[L, S] = a*U" in cm.commutator_table_text(cm.Model.m14())
    assert "d(rho0) = i*zeta0/\\zetabar0" in cm.coframe_text(cm.Model.m14()), cm.coframe_text(cm.Model.m14())
    assert str(cm.lie_coefficient("r", "b")) == "9/4*r^2/b^2"

    run = json.loads(cm.cartan_json(m, branch="-1"))
    assert run["invariants"]["R"] == "1/2" and run["branch"] == -1

    oracle = json.loads(cm.invariance_oracle(m, samples=5, seed=1))
    assert oracle["passed"] and len(oracle["samples"]) == 5

    x = cm.Scalar("1+2*i")
    assert str(x * x.conj()) == "5"
    assert x.conj().conj() == x

    try:
        cm.invariant(cm.Model.m14("0", "0"))
    except cm.DegenerateModelError:
        pass
    else:
        raise AssertionError("M(0,0) accepted")

    code, out, _ = cm.run_cli(["invariant", "--a", "1+1i", "--b", "2", "--format", "json"])
    assert code == 0 and out == '{"class":"generic","invariant":"1/2"}\n', (code, out)
    code, _, err = cm.run_cli(["invariant", "--a", "0", "--b", "0"])
    assert code == 2 and err.startswith("error[degenerate-model]"), (code, err)

    print("python smoke test passed")


if __name__ == "__main__":
    main()
