"""Smoke test for the dualcheck extension module."""

import dualcheck


def main():
    x2 = dualcheck.Document.corpus("X2")
    assert x2.kind == "space" and len(x2) == 3
    assert dict(x2.maps())["g"] == [2, 1, 0]

    e = x2.dual()
    assert e.kind == "algebra" and len(e) == 4
    assert dualcheck.Document.parse(e.render()) == e

    assert dualcheck.check_quasi_primal([x2])["outcome"] == "yes"
    assert dualcheck.check_semi_primal(dualcheck.Document.corpus("A2"))["outcome"] == "yes"

    no = dualcheck.check_quasi_primal([dualcheck.Document.corpus("C2")])
    assert no["outcome"] == "no"
    assert no["witness"]["kind"] == "bad_subuniverse"

    spaces = [dualcheck.Document.corpus(n) for n in ("X1", "X2", "X3")]
    assert dualcheck.check_internal(spaces, "f^2 g")["outcome"] == "yes"

    crown = dualcheck.Document.corpus("crown4")
    assert dualcheck.ddp_simplicity(crown)["value"] is True
    assert dualcheck.check_ddp([crown])["outcome"] == "yes"

    w = dualcheck.even_cycle_witness(4)
    assert w["m"] == 4 and w["classification"]["kind"] == "neither"

    try:
        dualcheck.Document.parse("poset P\npoints: a b\norder: a<b, b<a\n")
    except dualcheck.DualcheckError as err:
        assert "line 3" in str(err)
    else:
        raise AssertionError("cyclic order accepted")

    guarded = dualcheck.check_quasi_primal([dualcheck.Document.corpus("C3")], term="eps", guard_product=4)
    assert guarded["outcome"] == "unknown_guard"

    code, out = dualcheck.run_cli(["check", "quasi-primal", "corpus:X2"])
    assert code == 0 and "outcome: yes" in out

    assert dualcheck.acceptance_criterion(2)["passed"] is True
    assert "C6" in dualcheck.corpus_names()
    print("smoke test passed")


if __name__ == "__main__":
    main()
