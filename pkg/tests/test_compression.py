import pytest

from thicket import (
    build_reconstructors,
    certify_scheme,
    compress,
    greedy_run,
    ldim,
)

from helpers import c3, mk_class, powerset3


def extends(concept, sample):
    return all(concept.value(p) == v for p, v in sample.items())


def test_full_run_single_zero():
    cc = c3()
    run = greedy_run(cc, {"x1": 0, "x2": 1})
    assert run.completed
    assert run.ones == ()
    assert run.zeros == ("x1",)
    assert compress(cc, {"x1": 0, "x2": 1}) == ("x1",)


def test_exceptional_sample_empty_run():
    cc = c3()
    run = greedy_run(cc, {"x1": 1})
    assert not run.completed
    assert run.ones == run.zeros == ()
    assert compress(cc, {"x1": 1}) == ("x1",)


def test_tuple_length_always_matches_dimension():
    cc = mk_class(["000", "001", "010", "011"])
    assert ldim(cc) == 2
    assert compress(cc, {"x1": 0}) == ("x1", "x1")
    assert compress(cc, {"x2": 0, "x3": 1}) == ("x3", "x2")
    assert compress(cc, {"x2": 1}) == ("x2", "x2")
    assert compress(cc, {"x2": 0}) == ("x2", "x2")


def test_same_tuple_from_opposite_halts_still_certifies():
    # {x2:1} and {x2:0} both collapse to (x2, x2); the reconstructor
    # family must cover both, which forces the label split across rhos
    cc = mk_class(["000", "001", "010", "011"])
    rhos = build_reconstructors(cc)
    tup = ("x2", "x2")
    hits_one = [r(tup) for r in rhos if extends(r(tup), {"x2": 1})]
    hits_zero = [r(tup) for r in rhos if extends(r(tup), {"x2": 0})]
    assert hits_one and hits_zero


def test_mixed_early_halt_padding():
    bits = [
        "0001", "0010", "0011", "0100", "0101",
        "1001", "1010", "1011", "1100", "1110", "1111",
    ]
    cc = mk_class(bits)
    assert ldim(cc) == 3
    sample = {"x1": 1, "x2": 0}
    run = greedy_run(cc, sample)
    assert not run.completed
    assert run.ones == ("x1",)
    assert run.zeros == ("x2",)
    tup = compress(cc, sample)
    assert tup == ("x1", "x1", "x2")
    rhos = build_reconstructors(cc)
    assert any(extends(r(tup), sample) for r in rhos)


def test_reconstructor_count_is_dimension_plus_one():
    for cc in (c3(), powerset3(), mk_class(["01"])):
        assert len(build_reconstructors(cc)) == ldim(cc) + 1


def test_singleton_scheme():
    cc = mk_class(["01"])
    rhos = build_reconstructors(cc)
    assert len(rhos) == 1
    assert rhos[0](()) == cc.concepts[0]
    assert compress(cc, {"x2": 1}) == ()
    report = certify_scheme(cc)
    assert report.ok
    assert report.dimension == 0
    assert report.rho_count == 1
    assert report.samples_tested == 3


def test_threshold_rule_on_distinct_tuple():
    cc = mk_class(["00", "01", "10", "11"])
    rhos = build_reconstructors(cc)
    tup = ("x1", "x2")
    assert rhos[0](tup).bitstring() == "00"
    assert rhos[1](tup).bitstring() == "10"
    assert rhos[2](tup).bitstring() == "11"


def test_stable_label_overwrite_on_worked_class():
    cc = c3()
    rhos = build_reconstructors(cc)
    # keeping dimension at x1 needs label 1, so rho_1 extends the
    # canonical partial map {x1: 1, x2: 1} instead of threshold decoding
    assert rhos[1](("x1",)).bitstring() == "11"
    assert rhos[0](("x1",)).bitstring() == "01"
    assert rhos[1](("x2",)).bitstring() == "11"
    assert rhos[0](("x2",)).bitstring() == "10"


def test_reconstructor_validates_tuples():
    cc = c3()
    rhos = build_reconstructors(cc)
    with pytest.raises(ValueError):
        rhos[0](("x1", "x2"))
    with pytest.raises(ValueError):
        rhos[0](("nope",))


def test_compress_rejects_bad_samples():
    cc = c3()
    with pytest.raises(ValueError):
        compress(cc, {})
    with pytest.raises(ValueError):
        compress(cc, {"x1": 0, "x2": 0})
    with pytest.raises(ValueError):
        compress(cc, {"zz": 1})
    with pytest.raises(ValueError):
        compress(cc, {"x1": 2})


def test_certify_worked_class():
    report = certify_scheme(c3())
    assert report.ok
    assert report.dimension == 1
    assert report.rho_count == 2
    assert report.samples_tested == 7
    assert report.failures == ()
    assert report.as_dict() == {
        "d": 1,
        "rho_count": 2,
        "samples_tested": 7,
        "failures": [],
    }


def test_certify_powerset():
    report = certify_scheme(powerset3())
    assert report.ok
    assert report.dimension == 3
    assert report.rho_count == 4


def test_certify_sample_size_limit():
    report = certify_scheme(c3(), max_sample_size=1)
    assert report.ok
    assert report.samples_tested == 4


def test_certify_mixed_halt_class():
    bits = [
        "0001", "0010", "0011", "0100", "0101",
        "1001", "1010", "1011", "1100", "1110", "1111",
    ]
    report = certify_scheme(mk_class(bits))
    assert report.ok
    assert report.dimension == 3
    assert report.rho_count == 4
