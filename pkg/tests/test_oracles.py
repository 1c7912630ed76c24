import pytest

from coxeter_involutions.errors import MemoryBudgetExceededError, PreconditionError
from coxeter_involutions.oracles import (
    AUTO,
    ExhaustiveOracle,
    NegOrbitOracle,
    get_oracle,
    resolve_mode,
)
from coxeter_involutions.weyl import (
    SubgroupSpec,
    conjugate_by,
    conjugate_in,
    enumerate_group,
    longest_parabolic,
    negated_key,
    simple_reflection,
    word_eval,
)


def test_oracle_registry():
    assert get_oracle("exhaustive") is ExhaustiveOracle
    assert get_oracle("neg_orbit") is NegOrbitOracle
    assert get_oracle("orbit") is NegOrbitOracle
    with pytest.raises(ValueError, match="Available modes"):
        get_oracle("sampling")


def test_auto_mode_follows_the_cap(system):
    full = SubgroupSpec.full()
    assert resolve_mode(system("F4"), full, AUTO) == "exhaustive"
    assert resolve_mode(system("F4"), full, AUTO, cap=1000) == "neg_orbit"
    assert resolve_mode(system("E7"), full, AUTO) == "neg_orbit"
    assert resolve_mode(system("E6"), SubgroupSpec.centralizer(), AUTO) == "exhaustive"
    assert resolve_mode(system("E7"), full, "orbit") == "neg_orbit"


@pytest.mark.parametrize("text", ["B3", "D4", "H3", "A4"])
def test_oracles_agree_on_class_sizes(system, text):
    R = system(text)
    spec = SubgroupSpec.full()
    exhaustive = ExhaustiveOracle(R, spec)
    orbit = NegOrbitOracle(R, spec)
    for w in enumerate_group(R).involutions():
        assert exhaustive.conjugacy_class(w) == orbit.conjugacy_class(w)


def test_class_of_a_reflection(system):
    R = system("A3")
    members = NegOrbitOracle(R, SubgroupSpec.full()).conjugacy_class(simple_reflection(R, 1))
    assert len(members) == 6


@pytest.mark.parametrize("mode", ["exhaustive", "neg_orbit"])
def test_witness_conjugates(system, mode):
    R = system("D4")
    w = longest_parabolic(R, [1, 3])
    w2 = conjugate_by(word_eval(R, [2, 4, 1, 2, 3]), w)
    result = conjugate_in(w, w2, SubgroupSpec.full(), mode, witness=True)
    assert result
    x = word_eval(R, result.witness)
    assert conjugate_by(x, w) == w2


@pytest.mark.parametrize("mode", ["exhaustive", "neg_orbit"])
def test_non_conjugate_pairs(system, mode):
    R = system("B3")
    short = simple_reflection(R, 3)
    long = simple_reflection(R, 1)
    assert not conjugate_in(short, long, SubgroupSpec.full(), mode)
    assert not conjugate_in(short, long, SubgroupSpec.full(), mode, witness=True)


def test_conjugacy_inside_the_centralizer(system):
    R = system("A4")
    spec = SubgroupSpec.centralizer()
    w = word_eval(R, [1, 4])
    w0 = longest_parabolic(R, [1, 2, 3, 4])
    assert not conjugate_in(w, w0, spec, "exhaustive")
    assert not conjugate_in(w, w0, spec, "neg_orbit")
    # both are double transpositions, so W itself conjugates them
    assert conjugate_in(w, w0, SubgroupSpec.full(), "exhaustive")


def test_conjugate_in_checks_its_inputs(system):
    R = system("A4")
    with pytest.raises(PreconditionError):
        conjugate_in(word_eval(R, [1, 2]), simple_reflection(R, 1), SubgroupSpec.full())
    with pytest.raises(PreconditionError):
        conjugate_in(simple_reflection(R, 1), simple_reflection(R, 4), SubgroupSpec.centralizer())


def test_memory_budget_is_enforced(system):
    R = system("F4")
    oracle = ExhaustiveOracle(R, SubgroupSpec.full(), memory_budget=1024)
    with pytest.raises(MemoryBudgetExceededError):
        oracle.load()
    orbit = NegOrbitOracle(R, SubgroupSpec.full(), memory_budget=64)
    with pytest.raises(MemoryBudgetExceededError):
        orbit.conjugacy_class(simple_reflection(R, 1))


def test_exhaustive_oracle_lists_every_involution(system):
    R = system("H3")
    oracle = ExhaustiveOracle(R, SubgroupSpec.full())
    keys = oracle.involution_keys()
    assert len(keys) == len(enumerate_group(R).involutions())
    assert negated_key(simple_reflection(R, 2)) in keys


def test_oracles_report_progress(system):
    R = system("A3")
    messages = []
    oracle = NegOrbitOracle(R, SubgroupSpec.full(), report_progress=messages.append)
    oracle.conjugacy_class(simple_reflection(R, 1))
    assert messages == ["orbit of size 6 explored"]
    messages.clear()
    ExhaustiveOracle(R, SubgroupSpec.full()).load(messages.append)
    assert messages[-1].startswith("enumerated 24 elements")
