import pytest

import pagrules

CIRCLE = "vertices: X Y\nX o-o Y\n"


def test_version():
    assert pagrules.__version__ == "0.1.0"


def test_canonical_round_trip():
    text = pagrules.canonical("vertices: A B C\nC <-o A\nB --> C\n")
    assert text == "vertices: A B C\nA o-> C\nB --> C\n"
    assert pagrules.canonical(text) == text


def test_parse_error_is_value_error():
    with pytest.raises(ValueError):
        pagrules.canonical("vertices: A B\nA o=o B\n")


def test_single_circle_edge():
    report = pagrules.adjustment_sets(CIRCLE, "X", "Y")
    assert report["outcome"] == "set_of_sets"
    assert report["sets"] == [[]]
    assert pagrules.oracle_adjustment_sets(CIRCLE, "X", "Y") == [[]]
    assert len(pagrules.mags(CIRCLE)) == 3


def test_contradicting_knowledge():
    with pytest.raises(pagrules.ContradictionError):
        pagrules.incorporate_bk("vertices: A B\nA o-> B\n", "A <-- B\n")


def test_generated_instances_agree_with_oracle():
    for seed in range(1, 6):
        pag = pagrules.generate(observed=5, latents=1, edge_prob=0.45, seed=seed)["pag"]
        assert pagrules.orient(pag, with_new_rules=False) == pag
        report = pagrules.adjustment_sets(pag, "A", "B", backdoor_shortcut=False)
        baseline = pagrules.adjustment_sets(pag, "A", "B", baseline=True, backdoor_shortcut=False)
        assert report["sets"] == baseline["sets"]
        assert sorted(report["sets"]) == sorted(pagrules.oracle_adjustment_sets(pag, "A", "B"))


def test_generation_is_deterministic():
    assert pagrules.generate(seed=7) == pagrules.generate(seed=7)
