import copy
import json

import pytest

from freediv.corpus import HOOKS, PASS, SKIPPED, load_entries, parse_entry, run_corpus, run_entry
from freediv.errors import InputError

CUSP = {
    "name": "cusp",
    "job": {"variables": ["x", "y"], "f": "x^3 - y^2"},
    "expected": {"traces": {"value": ["0", "5"], "provenance": "derived"}},
}


def test_shipped_corpus_passes():
    suite = run_corpus()
    assert suite.passed, json.dumps(suite.to_dict(), indent=1)
    assert len(suite.entries) >= 8
    assert [e.name for e in suite.entries] == sorted(e.name for e in suite.entries)


def test_hooks_report_pass_or_skip():
    for result in run_corpus().entries:
        assert set(result.properties) == set(HOOKS)
        assert all(h.status in (PASS, SKIPPED) for h in result.properties.values())


def test_parallel_run_is_identical():
    entries = load_entries()
    assert run_corpus(entries, workers=4).to_dict() == run_corpus(entries).to_dict()


def test_wrong_expectation_fails():
    doc = copy.deepcopy(CUSP)
    doc["expected"]["traces"]["value"] = ["0", "6"]
    result = run_entry(parse_entry(doc))
    assert result.failures == 1
    assert not result.expectations["traces"]["ok"]


@pytest.mark.parametrize("mutate, pointer", [
    (lambda d: d.pop("name"), "/"),
    (lambda d: d["job"].update(variables="x"), "/job/variables"),
    (lambda d: d["expected"]["traces"].update(provenance="guess"), "/expected/traces/provenance"),
    (lambda d: d["job"].update(f="x^"), "/job/f"),
    (lambda d: d["job"].update(colour=1), "/job"),
])
def test_malformed_entries_name_the_field(mutate, pointer):
    doc = copy.deepcopy(CUSP)
    mutate(doc)
    with pytest.raises(InputError) as info:
        parse_entry(doc)
    assert str(info.value).startswith(pointer)


def test_directory_loading(tmp_path):
    (tmp_path / "a.json").write_text(json.dumps(CUSP))
    (tmp_path / "b.json").write_text(json.dumps(CUSP))
    with pytest.raises(InputError, match="unique"):
        load_entries(tmp_path)
    (tmp_path / "b.json").unlink()
    assert [e.name for e in load_entries(tmp_path)] == ["cusp"]
    with pytest.raises(InputError):
        load_entries(tmp_path / "missing")
