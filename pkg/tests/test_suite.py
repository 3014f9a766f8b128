"""Suite runner plumbing and module doctest examples."""

import doctest

import pytest

import sclkit.braids
import sclkit.certio
import sclkit.extension
import sclkit.groups
import sclkit.norms
import sclkit.quasimorphisms
import sclkit.scl
import sclkit.specs
import sclkit.suite
import sclkit.words
from sclkit.suite import DEFAULT_SEED, ITEMS, Item, find_item, run_item


def test_item_registry_shape():
    assert [it.key for it in ITEMS] == [str(k) for k in range(1, 12)]
    assert len({it.slug for it in ITEMS}) == 11
    assert all(it.budget > 0 for it in ITEMS)
    assert DEFAULT_SEED == 7


def test_find_item_by_key_and_slug():
    assert find_item("4").slug == "duality-lower"
    assert find_item("duality-lower").key == "4"
    with pytest.raises(KeyError) as exc:
        find_item("nope")
    assert "counting-values" in str(exc.value)


def test_run_item_captures_crashes():
    def boom(rng, shared):
        raise RuntimeError("injected failure")

    broken = Item(key="99", slug="broken", budget=1.0, fn=boom)
    result = run_item(broken, seed=7, shared={})
    assert not result.ok
    assert "crashed" in result.detail
    assert "injected failure" in result.detail
    assert result.line().startswith("FAIL 99 broken")


def test_run_item_line_format():
    result = run_item(find_item("2"), seed=7, shared={})
    assert result.ok
    line = result.line()
    assert line.startswith("PASS  2 flip-identity (")
    assert line.endswith(result.detail)


@pytest.mark.parametrize(
    "module",
    [
        sclkit.words,
        sclkit.groups,
        sclkit.braids,
        sclkit.quasimorphisms,
        sclkit.norms,
        sclkit.scl,
        sclkit.extension,
        sclkit.specs,
        sclkit.certio,
        sclkit.suite,
    ],
    ids=lambda m: m.__name__.split(".")[-1],
)
def test_module_doctests(module):
    failures, _ = doctest.testmod(module)
    assert failures == 0
