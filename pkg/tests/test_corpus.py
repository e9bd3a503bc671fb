from pathlib import Path

import pytest

from stratabundle import cli, corpus, fincat, jsonio, strabundle

GOLDEN = Path(__file__).parent / "golden"


@pytest.mark.parametrize("name", corpus.example_names())
def test_golden_files_are_byte_stable(name):
    built = jsonio.canon_dumps(corpus.example_doc(name))
    assert (GOLDEN / f"{name}.json").read_text(encoding="utf-8") == built


def test_golden_manifest_checks_clean():
    assert jsonio.check_manifest(GOLDEN) == []


@pytest.mark.parametrize("name", sorted(corpus._BUNDLES))
def test_every_bundle_example_is_fully_valid(name):
    x = corpus._BUNDLES[name]()
    assert fincat.validate_category(x.cat).ok
    assert fincat.validate_fibre_functor(x.cat, x.ff).ok
    assert strabundle.validate_bundle(x).ok


@pytest.mark.parametrize("name", sorted(corpus._BUNDLES))
def test_every_bundle_example_loads_through_the_cli(tmp_path, name):
    path = GOLDEN / f"{name}.json"
    assert cli.main(["validate", str(path)]) == 0
