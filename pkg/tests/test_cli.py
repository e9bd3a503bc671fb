import json
import os
import subprocess
import sys
from pathlib import Path

from stratabundle import cli, corpus, jsonio

SRC = str(Path(__file__).resolve().parents[1] / "src")


def run(args):
    return cli.main(args)


def write_example(tmp_path, name):
    path = tmp_path / f"{name}.json"
    jsonio.write_doc(path, corpus.example_doc(name))
    return str(path)


def test_validate_good_and_corrupted_document(tmp_path):
    good = write_example(tmp_path, "perm2_category")
    assert run(["validate", good]) == 0
    doc = json.loads(Path(good).read_text())
    # swap composed with itself is the identity; record it wrongly
    entry = next(e for e in doc["compose"] if e[0] == "p2:10" and e[1] == "p2:10")
    entry[2] = "p2:10"
    bad = tmp_path / "bad.json"
    jsonio.write_doc(bad, doc)
    assert run(["validate", str(bad)]) == 1


def test_validate_unreadable_is_exit_3(tmp_path):
    path = tmp_path / "junk.json"
    path.write_text("][", encoding="utf-8")
    assert run(["validate", str(path)]) == 3


def test_reconstruct_golden_double_cover(tmp_path):
    bundle = write_example(tmp_path, "double_cover_c3")
    out = tmp_path / "iso.json"
    assert run(["reconstruct", bundle, "-o", str(out)]) == 0
    iso = json.loads(out.read_text())
    assert set(iso["cells"]) == {"v0", "v1", "v2", "v0.v1", "v0.v2", "v1.v2"}
    for table in iso["cells"].values():
        assert sorted(table.values()) == ["set2.0", "set2.1"]


def test_pullback_golden_and_refusal(tmp_path):
    bundle = write_example(tmp_path, "double_cover_c3")
    fold = write_example(tmp_path, "c6_fold_map")
    out = tmp_path / "pulled.json"
    assert run(["pullback", bundle, fold, "-o", str(out)]) == 0
    assert run(["validate", str(out)]) == 0

    # mapping the circle onto the disk interior must be refused with exit 2
    disk_bundle = tmp_path / "disk_bundle.json"
    from stratabundle import strabundle

    cat, ff = corpus.bz2_category()
    b, s = corpus.fan_disk()
    jsonio.write_doc(
        disk_bundle,
        jsonio.bundle_to_doc(strabundle.product_bundle(b, s, cat, ff, "pt")),
    )
    refusal = write_example(tmp_path, "refusal_map_into_fan_disk")
    assert run(["pullback", str(disk_bundle), refusal, "-o", str(tmp_path / "no.json")]) == 2


def test_fnspace_principal_coend_chain(tmp_path):
    bundle = write_example(tmp_path, "double_cover_c3")
    category = write_example(tmp_path, "perm2_category")
    fn = tmp_path / "fn.json"
    assert run(["fnspace", bundle, "-V", "set2", "-o", str(fn)]) == 0
    diagram = tmp_path / "diagram.json"
    assert run(["principal", bundle, "-o", str(diagram)]) == 0
    coend = tmp_path / "coend.json"
    assert run(["coend", str(diagram), "--category", category, "-o", str(coend)]) == 0
    assert run(["validate", str(coend)]) == 0
    assert run(["coend", str(diagram)]) == 2  # fibre functor is required


def test_attach_product_stratify_cover(tmp_path):
    y = write_example(tmp_path, "trivial_two_sheets_c3")
    from stratabundle import cellbase, strabundle

    cat, ff = corpus.bz2_category()
    m_base = cellbase.simplex_complex(["u0", "u1", "u2"])
    m = strabundle.product_bundle(m_base, cellbase.single_stratum(m_base), cat, ff, "pt")
    top = cellbase.simplex_name(["u0", "u1", "u2"])
    attachment = {
        "bundle": jsonio.bundle_to_doc(m),
        "attached_cells": sorted(c for c in m_base.cells if c != top),
        "map": {"vertex_map": {"u0": "v0", "u1": "v1", "u2": "v2"}},
        "fibre_morphisms": {c: "e" for c in m_base.cells if c != top},
    }
    att_path = tmp_path / "attachment.json"
    jsonio.write_doc(att_path, attachment)
    glued = tmp_path / "glued.json"
    assert run(["attach", y, str(att_path), "-o", str(glued)]) == 0
    assert run(["validate", str(glued)]) == 0

    other = write_example(tmp_path, "double_cover_c3")
    prod = tmp_path / "prod.json"
    assert run(["product", y, other, "-o", str(prod)]) == 0
    assert run(["validate", str(prod)]) == 0

    strat_doc = tmp_path / "strat.json"
    glue_doc = json.loads(Path(glued).read_text())
    jsonio.write_doc(
        strat_doc,
        {"strata": {c["id"]: c["stratum"] for c in glue_doc["base"]["cells"]}},
    )
    flat = dict(glue_doc)
    flat["base"] = {
        "cells": [dict(c, stratum=0) for c in glue_doc["base"]["cells"]]
    }
    flat_path = tmp_path / "flat.json"
    jsonio.write_doc(flat_path, flat)
    restrat = tmp_path / "restrat.json"
    assert run(["stratify", str(flat_path), str(strat_doc), "-o", str(restrat)]) == 0
    assert json.loads(Path(restrat).read_text()) == glue_doc

    cover = tmp_path / "cover.json"
    assert run(["cover", other, "-o", str(cover), "--dot", str(tmp_path / "g.dot")]) == 0
    cov = json.loads(Path(cover).read_text())
    assert cov["components"] == 1
    assert (tmp_path / "g.dot").read_text().startswith("graph total {")


def test_trivialize_and_certify(tmp_path):
    bundle = write_example(tmp_path, "double_cover_c3")
    out = tmp_path / "t.json"
    assert run(["trivialize", bundle, "--star", "v0", "-o", str(out)]) == 0
    assert json.loads(out.read_text())["kind"] == "trivialization"
    assert run(["trivialize", bundle, "-o", str(out)]) == 0
    assert json.loads(out.read_text())["kind"] == "obstruction"
    assert run(["certify", bundle, "-o", str(out)]) == 0
    assert len(json.loads(out.read_text())["stars"]) == 6
    orbit = write_example(tmp_path, "orbit_free_bundle_c3")
    assert run(["certify", orbit, "-o", str(out)]) == 2


def test_associate_kills_monodromy(tmp_path):
    bundle = write_example(tmp_path, "bz2_double_cover_c3")
    functor = write_example(tmp_path, "bz2_trivializer_functor")
    out = tmp_path / "assoc.json"
    assert run(["associate", bundle, functor, "-o", str(out)]) == 0
    cover = tmp_path / "cov.json"
    assert run(["cover", str(out), "-o", str(cover)]) == 0
    assert json.loads(cover.read_text())["components"] == 2


def test_verify_subcommand_writes_report(tmp_path):
    out = tmp_path / "report.json"
    assert run([
        "verify", "--suite", "pullback", "--seeds", "5", "--seed", "3",
        "--max-cells", "25", "-o", str(out),
    ]) == 0
    doc = json.loads(out.read_text())
    assert doc["suite"] == "pullback"
    assert doc["passes"] == 5
    assert doc["rng"] == "splitmix64"
    assert doc["wall_time"] is None


def test_manifest_roundtrip(tmp_path):
    write_example(tmp_path, "double_cover_c3")
    write_example(tmp_path, "c3_complex")
    assert run(["manifest", str(tmp_path)]) == 0
    assert run(["manifest", str(tmp_path), "--check"]) == 0
    (tmp_path / "c3_complex.json").write_text("{}", encoding="utf-8")
    assert run(["manifest", str(tmp_path), "--check"]) == 1


def test_module_entry_point_runs_in_subprocess(tmp_path):
    env = dict(os.environ, PYTHONPATH=SRC)
    proc = subprocess.run(
        [sys.executable, "-m", "stratabundle", "example", "--list"],
        capture_output=True,
        text=True,
        env=env,
    )
    assert proc.returncode == 0
    assert "double_cover_c3" in proc.stdout
