#!/usr/bin/env python3
"""Write every named example document to a directory (default tests/golden).

Run after changing the corpus builders, then review the diff; the golden
test compares these bytes against freshly built documents.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from stratabundle import corpus, jsonio  # noqa: E402


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--out",
        default=str(Path(__file__).resolve().parents[1] / "tests" / "golden"),
    )
    args = parser.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name in corpus.example_names():
        jsonio.write_doc(out / f"{name}.json", corpus.example_doc(name))
        print(f"wrote {name}.json")
    manifest = jsonio.build_manifest(out)
    jsonio.write_doc(out / "manifest.json", manifest)
    print(f"manifest covers {len(manifest['documents'])} documents")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
