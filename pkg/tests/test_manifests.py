"""The shipped manifests must match the code that reads them."""

import json
from pathlib import Path

from satkit.coding import encoding_manifest
from satkit.propcalc import scheme_manifest

ROOT = Path(__file__).resolve().parent.parent


def test_encoding_manifest_in_sync():
    shipped = json.loads((ROOT / "encoding.json").read_text())
    assert shipped == encoding_manifest()


def test_axiom_scheme_manifest_in_sync():
    shipped = json.loads((ROOT / "axiom_schemes.json").read_text())
    assert shipped == scheme_manifest()
