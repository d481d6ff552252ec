#!/usr/bin/env python3
"""Translate the proof corpus into template logic and report chain lengths.

Optionally writes every proof, translated proof and chain to a directory:
    python3 scripts/translate_corpus.py --out build/corpus
"""

from __future__ import annotations

import argparse
from pathlib import Path

import satkit.sexpr as sexpr
from satkit.corpus import base_corpus
from satkit.kernel import TEMPLATE_POLICY, check, template_policy_for
from satkit.translate import g_bound_at_least, translate_proof


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", help="directory for .sexp files")
    args = ap.parse_args()
    outdir = Path(args.out) if args.out else None
    if outdir:
        outdir.mkdir(parents=True, exist_ok=True)

    width = max(len(e.name) for e in base_corpus())
    failures = 0
    for entry in base_corpus():
        rep = check(entry.proof, entry.policy)
        res = translate_proof(entry.proof, entry.policy)
        lam = entry.policy.extra_axioms
        pol = template_policy_for(lam) if lam else TEMPLATE_POLICY
        rep2 = check(res.proof, pol)
        ok = rep.ok and rep2.ok and g_bound_at_least(res.bound_level(), len(res.chain))
        failures += not ok
        print(f"{entry.name:<{width}}  height={res.height:<3} "
              f"|F|={len(res.chain):<4} template-checks={rep2.ok} "
              f"within-bound={ok}")
        if outdir:
            (outdir / f"{entry.name}.proof.sexp").write_text(
                sexpr.print_proof(entry.proof) + "\n")
            (outdir / f"{entry.name}.tproof.sexp").write_text(
                sexpr.print_proof(res.proof) + "\n")
            (outdir / f"{entry.name}.chain.sexp").write_text(
                sexpr.print_chain(res.chain) + "\n")
    print(f"\n{failures} failures")
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
