import json
import subprocess
import sys

import pytest

import satkit.sexpr as sexpr
from satkit.cli import main
from satkit.corpus import commute_or_proof
import satkit.syntax as sx


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr().out
    return code, out


class TestBasicCommands:
    def test_gbound(self, capsys):
        code, out = run_cli(["gbound", "2"], capsys)
        assert code == 0 and out.strip() == "1535"

    def test_gbound_refuses_four(self, capsys):
        code, _ = run_cli(["gbound", "4"], capsys)
        assert code != 0

    def test_encode_decode_round_trip(self, capsys):
        text = "(= (sc 0) v0)"
        code, out = run_cli(["encode", text], capsys)
        assert code == 0
        n = out.strip()
        code, out = run_cli(["decode", n], capsys)
        assert code == 0 and out.strip() == text

    def test_eval_tr(self, capsys):
        code, out = run_cli(
            ["eval-tr", "--class", "d0",
             "--formula", "(bex 0 c10 (= (* v0 v0) c49))"], capsys)
        assert code == 0 and out.strip() == "True"

    def test_eval_tr_json_matches_text(self, capsys):
        args = ["eval-tr", "--class", "d0", "--formula", "(= 0 0)"]
        _, text_out = run_cli(args, capsys)
        _, json_out = run_cli(args + ["--json"], capsys)
        assert json.loads(json_out)["verdict"] == text_out.strip()


class TestProofCommands:
    @pytest.fixture()
    def proof_file(self, tmp_path):
        p = commute_or_proof(sx.Eq(sx.ZERO, sx.ZERO),
                             sx.Eq(sx.Succ(sx.ZERO), sx.Succ(sx.ZERO)))
        f = tmp_path / "proof.sexp"
        f.write_text(sexpr.print_proof(p) + "\n")
        return f

    def test_check(self, proof_file, capsys):
        code, out = run_cli(["check", "--in", str(proof_file)], capsys)
        assert code == 0
        assert "ok: True" in out and "height: 6" in out

    def test_check_json_verdict_matches(self, proof_file, capsys):
        _, out = run_cli(["check", "--in", str(proof_file), "--json"], capsys)
        payload = json.loads(out)
        assert payload["ok"] is True and payload["height"] == 6

    def test_translate_emits_chain_and_proof(self, proof_file, tmp_path, capsys):
        out_proof = tmp_path / "tproof.sexp"
        out_chain = tmp_path / "chain.sexp"
        code, out = run_cli(
            ["translate", "--in", str(proof_file),
             "--out", str(out_proof), "--emit-chain", str(out_chain)], capsys)
        assert code == 0 and "within-bound: True" in out
        chain = sexpr.parse_chain(out_chain.read_text())
        assert len(chain) > 0
        tproof = sexpr.parse_proof(out_proof.read_text())
        code, out = run_cli(
            ["check", "--in", str(out_proof), "--logic", "template"], capsys)
        assert code == 0

    def test_hypothesis_proof_translates_through_files(self, tmp_path, capsys):
        from satkit.corpus import neq_from_hypotheses
        from satkit.elements import std
        t = sx.Add(sx.Succ(sx.ZERO), sx.Succ(sx.ZERO))
        r = sx.Mul(sx.const(std(2)), sx.const(std(3)))
        proof = tmp_path / "fig.sexp"
        proof.write_text(sexpr.print_proof(
            neq_from_hypotheses(t, r, std(2), std(6))) + "\n")
        lam = tmp_path / "lam.txt"
        lam.write_text("(= (+ (sc 0) (sc 0)) c2)\n(= (* c2 c3) c6)\n")
        code, _ = run_cli(["check", "--in", str(proof), "--lam", str(lam)], capsys)
        assert code == 0
        tproof = tmp_path / "figt.sexp"
        code, _ = run_cli(["translate", "--in", str(proof), "--lam", str(lam),
                           "--out", str(tproof)], capsys)
        assert code == 0
        code, out = run_cli(["check", "--in", str(tproof), "--logic", "template",
                             "--lam", str(lam)], capsys)
        assert code == 0 and "ok: True" in out

    def test_check_failure_exit_code(self, tmp_path, capsys):
        bad = "(rule axiom3 (concl (= 0 (sc 0))))"
        f = tmp_path / "bad.sexp"
        f.write_text(bad)
        code, out = run_cli(["check", "--in", str(f)], capsys)
        assert code == 1 and "ok: False" in out


class TestWitnessCommands:
    def test_delta(self, capsys):
        code, out = run_cli(
            ["witness", "delta", "--a", "w[a]", "--depth", "8"], capsys)
        assert code == 0 and "ok: True" in out

    def test_sc_tower(self, capsys):
        code, out = run_cli(
            ["witness", "sc-tower", "--family", "num", "--height", "w[h]",
             "--a", "w[a]", "--depth", "10"], capsys)
        assert code == 0 and "ok: True" in out

    def test_free_tower(self, capsys):
        code, out = run_cli(
            ["witness", "free-tower", "--a", "w[a]", "--b", "w[b]",
             "--depth", "6"], capsys)
        assert code == 0 and "ok: True" in out


class TestDataCommands:
    def test_quotient(self, tmp_path, capsys):
        f = tmp_path / "eqs.sexp"
        f.write_text("(= (+ (sc 0) (sc 0)) c2)\n(= (sc 0) c1)\n")
        code, out = run_cli(["quotient", "--equations", str(f)], capsys)
        assert code == 0
        assert "injective-on-constants: True" in out

    def test_henkin(self, tmp_path, capsys):
        f = tmp_path / "enum.txt"
        f.write_text("(= 0 0)\n(= c1 c2)\n(ex 0 (= v0 c3))\n")
        code, out = run_cli(["henkin", "--enumeration", str(f)], capsys)
        assert code == 0 and "clauses-pass: True" in out

    def test_skolem_find_and_check(self, tmp_path, capsys):
        code, out = run_cli(
            ["skolem", "--q", "[A0,E1]", "--formula", "(= (+ v0 c2) v1)",
             "--grid", "4", "--search", "8"], capsys)
        assert code == 0 and "found: True" in out
        table = tmp_path / "t.json"
        table.write_text(json.dumps({"0": [0], "1": [1]}))
        code, out = run_cli(
            ["skolem", "--q", "[A0,E1]", "--table", str(table)], capsys)
        assert code == 0 and "ok: True" in out

    def test_prop_check(self, tmp_path, capsys):
        from satkit.propcalc import derive_or_search
        cert = derive_or_search(
            sx.Or(sx.Eq(sx.ZERO, sx.ZERO), sx.Not(sx.Eq(sx.ZERO, sx.ZERO))), [])
        f = tmp_path / "cert.sexp"
        f.write_text(sexpr.print_certificate(cert))
        code, out = run_cli(["prop-check", "--cert", str(f)], capsys)
        assert code == 0 and "ok: True" in out

    def test_approx(self, tmp_path, capsys):
        chain = tmp_path / "chain.sexp"
        chain.write_text("(chain (delta 2))")
        code, out = run_cli(
            ["approx", "--chain", str(chain), "--input", "(tf (delta 2))"], capsys)
        assert code == 0
        d1 = "(or (not (= 0 0)) (not (= 0 0)))"
        assert out.strip() == f"(or (tf {d1}) (tf {d1}))"

    def test_manifests(self, capsys):
        code, out = run_cli(["manifest", "encoding"], capsys)
        assert code == 0 and json.loads(out)["base"] == 16
        code, out = run_cli(["manifest", "axioms"], capsys)
        assert code == 0 and "schemes" in json.loads(out)


class TestProofFileFormat:
    def test_whole_corpus_round_trips_and_rechecks(self):
        from satkit.corpus import base_corpus
        from satkit.kernel import check
        for entry in base_corpus():
            text = sexpr.print_proof(entry.proof)
            back = sexpr.parse_proof(text)
            assert sexpr.print_proof(back) == text, entry.name
            assert check(back, entry.policy).ok, entry.name


class TestExtendedNodeFiles:
    def test_certified_and_skolem_nodes_round_trip(self):
        from satkit.corpus import mprop_entries
        from satkit.kernel import Proof, RulePolicy, check, seq
        from satkit.skolem import apply_skolem, build_prefixed, quantseq, table_of
        from satkit.elements import std
        for entry in mprop_entries():
            text = sexpr.print_proof(entry.proof)
            back = sexpr.parse_proof(text)
            assert sexpr.print_proof(back) == text
            assert check(back, entry.policy).ok, entry.name

        q = quantseq(("A", 0), ("E", 1))
        phi = sx.Eq(sx.Var(1), sx.Succ(sx.Var(0)))
        table = table_of({(k,): (k + 1,) for k in range(3)})
        samples = ((0,), (1,), (2,))
        prems = tuple(
            Proof(seq(apply_skolem(phi, q, table, a)), "axiomL") for a in samples)
        node = Proof(seq(build_prefixed(q, phi)), "skolem", prems,
                     info={"skolem": {"q": q, "table": table, "phi": phi,
                                      "samples": samples}})
        pol = RulePolicy(allow_skolem=True, extra_axioms=lambda f: True)
        text = sexpr.print_proof(node)
        back = sexpr.parse_proof(text)
        assert sexpr.print_proof(back) == text
        assert check(back, pol).ok

        inst = sx.Eq(sx.Add(sx.const(std(2)), sx.const(std(3))), sx.const(std(5)))
        block_node = Proof(
            seq(sx.Ex(0, sx.Ex(1, sx.Ex(2, sx.Eq(sx.Add(sx.Var(0), sx.Var(1)), sx.Var(2)))))),
            "i-ex-inf",
            (Proof(seq(inst), "axiomL"),),
            info={"block": (0, 1, 2), "tuple": (std(2), std(3), std(5))})
        pol2 = RulePolicy(allow_inf=True, extra_axioms={inst}.__contains__)
        text = sexpr.print_proof(block_node)
        back = sexpr.parse_proof(text)
        assert sexpr.print_proof(back) == text
        assert check(back, pol2).ok


class TestDeterminism:
    def test_byte_identical_reports(self, tmp_path):
        p = commute_or_proof(sx.Eq(sx.ZERO, sx.ZERO),
                             sx.Eq(sx.Succ(sx.ZERO), sx.Succ(sx.ZERO)))
        f = tmp_path / "proof.sexp"
        f.write_text(sexpr.print_proof(p) + "\n")
        cmd = [sys.executable, "-m", "satkit", "check", "--in", str(f), "--json"]
        a = subprocess.run(cmd, capture_output=True, check=True).stdout
        b = subprocess.run(cmd, capture_output=True, check=True).stdout
        assert a == b

    def test_usage_error_exit_code(self):
        cmd = [sys.executable, "-m", "satkit", "no-such-command"]
        out = subprocess.run(cmd, capture_output=True)
        assert out.returncode == 2
