"""Clause-to-strand compilation, DNA codebooks, and hybridization verdicts."""

import random

import pytest

import oracles
from strandprover.compiler import (
    SAT_BY_HYBRIDIZATION,
    UNSAT_BY_HYBRIDIZATION,
    Codebook,
    CodebookError,
    CompileError,
    compile_clauses,
    default_codebook,
    format_fasta,
    generate_codebook,
    hamming,
    hybridization_verdict,
    reverse_complement,
)
from strandprover.graph import ExplorationLimitError, Site
from strandprover.logic import Clause, ClauseSet, Literal
from strandprover.process import Process

ROW_1 = "ACGTAGTCACGAATTGACTGTCAGTCGAAT"   # P ~Q R
ROW_2 = "ATGGACCTAGGATCGTGCATATTCGACTGA"   # ~U V ~R


class TestReverseComplement:
    def test_known_pair(self):
        assert reverse_complement("ACGTAGTCAC") == "GTGACTACGT"

    def test_empty(self):
        assert reverse_complement("") == ""

    def test_involution(self):
        rng = random.Random(3)
        for _ in range(200):
            seq = "".join(rng.choice("ACGT") for _ in range(rng.randint(0, 12)))
            assert reverse_complement(reverse_complement(seq)) == seq

    def test_rejects_non_bases(self):
        with pytest.raises(ValueError):
            reverse_complement("ACGU")


class TestHamming:
    def test_counts_mismatches(self):
        assert hamming("ACGT", "ACGT") == 0
        assert hamming("ACGT", "TCGA") == 2

    def test_rejects_unequal_lengths(self):
        with pytest.raises(ValueError):
            hamming("ACG", "ACGT")


class TestCodebook:
    def test_default_sense_codes(self):
        cb = default_codebook()
        assert cb.lookup(Literal("P")) == "ACGTAGTCAC"
        assert cb.lookup(Literal("Q")) == "CAGTCAATTC"
        assert cb.lookup(Literal("R")) == "TCAGTCGAAT"
        assert cb.lookup(Literal("U")) == "CTAGGTCCAT"
        assert cb.lookup(Literal("V")) == "GATCGTGCAT"

    def test_negated_literals_read_as_reverse_complements(self):
        cb = default_codebook()
        assert cb.lookup(Literal("P", True)) == "GTGACTACGT"
        assert cb.lookup(Literal("V", True)) == "ATGCACGATC"
        for var in cb.variables():
            assert cb.lookup(Literal(var, True)) == reverse_complement(cb.sense(var))

    def test_shape(self):
        cb = default_codebook()
        assert cb.variables() == ("P", "Q", "R", "U", "V")
        assert cb.code_length() == 10
        assert "P" in cb and "Z" not in cb

    def test_missing_variable(self):
        with pytest.raises(CodebookError):
            default_codebook().sense("Z")

    def test_rejects_empty(self):
        with pytest.raises(CodebookError):
            Codebook({})

    def test_rejects_mixed_lengths(self):
        with pytest.raises(CodebookError):
            Codebook({"P": "ACGT", "Q": "ACGTA"})

    def test_rejects_duplicate_codes(self):
        with pytest.raises(CodebookError):
            Codebook({"P": "ACGT", "Q": "ACGT"})

    def test_rejects_reverse_complement_collisions(self):
        # Q's code would also spell ~P, collapsing the two variables
        with pytest.raises(CodebookError):
            Codebook({"P": "AACC", "Q": "GGTT"})

    def test_rejects_non_bases(self):
        with pytest.raises(CodebookError):
            Codebook({"P": "ACGX"})

    def test_text_round_trip(self):
        cb = default_codebook()
        assert Codebook.from_text(cb.to_text()) == cb

    def test_from_text_accepts_comments_and_case(self):
        cb = Codebook.from_text("# two codes\nP acgtagtcac\nQ CAGTCAATTC\n")
        assert cb.sense("P") == "ACGTAGTCAC"

    def test_from_text_rejects_malformed_lines(self):
        with pytest.raises(CodebookError):
            Codebook.from_text("P ACGT extra\n")

    def test_from_text_rejects_duplicates(self):
        with pytest.raises(CodebookError):
            Codebook.from_text("P ACGT\nP TTTT\n")


class TestGenerateCodebook:
    def test_deterministic_for_a_seed(self):
        a = generate_codebook(["P", "Q", "R"], seed=9)
        b = generate_codebook(["P", "Q", "R"], seed=9)
        assert a == b

    def test_two_variables_meet_the_distance(self):
        cb = generate_codebook(["P", "Q"], length=10, min_distance=4, seed=1)
        codes = [cb.sense(v) for v in cb.variables()]
        pool = codes + [reverse_complement(c) for c in codes]
        for i, a in enumerate(pool):
            for j, b in enumerate(pool):
                if i != j and a != reverse_complement(b):
                    assert hamming(a, b) >= 4

    def test_infeasible_search_fails(self):
        with pytest.raises(CodebookError):
            generate_codebook([f"x{k}" for k in range(300)], length=4, min_distance=1)

    def test_existing_codes_are_kept(self):
        base = default_codebook()
        cb = generate_codebook(["P", "Z"], base=base, seed=2)
        assert cb.sense("P") == base.sense("P")
        assert "Z" in cb

    def test_base_length_must_agree(self):
        with pytest.raises(CodebookError):
            generate_codebook(["Z"], length=8, base=default_codebook())

    def test_parameter_validation(self):
        with pytest.raises(CodebookError):
            generate_codebook(["P"], length=3)
        with pytest.raises(CodebookError):
            generate_codebook(["P"], min_distance=0)


class TestCompileClauses:
    def test_six_clause_fixture(self):
        from strandprover.fixtures import CLAUSES_S, THEOREM

        p, compiled = compile_clauses(ClauseSet.parse(CLAUSES_S), default_codebook())
        assert str(p) == THEOREM
        assert [c.bases for c in compiled] == [
            ROW_1,
            ROW_2,
            "CAGTCAATTC",   # Q
            "ATGCACGATC",   # ~V
            "GTGACTACGT",   # ~P
            "CTAGGTCCAT",   # U
        ]

    def test_literal_order_is_the_clause_order(self):
        p, _ = compile_clauses(ClauseSet.parse("R ~Q P\n"), default_codebook())
        assert str(p) == "<R Q* P>"

    def test_single_literal_clause(self):
        p, compiled = compile_clauses(ClauseSet.parse("U\n"), default_codebook())
        assert str(p) == "<U>"
        assert compiled[0].bases == "CTAGGTCCAT"

    def test_strand_shape_tracks_the_clause(self):
        s = ClauseSet.parse("P ~Q R\n~U V\n")
        _, compiled = compile_clauses(s, default_codebook())
        for item in compiled:
            assert len(item.strand) == len(item.clause)
            assert len(item.bases) == len(item.clause) * 10

    def test_no_toeholds_are_emitted(self):
        p, _ = compile_clauses(ClauseSet.parse("P ~Q\nQ\n"), default_codebook())
        assert all(not d.toehold for s in p.strands for d in s.domains)

    def test_empty_clause_rejected(self):
        with pytest.raises(CompileError):
            compile_clauses(ClauseSet([Clause()]), default_codebook())

    def test_unknown_variable_rejected(self):
        with pytest.raises(CodebookError):
            compile_clauses(ClauseSet.parse("Z\n"), default_codebook())


class TestFormatFasta:
    def test_fixture_rendering(self):
        from strandprover.fixtures import CLAUSES_S

        _, compiled = compile_clauses(ClauseSet.parse(CLAUSES_S), default_codebook())
        text = format_fasta(compiled)
        assert text.splitlines()[:4] == [
            ">clause 1: P ~Q R",
            ROW_1,
            ">clause 2: ~U V ~R",
            ROW_2,
        ]


class TestHybridizationVerdict:
    def test_fixture_reaches_the_complete_duplex(self):
        from strandprover.fixtures import clause_set_s

        p, _ = compile_clauses(clause_set_s(), default_codebook())
        verdict = hybridization_verdict(p)
        assert verdict.outcome == UNSAT_BY_HYBRIDIZATION
        assert verdict.is_unsat
        assert verdict.free_sites == frozenset()
        assert [m.rule for m in verdict.witness.moves] == ["GB"] * 5
        assert verdict.witness.replay() == verdict.graph.admissible

    def test_single_positive_unit_stays_free(self):
        p, _ = compile_clauses(ClauseSet.parse("P\n"), default_codebook())
        verdict = hybridization_verdict(p)
        assert verdict.outcome == SAT_BY_HYBRIDIZATION
        assert verdict.free_sites == {Site(1, 1)}

    def test_divergence_case_leaves_the_isolated_unit_free(self):
        p, _ = compile_clauses(ClauseSet.parse("P\n~P\nQ\n"), default_codebook())
        verdict = hybridization_verdict(p)
        assert verdict.outcome == SAT_BY_HYBRIDIZATION
        assert verdict.free_sites == {Site(3, 1)}

    def test_outcome_matches_free_sites(self):
        rng = random.Random(29)
        for _ in range(200):
            s = oracles.random_clause_set(rng, variables=3, clauses=4, max_len=2)
            if any(c.is_empty() for c in s):
                continue
            p, _ = compile_clauses(s, default_codebook())
            verdict = hybridization_verdict(p)
            assert verdict.is_unsat == (not verdict.free_sites)
            if verdict.is_unsat:
                # a perfect matching needs balanced positive/negative counts
                for var in s.variables():
                    pos = sum(
                        lit == Literal(var) for c in s for lit in c
                    )
                    neg = sum(
                        lit == Literal(var, True) for c in s for lit in c
                    )
                    assert pos == neg

    def test_empty_system_rejected(self):
        with pytest.raises(ValueError):
            hybridization_verdict(Process(()))

    def test_exploration_limits_propagate(self):
        from strandprover.fixtures import clause_set_s

        p, _ = compile_clauses(clause_set_s(), default_codebook())
        with pytest.raises(ExplorationLimitError):
            hybridization_verdict(p, max_states=2)
