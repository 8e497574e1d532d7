import math
import random

import pytest

from catvec import (
    Approach,
    CategoryModel,
    Collection,
    DfTable,
    SparseVector,
    Split,
    SynsetMap,
    Vocabulary,
    build_df_table,
    build_direct,
    build_integrated,
    build_lexicon,
    build_training,
    cf_band,
    classify,
    load_model,
    match_terms,
    parse_collection,
    save_model,
    score_documents,
    select_training_terms,
    terms_present,
    training_weight,
)
from catvec.categorizers import model_from_dict, model_to_dict

from conftest import make_doc, random_training_fixture
from oracles import brute_select_terms, brute_training_weights


def label(model):
    """term string -> weight, per category, for readable comparisons."""
    return {
        cat: {
            " ".join(model.vocab.term_of(tid)): w for tid, w in vec.items()
        }
        for cat, vec in model.vectors.items()
    }


class TestCfBand:
    def test_reuters_scale(self):
        assert cf_band(135) == (2, 13)

    def test_small_category_count_gives_empty_band(self):
        low, high = cf_band(3)
        assert low == 1 and high == 0

    def test_twenty_categories(self):
        assert cf_band(20) == (1, 2)


class TestTrainingWeight:
    def test_direct_arithmetic(self):
        assert training_weight(7, 8, 2) == 14.0

    def test_cf_equal_to_category_count_weighs_zero(self):
        assert training_weight(5, 8, 8) == 0.0


class TestBuildDirect:
    def test_singleton(self):
        model = build_direct(["grain"])
        assert model.vocab.terms == (("grain",),)
        assert model.vectors["grain"] == SparseVector({0: 1.0})

    def test_multi_synonym_name(self):
        model = build_direct(["iron-steel"])
        assert model.vocab.terms == (("iron",), ("steel",))
        assert model.vectors["iron-steel"] == SparseVector({0: 1.0, 1: 1.0})

    def test_weights_are_only_ones(self):
        model = build_direct(["gold", "iron-steel", "balance of payments"])
        for vec in model.vectors.values():
            assert all(w == 1.0 for _, w in vec.items())

    def test_shared_name_piece_shares_term_id(self):
        model = build_direct(["soy-meal", "rape-meal"])
        meal = model.vocab.id_of(("meal",))
        assert model.vectors["soy-meal"].weight(meal) == 1.0
        assert model.vectors["rape-meal"].weight(meal) == 1.0

    def test_empty_category_list_rejected(self):
        with pytest.raises(ValueError):
            build_direct([])


class TestBuildLexicon:
    def test_expansion_weights(self, tmp_path):
        from catvec import load_lexicon

        path = tmp_path / "l.lex"
        path.write_text("fuel: fuel | combustible | combustible material\n")
        model = build_lexicon(["fuel"], load_lexicon(path))
        assert label(model)["fuel"] == {
            "fuel": 1.0,
            "combustible": 1.0,
            "combustible material": 1.0,
        }

    def test_empty_map_equals_direct(self):
        categories = ["gold", "iron-steel", "balance of payments"]
        lex = build_lexicon(categories, SynsetMap.empty())
        direct = build_direct(categories)
        assert lex.vocab == direct.vocab
        assert lex.vectors == direct.vectors
        assert lex.categories == direct.categories

    def test_shared_synonym_drives_both_categories(self, tmp_path):
        from catvec import load_lexicon

        path = tmp_path / "l.lex"
        path.write_text("crude: petroleum\nfuel: petroleum\n")
        model = build_lexicon(["crude", "fuel"], load_lexicon(path))
        petroleum = model.vocab.id_of(("petroleum",))
        assert model.vectors["crude"].weight(petroleum) == 1.0
        assert model.vectors["fuel"].weight(petroleum) == 1.0
        # a petroleum-only document must score both categories
        dft = DfTable({petroleum: 1}, 2)
        doc_vec = SparseVector({petroleum: 1.0})
        from catvec import cosine

        assert cosine(doc_vec, model.vectors["crude"]) > 0
        assert cosine(doc_vec, model.vectors["fuel"]) > 0


def make_labeled_collection(rows, categories):
    """rows: (doc_id, text, topics)"""
    docs = tuple(make_doc(i, text, topics) for i, text, topics in rows)
    return Collection(docs, tuple(categories))


class TestSelectTrainingTerms:
    def test_term_in_every_category_excluded(self):
        # L=3: band is ceil(0.03)=1 .. floor(0.3)=0, so nothing survives
        rows = [
            (1, "export wheat", ("c1",)),
            (2, "export gold", ("c2",)),
            (3, "export oil", ("c3",)),
        ]
        vocab, _ = select_training_terms(
            make_labeled_collection(rows, ["c1", "c2", "c3"])
        )
        assert ("export",) not in vocab

    def test_unlabeled_occurrences_do_not_count(self):
        # 10 categories: band 1..1; "ghost" only in unlabeled docs -> cf 0
        categories = [f"c{i}" for i in range(10)]
        rows = [(1, "ghost story", ()), (2, "solid facts", ("c0",))]
        vocab, cf = select_training_terms(
            make_labeled_collection(rows, categories)
        )
        assert ("ghost",) not in vocab
        assert ("solid",) in vocab
        assert cf[vocab.id_of(("solid",))] == 1

    def test_ranked_by_df_then_name_and_truncated(self):
        categories = [f"c{i}" for i in range(10)]  # band 1..1
        rows = [
            (1, "zeta alpha beta", ("c0",)),
            (2, "zeta beta", ()),
            (3, "zeta", ()),
        ]
        vocab, _ = select_training_terms(
            make_labeled_collection(rows, categories), max_terms=2
        )
        # df: zeta 3, beta 2, alpha 1 -> keep zeta, beta
        assert vocab.terms == (("zeta",), ("beta",))

    def test_lexicographic_tie_break(self):
        categories = [f"c{i}" for i in range(10)]
        rows = [(1, "delta alpha", ("c0",))]
        vocab, _ = select_training_terms(
            make_labeled_collection(rows, categories), max_terms=1
        )
        assert vocab.terms == (("alpha",),)

    def test_matches_brute_force_enumeration(self):
        rng = random.Random(90210)
        for _ in range(150):
            train = random_training_fixture(rng, max_docs=12, max_cats=5)
            max_terms = rng.choice([1, 3, 286])
            vocab, cf = select_training_terms(train, max_terms)
            docs = [d.tokens for d in train.documents]
            topics = [d.topics for d in train.documents]
            expected, expected_cf = brute_select_terms(
                docs, topics, train.categories, max_terms
            )
            assert [t[0] for t in vocab.terms] == expected
            assert {vocab.term_of(i)[0]: n for i, n in cf.items()} == {
                t: expected_cf[t] for t in expected
            }


class TestBuildTraining:
    def fixture(self):
        # 20 categories in the declared set, 2 of them used; band is 1..2
        categories = [f"c{i}" for i in range(20)]
        rows = [
            (1, "wheat wheat harvest", ("c0",)),
            (2, "wheat exports", ("c0", "c1")),
            (3, "gold mine", ("c1",)),
            (4, "quiet day", ()),
        ]
        return make_labeled_collection(rows, categories)

    def test_weights_accumulate_across_labeled_docs(self):
        model = build_training(self.fixture())
        weights = label(model)
        # "harvest": cf 1 (c0 only), tf 1 for c0 -> 1 * log2(20)
        assert weights["c0"]["harvest"] == pytest.approx(math.log2(20))
        # "wheat": cf 2, tf 3 for c0 (two docs) -> 3 * log2(20 / 2)
        assert weights["c0"]["wheat"] == pytest.approx(3 * math.log2(10))

    def test_multi_topic_doc_contributes_to_every_topic(self):
        model = build_training(self.fixture())
        weights = label(model)
        # "exports" occurs once in a doc labeled both c0 and c1
        assert weights["c0"]["exports"] == pytest.approx(math.log2(10))
        assert weights["c1"]["exports"] == pytest.approx(math.log2(10))

    def test_unused_category_gets_empty_vector(self):
        model = build_training(self.fixture())
        assert model.vectors["c19"] == SparseVector()

    def test_shortfall_recorded_in_metadata(self):
        model = build_training(self.fixture(), max_terms=286)
        assert model.metadata["training_term_shortfall"] == 286 - len(model.vocab)

    def test_no_shortfall_when_enough_terms(self):
        model = build_training(self.fixture(), max_terms=2)
        assert "training_term_shortfall" not in model.metadata

    def test_matches_triple_loop_oracle(self):
        rng = random.Random(513)
        for _ in range(150):
            train = random_training_fixture(rng, max_docs=10, max_cats=5)
            model = build_training(train, max_terms=286)
            docs = [d.tokens for d in train.documents]
            topics = [d.topics for d in train.documents]
            selected, cf = brute_select_terms(docs, topics, train.categories, 286)
            expected = brute_training_weights(
                docs, topics, train.categories, selected, cf
            )
            got = {
                (cat, term): w
                for cat, terms in label(model).items()
                for term, w in terms.items()
            }
            assert got == expected


class TestBuildIntegrated:
    def hand_models(self):
        categories = ("k",)
        lex_vocab = Vocabulary([("a",), ("b",)])
        lex = CategoryModel(
            Approach.LEXICON,
            lex_vocab,
            {"k": SparseVector({0: 1.0, 1: 1.0})},
            categories,
        )
        trn_vocab = Vocabulary([("b",), ("c",)])
        trn = CategoryModel(
            Approach.TRAINING,
            trn_vocab,
            {"k": SparseVector({0: 4.0, 1: 4.0})},
            categories,
        )
        return lex, trn

    def test_hand_worked_merge(self):
        lex, trn = self.hand_models()
        model = build_integrated(lex, trn, {("a",), ("b",), ("c",)})
        assert label(model)["k"] == {"a": 0.5, "b": 1.0, "c": 0.5}

    def test_lexicon_only_category_keeps_unit_mass(self):
        categories = ("crude",)
        lex = CategoryModel(
            Approach.LEXICON,
            Vocabulary([("petroleum",)]),
            {"crude": SparseVector({0: 1.0})},
            categories,
        )
        trn = CategoryModel(
            Approach.TRAINING, Vocabulary([("x",)]),
            {"crude": SparseVector()}, categories,
        )
        model = build_integrated(lex, trn, {("petroleum",), ("x",)})
        assert label(model)["crude"] == {"petroleum": 1.0}

    def test_terms_absent_from_training_text_dropped(self):
        lex, trn = self.hand_models()
        # "a" never occurs in training text: survivors renormalize over b
        model = build_integrated(lex, trn, {("b",), ("c",)})
        assert label(model)["k"] == {"b": 1.5, "c": 0.5}

    def test_merged_vocabulary_is_union_of_survivors_and_training(self):
        lex, trn = self.hand_models()
        model = build_integrated(lex, trn, {("a",), ("b",), ("c",)})
        assert set(model.vocab.terms) == {("a",), ("b",), ("c",)}
        assert model.metadata["merged_term_count"] == 3
        assert model.metadata["lexicon_term_count"] == 2
        assert model.metadata["training_term_count"] == 2

    def test_category_mismatch_rejected(self):
        lex, trn = self.hand_models()
        other = CategoryModel(
            Approach.TRAINING, trn.vocab, {"z": SparseVector()}, ("z",)
        )
        with pytest.raises(ValueError):
            build_integrated(lex, other, set())

    def test_sources_contribute_unit_l1_mass(self):
        rng = random.Random(88)
        for _ in range(50):
            categories = tuple(f"c{i}" for i in range(rng.randint(1, 4)))
            lex_terms = [(f"t{i}",) for i in range(rng.randint(1, 6))]
            trn_terms = [(f"t{i}",) for i in range(3, 3 + rng.randint(1, 6))]
            lex = CategoryModel(
                Approach.LEXICON,
                Vocabulary(lex_terms),
                {
                    c: SparseVector(
                        {
                            i: 1.0
                            for i in range(len(lex_terms))
                            if rng.random() < 0.6
                        }
                    )
                    for c in categories
                },
                categories,
            )
            trn = CategoryModel(
                Approach.TRAINING,
                Vocabulary(trn_terms),
                {
                    c: SparseVector(
                        {
                            i: rng.uniform(0.5, 20)
                            for i in range(len(trn_terms))
                            if rng.random() < 0.6
                        }
                    )
                    for c in categories
                },
                categories,
            )
            survivors = {t for t in lex_terms if rng.random() < 0.8}
            model = build_integrated(lex, trn, survivors)
            for cat in categories:
                kept_lex = [
                    t
                    for tid, _ in lex.vectors[cat].items()
                    if (t := lex.vocab.term_of(tid)) in survivors
                ]
                expected_mass = (1.0 if kept_lex else 0.0) + (
                    1.0 if trn.vectors[cat] else 0.0
                )
                assert model.vectors[cat].l1() == pytest.approx(
                    expected_mass, abs=1e-9
                )
                # support contains both scaled sources
                support_terms = {
                    model.vocab.term_of(tid) for tid, _ in model.vectors[cat].items()
                }
                assert support_terms >= set(kept_lex)
                assert support_terms >= {
                    trn.vocab.term_of(tid) for tid, _ in trn.vectors[cat].items()
                }


class TestClassify:
    def test_exact_name_match_scores_one(self):
        model = build_direct(["grain", "gold"])
        dft = DfTable({model.vocab.id_of(("grain",)): 1}, 2)
        doc = make_doc(1, "grain")
        scored = classify(doc, model, dft)
        assert scored[0].category == "grain"
        assert scored[0].score == pytest.approx(1.0, abs=1e-12)
        assert scored[1].score == 0.0

    def test_no_shared_vocabulary_scores_all_zero(self):
        model = build_direct(["grain", "gold"])
        dft = DfTable({0: 1}, 2)
        scored = classify(make_doc(1, "weather sunny"), model, dft)
        assert all(s.score == 0.0 for s in scored)

    def test_multiword_name_matches_running_text(self, payments_record):
        collection = parse_collection(payments_record)
        categories = ["balance of payments", "grain", "trade"]
        model = build_direct(categories)
        doc = collection.documents[0]
        other = make_doc(2, "grain shipments steady this week")
        dft = build_df_table([doc.tokens, other.tokens], model.vocab)
        scored = {s.category: s.score for s in classify(doc, model, dft)}
        assert scored["balance of payments"] > 0.0
        assert scored["grain"] == 0.0

    def test_ranking_invariant_under_category_vector_scaling(self):
        rng = random.Random(13)
        vocab = Vocabulary([(f"t{i}",) for i in range(6)])
        categories = ("a", "b", "c")
        vectors = {
            c: SparseVector(
                {i: rng.uniform(0.1, 5) for i in range(6) if rng.random() < 0.7}
            )
            for c in categories
        }
        model = CategoryModel(Approach.TRAINING, vocab, vectors, categories)
        scaled = CategoryModel(
            Approach.TRAINING,
            vocab,
            {c: v.scaled(rng.uniform(0.5, 10)) for c, v in vectors.items()},
            categories,
        )
        dft = DfTable({i: 1 for i in range(6)}, 3)
        doc = make_doc(1, "t0 t1 t2 t3 t4 t5 t0 t2")
        order = [s.category for s in classify(doc, model, dft)]
        scaled_order = [s.category for s in classify(doc, scaled, dft)]
        assert order == scaled_order

    def test_ties_break_on_category_name(self):
        model = build_direct(["zebra", "apple"])
        dft = DfTable({0: 1, 1: 1}, 2)
        scored = classify(make_doc(1, "nothing relevant"), model, dft)
        assert [s.category for s in scored] == ["apple", "zebra"]


class TestScoreDocuments:
    def test_flat_output_preserves_document_order(self):
        model = build_direct(["grain", "gold"])
        docs = [make_doc(i, "grain gold") for i in range(1, 4)]
        dft = build_df_table([d.tokens for d in docs], model.vocab)
        scores = score_documents(docs, model, dft)
        assert [s.doc_id for s in scores] == [1, 1, 2, 2, 3, 3]

    def test_parallel_scoring_matches_serial(self):
        model = build_direct(["grain", "gold", "oil"])
        docs = [
            make_doc(i, "grain gold oil wheat"[: 4 + (i % 17)]) for i in range(1, 81)
        ]
        dft = build_df_table([d.tokens for d in docs], model.vocab)
        serial = score_documents(docs, model, dft, jobs=1)
        parallel = score_documents(docs, model, dft, jobs=2)
        assert serial == parallel


class TestModelSerialization:
    def test_round_trip_with_df_table(self, tmp_path):
        collection = make_labeled_collection(
            [(1, "wheat corn", ("c0",)), (2, "gold", ("c1",))],
            [f"c{i}" for i in range(10)],
        )
        model = build_training(collection)
        dft = build_df_table([d.tokens for d in collection.documents], model.vocab)
        path = tmp_path / "model.json"
        save_model(path, model, dft)
        loaded, loaded_dft = load_model(path)
        assert loaded.approach is model.approach
        assert loaded.vocab == model.vocab
        assert loaded.vectors == dict(model.vectors)
        assert loaded.categories == model.categories
        assert loaded_dft.df == dft.df
        assert loaded_dft.doc_count == dft.doc_count

    def test_round_trip_multiword_terms(self):
        model = build_direct(["balance of payments", "iron-steel"])
        loaded, dft = model_from_dict(model_to_dict(model))
        assert loaded.vocab == model.vocab
        assert loaded.vectors == dict(model.vectors)
        assert dft is None

    def test_unknown_format_rejected(self):
        with pytest.raises(ValueError):
            model_from_dict({"format": "catvec-model/999"})
