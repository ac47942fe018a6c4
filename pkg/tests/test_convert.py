"""Script conversion: tables vs the Unicode database, reordering, conjunct
rules, the golden word suite, suggestions, and word segmentation."""

import unicodedata

import pytest

import golden_words
from golden_words import FIXTURES, REQUIRED_CATEGORIES, GoldenWord, g
from grantha_ink.convert import (
    CHILLU_FORMS,
    NEW_SCRIPT_ABSENT,
    Lexicon,
    MalformedWordError,
    ScriptTables,
    TableFormatError,
    UnknownConjunctError,
    classify,
    convert_word,
    decompose_conjunct,
    default_lexicon_path,
    default_tables,
    levenshtein,
    reorder_prebase,
    segment_words,
    suggest,
)


@pytest.fixture(scope="module")
def tables() -> ScriptTables:
    return default_tables()


@pytest.fixture(scope="module")
def lexicon() -> Lexicon:
    return Lexicon.from_path(default_lexicon_path())


class TestTablesAgainstUnicodeDatabase:
    """The code-chart oracle: each mapping row must pair characters whose
    Unicode names agree once the script prefix is stripped."""

    def test_mapping_names_correspond(self, tables):
        for source, target in tables.to_malayalam.items():
            source_name = unicodedata.name(source)
            target_name = unicodedata.name(target)
            assert source_name.startswith("GRANTHA ")
            assert target_name.startswith("MALAYALAM ")
            assert source_name.removeprefix("GRANTHA ") == \
                target_name.removeprefix("MALAYALAM ")

    def test_classes_match_unicode_names(self, tables):
        for source, klass in tables.char_class.items():
            name = unicodedata.name(source)
            if klass == "consonant":
                assert " LETTER " in name and "VOCALIC" not in name
            elif klass == "vowel":
                assert " LETTER " in name
            elif klass in ("vowel_sign", "prebase_sign"):
                assert "VOWEL SIGN" in name or "LENGTH MARK" in name
            elif klass == "virama":
                assert name.endswith("VIRAMA")
            elif klass == "anusvara":
                assert "ANUSVARA" in name or "CANDRABINDU" in name
            elif klass == "visarga":
                assert "VISARGA" in name

    def test_consonant_count_is_34(self, tables):
        consonants = [c for c, k in tables.char_class.items() if k == "consonant"]
        assert len(consonants) == 34

    def test_prebase_signs_are_ee_and_ai(self, tables):
        prebase = {c for c, k in tables.char_class.items() if k == "prebase_sign"}
        assert prebase == {"\U00011347", "\U00011348"}

    def test_chillu_names(self):
        for consonant, chillu in CHILLU_FORMS.items():
            assert "MALAYALAM LETTER CHILLU" in unicodedata.name(chillu)
            assert unicodedata.name(consonant).startswith("MALAYALAM LETTER")

    def test_new_script_absent_are_the_three_dropped_vowels(self):
        names = {unicodedata.name(c) for c in NEW_SCRIPT_ABSENT}
        assert names == {
            "MALAYALAM LETTER VOCALIC RR", "MALAYALAM VOWEL SIGN VOCALIC RR",
            "MALAYALAM LETTER VOCALIC L", "MALAYALAM VOWEL SIGN VOCALIC L",
            "MALAYALAM LETTER VOCALIC LL", "MALAYALAM VOWEL SIGN VOCALIC LL",
        }


class TestClassify:
    def test_ka_is_consonant(self):
        assert classify(chr(golden_words.KA)) == "consonant"

    def test_a_is_vowel(self):
        assert classify(chr(golden_words.A)) == "vowel"

    def test_ascii_is_other(self):
        assert classify("x") == "other"

    def test_conjunct_symbol(self):
        assert classify(chr(golden_words.KSSA)) == "conjunct"

    def test_virama_sign_classes(self):
        assert classify(chr(golden_words.VIRAMA)) == "virama"
        assert classify(chr(golden_words.ANUSVARA)) == "anusvara"
        assert classify(chr(golden_words.VISARGA)) == "visarga"
        assert classify(chr(golden_words.EE_S)) == "prebase_sign"
        assert classify(chr(golden_words.AA_S)) == "vowel_sign"


class TestReorderPrebase:
    def test_visual_pair_swapped(self):
        assert reorder_prebase(g(golden_words.EE_S, golden_words.KA)) == \
            g(golden_words.KA, golden_words.EE_S)

    def test_no_prebase_unchanged(self):
        word = g(golden_words.KA, golden_words.AA_S, golden_words.MA)
        assert reorder_prebase(word) == word

    def test_lone_sign_malformed(self):
        with pytest.raises(MalformedWordError):
            reorder_prebase(g(golden_words.EE_S))

    def test_sign_before_non_consonant_malformed(self):
        with pytest.raises(MalformedWordError):
            reorder_prebase(g(golden_words.EE_S, golden_words.A))

    def test_idempotent_on_all_fixtures(self):
        for fixture in FIXTURES:
            once = reorder_prebase(fixture.grantha)
            assert reorder_prebase(once) == once

    def test_swaps_before_conjuncts_too(self):
        assert reorder_prebase(g(golden_words.EE_S, golden_words.KSSA)) == \
            g(golden_words.KSSA, golden_words.EE_S)


class TestDecomposeConjunct:
    def test_stacking_pair(self):
        rule = decompose_conjunct(chr(golden_words.KKA))
        assert rule.kind == "stacking"
        assert rule.parts == (chr(golden_words.KA), chr(golden_words.KA))

    def test_stacking_triple(self):
        rule = decompose_conjunct(chr(golden_words.KTVA))
        assert rule.kind == "stacking"
        assert len(rule.parts) == 3

    def test_r_sign_ra_first(self):
        rule = decompose_conjunct(chr(golden_words.RKA))
        assert rule.kind == "r_sign"
        assert rule.parts[0] == chr(golden_words.RA)

    def test_r_sign_ra_last(self):
        rule = decompose_conjunct(chr(golden_words.KRA))
        assert rule.kind == "r_sign"
        assert rule.parts[-1] == chr(golden_words.RA)

    def test_y_sign_ends_with_ya(self, tables):
        for rule in tables.rules.values():
            if rule.kind == "y_sign":
                assert rule.parts[-1] == chr(golden_words.YA)

    def test_unknown_conjunct_names_the_id(self):
        with pytest.raises(UnknownConjunctError, match="U\\+EFFF"):
            decompose_conjunct("")

    def test_rule_table_round_trips(self, tables):
        shapes = {}
        for rule in tables.rules.values():
            key = (rule.kind, rule.parts)
            assert key not in shapes
            shapes[key] = rule.conjunct
        for rule in tables.rules.values():
            assert shapes[(rule.kind, rule.parts)] == rule.conjunct

    def test_every_shipped_conjunct_converts_to_its_virama_chain(self, tables, lexicon):
        for rule in tables.rules.values():
            expected = "്".join(tables.to_malayalam[p] for p in rule.parts)
            result = convert_word(rule.conjunct, lexicon)
            assert result.old_script == expected
            assert result.new_script == expected


class TestGoldenWords:
    @pytest.mark.parametrize("fixture", FIXTURES, ids=lambda f: f.name)
    def test_exact_conversion(self, fixture: GoldenWord, lexicon):
        result = convert_word(fixture.grantha, lexicon)
        assert result.old_script == fixture.old
        assert result.new_script == fixture.new
        for fragment in fixture.note_fragments:
            assert any(fragment in note for note in result.notes), result.notes
        if not fixture.note_fragments:
            assert result.notes == ()

    def test_suite_size_and_coverage(self):
        assert len(FIXTURES) >= 40
        covered = {c for f in FIXTURES for c in f.categories}
        assert REQUIRED_CATEGORIES <= covered

    def test_outputs_stay_in_malayalam_block(self, lexicon):
        for fixture in FIXTURES:
            result = convert_word(fixture.grantha, lexicon)
            for ch in result.old_script + result.new_script:
                assert 0x0D00 <= ord(ch) <= 0x0D7F

    def test_old_script_preserves_consonant_multiset(self, tables, lexicon):
        """Phonetic content: expanding conjuncts by rule reproduces exactly
        the consonants present in the old-script output."""
        from collections import Counter
        for fixture in FIXTURES:
            expected = Counter()
            logical = reorder_prebase(fixture.grantha, tables)
            for ch in logical:
                klass = tables.classify(ch)
                if klass == "conjunct":
                    for part in tables.rules[ch].parts:
                        expected[tables.to_malayalam[part]] += 1
                elif klass == "consonant":
                    expected[tables.to_malayalam[ch]] += 1
            consonant_targets = {tables.to_malayalam[c]
                                 for c, k in tables.char_class.items() if k == "consonant"}
            got = Counter(c for c in convert_word(fixture.grantha, lexicon).old_script
                          if c in consonant_targets)
            assert got == expected, fixture.name

    def test_unknown_conjunct_propagates(self, lexicon):
        with pytest.raises(UnknownConjunctError):
            convert_word("", lexicon)

    def test_without_lexicon_missing_chars_fall_back(self):
        result = convert_word(g(golden_words.KA, golden_words.VOC_RR_S, golden_words.PA), None)
        assert result.new_script == result.old_script
        assert any("no lexicon match" in note for note in result.notes)


class TestSuggest:
    def test_empty_fragment_returns_rank_order(self, lexicon):
        words = suggest("", lexicon, limit=5)
        assert len(words) == 5
        assert words == sorted(words, key=lambda w: (len(w), w))

    def test_no_match_empty(self, lexicon):
        assert suggest("zzz", lexicon) == []

    def test_full_word_ranks_first(self, lexicon):
        words = suggest("കര", lexicon, limit=5)  # kara
        assert words[0] == "കര"

    def test_limit_respected(self, lexicon):
        assert len(suggest("", lexicon, limit=3)) == 3


class TestSegmentWords:
    def test_single_word_stream(self, lexicon):
        assert segment_words(["കഥ"], lexicon) == ["കഥ"]

    def test_two_words_recovered(self, lexicon):
        pieces = list("കഥ" + "മല")  # katha + mala
        assert segment_words(pieces, lexicon) == ["കഥ", "മല"]

    def test_no_match_single_unknown_token(self, lexicon):
        assert segment_words(["xyz"], lexicon) == ["xyz"]

    def test_unknown_run_between_words(self, lexicon):
        stream = "കഥ" + "QQ" + "മല"
        out = segment_words([stream], lexicon)
        assert out == ["കഥ", "QQ", "മല"]

    def test_concatenation_invariant(self, lexicon):
        import random
        rng = random.Random(3)
        for _ in range(50):
            stream = "".join(rng.choice(lexicon.words + ("Q", "ZZ"))
                             for _ in range(rng.randint(0, 6)))
            assert "".join(segment_words([stream], lexicon)) == stream


class TestLexicon:
    def test_empty_word_rejected(self):
        with pytest.raises(TableFormatError):
            Lexicon(["ok", ""])

    def test_nearest_within_threshold(self):
        lex = Lexicon(["abcd", "abce", "xyz"])
        assert lex.nearest("abcf", 1) == "abcd"  # tie with abce broken lexicographically
        assert lex.nearest("qqqq", 1) is None

    def test_levenshtein(self):
        assert levenshtein("", "abc") == 3
        assert levenshtein("kitten", "sitting") == 3
        assert levenshtein("same", "same") == 0


class TestLoaderValidation:
    def write_tables(self, tmp_path, map_text, rules_text):
        m = tmp_path / "map.tsv"
        r = tmp_path / "rules.tsv"
        m.write_text(map_text, encoding="utf-8")
        r.write_text(rules_text, encoding="utf-8")
        return m, r

    GOOD_MAP = "U+11315\tU+0D15\tconsonant\nU+11330\tU+0D30\tconsonant\nU+1132F\tU+0D2F\tconsonant\n"

    def test_bad_class_reports_line(self, tmp_path):
        m, r = self.write_tables(tmp_path, "U+11315\tU+0D15\tnoise\n", "")
        with pytest.raises(TableFormatError, match=":1:"):
            ScriptTables.load(m, r)

    def test_bad_codepoint_reports_line(self, tmp_path):
        m, r = self.write_tables(tmp_path, "# ok\nU+ZZZZ\tU+0D15\tconsonant\n", "")
        with pytest.raises(TableFormatError, match=":2:"):
            ScriptTables.load(m, r)

    def test_duplicate_mapping_rejected(self, tmp_path):
        m, r = self.write_tables(
            tmp_path, "U+11315\tU+0D15\tconsonant\nU+11315\tU+0D16\tconsonant\n", "")
        with pytest.raises(TableFormatError, match=":2:"):
            ScriptTables.load(m, r)

    def test_rule_with_one_part_rejected(self, tmp_path):
        m, r = self.write_tables(tmp_path, self.GOOD_MAP, "U+E000\tstacking\tU+11315\n")
        with pytest.raises(TableFormatError, match="2 parts"):
            ScriptTables.load(m, r)

    def test_stacking_with_four_parts_rejected(self, tmp_path):
        m, r = self.write_tables(
            tmp_path, self.GOOD_MAP,
            "U+E000\tstacking\tU+11315,U+11315,U+11315,U+11315\n")
        with pytest.raises(TableFormatError, match="at most 3"):
            ScriptTables.load(m, r)

    def test_r_sign_without_ra_rejected(self, tmp_path):
        m, r = self.write_tables(tmp_path, self.GOOD_MAP, "U+E000\tr_sign\tU+11315,U+11315\n")
        with pytest.raises(TableFormatError, match="r_sign"):
            ScriptTables.load(m, r)

    def test_y_sign_must_end_with_ya(self, tmp_path):
        m, r = self.write_tables(tmp_path, self.GOOD_MAP, "U+E000\ty_sign\tU+1132F,U+11315\n")
        with pytest.raises(TableFormatError, match="y_sign"):
            ScriptTables.load(m, r)

    def test_non_consonant_part_rejected(self, tmp_path):
        m, r = self.write_tables(tmp_path, self.GOOD_MAP, "U+E000\tstacking\tU+11315,U+11305\n")
        with pytest.raises(TableFormatError, match="not a mapped consonant"):
            ScriptTables.load(m, r)

    def test_duplicate_shape_rejected(self, tmp_path):
        m, r = self.write_tables(
            tmp_path, self.GOOD_MAP,
            "U+E000\tstacking\tU+11315,U+11315\nU+E001\tstacking\tU+11315,U+11315\n")
        with pytest.raises(TableFormatError, match="same kind and parts"):
            ScriptTables.load(m, r)

    def test_shipped_tables_load(self):
        tables = default_tables()
        assert len(tables.rules) >= 30
        kinds = {r.kind for r in tables.rules.values()}
        assert kinds == {"stacking", "combining", "r_sign", "y_sign"}
