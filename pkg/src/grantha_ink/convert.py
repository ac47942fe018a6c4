"""Grantha to Malayalam conversion: character classification, prebase-sign
reordering, conjunct decomposition, word conversion to old and new script,
and the lexicon-backed helpers (suggestions, word segmentation).

The character map and conjunct rules are data files, not code; see
``data/grantha_malayalam.tsv`` and ``data/conjuncts.tsv``.  Conjunct symbols
carry private-use code points because Unicode encodes Grantha conjuncts only
as virama sequences, while the recognizer emits one symbol per glyph.
"""

from __future__ import annotations

import unicodedata
from bisect import bisect_left
from collections.abc import Iterable
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

__all__ = [
    "CHAR_CLASSES",
    "MALAYALAM_VIRAMA",
    "NEW_SCRIPT_ABSENT",
    "CHILLU_FORMS",
    "TableFormatError",
    "MalformedWordError",
    "UnknownConjunctError",
    "ConjunctRule",
    "ScriptTables",
    "Lexicon",
    "ConversionResult",
    "classify",
    "reorder_prebase",
    "decompose_conjunct",
    "convert_word",
    "suggest",
    "segment_words",
    "levenshtein",
]

CHAR_CLASSES = frozenset({
    "vowel", "vowel_sign", "consonant", "conjunct", "virama",
    "anusvara", "visarga", "prebase_sign", "other",
})
CONJUNCT_KINDS = frozenset({"stacking", "combining", "r_sign", "y_sign"})

GRANTHA_RA = "\U00011330"
GRANTHA_YA = "\U0001132F"
MALAYALAM_VIRAMA = "്"
MALAYALAM_BLOCK = range(0x0D00, 0x0D80)

# Vowels dropped by the script reform (vocalic rr, l, ll); their presence in a
# word makes the new-script rendering fall back to the lexicon.
NEW_SCRIPT_ABSENT = frozenset("ൠൡഌൄൢൣ")

# Word-final pure consonants that the new script writes as chillu letters.
CHILLU_FORMS = {
    "ണ": "ൺ",  # nna
    "ന": "ൻ",  # na
    "ര": "ർ",  # ra
    "ല": "ൽ",  # la
    "ള": "ൾ",  # lla
}


class TableFormatError(ValueError):
    """A mapping/rule/lexicon file failed validation; message carries the line."""


class MalformedWordError(ValueError):
    """A prebase sign has no consonant to attach to."""


class UnknownConjunctError(ValueError):
    """A conjunct symbol is missing from the rule table."""


@dataclass(frozen=True)
class ConjunctRule:
    """Decomposition of one conjunct symbol into base consonants."""

    conjunct: str
    kind: str
    parts: tuple[str, ...]


def _parse_codepoint(token: str, path: str, line_no: int) -> str:
    if not token.startswith("U+"):
        raise TableFormatError(f"{path}:{line_no}: expected U+XXXX, got {token!r}")
    try:
        value = int(token[2:], 16)
        return chr(value)
    except (ValueError, OverflowError):
        raise TableFormatError(f"{path}:{line_no}: bad code point {token!r}") from None


def _table_lines(text: str):
    for line_no, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield line_no, line


@dataclass(frozen=True)
class ScriptTables:
    """Immutable, validated conversion tables."""

    to_malayalam: dict[str, str]
    char_class: dict[str, str]
    rules: dict[str, ConjunctRule]

    @classmethod
    def load(cls, map_path: str | Path, rules_path: str | Path) -> "ScriptTables":
        to_malayalam: dict[str, str] = {}
        char_class: dict[str, str] = {}
        map_name = str(map_path)
        for line_no, line in _table_lines(Path(map_path).read_text(encoding="utf-8")):
            fields = line.split("\t")
            if len(fields) != 3:
                raise TableFormatError(f"{map_name}:{line_no}: expected 3 tab-separated fields")
            source = _parse_codepoint(fields[0], map_name, line_no)
            target = _parse_codepoint(fields[1], map_name, line_no)
            klass = fields[2]
            if klass not in CHAR_CLASSES or klass == "conjunct":
                raise TableFormatError(f"{map_name}:{line_no}: bad character class {klass!r}")
            if source in to_malayalam:
                raise TableFormatError(f"{map_name}:{line_no}: duplicate entry for {fields[0]}")
            to_malayalam[source] = target
            char_class[source] = klass

        rules: dict[str, ConjunctRule] = {}
        seen_shapes: dict[tuple[str, tuple[str, ...]], int] = {}
        rules_name = str(rules_path)
        for line_no, line in _table_lines(Path(rules_path).read_text(encoding="utf-8")):
            fields = line.split("\t")
            if len(fields) != 3:
                raise TableFormatError(f"{rules_name}:{line_no}: expected 3 tab-separated fields")
            conjunct = _parse_codepoint(fields[0], rules_name, line_no)
            kind = fields[1]
            parts = tuple(_parse_codepoint(p.strip(), rules_name, line_no)
                          for p in fields[2].split(","))
            if kind not in CONJUNCT_KINDS:
                raise TableFormatError(f"{rules_name}:{line_no}: bad kind {kind!r}")
            if len(parts) < 2:
                raise TableFormatError(f"{rules_name}:{line_no}: conjunct needs >= 2 parts")
            if kind == "stacking" and len(parts) > 3:
                raise TableFormatError(f"{rules_name}:{line_no}: stacking allows at most 3 parts")
            if kind == "r_sign" and GRANTHA_RA not in (parts[0], parts[-1]):
                raise TableFormatError(f"{rules_name}:{line_no}: r_sign needs ra first or last")
            if kind == "y_sign" and parts[-1] != GRANTHA_YA:
                raise TableFormatError(f"{rules_name}:{line_no}: y_sign must end with ya")
            for part in parts:
                if char_class.get(part) != "consonant":
                    raise TableFormatError(
                        f"{rules_name}:{line_no}: part U+{ord(part):04X} is not a mapped consonant")
            if conjunct in rules or conjunct in to_malayalam:
                raise TableFormatError(f"{rules_name}:{line_no}: duplicate symbol {fields[0]}")
            shape = (kind, parts)
            if shape in seen_shapes:
                raise TableFormatError(
                    f"{rules_name}:{line_no}: same kind and parts as line {seen_shapes[shape]}")
            seen_shapes[shape] = line_no
            rules[conjunct] = ConjunctRule(conjunct, kind, parts)

        return cls(to_malayalam, char_class, rules)

    def classify(self, char: str) -> str:
        # the private-use plane is reserved for conjunct symbols, so a PUA
        # code point without a rule is an unknown conjunct, not plain text
        if char in self.rules or 0xE000 <= ord(char) <= 0xF8FF:
            return "conjunct"
        return self.char_class.get(char, "other")


@lru_cache(maxsize=1)
def default_tables() -> ScriptTables:
    data = resources.files("grantha_ink").joinpath("data")
    return ScriptTables.load(str(data / "grantha_malayalam.tsv"), str(data / "conjuncts.tsv"))


def default_lexicon_path() -> Path:
    return Path(str(resources.files("grantha_ink").joinpath("data", "lexicon.txt")))


class Lexicon:
    """A word list with exact, prefix, and nearest-match lookup."""

    def __init__(self, words: Iterable[str]):
        cleaned = []
        for i, word in enumerate(words):
            if not word:
                raise TableFormatError(f"lexicon entry {i + 1} is empty")
            cleaned.append(word)
        self.words = tuple(sorted(set(cleaned)))
        self._set = frozenset(self.words)
        self.max_word_length = max((len(w) for w in self.words), default=0)

    @classmethod
    def from_path(cls, path: str | Path) -> "Lexicon":
        lines = Path(path).read_text(encoding="utf-8").split("\n")
        return cls(line.strip() for line in lines if line.strip())

    def __contains__(self, word: str) -> bool:
        return word in self._set

    def __len__(self) -> int:
        return len(self.words)

    def prefix_matches(self, fragment: str) -> list[str]:
        start = bisect_left(self.words, fragment)
        out = []
        for word in self.words[start:]:
            if not word.startswith(fragment):
                break
            out.append(word)
        return out

    def nearest(self, word: str, max_distance: int) -> str | None:
        """Closest word by edit distance, ties broken lexicographically;
        None when nothing is within ``max_distance``."""
        best: tuple[int, str] | None = None
        for candidate in self.words:
            d = levenshtein(word, candidate)
            if d <= max_distance and (best is None or (d, candidate) < best):
                best = (d, candidate)
        return best[1] if best else None


def levenshtein(a: str, b: str) -> int:
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            current.append(min(previous[j] + 1,
                               current[j - 1] + 1,
                               previous[j - 1] + (ca != cb)))
        previous = current
    return previous[-1]


def classify(char: str, tables: ScriptTables | None = None) -> str:
    """Total classification of one code point; unknown characters are 'other'."""
    return (tables or default_tables()).classify(char)


_ATTACHABLE = ("consonant", "conjunct")


def reorder_prebase(word: str, tables: ScriptTables | None = None) -> str:
    """Swap visually-leading vowel signs behind the consonant they modify.

    Signs that already follow a consonant or conjunct are left alone, so the
    function is idempotent and accepts logical-order input unchanged.
    """
    tables = tables or default_tables()
    chars = list(word)
    i = 0
    while i < len(chars):
        if tables.classify(chars[i]) == "prebase_sign":
            if i > 0 and tables.classify(chars[i - 1]) in _ATTACHABLE:
                i += 1
                continue
            if i + 1 < len(chars) and tables.classify(chars[i + 1]) in _ATTACHABLE:
                chars[i], chars[i + 1] = chars[i + 1], chars[i]
                i += 2
                continue
            raise MalformedWordError(
                f"prebase sign U+{ord(chars[i]):04X} at position {i} has no consonant to attach to")
        i += 1
    return "".join(chars)


def decompose_conjunct(conjunct: str, tables: ScriptTables | None = None) -> ConjunctRule:
    tables = tables or default_tables()
    rule = tables.rules.get(conjunct)
    if rule is None:
        raise UnknownConjunctError(f"no decomposition rule for conjunct U+{ord(conjunct):04X}")
    return rule


def _char_name(char: str) -> str:
    try:
        return f"{unicodedata.name(char)} (U+{ord(char):04X})"
    except ValueError:
        return f"U+{ord(char):04X}"


@dataclass(frozen=True)
class ConversionResult:
    old_script: str
    new_script: str
    notes: tuple[str, ...]


def convert_word(
    word: str,
    lexicon: Lexicon | None = None,
    tables: ScriptTables | None = None,
) -> ConversionResult:
    """Convert one Grantha word to old- and new-script Malayalam.

    Conjuncts expand to virama chains in both scripts (plain text cannot carry
    the stacked rendering); the new script additionally writes a word-final
    pure consonant as its chillu form and replaces words containing reform-
    dropped vowels with the nearest lexicon word, falling back to the
    old-script code point with a warning note when there is no match.
    """
    tables = tables or default_tables()
    logical = reorder_prebase(word, tables)
    old_parts: list[str] = []
    new_parts: list[str] = []
    notes: list[str] = []
    missing: list[str] = []

    for char in logical:
        klass = tables.classify(char)
        if klass == "conjunct":
            rule = tables.rules.get(char)
            if rule is None:
                raise UnknownConjunctError(
                    f"no decomposition rule for conjunct U+{ord(char):04X}")
            chain = MALAYALAM_VIRAMA.join(tables.to_malayalam[p] for p in rule.parts)
            old_parts.append(chain)
            new_parts.append(chain)
        elif klass == "other":
            mapped = tables.to_malayalam.get(char)
            if mapped is None:
                notes.append(f"unsupported character {_char_name(char)} dropped")
            else:
                old_parts.append(mapped)
                new_parts.append(mapped)
        else:
            mapped = tables.to_malayalam[char]
            old_parts.append(mapped)
            new_parts.append(mapped)
            if mapped in NEW_SCRIPT_ABSENT:
                missing.append(mapped)

    old_script = "".join(old_parts)
    new_script = "".join(new_parts)

    if len(new_script) >= 2 and new_script[-1] == MALAYALAM_VIRAMA:
        chillu = CHILLU_FORMS.get(new_script[-2])
        if chillu is not None:
            new_script = new_script[:-2] + chillu

    if missing:
        names = ", ".join(_char_name(c) for c in missing)
        # one edit allowed per reform-dropped character; anything looser lets
        # short words match unrelated lexicon entries
        replacement = lexicon.nearest(new_script, len(missing)) if lexicon else None
        if replacement is not None:
            notes.append(
                f"new script lacks {names}; substituted lexicon word {replacement!r}")
            new_script = replacement
        else:
            notes.append(
                f"new script lacks {names}; no lexicon match, kept old-script code point(s)")

    return ConversionResult(old_script, new_script, tuple(notes))


def suggest(fragment: str, lexicon: Lexicon, limit: int = 8) -> list[str]:
    """Prefix completions ranked by (length, lexicographic order)."""
    if limit < 1:
        return []
    matches = lexicon.prefix_matches(fragment)
    matches.sort(key=lambda w: (len(w), w))
    return matches[:limit]


def segment_words(pieces: Iterable[str], lexicon: Lexicon) -> list[str]:
    """Greedy longest-match segmentation of a recognized symbol stream.

    Maximal runs with no lexicon match pass through as single unknown tokens;
    concatenating the output always reproduces the input stream.
    """
    stream = "".join(pieces)
    tokens: list[str] = []
    unknown_start: int | None = None
    i = 0
    while i < len(stream):
        match = None
        for length in range(min(lexicon.max_word_length, len(stream) - i), 0, -1):
            if stream[i:i + length] in lexicon:
                match = stream[i:i + length]
                break
        if match is None:
            if unknown_start is None:
                unknown_start = i
            i += 1
            continue
        if unknown_start is not None:
            tokens.append(stream[unknown_start:i])
            unknown_start = None
        tokens.append(match)
        i += len(match)
    if unknown_start is not None:
        tokens.append(stream[unknown_start:])
    return tokens
