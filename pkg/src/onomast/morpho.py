"""Inflected-variant generation and matching for declining languages.

Russian-style rules classify a name token by its ending and replace it with
a suffix alternation; Slovene/Estonian-style default rules append suffixes.
Stem mutations (Лев -> Льва, New York -> New Yorgile) live in a per-name
exception file rather than a general morphology engine.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigurationError, ResourceError, RuleParseError, UsageError

log = logging.getLogger(__name__)

_DATA_DIR = Path(__file__).parent / "data" / "morpho"

DEFAULT_ENDING_MARK = "*"
NOT_DECLINED_MARK = "-"


@dataclass(frozen=True)
class DeclensionRule:
    language: str
    ending: str  # "" marks the default class (catch-all, append semantics)
    suffixes: tuple[str, ...]  # empty tuple: token is not declined
    notes: str = ""

    @property
    def declined(self) -> bool:
        return bool(self.suffixes)


@dataclass(frozen=True)
class TokenPattern:
    stem: str
    suffixes: tuple[str, ...]
    extra_forms: tuple[str, ...] = ()  # exception surfaces, matched whole

    def forms(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for suffix in self.suffixes:
            seen.setdefault(self.stem + suffix)
        for form in self.extra_forms:
            seen.setdefault(form)
        return tuple(seen)

    def matches(self, token: str) -> bool:
        if token in self.extra_forms:
            return True
        if not token.startswith(self.stem):
            return False
        return token[len(self.stem) :] in self.suffixes


@dataclass(frozen=True)
class NamePattern:
    base: str
    language: str
    token_patterns: tuple[TokenPattern, ...]
    # whole-name exception surfaces, pre-tokenized
    extra_sequences: tuple[tuple[str, ...], ...] = ()


class DeclensionTable:
    """All declension rules plus per-name exceptions, indexed by language."""

    def __init__(
        self,
        rules: list[DeclensionRule],
        exceptions: dict[tuple[str, str], list[str]] | None = None,
    ):
        self._by_language: dict[str, list[DeclensionRule]] = {}
        for rule in rules:
            self._by_language.setdefault(rule.language, []).append(rule)
        for language, lang_rules in self._by_language.items():
            # longest ending first; file order breaks ties; default last
            lang_rules.sort(key=lambda r: (r.ending == "", -len(r.ending)))
        self.exceptions = dict(exceptions or {})

    @classmethod
    def from_files(cls, rules_path: str | Path, exceptions_path: str | Path | None = None) -> "DeclensionTable":
        rules_path = Path(rules_path)
        try:
            text = rules_path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ResourceError(f"cannot read declension rules {rules_path}: {exc}") from exc
        rules: list[DeclensionRule] = []
        for line_no, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].rstrip()
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) < 3:
                raise RuleParseError(f"expected language<TAB>ending<TAB>suffixes in {raw!r}", line_no)
            language, ending, suffix_field = parts[0].strip(), parts[1].strip(), parts[2].strip()
            if ending == DEFAULT_ENDING_MARK:
                ending = ""
            suffixes: tuple[str, ...]
            if suffix_field == NOT_DECLINED_MARK:
                suffixes = ()
            else:
                seen: dict[str, None] = {}
                for s in suffix_field.split():
                    seen.setdefault(s)
                suffixes = tuple(seen)
                if not suffixes:
                    raise RuleParseError("declined rule with empty suffix list", line_no)
            notes = parts[3].strip() if len(parts) > 3 else ""
            rules.append(DeclensionRule(language, ending, suffixes, notes))
        exceptions: dict[tuple[str, str], list[str]] = {}
        if exceptions_path is not None:
            exceptions_path = Path(exceptions_path)
            if exceptions_path.exists():
                for line_no, raw in enumerate(
                    exceptions_path.read_text(encoding="utf-8").splitlines(), start=1
                ):
                    line = raw.split("#", 1)[0].rstrip()
                    if not line.strip():
                        continue
                    parts = line.split("\t")
                    if len(parts) != 3:
                        raise RuleParseError(f"expected language<TAB>base<TAB>surface in {raw!r}", line_no)
                    key = (parts[0].strip(), parts[1].strip())
                    exceptions.setdefault(key, []).append(parts[2].strip())
        return cls(rules, exceptions)

    @classmethod
    def bundled(cls) -> "DeclensionTable":
        return cls.from_files(_DATA_DIR / "declensions.tsv", _DATA_DIR / "exceptions.tsv")

    def languages(self) -> tuple[str, ...]:
        return tuple(sorted(self._by_language))

    def _rule_for(self, token: str, language: str) -> DeclensionRule:
        try:
            lang_rules = self._by_language[language]
        except KeyError:
            raise ConfigurationError(f"no declension rule table for language {language!r}") from None
        for rule in lang_rules:
            if not rule.ending:
                return rule
            if len(token) > len(rule.ending) and token.endswith(rule.ending):
                return rule
        raise ConfigurationError(f"language {language!r} has no default declension rule")

    def _token_pattern(self, token: str, language: str) -> TokenPattern:
        rule = self._rule_for(token, language)
        extra = tuple(self.exceptions.get((language, token), ()))
        if not rule.declined:
            return TokenPattern(stem=token, suffixes=("",), extra_forms=extra)
        if rule.ending:
            stem = token[: -len(rule.ending)]
            suffixes = rule.suffixes
            if rule.ending not in suffixes:
                suffixes = (rule.ending,) + suffixes
            return TokenPattern(stem=stem, suffixes=suffixes, extra_forms=extra)
        return TokenPattern(stem=token, suffixes=("",) + rule.suffixes, extra_forms=extra)

    def declension_variants(self, name_token: str, language: str) -> list[str]:
        """All surface forms the token may take, base form first."""
        pattern = self._token_pattern(name_token, language)
        variants: dict[str, None] = {name_token: None}
        for form in pattern.forms():
            variants.setdefault(form)
        return list(variants)

    def build_pattern(self, full_name: str, language: str) -> NamePattern:
        tokens = full_name.split()
        if len(tokens) < 2:
            raise UsageError(f"name pattern needs at least two name parts, got {full_name!r}")
        token_patterns = tuple(self._token_pattern(tok, language) for tok in tokens)
        sequences = tuple(
            tuple(surface.split())
            for surface in self.exceptions.get((language, full_name), ())
        )
        return NamePattern(
            base=full_name,
            language=language,
            token_patterns=token_patterns,
            extra_sequences=sequences,
        )


def match_inflected(
    token_sequence: list[str] | tuple[str, ...],
    pattern: NamePattern,
) -> tuple[bool, tuple[int, int] | None]:
    """Leftmost match of the inflection pattern inside a token sequence."""
    tokens = list(token_sequence)
    width = len(pattern.token_patterns)
    candidates: list[tuple[int, int]] = []
    for start in range(len(tokens) - width + 1):
        if all(tp.matches(tokens[start + k]) for k, tp in enumerate(pattern.token_patterns)):
            candidates.append((start, start + width))
            break
    for seq in pattern.extra_sequences:
        w = len(seq)
        for start in range(len(tokens) - w + 1):
            if tuple(tokens[start : start + w]) == seq:
                candidates.append((start, start + w))
                break
    if not candidates:
        return False, None
    span = min(candidates)
    return True, span
