"""Substitution-rule engine for name transformation.

Converts person names between writing systems and projects them onto the
internal standard representation (ISR): a lowercase Latin string over
[a-z], space, hyphen and apostrophe.  All behaviour is driven by ordered
rule files; see data/rules/ for the bundled sets.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigurationError, ResourceError, RuleParseError

log = logging.getLogger(__name__)

SCRIPTS = ("latin", "greek", "cyrillic", "arabic", "devanagari")
RULE_KINDS = ("transliteration", "normalization", "exception")
ANCHORS = ("anywhere", "word-start", "word-end", "word")

ISR_ALPHABET = frozenset("abcdefghijklmnopqrstuvwxyz -'")

# Script implied by a document language tag; anything unlisted is Latin.
LANGUAGE_SCRIPTS = {
    "ru": "cyrillic",
    "bg": "cyrillic",
    "uk": "cyrillic",
    "el": "greek",
    "ar": "arabic",
    "fa": "arabic",
    "ur": "arabic",
    "hi": "devanagari",
    "ne": "devanagari",
}

_DATA_DIR = Path(__file__).parent / "data"
_MAX_PASSES = 8


def script_for_language(language: str) -> str:
    return LANGUAGE_SCRIPTS.get(language, "latin")


@dataclass(frozen=True)
class Rule:
    pattern: str
    replacement: str
    anchor: str = "anywhere"

    def compile(self) -> re.Pattern[str]:
        body = re.escape(self.pattern)
        # Word boundaries are the string edges, spaces and hyphens.
        start = r"(?<![^ -])"
        end = r"(?![^ -])"
        if self.anchor == "word-start":
            return re.compile(start + body)
        if self.anchor == "word-end":
            return re.compile(body + end)
        if self.anchor == "word":
            return re.compile(start + body + end)
        return re.compile(body)


@dataclass(frozen=True)
class RuleSet:
    id: str
    kind: str
    script: str
    rules: tuple[Rule, ...]

    def __post_init__(self) -> None:
        if self.kind not in RULE_KINDS:
            raise ConfigurationError(f"unknown rule kind {self.kind!r}")
        if self.script not in SCRIPTS:
            raise ConfigurationError(f"unknown script {self.script!r}")


@dataclass(frozen=True)
class IsrName:
    text: str
    source_script: str
    original: str


def load_ruleset(
    source: str,
    *,
    id: str = "inline",
    kind: str = "normalization",
    script: str = "latin",
) -> RuleSet:
    """Parse rule-file text: one `PATTERN => REPLACEMENT [@start|@end]` per line.

    `#` starts a comment, blank lines are skipped, an empty replacement
    deletes the pattern.  Exception-kind sets force whole-word anchoring.
    """
    entries: list[tuple[tuple[str, str], Rule]] = []
    last: dict[tuple[str, str], int] = {}
    for line_no, raw in enumerate(source.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=>" not in line:
            raise RuleParseError(f"missing '=>' separator in {raw.strip()!r}", line_no)
        lhs, rhs = line.split("=>", 1)
        pattern = lhs.strip().casefold()
        if not pattern:
            raise RuleParseError("empty pattern", line_no)
        rhs = rhs.strip()
        anchor = "anywhere"
        for tag, name in (("@start", "word-start"), ("@end", "word-end")):
            if rhs.endswith(tag):
                rhs = rhs[: -len(tag)].strip()
                anchor = name
        if kind == "exception":
            anchor = "word"
        key = (pattern, anchor)
        if key in last:
            log.warning("rule %r/%s duplicated at line %d; later rule kept", pattern, anchor, line_no)
        last[key] = len(entries)
        entries.append((key, Rule(pattern, rhs.casefold(), anchor)))
    rules = tuple(rule for i, (key, rule) in enumerate(entries) if last[key] == i)
    return RuleSet(id=id, kind=kind, script=script, rules=rules)


def _load_ruleset_file(path: Path, *, kind: str, script: str) -> RuleSet:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ResourceError(f"cannot read rule file {path}: {exc}") from exc
    return load_ruleset(text, id=path.stem, kind=kind, script=script)


_ws_re = re.compile(r"\s+")


def _canonical_ws(s: str) -> str:
    return _ws_re.sub(" ", s).strip()


def apply(rs: RuleSet, s: str) -> str:
    """Run every rule of `rs` in order over the casefolded string.

    Each rule is one global left-to-right non-overlapping pass; whitespace
    is canonicalized before and after.
    """
    out = _canonical_ws(s.casefold())
    for rule in rs.rules:
        compiled = _compiled(rule)
        if rule.replacement:
            out = compiled.sub(rule.replacement.replace("\\", "\\\\"), out)
        else:
            out = compiled.sub("", out)
    return _canonical_ws(out)


_COMPILED: dict[Rule, re.Pattern[str]] = {}


def _compiled(rule: Rule) -> re.Pattern[str]:
    rx = _COMPILED.get(rule)
    if rx is None:
        rx = rule.compile()
        _COMPILED[rule] = rx
    return rx


class NameTransformer:
    """Loads rule files once and exposes the transliteration/ISR pipeline."""

    def __init__(self, rules_dir: str | Path | None = None):
        self.rules_dir = Path(rules_dir) if rules_dir is not None else _DATA_DIR / "rules"
        norm_path = self.rules_dir / "normalization.rules"
        if not norm_path.exists():
            raise ResourceError(f"normalization rules not found at {norm_path}")
        norm = _load_ruleset_file(norm_path, kind="normalization", script="latin")
        exc_path = self.rules_dir / "normalization.exceptions"
        if exc_path.exists():
            exc = _load_ruleset_file(exc_path, kind="exception", script="latin")
            # Exceptions always run before the generic rules.
            norm = RuleSet(
                id="normalization",
                kind="normalization",
                script="latin",
                rules=exc.rules + norm.rules,
            )
        self.normalization = norm
        self._translit: dict[str, RuleSet] = {}
        self._translit_exc: dict[str, RuleSet] = {}
        for script in SCRIPTS:
            if script == "latin":
                continue
            path = self.rules_dir / f"{script}.rules"
            if path.exists():
                self._translit[script] = _load_ruleset_file(path, kind="transliteration", script=script)
            epath = self.rules_dir / f"{script}.exceptions"
            if epath.exists():
                self._translit_exc[script] = _load_ruleset_file(epath, kind="exception", script=script)

    @property
    def scripts(self) -> tuple[str, ...]:
        return ("latin",) + tuple(sorted(self._translit))

    def transliterate(self, script: str, name: str) -> str:
        """Romanize a non-Latin name; unmapped non-ASCII characters are dropped."""
        if script not in self._translit:
            raise ConfigurationError(f"no transliteration rules registered for script {script!r}")
        out = name
        exc = self._translit_exc.get(script)
        if exc is not None:
            out = apply(exc, out)
        out = apply(self._translit[script], out)
        kept: list[str] = []
        for ch in out:
            if ord(ch) < 128:
                kept.append(ch)
            else:
                log.debug("transliterate(%s): dropping unmapped character %r", script, ch)
        return _canonical_ws("".join(kept))

    def _normalize_fixpoint(self, s: str) -> str:
        prev = None
        out = s
        passes = 0
        while out != prev and passes < _MAX_PASSES:
            prev = out
            out = apply(self.normalization, out)
            passes += 1
        if out != prev:
            log.warning("normalization did not reach a fixed point for %r", s)
        return out

    def _project(self, s: str) -> str:
        kept: list[str] = []
        for ch in s:
            if ch in ISR_ALPHABET:
                kept.append(ch)
            else:
                log.debug("ISR projection: dropping %r", ch)
        return _canonical_ws("".join(kept))

    def to_isr(self, name: str, script: str = "latin") -> IsrName:
        """Project a surface form onto the ISR.

        Pipeline: transliterate non-Latin scripts, then iterate the
        normalization rules to a fixed point, then restrict to the ISR
        alphabet (and re-normalize in case the restriction exposed new
        matches, keeping the whole map idempotent).
        """
        s = self.transliterate(script, name) if script != "latin" else name
        s = self._normalize_fixpoint(s)
        s = self._project(s)
        s = self._normalize_fixpoint(s)
        return IsrName(text=s, source_script=script, original=name)


_DEFAULT: NameTransformer | None = None


def default_transformer() -> NameTransformer:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = NameTransformer()
    return _DEFAULT


def transliterate(script: str, name: str) -> str:
    return default_transformer().transliterate(script, name)


def to_isr(name: str, script: str = "latin") -> IsrName:
    return default_transformer().to_isr(name, script)
