"""Bundled English stop-word list and stoplist file loading.

Matching is case-insensitive throughout the package: stoplists produced
here are already casefolded, and token filtering casefolds each token
before the membership test.
"""

from __future__ import annotations

from pathlib import Path

from .errors import ConfigError

# Standard English stop-word list (pronouns, auxiliaries, particles and the
# contraction fragments left behind by common tokenizers).
_WORDS = """
i me my myself we our ours ourselves you you're you've you'll you'd your
yours yourself yourselves he him his himself she she's her hers herself it
it's its itself they them their theirs themselves what which who whom this
that that'll these those am is are was were be been being have has had
having do does did doing a an the and but if or because as until while of
at by for with about against between into through during before after
above below to from up down in out on off over under again further then
once here there when where why how all any both each few more most other
some such no nor not only own same so than too very s t can will just don
don't should should've now d ll m o re ve y ain aren aren't couldn
couldn't didn didn't doesn doesn't hadn hadn't hasn hasn't haven haven't
isn isn't ma mightn mightn't mustn mustn't needn needn't shan shan't
shouldn shouldn't wasn wasn't weren weren't won won't wouldn wouldn't
"""

DEFAULT_STOPWORDS: frozenset[str] = frozenset(_WORDS.split())


def prepare_stoplist(words) -> frozenset[str]:
    """Casefold an iterable of words into a stoplist set."""
    return frozenset(w.casefold() for w in words)


def load_stoplist(path) -> frozenset[str]:
    """Read a stoplist file: one word per line, blank lines and # comments ignored."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read stoplist file {path!r}: {exc}") from exc
    words = []
    for line in text.splitlines():
        word = line.strip()
        if word and not word.startswith("#"):
            words.append(word)
    return prepare_stoplist(words)
