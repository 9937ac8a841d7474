"""Thesaurus concept mapping for node text.

Pipeline per node: expand whole-word abbreviations (offset-mapped back to
the original text), extract entity mentions by case-insensitive
longest-match over the lexicon's surface forms, link each mention by
character 3-gram Jaccard similarity (override dictionary wins outright),
and optionally ask a remote "contains" search for whatever stays
unresolved.  Mappings below the similarity threshold return nothing.
"""

from __future__ import annotations

import json
import logging
import urllib.error
import urllib.parse
import urllib.request
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

from .config import ConceptConfig
from .errors import InputError, RemoteError
from .graph import Warning

logger = logging.getLogger(__name__)

UMLS_LIKE = "UMLS_LIKE"
NCIT_LIKE = "NCIT_LIKE"
SCHEMES = (UMLS_LIKE, NCIT_LIKE)

SOURCE_LEXICON = "LEXICON"
SOURCE_OVERRIDE = "OVERRIDE"
SOURCE_REMOTE = "REMOTE"

DEFAULT_ABBREVIATIONS = {
    "CT": "computed tomography",
    "MRI": "magnetic resonance imaging",
    "RT": "radiation therapy",
}


@dataclass(frozen=True)
class LexiconEntry:
    code: str
    scheme: str
    preferred_name: str
    synonyms: tuple[str, ...] = ()


@dataclass
class Lexicon:
    entries: list[LexiconEntry] = field(default_factory=list)

    def __post_init__(self):
        seen = set()
        for e in self.entries:
            key = (e.scheme, e.code)
            if key in seen:
                raise InputError(f"duplicate lexicon code {e.code} in {e.scheme}")
            if not e.preferred_name:
                raise InputError(f"lexicon code {e.code} has an empty name")
            seen.add(key)

    def surface_forms(self):
        """(surface, entry) pairs over preferred names and synonyms."""
        for entry in self.entries:
            yield entry.preferred_name, entry
            for syn in entry.synonyms:
                yield syn, entry

    def by_code(self, code: str):
        for entry in self.entries:
            if entry.code == code:
                return entry
        return None


@dataclass(frozen=True)
class EntitySpan:
    text: str
    span: tuple[int, int]


@dataclass(frozen=True)
class ConceptMapping:
    mention: EntitySpan
    code: str
    scheme: str
    preferred_name: str
    score: float
    source: str


# -- abbreviation expansion ----------------------------------------------------


class OffsetMap:
    """Maps spans in expanded text back to spans in the original text.

    Pieces are (exp_start, exp_end, orig_start, orig_end); unchanged pieces
    translate linearly, replaced pieces snap to the abbreviation's span.
    """

    def __init__(self, pieces):
        self._pieces = pieces

    def to_original(self, span):
        return (self._position(span[0], is_end=False),
                self._position(span[1], is_end=True))

    def _position(self, pos, is_end):
        for exp_s, exp_e, orig_s, orig_e, replaced in self._pieces:
            if is_end:
                if exp_s < pos <= exp_e:
                    return orig_e if replaced else orig_s + (pos - exp_s)
            else:
                if exp_s <= pos < exp_e:
                    return orig_s if replaced else orig_s + (pos - exp_s)
        if self._pieces:
            if pos <= self._pieces[0][0]:
                return self._pieces[0][2]
            return self._pieces[-1][3]
        return pos


def expand_abbreviations(text: str, table: dict[str, str] | None = None):
    """Whole-word, case-sensitive expansion; returns (expanded, offset map)."""
    table = DEFAULT_ABBREVIATIONS if table is None else table
    if not text or not table:
        return text, OffsetMap([(0, len(text), 0, len(text), False)])

    hits = []
    for short in sorted(table, key=lambda s: (-len(s), s)):
        start = 0
        while True:
            idx = text.find(short, start)
            if idx < 0:
                break
            end = idx + len(short)
            if _word_bounded(text, idx, end):
                hits.append((idx, end, short))
            start = idx + 1
    hits.sort()
    accepted = []
    last_end = 0
    for idx, end, short in hits:
        if idx >= last_end:
            accepted.append((idx, end, short))
            last_end = end

    out = []
    pieces = []
    orig_pos = 0
    exp_pos = 0
    for idx, end, short in accepted:
        if idx > orig_pos:
            chunk = text[orig_pos:idx]
            pieces.append((exp_pos, exp_pos + len(chunk), orig_pos, idx, False))
            out.append(chunk)
            exp_pos += len(chunk)
        replacement = table[short]
        pieces.append((exp_pos, exp_pos + len(replacement), idx, end, True))
        out.append(replacement)
        exp_pos += len(replacement)
        orig_pos = end
    tail = text[orig_pos:]
    pieces.append((exp_pos, exp_pos + len(tail), orig_pos, len(text), False))
    out.append(tail)
    return "".join(out), OffsetMap(pieces)


def _word_bounded(text, start, end):
    before_ok = start == 0 or not _is_word(text[start - 1])
    after_ok = end == len(text) or not _is_word(text[end])
    return before_ok and after_ok


def _is_word(ch):
    return ch.isalnum() or ch == "_"


# -- entity extraction -----------------------------------------------------------


def extract_entities(expanded: str, lexicon: Lexicon):
    """Case-insensitive longest-match scan over all lexicon surface forms.

    Overlapping candidates resolve longest-first, then leftmost; resulting
    spans are non-overlapping and sorted by start.
    """
    haystack = expanded.lower()
    candidates = []
    seen_surfaces = set()
    for surface, _entry in lexicon.surface_forms():
        needle = surface.lower()
        if not needle or needle in seen_surfaces:
            continue
        seen_surfaces.add(needle)
        start = 0
        while True:
            idx = haystack.find(needle, start)
            if idx < 0:
                break
            end = idx + len(needle)
            if _word_bounded(haystack, idx, end):
                candidates.append((end - idx, idx, needle))
            start = idx + 1
    candidates.sort(key=lambda c: (-c[0], c[1], c[2]))
    chosen = []
    occupied = []
    for length, start, _needle in candidates:
        end = start + length
        if any(s < end and start < e for s, e in occupied):
            continue
        occupied.append((start, end))
        chosen.append(EntitySpan(text=expanded[start:end], span=(start, end)))
    chosen.sort(key=lambda e: e.span)
    return chosen


# -- linking ---------------------------------------------------------------------


def char_trigrams(s: str) -> frozenset:
    """3-gram set of '#' + lowercased text + '#' (one sentinel per side)."""
    padded = "#" + s.lower() + "#"
    return frozenset(padded[i:i + 3] for i in range(len(padded) - 2))


def jaccard(a: frozenset, b: frozenset) -> float:
    if not a and not b:
        return 1.0
    union = len(a | b)
    return len(a & b) / union if union else 0.0


def link_entity(mention: EntitySpan, lexicon: Lexicon, overrides=None,
                threshold: float = 0.7):
    """Best lexicon concept for a mention, or None below the threshold.

    Overrides (lowercased surface -> (code, scheme)) always win with score
    1.0; otherwise the highest 3-gram Jaccard over all surface forms wins,
    ties broken by lexicographically smallest code.
    """
    overrides = overrides or {}
    key = mention.text.lower()
    if key in overrides:
        code, scheme = overrides[key]
        entry = lexicon.by_code(code)
        name = entry.preferred_name if entry else mention.text
        return ConceptMapping(mention=mention, code=code, scheme=scheme,
                              preferred_name=name, score=1.0,
                              source=SOURCE_OVERRIDE)

    grams = char_trigrams(mention.text)
    best = None
    for surface, entry in lexicon.surface_forms():
        score = jaccard(grams, char_trigrams(surface))
        key2 = (-score, entry.code)
        if best is None or key2 < best[0]:
            best = (key2, entry, score)
    if best is None or best[2] < threshold:
        return None
    _, entry, score = best
    return ConceptMapping(mention=mention, code=entry.code, scheme=entry.scheme,
                          preferred_name=entry.preferred_name, score=score,
                          source=SOURCE_LEXICON)


# -- remote client ----------------------------------------------------------------


@dataclass(frozen=True)
class RemoteConcept:
    code: str
    preferred_name: str
    scheme: str = NCIT_LIKE


class StubThesaurusClient:
    """Deterministic stand-in for the remote search endpoint.

    The fixture maps a lowercased query to a list of codes (the remote
    contract: first element wins).  A query mapped to the string "ERROR"
    simulates a transport failure.
    """

    def __init__(self, fixture):
        if isinstance(fixture, (str, bytes)):
            with open(fixture, "r", encoding="utf-8") as fh:
                fixture = json.load(fh)
        self.fixture = {k.lower(): v for k, v in dict(fixture).items()}

    def search(self, term: str):
        value = self.fixture.get(term.lower(), [])
        if value == "ERROR":
            raise RemoteError(f"stub failure for {term!r}", retryable=True)
        return [RemoteConcept(code=c, preferred_name=c) for c in value]


class HttpThesaurusClient:
    """Minimal client for a "contains" search endpoint returning JSON.

    Expects ``{"concepts": [{"code": ..., "name": ...}, ...]}``.  The
    ``fetch`` hook (term -> parsed JSON) exists for testing.
    """

    def __init__(self, endpoint: str, timeout: float = 10.0, fetch=None):
        self.endpoint = endpoint
        self.timeout = timeout
        self._fetch = fetch or self._http_fetch

    def _http_fetch(self, term: str):
        url = (f"{self.endpoint}?term={urllib.parse.quote(term)}"
               "&type=contains")
        try:
            with urllib.request.urlopen(url, timeout=self.timeout) as resp:
                return json.loads(resp.read().decode("utf-8"))
        except (urllib.error.URLError, TimeoutError, ValueError) as exc:
            raise RemoteError(f"lookup failed for {term!r}: {exc}", cause=exc,
                              retryable=isinstance(exc, urllib.error.URLError))

    def search(self, term: str):
        payload = self._fetch(term)
        concepts = payload.get("concepts", []) if isinstance(payload, dict) else []
        out = []
        for c in concepts:
            if isinstance(c, dict) and "code" in c:
                out.append(RemoteConcept(code=str(c["code"]),
                                         preferred_name=str(c.get("name", c["code"]))))
        return out


def remote_lookup(mention: str, client):
    """First concept of a remote "contains" search (score 1.0), or None."""
    results = client.search(mention)
    if not results:
        return None
    first = results[0]
    return ConceptMapping(
        mention=EntitySpan(text=mention, span=(0, len(mention))),
        code=first.code, scheme=first.scheme,
        preferred_name=first.preferred_name, score=1.0, source=SOURCE_REMOTE,
    )


# -- graph annotation ---------------------------------------------------------------


def annotate_concepts(graph, lexicon: Lexicon, overrides=None, client=None,
                      abbreviations=None, strict_remote=False,
                      config: ConceptConfig | None = None):
    """Annotate every node with concept mappings (idempotent).

    Mention spans are reported in original-text offsets via the expansion
    offset map.  With a client, unresolved mentions go through the remote
    lookup (deduplicated, bounded concurrency, deterministic merge); remote
    failures raise in strict mode and are recorded as warnings otherwise.
    """
    cfg = config or ConceptConfig()
    annotations = {nid: dict(ann) for nid, ann in graph.annotations.items()}
    warnings = list(graph.warnings)

    per_node = []
    unresolved_terms = set()
    for node in graph.nodes:
        original = node.joined_text()
        expanded, offmap = expand_abbreviations(original, abbreviations)
        mentions = extract_entities(expanded, lexicon)
        rows = []
        for mention in mentions:
            mapping = link_entity(mention, lexicon, overrides,
                                  threshold=cfg.jaccard_threshold)
            if mapping is None and client is not None:
                unresolved_terms.add(mention.text.lower())
            rows.append((mention, mapping))
        per_node.append((node, original, offmap, rows))

    remote_results = {}
    if client is not None and unresolved_terms:
        terms = sorted(unresolved_terms)

        def lookup(term):
            try:
                return term, remote_lookup(term, client), None
            except RemoteError as exc:
                return term, None, exc

        with ThreadPoolExecutor(max_workers=max(1, cfg.remote_inflight)) as pool:
            outcomes = list(pool.map(lookup, terms))
        for term, mapping, error in outcomes:
            if error is not None:
                if strict_remote:
                    raise error
                warnings.append(Warning(None, "remote_lookup_failed",
                                        f"{term}: {error}"))
                logger.warning("remote lookup failed for %r: %s", term, error)
            remote_results[term] = mapping

    for node, original, offmap, rows in per_node:
        concepts = []
        unmapped = []
        for mention, mapping in rows:
            if mapping is None and client is not None:
                remote = remote_results.get(mention.text.lower())
                if remote is not None:
                    mapping = replace(remote, mention=mention)
            orig_span = offmap.to_original(mention.span)
            surface = original[orig_span[0]:orig_span[1]]
            if mapping is None:
                unmapped.append({"text": surface,
                                 "span": [orig_span[0], orig_span[1]]})
            else:
                concepts.append({
                    "mention": {"text": surface,
                                "span": [orig_span[0], orig_span[1]]},
                    "code": mapping.code,
                    "scheme": mapping.scheme,
                    "preferredName": mapping.preferred_name,
                    "score": mapping.score,
                    "source": mapping.source,
                })
        ann = annotations.setdefault(node.id, {})
        ann["concepts"] = concepts
        ann["unmapped_mentions"] = unmapped

    return replace(graph, annotations=annotations, warnings=warnings)


def concept_report(graph, incorrect_marks=frozenset()):
    """Mapping counts per scheme plus the unmapped total.

    ``incorrect_marks`` is a set of (node_id, start, end) identifying
    manually reviewed wrong mappings; the report mirrors the per-scheme
    mapped/incorrect table shape.
    """
    rows = {scheme: {"scheme": scheme, "mapped": 0, "incorrect": 0}
            for scheme in SCHEMES}
    unmapped = 0
    for node_id, ann in sorted(graph.annotations.items()):
        for concept in ann.get("concepts", []):
            scheme = concept.get("scheme")
            row = rows.setdefault(scheme, {"scheme": scheme, "mapped": 0,
                                           "incorrect": 0})
            row["mapped"] += 1
            span = concept.get("mention", {}).get("span", [None, None])
            if (node_id, span[0], span[1]) in incorrect_marks:
                row["incorrect"] += 1
        unmapped += len(ann.get("unmapped_mentions", []))
    return {"rows": [rows[s] for s in sorted(rows)], "unmapped": unmapped}


# -- TSV loaders --------------------------------------------------------------------


def load_lexicon(path) -> Lexicon:
    """TSV: code<TAB>scheme<TAB>preferred_name<TAB>syn1|syn2|..."""
    entries = []
    for line_no, line in enumerate(_tsv_lines(path), start=1):
        parts = line.split("\t")
        if len(parts) < 3:
            raise InputError(f"{path}:{line_no}: expected at least 3 columns")
        code, scheme, name = parts[0], parts[1], parts[2]
        if scheme not in SCHEMES:
            raise InputError(f"{path}:{line_no}: unknown scheme {scheme!r}")
        synonyms = ()
        if len(parts) > 3 and parts[3]:
            synonyms = tuple(s for s in parts[3].split("|") if s)
        entries.append(LexiconEntry(code=code, scheme=scheme,
                                    preferred_name=name, synonyms=synonyms))
    return Lexicon(entries=entries)


def load_overrides(path):
    """TSV: surface<TAB>code<TAB>scheme -> {surface.lower(): (code, scheme)}"""
    out = {}
    for line_no, line in enumerate(_tsv_lines(path), start=1):
        parts = line.split("\t")
        if len(parts) != 3:
            raise InputError(f"{path}:{line_no}: expected 3 columns")
        surface, code, scheme = parts
        if scheme not in SCHEMES:
            raise InputError(f"{path}:{line_no}: unknown scheme {scheme!r}")
        out[surface.lower()] = (code, scheme)
    return out


def load_abbreviations(path):
    """TSV: short<TAB>expansion"""
    out = {}
    for line_no, line in enumerate(_tsv_lines(path), start=1):
        parts = line.split("\t")
        if len(parts) != 2:
            raise InputError(f"{path}:{line_no}: expected 2 columns")
        out[parts[0]] = parts[1]
    return out


def _tsv_lines(path):
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line and not line.startswith("#"):
                yield line
