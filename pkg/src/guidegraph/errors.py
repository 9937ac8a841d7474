"""Exception types shared across the pipeline stages."""


class GuidegraphError(Exception):
    """Base class for all package errors."""


class InputError(GuidegraphError):
    """Bad or malformed input data (CLI exit code 1)."""


class UnsupportedFeatureError(GuidegraphError):
    """Input uses a feature outside the supported subset (CLI exit code 2)."""


class PdfError(InputError):
    """PDF structure error; ``offset`` is the byte offset where known."""

    def __init__(self, message, offset=None):
        super().__init__(message)
        self.offset = offset

    def __str__(self):
        base = super().__str__()
        if self.offset is not None:
            return f"{base} (at byte offset {self.offset})"
        return base


class MalformedHeader(PdfError):
    """Input does not begin with a %PDF-1. header."""


class BrokenXref(PdfError):
    """Cross-reference table is missing, malformed, or inconsistent."""


class UnsupportedFilter(PdfError, UnsupportedFeatureError):
    """Stream filter outside the supported subset; names the filter."""

    def __init__(self, filter_name, offset=None):
        super().__init__(f"unsupported stream filter: {filter_name}", offset)
        self.filter_name = filter_name


class UnsupportedFont(PdfError, UnsupportedFeatureError):
    """Font outside the standard-14 set; names the font."""

    def __init__(self, font_name, offset=None):
        super().__init__(f"unsupported font: {font_name}", offset)
        self.font_name = font_name


class UnbalancedStateStack(PdfError):
    """Content stream restores graphics state more often than it saves."""


class SchemaViolation(InputError):
    """Document does not conform to the expected schema.

    ``path`` points at the offending key, e.g. ``pages[0].media_box``.
    """

    def __init__(self, path, message=None):
        detail = message or "schema violation"
        super().__init__(f"{detail}: {path}")
        self.path = path


class DanglingReference(InputError):
    """A serialized graph references an @id that is not in the document."""

    def __init__(self, ref_id):
        super().__init__(f"dangling reference: {ref_id}")
        self.ref_id = ref_id


class AsymmetricEdge(InputError):
    """next/previous arrays disagree about an edge."""

    def __init__(self, from_id, to_id):
        super().__init__(f"asymmetric edge: {from_id} -> {to_id}")
        self.from_id = from_id
        self.to_id = to_id


class DuplicateMarker(InputError):
    """Two footnotes on one page share the same marker letter."""

    def __init__(self, marker, page_index):
        super().__init__(f"duplicate footnote marker {marker!r} on page {page_index}")
        self.marker = marker
        self.page_index = page_index


class RemoteError(GuidegraphError):
    """Remote thesaurus lookup failed; ``retryable`` hints at transience."""

    def __init__(self, message, cause=None, retryable=False):
        super().__init__(message)
        self.cause = cause
        self.retryable = retryable


class MissingLabel(InputError):
    """A unique node text has no entry in the label map."""

    def __init__(self, text):
        super().__init__(f"no label for node text: {text!r}")
        self.text = text


class DegenerateDataset(InputError):
    """Training data contains fewer than two distinct classes."""


class EmptyVocabulary(InputError):
    """Vocabulary filtering removed every term."""


class InsufficientClassMembers(InputError):
    """A class has fewer members than the number of CV folds."""

    def __init__(self, label, k):
        super().__init__(f"class {label!r} has fewer than {k} members")
        self.label = label
        self.k = k
