"""Tokenizer and object parser for the supported PDF 1.x subset.

Supported file structure: classic cross-reference tables (single section,
no incremental updates), direct and indirect objects, literal/hex strings,
FlateDecode or unfiltered streams.  Everything else raises a named error
with the byte offset where known.
"""

from __future__ import annotations

import re
import zlib
from dataclasses import dataclass

from ..errors import BrokenXref, MalformedHeader, UnsupportedFilter

WHITESPACE = b"\x00\t\n\x0c\r "
DELIMITERS = b"()<>[]{}/%"


class Name(str):
    """A PDF name object (distinct from a string)."""

    __slots__ = ()


@dataclass(frozen=True)
class IndirectRef:
    num: int
    gen: int


@dataclass
class StreamObject:
    dictionary: dict
    raw: bytes
    offset: int  # byte offset of the stream data in the file


class Lexer:
    """Byte-level tokenizer for PDF object syntax and content streams."""

    def __init__(self, data: bytes, pos: int = 0):
        self.data = data
        self.pos = pos

    def _skip_ws(self):
        data, n = self.data, len(self.data)
        while self.pos < n:
            c = data[self.pos]
            if c in WHITESPACE:
                self.pos += 1
            elif c == 0x25:  # % comment to end of line
                while self.pos < n and data[self.pos] not in b"\r\n":
                    self.pos += 1
            else:
                return

    def next_token(self):
        """Return (kind, value, offset) or None at end of input.

        Kinds: int, real, name, string (bytes), dict_open, dict_close,
        array_open, array_close, keyword.
        """
        self._skip_ws()
        data, n = self.data, len(self.data)
        if self.pos >= n:
            return None
        start = self.pos
        c = data[start]
        if c == 0x2F:  # /
            return ("name", self._read_name(), start)
        if c == 0x28:  # (
            return ("string", self._read_literal_string(), start)
        if c == 0x3C:  # <
            if start + 1 < n and data[start + 1] == 0x3C:
                self.pos += 2
                return ("dict_open", None, start)
            return ("string", self._read_hex_string(), start)
        if c == 0x3E:  # >
            if start + 1 < n and data[start + 1] == 0x3E:
                self.pos += 2
                return ("dict_close", None, start)
            self.pos += 1
            return ("keyword", b">", start)
        if c == 0x5B:
            self.pos += 1
            return ("array_open", None, start)
        if c == 0x5D:
            self.pos += 1
            return ("array_close", None, start)
        if c == 0x7B:
            self.pos += 1
            return ("keyword", b"{", start)
        if c == 0x7D:
            self.pos += 1
            return ("keyword", b"}", start)
        if c in b"+-.0123456789":
            return self._read_number(start)
        # keyword: run of regular characters
        end = start
        while end < n and data[end] not in WHITESPACE and data[end] not in DELIMITERS:
            end += 1
        if end == start:  # lone delimiter byte we do not understand
            self.pos += 1
            return ("keyword", data[start:start + 1], start)
        self.pos = end
        return ("keyword", data[start:end], start)

    def _read_number(self, start):
        data, n = self.data, len(self.data)
        end = start + 1
        while end < n and data[end] in b"+-.0123456789eE":
            end += 1
        raw = data[start:end]
        self.pos = end
        try:
            if b"." in raw or b"e" in raw or b"E" in raw:
                return ("real", float(raw), start)
            return ("int", int(raw), start)
        except ValueError:
            return ("keyword", raw, start)

    def _read_name(self) -> Name:
        data, n = self.data, len(self.data)
        self.pos += 1  # skip /
        out = bytearray()
        while self.pos < n:
            c = data[self.pos]
            if c in WHITESPACE or c in DELIMITERS:
                break
            if c == 0x23 and self.pos + 2 < n:  # #xx escape
                try:
                    out.append(int(data[self.pos + 1:self.pos + 3], 16))
                    self.pos += 3
                    continue
                except ValueError:
                    pass
            out.append(c)
            self.pos += 1
        return Name(out.decode("latin-1"))

    def _read_literal_string(self) -> bytes:
        data, n = self.data, len(self.data)
        self.pos += 1  # skip (
        out = bytearray()
        depth = 1
        while self.pos < n:
            c = data[self.pos]
            if c == 0x5C:  # backslash
                self.pos += 1
                if self.pos >= n:
                    break
                e = data[self.pos]
                if e in b"nrtbf":
                    out.append({0x6E: 10, 0x72: 13, 0x74: 9, 0x62: 8, 0x66: 12}[e])
                    self.pos += 1
                elif e in b"()\\":
                    out.append(e)
                    self.pos += 1
                elif e in b"01234567":
                    digits = bytearray()
                    while self.pos < n and len(digits) < 3 and data[self.pos] in b"01234567":
                        digits.append(data[self.pos])
                        self.pos += 1
                    out.append(int(digits, 8) & 0xFF)
                elif e in b"\r\n":  # line continuation
                    self.pos += 1
                    if e == 0x0D and self.pos < n and data[self.pos] == 0x0A:
                        self.pos += 1
                else:
                    out.append(e)
                    self.pos += 1
            elif c == 0x28:
                depth += 1
                out.append(c)
                self.pos += 1
            elif c == 0x29:
                depth -= 1
                self.pos += 1
                if depth == 0:
                    break
                out.append(c)
            else:
                out.append(c)
                self.pos += 1
        return bytes(out)

    def _read_hex_string(self) -> bytes:
        data, n = self.data, len(self.data)
        self.pos += 1  # skip <
        digits = bytearray()
        while self.pos < n and data[self.pos] != 0x3E:
            c = data[self.pos]
            if c not in WHITESPACE:
                digits.append(c)
            self.pos += 1
        self.pos += 1  # skip >
        if len(digits) % 2:
            digits.append(0x30)
        return bytes.fromhex(digits.decode("latin-1"))


class ObjectParser:
    """Parses PDF objects (with `N G R` reference recognition)."""

    def __init__(self, data: bytes, pos: int = 0):
        self.lexer = Lexer(data, pos)

    def parse_object(self, token=None):
        lex = self.lexer
        if token is None:
            token = lex.next_token()
        if token is None:
            raise BrokenXref("unexpected end of data", len(lex.data))
        kind, value, offset = token
        if kind == "int":
            # Possible indirect reference: int int R
            save = lex.pos
            t2 = lex.next_token()
            if t2 and t2[0] == "int":
                t3 = lex.next_token()
                if t3 and t3[0] == "keyword" and t3[1] == b"R":
                    return IndirectRef(value, t2[1])
            lex.pos = save
            return value
        if kind in ("real", "string", "name"):
            return value
        if kind == "array_open":
            out = []
            while True:
                t = lex.next_token()
                if t is None:
                    raise BrokenXref("unterminated array", offset)
                if t[0] == "array_close":
                    return out
                out.append(self.parse_object(t))
        if kind == "dict_open":
            out = {}
            while True:
                t = lex.next_token()
                if t is None:
                    raise BrokenXref("unterminated dictionary", offset)
                if t[0] == "dict_close":
                    return out
                if t[0] != "name":
                    raise BrokenXref("dictionary key is not a name", t[2])
                key = t[1]
                out[key] = self.parse_object()
        if kind == "keyword":
            if value == b"true":
                return True
            if value == b"false":
                return False
            if value == b"null":
                return None
        raise BrokenXref(f"unexpected token {value!r}", offset)


_HEADER_RE = re.compile(rb"%PDF-1\.")


class PdfFile:
    """Cross-reference table, object loading, and stream decoding."""

    def __init__(self, data: bytes):
        self.data = data
        if not data.startswith(b"%PDF-1."):
            raise MalformedHeader("input does not begin with a %PDF-1. header", 0)
        self._cache = {}
        self.xref, self.trailer = self._read_xref()

    # -- xref ---------------------------------------------------------------

    def _read_xref(self):
        data = self.data
        tail = data[-2048:]
        idx = tail.rfind(b"startxref")
        if idx < 0:
            raise BrokenXref("startxref not found", len(data))
        lex = Lexer(tail, idx + len(b"startxref"))
        tok = lex.next_token()
        if tok is None or tok[0] != "int":
            raise BrokenXref("bad startxref value", len(data) - len(tail) + idx)
        start = tok[1]
        if not (0 <= start < len(data)):
            raise BrokenXref(f"startxref offset {start} out of range", start)

        lex = Lexer(data, start)
        tok = lex.next_token()
        if tok is None or tok[0] != "keyword" or tok[1] != b"xref":
            raise BrokenXref("expected a classic 'xref' table", start)

        entries = {}
        while True:
            tok = lex.next_token()
            if tok is None:
                raise BrokenXref("unterminated xref table", start)
            if tok[0] == "keyword" and tok[1] == b"trailer":
                break
            if tok[0] != "int":
                raise BrokenXref("bad xref subsection header", tok[2])
            first = tok[1]
            tok2 = lex.next_token()
            if tok2 is None or tok2[0] != "int":
                raise BrokenXref("bad xref subsection count", tok[2])
            count = tok2[1]
            for i in range(count):
                t_off = lex.next_token()
                t_gen = lex.next_token()
                t_type = lex.next_token()
                if (t_off is None or t_off[0] != "int" or t_gen is None
                        or t_gen[0] != "int" or t_type is None
                        or t_type[0] != "keyword" or t_type[1] not in (b"n", b"f")):
                    raise BrokenXref("bad xref entry", t_off[2] if t_off else start)
                if t_type[1] == b"n":
                    entries.setdefault(first + i, (t_off[1], t_gen[1]))

        parser = ObjectParser(data, lex.pos)
        trailer = parser.parse_object()
        if not isinstance(trailer, dict):
            raise BrokenXref("trailer is not a dictionary", lex.pos)
        if "Prev" in trailer or "XRefStm" in trailer:
            raise BrokenXref("incremental updates are not supported", start)
        if "Root" not in trailer:
            raise BrokenXref("trailer has no /Root", lex.pos)
        return entries, trailer

    # -- objects ------------------------------------------------------------

    def resolve(self, obj):
        while isinstance(obj, IndirectRef):
            obj = self.load_object(obj.num, obj.gen)
        return obj

    def load_object(self, num: int, gen: int):
        key = (num, gen)
        if key in self._cache:
            return self._cache[key]
        entry = self.xref.get(num)
        if entry is None or entry[1] != gen:
            raise BrokenXref(f"object {num} {gen} not in xref table")
        offset = entry[0]
        if not (0 <= offset < len(self.data)):
            raise BrokenXref(f"object {num} offset out of range", offset)
        lex = Lexer(self.data, offset)
        t_num, t_gen, t_obj = lex.next_token(), lex.next_token(), lex.next_token()
        if (t_num is None or t_num[0] != "int" or t_num[1] != num
                or t_gen is None or t_gen[0] != "int"
                or t_obj is None or t_obj[1] != b"obj"):
            raise BrokenXref(f"xref points at offset {offset} but no 'obj' found",
                             offset)
        parser = ObjectParser(self.data, lex.pos)
        value = parser.parse_object()
        # A stream keyword after the dictionary makes it a stream object.
        save = parser.lexer.pos
        tok = parser.lexer.next_token()
        if tok is not None and tok[0] == "keyword" and tok[1] == b"stream":
            if not isinstance(value, dict):
                raise BrokenXref("stream without a dictionary", tok[2])
            pos = tok[2] + len(b"stream")
            if self.data[pos:pos + 2] == b"\r\n":
                pos += 2
            elif self.data[pos:pos + 1] in (b"\n", b"\r"):
                pos += 1
            length = self.resolve(value.get("Length"))
            if not isinstance(length, int) or length < 0 or pos + length > len(self.data):
                raise BrokenXref(f"bad stream /Length for object {num}", pos)
            raw = self.data[pos:pos + length]
            value = StreamObject(dictionary=value, raw=raw, offset=pos)
        else:
            parser.lexer.pos = save
        self._cache[key] = value
        return value

    # -- streams ------------------------------------------------------------

    def decode_stream(self, stream: StreamObject) -> bytes:
        filters = self.resolve(stream.dictionary.get("Filter"))
        if filters is None:
            return stream.raw
        if isinstance(filters, (Name, str)):
            filters = [filters]
        parms = self.resolve(stream.dictionary.get("DecodeParms"))
        if isinstance(parms, dict):
            parms = [parms]
        data = stream.raw
        for i, f in enumerate(filters):
            if f != "FlateDecode":
                raise UnsupportedFilter(str(f), stream.offset)
            p = parms[i] if isinstance(parms, list) and i < len(parms) else None
            p = self.resolve(p)
            if isinstance(p, dict) and self.resolve(p.get("Predictor", 1)) not in (None, 1):
                raise UnsupportedFilter("FlateDecode with predictor", stream.offset)
            try:
                data = zlib.decompress(data)
            except zlib.error as exc:
                raise BrokenXref(f"FlateDecode failed: {exc}", stream.offset) from exc
        return data
