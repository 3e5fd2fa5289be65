#!/usr/bin/env python3
"""Regenerates the Unicode and legacy-charset data headers.

Run from the repository root:

    python3 tools/gen_tables.py

Outputs:
    include/corpusprep/detail/unicode_data.hpp
    include/corpusprep/detail/charset_data.hpp
    tests/support/nfc_cases.inc

The tables are derived from the Python runtime's unicodedata module and
codecs registry, so the checked-in headers correspond to the Unicode
version printed in the header banner.
"""

import codecs
import random
import sys
import unicodedata

MAX_CP = 0x110000
HANGUL_BASE = 0xAC00
HANGUL_END = 0xD7A4  # exclusive


def is_surrogate(cp):
    return 0xD800 <= cp <= 0xDFFF


def gen_decomp():
    """Full canonical decomposition (NFD) for every cp where it differs.

    Hangul syllables are excluded; they decompose algorithmically.
    """
    keys = []
    offsets = []
    data = []
    for cp in range(MAX_CP):
        if is_surrogate(cp) or HANGUL_BASE <= cp < HANGUL_END:
            continue
        c = chr(cp)
        d = unicodedata.normalize("NFD", c)
        if d != c:
            keys.append(cp)
            offsets.append(len(data))
            data.extend(ord(x) for x in d)
    offsets.append(len(data))
    return keys, offsets, data


def gen_ccc():
    out = []
    for cp in range(MAX_CP):
        if is_surrogate(cp):
            continue
        ccc = unicodedata.combining(chr(cp))
        if ccc:
            out.append((cp, ccc))
    return out


def gen_comp():
    """Primary composition pairs: (starter, combiner) -> composed.

    Derived from two-codepoint canonical decompositions that NFC maps back
    to the composed form (this implicitly honors composition exclusions).
    """
    pairs = []
    for cp in range(MAX_CP):
        if is_surrogate(cp) or HANGUL_BASE <= cp < HANGUL_END:
            continue
        c = chr(cp)
        d = unicodedata.decomposition(c)
        if not d or d.startswith("<"):
            continue
        parts = d.split()
        if len(parts) != 2:
            continue
        a, b = (int(p, 16) for p in parts)
        if unicodedata.normalize("NFC", chr(a) + chr(b)) == c:
            pairs.append(((a << 32) | b, cp))
    pairs.sort()
    return pairs


def gen_lower():
    out = []
    for cp in range(MAX_CP):
        if is_surrogate(cp):
            continue
        lo = chr(cp).lower()
        if len(lo) == 1 and lo != chr(cp):
            out.append((cp, ord(lo)))
    return out


def gen_ranges(pred):
    ranges = []
    start = None
    for cp in range(MAX_CP):
        ok = not is_surrogate(cp) and pred(cp)
        if ok and start is None:
            start = cp
        elif not ok and start is not None:
            ranges.append((start, cp - 1))
            start = None
    if start is not None:
        ranges.append((start, MAX_CP - 1))
    return ranges


def emit_u32_array(f, name, values, per_line=10):
    f.write(f"inline constexpr uint32_t {name}[] = {{\n")
    for i in range(0, len(values), per_line):
        chunk = ", ".join(f"0x{v:X}" for v in values[i : i + per_line])
        f.write(f"    {chunk},\n")
    f.write("};\n\n")


def emit_u64_array(f, name, values, per_line=6):
    f.write(f"inline constexpr uint64_t {name}[] = {{\n")
    for i in range(0, len(values), per_line):
        chunk = ", ".join(f"0x{v:X}ULL" for v in values[i : i + per_line])
        f.write(f"    {chunk},\n")
    f.write("};\n\n")


def write_unicode_header(path):
    dkeys, doffs, ddata = gen_decomp()
    ccc = gen_ccc()
    comp = gen_comp()
    lower = gen_lower()
    punct = gen_ranges(lambda cp: unicodedata.category(chr(cp)).startswith("P"))
    digit = gen_ranges(lambda cp: unicodedata.category(chr(cp)) == "Nd")

    with open(path, "w", encoding="utf-8") as f:
        f.write("// Generated by tools/gen_tables.py -- do not edit.\n")
        f.write(f"// Unicode data version: {unicodedata.unidata_version}\n")
        f.write("#pragma once\n\n#include <cstdint>\n\n")
        f.write("namespace corpusprep::detail {\n\n")

        emit_u32_array(f, "kDecompKey", dkeys)
        emit_u32_array(f, "kDecompOffset", doffs)
        emit_u32_array(f, "kDecompData", ddata)

        emit_u32_array(f, "kCccKey", [cp for cp, _ in ccc])
        f.write("inline constexpr uint8_t kCccVal[] = {\n")
        for i in range(0, len(ccc), 20):
            chunk = ", ".join(str(v) for _, v in ccc[i : i + 20])
            f.write(f"    {chunk},\n")
        f.write("};\n\n")

        emit_u64_array(f, "kCompKey", [k for k, _ in comp])
        emit_u32_array(f, "kCompVal", [v for _, v in comp])

        emit_u32_array(f, "kLowerKey", [cp for cp, _ in lower])
        emit_u32_array(f, "kLowerVal", [v for _, v in lower])

        emit_u32_array(f, "kPunctRange", [x for r in punct for x in r])
        emit_u32_array(f, "kDigitRange", [x for r in digit for x in r])

        f.write("}  // namespace corpusprep::detail\n")
    print(
        f"{path}: {len(dkeys)} decomps, {len(ccc)} ccc, {len(comp)} comps, "
        f"{len(lower)} lowers, {len(punct)} punct ranges, {len(digit)} digit ranges"
    )


def write_charset_header(path):
    encodings = [
        ("kIso8859_2", "iso-8859-2"),
        ("kCp1250", "cp1250"),
        ("kCp1252", "cp1252"),
    ]
    with open(path, "w", encoding="utf-8") as f:
        f.write("// Generated by tools/gen_tables.py -- do not edit.\n")
        f.write("#pragma once\n\n#include <cstdint>\n\n")
        f.write("namespace corpusprep::detail {\n\n")
        f.write("// Byte values 0x80..0xFF; 0xFFFD marks unassigned slots.\n")
        for name, enc in encodings:
            vals = []
            for b in range(0x80, 0x100):
                try:
                    vals.append(ord(bytes([b]).decode(enc)))
                except UnicodeDecodeError:
                    vals.append(0xFFFD)
            emit_u32_array(f, name, vals, per_line=8)
        f.write("}  // namespace corpusprep::detail\n")
    print(f"{path}: {len(encodings)} charset tables")


def write_nfc_cases(path):
    rng = random.Random(20240117)
    cases = []

    fixed = [
        "",
        "abc",
        "zażółć gęślą jaźń",
        "é",  # e + combining acute -> é
        "ȩ́",  # acute + cedilla, needs reordering
        "Å",  # A + ring -> Å
        "Å",  # already composed
        "ṩ",  # s with dot below and dot above
        "ṩ",
        "ṩ",  # reordered combining marks
        "가",  # Hangul syllable GA
        "가",  # Hangul jamo -> GA
        "각",  # jamo with trailing consonant
        "q̣̇x",
        "Å",  # Angstrom sign -> Å (singleton)
        "̈́",  # dialytika tonos (excluded composition)
        "ﬁ",  # fi ligature (compatibility; NFC keeps it)
        "ཱི",  # Tibetan vowels, odd ccc values
    ]
    cases.extend(fixed)

    pool = (
        list(range(0x20, 0x7F))
        + list(range(0xC0, 0x180))  # Latin-1/Ext-A
        + [0x301, 0x302, 0x308, 0x30A, 0x323, 0x327]  # combining marks
        + list(range(0x390, 0x3D0))  # Greek
        + list(range(0x410, 0x450))  # Cyrillic
        + list(range(0x1100, 0x1113))  # Hangul L jamo
        + list(range(0x1161, 0x1176))  # Hangul V jamo
        + list(range(0x11A8, 0x11C3))  # Hangul T jamo
        + list(range(0xAC00, 0xAC20))  # Hangul syllables
        + [0x1E69, 0x212B, 0x2028, 0x2581, 0x1F600]
    )
    for _ in range(240):
        n = rng.randint(1, 12)
        cases.append("".join(chr(rng.choice(pool)) for _ in range(n)))

    def cstr(s):
        out = []
        for ch in s:
            b = ch.encode("utf-8")
            out.extend(f"\\x{x:02x}" for x in b)
        return '"' + "".join(out) + '"'

    with open(path, "w", encoding="utf-8") as f:
        f.write("// Generated by tools/gen_tables.py -- do not edit.\n")
        f.write("// {input, NFC(input)} pairs computed by Python unicodedata.\n")
        for s in cases:
            f.write(f"{{{cstr(s)}, {cstr(unicodedata.normalize('NFC', s))}}},\n")
    print(f"{path}: {len(cases)} NFC cases")


def main():
    write_unicode_header("include/corpusprep/detail/unicode_data.hpp")
    write_charset_header("include/corpusprep/detail/charset_data.hpp")
    write_nfc_cases("tests/support/nfc_cases.inc")


if __name__ == "__main__":
    sys.exit(main())
