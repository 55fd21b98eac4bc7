# Copyright (C) 2026 The ManifestScope Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Generates every committed test fixture plus frozen expected values.

Usage: python3 make_fixtures.py [output_dir]   (default: ../data)

Oracle chain, per binary format:
  source tree/strings -> encoder -> bytes -> reference decoder -> expected
The script asserts the reference decoder recovers the source exactly before
freezing anything, so encoder and reference decoder must agree independently;
the C++ decoders are then tested against the frozen reference output.
"""

import base64
import json
import os
import random
import struct
import sys
import zipfile

import app_specs
import axml_encode
import axml_refdump
import dex_encode
import dex_refdump
from axml_encode import ANDROID_NS as A
from axml_encode import TOOLS_NS, element

OUT = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", "data"))
if len(sys.argv) > 1:
    OUT = os.path.abspath(sys.argv[1])


def write(path, data):
    full = os.path.join(OUT, path)
    os.makedirs(os.path.dirname(full), exist_ok=True)
    mode = "wb" if isinstance(data, (bytes, bytearray)) else "w"
    with open(full, mode) as f:
        f.write(data)


def write_json(path, obj):
    write(path, json.dumps(obj, indent=1, ensure_ascii=False, sort_keys=True)
          + "\n")


# ---------------------------------------------------------------------------
# Source-tree normalization (expected form of the reference dump).

def _value_json(value):
    if isinstance(value, bool):
        return {"type": "boolean", "value": value}
    if isinstance(value, int):
        return {"type": "int-dec", "value": value}
    if isinstance(value, str):
        return {"type": "string", "value": value}
    tag = value[0]
    if tag == "hex":
        return {"type": "int-hex", "value": value[1]}
    if tag == "ref":
        return {"type": "reference", "value": value[1]}
    if tag == "float":
        bits = struct.unpack("<I", struct.pack("<f", value[1]))[0]
        return {"type": "float", "bits": bits}
    if tag == "typed":
        dtype, data = value[1], value[2]
        if 0x12 < dtype <= 0x1F:
            signed = data - 0x100000000 if data >= 0x80000000 else data
            return {"type": "int-family", "data_type": dtype, "value": signed}
        return {"type": "raw", "data_type": dtype, "data": data}
    raise ValueError(value)


def normalize_tree(node):
    attrs = []
    for ns, name, value in node["attrs"]:
        entry = {"ns": ns, "name": name}
        entry.update(_value_json(value))
        attrs.append(entry)
    attrs.sort(key=lambda e: (e["ns"] or "", e["name"]))
    return {
        "ns": node["ns"],
        "name": node["name"],
        "attrs": attrs,
        "children": [normalize_tree(c) for c in node["children"]],
    }


def expected_resource_map(root):
    ids, seen = [], set()
    for node in _walk(root):
        for ns, name, _ in node["attrs"]:
            if ns == A and name in axml_encode.ATTR_RESOURCE_IDS \
                    and name not in seen:
                seen.add(name)
                ids.append(axml_encode.ATTR_RESOURCE_IDS[name])
    return ids


def _walk(node):
    yield node
    for child in node["children"]:
        yield from _walk(child)


def encode_and_verify(tree, **kwargs):
    """Encode, reference-decode, and assert the source tree round-trips."""
    blob = axml_encode.encode(tree, **kwargs)
    dumped = axml_refdump.dump(blob)
    assert dumped["root"] == normalize_tree(tree), \
        "reference decoder disagrees with source tree"
    if kwargs.get("resource_map", True):
        assert dumped["resource_map"] == expected_resource_map(tree)
    used = {s for node in _walk(tree) for s in
            [node["name"]] + [a[1] for a in node["attrs"]]
            + [a[2] for a in node["attrs"] if isinstance(a[2], str)]}
    assert used <= set(dumped["string_pool"]), "pool lost strings"
    return blob, dumped


def build_dex_and_verify(strings, version="035"):
    blob = dex_encode.build(strings, version=version)
    dumped = dex_refdump.dump(blob)
    assert dumped["strings"] == list(strings)
    assert dumped["version"] == version
    return blob, dumped


# ---------------------------------------------------------------------------
# ZIP helpers.

STORED = zipfile.ZIP_STORED
DEFLATED = zipfile.ZIP_DEFLATED


def write_zip_bytes(entries):
    import io
    buf = io.BytesIO()
    with zipfile.ZipFile(buf, "w") as z:
        for name, data, method in entries:
            zi = zipfile.ZipInfo(name, date_time=(1980, 1, 1, 0, 0, 0))
            zi.compress_type = method
            zi.external_attr = 0o644 << 16
            z.writestr(zi, data)
    return buf.getvalue()


def zip_listing(blob):
    import io
    entries = []
    with zipfile.ZipFile(io.BytesIO(blob)) as z:
        for zi in z.infolist():
            entries.append({
                "name": zi.filename,
                "compressed_size": zi.compress_size,
                "uncompressed_size": zi.file_size,
                "method": "stored" if zi.compress_type == STORED else "deflate",
                "crc32": zi.CRC,
                "content_b64":
                    base64.b64encode(z.read(zi.filename)).decode("ascii"),
            })
    return {"entries": entries}


def flip_entry_byte(blob, entry_name, at=8):
    """Flips one byte inside an entry's compressed payload."""
    import io
    with zipfile.ZipFile(io.BytesIO(blob)) as z:
        zi = z.getinfo(entry_name)
    off = zi.header_offset
    name_len, extra_len = struct.unpack_from("<HH", blob, off + 26)
    data_start = off + 30 + name_len + extra_len
    out = bytearray(blob)
    out[data_start + at] ^= 0xFF
    return bytes(out)


def make_apk(manifest_tree_, dex_strings, nsc=None, extra_dex=None,
             utf8_pool=True):
    manifest, manifest_dump = encode_and_verify(manifest_tree_,
                                                utf8=utf8_pool)
    entries = [("AndroidManifest.xml", manifest, DEFLATED)]
    dex, _ = build_dex_and_verify(dex_strings)
    entries.append(("classes.dex", dex, DEFLATED))
    if extra_dex:
        dex2, _ = build_dex_and_verify(extra_dex)
        entries.append(("classes2.dex", dex2, DEFLATED))
    if nsc is not None:
        nsc_blob, _ = encode_and_verify(
            app_specs.nsc_tree(base=nsc.get("base"),
                               domains=nsc.get("domains", ())),
            resource_map=False)
        entries.append(("res/xml/network_security_config.xml", nsc_blob,
                        DEFLATED))
    entries.append(("resources.arsc", b"\x02\x00\x0c\x00placeholder",
                    STORED))
    return write_zip_bytes(entries), manifest_dump


# ---------------------------------------------------------------------------

def gen_axml_fixtures():
    fixtures = {}

    typed_values = element("fixture", ns=None, attrs=[
        (A, "name", "com.example.TypedValues"),
        (A, "exported", True),
        (A, "value", 42),
        (None, "plain", "just a plain attr"),
        (TOOLS_NS, "note", "two namespaces"),
        (A, "debugFlags", ("hex", 0x1A2B)),
        (A, "theme", ("ref", 0x7F010001)),
        (A, "weight", ("float", 1.5)),
        (A, "tint", ("typed", 0x1C, 0xFF00FF00)),
        (A, "margin", ("typed", 0x05, 0x00001001)),
        (A, "enabled", False),
    ], children=[
        element("child", [(A, "label", "café ☕"),
                          (None, "emoji", "\U0001F3AE play")]),
    ])
    fixtures["typed_values"] = dict(tree=typed_values, utf8=True,
                                    cdata="character data here",
                                    unknown_chunk=True)

    utf16 = element("manifest", attrs=[
        (None, "package", "com.example.utf16"),
    ], children=[
        element("application", [(A, "label", "café \U0001F600 game"),
                                (A, "allowBackup", False)]),
    ])
    fixtures["utf16_pool"] = dict(tree=utf16, utf8=False)

    fixtures["empty_manifest"] = dict(tree=element("manifest"), utf8=True)

    two = element("manifest", attrs=[(None, "package", "com.example.two")],
                  children=[
        element("application", children=[
            element("activity", [(A, "name", "com.example.two.Main")]),
            element("activity", [(A, "name", "com.example.two.Settings")]),
            element("service", [(A, "name", "com.example.two.Worker")]),
        ]),
    ])
    fixtures["two_activities"] = dict(tree=two, utf8=True)

    for name, spec in fixtures.items():
        kwargs = {k: v for k, v in spec.items() if k != "tree"}
        blob, dumped = encode_and_verify(spec["tree"], **kwargs)
        write(f"axml/{name}.axml", blob)
        write_json(f"axml/{name}.expected.json", dumped)

    write("axml/not_binary.xml",
          "<manifest package=\"com.example.text\"/>\n")


def gen_dex_fixtures():
    cases = {
        "empty": ([], "038"),
        "trackers": ([
            "Lcom/appsflyer/AppsFlyerLib;",
            "Lcom/appsflyer/SingleInstallBroadcastReceiver;",
            "Lcom/google/firebase/analytics/FirebaseAnalytics;",
            "(Lcom/appsflyer/AppsFlyerLib;)V",
            "[I",
            "[Lcom/appsflyer/AppsFlyerLib;",
            "hello world",
            "Lnotapackage;",
        ], "039"),
        "exotic": ([
            "",
            "hello",
            "café",
            "\U0001F600 game",
            "nul\x00inside",
            "Lcom/google/firebase/analytics/FirebaseAnalytics;",
            "\U0001D54Cnicode math",
        ], "035"),
        "mixed": ([f"string_{i:03d}" for i in range(100)] + [
            "Lcom/unity3d/ads/UnityAds;",
            "Lcom/example/engine/Physics;",
            "Landroid/view/View;",
        ], "041"),
    }
    for name, (strings, version) in cases.items():
        blob, dumped = build_dex_and_verify(strings, version=version)
        write(f"dex/{name}.dex", blob)
        write_json(f"dex/{name}.expected.json", dumped)

    write("dex/notadex.bin", b"PK\x03\x04 this is no dex file")


def gen_zip_fixtures():
    manifest, _ = encode_and_verify(app_specs.paper_fixtures()["app9_style"]
                                    ["manifest"])
    dex, _ = build_dex_and_verify(["Lcom/example/a;", "Lcom/example/b;"])
    readme = b"fixture archive for container tests\n" * 4

    basic3 = write_zip_bytes([
        ("AndroidManifest.xml", manifest, DEFLATED),
        ("classes.dex", dex, DEFLATED),
        ("assets/readme.txt", readme, STORED),
    ])
    write("zip/basic3.zip", basic3)
    write_json("zip/basic3.expected.json", zip_listing(basic3))

    write("zip/empty.zip", write_zip_bytes([]))

    corrupt = flip_entry_byte(basic3, "classes.dex")
    write("zip/corrupt_deflate.zip", corrupt)
    write_json("zip/corrupt_deflate.expected.json",
               {"corrupt_entry": "classes.dex",
                "intact_entry": "assets/readme.txt"})

    # EOCD whose central directory lies outside the file.
    eocd = struct.pack("<IHHHHIIH", 0x06054B50, 0, 0, 2, 2, 100, 5000, 0)
    write("zip/truncated_eocd.zip", b"\x00" * 16 + eocd)

    # Classic ZIP64 marker in the entry count.
    zip64 = struct.pack("<IHHHHIIH", 0x06054B50, 0, 0, 0xFFFF, 0xFFFF,
                        0, 0, 0)
    write("zip/zip64_marker.zip", zip64)

    rng = random.Random(0xC0FFEE)
    blob = bytes(rng.randrange(256) for _ in range(64))
    assert b"PK\x05\x06" not in blob
    write("zip/random_bytes.bin", blob)

    write("zip/badname.zip", write_zip_bytes([
        ("../evil.txt", b"nope", STORED),
        ("ok.txt", b"fine", STORED),
    ]))
    write("zip/dupname.zip", write_zip_bytes([
        ("a.txt", b"one", STORED),
        ("a.txt", b"two", STORED),
    ]))
    write("zip/bzip2_method.zip", write_zip_bytes([
        ("a.txt", b"compressed with an unsupported method" * 3,
         zipfile.ZIP_BZIP2),
    ]))


def gen_corpus():
    labels = ["app_id,cohort"]
    summary = {}
    for spec in app_specs.CORPUS:
        derived = app_specs.assess(spec["vector"])
        assert derived == spec["level"], \
            f"{spec['name']}: designed vector yields {derived}, " \
            f"expected {spec['level']}"

        tree = app_specs.build_corpus_manifest(spec)
        dex_strings = app_specs.build_corpus_dex_strings(spec)
        extra_dex = None
        if spec["name"] in ("c05", "g02"):
            # multidex: tracker descriptors split across classes*.dex
            half = len(dex_strings) - 1
            extra_dex = dex_strings[half:]
            dex_strings = dex_strings[:half]
        utf8_pool = spec["name"][-1] not in "369"  # mix pool encodings
        apk, manifest_dump = make_apk(tree, dex_strings,
                                      nsc=spec.get("nsc"),
                                      extra_dex=extra_dex,
                                      utf8_pool=utf8_pool)
        write(f"corpus/{spec['name']}.apk", apk)
        write_json(f"corpus/{spec['name']}.manifest.expected.json",
                   manifest_dump)
        labels.append(f"{spec['package']},{spec['cohort']}")
        summary.setdefault(spec["cohort"], {"high": 0, "medium": 0, "low": 0})
        summary[spec["cohort"]][spec["level"]] += 1

    assert summary["children-oriented"] == {"high": 5, "medium": 7, "low": 0}
    assert summary["general-audience"] == {"high": 4, "medium": 4, "low": 1}
    write("corpus/labels.csv", "\n".join(labels) + "\n")


def gen_paper_fixtures():
    for name, spec in app_specs.paper_fixtures().items():
        apk, manifest_dump = make_apk(spec["manifest"], spec["dex"],
                                      nsc=spec.get("nsc"))
        write(f"paper/{name}.apk", apk)
        write_json(f"paper/{name}.manifest.expected.json", manifest_dump)


def gen_mixed_dir():
    spec = app_specs.paper_fixtures()["app9_style"]
    apk, _ = make_apk(spec["manifest"], spec["dex"])
    write("mixed/a_good.apk", apk)
    rng = random.Random(0xBADF00D)
    write("mixed/b_broken.apk", bytes(rng.randrange(256) for _ in range(128)))


def main():
    gen_axml_fixtures()
    gen_dex_fixtures()
    gen_zip_fixtures()
    gen_corpus()
    gen_paper_fixtures()
    gen_mixed_dir()
    print(f"fixtures written to {OUT}")


if __name__ == "__main__":
    main()
