#!/usr/bin/env python3
"""Adapts tesseract to the payscan external OCR protocol.

Usage: tesseract_shim.py <image.png>

Prints one `<char>\t<confidence>` row per recognized character. Tesseract
reports confidence per word, so every character of a word gets the word's
confidence. Spaces between words are emitted with the lower neighbor's
confidence.
"""

import csv
import subprocess
import sys


def main() -> int:
    if len(sys.argv) != 2:
        print("usage: tesseract_shim.py <image.png>", file=sys.stderr)
        return 2
    proc = subprocess.run(
        ["tesseract", sys.argv[1], "stdout", "--psm", "7", "tsv"],
        capture_output=True,
        text=True,
    )
    if proc.returncode != 0:
        sys.stderr.write(proc.stderr)
        return proc.returncode
    words = []
    for row in csv.DictReader(proc.stdout.splitlines(), delimiter="\t", quoting=csv.QUOTE_NONE):
        text = (row.get("text") or "").strip()
        conf = float(row.get("conf") or -1)
        if text and conf >= 0:
            words.append((text, min(conf, 100.0)))
    for i, (text, conf) in enumerate(words):
        if i > 0:
            print(f" \t{min(conf, words[i - 1][1]):.1f}")
        for ch in text:
            print(f"{ch}\t{conf:.1f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
