#!/usr/bin/env python3
"""Drive the whole CLI pipeline on a small synthetic cohort.

Equivalent shell session:

    wristwave synth --out raw --n-acute 3 --n-chronic 3
    wristwave features --manifest raw/manifest.csv --out features.csv
    wristwave select --features features.csv --group Acute --out sel.json
    wristwave train --features features.csv --group Acute \
        --selection sel.json --out model.json
    wristwave cv --features features.csv --group Acute \
        --selection sel.json --model lmgp --out cv_lmgp
    wristwave report --dir .
"""

import os
import sys
import tempfile

from wristwave.cli import main

with tempfile.TemporaryDirectory() as tmp:
    raw = os.path.join(tmp, "raw")
    feats = os.path.join(tmp, "features.csv")
    sel = os.path.join(tmp, "selection.json")
    model = os.path.join(tmp, "model.json")

    steps = [
        ["synth", "--out", raw, "--n-acute", "3", "--n-chronic", "3",
         "--seconds-per-visit", "128", "--samples-per-second", "5"],
        ["features", "--manifest", os.path.join(raw, "manifest.csv"),
         "--out", feats],
        ["select", "--features", feats, "--group", "Acute", "--out", sel],
        ["train", "--features", feats, "--group", "Acute",
         "--selection", sel, "--out", model],
        ["cv", "--features", feats, "--group", "Acute",
         "--selection", sel, "--model", "linear",
         "--out", os.path.join(tmp, "cv_linear")],
        ["cv", "--features", feats, "--group", "Acute",
         "--selection", sel, "--model", "lmgp",
         "--out", os.path.join(tmp, "cv_lmgp")],
        ["report", "--dir", tmp],
    ]
    for argv in steps:
        print(f"\n$ wristwave {' '.join(argv)}")
        code = main(argv)
        if code != 0:
            sys.exit(code)
