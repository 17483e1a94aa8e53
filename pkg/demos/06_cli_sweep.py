"""
Driving the command line tool
=============================

Run the full check set once, then sweep the charge. Equivalent shell:

    kramers-lab kramers demos/configs/fixed_momentum.toml --out runs/single
    kramers-lab sweep demos/configs/fixed_momentum.toml --axis e --values 0,0.5,1 --out runs/e
"""

import csv
import json
import tempfile
from pathlib import Path

from kramers_lab.cli import main

here = Path(__file__).parent
cfg = str(here / "configs" / "fixed_momentum.toml")
out = Path(tempfile.mkdtemp())

code = main(["kramers", cfg, "--out", str(out / "single")])
report = json.loads((out / "single" / "report.json").read_text())
print("exit", code, {k: v["status"] for k, v in report["checks"].items()})

main(["sweep", cfg, "--axis", "e", "--values", "0,0.5,1", "--out", str(out / "e")])
for row in csv.DictReader(open(out / "e" / "summary.csv")):
    print(row["e"], row["mean_0"], row["mult_0"], row["max_pairing"])
