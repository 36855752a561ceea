"""Run every acceptance check and write repro_report.txt / repro_report.json."""

import argparse
from pathlib import Path

from phononforge import repro

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="out")
    out = Path(ap.parse_args().out_dir)
    out.mkdir(parents=True, exist_ok=True)
    table, report = repro.repro_report()
    (out / "repro_report.txt").write_text(table, encoding="utf-8")
    (out / "repro_report.json").write_text(report, encoding="utf-8")
    print(table, end="")
