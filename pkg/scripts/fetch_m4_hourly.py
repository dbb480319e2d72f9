#!/usr/bin/env python3
"""Download the M4 Hourly training set and normalize it for this package.

Writes ``data/m4_hourly.csv`` (one row per series: id, then values) at the
repository root by default.  The source rows are quoted and padded with
empty trailing cells; loading and re-saving strips both, so the output is
in the exact format the CLI and tests expect.

The file is ~35 MB of text (414 series).  Point --url at a local copy
(``file:///...``) if you already have Hourly-train.csv.
"""

import argparse
import sys
import tempfile
import urllib.request
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from twostage.data import load_series_csv, save_series_csv  # noqa: E402

DEFAULT_URL = (
    "https://raw.githubusercontent.com/Mcompetitions/M4-methods/master"
    "/Dataset/Train/Hourly-train.csv"
)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--url", default=DEFAULT_URL, help="source CSV location")
    parser.add_argument(
        "--out",
        default=str(Path(__file__).resolve().parents[1] / "data" / "m4_hourly.csv"),
        help="normalized output path (default: data/m4_hourly.csv)",
    )
    args = parser.parse_args(argv)

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    print(f"downloading {args.url}")
    with tempfile.NamedTemporaryFile(suffix=".csv") as raw:
        with urllib.request.urlopen(args.url) as response:
            while True:
                chunk = response.read(1 << 20)
                if not chunk:
                    break
                raw.write(chunk)
        raw.flush()
        series = load_series_csv(raw.name)
    save_series_csv(out, series)
    lengths = [len(s) for s in series]
    print(
        f"wrote {len(series)} series to {out} "
        f"(lengths {min(lengths)}..{max(lengths)})"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
