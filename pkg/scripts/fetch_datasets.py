"""Place the public benchmark datasets where the test suite looks for them.

The files are expected as ``<name>.arff`` plus the MULAN ``<name>.xml``
label file.  Either copy them from a local directory::

    python3 scripts/fetch_datasets.py --from-dir ~/Downloads/mulan

or download them from a mirror laid out the same way::

    python3 scripts/fetch_datasets.py --base-url https://example.org/mulan/

The destination defaults to ``tests/data/public``; the tests also honour
``MLD_DATA_DIR``.
"""

import argparse
import shutil
import sys
import urllib.request
from pathlib import Path

NAMES = ["genbase", "yeast", "cal500", "enron", "medical"]
DEST = Path(__file__).resolve().parent.parent / "tests" / "data" / "public"


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    src = ap.add_mutually_exclusive_group(required=True)
    src.add_argument("--from-dir", type=Path)
    src.add_argument("--base-url")
    ap.add_argument("--dest", type=Path, default=DEST)
    ap.add_argument("--names", nargs="+", default=NAMES)
    args = ap.parse_args(argv)

    args.dest.mkdir(parents=True, exist_ok=True)
    missing = []
    for name in args.names:
        for suffix in (".arff", ".xml"):
            target = args.dest / f"{name}{suffix}"
            try:
                if args.from_dir is not None:
                    shutil.copyfile(args.from_dir / f"{name}{suffix}", target)
                else:
                    url = args.base_url.rstrip("/") + f"/{name}{suffix}"
                    with urllib.request.urlopen(url, timeout=60) as resp, open(target, "wb") as fh:
                        shutil.copyfileobj(resp, fh)
            except OSError as exc:
                missing.append(f"{name}{suffix}: {exc}")
    for m in missing:
        print(f"not fetched: {m}", file=sys.stderr)
    return 1 if missing else 0


if __name__ == "__main__":
    sys.exit(main())
