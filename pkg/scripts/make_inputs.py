"""Regenerate the example JSON inputs under inputs/."""

import json
import sys
from pathlib import Path

from mbcore.builtins import EXAMPLE_INPUTS


def main(out_dir="inputs"):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, obj in EXAMPLE_INPUTS.items():
        (out / f"{name}.json").write_text(json.dumps(obj, indent=2) + "\n")
        print(out / f"{name}.json")


if __name__ == "__main__":
    main(*sys.argv[1:])
