"""Write convergent and Hilbert-diameter data for one input as CSV.

    python scripts/contraction_csv.py inputs/sigma1.json 30 > sigma1.csv
"""

import sys

from mbcore.analysis import AnalysisConfig, analyze, emit_csv
from mbcore.cli import load_spec


def main(path, steps="30"):
    a = analyze(load_spec(path), AnalysisConfig(steps=int(steps)))
    sys.stdout.write(emit_csv(a))


if __name__ == "__main__":
    if len(sys.argv) < 2:
        sys.exit(__doc__)
    main(*sys.argv[1:])
