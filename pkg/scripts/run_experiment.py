#!/usr/bin/env python3
"""Run the qubit-phase CLI from a source checkout.

Usage:
  .venv/bin/python scripts/run_experiment.py sweep --config configs/fig2.yaml --svg --out results/fig2.csv
  .venv/bin/python scripts/run_experiment.py validate --workers 8
"""

import sys
from pathlib import Path

# Allow running as a script without installed package
sys.path.append(str(Path(__file__).resolve().parents[1] / "src"))

from experiments.cli import main  # type: ignore

if __name__ == "__main__":
    sys.exit(main())
