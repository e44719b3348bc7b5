"""
pfmetrics command line entry point.

Usage:
    python app.py compute a.pgm b.pgm --metric "f{1,2,0}" --oversample 4
    python app.py matrix images/ --metric w2 --threads 8 --out matrix.csv
    python app.py verify --seed 0 --out reports.csv
    python app.py bench --sizes 32,64,128
    python app.py synth --seed 7 --count 10 --sizes 32 --out corpus/
    python app.py scatter --sizes 32 --out scatter.csv
"""

import sys

from pfmetrics.cli import main

if __name__ == '__main__':
    sys.exit(main())
