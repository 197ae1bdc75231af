#!/usr/bin/env python3
"""
liecov Management Script
Runs toolkit commands and writes the example input files under seed_data/
"""

import sys
from pathlib import Path

from liecov import create_context
from liecov.catalog import so3
from liecov.cli import main as cli_main
from liecov.formats import format_algebra, format_representation
from liecov.rep import irreducible_sl2

SEED_DIR = Path(__file__).resolve().parent / 'seed_data'


def write_seed_files():
    """Regenerate the catalog-derived example files"""
    create_context()
    SEED_DIR.mkdir(exist_ok=True)
    (SEED_DIR / 'so3.alg').write_text(format_algebra(so3()))
    print("✅ Wrote so3.alg")
    (SEED_DIR / 'sl2_irrep1.rep').write_text(format_representation(irreducible_sl2(1)))
    print("✅ Wrote sl2_irrep1.rep")


def main():
    if len(sys.argv) > 1 and sys.argv[1] == 'seed':
        write_seed_files()
        return 0
    return cli_main(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
