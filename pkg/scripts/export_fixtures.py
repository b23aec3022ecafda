#!/usr/bin/env python3
"""
Regenerate the shipped fixture graphs.
Writes one JSON document per named fixture, and optionally line/clock windows.

Usage:
    python scripts/export_fixtures.py
    python scripts/export_fixtures.py --line 3 --clock 4 --outdir /tmp/graphs
"""
import sys
import logging
import argparse
from pathlib import Path

# Add parent directory to path to import root modules
sys.path.insert(0, str(Path(__file__).parent.parent))

import config
from fixtures import FIXTURES, clock_window, fixture, line_window
from graph_core import dump_graph

# Setup argument parser
parser = argparse.ArgumentParser(description="Write fixture graphs as JSON documents")
parser.add_argument("--logfile", default=None, help="Log file path (default: stderr)")
parser.add_argument("--outdir", default=str(config.FIXTURE_DIR),
                    help=f"Output directory (default: {config.FIXTURE_DIR})")
parser.add_argument("--line", type=int, action="append", default=[],
                    help="Also write line_window(N) as line_N.json (repeatable)")
parser.add_argument("--clock", type=int, action="append", default=[],
                    help="Also write clock_window(N) as clock_N.json (repeatable)")
args = parser.parse_args()

# Setup logging
logger = logging.getLogger(__name__)
logging.basicConfig(
    filename=args.logfile,
    level=logging.INFO,
    format='%(asctime)s [%(levelname)s] %(message)s',
    datefmt='%Y-%m-%d %H:%M:%S'
)


def write(outdir, name, graph):
    target = outdir / f"{name}.json"
    target.write_text(dump_graph(graph) + "\n", encoding="utf-8")
    logger.info(f"Wrote {target} ({len(graph.vertices)} vertices, {len(graph.edges)} edges)")


def main():
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for name in sorted(FIXTURES):
        write(outdir, name, fixture(name))
    for n in args.line:
        write(outdir, f"line_{n}", line_window(n))
    for n in args.clock:
        write(outdir, f"clock_{n}", clock_window(n))
    return 0


if __name__ == "__main__":
    sys.exit(main() or 0)
