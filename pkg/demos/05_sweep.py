"""
A small sweep
=============

Experiments are described by a plain text config.  The harness expands it
into cells, runs every trial with seeds derived from the master seed, and
writes CSV files plus a manifest.  The same thing is available as
``semiclique sweep --config FILE``.
"""
import tempfile
from pathlib import Path

from semiclique import harness
from semiclique.plotting import success_svg

CONFIG = """\
master_seed = 11
trials = 4
record_timing = false
[cell]
n = 512
k = 60, 90, 120, 160
adversary = random; degree_boost:target_count=1,boost=k
solver = triple, degree
"""

out = Path(tempfile.mkdtemp()) / "sweep"
cfg = harness.parse_config(CONFIG)
cfg.out = out
paths = harness.sweep(cfg)
print(paths["summary"].read_text())

# success rate against k, one line per (adversary, solver)
svg = out / "success.svg"
svg.write_text(success_svg(harness.read_summary(paths["summary"])))
print("plot written to", svg)
print(paths["manifest"].read_text().splitlines()[:3])
