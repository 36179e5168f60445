import math

import pytest

from semiclique import harness as h
from semiclique.solvers import SolverConfig

SMALL = """\
# two tiny cells
master_seed = 7
trials = 3
budget = 200
record_timing = false
[cell]
n = 64
k = 24
adversary = random; fake_cliques:count=1
solver = triple, degree
"""


def records(rec_flags, list_len=1, wall=2.0):
    return [h.TrialRecord(8, 4, "random", "degree", t, t, f, list_len, 0, wall) for t, f in enumerate(rec_flags)]


# -- config parsing ------------------------------------------------------------------

def test_parse_expands_cells(tmp_path):
    cfg = h.parse_config(SMALL, base=tmp_path)
    assert cfg.trials == 3 and cfg.master_seed == 7 and not cfg.record_timing
    assert cfg.solver_config == SolverConfig(sample_budget=200)
    assert cfg.out == tmp_path / "results"
    assert [c.key() for c in cfg.cells] == [
        (64, 24, "random", "triple"), (64, 24, "random", "degree"),
        (64, 24, "fake_cliques:count=1", "triple"), (64, 24, "fake_cliques:count=1", "degree")]


def test_k_rules():
    assert h.resolve_k("c_sqrt_nlogn:3", 4096) == [554]
    assert h.resolve_k("c_sqrt_nlogn:6", 4096) == [math.ceil(6 * math.sqrt(4096 * math.log(4096)))] == [1108]
    assert h.resolve_k("c_n34:3", 4096) == [1536]
    assert h.resolve_k("10, 20", 100) == [10, 20]
    with pytest.raises(h.ConfigError):
        h.resolve_k("c_sqrt_nlogn:x", 10)


def test_adversary_k_placeholder():
    text = "[cell]\nn = 100\nk = 20\nadversary = degree_boost:target_count=1,boost=k\nsolver = degree\n"
    assert h.parse_config(text).cells[0].adversary == "degree_boost:target_count=1,boost=20"


@pytest.mark.parametrize("text, where", [
    ("[cell]\nn = 10\nk = 20\nadversary = random\nsolver = degree\n", "infeasible"),
    ("[cell]\nn = 10\nk = 5\nadversary = random\nsolver = magic\n", "unknown solver"),
    ("[cell]\nn = 10\nk = 5\nadversary = bogus\nsolver = degree\n", "line 4"),
    ("[cell]\nn = ten\nk = 5\nadversary = random\nsolver = degree\n", "line 2"),
    ("trials = 0\n[cell]\nn = 10\nk = 5\nadversary = random\nsolver = degree\n", "trials"),
    ("trials = x\n[cell]\nn = 10\nk = 5\nadversary = random\nsolver = degree\n", "trials"),
    ("oops\n", "line 1"),
    ("trials = 1\n", r"no \[cell\]"),
    ("\n[cell]\nn = 10\nk = 5\nsolver = degree\n", "line 2"),
    ("[cell]\nn = 10\nk = 3\nadversary = random\nsolver = triple\n", "k >= 4"),
])
def test_config_errors(text, where):
    with pytest.raises(h.ConfigError, match=where):
        h.parse_config(text)


def test_run_cell_rejects_infeasible():
    cfg = h.ExperimentConfig(cells=[])
    with pytest.raises(h.ConfigError):
        h.run_cell(cfg, h.Cell(5, 6, "random", "degree"))


# -- running --------------------------------------------------------------------------

def test_degenerate_cell_recovers():
    cell = h.Cell(12, 12, "random", "triple")
    cfg = h.ExperimentConfig(cells=[cell], trials=1)
    (rec,) = h.run_cell(cfg, cell)
    assert rec.recovered and rec.list_len == 1 and rec.samples == 10


def test_seeds_are_distinct_per_cell_and_trial():
    a, b = h.Cell(64, 24, "random", "triple"), h.Cell(64, 24, "random", "degree")
    seeds = {h.trial_seeds(1, c, t) for c in (a, b) for t in range(5)}
    assert len(seeds) == 10
    assert h.trial_seeds(1, a, 0) == h.trial_seeds(1, a, 0)


def test_rerun_is_byte_identical(tmp_path):
    cfg = h.parse_config(SMALL, base=tmp_path)
    first = {k: p.read_bytes() for k, p in h.sweep(cfg).items()}
    second = {k: p.read_bytes() for k, p in h.sweep(cfg).items()}
    assert first == second


def test_threads_do_not_change_output(tmp_path):
    cfg = h.parse_config(SMALL, base=tmp_path)
    one = h.run_all(cfg)
    two = h.run_all(h.with_threads(cfg, 2))
    assert h.trials_csv(one) == h.trials_csv(two)


def test_timing_recorded_when_enabled():
    cell = h.Cell(64, 24, "random", "degree")
    cfg = h.ExperimentConfig(cells=[cell], trials=1, record_timing=True)
    assert h.run_cell(cfg, cell)[0].wall_ms > 0


def test_small_grid_succeeds(tmp_path):
    cfg = h.parse_config(SMALL, base=tmp_path)
    rates = {(s.adversary, s.solver): s.success_rate for s in h.summarize(h.run_all(cfg))}
    assert rates[("random", "triple")] == 1.0


# -- summaries and files ---------------------------------------------------------------

def test_summarize_examples():
    (s,) = h.summarize(records([True]))
    assert s.success_rate == 1.0 and s.trials == 1
    (s,) = h.summarize(records([True, False], list_len=3, wall=5.0))
    assert (s.success_rate, s.mean_list_len, s.mean_wall_ms) == (0.5, 3.0, 5.0)
    with pytest.raises(ValueError):
        h.summarize([])


def test_sweep_files(tmp_path):
    text = SMALL.replace("trials = 3", "trials = 1\nbounds = true")
    cfg = h.parse_config(text, base=tmp_path)
    paths = h.sweep(cfg)
    assert set(paths) == {"trials", "summary", "manifest", "bounds"}
    assert paths["trials"].read_text().splitlines()[0] == ",".join(h.TRIALS_HEADER)
    assert paths["summary"].read_text().splitlines()[0] == ",".join(h.SUMMARY_HEADER)
    assert paths["bounds"].read_text().startswith("name,n,k,adversary,b_size/m")
    manifest = paths["manifest"].read_text()
    assert "master_seed = 7" in manifest and "natural" in manifest
    seed = h.trial_seeds(7, cfg.cells[0], 0)[0]
    assert f"seeds={seed}" in manifest


def test_summary_round_trip(tmp_path):
    cfg = h.parse_config(SMALL, base=tmp_path)
    sums = h.summarize(h.run_all(cfg))
    path = tmp_path / "s.csv"
    path.write_text(h.summary_csv(sums))
    assert h.read_summary(path) == sums
    path.write_text("a,b\n1,2\n")
    with pytest.raises(h.ConfigError):
        h.read_summary(path)
