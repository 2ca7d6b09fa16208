import pytest

from jackmoments.campaign import (
    CampaignConfig,
    Cell,
    ConfigError,
    cell_matrix,
    cell_seed,
    format_reports,
    run_campaign,
    summarize,
)


def test_demo_grid_shape():
    config = CampaignConfig.demo("moment")
    assert len(config.cells) == 75
    assert {c.beta for c in config.cells} == {1, 2, 4}
    assert {(c.m, c.n) for c in config.cells} == {(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)}
    assert len(CampaignConfig.demo("odd").cells) == 45


@pytest.mark.parametrize("cell", [Cell(1, 3, 2, 1), Cell(3, 1, 2, 1), Cell(1, 0, 2, 1), Cell(1, 1, 2, -1)])
def test_invalid_cells(cell):
    with pytest.raises(ConfigError):
        CampaignConfig(cells=[cell])


def test_cell_seeds_are_distinct_and_stable():
    seeds = [cell_seed(5, i) for i in range(100)]
    assert len(set(seeds)) == 100
    assert seeds == [cell_seed(5, i) for i in range(100)]
    assert all(0 <= s < 2**63 for s in seeds)


def test_cell_matrix_replay():
    c = Cell(4, 2, 3, 1)
    assert cell_matrix(c, 11) == cell_matrix(c, 11)
    unit = cell_matrix(c, 11, unit_norm=True)
    assert abs((unit.entries**2).sum() - 1) < 1e-14


def test_octonion_cells_use_diagonal_gram():
    x = cell_matrix(Cell(8, 3, 4, 1), 3)
    assert not x.entries[0, 1].any()
    assert x.entries[2, 2].any()


@pytest.mark.parametrize("mode,k", [("moment", 2), ("odd", 3), ("bessel", 12)])
def test_octonion_cells_are_exact_only(mode, k):
    config = CampaignConfig(cells=[Cell(8, 2, 3, k), Cell(1, 1, 2, k)], mode=mode, samples=5000, seed=1)
    reports = run_campaign(config)
    assert [r.mc_verifiable for r in reports] == [False, True]
    summary = summarize(reports)
    assert summary.exact_only == 1 and summary.verifiable == 1


def test_summary_requires_exact_k0():
    config = CampaignConfig(cells=[Cell(2, 2, 3, 0)], samples=100)
    reports = run_campaign(config)
    assert summarize(reports).ok
    reports[0].z_score = 0.5
    assert not summarize(reports).ok


def test_formats_agree_on_rows():
    config = CampaignConfig(cells=[Cell(1, 1, 2, 1), Cell(2, 1, 1, 2)], samples=2000, seed=3)
    reports = run_campaign(config)
    assert len(format_reports(reports, "jsonl").splitlines()) == 2
    assert len(format_reports(reports, "csv").splitlines()) == 3
    assert "runtime_ms" in format_reports(reports, "csv", timing=True).splitlines()[0]
    with pytest.raises(ValueError):
        format_reports(reports, "xml")
