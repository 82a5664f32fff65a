"""Sampling harness: schemes, Wishart draws, records, summaries, CSV."""

import numpy as np
import pytest

from gausspid import SchemeId, run_scheme, sample_dims, sample_wishart, summarize
from gausspid.exceptions import EmptyInput
from gausspid.experiments import (
    CSV_HEADER,
    read_records_csv,
    record_rng,
    records_to_csv,
    write_records_csv,
)


class TestSampleDims:
    def test_s1_equal_dims(self):
        rng = record_rng(3, 0)
        for _ in range(20):
            d_m, d_x, d_y = sample_dims("s1", rng)
            assert d_x == d_y == d_m
            assert 1 <= d_m <= 10

    def test_s2_bounds(self):
        rng = record_rng(3, 1)
        for _ in range(50):
            d_m, d_x, d_y = sample_dims(SchemeId.S2, rng)
            assert d_m < d_x <= 10 and d_m < d_y <= 10 and d_x <= d_y

    def test_s3_bounds_and_swap(self):
        rng = record_rng(3, 2)
        for _ in range(50):
            d_m, d_x, d_y = sample_dims(SchemeId.S3, rng)
            assert d_x < d_m and d_y < d_m and d_x <= d_y

    def test_s4_bounds(self):
        rng = record_rng(3, 3)
        for _ in range(50):
            d_m, d_x, d_y = sample_dims(SchemeId.S4, rng)
            assert d_x < d_m < d_y

    def test_unknown_scheme(self):
        with pytest.raises(ValueError):
            sample_dims("s9", record_rng(0, 0))


class TestSampleWishart:
    def test_scalar_draw_nonnegative(self):
        sigma = sample_wishart(1, record_rng(1, 0))
        assert sigma.shape == (1, 1) and sigma[0, 0] >= 0.0

    def test_symmetric_psd(self):
        for idx in range(10):
            d = idx % 8 + 1
            sigma = sample_wishart(d, record_rng(17, idx))
            assert np.array_equal(sigma, sigma.T)
            assert np.linalg.eigvalsh(sigma)[0] >= 0.0

    def test_fixed_seed_bit_identical(self):
        a = sample_wishart(5, record_rng(99, 4))
        b = sample_wishart(5, record_rng(99, 4))
        assert np.array_equal(a, b)


class TestRunScheme:
    def test_reproducible_batches(self):
        a = run_scheme("s1", 6, seed=11)
        b = run_scheme("s1", 6, seed=11)
        for ra, rb in zip(a, b):
            assert ra.dims == rb.dims and ra.seed == rb.seed
            assert ra.atoms_delta_hat.as_dict() == rb.atoms_delta_hat.as_dict()

    def test_parallel_matches_serial(self):
        serial = run_scheme("s2", 6, seed=5, jobs=1)
        parallel = run_scheme("s2", 6, seed=5, jobs=3)
        for rs, rp in zip(serial, parallel):
            assert rs.seed == rp.seed
            assert rs.atoms_delta_hat.as_dict() == rp.atoms_delta_hat.as_dict()

    def test_s1_dims_property(self):
        for rec in run_scheme("s1", 5, seed=2):
            assert rec.dims[0] == rec.dims[1] == rec.dims[2]

    def test_records_satisfy_identities(self):
        for rec in run_scheme("s3", 8, seed=8):
            atoms = rec.atoms_delta_hat
            assert atoms.ui_x + atoms.ri == pytest.approx(rec.mi_x, abs=1e-9)
            assert atoms.ui_y + atoms.ri == pytest.approx(rec.mi_y, abs=1e-9)
            total = atoms.ui_x + atoms.ui_y + atoms.ri + atoms.si
            assert total == pytest.approx(rec.mi_xy, abs=1e-9)

    def test_rejects_empty_batch(self):
        with pytest.raises(ValueError):
            run_scheme("s1", 0, seed=1)


class TestSummarize:
    def test_empty_input(self):
        with pytest.raises(EmptyInput):
            summarize([])

    def test_counterexample_statistics(self):
        # replicated incomparable system: both unique, zero redundancy
        from gausspid import delta_hat_pid, mmi_pid, normalize, validate_system
        from gausspid import channel_form, check_degraded, whiten
        from gausspid.experiments import ExperimentRecord
        from conftest import counterexample_sigma

        sys = validate_system(counterexample_sigma(), (2, 1, 1))
        dh = delta_hat_pid(sys)
        recs = [
            ExperimentRecord(
                scheme="S1",
                dims=(2, 1, 1),
                seed=i,
                atoms_mmi=mmi_pid(sys),
                atoms_delta_hat=dh.atoms,
                normalized=normalize(dh.atoms),
                degradedness=check_degraded(whiten(channel_form(sys))),
                mi_x=dh.atoms.ui_x + dh.atoms.ri,
                mi_y=dh.atoms.ui_y + dh.atoms.ri,
                mi_xy=dh.atoms.total_mi,
                solve_ms_xy=0.1,
                solve_ms_yx=0.1,
                converged_xy=True,
                converged_yx=True,
            )
            for i in range(4)
        ]
        stats = summarize(recs)
        assert stats.frac_all_nonneg == 1.0
        assert stats.n_vector_m == 4
        assert stats.frac_both_unique_vector_m == 1.0
        box = stats.box_stats["S1"]["ri_bar"]
        assert box["median"] == pytest.approx(0.0, abs=1e-9)
        assert box["q1"] == pytest.approx(0.0, abs=1e-9)
        assert box["q3"] == pytest.approx(0.0, abs=1e-9)

    def test_degraded_batch_has_no_both_unique(self):
        # scalar-message draws are always one-sided
        recs = run_scheme("s2", 10, seed=3)
        stats = summarize(recs)
        scalar = [r for r in recs if r.dims[0] == 1]
        if scalar:
            assert stats.frac_one_sided_scalar_m == 1.0


class TestCsvContract:
    def test_header_and_roundtrip(self, tmp_path):
        recs = run_scheme("s4", 5, seed=13)
        path = tmp_path / "records.csv"
        write_records_csv(recs, str(path))
        text = path.read_text()
        assert text.splitlines()[0] == CSV_HEADER
        back = read_records_csv(str(path))
        assert len(back) == len(recs)
        for orig, rt in zip(recs, back):
            assert rt.scheme == orig.scheme
            assert rt.dims == orig.dims
            assert rt.seed == orig.seed
            assert rt.atoms_delta_hat.as_dict() == orig.atoms_delta_hat.as_dict()
            assert rt.converged_xy == orig.converged_xy
            assert rt.degradedness.x_over_y == orig.degradedness.x_over_y

    def test_full_double_precision(self):
        recs = run_scheme("s1", 2, seed=4)
        text = records_to_csv(recs)
        row = text.splitlines()[1].split(",")
        assert float(row[8]) == recs[0].atoms_delta_hat.ui_x  # exact round-trip

    def test_summary_roundtrip_matches(self, tmp_path):
        recs = run_scheme("s3", 8, seed=21)
        path = tmp_path / "r.csv"
        write_records_csv(recs, str(path))
        direct = summarize(recs)
        via_csv = summarize(read_records_csv(str(path)))
        assert via_csv.frac_all_nonneg == direct.frac_all_nonneg
        assert via_csv.frac_both_unique_vector_m == direct.frac_both_unique_vector_m
        assert via_csv.box_stats == direct.box_stats
