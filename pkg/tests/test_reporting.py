"""Config validation, problem ingestion, and report serialization."""

import json

import numpy as np
import pytest

from saddlebounds.bounds import applicable_bounds
from saddlebounds.errors import ParameterOutOfRangeError, StructureError
from saddlebounds.harness import certify, gamma_sweep, log_gamma_grid, oracle
from saddlebounds.mmio import write_matrix_market
from saddlebounds.problems import gen_remark, gen_toy
from saddlebounds.reporting import (
    BOUNDS_CSV_HEADER,
    ProblemFileSet,
    RunConfig,
    bounds_to_csv,
    envelope_to_json,
    read_problem,
    report_envelope,
    write_report,
)


def toy_files(tmp_path):
    p = gen_toy(0.6, 0.8)
    pa = tmp_path / "A.mtx"
    pb = tmp_path / "B.mtx"
    write_matrix_market(pa, p.A.array, symmetric=True)
    write_matrix_market(pb, p.B.array)
    return p, str(pa), str(pb)


def toy_envelope(sweep=False):
    p = gen_toy(0.6, 0.8)
    cfg = RunConfig()
    reports = applicable_bounds(p, gamma=1.0)
    orc = oracle(p)
    certs = [certify(r, orc) for r in reports]
    sw = gamma_sweep(p, log_gamma_grid(1e-2, 1e2, 5)) if sweep else None
    env = report_envelope(p, cfg, reports, certs, sweep=sw, oracle_result=orc,
                          source={"A": "A.mtx", "B": "B.mtx"})
    return env, reports, certs, sw


class TestRunConfig:
    def test_defaults_valid(self):
        cfg = RunConfig()
        assert cfg.rel_tol is None
        assert cfg.gamma_points == 25

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"rel_tol": 0.0},
            {"angle_tol": -1.0},
            {"cert_slack": 0.0},
            {"gamma_min": 2.0, "gamma_max": 1.0},
            {"gamma_min": 0.0},
            {"gamma_points": 1},
            {"output_format": "yaml"},
            {"size_cap": 0},
        ],
    )
    def test_rejects_bad_knobs(self, kwargs):
        with pytest.raises(ParameterOutOfRangeError):
            RunConfig(**kwargs)


class TestProblemFileSet:
    def test_requires_exactly_one_route(self):
        with pytest.raises(ParameterOutOfRangeError):
            ProblemFileSet()
        with pytest.raises(ParameterOutOfRangeError):
            ProblemFileSet(path_a="a")
        with pytest.raises(ParameterOutOfRangeError):
            ProblemFileSet(path_k="k")
        with pytest.raises(ParameterOutOfRangeError):
            ProblemFileSet(path_a="a", path_b="b", path_k="k", split_n=2)
        ProblemFileSet(path_a="a", path_b="b")
        ProblemFileSet(path_k="k", split_n=2)


class TestReadProblem:
    def test_separate_files(self, tmp_path):
        p, pa, pb = toy_files(tmp_path)
        q = read_problem(ProblemFileSet(path_a=pa, path_b=pb))
        assert (q.n, q.m) == (2, 1)
        assert np.array_equal(q.A.array, p.A.array)
        assert np.array_equal(q.B.array, p.B.array)

    def test_whole_matrix_with_split(self, tmp_path):
        p = gen_toy(0.6, 0.8)
        pk = tmp_path / "K.mtx"
        write_matrix_market(pk, p.k_matrix, symmetric=True)
        q = read_problem(ProblemFileSet(path_k=str(pk), split_n=2))
        assert (q.n, q.m) == (2, 1)
        np.testing.assert_allclose(q.A.array, p.A.array, atol=0)
        np.testing.assert_allclose(q.B.array, p.B.array, atol=0)

    def test_rejects_nonzero_trailing_block(self, tmp_path):
        p = gen_toy(0.6, 0.8)
        k = np.array(p.k_matrix)
        k[2, 2] = 1e-3
        pk = tmp_path / "K.mtx"
        write_matrix_market(pk, k, symmetric=True)
        with pytest.raises(StructureError, match="trailing"):
            read_problem(ProblemFileSet(path_k=str(pk), split_n=2))

    def test_rejects_asymmetric_off_diagonal(self, tmp_path):
        p = gen_toy(0.6, 0.8)
        k = np.array(p.k_matrix)
        k[0, 2] += 1e-3  # only the upper copy
        pk = tmp_path / "K.mtx"
        write_matrix_market(pk, k)
        with pytest.raises(StructureError, match="transpose"):
            read_problem(ProblemFileSet(path_k=str(pk), split_n=2))

    def test_rejects_split_out_of_range(self, tmp_path):
        p = gen_toy(0.6, 0.8)
        pk = tmp_path / "K.mtx"
        write_matrix_market(pk, p.k_matrix, symmetric=True)
        with pytest.raises(StructureError, match="split index"):
            read_problem(ProblemFileSet(path_k=str(pk), split_n=3))

    def test_wraps_validation_failures(self, tmp_path):
        pa = tmp_path / "A.mtx"
        pb = tmp_path / "B.mtx"
        write_matrix_market(pa, np.diag([1.0, 0.0, 0.0]), symmetric=True)
        write_matrix_market(pb, np.array([[1.0, 0.0, 0.0]]))
        with pytest.raises(StructureError, match="invalid saddle problem"):
            read_problem(ProblemFileSet(path_a=str(pa), path_b=str(pb)))


class TestEnvelope:
    def test_structure_and_stability(self):
        env, *_ = toy_envelope()
        text = envelope_to_json(env)
        assert text == envelope_to_json(env)
        assert text.endswith("\n")
        parsed = json.loads(text)
        assert parsed["problem"]["n"] == 2
        assert parsed["certification"]["performed"]
        assert parsed["certification"]["all_sound"]
        names = [b["name"] for b in parsed["bounds"]]
        assert names[0] == "rusten-winther"
        assert "wbound" in names and "agamma" in names
        assert parsed["bounds"][0]["intervals"]["positive"][0] == 0.0
        assert parsed["sweep"] is None

    def test_json_types_are_plain(self):
        env, *_ = toy_envelope(sweep=True)
        # a stray numpy scalar anywhere would make dumps raise
        json.dumps(env)
        rows = env["sweep"]["rows"]
        assert len(rows) == 5
        assert set(rows[0]) == {
            "gamma", "inv_gamma", "mu_min_A_gamma",
            "predicted_bound", "actual_min_pos_eig",
        }

    def test_flags_serialize_as_json_booleans(self):
        env, *_ = toy_envelope()
        text = json.dumps(env)
        assert env["certification"]["all_sound"] is True
        assert env["certification"]["inertia_ok"] is True
        assert all(b["assumptions_met"] in (True, False) for b in env["bounds"])
        assert '"all_sound": true' in text

    def test_vacuous_counts_as_sound_overall(self):
        env, _, certs, _ = toy_envelope()
        statuses = {c.status for c in certs}
        assert "vacuous" in statuses  # the interval report on singular A
        assert env["certification"]["all_sound"]

    def test_zero_angle_warning_travels_to_envelope(self):
        p = gen_remark(0.5)
        cfg = RunConfig()
        reports = applicable_bounds(p)
        orc = oracle(p)
        certs = [certify(r, orc) for r in reports]
        env = report_envelope(p, cfg, reports, certs, oracle_result=orc)
        general = [b for b in env["bounds"] if b["name"] == "general-rank"]
        assert general and "zero-angle" in general[0]["warnings"]


class TestCsvAndFiles:
    def test_bounds_csv_shape(self):
        _, reports, certs, _ = toy_envelope()
        text = bounds_to_csv(reports, certs)
        lines = text.strip().split("\n")
        assert lines[0] == BOUNDS_CSV_HEADER
        assert len(lines) == len(reports) + 1
        first = lines[1].split(",")
        assert first[0] == "rusten-winther"
        assert first[5] == "vacuous-positive-lower"

    def test_write_report_files_and_determinism(self, tmp_path):
        env, reports, certs, sw = toy_envelope(sweep=True)
        d1 = tmp_path / "r1"
        d2 = tmp_path / "r2"
        w1 = write_report(str(d1), env, reports, certs, sweep=sw, output_format="csv")
        w2 = write_report(str(d2), env, reports, certs, sweep=sw, output_format="csv")
        assert [p.rsplit("/", 1)[1] for p in w1] == ["report.json", "sweep.csv", "bounds.csv"]
        for a, b in zip(w1, w2):
            assert open(a, "rb").read() == open(b, "rb").read()

    def test_write_report_json_only(self, tmp_path):
        env, reports, certs, _ = toy_envelope()
        written = write_report(str(tmp_path / "r"), env, reports, certs)
        assert len(written) == 1
        assert written[0].endswith("report.json")
