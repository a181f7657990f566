import json

import numpy as np
import pytest

from conftest import synthetic_luminance_set
from lgfm.errors import DimensionMismatch
from lgfm.pipeline import (
    RunConfig,
    config_from_dict,
    resolve_config,
    score_luminance,
    score_perceptual_maps,
)


class TestRunConfig:
    def test_defaults_valid(self):
        cfg = RunConfig()
        assert cfg.encoding == "pu" and cfg.mode == "full"
        assert cfg.gabor.f == 2.5
        assert cfg.butterworth.d1 == 400

    def test_rejects_bad_values(self):
        with pytest.raises(ValueError):
            RunConfig(encoding="srgb")
        with pytest.raises(ValueError):
            RunConfig(mode="both")
        with pytest.raises(ValueError):
            RunConfig(threads=0)

    def test_param_hash_tracks_config(self):
        assert RunConfig().param_hash() == RunConfig().param_hash()
        assert RunConfig().param_hash() != RunConfig(encoding="pq").param_hash()

    def test_round_trip_through_dict(self):
        cfg = RunConfig(encoding="pq", pairing="literal")
        again = config_from_dict(cfg.to_dict())
        assert again == cfg

    def test_resolve_precedence(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({
            "encoding": "pq",
            "gabor": {"f": 3.0},
            "similarity": {"alpha": 0.25},
        }))
        cfg = resolve_config(path, {"encoding": "pu"})
        assert cfg.encoding == "pu"  # CLI override wins
        assert cfg.gabor.f == 3.0  # file overrides default
        assert cfg.similarity.alpha == 0.25
        assert cfg.butterworth.d1 == 400  # untouched default

    def test_pu_table_path_override(self, tmp_path):
        path = tmp_path / "table.csv"
        path.write_text("log10_luminance,pu_value\n-5,0\n0,1\n4,2\n8,3\n")
        lum = np.full((16, 16), 1.0)
        cfg = RunConfig(pu_table=str(path))
        from lgfm.pipeline import encode_luminance

        assert np.all(encode_luminance(lum, cfg) == 1.0)


class TestScoring:
    def test_identity_scores_one(self):
        lum = synthetic_luminance_set(n=1)[0]
        for encoding in ("pu", "pq"):
            s = score_luminance(lum, lum, RunConfig(encoding=encoding))
            assert s.q_lgfm == pytest.approx(1.0, abs=1e-9)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            score_perceptual_maps(np.ones((32, 32)), np.ones((32, 36)), RunConfig())

    def test_masks_change_scores(self):
        # exposure mask: perceptual values near 250 code values
        rng = np.random.default_rng(50)
        base = np.full((48, 48), 249.5) + rng.uniform(0, 1.2, (48, 48))
        dist = base + rng.normal(0, 0.4, base.shape)
        with_mg = score_perceptual_maps(base, dist, RunConfig()).q_lgfm
        without_mg = score_perceptual_maps(base, dist, RunConfig(use_mg=False)).q_lgfm
        assert with_mg != without_mg

        # butterworth mask: distortion concentrated in mid-band frequencies
        yy, xx = np.mgrid[0:64, 0:64].astype(float)
        img = 100 + 50 * np.sin(2 * np.pi * xx / 4)
        dist = img + 5 * np.sin(2 * np.pi * (xx + yy) / 6)
        with_mb = score_perceptual_maps(img, dist, RunConfig()).q_lgfm
        without_mb = score_perceptual_maps(img, dist, RunConfig(use_mb=False)).q_lgfm
        assert with_mb != without_mb

    def test_full_equals_product_of_ablations(self):
        rng = np.random.default_rng(51)
        ref = rng.uniform(0, 400, (32, 32))
        dist = ref + rng.normal(0, 5, ref.shape)
        full = score_perceptual_maps(ref, dist, RunConfig(mode="full"))
        local = score_perceptual_maps(ref, dist, RunConfig(mode="local_only"))
        glob = score_perceptual_maps(ref, dist, RunConfig(mode="global_only"))
        assert full.q_lgfm == local.q_lgfm * glob.q_lgfm

    def test_monotone_noise_degradation(self):
        # one noise field per base image, scaled by sigma, so the
        # degradation series is not confounded by resampling noise
        for i, base in enumerate(synthetic_luminance_set(n=5)):
            noise = np.random.default_rng(52 + i).standard_normal(base.shape)
            span = base.max() - base.min()
            scores = []
            for sigma in (0.005, 0.01, 0.02, 0.04, 0.08):
                noisy = np.clip(base + sigma * span * noise, 0, None)
                scores.append(score_luminance(base, noisy, RunConfig()).q_lgfm)
            assert all(a > b for a, b in zip(scores, scores[1:])), (i, scores)
