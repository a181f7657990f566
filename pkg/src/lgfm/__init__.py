"""LGFM: full-reference HDR image quality metric built on local
(log-Gabor) and global (Butterworth-masked spectrum) frequency features."""

from .encoding import PuTable, default_pu_table, pq_encode, pu_encode
from .evaluate import (
    RegressionParams,
    ScoreRecord,
    evaluate_dataset,
    fit_logistic,
    krocc,
    logistic_map,
    pu_psnr,
    rmse,
    srocc,
)
from .global_features import (
    ButterworthParams,
    GlobalFeature,
    dft2,
    extract_global_feature,
    make_butterworth_mask,
)
from .hdr_io import HdrImage, load_image, to_luminance
from .local_features import (
    ExposureMaskParams,
    GaborParams,
    apply_exposure_mask,
    extract_local_features,
    make_exposure_mask,
    make_log_gabor_kernel,
)
from .pipeline import (
    RunConfig,
    resolve_config,
    score_files,
    score_images,
    score_luminance,
    score_perceptual_maps,
)
from .similarity import (
    QualityScore,
    SimilarityParams,
    combine_global,
    lgfm_score,
    make_weight_map,
    pool,
    similarity_map,
)

__version__ = "0.1.0"
