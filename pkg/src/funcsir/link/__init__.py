from .cv import LOO_MAX_N, CvReport, CvScheme, cv_select_k, make_folds
from .smoother import (
    SPLINE_MIN_POINTS,
    LinkKind,
    LinkModel,
    SmootherModel,
    SplineModel,
    fit_link,
    fit_smoother,
    fit_spline,
    predict_link,
    predict_smoother,
    predict_spline,
    prediction_error,
)

__all__ = [
    "SmootherModel", "fit_smoother", "predict_smoother", "prediction_error",
    "SplineModel", "fit_spline", "predict_spline", "SPLINE_MIN_POINTS",
    "LinkKind", "LinkModel", "fit_link", "predict_link",
    "CvScheme", "CvReport", "make_folds", "cv_select_k", "LOO_MAX_N",
]
