"""Credit scoring with Gaussian mixture models.

Thin python surface over the C++ core: EM fitting with AIC/BIC component
selection, the cluster-labeling classifier, SMOTE balancing, a logistic
regression baseline and the evaluation metrics.
"""

try:
    from . import _core
except ImportError:  # running from the build tree with _core on sys.path
    import _core

CsgmModel = _core.CsgmModel
GmmParams = _core.GmmParams
LogisticModel = _core.LogisticModel
confusion_matrix = _core.confusion_matrix
fit_csgm = _core.fit_csgm
fit_em = _core.fit_em
fit_logistic = _core.fit_logistic
log_gaussian_pdf = _core.log_gaussian_pdf
roc_auc = _core.roc_auc
select_components = _core.select_components
smote_balance = _core.smote_balance

__all__ = [
    "CsgmModel",
    "GmmParams",
    "LogisticModel",
    "confusion_matrix",
    "fit_csgm",
    "fit_em",
    "fit_logistic",
    "log_gaussian_pdf",
    "roc_auc",
    "select_components",
    "smote_balance",
]
