from .standardize import Standardizer, znorm_apply, znorm_fit
from .lasso import (LassoFit, kkt_violation, lambda_grid, lambda_max,
                    lasso_fit, lasso_select)
from .linear import LinearModel, ols_fit
from .gp import (KernelParams, block_loglik, fit_kernel, gram,
                 jittered_cho_factor, posterior, se_kernel)
from .lmgp import (ARTIFACT_VERSION, LmgpModel, lmgp_fit, lmgp_predict,
                   model_from_dict, model_to_dict)

__all__ = [
    "Standardizer", "znorm_apply", "znorm_fit",
    "LassoFit", "kkt_violation", "lambda_grid", "lambda_max",
    "lasso_fit", "lasso_select",
    "LinearModel", "ols_fit",
    "KernelParams", "block_loglik", "fit_kernel", "gram",
    "jittered_cho_factor", "posterior", "se_kernel",
    "ARTIFACT_VERSION", "LmgpModel", "lmgp_fit", "lmgp_predict",
    "model_from_dict", "model_to_dict",
]
