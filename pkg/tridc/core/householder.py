from typing import Tuple

import torch

from tridc.core.matrix import DenseSym, SymTridiag


def householder_tridiagonalize(a: DenseSym) -> Tuple[SymTridiag, torch.Tensor]:
    """Reduce a symmetric matrix to tridiagonal form, Q^T A Q = T.

    Each step zeroes column k below the sub-diagonal with a reflector
    H = I - 2uu^T applied as the symmetric rank-two update
    S <- S - u w^T - w u^T, w = p - (u^T p) u, p = 2 S u.
    Columns that are already reduced are skipped, so tridiagonal input comes
    back unchanged with Q = I.

    Returns:
        * t (SymTridiag): the tridiagonal matrix
        * q (Tensor): the accumulated orthogonal transformation
    """
    work = a.entries.clone()
    n = work.shape[0]
    q = torch.eye(n, dtype=work.dtype)

    for k in range(n - 2):
        x = work[k + 1 :, k]
        if torch.count_nonzero(x[1:]) == 0:
            continue
        norm_x = torch.linalg.vector_norm(x)
        alpha = -norm_x if x[0] >= 0 else norm_x
        u = x.clone()
        u[0] -= alpha
        u = u / torch.linalg.vector_norm(u)

        s = work[k + 1 :, k + 1 :]
        p = 2.0 * (s @ u)
        w = p - torch.dot(u, p) * u
        work[k + 1 :, k + 1 :] = s - torch.outer(u, w) - torch.outer(w, u)

        work[k + 1, k] = alpha
        work[k, k + 1] = alpha
        work[k + 2 :, k] = 0.0
        work[k, k + 2 :] = 0.0

        tail = q[:, k + 1 :]
        q[:, k + 1 :] = tail - 2.0 * torch.outer(tail @ u, u)

    return SymTridiag.from_dense(work), q
