"""Pure-python (numpy) spectral superposition kernel.

Reference implementation of the hot loop; the compiled module _kernels
mirrors it operation for operation.  For each grid point x the kernel
accumulates sum_j coef[j] * phi(k_j, x) over the quadrature nodes in
ascending node order with Kahan compensation, so results are independent
of how the grid is chunked across threads.

Channel ids: 0 total, 1 incident, 2 tr, 3 ref, 4 tr_inc, 5 ref_inc.
"""

import numpy as np

BACKEND_NAME = "pure-python"


def evolve_chunk(coef, k, kappa, amp_a, amp_b, amp_tr, amp_ref, amp_c, x_cut,
                 a, x, channel_id, out):
    x_row = x[None, :]
    left = x_row < a
    if channel_id == 0:
        phi = np.where(
            left,
            np.exp(1j * k[:, None] * x_row) + amp_b[:, None] * np.exp(-1j * k[:, None] * x_row),
            amp_a[:, None] * np.exp(1j * kappa[:, None] * x_row),
        )
    elif channel_id == 1:
        phi = np.exp(1j * k[:, None] * x_row)
    elif channel_id == 2:
        mid = ~left & (x_row <= x_cut[:, None])
        standing = amp_c[:, None] * np.sin(kappa[:, None] * (x_row - x_cut[:, None]))
        trans = amp_a[:, None] * np.exp(1j * kappa[:, None] * x_row)
        phi = np.where(
            left,
            amp_tr[:, None] * np.exp(1j * k[:, None] * x_row),
            np.where(mid, trans - standing, trans),
        )
    elif channel_id == 3:
        mid = ~left & (x_row <= x_cut[:, None])
        standing = amp_c[:, None] * np.sin(kappa[:, None] * (x_row - x_cut[:, None]))
        phi = np.where(
            left,
            amp_ref[:, None] * np.exp(1j * k[:, None] * x_row)
            + amp_b[:, None] * np.exp(-1j * k[:, None] * x_row),
            np.where(mid, standing, 0.0),
        )
    elif channel_id == 4:
        phi = amp_tr[:, None] * np.exp(1j * k[:, None] * x_row)
    elif channel_id == 5:
        phi = amp_ref[:, None] * np.exp(1j * k[:, None] * x_row)
    else:
        raise ValueError(f"unknown channel id {channel_id}")

    terms = coef[:, None] * phi
    acc = np.zeros(x.shape[0], dtype=np.complex128)
    comp = np.zeros(x.shape[0], dtype=np.complex128)
    for j in range(terms.shape[0]):
        y = terms[j] - comp
        t = acc + y
        comp = (t - acc) - y
        acc = t
    out[:] = acc
