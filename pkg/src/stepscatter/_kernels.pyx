# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled spectral superposition kernel.

Same contract and summation order as _kernels_py.evolve_chunk: per grid
point, ascending-node Kahan accumulation of coef[j] * phi(k_j, x), with the
real and imaginary parts compensated separately.  Releases the GIL so
callers can dispatch disjoint grid chunks across threads.
"""

from libc.math cimport cos, sin

ctypedef double complex cplx

BACKEND_NAME = "compiled"


cdef inline cplx expi(double phase) noexcept nogil:
    return cos(phase) + 1j * sin(phase)


def evolve_chunk(const cplx[::1] coef, const double[::1] k, const double[::1] kappa,
                 const cplx[::1] amp_a, const cplx[::1] amp_b, const cplx[::1] amp_tr,
                 const cplx[::1] amp_ref, const cplx[::1] amp_c, const double[::1] x_cut,
                 double a, const double[::1] x, int channel_id, cplx[::1] out):
    cdef Py_ssize_t nk = k.shape[0]
    cdef Py_ssize_t m = x.shape[0]
    cdef Py_ssize_t i, j
    cdef double xi, sr, si, cr, ci, yr, yi, tr, ti
    cdef cplx phi, term

    if channel_id < 0 or channel_id > 5:
        raise ValueError(f"unknown channel id {channel_id}")

    with nogil:
        for i in range(m):
            xi = x[i]
            sr = si = cr = ci = 0.0
            for j in range(nk):
                if channel_id == 0:
                    if xi < a:
                        phi = expi(k[j] * xi) + amp_b[j] * expi(-k[j] * xi)
                    else:
                        phi = amp_a[j] * expi(kappa[j] * xi)
                elif channel_id == 1:
                    phi = expi(k[j] * xi)
                elif channel_id == 2:
                    if xi < a:
                        phi = amp_tr[j] * expi(k[j] * xi)
                    elif xi <= x_cut[j]:
                        phi = amp_a[j] * expi(kappa[j] * xi) - amp_c[j] * sin(kappa[j] * (xi - x_cut[j]))
                    else:
                        phi = amp_a[j] * expi(kappa[j] * xi)
                elif channel_id == 3:
                    if xi < a:
                        phi = amp_ref[j] * expi(k[j] * xi) + amp_b[j] * expi(-k[j] * xi)
                    elif xi <= x_cut[j]:
                        phi = amp_c[j] * sin(kappa[j] * (xi - x_cut[j]))
                    else:
                        phi = 0
                elif channel_id == 4:
                    phi = amp_tr[j] * expi(k[j] * xi)
                else:
                    phi = amp_ref[j] * expi(k[j] * xi)
                term = coef[j] * phi
                yr = term.real - cr
                yi = term.imag - ci
                tr = sr + yr
                ti = si + yi
                cr = (tr - sr) - yr
                ci = (ti - si) - yi
                sr = tr
                si = ti
            out[i] = sr + 1j * si
