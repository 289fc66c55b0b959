# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled best-split scan; see _split_py for the contract.

Class counts are exact integers and the score is formed with the same two
divisions and one addition as the numpy fallback, so both kernels return
bit-identical floats.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def best_split_sorted(
    const double[::1] values, const cnp.int64_t[::1] classes, Py_ssize_t n_classes
):
    cdef Py_ssize_t n = values.shape[0]
    if n < 2:
        return False, 0.0, 0.0

    left_arr = np.zeros(n_classes, dtype=np.int64)
    right_arr = np.zeros(n_classes, dtype=np.int64)
    cdef cnp.int64_t[::1] left = left_arr
    cdef cnp.int64_t[::1] right = right_arr

    cdef Py_ssize_t i, j
    cdef cnp.int64_t sum_sq_left = 0
    cdef cnp.int64_t sum_sq_right = 0
    cdef double score, best_score = 0.0, best_threshold = 0.0
    cdef bint found = False

    for i in range(n):
        right[classes[i]] += 1
    for j in range(n_classes):
        sum_sq_right += right[j] * right[j]

    for i in range(n - 1):
        j = classes[i]
        sum_sq_left += 2 * left[j] + 1
        left[j] += 1
        sum_sq_right -= 2 * right[j] - 1
        right[j] -= 1
        if values[i] != values[i + 1]:
            score = (<double> sum_sq_left) / (<double> (i + 1)) \
                + (<double> sum_sq_right) / (<double> (n - i - 1))
            if not found or score > best_score:
                found = True
                best_score = score
                best_threshold = (values[i] + values[i + 1]) / 2.0

    if not found:
        return False, 0.0, 0.0
    return True, best_score, best_threshold
