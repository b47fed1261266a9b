#pragma once

// Small dense matrix kernels used by the network layers. Row-major storage.
// Loop orders chosen so the inner loop runs over contiguous memory and
// auto-vectorizes.

namespace trice::detail {

// C(m x n) += A(m x k) * B(k x n)
inline void gemm_nn_accum(const double* A, const double* B, double* C, int m, int k, int n) {
    for (int i = 0; i < m; ++i) {
        const double* a_row = A + static_cast<long>(i) * k;
        double* c_row = C + static_cast<long>(i) * n;
        for (int l = 0; l < k; ++l) {
            const double a = a_row[l];
            if (a == 0.0) continue;
            const double* b_row = B + static_cast<long>(l) * n;
            for (int j = 0; j < n; ++j) c_row[j] += a * b_row[j];
        }
    }
}

// C(m x n) += A(m x k) * B(n x k)^T
inline void gemm_nt_accum(const double* A, const double* B, double* C, int m, int k, int n) {
    for (int i = 0; i < m; ++i) {
        const double* a_row = A + static_cast<long>(i) * k;
        double* c_row = C + static_cast<long>(i) * n;
        for (int j = 0; j < n; ++j) {
            const double* b_row = B + static_cast<long>(j) * k;
            double acc = 0.0;
            for (int l = 0; l < k; ++l) acc += a_row[l] * b_row[l];
            c_row[j] += acc;
        }
    }
}

// C(m x n) += A(k x m)^T * B(k x n)
inline void gemm_tn_accum(const double* A, const double* B, double* C, int m, int k, int n) {
    for (int l = 0; l < k; ++l) {
        const double* a_row = A + static_cast<long>(l) * m;
        const double* b_row = B + static_cast<long>(l) * n;
        for (int i = 0; i < m; ++i) {
            const double a = a_row[i];
            if (a == 0.0) continue;
            double* c_row = C + static_cast<long>(i) * n;
            for (int j = 0; j < n; ++j) c_row[j] += a * b_row[j];
        }
    }
}

}  // namespace trice::detail
