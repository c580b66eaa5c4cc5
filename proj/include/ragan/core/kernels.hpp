#pragma once

#include <vector>

#include "ragan/core/mat.hpp"

namespace ragan::core {

// Compressed sparse row matrix; pattern is fixed after construction.
struct Csr {
  int rows = 0;
  int cols = 0;
  std::vector<int> row_ptr;  // rows + 1
  std::vector<int> col_idx;
  std::vector<double> val;
};

Csr csr_transpose(const Csr& a);

// Each kernel exists twice: a serial reference and an OpenMP version that
// splits work over independent output rows, so the two produce bit-identical
// results. The undecorated entry point dispatches on parallel_enabled().

// C = A * B
void matmul_serial(const Mat& a, const Mat& b, Mat& c);
void matmul_parallel(const Mat& a, const Mat& b, Mat& c);
void matmul(const Mat& a, const Mat& b, Mat& c);

// C = A^T * B
void matmul_tn_serial(const Mat& a, const Mat& b, Mat& c);
void matmul_tn_parallel(const Mat& a, const Mat& b, Mat& c);
void matmul_tn(const Mat& a, const Mat& b, Mat& c);

// C = A * B^T
void matmul_nt_serial(const Mat& a, const Mat& b, Mat& c);
void matmul_nt_parallel(const Mat& a, const Mat& b, Mat& c);
void matmul_nt(const Mat& a, const Mat& b, Mat& c);

// C = S * B, S sparse
void spmm_serial(const Csr& s, const Mat& b, Mat& c);
void spmm_parallel(const Csr& s, const Mat& b, Mat& c);
void spmm(const Csr& s, const Mat& b, Mat& c);

// C += A * B (accumulating variants used by backward passes)
void matmul_acc(const Mat& a, const Mat& b, Mat& c);
void matmul_tn_acc(const Mat& a, const Mat& b, Mat& c);
void matmul_nt_acc(const Mat& a, const Mat& b, Mat& c);

double dot(const double* x, const double* y, int n);

}  // namespace ragan::core
