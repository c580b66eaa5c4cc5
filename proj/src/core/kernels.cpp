#include "ragan/core/kernels.hpp"

#include <atomic>
#include <stdexcept>

#include "ragan/core/parallel.hpp"

namespace ragan::core {

namespace {
std::atomic<bool> g_parallel{true};
}

bool parallel_enabled() { return g_parallel.load(std::memory_order_relaxed); }
void set_parallel_enabled(bool on) { g_parallel.store(on, std::memory_order_relaxed); }

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_num_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

double dot(const double* x, const double* y, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

namespace {

inline void check_mm(const Mat& a, const Mat& b, int ar, int ac, int br, int bc) {
  if (ac != br) throw std::invalid_argument("matmul: inner dimensions differ");
  (void)a;
  (void)b;
  (void)ar;
  (void)bc;
}

// One output row per iteration: summation order per element is fixed, so the
// serial and parallel paths agree bitwise.
inline void mm_row(const Mat& a, const Mat& b, Mat& c, int i) {
  double* crow = c.row_ptr(i);
  for (int j = 0; j < c.cols; ++j) crow[j] = 0.0;
  const double* arow = a.row_ptr(i);
  for (int k = 0; k < a.cols; ++k) {
    const double aik = arow[k];
    if (aik == 0.0) continue;
    const double* brow = b.row_ptr(k);
    for (int j = 0; j < c.cols; ++j) crow[j] += aik * brow[j];
  }
}

inline void mm_tn_row(const Mat& a, const Mat& b, Mat& c, int i) {
  // c = a^T b ; row i of c uses column i of a
  double* crow = c.row_ptr(i);
  for (int j = 0; j < c.cols; ++j) crow[j] = 0.0;
  for (int k = 0; k < a.rows; ++k) {
    const double aki = a.at(k, i);
    if (aki == 0.0) continue;
    const double* brow = b.row_ptr(k);
    for (int j = 0; j < c.cols; ++j) crow[j] += aki * brow[j];
  }
}

inline void mm_nt_row(const Mat& a, const Mat& b, Mat& c, int i) {
  // c = a b^T ; c(i,j) = dot(a_row_i, b_row_j)
  double* crow = c.row_ptr(i);
  const double* arow = a.row_ptr(i);
  for (int j = 0; j < c.cols; ++j) crow[j] = dot(arow, b.row_ptr(j), a.cols);
}

inline void spmm_row(const Csr& s, const Mat& b, Mat& c, int i) {
  double* crow = c.row_ptr(i);
  for (int j = 0; j < c.cols; ++j) crow[j] = 0.0;
  for (int p = s.row_ptr[i]; p < s.row_ptr[i + 1]; ++p) {
    const double sv = s.val[p];
    const double* brow = b.row_ptr(s.col_idx[p]);
    for (int j = 0; j < c.cols; ++j) crow[j] += sv * brow[j];
  }
}

}  // namespace

void matmul_serial(const Mat& a, const Mat& b, Mat& c) {
  check_mm(a, b, a.rows, a.cols, b.rows, b.cols);
  c = Mat(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i) mm_row(a, b, c, i);
}

void matmul_parallel(const Mat& a, const Mat& b, Mat& c) {
  check_mm(a, b, a.rows, a.cols, b.rows, b.cols);
  c = Mat(a.rows, b.cols);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < a.rows; ++i) mm_row(a, b, c, i);
}

void matmul(const Mat& a, const Mat& b, Mat& c) {
  if (parallel_enabled())
    matmul_parallel(a, b, c);
  else
    matmul_serial(a, b, c);
}

void matmul_tn_serial(const Mat& a, const Mat& b, Mat& c) {
  if (a.rows != b.rows) throw std::invalid_argument("matmul_tn: row counts differ");
  c = Mat(a.cols, b.cols);
  for (int i = 0; i < a.cols; ++i) mm_tn_row(a, b, c, i);
}

void matmul_tn_parallel(const Mat& a, const Mat& b, Mat& c) {
  if (a.rows != b.rows) throw std::invalid_argument("matmul_tn: row counts differ");
  c = Mat(a.cols, b.cols);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < a.cols; ++i) mm_tn_row(a, b, c, i);
}

void matmul_tn(const Mat& a, const Mat& b, Mat& c) {
  if (parallel_enabled())
    matmul_tn_parallel(a, b, c);
  else
    matmul_tn_serial(a, b, c);
}

void matmul_nt_serial(const Mat& a, const Mat& b, Mat& c) {
  if (a.cols != b.cols) throw std::invalid_argument("matmul_nt: col counts differ");
  c = Mat(a.rows, b.rows);
  for (int i = 0; i < a.rows; ++i) mm_nt_row(a, b, c, i);
}

void matmul_nt_parallel(const Mat& a, const Mat& b, Mat& c) {
  if (a.cols != b.cols) throw std::invalid_argument("matmul_nt: col counts differ");
  c = Mat(a.rows, b.rows);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < a.rows; ++i) mm_nt_row(a, b, c, i);
}

void matmul_nt(const Mat& a, const Mat& b, Mat& c) {
  if (parallel_enabled())
    matmul_nt_parallel(a, b, c);
  else
    matmul_nt_serial(a, b, c);
}

void spmm_serial(const Csr& s, const Mat& b, Mat& c) {
  if (s.cols != b.rows) throw std::invalid_argument("spmm: inner dimensions differ");
  c = Mat(s.rows, b.cols);
  for (int i = 0; i < s.rows; ++i) spmm_row(s, b, c, i);
}

void spmm_parallel(const Csr& s, const Mat& b, Mat& c) {
  if (s.cols != b.rows) throw std::invalid_argument("spmm: inner dimensions differ");
  c = Mat(s.rows, b.cols);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < s.rows; ++i) spmm_row(s, b, c, i);
}

void spmm(const Csr& s, const Mat& b, Mat& c) {
  if (parallel_enabled())
    spmm_parallel(s, b, c);
  else
    spmm_serial(s, b, c);
}

void matmul_acc(const Mat& a, const Mat& b, Mat& c) {
  Mat t;
  matmul(a, b, t);
  for (size_t i = 0; i < t.size(); ++i) c.d[i] += t.d[i];
}

void matmul_tn_acc(const Mat& a, const Mat& b, Mat& c) {
  Mat t;
  matmul_tn(a, b, t);
  for (size_t i = 0; i < t.size(); ++i) c.d[i] += t.d[i];
}

void matmul_nt_acc(const Mat& a, const Mat& b, Mat& c) {
  Mat t;
  matmul_nt(a, b, t);
  for (size_t i = 0; i < t.size(); ++i) c.d[i] += t.d[i];
}

Csr csr_transpose(const Csr& a) {
  Csr t;
  t.rows = a.cols;
  t.cols = a.rows;
  t.row_ptr.assign(t.rows + 1, 0);
  for (int idx : a.col_idx) t.row_ptr[idx + 1]++;
  for (int i = 0; i < t.rows; ++i) t.row_ptr[i + 1] += t.row_ptr[i];
  t.col_idx.resize(a.col_idx.size());
  t.val.resize(a.val.size());
  std::vector<int> cursor(t.row_ptr.begin(), t.row_ptr.end() - 1);
  for (int i = 0; i < a.rows; ++i) {
    for (int p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) {
      const int j = a.col_idx[p];
      const int q = cursor[j]++;
      t.col_idx[q] = i;
      t.val[q] = a.val[p];
    }
  }
  return t;
}

}  // namespace ragan::core
