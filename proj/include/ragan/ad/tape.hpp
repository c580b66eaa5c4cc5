#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ragan/core/kernels.hpp"
#include "ragan/core/mat.hpp"

namespace ragan::ad {

using core::Csr;
using core::Mat;

// A trainable tensor with its gradient and Adam state.
struct Param {
  std::string name;
  Mat w;
  Mat g;
  Mat m;
  Mat v;

  Param() = default;
  Param(std::string n, Mat init)
      : name(std::move(n)),
        w(std::move(init)),
        g(w.rows, w.cols),
        m(w.rows, w.cols),
        v(w.rows, w.cols) {}

  void zero_grad() { g.zero(); }
};

// Ordered collection of parameters sharing one Adam clock.
struct ParamSet {
  std::vector<Param*> items;
  int64_t step_count = 0;

  void add(Param& p) { items.push_back(&p); }
  void zero_grad() {
    for (Param* p : items) p->zero_grad();
  }
  void adam_step(double lr, double beta1 = 0.9, double beta2 = 0.999,
                 double eps = 1e-8);
  size_t coord_count() const;
};

// Glorot-uniform init; final heads are typically zero-initialised by callers.
Mat glorot(int rows, int cols, std::mt19937_64& rng);

struct Value {
  int i = -1;
  bool valid() const { return i >= 0; }
};

// Reverse-mode tape over Mat. Build a graph with the op methods, call
// backward(loss) on a 1x1 node; gradients land in Param::g for every
// trainable leaf and are readable per-node via grad().
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Leaves.
  Value input(Mat m);                     // constant, no gradient
  Value input_grad(Mat m);                // non-param leaf that collects a gradient
  Value param(Param& p);                  // trainable leaf
  Value param_frozen(const Param& p);     // parameter used without training it

  // Arithmetic.
  Value add(Value a, Value b);
  Value sub(Value a, Value b);
  Value mul(Value a, Value b);
  Value scale(Value a, double s);
  Value add_scalar(Value a, double s);
  Value add_rowvec(Value a, Value row);   // broadcast 1xC over rows
  Value matmul(Value a, Value b);
  Value matmul_tn(Value a, Value b);      // a^T b
  Value matmul_nt(Value a, Value b);      // a b^T
  Value spmm(const Csr& s, Value b);      // fixed sparse * dense

  // Nonlinearities.
  Value relu(Value a);
  Value sigmoid(Value a);
  Value exp(Value a);
  Value log(Value a);
  Value clamp(Value a, double lo, double hi);  // pass-through grad inside range
  Value softmax_rows(Value a);

  // Normalisation and regularisation.
  Value batchnorm(Value a, Value gamma, Value beta, double eps = 1e-5);
  Value layernorm(Value a, Value gamma, Value beta, double eps = 1e-5);
  Value dropout(Value a, double rate, std::mt19937_64& rng);

  // Reductions and reshaping.
  Value sum(Value a);                      // 1x1
  Value mean_all(Value a);                 // 1x1
  Value colsum(Value a);                   // 1xC
  Value colmax(Value a);                   // 1xC, subgradient to argmax rows
  Value concat_cols(Value a, Value b);
  Value stack_rows(const std::vector<Value>& rows);
  Value gather_rows(Value a, std::vector<int> idx);
  Value gather_entries(Value a, std::vector<std::pair<int, int>> rc);  // Nx1
  Value im2col(Value a, int window);       // TxD -> (T-w+1)x(w*D)

  // Straight-through view: forward emits `emitted`, backward routes the
  // upstream gradient to `h` under `mask`.
  Value straight_through(Value h, const Mat& emitted, const Mat& mask);

  const Mat& val(Value v) const { return nodes_[v.i].val; }
  const Mat& grad(Value v) const { return nodes_[v.i].grad; }

  void backward(Value loss);

 private:
  struct Node {
    Mat val;
    Mat grad;
    std::function<void()> back;  // empty for leaves
    Param* bound = nullptr;      // trainable leaf target
    bool needs = false;
  };

  Value push(Mat val, bool needs, std::function<void()> back = {});
  Mat& g(Value v) { return nodes_[v.i].grad; }
  bool needs(Value v) const { return nodes_[v.i].needs; }

  std::vector<Node> nodes_;
};

}  // namespace ragan::ad
