#include "ragan/ad/tape.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ragan::ad {

namespace {
void check_same_shape(const Mat& a, const Mat& b, const char* op) {
  if (!a.same_shape(b)) throw std::invalid_argument(std::string(op) + ": shape mismatch");
}
}  // namespace

Mat glorot(int rows, int cols, std::mt19937_64& rng) {
  Mat m(rows, cols);
  const double a = std::sqrt(6.0 / (rows + cols));
  std::uniform_real_distribution<double> u(-a, a);
  for (double& x : m.d) x = u(rng);
  return m;
}

void ParamSet::adam_step(double lr, double beta1, double beta2, double eps) {
  ++step_count;
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step_count));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step_count));
  for (Param* p : items) {
    for (size_t i = 0; i < p->w.size(); ++i) {
      const double gi = p->g.d[i];
      p->m.d[i] = beta1 * p->m.d[i] + (1.0 - beta1) * gi;
      p->v.d[i] = beta2 * p->v.d[i] + (1.0 - beta2) * gi * gi;
      const double mhat = p->m.d[i] / bc1;
      const double vhat = p->v.d[i] / bc2;
      p->w.d[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
  }
}

size_t ParamSet::coord_count() const {
  size_t n = 0;
  for (const Param* p : items) n += p->w.size();
  return n;
}

Value Tape::push(Mat val, bool needs, std::function<void()> back) {
  Node n;
  n.val = std::move(val);
  n.back = std::move(back);
  n.needs = needs;
  if (needs) n.grad = Mat(n.val.rows, n.val.cols);
  nodes_.push_back(std::move(n));
  return Value{static_cast<int>(nodes_.size()) - 1};
}

Value Tape::input(Mat m) { return push(std::move(m), false); }

Value Tape::input_grad(Mat m) { return push(std::move(m), true); }

Value Tape::param(Param& p) {
  Value v = push(p.w, true);
  nodes_[v.i].bound = &p;
  return v;
}

Value Tape::param_frozen(const Param& p) { return push(p.w, false); }

void Tape::backward(Value loss) {
  Node& ln = nodes_[loss.i];
  if (ln.val.rows != 1 || ln.val.cols != 1)
    throw std::invalid_argument("backward: loss must be 1x1");
  if (!ln.needs) return;  // nothing upstream is trainable
  ln.grad.fill(1.0);
  for (int i = loss.i; i >= 0; --i) {
    Node& n = nodes_[i];
    if (!n.needs) continue;
    if (n.back) n.back();
    if (n.bound) {
      for (size_t k = 0; k < n.grad.size(); ++k) n.bound->g.d[k] += n.grad.d[k];
    }
  }
}

Value Tape::add(Value a, Value b) {
  check_same_shape(val(a), val(b), "add");
  Mat out = val(a);
  for (size_t i = 0; i < out.size(); ++i) out.d[i] += val(b).d[i];
  const bool nd = needs(a) || needs(b);
  Value o = push(std::move(out), nd);
  if (!nd) return o;
  nodes_[o.i].back = [this, a, b, o]() {
    const Mat& go = g(o);
    if (needs(a))
      for (size_t i = 0; i < go.size(); ++i) g(a).d[i] += go.d[i];
    if (needs(b))
      for (size_t i = 0; i < go.size(); ++i) g(b).d[i] += go.d[i];
  };
  return o;
}

Value Tape::sub(Value a, Value b) {
  check_same_shape(val(a), val(b), "sub");
  Mat out = val(a);
  for (size_t i = 0; i < out.size(); ++i) out.d[i] -= val(b).d[i];
  const bool nd = needs(a) || needs(b);
  Value o = push(std::move(out), nd);
  if (!nd) return o;
  nodes_[o.i].back = [this, a, b, o]() {
    const Mat& go = g(o);
    if (needs(a))
      for (size_t i = 0; i < go.size(); ++i) g(a).d[i] += go.d[i];
    if (needs(b))
      for (size_t i = 0; i < go.size(); ++i) g(b).d[i] -= go.d[i];
  };
  return o;
}

Value Tape::mul(Value a, Value b) {
  check_same_shape(val(a), val(b), "mul");
  Mat out = val(a);
  for (size_t i = 0; i < out.size(); ++i) out.d[i] *= val(b).d[i];
  const bool nd = needs(a) || needs(b);
  Value o = push(std::move(out), nd);
  if (!nd) return o;
  nodes_[o.i].back = [this, a, b, o]() {
    const Mat& go = g(o);
    if (needs(a))
      for (size_t i = 0; i < go.size(); ++i) g(a).d[i] += go.d[i] * val(b).d[i];
    if (needs(b))
      for (size_t i = 0; i < go.size(); ++i) g(b).d[i] += go.d[i] * val(a).d[i];
  };
  return o;
}

Value Tape::scale(Value a, double s) {
  Mat out = val(a);
  for (double& x : out.d) x *= s;
  const bool nd = needs(a);
  Value o = push(std::move(out), nd);
  if (!nd) return o;
  nodes_[o.i].back = [this, a, o, s]() {
    const Mat& go = g(o);
    for (size_t i = 0; i < go.size(); ++i) g(a).d[i] += go.d[i] * s;
  };
  return o;
}

Value Tape::add_scalar(Value a, double s) {
  Mat out = val(a);
  for (double& x : out.d) x += s;
  const bool nd = needs(a);
  Value o = push(std::move(out), nd);
  if (!nd) return o;
  nodes_[o.i].back = [this, a, o]() {
    const Mat& go = g(o);
    for (size_t i = 0; i < go.size(); ++i) g(a).d[i] += go.d[i];
  };
  return o;
}

Value Tape::add_rowvec(Value a, Value row) {
  const Mat& r = val(row);
  if (r.rows != 1 || r.cols != val(a).cols)
    throw std::invalid_argument("add_rowvec: row must be 1 x cols(a)");
  Mat out = val(a);
  for (int i = 0; i < out.rows; ++i)
    for (int j = 0; j < out.cols; ++j) out.at(i, j) += r.at(0, j);
  const bool nd = needs(a) || needs(row);
  Value o = push(std::move(out), nd);
  if (!nd) return o;
  nodes_[o.i].back = [this, a, row, o]() {
    const Mat& go = g(o);
    if (needs(a))
      for (size_t i = 0; i < go.size(); ++i) g(a).d[i] += go.d[i];
    if (needs(row)) {
      Mat& gr = g(row);
      for (int i = 0; i < go.rows; ++i)
        for (int j = 0; j < go.cols; ++j) gr.at(0, j) += go.at(i, j);
    }
  };
  return o;
}

Value Tape::matmul(Value a, Value b) {
  Mat out;
  core::matmul(val(a), val(b), out);
  const bool nd = needs(a) || needs(b);
  Value o = push(std::move(out), nd);
  if (!nd) return o;
  nodes_[o.i].back = [this, a, b, o]() {
    if (needs(a)) core::matmul_nt_acc(g(o), val(b), g(a));
    if (needs(b)) core::matmul_tn_acc(val(a), g(o), g(b));
  };
  return o;
}

Value Tape::matmul_tn(Value a, Value b) {
  Mat out;
  core::matmul_tn(val(a), val(b), out);
  const bool nd = needs(a) || needs(b);
  Value o = push(std::move(out), nd);
  if (!nd) return o;
  nodes_[o.i].back = [this, a, b, o]() {
    // c = a^T b : da = b g^T -> (rows(a) x cols(a)), db = a g
    if (needs(a)) core::matmul_nt_acc(val(b), g(o), g(a));
    if (needs(b)) core::matmul_acc(val(a), g(o), g(b));
  };
  return o;
}

Value Tape::matmul_nt(Value a, Value b) {
  Mat out;
  core::matmul_nt(val(a), val(b), out);
  const bool nd = needs(a) || needs(b);
  Value o = push(std::move(out), nd);
  if (!nd) return o;
  nodes_[o.i].back = [this, a, b, o]() {
    // c = a b^T : da = g b, db = g^T a
    if (needs(a)) core::matmul_acc(g(o), val(b), g(a));
    if (needs(b)) core::matmul_tn_acc(g(o), val(a), g(b));
  };
  return o;
}

Value Tape::spmm(const Csr& s, Value b) {
  Mat out;
  core::spmm(s, val(b), out);
  const bool nd = needs(b);
  Value o = push(std::move(out), nd);
  if (!nd) return o;
  Csr st = core::csr_transpose(s);
  nodes_[o.i].back = [this, b, o, st = std::move(st)]() {
    Mat t;
    core::spmm(st, g(o), t);
    for (size_t i = 0; i < t.size(); ++i) g(b).d[i] += t.d[i];
  };
  return o;
}

Value Tape::relu(Value a) {
  Mat out = val(a);
  for (double& x : out.d) x = x > 0.0 ? x : 0.0;
  const bool nd = needs(a);
  Value o = push(std::move(out), nd);
  if (!nd) return o;
  nodes_[o.i].back = [this, a, o]() {
    const Mat& go = g(o);
    for (size_t i = 0; i < go.size(); ++i)
      if (val(a).d[i] > 0.0) g(a).d[i] += go.d[i];
  };
  return o;
}

Value Tape::sigmoid(Value a) {
  Mat out = val(a);
  for (double& x : out.d) x = 1.0 / (1.0 + std::exp(-x));
  const bool nd = needs(a);
  Value o = push(std::move(out), nd);
  if (!nd) return o;
  nodes_[o.i].back = [this, a, o]() {
    const Mat& go = g(o);
    const Mat& ov = val(o);
    for (size_t i = 0; i < go.size(); ++i)
      g(a).d[i] += go.d[i] * ov.d[i] * (1.0 - ov.d[i]);
  };
  return o;
}

Value Tape::exp(Value a) {
  Mat out = val(a);
  for (double& x : out.d) x = std::exp(x);
  const bool nd = needs(a);
  Value o = push(std::move(out), nd);
  if (!nd) return o;
  nodes_[o.i].back = [this, a, o]() {
    const Mat& go = g(o);
    const Mat& ov = val(o);
    for (size_t i = 0; i < go.size(); ++i) g(a).d[i] += go.d[i] * ov.d[i];
  };
  return o;
}

Value Tape::log(Value a) {
  Mat out = val(a);
  for (double& x : out.d) x = std::log(x);
  const bool nd = needs(a);
  Value o = push(std::move(out), nd);
  if (!nd) return o;
  nodes_[o.i].back = [this, a, o]() {
    const Mat& go = g(o);
    for (size_t i = 0; i < go.size(); ++i) g(a).d[i] += go.d[i] / val(a).d[i];
  };
  return o;
}

Value Tape::clamp(Value a, double lo, double hi) {
  Mat out = val(a);
  for (double& x : out.d) x = std::min(hi, std::max(lo, x));
  const bool nd = needs(a);
  Value o = push(std::move(out), nd);
  if (!nd) return o;
  nodes_[o.i].back = [this, a, o, lo, hi]() {
    const Mat& go = g(o);
    for (size_t i = 0; i < go.size(); ++i) {
      const double x = val(a).d[i];
      if (x > lo && x < hi) g(a).d[i] += go.d[i];
    }
  };
  return o;
}

Value Tape::softmax_rows(Value a) {
  Mat out = val(a);
  for (int i = 0; i < out.rows; ++i) {
    double mx = out.at(i, 0);
    for (int j = 1; j < out.cols; ++j) mx = std::max(mx, out.at(i, j));
    double z = 0.0;
    for (int j = 0; j < out.cols; ++j) {
      out.at(i, j) = std::exp(out.at(i, j) - mx);
      z += out.at(i, j);
    }
    for (int j = 0; j < out.cols; ++j) out.at(i, j) /= z;
  }
  const bool nd = needs(a);
  Value o = push(std::move(out), nd);
  if (!nd) return o;
  nodes_[o.i].back = [this, a, o]() {
    const Mat& go = g(o);
    const Mat& ov = val(o);
    for (int i = 0; i < go.rows; ++i) {
      double dotgs = 0.0;
      for (int j = 0; j < go.cols; ++j) dotgs += go.at(i, j) * ov.at(i, j);
      for (int j = 0; j < go.cols; ++j)
        g(a).at(i, j) += ov.at(i, j) * (go.at(i, j) - dotgs);
    }
  };
  return o;
}

Value Tape::batchnorm(Value a, Value gamma, Value beta, double eps) {
  const Mat& x = val(a);
  const int m = x.rows, c = x.cols;
  if (val(gamma).cols != c || val(beta).cols != c)
    throw std::invalid_argument("batchnorm: gamma/beta must be 1 x cols");
  Mat mu(1, c), var(1, c), xhat(m, c), out(m, c);
  for (int j = 0; j < c; ++j) {
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += x.at(i, j);
    mu.at(0, j) = s / m;
    double v = 0.0;
    for (int i = 0; i < m; ++i) {
      const double dlt = x.at(i, j) - mu.at(0, j);
      v += dlt * dlt;
    }
    var.at(0, j) = v / m;
    const double inv = 1.0 / std::sqrt(var.at(0, j) + eps);
    for (int i = 0; i < m; ++i) {
      xhat.at(i, j) = (x.at(i, j) - mu.at(0, j)) * inv;
      out.at(i, j) = val(gamma).at(0, j) * xhat.at(i, j) + val(beta).at(0, j);
    }
  }
  const bool nd = needs(a) || needs(gamma) || needs(beta);
  Value o = push(std::move(out), nd);
  if (!nd) return o;
  nodes_[o.i].back = [this, a, gamma, beta, o, xhat = std::move(xhat),
                      var = std::move(var), eps, m, c]() {
    const Mat& go = g(o);
    for (int j = 0; j < c; ++j) {
      const double gam = val(gamma).at(0, j);
      const double inv = 1.0 / std::sqrt(var.at(0, j) + eps);
      double sum_g = 0.0, sum_gx = 0.0;
      for (int i = 0; i < m; ++i) {
        sum_g += go.at(i, j);
        sum_gx += go.at(i, j) * xhat.at(i, j);
      }
      if (needs(gamma)) g(gamma).at(0, j) += sum_gx;
      if (needs(beta)) g(beta).at(0, j) += sum_g;
      if (needs(a)) {
        for (int i = 0; i < m; ++i) {
          const double t =
              m * go.at(i, j) - sum_g - xhat.at(i, j) * sum_gx;
          g(a).at(i, j) += gam * inv * t / m;
        }
      }
    }
  };
  return o;
}

Value Tape::layernorm(Value a, Value gamma, Value beta, double eps) {
  const Mat& x = val(a);
  const int m = x.rows, c = x.cols;
  if (val(gamma).cols != c || val(beta).cols != c)
    throw std::invalid_argument("layernorm: gamma/beta must be 1 x cols");
  Mat xhat(m, c), inv(m, 1), out(m, c);
  for (int i = 0; i < m; ++i) {
    double mu = 0.0;
    for (int j = 0; j < c; ++j) mu += x.at(i, j);
    mu /= c;
    double v = 0.0;
    for (int j = 0; j < c; ++j) {
      const double dlt = x.at(i, j) - mu;
      v += dlt * dlt;
    }
    v /= c;
    inv.at(i, 0) = 1.0 / std::sqrt(v + eps);
    for (int j = 0; j < c; ++j) {
      xhat.at(i, j) = (x.at(i, j) - mu) * inv.at(i, 0);
      out.at(i, j) = val(gamma).at(0, j) * xhat.at(i, j) + val(beta).at(0, j);
    }
  }
  const bool nd = needs(a) || needs(gamma) || needs(beta);
  Value o = push(std::move(out), nd);
  if (!nd) return o;
  nodes_[o.i].back = [this, a, gamma, beta, o, xhat = std::move(xhat),
                      inv = std::move(inv), m, c]() {
    const Mat& go = g(o);
    for (int i = 0; i < m; ++i) {
      double sum_g = 0.0, sum_gx = 0.0;
      for (int j = 0; j < c; ++j) {
        const double dg = go.at(i, j) * val(gamma).at(0, j);
        sum_g += dg;
        sum_gx += dg * xhat.at(i, j);
      }
      for (int j = 0; j < c; ++j) {
        if (needs(gamma)) g(gamma).at(0, j) += go.at(i, j) * xhat.at(i, j);
        if (needs(beta)) g(beta).at(0, j) += go.at(i, j);
        if (needs(a)) {
          const double dg = go.at(i, j) * val(gamma).at(0, j);
          g(a).at(i, j) +=
              inv.at(i, 0) * (dg - sum_g / c - xhat.at(i, j) * sum_gx / c);
        }
      }
    }
  };
  return o;
}

Value Tape::dropout(Value a, double rate, std::mt19937_64& rng) {
  if (rate <= 0.0) return a;
  if (rate >= 1.0) throw std::invalid_argument("dropout: rate must be < 1");
  Mat mask(val(a).rows, val(a).cols);
  std::bernoulli_distribution keep(1.0 - rate);
  const double s = 1.0 / (1.0 - rate);
  for (double& x : mask.d) x = keep(rng) ? s : 0.0;
  Mat out = val(a);
  for (size_t i = 0; i < out.size(); ++i) out.d[i] *= mask.d[i];
  const bool nd = needs(a);
  Value o = push(std::move(out), nd);
  if (!nd) return o;
  nodes_[o.i].back = [this, a, o, mask = std::move(mask)]() {
    const Mat& go = g(o);
    for (size_t i = 0; i < go.size(); ++i) g(a).d[i] += go.d[i] * mask.d[i];
  };
  return o;
}

Value Tape::sum(Value a) {
  Mat out(1, 1);
  for (double x : val(a).d) out.d[0] += x;
  const bool nd = needs(a);
  Value o = push(std::move(out), nd);
  if (!nd) return o;
  nodes_[o.i].back = [this, a, o]() {
    const double go = g(o).d[0];
    for (double& x : g(a).d) x += go;
  };
  return o;
}

Value Tape::mean_all(Value a) {
  const double n = static_cast<double>(val(a).size());
  Mat out(1, 1);
  for (double x : val(a).d) out.d[0] += x;
  out.d[0] /= n;
  const bool nd = needs(a);
  Value o = push(std::move(out), nd);
  if (!nd) return o;
  nodes_[o.i].back = [this, a, o, n]() {
    const double go = g(o).d[0] / n;
    for (double& x : g(a).d) x += go;
  };
  return o;
}

Value Tape::colsum(Value a) {
  const Mat& x = val(a);
  Mat out(1, x.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) out.at(0, j) += x.at(i, j);
  const bool nd = needs(a);
  Value o = push(std::move(out), nd);
  if (!nd) return o;
  nodes_[o.i].back = [this, a, o]() {
    const Mat& go = g(o);
    Mat& ga = g(a);
    for (int i = 0; i < ga.rows; ++i)
      for (int j = 0; j < ga.cols; ++j) ga.at(i, j) += go.at(0, j);
  };
  return o;
}

Value Tape::colmax(Value a) {
  const Mat& x = val(a);
  if (x.rows == 0) throw std::invalid_argument("colmax: empty input");
  Mat out(1, x.cols);
  std::vector<int> arg(x.cols, 0);
  for (int j = 0; j < x.cols; ++j) {
    double best = x.at(0, j);
    for (int i = 1; i < x.rows; ++i)
      if (x.at(i, j) > best) {
        best = x.at(i, j);
        arg[j] = i;
      }
    out.at(0, j) = best;
  }
  const bool nd = needs(a);
  Value o = push(std::move(out), nd);
  if (!nd) return o;
  nodes_[o.i].back = [this, a, o, arg = std::move(arg)]() {
    const Mat& go = g(o);
    for (int j = 0; j < go.cols; ++j) g(a).at(arg[j], j) += go.at(0, j);
  };
  return o;
}

Value Tape::concat_cols(Value a, Value b) {
  const Mat& x = val(a);
  const Mat& y = val(b);
  if (x.rows != y.rows) throw std::invalid_argument("concat_cols: row mismatch");
  Mat out(x.rows, x.cols + y.cols);
  for (int i = 0; i < x.rows; ++i) {
    for (int j = 0; j < x.cols; ++j) out.at(i, j) = x.at(i, j);
    for (int j = 0; j < y.cols; ++j) out.at(i, x.cols + j) = y.at(i, j);
  }
  const bool nd = needs(a) || needs(b);
  Value o = push(std::move(out), nd);
  if (!nd) return o;
  nodes_[o.i].back = [this, a, b, o]() {
    const Mat& go = g(o);
    const int ac = val(a).cols;
    if (needs(a))
      for (int i = 0; i < go.rows; ++i)
        for (int j = 0; j < ac; ++j) g(a).at(i, j) += go.at(i, j);
    if (needs(b))
      for (int i = 0; i < go.rows; ++i)
        for (int j = ac; j < go.cols; ++j) g(b).at(i, j - ac) += go.at(i, j);
  };
  return o;
}

Value Tape::stack_rows(const std::vector<Value>& rows) {
  if (rows.empty()) throw std::invalid_argument("stack_rows: empty");
  const int c = val(rows[0]).cols;
  Mat out(static_cast<int>(rows.size()), c);
  bool nd = false;
  for (size_t i = 0; i < rows.size(); ++i) {
    const Mat& r = val(rows[i]);
    if (r.rows != 1 || r.cols != c)
      throw std::invalid_argument("stack_rows: rows must be 1 x C");
    for (int j = 0; j < c; ++j) out.at(static_cast<int>(i), j) = r.at(0, j);
    nd = nd || needs(rows[i]);
  }
  Value o = push(std::move(out), nd);
  if (!nd) return o;
  nodes_[o.i].back = [this, rows, o]() {
    const Mat& go = g(o);
    for (size_t i = 0; i < rows.size(); ++i) {
      if (!needs(rows[i])) continue;
      for (int j = 0; j < go.cols; ++j)
        g(rows[i]).at(0, j) += go.at(static_cast<int>(i), j);
    }
  };
  return o;
}

Value Tape::gather_rows(Value a, std::vector<int> idx) {
  const Mat& x = val(a);
  Mat out(static_cast<int>(idx.size()), x.cols);
  for (size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] < 0 || idx[i] >= x.rows)
      throw std::out_of_range("gather_rows: index out of range");
    for (int j = 0; j < x.cols; ++j) out.at(static_cast<int>(i), j) = x.at(idx[i], j);
  }
  const bool nd = needs(a);
  Value o = push(std::move(out), nd);
  if (!nd) return o;
  nodes_[o.i].back = [this, a, o, idx = std::move(idx)]() {
    const Mat& go = g(o);
    for (size_t i = 0; i < idx.size(); ++i)
      for (int j = 0; j < go.cols; ++j)
        g(a).at(idx[i], j) += go.at(static_cast<int>(i), j);
  };
  return o;
}

Value Tape::gather_entries(Value a, std::vector<std::pair<int, int>> rc) {
  const Mat& x = val(a);
  Mat out(static_cast<int>(rc.size()), 1);
  for (size_t i = 0; i < rc.size(); ++i) out.at(static_cast<int>(i), 0) = x.at(rc[i].first, rc[i].second);
  const bool nd = needs(a);
  Value o = push(std::move(out), nd);
  if (!nd) return o;
  nodes_[o.i].back = [this, a, o, rc = std::move(rc)]() {
    const Mat& go = g(o);
    for (size_t i = 0; i < rc.size(); ++i)
      g(a).at(rc[i].first, rc[i].second) += go.at(static_cast<int>(i), 0);
  };
  return o;
}

Value Tape::im2col(Value a, int window) {
  const Mat& x = val(a);
  if (window < 1 || window > x.rows)
    throw std::invalid_argument("im2col: window outside [1, rows]");
  const int t = x.rows - window + 1;
  Mat out(t, window * x.cols);
  for (int i = 0; i < t; ++i)
    for (int w = 0; w < window; ++w)
      for (int j = 0; j < x.cols; ++j)
        out.at(i, w * x.cols + j) = x.at(i + w, j);
  const bool nd = needs(a);
  Value o = push(std::move(out), nd);
  if (!nd) return o;
  nodes_[o.i].back = [this, a, o, window]() {
    const Mat& go = g(o);
    Mat& ga = g(a);
    const int cols = ga.cols;
    for (int i = 0; i < go.rows; ++i)
      for (int w = 0; w < window; ++w)
        for (int j = 0; j < cols; ++j)
          ga.at(i + w, j) += go.at(i, w * cols + j);
  };
  return o;
}

Value Tape::straight_through(Value h, const Mat& emitted, const Mat& mask) {
  const Mat& x = val(h);
  if (!x.same_shape(emitted) || !x.same_shape(mask))
    throw std::invalid_argument("straight_through: shape mismatch");
  const bool nd = needs(h);
  Value o = push(emitted, nd);
  if (!nd) return o;
  nodes_[o.i].back = [this, h, o, mask]() {
    const Mat& go = g(o);
    for (size_t i = 0; i < go.size(); ++i) g(h).d[i] += go.d[i] * mask.d[i];
  };
  return o;
}

}  // namespace ragan::ad
