// Copyright 2026 The lcgraph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lcgraph/autodiff.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <utility>

#include "lcgraph/errors.h"
#include "lcgraph/kernels.h"

#if defined(__GLIBC__)
#include <malloc.h>
#endif

namespace lcgraph::ad {

namespace {

std::string ShapeString(const Matrix& m) {
  std::ostringstream os;
  os << m.rows() << "x" << m.cols();
  return os.str();
}

[[noreturn]] void ThrowShape(const char* op, const Matrix& a, const Matrix& b) {
  throw ShapeError(std::string(op) + ": incompatible shapes " + ShapeString(a) +
                   " and " + ShapeString(b));
}

Tape* TapeOf(Var a) {
  if (!a.valid()) throw ShapeError("operation on an unbound Var");
  return a.tape();
}

Tape* TapeOf(Var a, Var b) {
  Tape* t = TapeOf(a);
  if (TapeOf(b) != t) throw ShapeError("operands belong to different tapes");
  return t;
}

// Adds `g` into the gradient of `v` when it participates in differentiation.
void Accumulate(Tape& tape, Var v, const Matrix& g) {
  if (!v.requires_grad()) return;
  Matrix& dst = tape.MutableGrad(v);
  kernels::ActiveKernels().axpy(g.size(), 1.0, g.data().data(), dst.data().data());
}

template <typename F>
Matrix Map(const Matrix& x, F f) {
  Matrix out = Matrix::Uninitialized(x.rows(), x.cols());
  auto in = x.data();
  auto o = out.data();
  for (std::size_t i = 0; i < in.size(); ++i) o[i] = f(in[i]);
  return out;
}

// Unary op whose derivative is a function of the input.
template <typename F, typename D>
Var Unary(Var x, F f, D dfdx) {
  Tape* t = TapeOf(x);
  Matrix out = Map(x.value(), f);
  return t->Record(std::move(out), {x}, [x, dfdx](Tape& tape, const Matrix& g) {
    if (!x.requires_grad()) return;
    const Matrix& xv = x.value();
    Matrix& dst = tape.MutableGrad(x);
    auto xi = xv.data();
    auto gi = g.data();
    auto di = dst.data();
    for (std::size_t i = 0; i < xi.size(); ++i) di[i] += gi[i] * dfdx(xi[i]);
  });
}

// Unary op with the forward values already in `out` and a derivative that
// is a function of the output.
template <typename D>
Var UnaryFromOutput(Var x, Matrix out, D dfdy) {
  Tape* t = TapeOf(x);
  const std::size_t id = t->size();  // the id Record assigns to the output
  return t->Record(std::move(out), {x}, [x, id, dfdy](Tape& tape, const Matrix& g) {
    if (!x.requires_grad()) return;
    auto y = tape.ValueOf(id).data();
    auto gi = g.data();
    auto di = tape.MutableGrad(x).data();
    for (std::size_t i = 0; i < y.size(); ++i) di[i] += gi[i] * dfdy(y[i]);
  });
}

}  // namespace

// ---- Matrix ----

Matrix::Matrix(int rows, int cols, double fill)
    : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw ShapeError("negative matrix dimension");
  data_.assign(static_cast<std::size_t>(rows) * cols, fill);
}

Matrix Matrix::FromRows(
    std::initializer_list<std::initializer_list<double>> rows) {
  const int r = static_cast<int>(rows.size());
  const int c = r == 0 ? 0 : static_cast<int>(rows.begin()->size());
  Matrix m(r, c);
  int i = 0;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != c) throw ShapeError("ragged FromRows");
    std::copy(row.begin(), row.end(), m.row(i++));
  }
  return m;
}

Matrix Matrix::Uninitialized(int rows, int cols) {
  if (rows < 0 || cols < 0) throw ShapeError("negative matrix dimension");
  Matrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.data_.resize(static_cast<std::size_t>(rows) * cols);
  return m;
}

Matrix Matrix::RowVector(std::span<const double> values) {
  Matrix m(1, static_cast<int>(values.size()));
  std::copy(values.begin(), values.end(), m.data_.begin());
  return m;
}

void Matrix::Fill(double v) { std::fill(data_.begin(), data_.end(), v); }

void Matrix::Reshape(int rows, int cols) {
  if (static_cast<std::size_t>(rows) * cols != data_.size()) {
    std::ostringstream os;
    os << "cannot reshape " << rows_ << "x" << cols_ << " to " << rows << "x"
       << cols;
    throw ShapeError(os.str());
  }
  rows_ = rows;
  cols_ = cols;
}

Parameter::Parameter(Matrix v) : value(std::move(v)) {
  grad = Matrix(value.rows(), value.cols());
}

// ---- Var ----

const Matrix& Var::value() const { return tape_->ValueOf(id_); }
const Matrix& Var::grad() const { return tape_->GradOf(id_); }
bool Var::requires_grad() const { return tape_->RequiresGrad(id_); }

// ---- Tape ----

namespace {
// Tapes allocate and free many large buffers per step. With glibc's
// defaults those go back to the kernel on every free and fault back in on
// the next step; keeping them in the heap removes that churn.
void TuneAllocatorOnce() {
#if defined(__GLIBC__)
  static const bool done = [] {
    mallopt(M_MMAP_THRESHOLD, 256 << 20);
    mallopt(M_TRIM_THRESHOLD, 512 << 20);
    return true;
  }();
  (void)done;
#endif
}
}  // namespace

Tape::Tape() { TuneAllocatorOnce(); }

Var Tape::Push(Node node) {
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

Var Tape::Constant(Matrix value) {
  Node n;
  n.value = std::move(value);
  return Push(std::move(n));
}

Var Tape::Variable(Matrix value) {
  Node n;
  n.value = std::move(value);
  n.requires_grad = true;
  return Push(std::move(n));
}

Var Tape::Param(Parameter& p) {
  auto it = param_ids_.find(&p);
  if (it != param_ids_.end()) return Var(this, it->second);
  Node n;
  n.requires_grad = true;
  n.param = &p;
  Var v = Push(std::move(n));
  param_ids_[&p] = v.id();
  return v;
}

Var Tape::Record(Matrix value, std::initializer_list<Var> inputs,
                 BackwardFn fn) {
  Node n;
  n.value = std::move(value);
  for (const Var& in : inputs) {
    if (in.tape() != this) throw ShapeError("input recorded on another tape");
    n.requires_grad = n.requires_grad || nodes_[in.id()].requires_grad;
  }
  if (n.requires_grad) n.backward = std::move(fn);
  return Push(std::move(n));
}

Matrix& Tape::MutableGrad(Var v) {
  Node& n = nodes_[v.id()];
  const Matrix& value = ValueOf(v.id());
  if (n.grad.empty() && !value.empty()) n.grad = Matrix(value.rows(), value.cols());
  return n.grad;
}

void Tape::Backward(Var loss) {
  if (loss.tape() != this) throw ShapeError("loss belongs to another tape");
  if (backward_done_) throw ShapeError("Backward called twice on one tape");
  const Matrix& lv = ValueOf(loss.id());
  if (lv.rows() != 1 || lv.cols() != 1) {
    throw ShapeError("Backward requires a 1x1 loss, got " + ShapeString(lv));
  }
  backward_done_ = true;
  if (!nodes_[loss.id()].requires_grad) return;
  MutableGrad(loss)(0, 0) = 1.0;
  for (std::size_t i = loss.id() + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (n.grad.empty()) continue;
    if (n.backward) n.backward(*this, n.grad);
    if (n.param != nullptr) {
      Parameter& p = *n.param;
      if (!p.grad.SameShape(p.value)) p.grad = Matrix(p.value.rows(), p.value.cols());
      kernels::ActiveKernels().axpy(n.grad.size(), 1.0, n.grad.data().data(),
                                    p.grad.data().data());
    }
  }
}

// ---- Linear algebra ----

Var MatMul(Var a, Var b) {
  Tape* t = TapeOf(a, b);
  const Matrix& av = a.value();
  const Matrix& bv = b.value();
  if (av.cols() != bv.rows()) ThrowShape("MatMul", av, bv);
  const int m = av.rows(), k = av.cols(), n = bv.cols();
  Matrix out = Matrix::Uninitialized(m, n);
  kernels::ActiveKernels().gemm_nn(m, n, k, av.data().data(), bv.data().data(),
                                   out.data().data(), false);
  return t->Record(std::move(out), {a, b},
                   [a, b, m, n, k](Tape& tape, const Matrix& g) {
    const auto& kt = kernels::ActiveKernels();
    if (a.requires_grad()) {
      kt.gemm_nt(m, k, n, g.data().data(), b.value().data().data(),
                 tape.MutableGrad(a).data().data(), true);
    }
    if (b.requires_grad()) {
      kt.gemm_tn(k, n, m, a.value().data().data(), g.data().data(),
                 tape.MutableGrad(b).data().data(), true);
    }
  });
}

Var MatMulBT(Var a, Var b) {
  Tape* t = TapeOf(a, b);
  const Matrix& av = a.value();
  const Matrix& bv = b.value();
  if (av.cols() != bv.cols()) ThrowShape("MatMulBT", av, bv);
  const int m = av.rows(), k = av.cols(), n = bv.rows();
  Matrix out = Matrix::Uninitialized(m, n);
  kernels::ActiveKernels().gemm_nt(m, n, k, av.data().data(), bv.data().data(),
                                   out.data().data(), false);
  return t->Record(std::move(out), {a, b},
                   [a, b, m, n, k](Tape& tape, const Matrix& g) {
    const auto& kt = kernels::ActiveKernels();
    if (a.requires_grad()) {
      kt.gemm_nn(m, k, n, g.data().data(), b.value().data().data(),
                 tape.MutableGrad(a).data().data(), true);
    }
    if (b.requires_grad()) {
      kt.gemm_tn(n, k, m, g.data().data(), a.value().data().data(),
                 tape.MutableGrad(b).data().data(), true);
    }
  });
}

Var AddRowVector(Var x, Var b) {
  Tape* t = TapeOf(x, b);
  const Matrix& xv = x.value();
  const Matrix& bv = b.value();
  if (bv.rows() != 1 || bv.cols() != xv.cols()) ThrowShape("AddRowVector", xv, bv);
  Matrix out = xv;
  const auto& kt = kernels::ActiveKernels();
  for (int r = 0; r < out.rows(); ++r) {
    kt.axpy(static_cast<std::size_t>(out.cols()), 1.0, bv.data().data(), out.row(r));
  }
  return t->Record(std::move(out), {x, b}, [x, b](Tape& tape, const Matrix& g) {
    Accumulate(tape, x, g);
    if (b.requires_grad()) {
      Matrix& gb = tape.MutableGrad(b);
      const auto& kt = kernels::ActiveKernels();
      for (int r = 0; r < g.rows(); ++r) {
        kt.axpy(static_cast<std::size_t>(g.cols()), 1.0, g.row(r), gb.data().data());
      }
    }
  });
}

// ---- Elementwise ----

Var Add(Var a, Var b) {
  Tape* t = TapeOf(a, b);
  if (!a.value().SameShape(b.value())) ThrowShape("Add", a.value(), b.value());
  Matrix out = a.value();
  kernels::ActiveKernels().axpy(out.size(), 1.0, b.value().data().data(),
                                out.data().data());
  return t->Record(std::move(out), {a, b}, [a, b](Tape& tape, const Matrix& g) {
    Accumulate(tape, a, g);
    Accumulate(tape, b, g);
  });
}

Var Sub(Var a, Var b) {
  Tape* t = TapeOf(a, b);
  if (!a.value().SameShape(b.value())) ThrowShape("Sub", a.value(), b.value());
  Matrix out = a.value();
  kernels::ActiveKernels().axpy(out.size(), -1.0, b.value().data().data(),
                                out.data().data());
  return t->Record(std::move(out), {a, b}, [a, b](Tape& tape, const Matrix& g) {
    Accumulate(tape, a, g);
    if (b.requires_grad()) {
      kernels::ActiveKernels().axpy(g.size(), -1.0, g.data().data(),
                                    tape.MutableGrad(b).data().data());
    }
  });
}

Var Mul(Var a, Var b) {
  Tape* t = TapeOf(a, b);
  if (!a.value().SameShape(b.value())) ThrowShape("Mul", a.value(), b.value());
  Matrix out = Matrix::Uninitialized(a.rows(), a.cols());
  kernels::ActiveKernels().mul(out.size(), a.value().data().data(),
                               b.value().data().data(), out.data().data());
  return t->Record(std::move(out), {a, b}, [a, b](Tape& tape, const Matrix& g) {
    const auto& kt = kernels::ActiveKernels();
    Matrix tmp = Matrix::Uninitialized(g.rows(), g.cols());
    if (a.requires_grad()) {
      kt.mul(g.size(), g.data().data(), b.value().data().data(), tmp.data().data());
      Accumulate(tape, a, tmp);
    }
    if (b.requires_grad()) {
      kt.mul(g.size(), g.data().data(), a.value().data().data(), tmp.data().data());
      Accumulate(tape, b, tmp);
    }
  });
}

Var Scale(Var x, double s) {
  return Unary(x, [s](double v) { return s * v; }, [s](double) { return s; });
}

Var AddScalar(Var x, double s) {
  return Unary(x, [s](double v) { return v + s; }, [](double) { return 1.0; });
}

Var Neg(Var x) { return Scale(x, -1.0); }

Var Square(Var x) {
  return Unary(x, [](double v) { return v * v; }, [](double v) { return 2.0 * v; });
}

Var Sqrt(Var x) {
  return Unary(
      x, [](double v) { return std::sqrt(v); },
      [](double v) { return v > 0.0 ? 0.5 / std::sqrt(v) : 0.0; });
}

Var Tanh(Var x) {
  const Matrix& xv = x.value();
  Matrix out = Matrix::Uninitialized(xv.rows(), xv.cols());
  kernels::ActiveKernels().tanh(xv.size(), xv.data().data(), out.data().data());
  return UnaryFromOutput(x, std::move(out), [](double y) { return 1.0 - y * y; });
}

namespace {
double StableSigmoid(double v) {
  if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
  const double e = std::exp(v);
  return e / (1.0 + e);
}
}  // namespace

Var Sigmoid(Var x) {
  return UnaryFromOutput(x, Map(x.value(), StableSigmoid),
                         [](double y) { return y * (1.0 - y); });
}

Var Relu(Var x) {
  return Unary(
      x, [](double v) { return v > 0.0 ? v : 0.0; },
      [](double v) { return v > 0.0 ? 1.0 : 0.0; });
}

Var Step(Var x) {
  Tape* t = TapeOf(x);
  return t->Constant(Map(x.value(), [](double v) { return v > 0.0 ? 1.0 : 0.0; }));
}

Var MulColumn(Var x, Var s) {
  Tape* t = TapeOf(x, s);
  const Matrix& xv = x.value();
  const Matrix& sv = s.value();
  if (sv.cols() != 1 || sv.rows() != xv.rows()) ThrowShape("MulColumn", xv, sv);
  Matrix out = xv;
  for (int r = 0; r < out.rows(); ++r) {
    const double f = sv(r, 0);
    double* row = out.row(r);
    for (int c = 0; c < out.cols(); ++c) row[c] *= f;
  }
  return t->Record(std::move(out), {x, s}, [x, s](Tape& tape, const Matrix& g) {
    const Matrix& xv = x.value();
    const Matrix& sv = s.value();
    const auto& kt = kernels::ActiveKernels();
    const auto cols = static_cast<std::size_t>(g.cols());
    if (x.requires_grad()) {
      Matrix& gx = tape.MutableGrad(x);
      for (int r = 0; r < g.rows(); ++r) kt.axpy(cols, sv(r, 0), g.row(r), gx.row(r));
    }
    if (s.requires_grad()) {
      Matrix& gs = tape.MutableGrad(s);
      for (int r = 0; r < g.rows(); ++r) gs(r, 0) += kt.dot(cols, g.row(r), xv.row(r));
    }
  });
}

// ---- Reductions ----

Var Sum(Var x) {
  Tape* t = TapeOf(x);
  double s = 0.0;
  for (double v : x.value().data()) s += v;
  return t->Record(Matrix(1, 1, s), {x}, [x](Tape& tape, const Matrix& g) {
    if (!x.requires_grad()) return;
    const double gv = g(0, 0);
    for (double& d : tape.MutableGrad(x).data()) d += gv;
  });
}

Var Mean(Var x) {
  const std::size_t n = x.value().size();
  if (n == 0) throw ShapeError("Mean of an empty matrix");
  return Scale(Sum(x), 1.0 / static_cast<double>(n));
}

Var RowSum(Var x) {
  Tape* t = TapeOf(x);
  const Matrix& xv = x.value();
  Matrix out(xv.rows(), 1);
  for (int r = 0; r < xv.rows(); ++r) {
    double s = 0.0;
    const double* row = xv.row(r);
    for (int c = 0; c < xv.cols(); ++c) s += row[c];
    out(r, 0) = s;
  }
  return t->Record(std::move(out), {x}, [x](Tape& tape, const Matrix& g) {
    if (!x.requires_grad()) return;
    Matrix& gx = tape.MutableGrad(x);
    for (int r = 0; r < gx.rows(); ++r) {
      double* row = gx.row(r);
      for (int c = 0; c < gx.cols(); ++c) row[c] += g(r, 0);
    }
  });
}

// ---- Shape ----

Var Reshape(Var x, int rows, int cols) {
  Tape* t = TapeOf(x);
  Matrix out = x.value();
  out.Reshape(rows, cols);
  return t->Record(std::move(out), {x}, [x](Tape& tape, const Matrix& g) {
    if (!x.requires_grad()) return;
    Matrix& gx = tape.MutableGrad(x);
    kernels::ActiveKernels().axpy(g.size(), 1.0, g.data().data(), gx.data().data());
  });
}

Var ConcatCols(std::initializer_list<Var> parts) {
  if (parts.size() == 0) throw ShapeError("ConcatCols needs at least one input");
  Tape* t = TapeOf(*parts.begin());
  const int rows = parts.begin()->rows();
  std::vector<Var> ins(parts);
  std::vector<int> offsets;
  int cols = 0;
  for (const Var& p : ins) {
    if (TapeOf(p) != t) throw ShapeError("operands belong to different tapes");
    if (p.rows() != rows) ThrowShape("ConcatCols", parts.begin()->value(), p.value());
    offsets.push_back(cols);
    cols += p.cols();
  }
  Matrix out = Matrix::Uninitialized(rows, cols);
  for (std::size_t i = 0; i < ins.size(); ++i) {
    const Matrix& v = ins[i].value();
    for (int r = 0; r < rows; ++r) {
      std::copy(v.row(r), v.row(r) + v.cols(), out.row(r) + offsets[i]);
    }
  }
  return t->Record(std::move(out), parts,
                   [ins, offsets](Tape& tape, const Matrix& g) {
    for (std::size_t i = 0; i < ins.size(); ++i) {
      if (!ins[i].requires_grad()) continue;
      Matrix& gi = tape.MutableGrad(ins[i]);
      for (int r = 0; r < gi.rows(); ++r) {
        const double* src = g.row(r) + offsets[i];
        double* dst = gi.row(r);
        for (int c = 0; c < gi.cols(); ++c) dst[c] += src[c];
      }
    }
  });
}

Var SliceCols(Var x, int begin, int end) {
  Tape* t = TapeOf(x);
  const Matrix& xv = x.value();
  if (begin < 0 || end > xv.cols() || begin > end) {
    throw ShapeError("SliceCols range out of bounds for " + ShapeString(xv));
  }
  Matrix out = Matrix::Uninitialized(xv.rows(), end - begin);
  for (int r = 0; r < xv.rows(); ++r) {
    std::copy(xv.row(r) + begin, xv.row(r) + end, out.row(r));
  }
  return t->Record(std::move(out), {x}, [x, begin](Tape& tape, const Matrix& g) {
    if (!x.requires_grad()) return;
    Matrix& gx = tape.MutableGrad(x);
    for (int r = 0; r < g.rows(); ++r) {
      const double* src = g.row(r);
      double* dst = gx.row(r) + begin;
      for (int c = 0; c < g.cols(); ++c) dst[c] += src[c];
    }
  });
}

Var GroupMeanRows(Var x, int group) {
  Tape* t = TapeOf(x);
  const Matrix& xv = x.value();
  if (group <= 0 || xv.rows() % group != 0) {
    throw ShapeError("GroupMeanRows: rows not divisible by group size");
  }
  const int b = xv.rows() / group;
  const double inv = 1.0 / group;
  Matrix out(b, xv.cols());
  const auto& kt = kernels::ActiveKernels();
  const auto cols = static_cast<std::size_t>(xv.cols());
  for (int i = 0; i < b; ++i) {
    for (int j = 0; j < group; ++j) kt.axpy(cols, inv, xv.row(i * group + j), out.row(i));
  }
  return t->Record(std::move(out), {x},
                   [x, group, inv, cols](Tape& tape, const Matrix& g) {
    if (!x.requires_grad()) return;
    Matrix& gx = tape.MutableGrad(x);
    const auto& kt = kernels::ActiveKernels();
    for (int i = 0; i < g.rows(); ++i) {
      for (int j = 0; j < group; ++j) kt.axpy(cols, inv, g.row(i), gx.row(i * group + j));
    }
  });
}

Var RepeatRows(Var x, int group) {
  Tape* t = TapeOf(x);
  const Matrix& xv = x.value();
  if (group <= 0) throw ShapeError("RepeatRows: group must be positive");
  Matrix out = Matrix::Uninitialized(xv.rows() * group, xv.cols());
  for (int i = 0; i < xv.rows(); ++i) {
    for (int j = 0; j < group; ++j) {
      std::copy(xv.row(i), xv.row(i) + xv.cols(), out.row(i * group + j));
    }
  }
  return t->Record(std::move(out), {x}, [x, group](Tape& tape, const Matrix& g) {
    if (!x.requires_grad()) return;
    Matrix& gx = tape.MutableGrad(x);
    const auto& kt = kernels::ActiveKernels();
    const auto cols = static_cast<std::size_t>(g.cols());
    for (int i = 0; i < gx.rows(); ++i) {
      for (int j = 0; j < group; ++j) kt.axpy(cols, 1.0, g.row(i * group + j), gx.row(i));
    }
  });
}

namespace {
void CheckIndex(const IndexMap& index, int data_rows, int src_cols,
                const char* op) {
  if (index.index.size() != static_cast<std::size_t>(index.rows) * index.cols ||
      (index.rows != 1 && index.rows != data_rows)) {
    throw ShapeError(std::string(op) + ": index map shape mismatch");
  }
  for (int v : index.index) {
    if (v < -1 || v >= src_cols) {
      throw ShapeError(std::string(op) + ": index out of range");
    }
  }
}

void ScatterInto(const Matrix& y, const IndexMap& index, Matrix& out) {
  for (int r = 0; r < y.rows(); ++r) {
    const double* src = y.row(r);
    double* dst = out.row(r);
    for (int c = 0; c < index.cols; ++c) {
      const int j = index.at(r, c);
      if (j >= 0) dst[j] += src[c];
    }
  }
}

void GatherInto(const Matrix& x, const IndexMap& index, Matrix& out) {
  for (int r = 0; r < x.rows(); ++r) {
    const double* src = x.row(r);
    double* dst = out.row(r);
    for (int c = 0; c < index.cols; ++c) {
      const int j = index.at(r, c);
      if (j >= 0) dst[c] += src[j];
    }
  }
}
}  // namespace

Var GatherCols(Var x, const IndexMap& index) {
  Tape* t = TapeOf(x);
  const Matrix& xv = x.value();
  CheckIndex(index, xv.rows(), xv.cols(), "GatherCols");
  Matrix out(xv.rows(), index.cols);
  GatherInto(xv, index, out);
  return t->Record(std::move(out), {x}, [x, index](Tape& tape, const Matrix& g) {
    if (!x.requires_grad()) return;
    ScatterInto(g, index, tape.MutableGrad(x));
  });
}

Var ScatterCols(Var y, const IndexMap& index, int cols) {
  Tape* t = TapeOf(y);
  const Matrix& yv = y.value();
  CheckIndex(index, yv.rows(), cols, "ScatterCols");
  if (yv.cols() != index.cols) {
    throw ShapeError("ScatterCols: input width must equal index width");
  }
  Matrix out(yv.rows(), cols);
  ScatterInto(yv, index, out);
  return t->Record(std::move(out), {y}, [y, index](Tape& tape, const Matrix& g) {
    if (!y.requires_grad()) return;
    GatherInto(g, index, tape.MutableGrad(y));
  });
}

Var OuterRows(Var x) {
  Tape* t = TapeOf(x);
  const Matrix& xv = x.value();
  const int n = xv.cols();
  Matrix out = Matrix::Uninitialized(xv.rows(), n * n);
  for (int b = 0; b < xv.rows(); ++b) {
    const double* xr = xv.row(b);
    double* o = out.row(b);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) o[i * n + j] = xr[i] * xr[j];
    }
  }
  return t->Record(std::move(out), {x}, [x, n](Tape& tape, const Matrix& g) {
    if (!x.requires_grad()) return;
    const Matrix& xv = x.value();
    Matrix& gx = tape.MutableGrad(x);
    for (int b = 0; b < xv.rows(); ++b) {
      const double* xr = xv.row(b);
      const double* gr = g.row(b);
      double* dst = gx.row(b);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const double gij = gr[i * n + j];
          dst[i] += gij * xr[j];
          dst[j] += gij * xr[i];
        }
      }
    }
  });
}

Var StraightThrough(Matrix hard, Var soft) {
  Tape* t = TapeOf(soft);
  if (!hard.SameShape(soft.value())) ThrowShape("StraightThrough", hard, soft.value());
  return t->Record(std::move(hard), {soft}, [soft](Tape& tape, const Matrix& g) {
    Accumulate(tape, soft, g);
  });
}

}  // namespace lcgraph::ad
