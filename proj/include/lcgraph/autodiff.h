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

#ifndef LCGRAPH_AUTODIFF_H_
#define LCGRAPH_AUTODIFF_H_

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <memory>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

// Reverse-mode differentiation over dense row-major double matrices.
//
// A Tape records every operation applied to its variables; Backward() walks
// the records in reverse. Gradients of gradients are obtained by writing
// the first derivative as ordinary tape operations (see Mlp::InputVjp), so
// the tape itself only ever needs first-order backward rules.
namespace lcgraph::ad {

// Leaves new elements uninitialized unless a value is given, so kernels
// that overwrite their output skip a redundant zero fill.
template <typename T>
struct DefaultInitAllocator : std::allocator<T> {
  template <typename U>
  struct rebind {
    using other = DefaultInitAllocator<U>;
  };
  using std::allocator<T>::allocator;
  template <typename U>
  void construct(U* p) noexcept {
    ::new (static_cast<void*>(p)) U;
  }
  template <typename U, typename... Args>
  void construct(U* p, Args&&... args) {
    ::new (static_cast<void*>(p)) U(std::forward<Args>(args)...);
  }
};

// Rank-2 tensor: shape (rows, cols), row-major storage. Scalars are 1x1.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0);
  static Matrix FromRows(std::initializer_list<std::initializer_list<double>> rows);
  static Matrix RowVector(std::span<const double> values);
  // Contents unspecified; for outputs that are fully overwritten.
  static Matrix Uninitialized(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }
  bool SameShape(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_;
  }

  double& operator()(int r, int c) {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }
  double operator()(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }
  double* row(int r) { return data_.data() + static_cast<std::size_t>(r) * cols_; }
  const double* row(int r) const {
    return data_.data() + static_cast<std::size_t>(r) * cols_;
  }
  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  void Fill(double v);
  // Reinterprets the storage; rows * cols must stay the same.
  void Reshape(int rows, int cols);

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double, DefaultInitAllocator<double>> data_;
};

// A trainable tensor that outlives tapes. Backward() adds into `grad`.
struct Parameter {
  Matrix value;
  Matrix grad;

  Parameter() = default;
  explicit Parameter(Matrix v);
  void ZeroGrad() { grad.Fill(0.0); }
};

class Tape;

// Handle to a tape entry. Cheap to copy; valid while its tape lives.
class Var {
 public:
  Var() = default;

  const Matrix& value() const;
  // Gradient after Tape::Backward; an empty matrix if none reached it.
  const Matrix& grad() const;
  int rows() const { return value().rows(); }
  int cols() const { return value().cols(); }
  bool requires_grad() const;
  Tape* tape() const { return tape_; }
  std::size_t id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

// Integer column map for GatherCols/ScatterCols. Either one row shared by
// every input row or one row per input row. Entries of -1 produce zeros.
struct IndexMap {
  int rows = 1;
  int cols = 0;
  std::vector<int> index;

  int at(int r, int c) const {
    return index[static_cast<std::size_t>(rows == 1 ? 0 : r) * cols + c];
  }
};

// Single-owner, single-use recording of a computation. Not thread-safe.
class Tape {
 public:
  using BackwardFn = std::function<void(Tape& tape, const Matrix& out_grad)>;

  Tape();
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var Constant(Matrix value);
  // A leaf whose gradient is kept on the tape (read it with Var::grad).
  Var Variable(Matrix value);
  // A leaf bound to `p`; Backward() adds its gradient into p.grad. Binding
  // the same parameter twice returns the same Var. The tape reads p.value
  // in place, so it must not change while the tape is alive.
  Var Param(Parameter& p);

  // Seeds d(loss)/d(loss) = 1 and propagates. `loss` must be 1x1 and belong
  // to this tape. Call at most once per tape.
  void Backward(Var loss);

  std::size_t size() const { return nodes_.size(); }

  // For op implementations.
  Var Record(Matrix value, std::initializer_list<Var> inputs, BackwardFn fn);
  const Matrix& ValueOf(std::size_t id) const {
    const Node& n = nodes_[id];
    return n.param != nullptr ? n.param->value : n.value;
  }
  const Matrix& GradOf(std::size_t id) const { return nodes_[id].grad; }
  bool RequiresGrad(std::size_t id) const { return nodes_[id].requires_grad; }
  // Zero-initialized on first use.
  Matrix& MutableGrad(Var v);

 private:
  struct Node {
    Matrix value;  // unused for parameter leaves, which read param->value
    Matrix grad;
    bool requires_grad = false;
    Parameter* param = nullptr;
    BackwardFn backward;
  };
  Var Push(Node node);

  std::vector<Node> nodes_;
  std::unordered_map<const Parameter*, std::size_t> param_ids_;
  bool backward_done_ = false;
};

// ---- Linear algebra ----
Var MatMul(Var a, Var b);    // a[m x k] * b[k x n]
Var MatMulBT(Var a, Var b);  // a[m x k] * b[n x k]^T
// x[r x c] + b[1 x c] on every row.
Var AddRowVector(Var x, Var b);

// ---- Elementwise ----
Var Add(Var a, Var b);
Var Sub(Var a, Var b);
Var Mul(Var a, Var b);
Var Scale(Var x, double s);
Var AddScalar(Var x, double s);
Var Neg(Var x);
Var Square(Var x);
// Derivative 1/(2 sqrt(x)) for x > 0 and 0 at x == 0.
Var Sqrt(Var x);
Var Tanh(Var x);
Var Sigmoid(Var x);
// Derivative 1 for x > 0, else 0 (so relu'(0) = 0).
Var Relu(Var x);
// Indicator x > 0 as a constant; the derivative of Relu.
Var Step(Var x);
// x[r x c] * s[r x 1] per row.
Var MulColumn(Var x, Var s);

// ---- Reductions ----
Var Sum(Var x);     // -> 1x1
Var Mean(Var x);    // -> 1x1
Var RowSum(Var x);  // -> r x 1

// ---- Shape ----
Var Reshape(Var x, int rows, int cols);
Var ConcatCols(std::initializer_list<Var> parts);
Var SliceCols(Var x, int begin, int end);
// (b*g) x c -> b x c, mean over consecutive groups of g rows.
Var GroupMeanRows(Var x, int group);
// b x c -> (b*g) x c, each row repeated g times.
Var RepeatRows(Var x, int group);
// out[r][c] = x[r][index(r, c)] (0 for -1). Output has index.cols columns.
Var GatherCols(Var x, const IndexMap& index);
// Adjoint of GatherCols: out[r][index(r, c)] += y[r][c]; out has `cols`
// columns.
Var ScatterCols(Var y, const IndexMap& index, int cols);
// x[b x n] -> b x (n*n) with out[b][i*n + j] = x[b][i] * x[b][j].
Var OuterRows(Var x);
// Forward value `hard`, gradient passed unchanged to `soft`.
Var StraightThrough(Matrix hard, Var soft);

}  // namespace lcgraph::ad

#endif  // LCGRAPH_AUTODIFF_H_
