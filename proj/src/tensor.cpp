#include "statlab/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "statlab/error.hpp"

namespace statlab {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Syntax: return "Syntax";
    case ErrorCode::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorCode::CoordinateOutOfRange: return "CoordinateOutOfRange";
    case ErrorCode::Domain: return "Domain";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::DegeneratePlane: return "DegeneratePlane";
    case ErrorCode::StepOutsideDomain: return "StepOutsideDomain";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::NotTraceFree: return "NotTraceFree";
    case ErrorCode::NotUnit: return "NotUnit";
    case ErrorCode::InvalidSample: return "InvalidSample";
    case ErrorCode::InvalidCoefficients: return "InvalidCoefficients";
    case ErrorCode::InvalidPinch: return "InvalidPinch";
    case ErrorCode::PositiveH3: return "PositiveH3";
    case ErrorCode::PositiveN: return "PositiveN";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::SpecFile: return "SpecFile";
  }
  return "Unknown";
}

namespace {

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

void require_same_shape(const TensorValue& a, const TensorValue& b) {
  if (a.dim() != b.dim() || a.rank() != b.rank()) {
    throw std::invalid_argument("tensor shapes differ");
  }
}

// out(..., a, ...) = sum_b m[a * n + b] * t(..., b, ...) on index `slot`.
TensorValue apply_to_slot(const TensorValue& t, std::size_t slot, std::span<const double> m,
                          Variance result_variance) {
  const std::size_t n = t.dim();
  auto variance = t.variance();
  variance[slot] = result_variance;
  TensorValue out(n, std::move(variance));
  const std::size_t inner = ipow(n, t.rank() - slot - 1);
  const std::size_t outer = ipow(n, slot);
  const auto src = t.components();
  auto dst = out.components();
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t a = 0; a < n; ++a) {
      double* drow = dst.data() + (o * n + a) * inner;
      for (std::size_t b = 0; b < n; ++b) {
        const double w = m[a * n + b];
        if (w == 0.0) continue;
        const double* srow = src.data() + (o * n + b) * inner;
        for (std::size_t r = 0; r < inner; ++r) drow[r] += w * srow[r];
      }
    }
  }
  return out;
}

}  // namespace

TensorValue::TensorValue(std::size_t dim, std::vector<Variance> variance,
                         std::vector<IndexSymmetry> symmetries)
    : dim_(dim),
      variance_(std::move(variance)),
      symmetries_(std::move(symmetries)),
      data_(ipow(dim, variance_.size()), 0.0) {}

TensorValue TensorValue::covariant(std::size_t dim, std::size_t rank,
                                   std::vector<IndexSymmetry> symmetries) {
  return TensorValue(dim, std::vector<Variance>(rank, Variance::Down), std::move(symmetries));
}

double& TensorValue::at(std::span<const std::size_t> idx) noexcept {
  std::size_t off = 0;
  for (const auto i : idx) off = off * dim_ + i;
  return data_[off];
}

double TensorValue::at(std::span<const std::size_t> idx) const noexcept {
  std::size_t off = 0;
  for (const auto i : idx) off = off * dim_ + i;
  return data_[off];
}

double TensorValue::max_abs() const noexcept {
  double m = 0.0;
  for (const double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double TensorValue::symmetry_residual() const {
  double worst = 0.0;
  std::vector<std::size_t> swapped(rank());
  for_each_index([&](std::span<const std::size_t> idx) {
    for (const auto& s : symmetries_) {
      std::copy(idx.begin(), idx.end(), swapped.begin());
      std::swap(swapped[s.first], swapped[s.second]);
      const double a = at(idx);
      const double b = at(swapped);
      worst = std::max(worst, std::abs(s.antisymmetric ? a + b : a - b));
    }
  });
  return worst;
}

TensorValue& TensorValue::operator+=(const TensorValue& other) {
  require_same_shape(*this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

TensorValue& TensorValue::operator-=(const TensorValue& other) {
  require_same_shape(*this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

TensorValue& TensorValue::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

TensorValue operator+(TensorValue a, const TensorValue& b) { return a += b; }
TensorValue operator-(TensorValue a, const TensorValue& b) { return a -= b; }
TensorValue operator*(double s, TensorValue a) { return a *= s; }

double max_abs_diff(const TensorValue& a, const TensorValue& b) {
  require_same_shape(a, b);
  const auto x = a.components();
  const auto y = b.components();
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

std::vector<double> to_matrix(const TensorValue& t) {
  if (t.rank() != 2) throw std::invalid_argument("to_matrix expects a rank-2 tensor");
  return {t.components().begin(), t.components().end()};
}

TensorValue transform_covariant(const TensorValue& t, std::span<const double> frame) {
  const std::size_t n = t.dim();
  std::vector<double> transposed(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < n; ++a) transposed[a * n + i] = frame[i * n + a];
  }
  TensorValue out = t;
  for (std::size_t slot = 0; slot < t.rank(); ++slot) {
    if (t.variance()[slot] != Variance::Down) {
      throw std::invalid_argument("transform_covariant expects covariant indices");
    }
    out = apply_to_slot(out, slot, transposed, Variance::Down);
  }
  return out;
}

TensorValue lower_last(const TensorValue& t, const TensorValue& g) {
  const std::size_t slot = t.rank() - 1;
  return apply_to_slot(t, slot, g.components(), Variance::Down);
}

TensorValue raise_last(const TensorValue& t, const TensorValue& g_inv) {
  const std::size_t slot = t.rank() - 1;
  return apply_to_slot(t, slot, g_inv.components(), Variance::Up);
}

double metric_inner(const TensorValue& s, const TensorValue& t, const TensorValue& g_inv) {
  require_same_shape(s, t);
  TensorValue raised = t;
  for (std::size_t slot = 0; slot < t.rank(); ++slot) {
    raised = apply_to_slot(raised, slot, g_inv.components(), Variance::Up);
  }
  const auto x = s.components();
  const auto y = raised.components();
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += x[i] * y[i];
  return sum;
}

}  // namespace statlab
