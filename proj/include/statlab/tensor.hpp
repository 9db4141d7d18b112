#pragma once

// Dense tensor components at a point. Dimensions are small (2..6 in
// practice), so every tensor is a flat row-major array of n^rank doubles.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace statlab {

enum class Variance : std::uint8_t { Down, Up };

/// Declared symmetry between two index slots.
struct IndexSymmetry {
  std::size_t first = 0;
  std::size_t second = 0;
  bool antisymmetric = false;
};

class TensorValue {
 public:
  TensorValue() = default;
  TensorValue(std::size_t dim, std::vector<Variance> variance,
              std::vector<IndexSymmetry> symmetries = {});

  /// All-covariant tensor of the given rank.
  static TensorValue covariant(std::size_t dim, std::size_t rank,
                               std::vector<IndexSymmetry> symmetries = {});

  std::size_t dim() const noexcept { return dim_; }
  std::size_t rank() const noexcept { return variance_.size(); }
  std::size_t size() const noexcept { return data_.size(); }
  const std::vector<Variance>& variance() const noexcept { return variance_; }
  const std::vector<IndexSymmetry>& symmetries() const noexcept { return symmetries_; }

  template <class... I>
  double& operator()(I... idx) noexcept {
    return data_[offset(idx...)];
  }
  template <class... I>
  double operator()(I... idx) const noexcept {
    return data_[offset(idx...)];
  }

  double& at(std::span<const std::size_t> idx) noexcept;
  double at(std::span<const std::size_t> idx) const noexcept;

  std::span<double> components() noexcept { return data_; }
  std::span<const double> components() const noexcept { return data_; }

  double max_abs() const noexcept;
  /// Largest violation of the declared symmetries.
  double symmetry_residual() const;

  TensorValue& operator+=(const TensorValue& other);
  TensorValue& operator-=(const TensorValue& other);
  TensorValue& operator*=(double s);

  /// Calls fn(index) for every multi-index in row-major order.
  template <class Fn>
  void for_each_index(Fn&& fn) const {
    std::vector<std::size_t> idx(rank(), 0);
    for (std::size_t flat = 0; flat < data_.size(); ++flat) {
      fn(std::span<const std::size_t>(idx));
      for (std::size_t r = rank(); r-- > 0;) {
        if (++idx[r] < dim_) break;
        idx[r] = 0;
      }
    }
  }

 private:
  template <class... I>
  std::size_t offset(I... idx) const noexcept {
    std::size_t off = 0;
    ((off = off * dim_ + static_cast<std::size_t>(idx)), ...);
    return off;
  }

  std::size_t dim_ = 0;
  std::vector<Variance> variance_;
  std::vector<IndexSymmetry> symmetries_;
  std::vector<double> data_;
};

TensorValue operator+(TensorValue a, const TensorValue& b);
TensorValue operator-(TensorValue a, const TensorValue& b);
TensorValue operator*(double s, TensorValue a);

/// max_i |a_i - b_i| over components of equally shaped tensors.
double max_abs_diff(const TensorValue& a, const TensorValue& b);

/// Square matrix view of a rank-2 tensor, row-major.
std::vector<double> to_matrix(const TensorValue& t);

/// Components in a new basis whose vectors are the columns of `frame`
/// (row-major n x n, frame[i * n + a] = coordinate i of basis vector a).
/// Every index must be covariant.
TensorValue transform_covariant(const TensorValue& t, std::span<const double> frame);

/// Lowers the last (contravariant) slot with g.
TensorValue lower_last(const TensorValue& t, const TensorValue& g);

/// Raises the last (covariant) slot with g_inv.
TensorValue raise_last(const TensorValue& t, const TensorValue& g_inv);

/// Full contraction g(s, t) of two all-covariant tensors of equal rank.
double metric_inner(const TensorValue& s, const TensorValue& t, const TensorValue& g_inv);

}  // namespace statlab
