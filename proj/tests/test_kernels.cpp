#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstring>
#include <random>
#include <vector>

#include "statlab/kernels.hpp"

using namespace statlab;

namespace {

struct CrucialInput {
  std::size_t n, count;
  std::vector<double> lambda, k;
};

CrucialInput random_crucial(std::size_t n, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  CrucialInput in{n, count, std::vector<double>(n * count), std::vector<double>(n * (n - 1) / 2 * count)};
  for (auto& x : in.lambda) x = normal(rng);
  for (auto& x : in.k) x = normal(rng);
  return in;
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

struct IsaGuard {
  ~IsaGuard() { kernels::force_isa(std::nullopt); }
};

}  // namespace

TEST_CASE("crucial kernel matches the pairwise sum") {
  IsaGuard guard;
  for (std::size_t n = 2; n <= 6; ++n) {
    const auto in = random_crucial(n, 37, n);
    std::vector<double> lhs(in.count), psi(in.count);
    kernels::crucial_batch(n, in.count, in.lambda.data(), in.k.data(), lhs.data(), psi.data());
    for (std::size_t s = 0; s < in.count; ++s) {
      double want = 0.0, want_psi = 0.0;
      std::size_t pair = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const double li = in.lambda[i * in.count + s];
        want_psi += li * li;
        for (std::size_t j = i + 1; j < n; ++j, ++pair) {
          const double lj = in.lambda[j * in.count + s];
          want += ((lj - li) * (lj - li) - 2 * li * lj) * in.k[pair * in.count + s];
        }
      }
      CHECK(lhs[s] == doctest::Approx(want).epsilon(1e-13));
      CHECK(psi[s] == doctest::Approx(want_psi).epsilon(1e-14));
    }
  }
}

TEST_CASE("bivector kernel matches the quadratic form") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal;
  for (std::size_t m : {1u, 3u, 6u, 10u}) {
    const std::size_t count = 29;
    std::vector<double> q(m * m), b(m * count), out(count);
    for (auto& x : q) x = normal(rng);
    for (auto& x : b) x = normal(rng);
    kernels::bivector_form_batch(m, q.data(), count, b.data(), out.data());
    for (std::size_t s = 0; s < count; ++s) {
      double want = 0.0;
      for (std::size_t p = 0; p < m; ++p)
        for (std::size_t r = 0; r < m; ++r) want -= q[p * m + r] * b[p * count + s] * b[r * count + s];
      CHECK(out[s] == doctest::Approx(want).epsilon(1e-13));
    }
  }
}

TEST_CASE("scalar and AVX2 variants are bit-identical") {
  IsaGuard guard;
  if (!kernels::avx2_available()) {
    kernels::force_isa(kernels::Isa::Avx2);
    CHECK(kernels::active_isa() == kernels::Isa::Scalar);
    MESSAGE("AVX2 variant unavailable on this machine; only the fallback was checked");
    return;
  }
  for (std::size_t n = 2; n <= 7; ++n) {
    for (std::size_t count : {1u, 3u, 4u, 5u, 1003u}) {
      const auto in = random_crucial(n, count, 100 * n + count);
      std::vector<double> l1(count), p1(count), l2(count), p2(count);
      kernels::force_isa(kernels::Isa::Scalar);
      CHECK(kernels::active_isa() == kernels::Isa::Scalar);
      kernels::crucial_batch(n, count, in.lambda.data(), in.k.data(), l1.data(), p1.data());
      kernels::force_isa(kernels::Isa::Avx2);
      CHECK(kernels::active_isa() == kernels::Isa::Avx2);
      kernels::crucial_batch(n, count, in.lambda.data(), in.k.data(), l2.data(), p2.data());
      CHECK(bit_equal(l1, l2));
      CHECK(bit_equal(p1, p2));
    }
  }
  std::mt19937_64 rng(9);
  std::normal_distribution<double> normal;
  for (std::size_t m : {1u, 3u, 6u, 10u, 15u}) {
    const std::size_t count = 1001;
    std::vector<double> q(m * m), b(m * count), o1(count), o2(count);
    for (auto& x : q) x = normal(rng);
    for (auto& x : b) x = normal(rng);
    kernels::force_isa(kernels::Isa::Scalar);
    kernels::bivector_form_batch(m, q.data(), count, b.data(), o1.data());
    kernels::force_isa(kernels::Isa::Avx2);
    kernels::bivector_form_batch(m, q.data(), count, b.data(), o2.data());
    CHECK(bit_equal(o1, o2));
  }
}

TEST_CASE("isa names") {
  CHECK(std::string(kernels::to_string(kernels::Isa::Scalar)) == "scalar");
  CHECK(std::string(kernels::to_string(kernels::Isa::Avx2)) == "avx2");
}
