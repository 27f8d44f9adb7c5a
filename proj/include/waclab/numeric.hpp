#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace waclab {

using cplx = std::complex<double>;

// Counter-based RNG: value at (seed, counter) is a pure function of both,
// so any draw can be reproduced without replaying the stream.
struct CounterRng {
  std::uint64_t seed = 0;
  std::uint64_t counter = 0;

  explicit CounterRng(std::uint64_t s) : seed(s) {}

  // splitmix64 finalizer applied to seed + GAMMA*(counter+1).
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t counter);

  std::uint64_t next_u64() { return mix(seed, counter++); }
  // uniform on [0,1) with 53 mantissa bits
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  // stateless Box-Muller pair; consumes two counters per call
  double normal();
  cplx cnormal() { return {normal(), normal()}; }
  double sign() { return uniform() < 0.5 ? -1.0 : 1.0; }
  std::uint64_t index(std::uint64_t n) { return next_u64() % n; }
};

// Fixed-tree pairwise summation; blocks of <= 64 are summed serially, so the
// result is independent of thread count and identical run to run.
template <class T>
T pairwise_sum(const T* v, std::size_t n) {
  if (n <= 64) {
    T acc = n ? v[0] : T{};
    for (std::size_t i = 1; i < n; ++i) acc += v[i];
    return acc;
  }
  std::size_t h = n / 2;
  T left = pairwise_sum(v, h);
  left += pairwise_sum(v + h, n - h);
  return left;
}
template <class T>
T pairwise_sum(const std::vector<T>& v) {
  return pairwise_sum(v.data(), v.size());
}

// Runs fn(i) for i in [0,n). Each i owns its own output slot, so results are
// bitwise independent of the thread count (WACLAB_THREADS, default 1 core).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);
unsigned thread_count();

// Gauss-Legendre nodes/weights on [-1,1]; Newton iteration on P_n.
struct Quadrature {
  std::vector<double> x, w;
};
Quadrature gauss_legendre(int n);
// affine map of gauss_legendre(n) to [a,b]
Quadrature gauss_legendre(int n, double a, double b);

std::vector<double> linspace(double a, double b, int n);
// n points 10^a .. 10^b, log-uniform
std::vector<double> logspace(double a, double b, int n);

// FNV-1a over raw bytes; doubles hashed over their little-endian IEEE bytes.
std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h = 0xcbf29ce484222325ull);
std::uint64_t hash_doubles(const double* v, std::size_t n, std::uint64_t h = 0xcbf29ce484222325ull);

// shortest round-trip decimal form (report text must not depend on locale)
std::string format_double(double v);

}  // namespace waclab
