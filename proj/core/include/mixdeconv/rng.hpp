#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace mixdeconv {

/// Philox4x32-10 counter-based generator. A (seed, stream) pair fully
/// determines the output sequence, which is the reproducibility contract
/// for every sampler and simulator in this project.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    std::uint32_t next_u32();
    std::uint64_t next_u64();

    /// Uniform on the open interval (0, 1).
    double uniform01();
    /// Uniform integer in [0, n).
    std::uint64_t uniform_below(std::uint64_t n);
    /// Standard normal (Box-Muller, cached spare).
    double normal();
    double gamma(double shape);
    std::vector<double> dirichlet(std::span<const double> alpha);
    /// Index draw with probabilities proportional to `weights` (>= 0).
    std::size_t categorical(std::span<const double> weights);

  private:
    void refill();

    std::uint64_t seed_ = 0;
    std::uint64_t stream_ = 0;
    std::array<std::uint32_t, 4> counter_{};
    std::array<std::uint32_t, 4> block_{};
    int block_pos_ = 4;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace mixdeconv
