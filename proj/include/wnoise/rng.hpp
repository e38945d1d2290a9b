#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string>

namespace wnoise {

/// Names one independent random stream inside an experiment.
struct StreamLabel {
  std::string experiment;
  std::uint64_t trial = 0;
  std::string purpose;
  std::uint64_t index = 0;

  bool operator==(const StreamLabel&) const = default;
};

/// Philox4x32-10 counter-based generator.
///
/// The 64-bit master seed is the cipher key and the hashed stream label fills the
/// upper half of the counter, so distinct labels give non-overlapping streams and a
/// stream's output never depends on which other streams were drawn first, or on
/// which thread drew them.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t key, std::uint64_t stream_id) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }
  result_type operator()() noexcept { return next_u64(); }

  std::uint64_t next_u64() noexcept;
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform on (0, 1).
  double uniform_open() noexcept;
  /// Standard normal via Box-Muller.
  double normal() noexcept;
  /// Uniform integer on [0, bound), unbiased. bound must be positive.
  std::uint64_t below(std::uint64_t bound) noexcept;

 private:
  void refill() noexcept;

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int available_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// (master seed, stream label): everything needed to reproduce one random stream.
struct SeedContext {
  std::uint64_t master_seed = 0;
  StreamLabel label;

  [[nodiscard]] RandomStream stream() const noexcept;
  [[nodiscard]] SeedContext with_purpose(std::string purpose, std::uint64_t index = 0) const;
  [[nodiscard]] SeedContext with_trial(std::uint64_t trial) const;
};

/// Stable 64-bit hash of a label (FNV-1a over the fields, then a splitmix finaliser).
std::uint64_t hash_label(const StreamLabel& label) noexcept;

}  // namespace wnoise
