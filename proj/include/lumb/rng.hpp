#ifndef LUMB_RNG_HPP
#define LUMB_RNG_HPP

#include <cstdint>
#include <random>

namespace lumb {

using Rng = std::mt19937_64;

// Independent sub-streams of one experiment seed.
enum class Stream : std::uint32_t {
  kInstance = 1,
  kEnvironment = 2,
  kAgent = 3,
};

// Derives a per-run seed from (master, run index, stream). Depends only on its
// arguments, so dropping one run never perturbs another.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    static_cast<std::uint32_t>(stream)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

inline Rng make_rng(std::uint64_t master, std::uint64_t index, Stream stream) {
  return Rng(derive_seed(master, index, stream));
}

}  // namespace lumb

#endif  // LUMB_RNG_HPP
