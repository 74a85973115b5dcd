#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <string_view>

namespace nomacomp {

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a(std::string_view bytes);

/// 64-bit Mersenne Twister that folds every output into a running digest, so
/// two runs can prove they consumed identical random streams.
class TracedEngine {
  public:
    using result_type = std::uint64_t;

    TracedEngine() = default;
    explicit TracedEngine(std::uint64_t seed) : engine_(seed) {}

    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }

    result_type operator()() {
        const result_type x = engine_();
        digest_ = splitmix64(digest_ ^ x);
        ++draws_;
        return x;
    }

    std::uint64_t digest() const { return digest_; }
    std::uint64_t draws() const { return draws_; }

  private:
    std::mt19937_64 engine_{};
    std::uint64_t digest_ = 0x6a09e667f3bcc908ULL;
    std::uint64_t draws_ = 0;
};

/// Independent named sub-streams derived from one run seed. Streams shared by
/// every clustering scheme are kept apart from scheme-specific ones, so
/// swapping the scheme never shifts topology, fading or scheduling draws.
class RandomStreams {
  public:
    explicit RandomStreams(std::uint64_t seed);

    TracedEngine& topology() { return topology_; }
    TracedEngine& shadowing() { return shadowing_; }
    TracedEngine& fading() { return fading_; }
    TracedEngine& scheduling() { return scheduling_; }
    TracedEngine& greedy() { return greedy_; }

    /// Digest over the four shared streams.
    std::uint64_t shared_digest() const;

    static std::uint64_t derive(std::uint64_t seed, std::string_view name);

  private:
    TracedEngine topology_;
    TracedEngine shadowing_;
    TracedEngine fading_;
    TracedEngine scheduling_;
    TracedEngine greedy_;
};

}  // namespace nomacomp
