#include "nomacomp/rng.hpp"

namespace nomacomp {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t RandomStreams::derive(std::uint64_t seed, std::string_view name) {
    return splitmix64(splitmix64(seed) ^ fnv1a(name));
}

RandomStreams::RandomStreams(std::uint64_t seed)
    : topology_(derive(seed, "topology")),
      shadowing_(derive(seed, "shadowing")),
      fading_(derive(seed, "fading")),
      scheduling_(derive(seed, "scheduling")),
      greedy_(derive(seed, "greedy")) {}

std::uint64_t RandomStreams::shared_digest() const {
    std::uint64_t h = topology_.digest();
    h = splitmix64(h ^ shadowing_.digest());
    h = splitmix64(h ^ fading_.digest());
    h = splitmix64(h ^ scheduling_.digest());
    return h;
}

}  // namespace nomacomp
