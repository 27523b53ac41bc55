#include "rng.hpp"

namespace spcecon {

std::uint64_t derive_seed(std::uint64_t master, std::string_view tag) {
  // FNV-1a over the tag, then splitmix to decorrelate from the master.
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  std::uint64_t st = master ^ h;
  splitmix64(st);
  return splitmix64(st);
}

}  // namespace spcecon
