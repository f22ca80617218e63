#include "ots/schedule.hpp"

namespace ots {

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  // splitmix64 finaliser folded into a running hash
  v += 0x9e3779b97f4a7c15ULL;
  v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ULL;
  v = (v ^ (v >> 27)) * 0x94d049bb133111ebULL;
  v ^= v >> 31;
  return (h ^ v) * 0x100000001b3ULL + 0x7f4a7c15ULL;
}

std::uint64_t fold(std::uint64_t h, int tag, const Assignment& a, int extra = 0) {
  h = mix(h, static_cast<std::uint64_t>(tag));
  h = mix(h, static_cast<std::uint32_t>(a.entity));
  h = mix(h, static_cast<std::uint32_t>(a.room));
  h = mix(h, static_cast<std::uint32_t>(a.block));
  return mix(h, static_cast<std::uint32_t>(extra));
}

}  // namespace

std::uint64_t Schedule::content_hash() const {
  // Sets are ordered, so iteration order is canonical.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& a : specialty_assign) h = fold(h, 1, a);
  for (const auto& a : surgeon_assign) h = fold(h, 2, a);
  for (const auto& a : patient_assign) h = fold(h, 3, a);
  for (const auto& [a, n] : nonelective_reserve) h = fold(h, 4, a, n);
  return h;
}

}  // namespace ots
