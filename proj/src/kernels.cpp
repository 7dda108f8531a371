#include "liespec/kernels.hpp"

#include "liespec/errors.hpp"

namespace liespec::kernels {

namespace {

Lane detect_lane() {
#if defined(__x86_64__) || defined(_M_X64)
  if (detail::avx2_available()) return Lane::avx2;
#endif
#if defined(__aarch64__)
  return Lane::neon;
#endif
  return Lane::scalar;
}

Lane& active_lane_ref() {
  static Lane lane = detect_lane();
  return lane;
}

}  // namespace

const char* lane_name(Lane lane) {
  switch (lane) {
    case Lane::scalar: return "scalar";
    case Lane::avx2: return "avx2";
    case Lane::neon: return "neon";
  }
  return "unknown";
}

Lane lane_from_name(const std::string& name) {
  if (name == "scalar") return Lane::scalar;
  if (name == "avx2") return Lane::avx2;
  if (name == "neon") return Lane::neon;
  throw input_error("unknown kernel lane '" + name +
                    "' (expected scalar, avx2 or neon)");
}

std::vector<Lane> supported_lanes() {
  std::vector<Lane> lanes{Lane::scalar};
#if defined(__x86_64__) || defined(_M_X64)
  if (detail::avx2_available()) lanes.push_back(Lane::avx2);
#endif
#if defined(__aarch64__)
  lanes.push_back(Lane::neon);
#endif
  return lanes;
}

Lane active_lane() { return active_lane_ref(); }

void set_lane(Lane lane) {
  for (Lane supported : supported_lanes()) {
    if (supported == lane) {
      active_lane_ref() = lane;
      return;
    }
  }
  throw input_error(std::string("kernel lane '") + lane_name(lane) +
                    "' is not supported on this host");
}

const Ops& ops_for(Lane lane) {
  switch (lane) {
#if defined(__x86_64__) || defined(_M_X64)
    case Lane::avx2: return detail::avx2_ops;
#endif
#if defined(__aarch64__)
    case Lane::neon: return detail::neon_ops;
#endif
    default: return detail::scalar_ops;
  }
}

const Ops& ops() { return ops_for(active_lane()); }

}  // namespace liespec::kernels
