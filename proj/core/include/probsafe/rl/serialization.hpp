#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "probsafe/rl/policy.hpp"

namespace probsafe::rl {

class PolicyFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Binary layout, little endian:
///   8 bytes  magic "PSAFEPOL"
///   u32      version (1)
///   u32      policy layer count P
///   u32      value layer count V
///   u32      tensor count T = 2P + 1 + 2V
///   T x (u32 rows, u32 cols)
///   f64 data of each tensor in order, row major
/// Tensor order: policy (W, b) per layer, log_std (n x 1), value (W, b).
std::string encode_policy(const PolicyParams& params);
PolicyParams decode_policy(const std::string& bytes);

void save_policy(const PolicyParams& params, const std::filesystem::path& path);
PolicyParams load_policy(const std::filesystem::path& path);

/// `<path>.json` next to the binary file.
std::filesystem::path sidecar_path(const std::filesystem::path& policy_path);

}  // namespace probsafe::rl
