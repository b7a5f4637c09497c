#pragma once

#include "probsafe/evasion/types.hpp"

namespace probsafe::evasion {

/// Black-box state feedback u: joint state -> control. Implementations are
/// immutable after construction and may be shared between threads.
class Controller {
 public:
  virtual ~Controller() = default;
  virtual Control operator()(const JointState& state) const = 0;
};

}  // namespace probsafe::evasion
