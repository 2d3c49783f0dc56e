#pragma once

// Umbrella header.

#include "qrobust/config.hpp"
#include "qrobust/csv.hpp"
#include "qrobust/dataset.hpp"
#include "qrobust/errors.hpp"
#include "qrobust/gradients.hpp"
#include "qrobust/harness.hpp"
#include "qrobust/lipschitz.hpp"
#include "qrobust/model.hpp"
#include "qrobust/model_io.hpp"
#include "qrobust/rng.hpp"
#include "qrobust/statevector.hpp"
#include "qrobust/training.hpp"

#include <string_view>

namespace qrobust {

inline constexpr std::string_view kVersion = "0.1.0";

} // namespace qrobust
