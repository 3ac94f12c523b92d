#pragma once

#include "pdmp/model.hpp"

namespace pdmp {

// Unit-speed drift on E = (0, 1) with constant jump rate `rate` (0 allowed),
// exit at 1, and post-jump locations uniform on (0, 1). G(x, t) = exp(-rate t)
// and t*(x) = 1 - x, so every quantity has a closed form. Metadata: envelope
// M = rate, density lower bound m = 1, sup t* = 1.
ModelSpec build_drift_model(double rate);

}  // namespace pdmp
