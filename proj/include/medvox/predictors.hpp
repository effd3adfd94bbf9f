#pragma once

#include <string>

#include "medvox/inference.hpp"

namespace medvox {

// "identity" | "threshold:<t>" | "blur-threshold:<sigma>,<t>". Thresholds map
// x >= t to 1 and everything else to 0. Throws ConfigError on a bad spec.
BatchPredictor make_stub_predictor(const std::string &spec);

// Separable Gaussian blur per channel, kernel radius ceil(3 sigma), edge-clamped.
MetaVolume gaussian_blur(const MetaVolume &v, double sigma);

} // namespace medvox
