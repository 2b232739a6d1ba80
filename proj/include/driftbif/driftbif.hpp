// Umbrella header.

#pragma once

#include "driftbif/bessel.hpp"
#include "driftbif/config.hpp"
#include "driftbif/continuation.hpp"
#include "driftbif/cosine_series.hpp"
#include "driftbif/explicit_solution.hpp"
#include "driftbif/kernel_analysis.hpp"
#include "driftbif/kernel_spectrum.hpp"
#include "driftbif/linalg.hpp"
#include "driftbif/version.hpp"
