#pragma once

// Umbrella header for the EaDE library: an adaptive differential-evolution
// optimizer that splits search into explicit exploitation and exploration
// strategies, plus the benchmark and experiment harness around it.

#include "eade/bench.hpp"
#include "eade/core.hpp"
#include "eade/engines.hpp"
#include "eade/experiment.hpp"
#include "eade/harness.hpp"
#include "eade/rng.hpp"
#include "eade/scheduler.hpp"
#include "eade/stats.hpp"
