#pragma once

#include "baselines.hpp"
#include "error.hpp"
#include "graph.hpp"
#include "harness.hpp"
#include "iqp.hpp"
#include "rng.hpp"
#include "side_info.hpp"
#include "solvers.hpp"
