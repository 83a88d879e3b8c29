#pragma once

// 2-Opt laboratory for Lp TSP instances: exact lower-bound gadget families
// with machine-checked improving-move scripts, seeded probabilistic input
// models, a trace-recording 2-Opt engine, and exact analysis oracles.

#include "tsplab/core.hpp"
#include "tsplab/rng.hpp"
#include "tsplab/tour.hpp"
#include "tsplab/engine.hpp"
#include "tsplab/heuristics.hpp"
#include "tsplab/random_models.hpp"
#include "tsplab/gadgets.hpp"
#include "tsplab/analysis.hpp"
#include "tsplab/io.hpp"
#include "tsplab/experiment.hpp"
