#pragma once

// Umbrella header.

#include "bayes_agora/ball_engine.hpp"
#include "bayes_agora/config.hpp"
#include "bayes_agora/error.hpp"
#include "bayes_agora/exact_engine.hpp"
#include "bayes_agora/graph.hpp"
#include "bayes_agora/harness.hpp"
#include "bayes_agora/invariants.hpp"
#include "bayes_agora/io.hpp"
#include "bayes_agora/parallel.hpp"
#include "bayes_agora/rational.hpp"
#include "bayes_agora/rng.hpp"
#include "bayes_agora/run_analysis.hpp"
#include "bayes_agora/signal_model.hpp"
#include "bayes_agora/stats.hpp"
#include "bayes_agora/tiebreak.hpp"
#include "bayes_agora/topology.hpp"
