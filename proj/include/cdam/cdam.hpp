#pragma once

#include "automaton.hpp"
#include "datasets.hpp"
#include "dynamics.hpp"
#include "error.hpp"
#include "experiments.hpp"
#include "graph.hpp"
#include "ingest.hpp"
#include "named_graphs.hpp"
#include "patterns.hpp"
#include "report.hpp"
#include "rng.hpp"
#include "stats.hpp"
#include "surrogates.hpp"
