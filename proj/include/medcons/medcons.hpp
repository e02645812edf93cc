#pragma once

#include "medcons/baselines.hpp"
#include "medcons/consensus.hpp"
#include "medcons/error.hpp"
#include "medcons/graph.hpp"
#include "medcons/grouping.hpp"
#include "medcons/metrics.hpp"
#include "medcons/parallel.hpp"
#include "medcons/partition.hpp"
#include "medcons/synth.hpp"
