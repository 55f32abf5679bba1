#pragma once

#include "circuitflow/csv.hpp"
#include "circuitflow/errors.hpp"
#include "circuitflow/experiments.hpp"
#include "circuitflow/generators.hpp"
#include "circuitflow/graph.hpp"
#include "circuitflow/influence.hpp"
#include "circuitflow/parallel.hpp"
#include "circuitflow/propagation.hpp"
#include "circuitflow/selection.hpp"
#include "circuitflow/solver.hpp"
#include "circuitflow/transmission.hpp"
#include "circuitflow/types.hpp"
