#pragma once

#include "enaqt/analysis.hpp"
#include "enaqt/csv.hpp"
#include "enaqt/dynamics.hpp"
#include "enaqt/ensemble.hpp"
#include "enaqt/graph.hpp"
#include "enaqt/integrator.hpp"
#include "enaqt/model.hpp"
#include "enaqt/sweep_config.hpp"
#include "enaqt/types.hpp"
