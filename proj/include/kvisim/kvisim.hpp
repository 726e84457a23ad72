#pragma once

// Umbrella header for the kvisim library: deployment evaluation of
// communication/positioning KPIs, KVI-induced KPI planning, beam-spoofing
// simulation, and bistatic sensing geometry.

#include "kvisim/version.hpp"
#include "kvisim/constants.hpp"
#include "kvisim/geometry.hpp"
#include "kvisim/rng.hpp"
#include "kvisim/scenario.hpp"
#include "kvisim/propagation.hpp"
#include "kvisim/fim.hpp"
#include "kvisim/kpi.hpp"
#include "kvisim/planner.hpp"
#include "kvisim/beams.hpp"
#include "kvisim/bistatic.hpp"
#include "kvisim/csv.hpp"
#include "kvisim/parallel.hpp"
