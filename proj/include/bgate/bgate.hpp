// Umbrella header.
#pragma once

#include "bgate/simgrid.hpp"
#include "bgate/telegraph.hpp"
#include "bgate/channel.hpp"
#include "bgate/bayes_gate.hpp"
#include "bgate/lsr_gate.hpp"
#include "bgate/conventional.hpp"
#include "bgate/metrics.hpp"
#include "bgate/sweep.hpp"
#include "bgate/validation.hpp"
