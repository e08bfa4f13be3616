#pragma once

#include "hjmad/baselines.hpp"
#include "hjmad/envelope.hpp"
#include "hjmad/experiment.hpp"
#include "hjmad/grid_oracle.hpp"
#include "hjmad/objectives.hpp"
#include "hjmad/quadrature.hpp"
#include "hjmad/rng.hpp"
#include "hjmad/schedule.hpp"
#include "hjmad/solver.hpp"
#include "hjmad/types.hpp"
