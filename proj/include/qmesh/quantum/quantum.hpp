#pragma once

#include "qmesh/quantum/gates.hpp"
#include "qmesh/quantum/measurement.hpp"
#include "qmesh/quantum/outcomes.hpp"
#include "qmesh/quantum/state_vector.hpp"
