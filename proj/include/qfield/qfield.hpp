#pragma once

#include "qfield/derivative.hpp"
#include "qfield/dynamics.hpp"
#include "qfield/error.hpp"
#include "qfield/field_state.hpp"
#include "qfield/grid.hpp"
#include "qfield/invariants.hpp"
#include "qfield/oracle.hpp"
#include "qfield/potential.hpp"
#include "qfield/stationary.hpp"
#include "qfield/transforms.hpp"
