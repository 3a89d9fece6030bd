#pragma once

#include "kirchhoff/analysis.hpp"
#include "kirchhoff/diagnostics.hpp"
#include "kirchhoff/errors.hpp"
#include "kirchhoff/grid.hpp"
#include "kirchhoff/inequality_suite.hpp"
#include "kirchhoff/io.hpp"
#include "kirchhoff/layer.hpp"
#include "kirchhoff/linsolve.hpp"
#include "kirchhoff/operators.hpp"
#include "kirchhoff/problems.hpp"
#include "kirchhoff/scheme.hpp"
