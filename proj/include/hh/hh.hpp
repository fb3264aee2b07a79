#pragma once

// Convenience header pulling in the whole library.

#include "hh/bounds.hpp"
#include "hh/core.hpp"
#include "hh/expr.hpp"
#include "hh/guards.hpp"
#include "hh/jet.hpp"
#include "hh/means.hpp"
#include "hh/oracle.hpp"
#include "hh/quadrature.hpp"
#include "hh/special.hpp"
