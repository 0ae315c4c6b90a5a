#pragma once

#include "poly.hpp"
#include "model.hpp"
#include "kkt.hpp"
#include "solve.hpp"
#include "sweep.hpp"
#include "topo.hpp"
#include "bounds.hpp"
#include "formula.hpp"
#include "builtin.hpp"
