#pragma once

#include "gwnet/analysis.hpp"
#include "gwnet/error.hpp"
#include "gwnet/generators.hpp"
#include "gwnet/gw.hpp"
#include "gwnet/invariants.hpp"
#include "gwnet/io.hpp"
#include "gwnet/lower_bounds.hpp"
#include "gwnet/network.hpp"
#include "gwnet/ot.hpp"
#include "gwnet/parallel.hpp"
