#pragma once

// Umbrella header for the netfic workbench.

#include "netfic/builtin.hpp"
#include "netfic/coloring.hpp"
#include "netfic/enumerate.hpp"
#include "netfic/equal.hpp"
#include "netfic/eval.hpp"
#include "netfic/expr.hpp"
#include "netfic/fic.hpp"
#include "netfic/field.hpp"
#include "netfic/json_io.hpp"
#include "netfic/layout.hpp"
#include "netfic/netcomp.hpp"
#include "netfic/reduce.hpp"
#include "netfic/report.hpp"
