#pragma once

#include "warsim/composition.hpp"
#include "warsim/config.hpp"
#include "warsim/exact_solver.hpp"
#include "warsim/fwar.hpp"
#include "warsim/io.hpp"
#include "warsim/pwar.hpp"
#include "warsim/random.hpp"
#include "warsim/runner.hpp"
#include "warsim/standard_war.hpp"
#include "warsim/stats.hpp"
#include "warsim/sticky_walk.hpp"
#include "warsim/verify.hpp"
