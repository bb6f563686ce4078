#pragma once

#include "netsplit/cells.hpp"
#include "netsplit/community.hpp"
#include "netsplit/estimands.hpp"
#include "netsplit/experiments.hpp"
#include "netsplit/inference.hpp"
#include "netsplit/io.hpp"
#include "netsplit/netkind.hpp"
#include "netsplit/network.hpp"
#include "netsplit/result.hpp"
#include "netsplit/rng.hpp"
#include "netsplit/sbm.hpp"
#include "netsplit/split.hpp"
#include "netsplit/svg.hpp"
#include "netsplit/version.hpp"
