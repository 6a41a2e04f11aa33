// Copyright (c) lightspan contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "lightspan/certifier.hpp"
#include "lightspan/edge_list.hpp"
#include "lightspan/generators.hpp"
#include "lightspan/graph.hpp"
#include "lightspan/greedy_spanner.hpp"
#include "lightspan/level_partition.hpp"
#include "lightspan/reduction.hpp"
#include "lightspan/verification.hpp"
