// Copyright (c) lightspan contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "lightspan/certifier/base_clusters.hpp"
#include "lightspan/certifier/certify.hpp"
#include "lightspan/certifier/ledger.hpp"
#include "lightspan/certifier/level.hpp"
#include "lightspan/certifier/settle.hpp"
