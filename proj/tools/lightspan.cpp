// Copyright (c) lightspan contributors.
// SPDX-License-Identifier: Apache-2.0

#include "lightspan/cli.hpp"

int main(int argc, char** argv) { return lightspan::cli::run(argc, argv); }
