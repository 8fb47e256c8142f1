// Copyright (C) 2026 The mrsampler Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli/commands.hpp"

int main(int argc, char** argv) { return mrcli::run_cli(argc, argv); }
